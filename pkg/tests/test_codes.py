import pytest

from autoqec import codes, gf2
from autoqec.codes import BudgetExceeded, CodeError
from autoqec.gf2 import BitMatrix, Permutation


def exhaustive_min_weight(code: codes.LinearCode) -> int:
    """Self-oracle: direct enumeration over all codewords."""
    words = codes.codewords(code)
    weights = words.sum(axis=1)
    return int(weights[weights > 0].min())


def test_make_code_with_given_checks(hamming523):
    assert hamming523.params()[:2] == (5, 2)
    assert gf2.mul(hamming523.H, hamming523.G.T).is_zero()


def test_make_code_trivial_identity():
    c = codes.make_code(BitMatrix.identity(3))
    assert (c.n, c.k) == (3, 3)
    assert c.H.rows == 0
    assert codes.distance_bruteforce(c) == 1


def test_make_code_rejects_bad_pairs(hamming523):
    with pytest.raises(CodeError):
        codes.make_code(hamming523.G, BitMatrix([[1, 1, 1, 1, 1]]))
    with pytest.raises(CodeError):
        codes.make_code(BitMatrix([[1, 0], [1, 0]]))


def test_modified_basis_is_6_2_4():
    g_mod = BitMatrix([[1, 0, 1, 1, 0, 1], [0, 1, 0, 1, 1, 1]])
    c = codes.make_code(g_mod)
    assert (c.n, c.k) == (6, 2)
    assert codes.distance_bruteforce(c) == 4


def test_distance_examples(hamming523):
    assert codes.distance_bruteforce(hamming523) == 3
    rep = codes.make_code(BitMatrix([[1, 1, 1]]))
    assert codes.distance_bruteforce(rep) == 3
    assert codes.distance_bruteforce(codes.simplex(4)) == 8


def test_distance_budget():
    big = codes.make_code(BitMatrix.identity(10))
    with pytest.raises(BudgetExceeded):
        codes.distance_bruteforce(big, max_n=8)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_simplex_parameters(r):
    s = codes.simplex(r)
    assert (s.n, s.k) == ((1 << r) - 1, r)
    assert codes.distance_bruteforce(s) == 1 << (r - 1)
    arr = s.G.to_array()
    assert len({arr[:, j].tobytes() for j in range(s.n)}) == s.n
    assert gf2.mul(s.H, s.G.T).is_zero()


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_simplex_circulant_checks(r):
    s = codes.simplex(r)
    assert s.H == codes.circulant(s.n, codes.SIMPLEX_CHECK_EXPONENTS[r])
    assert gf2.rank(s.H) == s.n - r


def test_simplex_out_of_range():
    with pytest.raises(CodeError):
        codes.simplex(1)
    with pytest.raises(CodeError):
        codes.simplex(9)


def test_simplex_nullspace_fallback():
    s = codes.simplex(2)
    assert (s.n, s.k) == (3, 2)
    assert codes.distance_bruteforce(s) == 2


def test_circulant_examples():
    assert codes.circulant(7, [0]) == BitMatrix.identity(7)
    h3 = codes.circulant(7, [0, 1, 3])
    assert h3.to_array()[0].tolist() == [1, 1, 0, 1, 0, 0, 0]
    h15 = codes.circulant(15, [0, 1, 4])
    assert all(w == 3 for w in h15.row_weights())
    with pytest.raises(CodeError):
        codes.circulant(7, [7])


def test_puncture_nothing(hamming523):
    same = codes.puncture(hamming523, [])
    assert (same.n, same.k) == (5, 2)
    assert same.G == hamming523.G


def test_puncture_appended_column_back_to_5_2_3():
    g_mod = BitMatrix([[1, 0, 1, 1, 0, 1], [0, 1, 0, 1, 1, 1]])
    c = codes.make_code(g_mod)
    back = codes.puncture(c, {5})
    assert (back.n, back.k) == (5, 2)
    assert codes.distance_bruteforce(back) == 3


def test_puncture_duplicate_copy_halves_distance(hamming523):
    doubled = codes.make_code(gf2.hstack(hamming523.G, hamming523.G))
    assert codes.distance_bruteforce(doubled) == 6
    back = codes.puncture(doubled, set(range(5, 10)))
    assert (back.n, back.k) == (5, 2)
    assert codes.distance_bruteforce(back) == 3
    assert back.k == doubled.k  # duplicated-column puncture keeps k


def test_puncture_rank_drop_rejected():
    c = codes.make_code(BitMatrix([[1, 0, 0], [0, 1, 1]]))
    with pytest.raises(CodeError):
        codes.puncture(c, {0})


def test_distance_matches_exhaustive_oracle(rng):
    from conftest import random_full_rank

    for _ in range(10):
        g = random_full_rank(rng, int(rng.integers(1, 4)), int(rng.integers(4, 9)))
        c = codes.make_code(g)
        assert codes.distance_bruteforce(c) == exhaustive_min_weight(c)


def test_column_multiplicity_tracking(hamming523):
    mult = sorted(hamming523.column_multiplicity.values())
    assert mult == [1, 2, 2]  # [1,1] once, [1,0] and [0,1] twice


def test_cyclic_shift_is_simplex_automorphism():
    from autoqec.autogroup import check_automorphism

    for r in (3, 4, 5, 6):
        s = codes.simplex(r)
        gadget = check_automorphism(s, Permutation.cyclic(s.n))
        assert gadget is not None and gadget.rho is not None
