import pytest

from autoqec import codes, css, gf2
from autoqec.codes import BudgetExceeded, CodeError
from autoqec.gf2 import BitMatrix, Permutation


@pytest.fixture(scope="module")
def rep_square():
    rep = codes.make_code(BitMatrix([[1, 1, 1]]), BitMatrix([[1, 1, 0], [0, 1, 1]]))
    return css.hgp(rep, rep)


@pytest.fixture(scope="module")
def q3():
    return css.hgps(3)


def test_repetition_product_is_13_1(rep_square):
    assert (rep_square.n, rep_square.k) == (13, 1)
    assert rep_square.sector_split == 9
    assert rep_square.sector_map().count("left") == 9


def test_repetition_product_distance_floor(rep_square):
    assert css.verify_min_weight_floor(rep_square, 2)
    assert not css.verify_min_weight_floor(rep_square, 3)  # distance 3
    assert css.verify_min_weight_floor(rep_square, 0)


def test_hgps3_parameters(q3):
    assert (q3.n, q3.k) == (98, 18)
    assert q3.d == 4 and not q3.d_is_verified
    assert q3.k == q3.n - gf2.rank(q3.HX) - gf2.rank(q3.HZ)


def test_hgps3_stabilizer_weights(q3):
    assert q3.HX.max_row_weight() <= 6
    assert q3.HZ.max_row_weight() <= 6


def test_hgps3_distance_floor(q3):
    assert css.verify_min_weight_floor(q3, 3)


def test_hgps4_parameters():
    q4 = css.hgps(4)
    assert (q4.n, q4.k, q4.d) == (450, 32, 8)


def test_hgps5_parameters():
    q5 = css.hgps(5)
    assert (q5.n, q5.k, q5.d) == (1922, 50, 16)


def test_hgps_range():
    with pytest.raises(CodeError):
        css.hgps(2)
    with pytest.raises(CodeError):
        css.hgps(7)


def test_hgp_k_formula_on_random_seeds(rng):
    from conftest import random_full_rank

    for _ in range(10):
        c1 = codes.make_code(random_full_rank(rng, int(rng.integers(1, 4)), int(rng.integers(3, 7))))
        c2 = codes.make_code(random_full_rank(rng, int(rng.integers(1, 4)), int(rng.integers(3, 7))))
        q = css.hgp(c1, c2)
        k1p = c1.H.rows - gf2.rank(c1.H)
        k2p = c2.H.rows - gf2.rank(c2.H)
        assert q.k == c1.k * c2.k + k1p * k2p
        assert q.n == c1.n * c2.n + c1.H.rows * c2.H.rows
        swapped = css.hgp(c2, c1)
        assert (swapped.n, swapped.k) == (q.n, q.k)


def test_canonical_pairing_is_identity(q3):
    assert gf2.mul(q3.GX, q3.GZ.T) == BitMatrix.identity(q3.k)


def test_floor_budget():
    q4 = css.hgps(4)
    with pytest.raises(BudgetExceeded):
        css.verify_min_weight_floor(q4, 3, budget=100)


def test_logical_action_identity(q3):
    act = css.logical_action_of_permutation(q3, Permutation.identity(q3.n))
    assert act is not None
    gx, gz = act
    assert gx == BitMatrix.identity(18) and gz == BitMatrix.identity(18)


def test_logical_action_absent_for_transposition(q3):
    assert css.logical_action_of_permutation(q3, Permutation.from_pairs(q3.n, [(0, 1)])) is None


def test_logical_action_preserves_pairing(q3):
    # cyclic shift on both grid axes of both sectors is an automorphism
    shift = Permutation.cyclic(7)
    sigma = css.sector_permutation(7, shift, shift)
    act = css.logical_action_of_permutation(q3, sigma)
    assert act is not None
    gx, gz = act
    assert gf2.mul(gx, gz.T) == BitMatrix.identity(q3.k)


def test_left_sector_identity_gates():
    s1, s2, h1, h2 = css.left_sector_gadget(3, BitMatrix.identity(3), BitMatrix.identity(3))
    assert s1.is_identity() and s2.is_identity()
    seed = codes.simplex(3)
    assert gf2.mul(h1, seed.H) == seed.H
    assert gf2.inverse(h1) is not None and gf2.inverse(h2) is not None


def test_left_sector_shift_gadget_full_verification(q3):
    seed = codes.simplex(3)
    G, H = seed.G, seed.H
    g1 = Permutation.cyclic(3).matrix()  # logical 3-bit cyclic shift
    g2 = BitMatrix.identity(3)
    s1, s2, h1, h2 = css.left_sector_gadget(3, g1, g2)

    g1i = gf2.inverse(g1)
    assert gf2.permute_cols(G, s1) == gf2.mul(g1i.T, G)
    assert gf2.permute_cols(G, s2) == gf2.mul(g2, G)
    assert gf2.mul(h1, H) == gf2.permute_cols(H, s1)
    h2i = gf2.inverse(h2)
    assert gf2.mul(h2i.T, H) == gf2.permute_cols(H, s2)

    # composite preserves both check rowspaces
    pi_x = gf2.direct_sum(gf2.kron(s1.matrix(), s2.matrix()), gf2.kron(h1, h2))
    pi_z = gf2.direct_sum(
        gf2.kron(s1.matrix(), s2.matrix()), gf2.kron(gf2.inverse(h1).T, h2i.T)
    )
    assert gf2.rowspace_equal(gf2.mul(q3.HX, pi_x), q3.HX)
    assert gf2.rowspace_equal(gf2.mul(q3.HZ, pi_z), q3.HZ)

    # left-sector logical action equals g1 (x) g2 modulo stabilizers and
    # right-sector rows; compare restricted to the left sector
    k_left = 9
    gx_left = BitMatrix(q3.GX.to_array()[:k_left])
    moved = gf2.mul(gx_left, pi_x)
    expect = gf2.mul(gf2.kron(g1, g2), gx_left)
    diff_left = BitMatrix((moved + expect).to_array()[:, : q3.sector_split])
    hx_left = BitMatrix(q3.HX.to_array()[:, : q3.sector_split])
    assert gf2.rowspace_contains(hx_left, diff_left)


def test_left_sector_rejects_singular_gates():
    with pytest.raises(CodeError):
        css.left_sector_gadget(3, BitMatrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), BitMatrix.identity(3))


def test_validate_catches_bad_pairing(q3):
    broken = css.CssCode(
        HX=q3.HX, HZ=q3.HZ, GX=q3.GX, GZ=q3.GX, n=q3.n, k=q3.k
    )
    with pytest.raises(CodeError):
        broken.validate()
