import numpy as np
import pytest

from autoqec import autogroup, codes, cqlu, css, gf2
from autoqec.codes import SIMPLEX_CHECK_EXPONENTS, CodeError
from autoqec.gf2 import BitMatrix, Permutation


def matrix_power(m: BitMatrix, j: int) -> BitMatrix:
    out = BitMatrix.identity(m.rows)
    for _ in range(j):
        out = gf2.mul(out, m)
    return out


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_dirty_shift_companion_and_order(r):
    G_B, g = cqlu.dirty_shift_basis(r)
    assert G_B.shape == (r, (1 << r) - 1)
    arr = g.to_array()
    expect = np.zeros((r - 1, r), dtype=np.uint8)
    expect[np.arange(r - 1), np.arange(1, r)] = 1
    assert np.array_equal(arr[: r - 1], expect)  # companion form
    assert cqlu.gate_order(g) == (1 << r) - 1


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_dirty_shift_taps_match_check_recurrence(r):
    # oracle: the circulant 1 + x^e + x^r forces g^r = g^(r-e) + I
    _, g = cqlu.dirty_shift_basis(r)
    e = SIMPLEX_CHECK_EXPONENTS[r][1]
    assert matrix_power(g, r) == matrix_power(g, r - e) + BitMatrix.identity(r)


def test_dirty_shift_register_orbit():
    # companion action: r applications of g to e_0 walk the register taps
    _, g = cqlu.dirty_shift_basis(4)
    e0 = BitMatrix([[1], [0], [0], [0]])
    seen = {e0.to_array().tobytes()}
    cur = e0
    for _ in range(14):
        cur = gf2.mul(g.T, cur)
        seen.add(cur.to_array().tobytes())
    assert len(seen) == 15  # full nonzero orbit: primitive recurrence


def test_dirty_shift_seed_word_roundtrip():
    G_B, _ = cqlu.dirty_shift_basis(3)
    again, g = cqlu.dirty_shift_basis(3, seed_word=G_B.to_array()[0])
    assert again == G_B
    with pytest.raises(CodeError):
        cqlu.dirty_shift_basis(3, seed_word=np.array([1, 0, 0, 0, 0, 0, 0], dtype=np.uint8))


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_dirty_shift_certifies_through_autogroup(r):
    G_B, g = cqlu.dirty_shift_basis(r)
    code = codes.make_code(G_B, codes.simplex(r).H)
    gadget = autogroup.check_automorphism(code, Permutation.cyclic(code.n))
    assert gadget is not None and gadget.g == g and gadget.rho is not None


def test_fold_permutation_fixed_points_and_involution():
    p = cqlu.auto_permutation()
    assert [j for j in range(15) if p(j) == j] == [4, 9, 14]
    assert p.compose(p).is_identity()
    with pytest.raises(CodeError):
        cqlu.auto_permutation(5)


def test_fold_conjugates_shift_to_fourth_power():
    p_auto = cqlu.auto_permutation().matrix()
    p15 = Permutation.cyclic(15).matrix()
    lhs = gf2.mul(gf2.mul(p_auto, p15), p_auto)
    assert lhs == matrix_power(p15, 4)  # bit-exact


def test_fold_commutes_with_circulant_checks():
    h4 = codes.circulant(15, SIMPLEX_CHECK_EXPONENTS[4])
    p_auto = cqlu.auto_permutation().matrix()
    assert gf2.mul(h4, p_auto) == gf2.mul(p_auto, h4)
    # and it is not the identity transformation of H4
    assert gf2.mul(h4, p_auto) != h4


def test_certify_autocnot_default_basis_change():
    gadget = cqlu.certify_autocnot(cqlu.AUTOCNOT_BASIS_CHANGE)
    assert gadget.g == cqlu.G_AUTO
    assert gf2.mul(gadget.g, gadget.g) == BitMatrix.identity(4)
    assert gadget.rho is not None
    assert gadget.rho.compose(gadget.rho).is_identity()


def test_certify_autocnot_identity_gives_pairwise_swap():
    gadget = cqlu.certify_autocnot(BitMatrix.identity(4))
    assert gadget.g == cqlu.G_SWAP


def test_certify_autocnot_rejects_singular():
    with pytest.raises(CodeError):
        cqlu.certify_autocnot(BitMatrix([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))


def test_default_basis_change_is_a_conjugator():
    h = cqlu.AUTOCNOT_BASIS_CHANGE
    hi = gf2.inverse(h)
    assert gf2.mul(gf2.mul(h, cqlu.G_SWAP), hi) == cqlu.G_AUTO


def test_fanout_sequence_verification():
    assert cqlu.verify_fanout_sequence([]) is None
    seq = cqlu.find_fanout_sequence(max_len=4)
    assert seq is not None and len(seq) <= 4
    m = cqlu.verify_fanout_sequence(seq)
    assert m is not None
    # a sequence followed by itself squares away (all symbols commute and
    # are involutions), leaving e0 fixed rather than fanned out
    assert cqlu.verify_fanout_sequence(seq + list(reversed(seq))) is None


def test_fanout_symbols_are_involutions():
    for symbol in cqlu.FANOUT_SYMBOLS:
        m = cqlu.fanout_symbol_matrix(symbol)
        assert gf2.mul(m, m) == BitMatrix.identity(16)


@pytest.mark.parametrize("axis", ["row", "col", "both"])
def test_fold_lift_preserves_product_checks(axis):
    q4 = css.hgps(4)
    sigma = cqlu.hgps_fold_permutation(axis)
    act = css.logical_action_of_permutation(q4, sigma)
    assert act is not None
    gx, gz = act
    assert gf2.mul(gx, gx) == BitMatrix.identity(q4.k)
    assert gf2.mul(gx, gz.T) == BitMatrix.identity(q4.k)


def test_fold_lift_stabilizer_permutations():
    # the check matrices transform by row permutations under the lift
    q4 = css.hgps(4)
    sigma = cqlu.hgps_fold_permutation("both")
    for H in (q4.HX, q4.HZ):
        rho = gf2.find_row_permutation(H, gf2.permute_cols(H, sigma))
        assert rho is not None


def test_isa_report_r3_and_r4():
    rep3 = cqlu.isa_report(3)
    assert rep3["dirty_shift"]["order"] == 7
    assert rep3["dirty_shift"]["is_matrix_automorphism"]
    rep4 = cqlu.isa_report(4)
    assert rep4["fold_cnot"]["involution"]
    assert all(rep4["fold_cnot"]["product_lift_preserves_checks"].values())
