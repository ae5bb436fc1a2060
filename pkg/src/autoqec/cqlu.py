"""Instruction-set gadgets on simplex product codes.

Dirty cyclic shifts (cyclic logical permutation with fan-out taps from
the circulant check symmetry), the square-fold permutation realizing an
order-2 logical CNOT circuit, and linear-level verification of fan-out
sequences built from its lifts.
"""

from __future__ import annotations

import numpy as np

from . import css, gf2
from .autogroup import AutomorphismGadget, check_automorphism
from .codes import SIMPLEX_CHECK_EXPONENTS, CodeError, LinearCode, make_code, simplex
from .gf2 import BitMatrix, Permutation

# order-2 logical CNOT circuit enacted by the square fold on the simplex-4
# code: CNOTs 0->1, 0->2, 0->3 conjugated by the 1<->(0+1+2+3) swap
G_AUTO = BitMatrix([[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]])

# basis change with h g_swap h^-1 = G_AUTO (verified in tests); the swap
# here is the pairwise exchange (0 1)(2 3) on the fold basis
AUTOCNOT_BASIS_CHANGE = BitMatrix([[1, 1, 0, 0], [0, 1, 0, 0], [1, 0, 1, 1], [0, 0, 0, 1]])

G_SWAP = BitMatrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def _sorted_codewords(code: LinearCode) -> list[np.ndarray]:
    """Nonzero codewords by (weight, lexicographic) order."""
    from .codes import codewords

    words = codewords(code)
    nz = [w for w in words if w.any()]
    nz.sort(key=lambda w: (int(w.sum()), w.tobytes()))
    return nz


def dirty_shift_basis(r: int, seed_word: np.ndarray | None = None) -> tuple[BitMatrix, BitMatrix]:
    """Basis realizing the cyclic coordinate shift as a companion-form gate.

    Rows of the returned G_B are the shift orbit of one codeword; the
    logical action g_ds of the cyclic shift then permutes the basis rows
    cyclically, with the wrap-around row given by the feedback taps of
    the circulant check polynomial. Returns (G_B, g_ds).
    """
    if r not in SIMPLEX_CHECK_EXPONENTS:
        raise CodeError(f"circulant checks only known for r in {sorted(SIMPLEX_CHECK_EXPONENTS)}")
    code = simplex(r)
    n = code.n
    shift = Permutation.cyclic(n)

    def orbit_rows(c: np.ndarray) -> BitMatrix:
        rows = [c]
        for _ in range(r - 1):
            rows.append(gf2.permute_cols(BitMatrix(rows[-1][None, :]), shift).to_array()[0])
        return BitMatrix(np.stack(rows))

    if seed_word is not None:
        cand = np.asarray(seed_word, dtype=np.uint8) & 1
        if gf2.solve_right(code.G.T, BitMatrix(cand[None, :]).T) is None:
            raise CodeError("seed word is not a codeword")
        candidates = [cand]
    else:
        candidates = _sorted_codewords(code)
    for c in candidates:
        G_B = orbit_rows(c)
        if gf2.rank(G_B) == r:
            basis_code = make_code(G_B, code.H)
            gadget = check_automorphism(basis_code, shift)
            if gadget is None:
                raise RuntimeError("cyclic shift failed certification on shift-orbit basis")
            _assert_companion(gadget.g, r)
            return G_B, gadget.g
    raise RuntimeError("no spanning shift orbit found")  # impossible for simplex seeds


def _assert_companion(g: BitMatrix, r: int) -> None:
    arr = g.to_array()
    expect = np.zeros((r - 1, r), dtype=np.uint8)
    expect[np.arange(r - 1), np.arange(1, r)] = 1
    if not np.array_equal(arr[: r - 1], expect):
        raise RuntimeError("dirty-shift gate is not in companion form")


def dirty_shift_taps(r: int) -> BitMatrix:
    """Expected wrap-around row of the dirty-shift gate: the last row of
    g_ds satisfies g^r = g^(r-e) + I for check polynomial 1 + x^e + x^r."""
    _, g = dirty_shift_basis(r)
    return BitMatrix(g.to_array()[r - 1 :])


def tau_square(i: int, side: int = 4) -> int:
    """Transpose index map on a side x side square: side*a + b -> side*b + a."""
    a, b = divmod(i, side)
    return side * b + a


def auto_permutation(r: int = 4) -> Permutation:
    """Square-fold permutation on the 15 nonzero indices of a 4x4 grid.

    Index j (0-based) stands for grid cell j + 1; the fold transposes the
    grid and fixes the removed zero cell. An involution.
    """
    if r != 4:
        raise CodeError("the square fold is specific to r = 4")
    return Permutation(tuple(tau_square(j + 1) - 1 for j in range(15)))


def certify_autocnot(h_conj: BitMatrix) -> AutomorphismGadget:
    """Certify the square fold on a basis conjugated from the fold-pair basis.

    Builds a basis {c1, c1 P, c2, c2 P} on which the fold acts as the
    pairwise swap, applies the supplied basis change, and certifies the
    fold; the logical action is h g_swap h^-1. With the default basis
    change the action is exactly G_AUTO.
    """
    if h_conj.shape != (4, 4) or gf2.inverse(h_conj) is None:
        raise CodeError("supplied basis change is not invertible 4x4")
    code = simplex(4)
    fold = auto_permutation()

    c1 = None
    g_swap_basis = None
    for cand in _sorted_codewords(code):
        c1p = gf2.permute_cols(BitMatrix(cand[None, :]), fold).to_array()[0]
        if np.array_equal(c1p, cand):
            continue
        if c1 is None:
            c1, c1_img = cand, c1p
            continue
        rows = np.stack([c1, c1_img, cand, c1p])
        if gf2.rank(BitMatrix(rows)) == 4:
            g_swap_basis = BitMatrix(rows)
            break
    if g_swap_basis is None:
        raise RuntimeError("no fold-pair basis found")

    # sanity: the fold acts on this basis as the pairwise swap
    swap_code = make_code(g_swap_basis, code.H)
    base_gadget = check_automorphism(swap_code, fold)
    assert base_gadget is not None and base_gadget.g == G_SWAP

    basis = gf2.mul(h_conj, g_swap_basis)
    gadget = check_automorphism(make_code(basis, code.H), fold)
    if gadget is None:
        raise RuntimeError("fold failed certification on conjugated basis")
    hi = gf2.inverse(h_conj)
    assert hi is not None
    assert gadget.g == gf2.mul(gf2.mul(h_conj, G_SWAP), hi)
    return gadget


# -- lifts to the product code -------------------------------------------------

FANOUT_SYMBOLS = ("row", "col", "both")


def fanout_symbol_matrix(symbol: str) -> BitMatrix:
    """16 x 16 linear lift of the fold gate family on a 4 x 4 logical grid."""
    eye = BitMatrix.identity(4)
    if symbol == "row":
        return gf2.kron(G_AUTO, eye)
    if symbol == "col":
        return gf2.kron(eye, G_AUTO)
    if symbol == "both":
        return gf2.kron(G_AUTO, G_AUTO)
    raise CodeError(f"unknown fan-out symbol {symbol!r}")


def verify_fanout_sequence(sequence: list[str]) -> BitMatrix | None:
    """Product of fold lifts, returned iff it fans qubit 0 out to all 16.

    The sequence applies left to right; the check is linear (phase-free
    CNOT circuits are GL(16, 2) elements): the product must map e_0 to
    the all-ones vector.
    """
    m = BitMatrix.identity(16)
    for symbol in sequence:
        m = gf2.mul(fanout_symbol_matrix(symbol), m)
    e0 = np.zeros((16, 1), dtype=np.uint8)
    e0[0] = 1
    out = gf2.mul(m, BitMatrix(e0))
    if np.array_equal(out.to_array(), np.ones((16, 1), dtype=np.uint8)):
        return m
    return None


def find_fanout_sequence(max_len: int = 4) -> list[str] | None:
    """Shortest fold-lift sequence preparing the full fan-out, by search."""
    from itertools import product

    for length in range(max_len + 1):
        for seq in product(FANOUT_SYMBOLS, repeat=length):
            if verify_fanout_sequence(list(seq)) is not None:
                return list(seq)
    return None


def hgps_fold_permutation(axis: str = "both") -> Permutation:
    """Qubit permutation on the r=4 product code lifting the square fold.

    axis 'row' folds the first grid factor, 'col' the second, 'both' both;
    the right (check) sector folds identically since the fold commutes
    with the circulant checks.
    """
    p = auto_permutation()
    ident = Permutation.identity(15)
    first, second = {
        "row": (p, ident),
        "col": (ident, p),
        "both": (p, p),
    }[axis]
    image = []
    for _sector in range(2):
        base = len(image)
        for a in range(15):
            for b in range(15):
                image.append(base + first(a) * 15 + second(b))
    return Permutation(tuple(image))


def isa_report(r: int) -> dict:
    """Certification report for the gadget family at dimension r (JSON-ready)."""
    G_B, g_ds = dirty_shift_basis(r)
    code = simplex(r)
    shift_gadget = check_automorphism(make_code(G_B, code.H), Permutation.cyclic(code.n))
    assert shift_gadget is not None
    report = {
        "r": r,
        "dirty_shift": {
            "basis": G_B.to_text(),
            "gate": g_ds.to_text(),
            "order": gate_order(g_ds),
            "is_matrix_automorphism": shift_gadget.rho is not None,
        },
    }
    if r == 4:
        fold_gadget = certify_autocnot(AUTOCNOT_BASIS_CHANGE)
        lifted = {}
        q4 = css.hgps(4)
        for axis in FANOUT_SYMBOLS:
            action = css.logical_action_of_permutation(q4, hgps_fold_permutation(axis))
            lifted[axis] = action is not None
        report["fold_cnot"] = {
            "sigma_cycles": fold_gadget.sigma.cycle_notation(),
            "gate": fold_gadget.g.to_text(),
            "is_matrix_automorphism": fold_gadget.rho is not None,
            "involution": gf2.mul(fold_gadget.g, fold_gadget.g) == BitMatrix.identity(4),
            "product_lift_preserves_checks": lifted,
        }
    return report


def gate_order(g: BitMatrix) -> int:
    eye = BitMatrix.identity(g.rows)
    p = g
    k = 1
    while p != eye:
        p = gf2.mul(p, g)
        k += 1
        if k > 1 << g.rows:
            raise RuntimeError("gate order overflow")
    return k
