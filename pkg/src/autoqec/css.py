"""CSS codes from hypergraph products, canonical logical bases, distance floors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import gf2
from .codes import BudgetExceeded, CodeError, LinearCode, simplex
from .gf2 import BitMatrix, Permutation


@dataclass
class CssCode:
    """Quantum [[n, k, d]] CSS code with paired canonical logical bases.

    Invariants, checked at construction: HX HZ^T = 0, GX HZ^T = 0,
    GZ HX^T = 0, and GX GZ^T invertible (the canonical construction makes
    it the identity). `sector_split` is the size of the left sector for
    product constructions, else None.
    """

    HX: BitMatrix
    HZ: BitMatrix
    GX: BitMatrix
    GZ: BitMatrix
    n: int
    k: int
    d: int | None = None
    d_is_verified: bool = False  # False: carried over from seed parameters
    sector_split: int | None = None
    product_seeds: tuple[BitMatrix, BitMatrix] | None = None  # (H1, H2) for products

    def params(self) -> tuple[int, int, int | None]:
        return (self.n, self.k, self.d)

    def sector_map(self) -> list[str] | None:
        if self.sector_split is None:
            return None
        return ["left"] * self.sector_split + ["right"] * (self.n - self.sector_split)

    def validate(self) -> None:
        if not gf2.mul(self.HX, self.HZ.T).is_zero():
            raise CodeError("HX HZ^T != 0")
        if not gf2.mul(self.GX, self.HZ.T).is_zero():
            raise CodeError("GX HZ^T != 0")
        if not gf2.mul(self.GZ, self.HX.T).is_zero():
            raise CodeError("GZ HX^T != 0")
        if gf2.inverse(gf2.mul(self.GX, self.GZ.T)) is None:
            raise CodeError("logical pairing GX GZ^T is singular")
        if self.k != self.n - gf2.rank(self.HX) - gf2.rank(self.HZ):
            raise CodeError("k != n - rank(HX) - rank(HZ)")


def _pivot_selector(n: int, pivots: list[int]) -> BitMatrix:
    """P with P G^T = I for a reduced-row-echelon G with these pivots."""
    arr = np.zeros((len(pivots), n), dtype=np.uint8)
    for a, p in enumerate(pivots):
        arr[a, p] = 1
    return BitMatrix(arr)


def _canonical_generator(m: BitMatrix) -> tuple[BitMatrix, BitMatrix]:
    """(G, P) for the code with checks m: G a canonical nullspace basis,
    P its pivot selector with P G^T = I."""
    G = gf2.nullspace_basis(m)
    if G.rows == 0:
        return G, BitMatrix.zeros(0, m.cols)
    # nullspace_basis puts an identity on the free columns of m
    _, piv = gf2.rref(m)
    free = [c for c in range(m.cols) if c not in set(piv)]
    P = _pivot_selector(m.cols, free)
    assert gf2.mul(P, G.T) == BitMatrix.identity(G.rows)
    return G, P


def hgp(c1: LinearCode, c2: LinearCode) -> CssCode:
    """Hypergraph product of two classical codes.

    Checks: HX = [H1 (x) I | I (x) H2^T], HZ = [I (x) H2 | H1^T (x) I].
    Logical bases follow the canonical pivot construction, split by
    sector, with GX GZ^T = I exactly.
    """
    H1, H2 = c1.H, c2.H
    n1, n2 = c1.n, c2.n
    m1, m2 = H1.rows, H2.rows

    HX = gf2.hstack(gf2.kron(H1, BitMatrix.identity(n2)), gf2.kron(BitMatrix.identity(m1), H2.T))
    HZ = gf2.hstack(gf2.kron(BitMatrix.identity(n1), H2), gf2.kron(H1.T, BitMatrix.identity(m2)))

    # primal generators in RREF with their pivot selectors
    G1, piv1 = gf2.rref(c1.G)
    G1 = BitMatrix(G1.to_array()[: len(piv1)])
    P1 = _pivot_selector(n1, piv1)
    G2, piv2 = gf2.rref(c2.G)
    G2 = BitMatrix(G2.to_array()[: len(piv2)])
    P2 = _pivot_selector(n2, piv2)
    # transpose-code generators (checks H^T) and their selectors
    G1p, P1p = _canonical_generator(H1.T)
    G2p, P2p = _canonical_generator(H2.T)

    k1, k2 = G1.rows, G2.rows
    k1p, k2p = G1p.rows, G2p.rows
    n = n1 * n2 + m1 * m2
    k = k1 * k2 + k1p * k2p

    def sector_rows(left: BitMatrix | None, right: BitMatrix | None, count: int) -> BitMatrix:
        larr = left.to_array() if left is not None else np.zeros((count, n1 * n2), dtype=np.uint8)
        rarr = right.to_array() if right is not None else np.zeros((count, m1 * m2), dtype=np.uint8)
        return BitMatrix(np.concatenate([larr, rarr], axis=1))

    gx_left = sector_rows(gf2.kron(P1, G2), None, k1 * k2)
    gx_right = sector_rows(None, gf2.kron(G1p, P2p), k1p * k2p)
    gz_left = sector_rows(gf2.kron(G1, P2), None, k1 * k2)
    gz_right = sector_rows(None, gf2.kron(P1p, G2p), k1p * k2p)
    GX = gf2.vstack(gx_left, gx_right)
    GZ = gf2.vstack(gz_left, gz_right)

    code = CssCode(
        HX=HX, HZ=HZ, GX=GX, GZ=GZ, n=n, k=k,
        sector_split=n1 * n2, product_seeds=(H1, H2),
    )
    code.validate()
    if gf2.mul(GX, GZ.T) != BitMatrix.identity(k):
        raise CodeError("canonical pairing is not the identity")
    return code


def hgps(r: int) -> CssCode:
    """Hypergraph product of two simplex codes with circulant checks.

    Parameters [[2 (2^r-1)^2, 2 r^2, 2^(r-1)]]; the distance is carried
    over from the seed parameters (d_is_verified stays False).
    """
    if not 3 <= r <= 6:
        raise CodeError(f"unsupported product dimension r = {r}")
    seed = simplex(r)
    code = hgp(seed, seed)
    nexp = 2 * ((1 << r) - 1) ** 2
    kexp = 2 * r * r
    if (code.n, code.k) != (nexp, kexp):
        raise CodeError(f"product parameters {(code.n, code.k)} != {(nexp, kexp)}")
    code.d = 1 << (r - 1)
    code.d_is_verified = False
    return code


# -- bounded distance verification --------------------------------------------


def _subset_syndromes(cols: np.ndarray, max_size: int, budget: int):
    """All coordinate subsets of size <= max_size keyed by packed syndrome."""
    n = cols.shape[1]
    total = sum(_ncr(n, s) for s in range(max_size + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} syndrome evaluations exceed budget {budget}")
    packed = np.packbits(cols, axis=0, bitorder="little")
    buckets: dict[bytes, dict[int, list[tuple[int, ...]]]] = {}

    def put(key: bytes, size: int, subset: tuple[int, ...]) -> None:
        buckets.setdefault(key, {}).setdefault(size, []).append(subset)

    zero = np.zeros(packed.shape[0], dtype=np.uint8)
    put(zero.tobytes(), 0, ())
    for j in range(n):
        put(packed[:, j].tobytes(), 1, (j,))
    if max_size >= 2:
        for size in range(2, max_size + 1):
            for subset in combinations(range(n), size):
                s = packed[:, subset[0]].copy()
                for j in subset[1:]:
                    s ^= packed[:, j]
                put(s.tobytes(), size, subset)
    return buckets


def _ncr(n: int, r: int) -> int:
    from math import comb

    return comb(n, r)


def _null_syndrome_supports(check_cols: np.ndarray, wmax: int, budget: int):
    """Nonempty supports of weight <= wmax whose syndrome vanishes."""
    half = (wmax + 1) // 2
    buckets = _subset_syndromes(check_cols, half, budget)
    found: set[frozenset[int]] = set()
    for per_size in buckets.values():
        sizes = sorted(per_size)
        for a in sizes:
            for b in sizes:
                if a > b or a + b > wmax or (a + b) == 0:
                    continue
                for s1 in per_size[a]:
                    set1 = set(s1)
                    for s2 in per_size[b]:
                        if set1 & set(s2):
                            continue
                        supp = frozenset(set1 | set(s2))
                        if supp:
                            found.add(supp)
    return found


def verify_min_weight_floor(code: CssCode, wmax: int, budget: int = 10**8) -> bool:
    """True iff no X- or Z-type error of weight <= wmax is an undetected
    logical operator.

    An X error is undetected when its HZ syndrome vanishes; it is logical
    when it falls outside rowspace(HX) (and symmetrically for Z). Uses a
    meet-in-the-middle enumeration over half-weight supports; raises
    BudgetExceeded past `budget` syndrome evaluations.
    """
    if wmax <= 0:
        return True
    for checks, stabilizer in ((code.HZ, code.HX), (code.HX, code.HZ)):
        cols = checks.to_array()
        supports = _null_syndrome_supports(cols, wmax, budget)
        if not supports:
            continue
        stab_rank = gf2.rank(stabilizer)
        for supp in supports:
            e = np.zeros((1, code.n), dtype=np.uint8)
            e[0, list(supp)] = 1
            if gf2.rank(gf2.vstack(stabilizer, BitMatrix(e))) != stab_rank:
                continue  # a stabilizer, acts trivially
            return False
    return True


# -- permutations acting on CSS codes ------------------------------------------


def logical_action_of_permutation(
    code: CssCode, sigma: Permutation
) -> tuple[BitMatrix, BitMatrix] | None:
    """Induced (gX, gZ) logical actions of a qubit permutation, or None.

    Present iff sigma preserves the rowspaces of both check matrices. The
    returned actions satisfy gX gZ^T = I in the canonical paired basis.
    """
    if sigma.n != code.n:
        raise gf2.DimensionError(f"sigma on {sigma.n} qubits, code has {code.n}")
    hx_p = gf2.permute_cols(code.HX, sigma)
    hz_p = gf2.permute_cols(code.HZ, sigma)
    if not gf2.rowspace_equal(code.HX, hx_p) or not gf2.rowspace_equal(code.HZ, hz_p):
        return None

    def action(G: BitMatrix, H: BitMatrix) -> BitMatrix | None:
        span = gf2.vstack(G, H)
        x = gf2.solve_right(span.T, gf2.permute_cols(G, sigma).T)
        if x is None:
            return None
        return BitMatrix(x.to_array()[: G.rows]).T

    gX = action(code.GX, code.HX)
    gZ = action(code.GZ, code.HZ)
    if gX is None or gZ is None:
        return None
    pairing = gf2.mul(code.GX, code.GZ.T)
    if gf2.mul(gf2.mul(gX, pairing), gZ.T) != pairing:
        raise CodeError("permutation action does not preserve the logical pairing")
    return gX, gZ


def _solve_row_transform(H: BitMatrix, sigma: Permutation) -> BitMatrix:
    """Invertible h with h H = H sigma.

    The pivot solution is unique only modulo the left kernel of H; when
    singular, dependent rows are repaired by adding kernel vectors until
    h is invertible.
    """
    target = gf2.permute_cols(H, sigma)
    ht = gf2.solve_right(H.T, target.T)
    if ht is None:
        raise CodeError("no row transform: sigma does not preserve rowspace(H)")
    h = ht.T.to_array()
    kernel = gf2.nullspace_basis(H.T).to_array()  # rows v with v H = 0
    for _ in range(H.rows + 1):
        bm = BitMatrix(h)
        if gf2.inverse(bm) is not None:
            return bm
        if kernel.size == 0:
            break
        witness = gf2.nullspace_basis(bm.T).to_array()[0]  # u with u h = 0
        rows_in_play = np.nonzero(witness)[0]
        fixed = False
        for i in rows_in_play:
            others = np.delete(h, i, axis=0)
            base = gf2.rank(BitMatrix(others))
            for mask in range(1, 1 << kernel.shape[0]):
                w = np.zeros(H.cols, dtype=np.uint8)
                for b in range(kernel.shape[0]):
                    if (mask >> b) & 1:
                        w ^= kernel[b]
                cand = (h[i] ^ w)[None, :]
                if gf2.rank(BitMatrix(np.concatenate([others, cand]))) > base:
                    h[i] ^= w
                    fixed = True
                    break
            if fixed:
                break
        if not fixed:
            break
    raise CodeError("could not repair row transform to an invertible one")


def left_sector_gadget(
    r: int, g1: BitMatrix, g2: BitMatrix
) -> tuple[Permutation, Permutation, BitMatrix, BitMatrix]:
    """Physical realization of g1 (x) g2 on the left-sector logicals of a
    simplex product code.

    Returns (sigma1, sigma2, h1, h2) with
      g1^{-T} G = G sigma1,  g2 G = G sigma2,
      h1 H = H sigma1,       h2^{-T} H = H sigma2.
    The composite (sigma1 (x) sigma2) (+) (h1 (x) h2) preserves both check
    rowspaces; right-sector logicals are treated as gauge.
    """
    seed = simplex(r)
    G, H = seed.G, seed.H
    for g in (g1, g2):
        if g.shape != (r, r) or gf2.inverse(g) is None:
            raise CodeError("g1, g2 must be invertible r x r")
    from .modkit import find_col_permutation

    g1it = gf2.inverse(g1)
    assert g1it is not None
    sigma1 = find_col_permutation(G, gf2.mul(g1it.T, G))
    sigma2 = find_col_permutation(G, gf2.mul(g2, G))
    if sigma1 is None or sigma2 is None:
        raise CodeError("no column permutation exists for the requested gates")
    h1 = _solve_row_transform(H, sigma1)
    # h2^{-T} solves the same kind of system for sigma2
    y = _solve_row_transform(H, sigma2)
    yi = gf2.inverse(y)
    assert yi is not None
    h2 = yi.T
    return sigma1, sigma2, h1, h2


def sector_permutation(n_side: int, left: Permutation, right: Permutation) -> Permutation:
    """Qubit permutation (left (x) left') (+) (right (x) right') on a
    square product code with n_side^2 qubits per sector grid."""
    image = []
    for p in (left, right):
        base = len(image)
        for a in range(n_side):
            for b in range(n_side):
                image.append(base + p(a) * n_side + p(b))
    return Permutation(tuple(image))
