"""Classical binary linear codes: parameters, Simplex family, distance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .gf2 import BitMatrix


class CodeError(ValueError):
    """Inconsistent or unsupported code data."""


class BudgetExceeded(RuntimeError):
    """An enumeration exceeded its configured budget."""


# circulant check exponents for the simplex codes, by dimension r
SIMPLEX_CHECK_EXPONENTS = {3: (0, 1, 3), 4: (0, 1, 4), 5: (0, 2, 5), 6: (0, 1, 6)}


@dataclass
class LinearCode:
    """[n, k, d] binary linear code given by a (G, H) pair.

    H rows may be redundant (row count above n - k); only rank(H) = n - k
    is required. `column_multiplicity` counts duplicate generator columns
    for modification bookkeeping.
    """

    G: BitMatrix
    H: BitMatrix
    n: int
    k: int
    _d: int | None = None
    column_multiplicity: dict[bytes, int] = field(default_factory=dict)
    seed: "ExpansionRecord | None" = None

    @property
    def d(self) -> int | None:
        return self._d

    def params(self) -> tuple[int, int, int | None]:
        return (self.n, self.k, self._d)

    def with_distance(self, d: int) -> "LinearCode":
        self._d = d
        return self


@dataclass(frozen=True)
class ExpansionRecord:
    """Provenance of a code produced by automorphism completion."""

    seed_G: BitMatrix
    seed_H: BitMatrix
    gates: tuple[BitMatrix, ...]


def _column_multiplicity(G: BitMatrix) -> dict[bytes, int]:
    mult: dict[bytes, int] = {}
    arr = G.to_array()
    for j in range(G.cols):
        key = arr[:, j].tobytes()
        mult[key] = mult.get(key, 0) + 1
    return mult


def make_code(G: BitMatrix, H: BitMatrix | None = None) -> LinearCode:
    """Build a code from G, deriving H by nullspace when absent.

    When H is supplied it is validated: H G^T = 0, rank(G) = row count of
    a basis, rank(H) = n - k.
    """
    n = G.cols
    k = gf2.rank(G)
    if k != G.rows:
        raise CodeError(f"G has {G.rows} rows but rank {k}; supply a basis")
    if H is None:
        H = gf2.nullspace_basis(G)
    else:
        if H.cols != n:
            raise CodeError(f"H width {H.cols} != n {n}")
        if not gf2.mul(H, G.T).is_zero():
            raise CodeError("H G^T != 0")
        if gf2.rank(H) != n - k:
            raise CodeError(f"rank(H) = {gf2.rank(H)} != n - k = {n - k}")
    return LinearCode(G=G, H=H, n=n, k=k, column_multiplicity=_column_multiplicity(G))


def codewords(c: LinearCode) -> np.ndarray:
    """All 2^k codewords as a (2^k, n) uint8 array (message-index order)."""
    garr = c.G.to_array()
    out = np.zeros((1, c.n), dtype=np.uint8)
    for i in range(c.k):
        out = np.concatenate([out, out ^ garr[i]], axis=0)
    return out


def distance_bruteforce(c: LinearCode, max_n: int = 24) -> int:
    """Exact minimum nonzero codeword weight by enumeration of 2^k words."""
    if c.k > max_n:
        raise BudgetExceeded(f"k = {c.k} exceeds enumeration budget {max_n}")
    if c.k == 0:
        raise CodeError("zero-dimensional code has no nonzero codeword")
    garr = c.G.to_array().astype(np.int64)
    best = c.n + 1
    chunk = 1 << min(c.k, 16)
    for base in range(0, 1 << c.k, chunk):
        idx = np.arange(base, base + chunk, dtype=np.int64)
        msgs = ((idx[:, None] >> np.arange(c.k)[None, :]) & 1).astype(np.int64)
        w = ((msgs @ garr) & 1).sum(axis=1)
        if base == 0:
            w[0] = c.n + 1  # skip the zero word
        best = min(best, int(w.min()))
    c._d = best
    return best


def circulant(n: int, exponents: list[int] | tuple[int, ...]) -> BitMatrix:
    """Sum of powers of the n-cyclic shift: row i has ones at i + e (mod n)."""
    if any(e >= n or e < 0 for e in exponents):
        raise CodeError("exponents must lie in [0, n)")
    arr = np.zeros((n, n), dtype=np.uint8)
    for e in set(exponents):
        for i in range(n):
            arr[i, (i + e) % n] ^= 1
    return BitMatrix(arr)


def simplex(r: int) -> LinearCode:
    """[2^r - 1, r, 2^(r-1)] simplex code.

    The generator columns are the 2^r - 1 distinct nonzero r-bit vectors.
    For r in {3..6} a weight-3 circulant check matrix exists (n redundant
    rows, rank n - r) and the columns are ordered as successive powers of
    the field generator of its feedback polynomial, which makes the
    cyclic coordinate shift a code automorphism and keeps H G^T = 0.
    Binary counting order is incompatible with the circulant checks, so
    it is used only for the other r, where H is a nullspace basis.
    Row b of G holds the coefficient of x^b; column 0 is always the
    vector 1.
    """
    if not 2 <= r <= 8:
        raise CodeError(f"unsupported simplex dimension r = {r}")
    n = (1 << r) - 1
    garr = np.zeros((r, n), dtype=np.uint8)
    if r in SIMPLEX_CHECK_EXPONENTS:
        poly = sum(1 << e for e in SIMPLEX_CHECK_EXPONENTS[r])
        val = 1
        for j in range(n):
            for b in range(r):
                garr[b, j] = (val >> b) & 1
            val <<= 1
            if (val >> r) & 1:
                val ^= poly
        G = BitMatrix(garr)
        code = make_code(G, circulant(n, SIMPLEX_CHECK_EXPONENTS[r]))
    else:
        for j in range(n):
            for b in range(r):
                garr[b, j] = ((j + 1) >> b) & 1
        code = make_code(BitMatrix(garr))
    code._d = 1 << (r - 1)
    return code


def puncture(c: LinearCode, cols: set[int] | list[int]) -> LinearCode:
    """Delete the given coordinates; the shortened G must keep rank k."""
    drop = set(cols)
    if any(j < 0 or j >= c.n for j in drop):
        raise CodeError("puncture column out of range")
    keep = [j for j in range(c.n) if j not in drop]
    G2 = BitMatrix(c.G.to_array()[:, keep])
    if gf2.rank(G2) != c.k:
        raise CodeError("puncturing drops generator rank")
    return make_code(G2)
