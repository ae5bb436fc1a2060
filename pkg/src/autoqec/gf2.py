"""Dense bit-packed linear algebra over GF(2).

Matrices are stored row-major as 64-bit words. All values are immutable
after construction; every operation returns a fresh matrix, so concurrent
use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_WORD = 64


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def _pack(arr: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 uint8 array into (rows, nwords) uint64."""
    rows, cols = arr.shape
    nwords = max(1, (cols + _WORD - 1) // _WORD)
    nbytes = nwords * 8
    packed = np.packbits(arr, axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        packed = np.pad(packed, ((0, 0), (0, nbytes - packed.shape[1])))
    return np.ascontiguousarray(packed).view(np.uint64)


class BitMatrix:
    """Immutable binary matrix with bit-packed rows."""

    __slots__ = ("rows", "cols", "_words")

    def __init__(self, data: Sequence[Sequence[int]] | np.ndarray):
        arr = np.asarray(data, dtype=np.uint8)
        if arr.ndim != 2:
            raise DimensionError(f"expected 2-D data, got shape {arr.shape}")
        arr = arr & 1
        self.rows, self.cols = arr.shape
        self._words = _pack(arr)
        self._words.flags.writeable = False

    @classmethod
    def _from_words(cls, rows: int, cols: int, words: np.ndarray) -> "BitMatrix":
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        nwords = max(1, (cols + _WORD - 1) // _WORD)
        w = np.ascontiguousarray(words[:, :nwords], dtype=np.uint64).copy()
        # mask stray bits beyond the last column
        rem = cols % _WORD
        if cols and rem:
            w[:, -1] &= np.uint64((1 << rem) - 1)
        w.flags.writeable = False
        m._words = w
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    def to_array(self) -> np.ndarray:
        """Return a (rows, cols) uint8 copy with 0/1 entries."""
        if self.cols == 0:
            return np.zeros((self.rows, 0), dtype=np.uint8)
        bytes_view = self._words.view(np.uint8)
        bits = np.unpackbits(bytes_view, axis=1, bitorder="little")
        return np.ascontiguousarray(bits[:, : self.cols])

    # -- element / shape helpers ------------------------------------------

    def get(self, i: int, j: int) -> int:
        w, b = divmod(j, _WORD)
        return int((self._words[i, w] >> np.uint64(b)) & np.uint64(1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self._words, other._words)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def to_text(self) -> str:
        """Render as '0'/'1' characters, one row per line."""
        arr = self.to_array()
        return "\n".join("".join("01"[v] for v in row) for row in arr)

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        """Parse the row-per-line '0'/'1' format; '#' lines are comments."""
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if set(line) - {"0", "1"}:
                raise ValueError(f"bad matrix row: {line!r}")
            rows.append([int(c) for c in line])
        if not rows:
            return cls.zeros(0, 0)
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix rows")
        return cls(rows)

    # -- weights -----------------------------------------------------------

    def row_weights(self) -> np.ndarray:
        return self.to_array().sum(axis=1)

    def col_weights(self) -> np.ndarray:
        return self.to_array().sum(axis=0)

    def max_row_weight(self) -> int:
        return int(self.row_weights().max(initial=0))

    def max_col_weight(self) -> int:
        return int(self.col_weights().max(initial=0))

    def nnz(self) -> int:
        return int(self.to_array().sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"add: {self.shape} vs {other.shape}")
        return BitMatrix._from_words(self.rows, self.cols, self._words ^ other._words)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.to_array().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise DimensionError(f"mul: {a.shape} x {b.shape}")
    out = np.zeros((a.rows, b._words.shape[1]), dtype=np.uint64)
    arows = a.to_array()
    bw = b._words
    for i in range(a.rows):
        idx = np.nonzero(arows[i])[0]
        if idx.size:
            out[i] = np.bitwise_xor.reduce(bw[idx], axis=0)
    return BitMatrix._from_words(a.rows, b.cols, out)


def hstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.rows != b.rows:
        raise DimensionError(f"hstack: {a.shape} vs {b.shape}")
    return BitMatrix(np.concatenate([a.to_array(), b.to_array()], axis=1))


def vstack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.cols:
        raise DimensionError(f"vstack: {a.shape} vs {b.shape}")
    return BitMatrix(np.concatenate([a.to_array(), b.to_array()], axis=0))


def stack_rows(mats: Iterable[BitMatrix]) -> BitMatrix:
    mats = list(mats)
    widths = {m.cols for m in mats}
    if len(widths) > 1:
        raise DimensionError("stack_rows: mismatched widths")
    return BitMatrix(np.concatenate([m.to_array() for m in mats], axis=0))


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix(np.kron(a.to_array(), b.to_array()))


def direct_sum(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.uint8)
    out[: a.rows, : a.cols] = a.to_array()
    out[a.rows:, a.cols:] = b.to_array()
    return BitMatrix(out)


# -- elimination -------------------------------------------------------------


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row-echelon form with leftmost pivot choice.

    Returns (R, pivot_columns) with pivot columns strictly increasing.
    """
    a = m._words.copy()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r >= m.rows:
            break
        w, bshift = divmod(c, _WORD)
        bit = np.uint64(bshift)
        col = (a[r:, w] >> bit) & np.uint64(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        mask = ((a[:, w] >> bit) & np.uint64(1)).astype(bool)
        mask[r] = False
        if mask.any():
            a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return BitMatrix._from_words(m.rows, m.cols, a), pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    return len(rref(m)[1])


def row_basis(m: BitMatrix) -> BitMatrix:
    """Basis of the rowspace: the nonzero rows of rref(m)."""
    r, pivots = rref(m)
    return BitMatrix(r.to_array()[: len(pivots)])


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Rows form a basis of {x : m x^T = 0}; (cols - rank) rows."""
    r, pivots = rref(m)
    rarr = r.to_array()
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, p in enumerate(pivots):
            basis[row, p] = rarr[i, f]
    return BitMatrix(basis)


def solve_right(a: BitMatrix, b: BitMatrix) -> BitMatrix | None:
    """Solve A X = B over GF(2); None when inconsistent.

    Free variables are set to zero (pivot solution), so the result is
    deterministic.
    """
    if a.rows != b.rows:
        raise DimensionError(f"solve_right: {a.shape} vs {b.shape}")
    aug, pivots = rref(hstack(a, b))
    if pivots and pivots[-1] >= a.cols:
        return None
    augarr = aug.to_array()
    x = np.zeros((a.cols, b.cols), dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = augarr[i, a.cols:]
    return BitMatrix(x)


def inverse(m: BitMatrix) -> BitMatrix | None:
    """Inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise DimensionError("inverse: matrix not square")
    x = solve_right(m, BitMatrix.identity(m.rows))
    if x is None or not np.array_equal(mul(m, x).to_array(), np.eye(m.rows, dtype=np.uint8)):
        return None
    return x


def rowspace_contains(m: BitMatrix, vectors: BitMatrix) -> bool:
    """True iff every row of `vectors` lies in rowspace(m)."""
    base = rank(m)
    return rank(vstack(m, vectors)) == base


def rowspace_equal(a: BitMatrix, b: BitMatrix) -> bool:
    ra = rank(a)
    if ra != rank(b):
        return False
    return rank(vstack(a, b)) == ra


# -- permutations -------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..n-1}; as a matrix, M[i, p(i)] = 1."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.image)
        if sorted(self.image) != list(range(n)):
            raise ValueError("not a bijection")

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_pairs(cls, n: int, swaps: Iterable[tuple[int, int]]) -> "Permutation":
        img = list(range(n))
        for i, j in swaps:
            img[i], img[j] = img[j], img[i]
        return cls(tuple(img))

    @classmethod
    def cyclic(cls, n: int, shift: int = 1) -> "Permutation":
        return cls(tuple((i + shift) % n for i in range(n)))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def matrix(self) -> BitMatrix:
        arr = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in enumerate(self.image):
            arr[i, j] = 1
        return BitMatrix(arr)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """Apply `self` first, then `other`."""
        if self.n != other.n:
            raise DimensionError("compose: size mismatch")
        return Permutation(tuple(other.image[self.image[i]] for i in range(self.n)))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.image))

    def order(self) -> int:
        k = 1
        p = self
        while not p.is_identity():
            p = p.compose(self)
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycle decomposition, fixed points omitted."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(i) for i in c) + ")" for c in cycs)


def permute_cols(m: BitMatrix, p: Permutation) -> BitMatrix:
    """Column j of m lands at position p(j); equals m @ p.matrix()."""
    if m.cols != p.n:
        raise DimensionError(f"permute_cols: {m.shape} vs n={p.n}")
    arr = m.to_array()
    out = np.empty_like(arr)
    out[:, list(p.image)] = arr
    return BitMatrix(out)


def permute_rows(m: BitMatrix, p: Permutation) -> BitMatrix:
    """Row j of m lands at position p(j)."""
    if m.rows != p.n:
        raise DimensionError(f"permute_rows: {m.shape} vs n={p.n}")
    arr = m.to_array()
    out = np.empty_like(arr)
    out[list(p.image), :] = arr
    return BitMatrix(out)


def find_row_permutation(a: BitMatrix, b: BitMatrix) -> Permutation | None:
    """Permutation rho with rho.matrix() @ a == b, or None.

    Rows are matched by content; ties between duplicate rows go to the
    lowest unused index of a.
    """
    if a.shape != b.shape:
        return None
    pos: dict[bytes, list[int]] = {}
    aarr = a.to_array()
    for i in range(a.rows):
        pos.setdefault(aarr[i].tobytes(), []).append(i)
    for v in pos.values():
        v.reverse()  # pop() yields lowest index first
    barr = b.to_array()
    image = [0] * a.rows
    for i in range(b.rows):
        cand = pos.get(barr[i].tobytes())
        if not cand:
            return None
        # rho.matrix() @ a == b means row rho(i) of a equals row i of b
        image[i] = cand.pop()
    return Permutation(tuple(image))
