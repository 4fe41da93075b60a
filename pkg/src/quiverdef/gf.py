"""Exact dense linear algebra over prime fields GF(p).

Everything downstream computes with these matrices: entries are int64 residues
mod p, all operations are exact, and row reduction is fully deterministic
(leftmost nonzero column, topmost nonzero row).  Values are immutable after
construction.  A bit-packed elimination path kicks in for large GF(2) matrices.
"""

from __future__ import annotations

import numpy as np

_GF2_PACK_THRESHOLD = 50_000  # rows*cols above which GF(2) rref uses bit packing


class CharacteristicMismatch(ValueError):
    """Raised when operands live over different prime fields."""


_PRIME_CACHE: set[int] = set()


def is_prime(p: int) -> bool:
    if p in _PRIME_CACHE:
        return True
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    _PRIME_CACHE.add(p)
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return p


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x) % p, p - 2, p)


class Matrix:
    """Dense matrix over GF(p), shaped rows x cols, row-major."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        check_prime(p)
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"matrix entries must be 2-dimensional, got shape {a.shape}")
        a = np.mod(a, p)
        a.setflags(write=False)
        self.a = a
        self.p = p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_columns(cls, columns, rows: int, p: int) -> "Matrix":
        if len(columns) == 0:
            return cls.zeros(rows, 0, p)
        return cls(np.stack([np.asarray(c, dtype=np.int64) for c in columns], axis=1), p)

    # -- basic structure ---------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix(p={self.p}, {self.a.tolist()!r})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def _check(self, other: "Matrix"):
        if self.p != other.p:
            raise CharacteristicMismatch(f"GF({self.p}) vs GF({other.p})")

    # -- arithmetic --------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.a @ other.a, self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.a + other.a, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.a - other.a, self.p)

    def __neg__(self) -> "Matrix":
        return Matrix(-self.a, self.p)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.a * (c % self.p), self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self.a.T, self.p)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return (self.a @ np.mod(np.asarray(vec, dtype=np.int64), self.p)) % self.p

    # -- reductions --------------------------------------------------------

    def rref(self):
        """Reduced row echelon form: (R: ndarray, pivots: tuple of column indices)."""
        return rref(self.a, self.p)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Matrix":
        """Columns span the right null space; column count = cols - rank."""
        return Matrix(kernel(self.a, self.p), self.p)

    def solve(self, b) -> np.ndarray | None:
        """One exact solution x of self @ x = b, or None if inconsistent."""
        b = np.mod(np.asarray(b, dtype=np.int64), self.p)
        if b.ndim == 2:
            b = b.reshape(-1)
        if b.shape[0] != self.rows:
            raise ValueError(f"dimension mismatch: {self.rows} rows vs b of length {b.shape[0]}")
        return solve(self.a, b, self.p)

    def inverse(self) -> "Matrix | None":
        if self.rows != self.cols:
            return None
        aug = np.hstack([self.a, np.eye(self.rows, dtype=np.int64)])
        r, piv = rref(aug, self.p)
        if list(piv[: self.rows]) != list(range(self.rows)):
            return None
        return Matrix(r[:, self.rows :], self.p)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def column_span_rank(self) -> int:
        return self.rank()


# -- module-level helpers on raw ndarrays -----------------------------------


def hstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    return Matrix(np.hstack([m.a for m in mats]), p)


def vstack(mats: list[Matrix]) -> Matrix:
    p = mats[0].p
    return Matrix(np.vstack([m.a for m in mats]), p)


def block_diag(mats: list[Matrix], p: int) -> Matrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(out, p)


def _rref_modp(a: np.ndarray, p: int):
    a = np.mod(a.astype(np.int64, copy=True), p)
    m, n = a.shape
    pivots = []
    r = 0
    for j in range(n):
        if r >= m:
            break
        nz = np.nonzero(a[r:, j])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, j], p)) % p
        col = a[:, j].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(j)
        r += 1
    return a, tuple(pivots)


def _pack_gf2(a: np.ndarray) -> np.ndarray:
    m, n = a.shape
    nbytes = ((n + 63) // 64) * 8
    packed8 = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
    if packed8.shape[1] < nbytes:
        packed8 = np.hstack([packed8, np.zeros((m, nbytes - packed8.shape[1]), dtype=np.uint8)])
    return np.ascontiguousarray(packed8).view(np.uint64)


def _rref_gf2_packed(a: np.ndarray):
    m, n = a.shape
    w = _pack_gf2(a)
    pivots = []
    r = 0
    for j in range(n):
        if r >= m:
            break
        word, bit = divmod(j, 64)
        mask = np.uint64(1 << bit)
        colbits = (w[r:, word] & mask) != 0
        hit = np.nonzero(colbits)[0]
        if hit.size == 0:
            continue
        i = r + int(hit[0])
        if i != r:
            w[[r, i]] = w[[i, r]]
        sel = (w[:, word] & mask) != 0
        sel[r] = False
        if sel.any():
            w[sel] ^= w[r]
        pivots.append(j)
        r += 1
    out8 = w.view(np.uint8)
    unpacked = np.unpackbits(out8, axis=1, bitorder="little")[:, :n]
    return unpacked.astype(np.int64), tuple(pivots)


def rref(a: np.ndarray, p: int):
    """Deterministic reduced row echelon form of a over GF(p)."""
    a = np.asarray(a)
    if a.size == 0:
        return np.mod(a.astype(np.int64), p), ()
    if p == 2 and a.size > _GF2_PACK_THRESHOLD:
        return _rref_gf2_packed(np.mod(a, 2))
    return _rref_modp(np.asarray(a, dtype=np.int64), p)


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def kernel(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space of a, as columns of the returned array."""
    a = np.asarray(a)
    m, n = a.shape
    r, pivots = rref(a, p)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
        for row, pj in enumerate(pivots):
            out[pj, k] = (-r[row, f]) % p
    return out


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of a x = b over GF(p), or None when rank[a|b] > rank[a]."""
    a = np.asarray(a, dtype=np.int64)
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1, 1), p)
    m, n = a.shape
    aug = np.hstack([a, b])
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pj in enumerate(pivots):
        x[pj] = r[row, n]
    return x


def column_space_contains(span: np.ndarray, vecs: np.ndarray, p: int) -> bool:
    """True iff every column of vecs lies in the column span of span."""
    base = rank(span, p)
    return rank(np.hstack([span, vecs]), p) == base


def quotient_representatives(sub: np.ndarray, vecs: np.ndarray, p: int) -> list[int]:
    """Indices of columns of vecs forming a basis of span(sub, vecs)/span(sub).

    Deterministic: columns are admitted greedily left to right.
    """
    cur = sub
    base = rank(sub, p)
    picked = []
    for j in range(vecs.shape[1]):
        cand = np.hstack([cur, vecs[:, j : j + 1]])
        rk = rank(cand, p)
        if rk > base:
            picked.append(j)
            cur = cand
            base = rk
    return picked
