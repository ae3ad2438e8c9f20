"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are packed into Python ints, bit j = coordinate j
(little-endian, so serialization is fixed byte-for-byte).  The row-vector
convention is used throughout: products are v*M, and a permutation acts on
the right, (v*P)[pi(i)] = v[i].

Everything is immutable; operations return fresh values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import _kernels


@dataclass(frozen=True)
class BitVec:
    """Length-tagged bit vector packed into an int (bit j = coordinate j)."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits outside the declared length")

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVec":
        bits = 0
        n = 0
        for v in values:
            if v:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        """Parse '0'/'1' text, leftmost character = coordinate 0."""
        if s.strip("01"):
            raise ValueError(f"bit string contains characters other than 0/1: {s!r}")
        return cls.from_bits(1 if ch == "1" else 0 for ch in s)

    @classmethod
    def from_support(cls, n: int, positions: Iterable[int]) -> "BitVec":
        bits = 0
        for j in positions:
            bits |= 1 << j
        return cls(n, bits)

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> j) & 1 else "0" for j in range(self.n))

    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if (self.bits >> j) & 1)

    def weight(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVec(self.n, self.bits ^ other.bits)


@dataclass(frozen=True)
class BitMatrix:
    """Row-major bit matrix; row_bits[i] packs row i."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.row_bits) != self.rows:
            raise ValueError("row count does not match row data")
        for r in self.row_bits:
            if r < 0 or r >> self.cols:
                raise ValueError("row bits outside the declared width")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Iterable[BitVec]) -> "BitMatrix":
        rows = list(rows)
        if not rows:
            raise ValueError("cannot infer width of an empty matrix")
        cols = rows[0].n
        if any(r.n != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(r.bits for r in rows))

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_bits[i])

    def column(self, j: int) -> BitVec:
        bits = 0
        for i, r in enumerate(self.row_bits):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVec(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            x = r
            while x:
                low = x & -x
                out[low.bit_length() - 1] |= 1 << i
                x ^= low
        return BitMatrix(self.cols, self.rows, tuple(out))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    def to_strings(self) -> list[str]:
        return [self.row(i).to_string() for i in range(self.rows)]


def vec_mat_mul(v: BitVec, M: BitMatrix) -> BitVec:
    """Row vector times matrix: result[j] = XOR_i v[i]*M[i][j]."""
    if v.n != M.rows:
        raise ValueError(f"dimension mismatch: vector {v.n} vs matrix rows {M.rows}")
    acc = 0
    x = v.bits
    rows = M.row_bits
    while x:
        low = x & -x
        acc ^= rows[low.bit_length() - 1]
        x ^= low
    return BitVec(M.cols, acc)


def mat_mul(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.cols != B.rows:
        raise ValueError(f"dimension mismatch: {A.rows}x{A.cols} times {B.rows}x{B.cols}")
    out = _kernels.mat_mul_packed(list(A.row_bits), list(B.row_bits), B.cols)
    return BitMatrix(A.rows, B.cols, tuple(out))


class RrefResult(NamedTuple):
    R: BitMatrix
    rank: int
    pivots: tuple[int, ...]
    T: BitMatrix


def rref(M: BitMatrix) -> RrefResult:
    """Reduced row echelon form R = T*M with invertible T and pivot columns."""
    r, rank, pivots, t = _kernels.rref_packed(list(M.row_bits), M.cols)
    return RrefResult(
        BitMatrix(M.rows, M.cols, tuple(r)),
        rank,
        tuple(pivots),
        BitMatrix(M.rows, M.rows, tuple(t)),
    )


def rank(M: BitMatrix) -> int:
    return _kernels.rref_packed(list(M.row_bits), M.cols)[1]


def nullspace_basis(M: BitMatrix) -> BitMatrix:
    """Basis of {v : v*M^T = 0} as rows of a (cols - rank) x cols matrix."""
    R, rk, pivots, _ = rref(M)
    pivot_set = set(pivots)
    free_cols = [j for j in range(M.cols) if j not in pivot_set]
    rows = []
    for f in free_cols:
        bits = 1 << f
        for i, pc in enumerate(pivots):
            if (R.row_bits[i] >> f) & 1:
                bits |= 1 << pc
        rows.append(bits)
    return BitMatrix(len(rows), M.cols, tuple(rows))


def square_inverse(M: BitMatrix) -> BitMatrix:
    """Inverse of a square invertible matrix (from the rref transform)."""
    if M.rows != M.cols:
        raise ValueError(f"matrix is {M.rows}x{M.cols}, not square")
    _, rk, _, T = rref(M)
    if rk != M.rows:
        raise ValueError("matrix is singular")
    return T


def right_inverse(M: BitMatrix) -> BitMatrix:
    """N with M*N = I for a full-row-rank M.

    Built from the pivot columns J of the rref: invert the square submatrix
    M[:, J], place its rows at row positions J of N, zero elsewhere.
    """
    _, rk, pivots, _ = rref(M)
    if rk != M.rows:
        raise ValueError("not full row rank; no right inverse exists")
    k = M.rows
    sub_rows = []
    for i in range(k):
        bits = 0
        for b, j in enumerate(pivots):
            if (M.row_bits[i] >> j) & 1:
                bits |= 1 << b
        sub_rows.append(bits)
    inv = square_inverse(BitMatrix(k, k, tuple(sub_rows)))
    out = [0] * M.cols
    for b, j in enumerate(pivots):
        out[j] = inv.row_bits[b]
    return BitMatrix(M.cols, k, tuple(out))


@dataclass(frozen=True)
class Permutation:
    """Permutation of [0, n) stored as an index array, entry i = pi(i)."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(n)):
            raise ValueError("mapping is not a bijection on [0, n)")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def matrix(self) -> BitMatrix:
        """Matrix form with P[i, pi(i)] = 1, so v*P permutes coordinates."""
        n = len(self.mapping)
        return BitMatrix(n, n, tuple(1 << j for j in self.mapping))

    def apply(self, v: BitVec) -> BitVec:
        """(v*P)[pi(i)] = v[i], without materializing the matrix."""
        if v.n != len(self.mapping):
            raise ValueError("length mismatch")
        bits = 0
        x = v.bits
        while x:
            low = x & -x
            bits |= 1 << self.mapping[low.bit_length() - 1]
            x ^= low
        return BitVec(v.n, bits)


def random_matrix(rows: int, cols: int, rng: random.Random) -> BitMatrix:
    return BitMatrix(rows, cols, tuple(rng.getrandbits(cols) for _ in range(rows)))


def random_invertible(k: int, rng: random.Random) -> BitMatrix:
    """Uniform invertible k x k matrix by rejection (acceptance ~0.289)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    while True:
        M = random_matrix(k, k, rng)
        if rank(M) == k:
            return M


def random_permutation(n: int, rng: random.Random) -> Permutation:
    """Fisher-Yates shuffle of [0, n), deterministic under a seeded rng."""
    if n < 1:
        raise ValueError("n must be >= 1")
    arr = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i + 1)
        arr[i], arr[j] = arr[j], arr[i]
    return Permutation(tuple(arr))
