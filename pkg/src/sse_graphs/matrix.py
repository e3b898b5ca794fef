"""Exact non-negative integer matrices.

Entries are Python ints, so products and powers never overflow.  Matrices are
immutable and hashable; they are used directly as search states.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

CANONICAL_FORM_CAP = 8


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        for x in self.entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"entries must be integers, got {x!r}")
            if x < 0:
                raise ValueError(f"entries must be non-negative, got {x}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise DimensionError("matrix must be at least 1x1")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def max_entry(self) -> int:
        return max(self.entries)

    def total(self) -> int:
        return sum(self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return multiply(self, other)

    def __repr__(self):
        return f"Matrix({self.to_rows()})"


def multiply(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bcols = [b.column(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        row = a.row(i)
        for col in bcols:
            out.append(sum(x * y for x, y in zip(row, col)))
    return Matrix(a.rows, b.cols, tuple(out))


def power(a: Matrix, k: int) -> Matrix:
    if not a.is_square:
        raise DimensionError("power of a non-square matrix")
    if k < 0:
        raise ValueError("negative exponent")
    result = Matrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def is_regular(a: Matrix) -> bool:
    """True iff every row has a positive entry."""
    return all(any(a.row(i)) for i in range(a.rows))


def zero_rows(a: Matrix) -> list[int]:
    return [i for i in range(a.rows) if not any(a.row(i))]


def trace(a: Matrix) -> int:
    if not a.is_square:
        raise DimensionError("trace of a non-square matrix")
    return sum(a[i, i] for i in range(a.rows))


def trace_power(a: Matrix, k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    return trace(power(a, k))


def permute(a: Matrix, perm: Sequence[int]) -> Matrix:
    """Return P a P^T, where row i of the result is row perm[i] of ``a``."""
    n = a.rows
    return Matrix(n, n, tuple(a[perm[i], perm[j]] for i in range(n) for j in range(n)))


def canonical_form(a: Matrix, cap: int = CANONICAL_FORM_CAP) -> Matrix:
    """Lexicographically least row-major flattening over simultaneous row/column permutations."""
    if not a.is_square:
        raise DimensionError("canonical form needs a square matrix")
    if a.rows > cap:
        raise DimensionError(f"canonical form capped at dimension {cap}, got {a.rows}")
    n = a.rows
    best = None
    for perm in permutations(range(n)):
        flat = tuple(a[perm[i], perm[j]] for i in range(n) for j in range(n))
        if best is None or flat < best:
            best = flat
    return Matrix(n, n, best)


def trace_mismatch(a: Matrix, b: Matrix, up_to: int | None = None) -> int | None:
    """Smallest k with tr(a^k) != tr(b^k), or None if they agree up to ``up_to``."""
    if up_to is None:
        up_to = max(a.rows, b.rows)
    pa, pb = a, b
    for k in range(1, up_to + 1):
        if k > 1:
            pa, pb = multiply(pa, a), multiply(pb, b)
        if trace(pa) != trace(pb):
            return k
    return None


def as_matrix(x: Matrix | Iterable[Iterable[int]]) -> Matrix:
    if isinstance(x, Matrix):
        return x
    return Matrix.from_rows(x)
