"""Exact rational linear algebra over ``fractions.Fraction``.

Everything here is immutable and pure. Matrices are dense row-major tuples;
elimination internally works on sparse dict rows because the systems built by
the derivation and product solvers are very sparse.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Rational = Fraction
RVector = tuple  # tuple[Fraction, ...]
Scalar = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: Scalar) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are refused: they would silently smuggle rounding into the engine.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def vector(values: Iterable[Scalar]) -> RVector:
    return tuple(to_rational(v) for v in values)


def zero_vector(n: int) -> RVector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> RVector:
    """Standard basis vector with a 1 at 0-based position ``i``."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


def add_scaled(v: Sequence[Fraction], w: Sequence[Fraction], c: Fraction) -> RVector:
    return tuple(a + c * b for a, b in zip(v, w))


@dataclass(frozen=True)
class RMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} grid")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "RMatrix":
        grid = tuple(vector(r) for r in rows)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        return cls(len(grid), cols, grid)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: Optional[int] = None) -> "RMatrix":
        cols = tuple(vector(c) for c in columns)
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RMatrix":
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> RVector:
        return self.entries[i]

    def column(self, j: int) -> RVector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RMatrix":
        return RMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def mul_vec(self, v: Sequence[Fraction]) -> RVector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} does not match {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.entries)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols) for r in self.entries),
        )

    def is_zero(self) -> bool:
        return all(is_zero(r) for r in self.entries)

    def to_strings(self) -> list:
        return [[format_rational(x) for x in r] for r in self.entries]


class RowReducer:
    """Incremental exact elimination keeping the row space in full RREF.

    Rows are sparse dicts ``{column: value}``. After every insertion each
    stored row has a leading 1 in its pivot column and zeros in every other
    pivot column, so the stored set is exactly the reduced row echelon form of
    everything added so far.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_columns(self) -> list:
        return sorted(self._pivots)

    def reduce(self, row: Mapping[int, Fraction]) -> dict:
        """Return ``row`` with every pivot column eliminated."""
        r = {c: v for c, v in row.items() if v}
        for c in [c for c in r if c in self._pivots]:
            v = r.get(c)
            if not v:
                continue
            for k, pv in self._pivots[c].items():
                nv = r.get(k, ZERO) - v * pv
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert a row; return True iff it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        lead = r[p]
        if lead != 1:
            r = {k: v / lead for k, v in r.items()}
        for q, prow in self._pivots.items():
            v = prow.get(p)
            if v:
                for k, w in r.items():
                    nv = prow.get(k, ZERO) - v * w
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self._pivots[p] = r
        return True

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self.reduce(row)

    def rref_rows(self) -> list:
        """Nonzero RREF rows as dense tuples, ordered by pivot."""
        out = []
        for p in self.pivot_columns:
            prow = self._pivots[p]
            out.append(tuple(prow.get(k, ZERO) for k in range(self.cols)))
        return out

    def kernel(self) -> list:
        """Canonical basis of the solution space of ``rows · v = 0``."""
        pivots = self.pivot_columns
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            v = [ZERO] * self.cols
            v[f] = ONE
            for p in pivots:
                c = self._pivots[p].get(f)
                if c:
                    v[p] = -c
            basis.append(tuple(v))
        return basis


def _sparse(row: Sequence[Fraction]) -> dict:
    return {k: v for k, v in enumerate(row) if v}


def _reducer(m: RMatrix) -> RowReducer:
    red = RowReducer(m.cols)
    for r in m.entries:
        red.add(_sparse(r))
    return red


def rref(m: RMatrix):
    """Reduced row echelon form of ``m``.

    Returns ``(matrix, pivot_columns, rank)``; the matrix keeps ``m``'s shape
    with zero rows at the bottom.
    """
    red = _reducer(m)
    rows = red.rref_rows()
    rows += [zero_vector(m.cols)] * (m.rows - len(rows))
    return RMatrix(m.rows, m.cols, tuple(rows)), red.pivot_columns, red.rank


def rank(m: RMatrix) -> int:
    return _reducer(m).rank


def kernel_basis(m: RMatrix) -> list:
    return _reducer(m).kernel()


def kernel_from_sparse_rows(rows: Iterable[Mapping[int, Fraction]], cols: int) -> list:
    """Canonical kernel basis for a system given as sparse rows."""
    red = RowReducer(cols)
    for r in rows:
        red.add(r)
    return red.kernel()


def solve_exact(m: RMatrix, b: Sequence[Scalar]) -> Optional[RVector]:
    """Solution of ``m x = b`` with all free variables 0, or None."""
    b = vector(b)
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    red = RowReducer(m.cols + 1)
    for r, bi in zip(m.entries, b):
        row = _sparse(r)
        if bi:
            row[m.cols] = bi
        red.add(row)
    if m.cols in red.pivot_columns:
        return None
    x = [ZERO] * m.cols
    for p in red.pivot_columns:
        x[p] = red._pivots[p].get(m.cols, ZERO)
    return tuple(x)


def span_rank(vectors: Iterable[Sequence[Fraction]], dim: int) -> int:
    red = RowReducer(dim)
    for v in vectors:
        red.add(_sparse(v))
    return red.rank


def row_space(vectors: Iterable[Sequence[Fraction]], dim: int) -> list:
    """Canonical (RREF) basis of the span of ``vectors``."""
    red = RowReducer(dim)
    for v in vectors:
        red.add(_sparse(v))
    return red.rref_rows()


def in_span(v: Sequence[Fraction], basis: Sequence[Sequence[Fraction]], dim: int) -> bool:
    red = RowReducer(dim)
    for b in basis:
        red.add(_sparse(b))
    return red.contains(_sparse(v))


@dataclass(frozen=True)
class LinearMap:
    """Endomorphism in a fixed basis; column ``j`` is the image of ``e_j``."""

    matrix: RMatrix

    def __post_init__(self):
        if self.matrix.rows != self.matrix.cols:
            raise ValueError("a linear map must be square")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(RMatrix.identity(n))

    @classmethod
    def from_images(cls, images: Sequence[Sequence[Scalar]]) -> "LinearMap":
        """Build from the images of ``e_1 .. e_n`` in order."""
        return cls(RMatrix.from_columns(images))

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "LinearMap":
        vals = vector(values)
        n = len(vals)
        return cls(RMatrix(n, n, tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n))))

    def __call__(self, v: Sequence[Fraction]) -> RVector:
        return self.matrix.mul_vec(v)

    def image(self, j: int) -> RVector:
        """Image of the 0-based basis vector ``e_j``."""
        return self.matrix.column(j)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        return LinearMap(self.matrix @ other.matrix)

    def is_invertible(self) -> bool:
        return rank(self.matrix) == self.dim

    def inverse(self) -> "LinearMap":
        n = self.dim
        red = RowReducer(2 * n)
        for i, r in enumerate(self.matrix.entries):
            row = _sparse(r)
            row[n + i] = ONE
            red.add(row)
        if red.pivot_columns[:n] != list(range(n)) or red.rank < n:
            raise ValueError("not a basis change: matrix is singular")
        inv = tuple(tuple(red._pivots[i].get(n + j, ZERO) for j in range(n)) for i in range(n))
        return LinearMap(RMatrix(n, n, inv))

    def scaled(self, c: Scalar) -> "LinearMap":
        c = to_rational(c)
        return LinearMap(RMatrix(self.dim, self.dim, tuple(tuple(c * x for x in r) for r in self.matrix.entries)))
