"""Structure-constant tables for bilinear products and their axiom residuals.

Basis indices are 1-based at every public boundary (constructors, residual
reports, JSON) and 0-based internally.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .linalg import (
    ZERO,
    LinearMap,
    RVector,
    RowReducer,
    Scalar,
    format_rational,
    is_zero,
    kernel_from_sparse_rows,
    row_space,
    span_rank,
    to_rational,
    unit_vector,
)

SYMMETRIES = ("antisymmetric", "symmetric", "none")


class Violation(NamedTuple):
    indices: tuple
    residual: RVector
    label: str = ""

    def to_json(self) -> list:
        item = [list(self.indices), [format_rational(x) for x in self.residual]]
        if self.label:
            item.append(self.label)
        return item


ResidualList = list  # list[Violation]


class AlgebraTable:
    """Sparse structure constants ``e_i ∘ e_j = Σ_k c[i][j][k] e_k``.

    ``entries`` maps 1-based pairs ``(i, j)`` to ``{k: coefficient}``. For
    antisymmetric and symmetric tables each unordered pair may be given once in
    either order; the mirrored entry is synthesized (negated for brackets).
    """

    __slots__ = ("dim", "symmetry", "name", "basis", "_prod")

    def __init__(
        self,
        dim: int,
        entries: Optional[Mapping] = None,
        *,
        symmetry: str = "antisymmetric",
        name: str = "",
        basis: Optional[Sequence[str]] = None,
    ):
        if symmetry not in SYMMETRIES:
            raise ValueError(f"symmetry must be one of {SYMMETRIES}, got {symmetry!r}")
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        self.symmetry = symmetry
        self.name = name
        self.basis = tuple(basis) if basis is not None else tuple(f"e{i}" for i in range(1, dim + 1))
        if len(self.basis) != dim:
            raise ValueError(f"{len(self.basis)} basis names for dimension {dim}")
        prod = [[{} for _ in range(dim)] for _ in range(dim)]
        seen = set()
        for (i, j), vec in (entries or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ValueError(f"basis pair ({i}, {j}) out of range 1..{dim}")
            coeffs = _coeff_dict(vec, dim)
            a, b = i - 1, j - 1
            if symmetry != "none":
                key = (min(a, b), max(a, b))
                if key in seen:
                    raise ValueError(f"pair ({i}, {j}) given twice")
                seen.add(key)
                if symmetry == "antisymmetric" and a == b:
                    if coeffs:
                        raise ValueError(f"antisymmetric table has nonzero diagonal entry ({i}, {i})")
                    continue
                prod[a][b] = dict(coeffs)
                if a != b:
                    sign = -1 if symmetry == "antisymmetric" else 1
                    prod[b][a] = {k: sign * v for k, v in coeffs.items()}
            else:
                if (a, b) in seen:
                    raise ValueError(f"pair ({i}, {j}) given twice")
                seen.add((a, b))
                prod[a][b] = dict(coeffs)
        self._prod = tuple(tuple(row) for row in prod)

    # -- access -------------------------------------------------------------

    def product(self, i: int, j: int) -> dict:
        """Sparse product of 0-based basis vectors ``e_i ∘ e_j`` (do not mutate)."""
        return self._prod[i][j]

    def basis_product(self, i: int, j: int) -> RVector:
        """Dense product of 1-based basis vectors."""
        return self._dense(self._prod[i - 1][j - 1])

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self._prod[i - 1][j - 1].get(k - 1, ZERO)

    def entries(self) -> dict:
        """Stored entries, 1-based; only ``i <= j`` unless symmetry is none."""
        out = {}
        for a in range(self.dim):
            for b in range(self.dim):
                if self.symmetry != "none" and b < a:
                    continue
                c = self._prod[a][b]
                if c:
                    out[(a + 1, b + 1)] = {k + 1: v for k, v in sorted(c.items())}
        return out

    def is_zero(self) -> bool:
        return not any(c for row in self._prod for c in row)

    def _dense(self, coeffs: Mapping[int, Fraction]) -> RVector:
        v = [ZERO] * self.dim
        for k, c in coeffs.items():
            v[k] = c
        return tuple(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        return self.dim == other.dim and self.symmetry == other.symmetry and self._prod == other._prod

    def __hash__(self):
        return hash((self.dim, self.symmetry, repr(self.entries())))

    def __repr__(self) -> str:
        return f"AlgebraTable(name={self.name!r}, dim={self.dim}, symmetry={self.symmetry!r}, pairs={len(self.entries())})"

    def renamed(self, name: str) -> "AlgebraTable":
        return AlgebraTable(self.dim, self.entries(), symmetry=self.symmetry, name=name, basis=self.basis)

    def format_table(self, op: str = "") -> list:
        """Human-readable lines such as ``[e2, x] = 3 e2``."""
        lines = []
        for (i, j), coeffs in self.entries().items():
            lhs = f"[{self.basis[i - 1]}, {self.basis[j - 1]}]" if self.symmetry == "antisymmetric" and not op else (
                f"{self.basis[i - 1]}{op or '·'}{self.basis[j - 1]}"
            )
            lines.append(f"{lhs} = {format_combination(coeffs, self.basis)}")
        return lines


def format_combination(coeffs: Mapping[int, Fraction], names: Sequence[str]) -> str:
    parts = []
    for k, c in sorted(coeffs.items()):
        name = names[k - 1]
        if c == 1:
            term = name
        elif c == -1:
            term = f"-{name}"
        else:
            term = f"{c} {name}"
        parts.append(term)
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _coeff_dict(vec, dim: int) -> dict:
    """Normalize a product value to a 0-based sparse dict."""
    if isinstance(vec, Mapping):
        out = {}
        for k, c in vec.items():
            if not 1 <= k <= dim:
                raise ValueError(f"output index {k} out of range 1..{dim}")
            c = to_rational(c)
            if c:
                out[k - 1] = out.get(k - 1, ZERO) + c
        return {k: v for k, v in out.items() if v}
    vals = [to_rational(c) for c in vec]
    if len(vals) != dim:
        raise ValueError(f"product vector has length {len(vals)}, expected {dim}")
    return {k: v for k, v in enumerate(vals) if v}


def element(t: AlgebraTable, coords: Iterable[Scalar]) -> RVector:
    v = tuple(to_rational(c) for c in coords)
    if len(v) != t.dim:
        raise ValueError(f"element of length {len(v)} does not match dimension {t.dim}")
    return v


def basis_element(t: AlgebraTable, i: int) -> RVector:
    """1-based basis vector ``e_i`` of ``t``."""
    return unit_vector(t.dim, i - 1)


def apply(t: AlgebraTable, x: Sequence[Fraction], y: Sequence[Fraction]) -> RVector:
    if len(x) != t.dim or len(y) != t.dim:
        raise ValueError(f"elements of length {len(x)}, {len(y)} do not match dimension {t.dim}")
    out = [ZERO] * t.dim
    xs = [(i, a) for i, a in enumerate(x) if a]
    ys = [(j, b) for j, b in enumerate(y) if b]
    for i, a in xs:
        row = t._prod[i]
        for j, b in ys:
            for k, c in row[j].items():
                out[k] += a * b * c
    return tuple(out)


def _apply_sparse(t: AlgebraTable, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict:
    out: dict = {}
    for i, a in x.items():
        row = t._prod[i]
        for j, b in y.items():
            for k, c in row[j].items():
                out[k] = out.get(k, ZERO) + a * b * c
    return {k: v for k, v in out.items() if v}


def _sub(u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict:
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, ZERO) - c
    return {k: c for k, c in out.items() if c}


def _violation(t: AlgebraTable, idx: tuple, coeffs: Mapping[int, Fraction], label: str = "") -> Violation:
    return Violation(tuple(i + 1 for i in idx), t._dense(coeffs), label)


# -- axiom residuals -----------------------------------------------------------


def antisymmetry_residual(t: AlgebraTable) -> ResidualList:
    out = []
    for i in range(t.dim):
        for j in range(i, t.dim):
            s = dict(t._prod[i][j])
            for k, c in t._prod[j][i].items():
                s[k] = s.get(k, ZERO) + c
            s = {k: c for k, c in s.items() if c}
            if s:
                out.append(_violation(t, (i, j), s))
    return out


def jacobi_residual(t: AlgebraTable) -> ResidualList:
    out = []
    for i, j, k in combinations(range(t.dim), 3):
        acc: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = t._prod[a][b]
            for m, coef in inner.items():
                for l, d in t._prod[m][c].items():
                    acc[l] = acc.get(l, ZERO) + coef * d
        acc = {l: v for l, v in acc.items() if v}
        if acc:
            out.append(_violation(t, (i, j, k), acc))
    return out


def commutativity_residual(t: AlgebraTable) -> ResidualList:
    out = []
    for i, j in combinations(range(t.dim), 2):
        d = _sub(t._prod[i][j], t._prod[j][i])
        if d:
            out.append(_violation(t, (i, j), d))
    return out


def associativity_residual(t: AlgebraTable) -> ResidualList:
    out = []
    n = t.dim
    for i in range(n):
        for j in range(n):
            left = t._prod[i][j]
            for k in range(n):
                lhs = _apply_sparse(t, left, {k: 1})
                rhs = _apply_sparse(t, {i: 1}, t._prod[j][k])
                d = _sub(lhs, rhs)
                if d:
                    out.append(_violation(t, (i, j, k), d))
    return out


def is_lie(t: AlgebraTable) -> bool:
    return not antisymmetry_residual(t) and not jacobi_residual(t)


# -- change of basis -----------------------------------------------------------


def transport(t: AlgebraTable, g: LinearMap) -> AlgebraTable:
    """Table of ``t'(x, y) = g(t(g⁻¹x, g⁻¹y))``."""
    if g.dim != t.dim:
        raise ValueError(f"map of size {g.dim} does not match dimension {t.dim}")
    if not g.is_invertible():
        raise ValueError("not a basis change: map is singular")
    ginv = g.inverse()
    cols = [ginv.image(j) for j in range(t.dim)]
    entries = {}
    for i in range(t.dim):
        for j in range(t.dim):
            if t.symmetry != "none" and j < i:
                continue
            v = g(apply(t, cols[i], cols[j]))
            if not is_zero(v):
                entries[(i + 1, j + 1)] = {k + 1: c for k, c in enumerate(v) if c}
    return AlgebraTable(t.dim, entries, symmetry=t.symmetry, name=t.name, basis=t.basis)


def is_automorphism(t: AlgebraTable, g: LinearMap) -> bool:
    return g.is_invertible() and transport(t, g) == t


# -- subspaces -----------------------------------------------------------------


def _bracket_span(t: AlgebraTable, left: Sequence[RVector]) -> list:
    vectors = []
    for v in left:
        for j in range(t.dim):
            w = apply(t, v, unit_vector(t.dim, j))
            if not is_zero(w):
                vectors.append(w)
    return row_space(vectors, t.dim)


def lower_central_series(t: AlgebraTable) -> list:
    """Dimensions of 𝔏¹ ⊇ 𝔏² ⊇ … until the series stabilizes."""
    current = [unit_vector(t.dim, i) for i in range(t.dim)]
    dims = [t.dim]
    while True:
        nxt = _bracket_span(t, current)
        if len(nxt) == dims[-1]:
            return dims
        dims.append(len(nxt))
        current = nxt
        if not nxt:
            return dims


def is_filiform(t: AlgebraTable) -> bool:
    n = t.dim
    if n < 2:
        return False
    dims = lower_central_series(t)
    for i in range(2, n + 1):
        d = dims[i - 1] if i - 1 < len(dims) else dims[-1]
        if d != n - i:
            return False
    return True


def center(t: AlgebraTable) -> list:
    """Canonical kernel basis of ``x ↦ ([x, e_1], …, [x, e_dim])``."""
    rows = []
    for j in range(t.dim):
        for k in range(t.dim):
            row = {i: t._prod[i][j][k] for i in range(t.dim) if k in t._prod[i][j]}
            if row:
                rows.append(row)
    return kernel_from_sparse_rows(rows, t.dim)


def derived_subalgebra(t: AlgebraTable) -> list:
    """RREF basis of span{[e_i, e_j]}."""
    return row_space((t._dense(t._prod[i][j]) for i in range(t.dim) for j in range(t.dim) if t._prod[i][j]), t.dim)


def subspace_dim(vectors: Iterable[Sequence[Fraction]], dim: int) -> int:
    return span_rank(vectors, dim)


def subspace_contains(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    dim = len(v)
    red = RowReducer(dim)
    for b in basis:
        red.add({k: c for k, c in enumerate(b) if c})
    return red.contains({k: c for k, c in enumerate(v) if c})


def table_from_function(dim: int, fn, *, symmetry: str, name: str = "", basis=None) -> AlgebraTable:
    """Build a table from ``fn(i, j) -> vector`` on 1-based basis pairs."""
    entries = {}
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if symmetry != "none" and j < i:
                continue
            if symmetry == "antisymmetric" and i == j:
                continue
            v = fn(i, j)
            if v is not None and any(v):
                entries[(i, j)] = v
    return AlgebraTable(dim, entries, symmetry=symmetry, name=name, basis=basis)
