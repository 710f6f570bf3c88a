"""δ-derivations: φ([x, y]) = δ([φx, y] + [x, φy]).

The unknowns are the entries φ_{pq} of the matrix of φ (``φ(e_q) = Σ_p φ_{pq}
e_p``), numbered column-major: unknown ``q*dim + p``. Imposing the identity on
basis pairs suffices by bilinearity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import AlgebraTable, ResidualList, Violation, apply, center, derived_subalgebra, subspace_contains
from .linalg import (
    ZERO,
    LinearMap,
    RMatrix,
    Scalar,
    format_rational,
    is_zero,
    kernel_from_sparse_rows,
    to_rational,
    unit_vector,
)

HALF = Fraction(1, 2)


def _system_rows(t: AlgebraTable, delta: Fraction):
    n = t.dim
    for i, j in combinations(range(n), 2):
        cij = t.product(i, j)
        for k in range(n):
            row: dict = {}
            for m, c in cij.items():
                key = m * n + k
                row[key] = row.get(key, ZERO) + c
            for p in range(n):
                c = t.product(p, j).get(k)
                if c:
                    key = i * n + p
                    row[key] = row.get(key, ZERO) - delta * c
                c = t.product(i, p).get(k)
                if c:
                    key = j * n + p
                    row[key] = row.get(key, ZERO) - delta * c
            yield {key: v for key, v in row.items() if v}


def delta_derivation_system(t: AlgebraTable, delta: Scalar = HALF) -> RMatrix:
    """Coefficient matrix of the δ-derivation equations.

    One row per ``(i, j, k)`` with ``i < j`` in lexicographic order, including
    rows that happen to vanish.
    """
    delta = to_rational(delta)
    n = t.dim
    cols = n * n
    rows = []
    for r in _system_rows(t, delta):
        dense = [ZERO] * cols
        for key, v in r.items():
            dense[key] = v
        rows.append(tuple(dense))
    return RMatrix(len(rows), cols, tuple(rows))


def _vector_to_map(v, n: int) -> LinearMap:
    cols = [v[q * n:(q + 1) * n] for q in range(n)]
    return LinearMap(RMatrix.from_columns(cols, rows=n))


@dataclass(frozen=True)
class DerivationSpace:
    algebra: AlgebraTable
    delta: Fraction
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "delta": format_rational(self.delta),
            "dimension": self.dimension,
            "basis": [phi.matrix.to_strings() for phi in self.basis],
        }

    def contains(self, phi: LinearMap) -> bool:
        n = self.algebra.dim
        flat = [phi.matrix[p, q] for q in range(n) for p in range(n)]
        basis = [[b.matrix[p, q] for q in range(n) for p in range(n)] for b in self.basis]
        return subspace_contains(basis, flat)


def delta_derivation_space(t: AlgebraTable, delta: Scalar = HALF) -> DerivationSpace:
    delta = to_rational(delta)
    n = t.dim
    kernel = kernel_from_sparse_rows(_system_rows(t, delta), n * n)
    return DerivationSpace(t, delta, tuple(_vector_to_map(v, n) for v in kernel))


def is_delta_derivation(t: AlgebraTable, phi: LinearMap, delta: Scalar = HALF) -> ResidualList:
    delta = to_rational(delta)
    n = t.dim
    if phi.dim != n:
        raise ValueError(f"map of size {phi.dim} does not match dimension {n}")
    images = [phi.image(q) for q in range(n)]
    out = []
    for i, j in combinations(range(n), 2):
        ei, ej = unit_vector(n, i), unit_vector(n, j)
        lhs = phi(apply(t, ei, ej))
        rhs = tuple(a + b for a, b in zip(apply(t, images[i], ej), apply(t, ei, images[j])))
        res = tuple(a - delta * b for a, b in zip(lhs, rhs))
        if not is_zero(res):
            out.append(Violation((i + 1, j + 1), res))
    return out


def invariance_report(space: DerivationSpace) -> ResidualList:
    """Check that every basis map preserves [𝔏, 𝔏] and the center."""
    t = space.algebra
    derived = derived_subalgebra(t)
    cent = center(t)
    out = []
    for b, phi in enumerate(space.basis, start=1):
        for label, sub in (("derived", derived), ("center", cent)):
            for v in sub:
                w = phi(v)
                if not subspace_contains(sub, w):
                    out.append(Violation((b,), w, label))
    return out
