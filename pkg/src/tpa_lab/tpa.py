"""Transposed Poisson structures on a fixed Lie bracket.

A commutative product ``·`` is compatible with the bracket when
``2 z·[x, y] = [z·x, y] + [x, z·y]`` (transposed Leibniz rule). The admissible
products form a linear space; associativity then cuts out a quadratic variety
inside it, handled here by residual expansion and a bounded case split.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import (
    AlgebraTable,
    ResidualList,
    Violation,
    _apply_sparse,
    _sub,
    associativity_residual,
    commutativity_residual,
)
from .derivations import HALF, is_delta_derivation
from .linalg import ZERO, LinearMap, RMatrix, RowReducer, Scalar, kernel_from_sparse_rows, to_rational

CommutativeProduct = AlgebraTable  # a table with symmetry="symmetric"


def commutative_product(dim: int, entries: Optional[Mapping] = None, *, name: str = "", basis=None) -> AlgebraTable:
    return AlgebraTable(dim, entries, symmetry="symmetric", name=name, basis=basis)


def _check_dims(b: AlgebraTable, p: AlgebraTable) -> None:
    if b.dim != p.dim:
        raise ValueError(f"bracket dimension {b.dim} differs from product dimension {p.dim}")


def _unit(i: int) -> dict:
    return {i: Fraction(1)}


def _scale(v: Mapping[int, Fraction], c: Fraction) -> dict:
    return {k: c * x for k, x in v.items()} if c else {}


def _add(*vs: Mapping[int, Fraction]) -> dict:
    out: dict = {}
    for v in vs:
        for k, c in v.items():
            out[k] = out.get(k, ZERO) + c
    return {k: c for k, c in out.items() if c}


def _dense(v: Mapping[int, Fraction], n: int) -> tuple:
    return tuple(v.get(k, ZERO) for k in range(n))


def transposed_leibniz_residual(b: AlgebraTable, p: AlgebraTable) -> ResidualList:
    """Triples ``(z, x, y)``, ``x < y``, where ``2 z·[x,y] − [z·x,y] − [x,z·y] ≠ 0``."""
    _check_dims(b, p)
    n = b.dim
    out = []
    for z in range(n):
        for x, y in combinations(range(n), 2):
            lhs = _scale(_apply_sparse(p, _unit(z), b.product(x, y)), Fraction(2))
            r1 = _apply_sparse(b, p.product(z, x), _unit(y))
            r2 = _apply_sparse(b, _unit(x), p.product(z, y))
            res = _sub(lhs, _add(r1, r2))
            if res:
                out.append(Violation((z + 1, x + 1, y + 1), _dense(res, n)))
    return out


def leibniz_residual(b: AlgebraTable, p: AlgebraTable) -> ResidualList:
    """Triples ``(x, y, z)``, ``y <= z``, where ``[x, y·z] ≠ [x,y]·z + y·[x,z]``.

    The identity is symmetric in ``y, z`` for a commutative product, so only
    ``y <= z`` is swept.
    """
    _check_dims(b, p)
    n = b.dim
    out = []
    for x in range(n):
        for y in range(n):
            for z in range(y, n):
                lhs = _apply_sparse(b, _unit(x), p.product(y, z))
                r1 = _apply_sparse(p, b.product(x, y), _unit(z))
                r2 = _apply_sparse(p, _unit(y), b.product(x, z))
                res = _sub(lhs, _add(r1, r2))
                if res:
                    out.append(Violation((x + 1, y + 1, z + 1), _dense(res, n)))
    return out


def mixed_triviality_residual(b: AlgebraTable, p: AlgebraTable) -> ResidualList:
    """Triples where ``x·[y,z]`` or ``[x·y, z]`` is nonzero (labelled by which)."""
    _check_dims(b, p)
    n = b.dim
    out = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                first = _apply_sparse(p, _unit(x), b.product(y, z))
                if first:
                    out.append(Violation((x + 1, y + 1, z + 1), _dense(first, n), "x.[y,z]"))
                second = _apply_sparse(b, p.product(x, y), _unit(z))
                if second:
                    out.append(Violation((x + 1, y + 1, z + 1), _dense(second, n), "[x.y,z]"))
    return out


def left_multiplication(p: AlgebraTable, z: int) -> LinearMap:
    """Operator ``y ↦ e_z · y`` for a 1-based basis index ``z``."""
    n = p.dim
    return LinearMap.from_images([_dense(p.product(z - 1, j), n) for j in range(n)])


def is_poisson(b: AlgebraTable, p: AlgebraTable) -> bool:
    return not leibniz_residual(b, p)


@dataclass
class VerificationReport:
    algebra: str
    product: str
    commutative: list
    associative: list
    transposed_leibniz: list
    leibniz: list
    mixed: list
    is_trivial: bool
    lemma_agrees: bool

    @property
    def is_tpa(self) -> bool:
        return not (self.commutative or self.associative or self.transposed_leibniz)

    @property
    def is_poisson(self) -> bool:
        return not self.leibniz

    @property
    def is_both(self) -> bool:
        return self.is_tpa and self.is_poisson

    def verdicts(self) -> dict:
        return {
            "is_tpa": self.is_tpa,
            "is_poisson": self.is_poisson,
            "is_both": self.is_both,
            "is_trivial": self.is_trivial,
        }

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "product": self.product,
            "is_tpa": self.is_tpa,
            "is_poisson": self.is_poisson,
            "is_both": self.is_both,
            "is_trivial": self.is_trivial,
            "lemma_agrees": self.lemma_agrees,
            "violations": {
                "commutative": [v.to_json() for v in self.commutative],
                "associative": [v.to_json() for v in self.associative],
                "transposed_leibniz": [v.to_json() for v in self.transposed_leibniz],
                "leibniz": [v.to_json() for v in self.leibniz],
                "mixed": [v.to_json() for v in self.mixed],
            },
        }


def verify_tpa(b: AlgebraTable, p: AlgebraTable) -> VerificationReport:
    _check_dims(b, p)
    tl = transposed_leibniz_residual(b, p)
    by_operators = all(not is_delta_derivation(b, left_multiplication(p, z), HALF) for z in range(1, b.dim + 1))
    return VerificationReport(
        algebra=b.name,
        product=p.name,
        commutative=commutativity_residual(p),
        associative=associativity_residual(p),
        transposed_leibniz=tl,
        leibniz=leibniz_residual(b, p),
        mixed=mixed_triviality_residual(b, p),
        is_trivial=p.is_zero(),
        lemma_agrees=(not tl) == by_operators,
    )


# -- the linear space of compatible products ---------------------------------------


def _pair_index(n: int) -> dict:
    return {pair: idx for idx, pair in enumerate((i, j) for i in range(n) for j in range(i, n))}


def _pairkey(a: int, b: int) -> tuple:
    return (a, b) if a <= b else (b, a)


def transposed_leibniz_system(b: AlgebraTable):
    """Sparse rows of the compatibility system in the unknowns ``m_{ij}^k``.

    Unknown ``pair * dim + k`` is the ``e_k`` coefficient of ``e_i·e_j``, where
    ``pair`` enumerates ``i <= j`` lexicographically. Yields rows for every
    ``(z, x < y, k)``.
    """
    n = b.dim
    pidx = _pair_index(n)

    def unknown(a: int, c: int, k: int) -> int:
        return pidx[_pairkey(a, c)] * n + k

    for z in range(n):
        for x, y in combinations(range(n), 2):
            cxy = b.product(x, y)
            for k in range(n):
                row: dict = {}

                def add(key: int, v: Fraction) -> None:
                    row[key] = row.get(key, ZERO) + v

                for m, c in cxy.items():
                    add(unknown(z, m, k), 2 * c)
                for m in range(n):
                    c = b.product(m, y).get(k)
                    if c:
                        add(unknown(z, x, m), -c)
                    c = b.product(x, m).get(k)
                    if c:
                        add(unknown(z, y, m), -c)
                row = {key: v for key, v in row.items() if v}
                if row:
                    yield row


def _product_from_unknowns(v: Sequence[Fraction], n: int, name: str, basis) -> AlgebraTable:
    entries = {}
    for idx, (i, j) in enumerate((i, j) for i in range(n) for j in range(i, n)):
        coeffs = {k + 1: v[idx * n + k] for k in range(n) if v[idx * n + k]}
        if coeffs:
            entries[(i + 1, j + 1)] = coeffs
    return AlgebraTable(n, entries, symmetry="symmetric", name=name, basis=basis)


def _product_unknowns(p: AlgebraTable) -> dict:
    n = p.dim
    pidx = _pair_index(n)
    out = {}
    for (i, j), idx in pidx.items():
        for k, c in p.product(i, j).items():
            out[idx * n + k] = c
    return out


@dataclass(frozen=True)
class ProductSpace:
    """Span of compatible commutative products with named coordinates."""

    bracket: AlgebraTable
    basis: tuple
    coordinates: tuple

    def __post_init__(self):
        if len(self.basis) != len(self.coordinates):
            raise ValueError("one coordinate name per basis product is required")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Mapping[str, Scalar] | Sequence[Scalar]) -> AlgebraTable:
        """Product ``Σ c_a · basis_a``; coefficients by position or by name."""
        if isinstance(coeffs, Mapping):
            unknown = set(coeffs) - set(self.coordinates)
            if unknown:
                raise ValueError(f"unknown coordinates {sorted(unknown)}; valid: {list(self.coordinates)}")
            values = [to_rational(coeffs.get(name, 0)) for name in self.coordinates]
        else:
            values = [to_rational(c) for c in coeffs]
            if len(values) != self.dim:
                raise ValueError(f"{len(values)} coefficients for a space of dimension {self.dim}")
        n = self.bracket.dim
        acc: dict = {}
        for c, q in zip(values, self.basis):
            if c:
                for key, v in _product_unknowns(q).items():
                    acc[key] = acc.get(key, ZERO) + c * v
        vec = [ZERO] * (n * n * (n + 1) // 2)
        for key, v in acc.items():
            vec[key] = v
        return _product_from_unknowns(vec, n, f"{self.bracket.name}:product", self.bracket.basis)


def tpa_linear_space(b: AlgebraTable) -> ProductSpace:
    n = b.dim
    ncols = n * n * (n + 1) // 2
    red = RowReducer(ncols)
    for row in transposed_leibniz_system(b):
        red.add(row)
    kernel = red.kernel()
    pivots = set(red.pivot_columns)
    free = [c for c in range(ncols) if c not in pivots]
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    names = []
    for c in free:
        i, j = pairs[c // n]
        k = c % n
        names.append(f"m{i + 1}_{j + 1}_{k + 1}")
    basis = tuple(
        _product_from_unknowns(v, n, f"{b.name}:{name}", b.basis) for v, name in zip(kernel, names)
    )
    return ProductSpace(b, basis, tuple(names))


def product_space_from_basis(
    b: AlgebraTable, basis: Sequence[AlgebraTable], coordinates: Sequence[str], *, check_complete: bool = True
) -> ProductSpace:
    """Wrap user-chosen products (e.g. a theorem's general table) as a space.

    Every product must satisfy the transposed Leibniz rule. With
    ``check_complete`` the span must also equal the full compatible space.
    """
    n = b.dim
    ncols = n * n * (n + 1) // 2
    red = RowReducer(ncols)
    for q in basis:
        if q.dim != n or q.symmetry != "symmetric":
            raise ValueError("basis products must be symmetric tables of the bracket's dimension")
        bad = transposed_leibniz_residual(b, q)
        if bad:
            raise ValueError(f"basis product {q.name!r} violates the transposed Leibniz rule at {bad[0].indices}")
        if not red.add(_product_unknowns(q)):
            raise ValueError(f"basis product {q.name!r} is linearly dependent on the others")
    if check_complete:
        full = tpa_linear_space(b)
        if full.dim != len(basis):
            raise ValueError(f"given products span dimension {len(basis)}, compatible space has {full.dim}")
    return ProductSpace(b, tuple(basis), tuple(coordinates))


# -- quadratic associativity constraints ----------------------------------------


@dataclass(frozen=True)
class QuadraticConstraint:
    """Polynomial ``Σ coeff · monomial = 0``; monomials are sorted tuples of names.

    ``order`` fixes the variable ordering used for canonical sorting.
    """

    terms: tuple  # ((monomial, Fraction), ...)
    order: tuple = field(default=(), compare=False)

    @classmethod
    def from_terms(cls, terms: Mapping, order: Sequence[str] = ()) -> "QuadraticConstraint":
        order = tuple(order) or tuple(sorted({v for mono in terms for v in mono}))
        rank = {v: i for i, v in enumerate(order)}
        acc: dict = {}
        for mono, c in terms.items():
            key = tuple(sorted(mono, key=lambda v: rank[v]))
            acc[key] = acc.get(key, ZERO) + to_rational(c)
        items = sorted(((m, c) for m, c in acc.items() if c), key=lambda mc: [rank[v] for v in mc[0]])
        return cls(tuple(items), order)

    @property
    def variables(self) -> tuple:
        seen = {v for mono, _ in self.terms for v in mono}
        return tuple(v for v in self.order if v in seen)

    def canonical(self) -> "QuadraticConstraint":
        """Primitive integer coefficients with a positive leading term."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for _, c in self.terms))
        ints = [int(c * den) for _, c in self.terms]
        g = 0
        for x in ints:
            g = gcd(g, x)
        sign = -1 if ints[0] < 0 else 1
        return QuadraticConstraint(
            tuple((m, Fraction(sign * x // g)) for (m, _), x in zip(self.terms, ints)), self.order
        )

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        total = ZERO
        for mono, c in self.terms:
            term = c
            for v in mono:
                term *= to_rational(values.get(v, 0))
            total += term
        return total

    def is_proportional_to(self, other: "QuadraticConstraint") -> bool:
        a, b = self.canonical(), other.canonical()
        return dict(a.terms) == dict(b.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            body = "*".join(mono) or "1"
            if c == 1 and mono:
                parts.append(body)
            elif c == -1 and mono:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}" if mono else str(c))
        return " + ".join(parts).replace("+ -", "- ")


def associativity_constraints(space: ProductSpace) -> list:
    """Associator coordinates of the generic product ``Σ c_a basis_a``.

    Each coordinate is a quadratic form in the ``c_a``; the nonzero ones are
    canonicalized and deduplicated.
    """
    n = space.bracket.dim
    m = space.dim
    names = space.coordinates
    prods = [q for q in space.basis]
    found = {}
    for i, j, k in iproduct(range(n), repeat=3):
        # (e_i e_j) e_k − e_i (e_j e_k), with the inner product from basis a and
        # the outer from basis b.
        poly: dict = {}
        for a in range(m):
            u = prods[a].product(i, j)
            w = prods[a].product(j, k)
            if not u and not w:
                continue
            for bb in range(m):
                left = _apply_sparse(prods[bb], u, _unit(k)) if u else {}
                right = _apply_sparse(prods[bb], _unit(i), w) if w else {}
                diff = _sub(left, right)
                for l, c in diff.items():
                    mono = (min(a, bb), max(a, bb))
                    slot = poly.setdefault(l, {})
                    slot[mono] = slot.get(mono, ZERO) + c
        for l, coeffs in poly.items():
            terms = {(names[x], names[y]): c for (x, y), c in coeffs.items() if c}
            if terms:
                qc = QuadraticConstraint.from_terms(terms, names).canonical()
                if qc.terms:
                    found[qc.terms] = qc
    return sorted(found.values(), key=lambda q: _sort_key(q, names))


def _sort_key(q: QuadraticConstraint, order: Sequence[str]) -> list:
    rank = {v: i for i, v in enumerate(order)}
    return [([rank[v] for v in mono], c) for mono, c in q.terms]


@dataclass(frozen=True)
class Component:
    """One zero/nonzero pattern of a constraint set.

    ``relations`` lists the constraints that survive the pattern; a component
    is resolved when they are all gone, in which case the witness "every
    nonzero variable equals 1" satisfies the original system.
    """

    zero: tuple
    nonzero: tuple
    relations: tuple

    @property
    def resolved(self) -> bool:
        return not self.relations

    def witness(self) -> dict:
        return {**{v: Fraction(0) for v in self.zero}, **{v: Fraction(1) for v in self.nonzero}}

    def __str__(self) -> str:
        head = "{" + ", ".join(f"{v}=0" for v in self.zero) + "}"
        if self.relations:
            head += " unresolved: " + "; ".join(str(r) for r in self.relations)
        return head


def _restrict(q: QuadraticConstraint, zero: frozenset) -> QuadraticConstraint:
    return QuadraticConstraint(tuple((m, c) for m, c in q.terms if not zero.intersection(m)), q.order)


def case_split_solve(constraints: Iterable[QuadraticConstraint], max_vars: int = 12) -> list:
    """Bounded zero/nonzero case analysis of a quadratic constraint set.

    A pattern is contradictory when some constraint reduces to a single
    monomial in nonzero variables. Resolved patterns (all constraints vanish)
    form an up-set under the zero set; their minimal zero sets are returned as
    components. Consistent patterns that leave genuine relations are returned
    flagged as unresolved.
    """
    constraints = [q for q in constraints if q.terms]
    order: list = []
    for q in constraints:
        for v in q.order or q.variables:
            if v not in order and v in q.variables:
                order.append(v)
    if len(order) > max_vars:
        raise ValueError(f"case split over {len(order)} variables exceeds the bound max_vars={max_vars}")
    resolved = []
    unresolved = []
    for mask in range(1 << len(order)):
        zero = frozenset(v for bit, v in enumerate(order) if mask >> bit & 1)
        remaining = []
        contradiction = False
        for q in constraints:
            r = _restrict(q, zero)
            if not r.terms:
                continue
            if len(r.terms) == 1:
                contradiction = True
                break
            remaining.append(r.canonical())
        if contradiction:
            continue
        if remaining:
            unresolved.append((zero, tuple(dict.fromkeys(remaining))))
        else:
            resolved.append(zero)
    minimal = [z for z in resolved if not any(o < z for o in resolved)]
    out = [Component(_ordered(z, order), _ordered(set(order) - z, order), ()) for z in minimal]
    # resolved patterns form an up-set, so no unresolved pattern is covered
    for zero, rel in unresolved:
        out.append(Component(_ordered(zero, order), _ordered(set(order) - zero, order), rel))
    out.sort(key=lambda c: (len(c.zero), [order.index(v) for v in c.zero], len(c.relations)))
    return out


def _ordered(vs, order: Sequence[str]) -> tuple:
    return tuple(v for v in order if v in vs)
