"""Solvable Lie algebras with naturally graded filiform nilradical and their
transposed Poisson product tables.

Basis order is ``e1 .. e_m`` followed by ``x`` (or ``x1, x2``), where ``m`` is
the nilradical dimension: ``n`` for the ``n_{n,1}`` based families and ``2n``
for the ``Q_{2n}`` based ones. Every constructor reproduces the printed table
verbatim; nothing is silently corrected.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .algebra import AlgebraTable
from .linalg import LinearMap, Scalar, format_rational, to_rational
from .tpa import ProductSpace, product_space_from_basis

FAMILIES = ("n_n1", "Q_2n", "s1", "s2", "s3", "s4", "s_n2", "r_lambda", "r_eps", "r_lambdas", "r_2n2")

TITLES = {
    "n_n1": "naturally graded filiform n_{n,1}",
    "Q_2n": "naturally graded filiform Q_{2n}",
    "s1": "s^1_{n,1}(beta)",
    "s2": "s^2_{n,1}",
    "s3": "s^3_{n,1}",
    "s4": "s^4_{n,1}(alpha_3..alpha_{n-1})",
    "s_n2": "s_{n,2}",
    "r_lambda": "r_{2n+1}(lambda)",
    "r_eps": "r_{2n+1}(2-n, eps)",
    "r_lambdas": "r_{2n+1}(lambda_5..lambda_{2n-1})",
    "r_2n2": "r_{2n+2}",
}

GENERIC_POOL = (Fraction(7), Fraction(-5), Fraction(13, 3))

_Q_BASED = {"Q_2n", "r_lambda", "r_eps", "r_lambdas", "r_2n2"}


def _min_n(family: str) -> int:
    return 3 if family in _Q_BASED or family == "n_n1" else 4


def param_names(family: str, n: int) -> list:
    if family == "s1":
        return ["beta"]
    if family == "s4":
        return [f"alpha{i}" for i in range(3, n)]
    if family == "r_lambda":
        return ["lambda"]
    if family == "r_eps":
        return ["eps"]
    if family == "r_lambdas":
        return [f"lambda{k}" for k in range(5, 2 * n, 2)]
    return []


def nil_dim(family: str, n: int) -> int:
    return 2 * n if family in _Q_BASED else n


def extension_names(family: str) -> list:
    if family in ("n_n1", "Q_2n"):
        return []
    if family in ("s_n2", "r_2n2"):
        return ["x1", "x2"]
    return ["x"]


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; valid families: {', '.join(FAMILIES)}")


@dataclass(frozen=True, eq=False)
class FamilySpec:
    family: str
    n: int
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        _check_family(self.family)
        lo = _min_n(self.family)
        if not isinstance(self.n, int) or self.n < lo:
            raise ValueError(f"{self.family} requires n >= {lo}, got n={self.n}")
        names = param_names(self.family, self.n)
        given = {k: to_rational(v) for k, v in dict(self.params).items()}
        missing = [k for k in names if k not in given]
        extra = sorted(set(given) - set(names))
        if missing:
            raise ValueError(f"{self.family} (n={self.n}) is missing parameters {missing}")
        if extra:
            raise ValueError(f"{self.family} (n={self.n}) does not take parameters {extra}; expected {names}")
        if self.family == "r_eps" and given["eps"] not in (1, -1):
            raise ValueError(f"r_eps requires eps in {{-1, 1}}, got {given['eps']}")
        object.__setattr__(self, "params", given)

    def __eq__(self, other):
        if not isinstance(other, FamilySpec):
            return NotImplemented
        return (self.family, self.n, self.params) == (other.family, other.n, other.params)

    def __hash__(self):
        return hash((self.family, self.n, tuple(sorted(self.params.items()))))

    @property
    def m(self) -> int:
        return nil_dim(self.family, self.n)

    @property
    def dim(self) -> int:
        return self.m + len(extension_names(self.family))

    @property
    def basis(self) -> list:
        return [f"e{i}" for i in range(1, self.m + 1)] + extension_names(self.family)

    def index(self, name: str) -> int:
        """1-based position of a basis name such as ``"e3"`` or ``"x"``."""
        return self.basis.index(name) + 1

    @property
    def name(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}(n={self.n}{', ' + inner if inner else ''})"

    def params_json(self) -> dict:
        return {k: format_rational(v) for k, v in self.params.items()}

    @property
    def branch(self) -> str:
        return branch_of(self)


# -- branches ---------------------------------------------------------------------


def special_values(family: str, n: int) -> dict:
    """Special values of the scalar family parameter, keyed by branch label."""
    if family == "s1":
        return {"beta=1": Fraction(1), "beta=2": Fraction(2), "beta=n-2": Fraction(n - 2)}
    if family == "r_lambda":
        return {
            "lambda=2n-3": Fraction(2 * n - 3),
            "lambda=(5-2n)/2": Fraction(5 - 2 * n, 2),
            "lambda=(3-2n)/2": Fraction(3 - 2 * n, 2),
            "lambda=2-n": Fraction(2 - n),
        }
    return {}


def branch_of(spec: FamilySpec) -> str:
    f, n = spec.family, spec.n
    if f == "s1":
        beta = spec.params["beta"]
        if beta == 1:
            return "beta=1"
        if beta == 2:
            return "beta=2"
        if beta == n - 2:
            return "beta=n-2"
        return "generic"
    if f == "r_lambda":
        lam = spec.params["lambda"]
        for label in ("lambda=2n-3", "lambda=(5-2n)/2", "lambda=(3-2n)/2"):
            if lam == special_values(f, n)[label]:
                return label
        return "generic"
    return "generic"


def generic_values(family: str, n: int) -> list:
    """Generic samples of the scalar parameter: the pool minus the special values."""
    excluded = {v for k, v in special_values(family, n).items() if k != "lambda=2-n"}
    return [v for v in GENERIC_POOL if v not in excluded]


def default_params(family: str, n: int) -> dict:
    if family in ("s1", "r_lambda"):
        key = "beta" if family == "s1" else "lambda"
        return {key: generic_values(family, n)[0]}
    if family == "s4":
        return {name: GENERIC_POOL[i % 3] for i, name in enumerate(param_names(family, n))}
    if family == "r_eps":
        return {"eps": Fraction(1)}
    if family == "r_lambdas":
        names = param_names(family, n)
        return {name: (Fraction(1) if i == 0 else GENERIC_POOL[i % 3]) for i, name in enumerate(names)}
    return {}


def parameter_grid(family: str, n: int) -> list:
    """``(label, params)`` sample points: generic draws plus every special value."""
    if family in ("s1", "r_lambda"):
        key = "beta" if family == "s1" else "lambda"
        pts = [("generic", {key: v}) for v in generic_values(family, n)]
        seen = set()
        for label, v in special_values(family, n).items():
            if v in seen:
                continue
            seen.add(v)
            pts.append((label, {key: v}))
        return pts
    if family == "r_eps":
        return [("eps=1", {"eps": Fraction(1)}), ("eps=-1", {"eps": Fraction(-1)})]
    if family == "s4":
        names = param_names(family, n)
        return [("generic", default_params(family, n)), ("zero", {k: Fraction(0) for k in names})]
    if family == "r_lambdas":
        names = param_names(family, n)
        return [("generic", default_params(family, n)), ("zero", {k: Fraction(0) for k in names})]
    return [("generic", {})]


# -- brackets ---------------------------------------------------------------------


class _Table:
    """Accumulates 1-based products; names like ``"x"`` resolve via the spec."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.entries: dict = {}

    def _idx(self, a) -> int:
        return self.spec.index(a) if isinstance(a, str) else a

    def set(self, a, b, value: Mapping) -> None:
        i, j = self._idx(a), self._idx(b)
        coeffs = {self._idx(k): to_rational(c) for k, c in value.items()}
        key = (i, j)
        if key in self.entries or (j, i) in self.entries:
            raise ValueError(f"product ({a}, {b}) defined twice")
        coeffs = {k: c for k, c in coeffs.items() if c}
        if coeffs:
            self.entries[key] = coeffs

    def add(self, a, b, value: Mapping) -> None:
        """Accumulate into ``a·b`` (symmetric tables only)."""
        i, j = sorted((self._idx(a), self._idx(b)))
        cur = self.entries.pop((i, j), None) or self.entries.pop((j, i), None) or {}
        for k, c in value.items():
            k = self._idx(k)
            cur[k] = cur.get(k, Fraction(0)) + to_rational(c)
        cur = {k: c for k, c in cur.items() if c}
        if cur:
            self.entries[(i, j)] = cur

    def bracket(self, name: str) -> AlgebraTable:
        return AlgebraTable(self.spec.dim, self.entries, symmetry="antisymmetric", name=name, basis=self.spec.basis)

    def product(self, name: str) -> AlgebraTable:
        return AlgebraTable(self.spec.dim, self.entries, symmetry="symmetric", name=name, basis=self.spec.basis)


def _n_n1(t: _Table, n: int) -> None:
    for i in range(2, n):
        t.set(i, 1, {i + 1: 1})


def _q_2n(t: _Table, n: int) -> None:
    for i in range(2, 2 * n - 1):
        t.set(i, 1, {i + 1: 1})
    for i in range(2, n + 1):
        t.set(i, 2 * n + 1 - i, {2 * n: (-1) ** i})


def make_algebra(spec: FamilySpec) -> AlgebraTable:
    f, n, p = spec.family, spec.n, spec.params
    t = _Table(spec)
    if f in _Q_BASED:
        _q_2n(t, n)
    else:
        _n_n1(t, n)
    if f == "s1":
        beta = p["beta"]
        t.set(1, "x", {1: 1})
        for i in range(2, n + 1):
            t.set(i, "x", {i: i - 2 + beta})
    elif f == "s2":
        for i in range(2, n + 1):
            t.set(i, "x", {i: 1})
    elif f == "s3":
        t.set(1, "x", {1: 1, 2: 1})
        for i in range(2, n + 1):
            t.set(i, "x", {i: i - 1})
    elif f == "s4":
        for i in range(2, n + 1):
            v = {i: Fraction(1)}
            for l in range(i + 2, n + 1):
                v[l] = p[f"alpha{l + 1 - i}"]
            t.set(i, "x", v)
    elif f == "s_n2":
        t.set(1, "x1", {1: 1})
        for i in range(3, n + 1):
            t.set(i, "x1", {i: i - 2})
        for i in range(2, n + 1):
            t.set(i, "x2", {i: 1})
    elif f == "r_lambda":
        lam = p["lambda"]
        t.set(1, "x", {1: 1})
        for i in range(2, 2 * n):
            t.set(i, "x", {i: i - 2 + lam})
        t.set(2 * n, "x", {2 * n: 2 * n - 3 + 2 * lam})
    elif f == "r_eps":
        t.set(1, "x", {1: 1, 2 * n: p["eps"]})
        for i in range(2, 2 * n):
            t.set(i, "x", {i: i - n})
        t.set(2 * n, "x", {2 * n: 1})
    elif f == "r_lambdas":
        for i in range(0, 2 * n - 5):
            v = {2 + i: Fraction(1)}
            for k in range(2, (2 * n - 2 - i) // 2 + 1):
                v[2 * k + 1 + i] = v.get(2 * k + 1 + i, Fraction(0)) + p[f"lambda{2 * k + 1}"]
            t.set(2 + i, "x", v)
        for i in (1, 2, 3):
            t.set(2 * n - i, "x", {2 * n - i: 1})
        t.set(2 * n, "x", {2 * n: 2})
    elif f == "r_2n2":
        for i in range(1, 2 * n):
            t.set(i, "x1", {i: i})
        t.set(2 * n, "x1", {2 * n: 2 * n + 1})
        for i in range(2, 2 * n):
            t.set(i, "x2", {i: 1})
        t.set(2 * n, "x2", {2 * n: 2})
    return t.bracket(spec.name)


# -- half-derivation dimensions -------------------------------------------------------


def expected_halfderivation_dim(spec: FamilySpec) -> Optional[int]:
    """Free-parameter count of the matching ½-derivation theorem branch.

    None for the bare nilradicals, which have no theorem of their own here.
    """
    f, n = spec.family, spec.n
    if f in ("n_n1", "Q_2n"):
        return None
    if f in ("s_n2", "r_2n2"):
        return 2
    if f in ("s2", "s3", "s4"):
        return n
    if f == "s1":
        beta = spec.params["beta"]
        if n == 4:
            return 7 if beta == 2 else 4
        return n + 1 if beta in (2, n - 2) else n
    if f in ("r_eps", "r_lambdas"):
        return 3
    lam = spec.params["lambda"]
    if lam == 2 * n - 3:
        return 4
    if lam == Fraction(5 - 2 * n, 2):
        return 2 * n + 1
    return 3


def expected_tpa_linear_dim(spec: FamilySpec) -> Optional[int]:
    """Dimension of the compatible-product space read off the theorem proofs."""
    f, n = spec.family, spec.n
    if f == "r_lambda":
        lam = spec.params["lambda"]
        if lam == 2 * n - 3:
            return 4
        if lam == Fraction(5 - 2 * n, 2):
            return 2 * n + 1
        return 2
    if f == "r_eps":
        return 2
    if f == "r_lambdas":
        return 3
    if f == "r_2n2":
        return 1
    if f == "s1" and n >= 5 and spec.branch == "generic":
        return n - 1
    return None


# -- product tables -------------------------------------------------------------------


@dataclass(frozen=True)
class Variant:
    key: str
    branches: tuple
    params: Callable  # n -> list of parameter names
    build: Callable  # (table, spec, params) -> None
    disputed: str = ""
    min_n: int = 0
    max_n: int = 10 ** 9
    # "printed" tables are verbatim; "corrected" ones are engine-derived readings
    kind: str = "printed"
    # analysis of a printed table known to fail, surfaced in reports
    known_issue: str = ""


def _rng(a: int, b: int) -> range:
    return range(a, b + 1)


def _names(prefix: str, lo: int, hi: int) -> list:
    return [f"{prefix}{i}" for i in _rng(lo, hi)]


def _sum_into(v: dict, k: int, c) -> None:
    v[k] = v.get(k, Fraction(0)) + c


# s^1_{4,1}


def _s14_tp1(t, s, a):
    t.set(1, 1, {3: a["alpha1"], 4: a["alpha2"]})
    t.set(1, "x", {3: a["alpha2"], 4: a["alpha3"]})
    t.set("x", "x", {3: a["alpha3"], 4: a["alpha4"]})


def _s14_tp2(t, s, a):
    a1, a2, a3, a4, a5 = (a[f"alpha{i}"] for i in range(1, 6))
    h = Fraction(1, 2)
    t.set(1, 1, {2: 1, 3: a1, 4: a2})
    t.set(1, 2, {3: a3, 4: h * a1 * a3})
    t.set(1, 3, {4: h * a3})
    t.set(2, 2, {4: h * a3 * a3})
    t.set(1, "x", {1: a3, 2: a1, 3: 2 * a2, 4: a4})
    t.set(3, "x", {3: a3, 4: h * a1 * a3})
    t.set(2, "x", {2: a3, 3: a1 * a3, 4: a2 * a3})
    t.set(4, "x", {4: a3})
    t.set("x", "x", {1: a1 * a3, 2: 2 * a2, 3: 2 * a4, 4: a5, "x": a3})


def _s14_tp3(t, s, a):
    a1, a2, a3, a4 = (a[f"alpha{i}"] for i in range(1, 5))
    t.set(1, 1, {3: 1, 4: a1})
    t.set(1, 2, {4: a2})
    t.set(1, "x", {2: 1, 3: 2 * a1, 4: a3})
    t.set(2, "x", {3: 2 * a2, 4: 2 * a1 * a2})
    t.set(3, "x", {4: a2})
    t.set("x", "x", {1: 2 * a2, 2: 2 * a1, 3: 2 * a3, 4: a4})


def _s14_tp4(t, s, a):
    a1, a2, a3 = (a[f"alpha{i}"] for i in range(1, 4))
    t.set(1, 1, {4: 1})
    t.set(1, "x", {3: 2, 4: a1})
    t.set(2, "x", {4: a2})
    t.set("x", "x", {2: 2, 3: 2 * a1, 4: a3})


def _s14_tp5(t, s, a):
    a1, a2, a3, a4, a5 = (a[f"alpha{i}"] for i in range(1, 6))
    t.set(1, 2, {4: a1})
    t.set(2, 2, {4: a2})
    t.set(1, "x", {4: a3})
    t.set(2, "x", {3: 2 * a1, 4: a4})
    t.set(3, "x", {4: a1})
    t.set("x", "x", {1: 2 * a1, 3: 2 * a3, 4: a5})


def _s14_tp6(t, s, a):
    beta = s.params["beta"]
    a1, a2, a3 = (a[f"alpha{i}"] for i in range(1, 4))
    t.set(1, 1, {4: a1})
    t.set(1, "x", {3: beta * a1, 4: a2})
    t.set("x", "x", {2: (beta - 1) * beta * a1, 3: beta * a2, 4: a3})


# s^1_{n,1}, n >= 5


def _s1n_tp1(t, s, a):
    n = s.n
    t.set(1, 1, {j: a[f"alpha{j}"] for j in _rng(3, n)})
    v = {tt: (tt - 2) * a[f"alpha{tt + 1}"] for tt in _rng(2, n - 1)}
    _sum_into(v, n, a["beta3"])
    t.set(1, "x", v)
    v = {tt: (tt - 2) * (tt - 1) * a[f"alpha{tt + 2}"] for tt in _rng(2, n - 2)}
    _sum_into(v, n - 1, (n - 3) * a["beta3"])
    _sum_into(v, n, a["beta5"])
    t.set("x", "x", v)


def _s1n_tp2(t, s, a):
    n = s.n
    t.set(1, 1, {j: a[f"alpha{j}"] for j in _rng(2, n)})
    v = {tt: (tt - 1) * a[f"alpha{tt + 1}"] for tt in _rng(2, n - 1)}
    _sum_into(v, n, a["beta3"])
    t.set(1, "x", v)
    v = {tt: (tt * tt - tt) * a[f"alpha{tt + 2}"] for tt in _rng(2, n - 2)}
    _sum_into(v, n - 1, (n - 2) * a["beta3"])
    _sum_into(v, n, a["beta5"])
    t.set("x", "x", v)


def _s1n_tp3(t, s, a):
    n = s.n
    t.set(1, 1, {j: a[f"alpha{j}"] for j in _rng(5, n)})
    t.set(1, 2, {n: a["beta1"]})
    t.set(2, 2, {n: a["beta2"]})
    v = {tt: (n + tt - 3) * a[f"alpha{tt + 1}"] for tt in _rng(4, n - 1)}
    _sum_into(v, n, a["beta3"])
    t.set(1, "x", v)
    t.set(2, "x", {n: a["beta4"]})
    v = {tt: (n + tt - 5) * (n + tt - 4) * a[f"alpha{tt + 2}"] for tt in _rng(3, n - 2)}
    _sum_into(v, n - 1, (2 * n - 6) * a["beta3"])
    _sum_into(v, n, a["beta5"])
    t.set("x", "x", v)


def _s1n_tp4(t, s, a):
    n = s.n
    beta = s.params["beta"]
    v = {4: Fraction(1)}
    for j in _rng(5, n):
        _sum_into(v, j, a[f"alpha{j}"])
    t.set(1, 1, v)
    v = {4: beta}
    for tt in _rng(4, n - 1):
        _sum_into(v, tt, (n + tt - 5) * a[f"alpha{tt + 1}"])
    _sum_into(v, n, a["beta3"])
    t.set(1, "x", v)
    t.set(2, "x", {n: a["beta4"]})
    v = {2: Fraction((n - 3) * (n - 2))}
    for tt in _rng(3, n - 2):
        _sum_into(v, tt, (n + tt - 5) * (n + tt - 4) * a[f"alpha{tt + 2}"])
    _sum_into(v, n - 1, (2 * n - 6) * a["beta3"])
    _sum_into(v, n, a["beta5"])
    t.set("x", "x", v)


def _s1n_tp5(t, s, a):
    n = s.n
    beta = s.params["beta"]
    t.set(1, 1, {j: a[f"alpha{j}"] for j in _rng(4, n)})
    v = {tt: (tt - 3 + beta) * a[f"alpha{tt + 1}"] for tt in _rng(3, n - 1)}
    _sum_into(v, n, a["beta3"])
    t.set(1, "x", v)
    v = {tt: (tt - 3 + beta) * (tt - 2 + beta) * a[f"alpha{tt + 2}"] for tt in _rng(2, n - 2)}
    _sum_into(v, n - 1, (n - 4 + beta) * a["beta3"])
    _sum_into(v, n, a["beta5"])
    t.set("x", "x", v)


def _s1n_general(t, s, a):
    """Pre-associativity table; absent coordinates count as zero."""
    n = s.n
    beta = s.params["beta"]
    g = lambda k: a.get(k, Fraction(0))  # noqa: E731
    t.set(1, 1, {j: g(f"alpha{j}") for j in _rng(2, n)})
    t.set(1, 2, {n: g("beta1")})
    t.set(2, 2, {n: g("beta2")})
    v = {tt: (tt - 3 + beta) * g(f"alpha{tt + 1}") for tt in _rng(2, n - 1)}
    _sum_into(v, n, g("beta3"))
    t.set(1, "x", v)
    t.set(2, "x", {n: g("beta4")})
    v = {tt: (tt - 3 + beta) * (tt - 2 + beta) * g(f"alpha{tt + 2}") for tt in _rng(2, n - 2)}
    _sum_into(v, n - 1, (n - 4 + beta) * g("beta3"))
    _sum_into(v, n, g("beta5"))
    t.set("x", "x", v)


# s^2, s^3, s^4, s_{n,2}


def _s2_tp(t, s, a):
    n = s.n
    t.set(1, 1, {tt: a[f"alpha{tt}"] for tt in _rng(4, n)})
    v = {tt: a[f"alpha{tt + 1}"] for tt in _rng(3, n - 1)}
    _sum_into(v, n, a["gamma1"])
    t.set(1, "x", v)
    v = {tt: a[f"alpha{tt + 2}"] for tt in _rng(2, n - 2)}
    _sum_into(v, n - 1, a["gamma1"])
    _sum_into(v, n, a["gamma2"])
    t.set("x", "x", v)


def _s3_tp(t, s, a):
    n = s.n
    t.set(1, 1, {tt: a[f"alpha{tt}"] for tt in _rng(3, n)})
    v = {tt: (tt - 2) * a[f"alpha{tt + 1}"] for tt in _rng(3, n - 1)}
    _sum_into(v, n, a["gamma1"])
    t.set(1, "x", v)
    v = {tt: (tt - 2) * (tt - 1) * a[f"alpha{tt + 2}"] for tt in _rng(3, n - 2)}
    _sum_into(v, n - 1, (n - 3) * a["gamma1"])
    _sum_into(v, n, a["gamma2"])
    t.set("x", "x", v)


def _s4_tp(t, s, a):
    n = s.n
    al = lambda r: s.params[f"alpha{r}"]  # noqa: E731
    be = lambda r: a[f"beta{r}"]  # noqa: E731
    t.set(1, 1, {tt: be(tt) for tt in _rng(4, n)})
    v = {}
    for tt in _rng(3, n - 1):
        _sum_into(v, tt, be(tt + 1) + sum((al(r) * be(tt - r + 2) for r in _rng(3, tt - 2)), Fraction(0)))
    _sum_into(v, n, a["gamma1"])
    t.set(1, "x", v)
    v = {}
    for i in _rng(2, n - 2):
        c = be(i + 2)
        for j in _rng(3, i - 1):
            inner = 2 * be(i - j + 3) + sum((al(r) * be(i - j - r + 4) for r in _rng(3, i - j)), Fraction(0))
            c += al(j) * inner
        _sum_into(v, i, c)
    c = a["gamma1"]
    for i in _rng(3, n - 2):
        c += al(i) * (be(n - i + 2) + sum((al(r) * be(n - i - r + 3) for r in _rng(3, n - i - 1)), Fraction(0)))
    _sum_into(v, n - 1, c)
    _sum_into(v, n, a["gamma2"])
    t.set("x", "x", v)


def _sn2_tp(t, s, a):
    n = s.n
    t.set("x1", "x1", {n: (n - 2) ** 2})
    t.set("x2", "x1", {n: n - 2})
    t.set("x2", "x2", {n: 1})


# r_{2n+1}(lambda)


def _rl_tp1(t, s, a):
    t.set("x", "x", {2 * s.n: 1})


def _rl_tp2(t, s, a):
    n = s.n
    t.set(2, "x", {2 * n: 1})
    t.set("x", "x", {2 * n - 1: 3 - 2 * n})


def _rl_tp3(t, s, a):
    n = s.n
    t.set(2, "x", {2 * n: 1})
    t.set("x", "x", {2 * n - 1: 3 - 2 * n, 2 * n: 1})


def _rl_general(t, s, a):
    n = s.n
    t.set(2, "x", {2 * n: a["alpha"]})
    t.set("x", "x", {2 * n - 1: (3 - 2 * n) * a["alpha"], 2 * n: a["beta"]})


# r_{2n+1}(2n-3)


def _r23_general(t, s, a):
    n = s.n
    t.set(2, 2, {2 * n - 1: a["alpha1"], 2 * n: a["alpha2"]})
    t.set(2, "x", {2 * n - 1: (3 - 2 * n) * a["alpha2"], 2 * n: a["alpha3"]})
    t.set("x", "x", {2 * n - 1: (3 - 2 * n) * a["alpha3"], 2 * n: a["alpha4"]})


def _r23(e22=(0, 0), e2x=(0, 0), xx=(0, 0)):
    """Table from coefficient pairs ``(on e_{2n-1}, on e_{2n})``.

    Coefficients on ``e_{2n-1}`` in ``e2·x`` and ``x·x`` are multiples of
    ``(3-2n)``; pass the multiplier. Strings name free parameters.
    """

    def val(c, a):
        return a[c] if isinstance(c, str) else Fraction(c)

    def build(t, s, a):
        n = s.n
        p, q = 2 * n - 1, 2 * n
        if any(e22):
            t.set(2, 2, {p: val(e22[0], a), q: val(e22[1], a)})
        if any(e2x):
            t.set(2, "x", {p: (3 - 2 * n) * val(e2x[0], a), q: val(e2x[1], a)})
        if any(xx):
            t.set("x", "x", {p: (3 - 2 * n) * val(xx[0], a), q: val(xx[1], a)})

    return build


# r_{2n+1}((5-2n)/2)


def _r52_tp1(pattern: bool):
    def build(t, s, a):
        n = s.n
        h = Fraction(1, 2)
        aa = lambda k: Fraction(0) if k == 4 else a[f"a{k}"]  # noqa: E731
        v = {4: Fraction(1)}
        for tt in _rng(5, 2 * n):
            _sum_into(v, tt, a[f"a{tt}"])
        t.set(1, 1, v)
        for j in _rng(3, 2 * n - 2):
            c = Fraction((-1) ** (j - 1), 2) * aa(2 * n + 2 - j)
            if j == 2 * n - 2:
                c += -h
            t.set(1, j, {2 * n: c})
        v = {3: Fraction(5 - 2 * n, 2)}
        for tt in _rng(3, 2 * n - 2):
            _sum_into(v, tt, Fraction(2 * tt - 2 * n - 1, 2) * aa(tt + 1))
        _sum_into(v, 2 * n, a["b2"])
        t.set(1, "x", v)
        t.set(2, "x", {2 * n: a["b3"]})
        for j in _rng(4, 2 * n - 2):
            t.set(j, "x", {2 * n: Fraction((-1) ** (j - 1) * (2 * n + 3 - 2 * j), 4) * aa(2 * n + 3 - j)})
        last = Fraction(5 - 2 * n, 4) if pattern else Fraction(-(4 * n + 1), 4)
        t.set(2 * n - 1, "x", {2 * n: last})
        v = {2: Fraction((3 - 2 * n) * (5 - 2 * n), 4)}
        for tt in _rng(3, 2 * n - 3):
            _sum_into(v, tt, Fraction((2 * tt - 2 * n - 1) * (2 * tt - 2 * n + 1), 4) * aa(tt + 2))
        _sum_into(v, 2 * n - 1, a["b3"])
        _sum_into(v, 2 * n, a["b4"])
        t.set("x", "x", v)

    return build


def _r52_tp2(t, s, a):
    n = s.n
    t.set(1, 1, {tt: a[f"a{tt}"] for tt in _rng(5, 2 * n)})
    t.set(1, 2, {2 * n: a["b1"]})
    for j in _rng(3, 2 * n - 3):
        t.set(1, j, {2 * n: Fraction((-1) ** (j - 1), 2) * a[f"a{2 * n + 2 - j}"]})
    v = {tt: Fraction(2 * tt - 2 * n - 1, 2) * a[f"a{tt + 1}"] for tt in _rng(4, 2 * n - 2)}
    _sum_into(v, 2 * n - 1, a["b1"])
    _sum_into(v, 2 * n, a["b2"])
    t.set(1, "x", v)
    t.set(2, "x", {2 * n: a["b3"]})
    t.set(3, "x", {2 * n: Fraction(1, 2) * a["b1"]})
    for j in _rng(4, 2 * n - 2):
        t.set(j, "x", {2 * n: Fraction((-1) ** (j - 1) * (2 * n + 3 - 2 * j), 4) * a[f"a{2 * n + 3 - j}"]})
    v = {tt: Fraction((2 * tt - 2 * n - 1) * (2 * tt - 2 * n + 1), 4) * a[f"a{tt + 2}"] for tt in _rng(3, 2 * n - 3)}
    _sum_into(v, 2 * n - 2, Fraction(2 * n - 5, 2) * a["b1"])
    _sum_into(v, 2 * n - 1, a["b3"])
    _sum_into(v, 2 * n, a["b4"])
    t.set("x", "x", v)


def _r52_general(t, s, a, corrected: bool = False):
    """Printed general table; ``corrected`` restores the factor (3-2n) on the
    b1 and b3 terms that the ½-derivation form carries."""
    n = s.n
    k = Fraction(3 - 2 * n) if corrected else Fraction(1)
    t.set(1, 1, {tt: a[f"a{tt}"] for tt in _rng(4, 2 * n)})
    t.set(1, 2, {2 * n: a["b1"]})
    for j in _rng(3, 2 * n - 2):
        t.set(1, j, {2 * n: Fraction((-1) ** (j - 1), 2) * a[f"a{2 * n + 2 - j}"]})
    v = {tt: Fraction(2 * tt - 2 * n - 1, 2) * a[f"a{tt + 1}"] for tt in _rng(3, 2 * n - 2)}
    _sum_into(v, 2 * n - 1, k * a["b1"])
    _sum_into(v, 2 * n, a["b2"])
    t.set(1, "x", v)
    t.set(2, "x", {2 * n: a["b3"]})
    t.set(3, "x", {2 * n: k / 2 * a["b1"]})
    for j in _rng(4, 2 * n - 1):
        t.set(j, "x", {2 * n: Fraction((-1) ** (j - 1) * (2 * n + 3 - 2 * j), 4) * a[f"a{2 * n + 3 - j}"]})
    v = {tt: Fraction((2 * tt - 2 * n - 1) * (2 * tt - 2 * n + 1), 4) * a[f"a{tt + 2}"] for tt in _rng(2, 2 * n - 3)}
    _sum_into(v, 2 * n - 2, Fraction(2 * n - 5, 2) * k * a["b1"])
    _sum_into(v, 2 * n - 1, k * a["b3"])
    _sum_into(v, 2 * n, a["b4"])
    t.set("x", "x", v)


def _with(build, **fixed):
    """Builder with some general-table coordinates pinned."""

    def wrapped(t, s, a):
        build(t, s, {**a, **{k: Fraction(v) for k, v in fixed.items()}})

    return wrapped


def _r52_corrected(a4: int):
    return lambda t, s, a: _r52_general(t, s, {**a, "a4": Fraction(a4)}, corrected=True)


# r_{2n+1}(2-n, eps), r_{2n+1}(lambda_5, ...), r_{2n+2}


def _rlams(e22=0, e2x=0, xx=0):
    def build(t, s, a):
        q = 2 * s.n
        val = lambda c: a[c] if isinstance(c, str) else Fraction(c)  # noqa: E731
        if e22:
            t.set(2, 2, {q: val(e22)})
        if e2x:
            t.set(2, "x", {q: val(e2x)})
        if xx:
            t.set("x", "x", {q: val(xx)})

    return build


def _rlams_general(t, s, a):
    q = 2 * s.n
    t.set(2, 2, {q: a["alpha"]})
    t.set(2, "x", {q: a["beta"]})
    t.set("x", "x", {q: a["gamma"]})


def _r2n2_tp(t, s, a):
    n = s.n
    t.set("x1", "x1", {2 * n: (2 * n + 1) ** 2})
    t.set("x1", "x2", {2 * n: 2 * (2 * n + 1)})
    t.set("x2", "x2", {2 * n: 4})


def _r2n2_general(t, s, a):
    n = s.n
    al = a["alpha"]
    t.set("x1", "x1", {2 * n: (2 * n + 1) ** 2 * al})
    t.set("x1", "x2", {2 * n: 2 * (2 * n + 1) * al})
    t.set("x2", "x2", {2 * n: 4 * al})


_none = lambda n: []  # noqa: E731

TP5_DISPUTE = (
    "printed e_{2n-1}.x coefficient -(4n+1)/4 breaks the e_j.x pattern, which gives (5-2n)/4 at j=2n-1"
)
TP5_PATTERN = "pattern-consistent reading of the disputed e_{2n-1}.x entry"

ISSUE_S1_TP3 = (
    "printed e1.x coefficient (n+t-3) contradicts the general table's (t-3+beta) = (n+t-5) at beta=n-2, "
    "and e1.e2 = beta1 e_n is excluded by the restriction (n-4+beta) beta1 = 0"
)
ISSUE_S1_TP4 = "printed e1.x term beta e4 should be beta e3 (general table at alpha4=1, t=3)"
ISSUE_R52 = (
    "b1 and b3 terms lack the factor (3-2n) that the 1/2-derivation form puts on e_{2n-1} in phi(x); "
    "with the factor restored the relation a4 b1 = 0 disappears"
)
CORRECTED = "engine-corrected reading, not a printed table"

_R_GEN = ("generic", "lambda=(3-2n)/2")

VARIANTS = {
    "s1": [
        Variant("TP1", ("beta=1",), lambda n: _names("alpha", 1, 4), _s14_tp1, max_n=4),
        Variant("TP2", ("beta=2",), lambda n: _names("alpha", 1, 5), _s14_tp2, max_n=4),
        Variant("TP3", ("beta=2",), lambda n: _names("alpha", 1, 4), _s14_tp3, max_n=4),
        Variant("TP4", ("beta=2",), lambda n: _names("alpha", 1, 3), _s14_tp4, max_n=4),
        Variant("TP5", ("beta=2",), lambda n: _names("alpha", 1, 5), _s14_tp5, max_n=4),
        Variant("TP6", ("generic",), lambda n: _names("alpha", 1, 3), _s14_tp6, max_n=4),
        Variant("TP1", ("beta=1",), lambda n: _names("alpha", 3, n) + ["beta3", "beta5"], _s1n_tp1, min_n=5),
        Variant("TP2", ("beta=2",), lambda n: _names("alpha", 2, n) + ["beta3", "beta5"], _s1n_tp2, min_n=5),
        Variant(
            "TP3",
            ("beta=n-2",),
            lambda n: _names("alpha", 5, n) + _names("beta", 1, 5),
            _s1n_tp3,
            min_n=5,
            known_issue=ISSUE_S1_TP3,
        ),
        Variant(
            "TP4",
            ("beta=n-2",),
            lambda n: _names("alpha", 5, n) + ["beta3", "beta4", "beta5"],
            _s1n_tp4,
            min_n=5,
            known_issue=ISSUE_S1_TP4,
        ),
        Variant("TP5", ("generic",), lambda n: _names("alpha", 4, n) + ["beta3", "beta5"], _s1n_tp5, min_n=5),
        Variant(
            "TP3-corrected",
            ("beta=n-2",),
            lambda n: _names("alpha", 5, n) + _names("beta", 2, 5),
            _with(_s1n_general, alpha4=0),
            disputed=CORRECTED,
            min_n=5,
            kind="corrected",
        ),
        Variant(
            "TP4-corrected",
            ("beta=n-2",),
            lambda n: _names("alpha", 5, n) + ["beta3", "beta4", "beta5"],
            _with(_s1n_general, alpha4=1),
            disputed=CORRECTED,
            min_n=5,
            kind="corrected",
        ),
    ],
    "s2": [Variant("TP", ("generic",), lambda n: _names("alpha", 4, n) + ["gamma1", "gamma2"], _s2_tp)],
    "s3": [Variant("TP", ("generic",), lambda n: _names("alpha", 3, n) + ["gamma1", "gamma2"], _s3_tp)],
    "s4": [Variant("TP", ("generic",), lambda n: _names("beta", 4, n) + ["gamma1", "gamma2"], _s4_tp)],
    "s_n2": [Variant("TP", ("generic",), _none, _sn2_tp)],
    "r_lambda": [
        Variant("TP1", _R_GEN, _none, _rl_tp1),
        Variant("TP2", _R_GEN, _none, _rl_tp2),
        Variant("TP3", ("lambda=(3-2n)/2",), _none, _rl_tp3),
        Variant("TP1", ("lambda=2n-3",), _none, _r23(xx=(0, 1))),
        Variant("TP2", ("lambda=2n-3",), _none, _r23(e2x=(0, 1), xx=(1, 0))),
        Variant("TP3", ("lambda=2n-3",), _none, _r23(e2x=(0, 1), xx=(1, 1))),
        Variant("TP4", ("lambda=2n-3",), _none, _r23(e22=(0, 1), e2x=(1, 0))),
        Variant("TP5", ("lambda=2n-3",), _none, _r23(e22=(0, 1), e2x=(1, 0), xx=(0, 1))),
        Variant("TP6", ("lambda=2n-3",), lambda n: ["alpha"], _r23(e22=(0, 1), e2x=(1, 1), xx=(1, "alpha"))),
        Variant("TP7", ("lambda=2n-3",), _none, _r23(e22=(1, 0))),
        Variant("TP8", ("lambda=2n-3",), _none, _r23(e22=(1, 0), xx=(0, 1))),
        Variant("TP9", ("lambda=2n-3",), lambda n: ["alpha"], _r23(e22=(1, 0), e2x=(0, 1), xx=(1, "alpha"))),
        Variant(
            "TP10",
            ("lambda=2n-3",),
            lambda n: ["alpha", "beta"],
            _r23(e22=(1, 1), e2x=(1, "alpha"), xx=("alpha", "beta")),
        ),
        Variant(
            "TP1",
            ("lambda=(5-2n)/2",),
            lambda n: _names("a", 5, 2 * n) + ["b2", "b3", "b4"],
            _r52_tp1(pattern=False),
            disputed=TP5_DISPUTE,
            known_issue=ISSUE_R52,
        ),
        Variant(
            "TP1-pattern",
            ("lambda=(5-2n)/2",),
            lambda n: _names("a", 5, 2 * n) + ["b2", "b3", "b4"],
            _r52_tp1(pattern=True),
            disputed=TP5_PATTERN,
            known_issue=ISSUE_R52,
        ),
        Variant(
            "TP2",
            ("lambda=(5-2n)/2",),
            lambda n: _names("a", 5, 2 * n) + _names("b", 1, 4),
            _r52_tp2,
            known_issue=ISSUE_R52,
        ),
        Variant(
            "TP1-corrected",
            ("lambda=(5-2n)/2",),
            lambda n: _names("a", 5, 2 * n) + _names("b", 1, 4),
            _r52_corrected(1),
            disputed=CORRECTED,
            kind="corrected",
        ),
        Variant(
            "TP2-corrected",
            ("lambda=(5-2n)/2",),
            lambda n: _names("a", 5, 2 * n) + _names("b", 1, 4),
            _r52_corrected(0),
            disputed=CORRECTED,
            kind="corrected",
        ),
    ],
    "r_eps": [
        Variant("TP1", ("generic",), _none, _rl_tp1),
        Variant("TP2", ("generic",), _none, _rl_tp2),
    ],
    "r_lambdas": [
        Variant("TP1", ("generic",), _none, _rlams(xx=1)),
        Variant("TP2", ("generic",), _none, _rlams(e2x=1)),
        Variant("TP3", ("generic",), _none, _rlams(e2x=1, xx=1)),
        Variant("TP4", ("generic",), _none, _rlams(e22=1)),
        Variant("TP5", ("generic",), _none, _rlams(e22=1, xx=1)),
        Variant("TP6", ("generic",), lambda n: ["alpha"], _rlams(e22=1, e2x=1, xx="alpha")),
    ],
    "r_2n2": [Variant("TP", ("generic",), _none, _r2n2_tp)],
}


def _variants_for(family: str, n: int) -> list:
    return [v for v in VARIANTS.get(family, []) if v.min_n <= n <= v.max_n]


def _branches_for(family: str, n: int) -> list:
    out = []
    for v in _variants_for(family, n):
        for b in v.branches:
            if b not in out:
                out.append(b)
    if family == "s1" and n == 4:
        out = [b for b in out if b != "beta=n-2"]
    return out


def tp_variants(spec: FamilySpec) -> list:
    """Variant keys valid at the given family parameters."""
    branch = spec.branch
    if spec.family == "s1" and spec.n == 4 and spec.params["beta"] == 2:
        branch = "beta=2"
    return [v.key for v in _variants_for(spec.family, spec.n) if branch in v.branches]


def _find_variant(spec: FamilySpec, key: str) -> Variant:
    valid = tp_variants(spec)
    if key not in valid:
        every = sorted({v.key for v in _variants_for(spec.family, spec.n)}, key=_variant_order)
        hint = f"valid here: {', '.join(valid) or 'none'}"
        if key in every:
            raise ValueError(f"variant {key!r} of {spec.family} does not apply at {spec.name}; {hint}")
        raise ValueError(f"unknown variant {key!r} for {spec.family} (n={spec.n}); variants: {', '.join(every)}; {hint}")
    branch = spec.branch
    if spec.family == "s1" and spec.n == 4 and spec.params["beta"] == 2:
        branch = "beta=2"
    return next(v for v in _variants_for(spec.family, spec.n) if v.key == key and branch in v.branches)


def _variant_order(key: str):
    digits = "".join(ch for ch in key if ch.isdigit())
    return (int(digits) if digits else 0, key)


@dataclass(frozen=True, eq=False)
class TPSpec:
    family: FamilySpec
    variant: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        v = _find_variant(self.family, self.variant)
        names = v.params(self.family.n)
        given = {k: to_rational(x) for k, x in dict(self.params).items()}
        missing = [k for k in names if k not in given]
        extra = sorted(set(given) - set(names))
        if missing or extra:
            raise ValueError(
                f"{self.variant} of {self.family.family} (n={self.family.n}) takes parameters {names}"
                + (f"; missing {missing}" if missing else "")
                + (f"; unexpected {extra}" if extra else "")
            )
        object.__setattr__(self, "params", given)

    @property
    def parameter_names(self) -> list:
        return _find_variant(self.family, self.variant).params(self.family.n)

    @property
    def disputed(self) -> str:
        return _find_variant(self.family, self.variant).disputed

    @property
    def kind(self) -> str:
        return _find_variant(self.family, self.variant).kind

    @property
    def known_issue(self) -> str:
        return _find_variant(self.family, self.variant).known_issue

    @property
    def name(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.variant}[{self.family.name}]" + (f"({inner})" if inner else "")


def variant_parameter_names(spec: FamilySpec, variant: str) -> list:
    return _find_variant(spec, variant).params(spec.n)


def make_tp_product(spec: TPSpec) -> AlgebraTable:
    v = _find_variant(spec.family, spec.variant)
    t = _Table(spec.family)
    v.build(t, spec.family, spec.params)
    return t.product(spec.name)


# -- general (pre-normalization) tables --------------------------------------------------


READINGS = ("printed", "corrected")


def general_parameter_names(spec: FamilySpec, reading: str = "printed") -> list:
    """Coordinates of the theorem's general table for this branch.

    The ``corrected`` reading differs from the printed one only where the
    printed table leaves the compatible space (see ``known_issue`` notes).
    """
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}, got {reading!r}")
    f, n = spec.family, spec.n
    if f == "s1":
        if n == 4:
            raise ValueError("no general table is transcribed for s1 at n=4")
        beta = spec.params["beta"]
        names = []
        if beta == 2:
            names.append("alpha2")
        if beta in (1, 2):
            names.append("alpha3")
        names += _names("alpha", 4, n)
        if beta == n - 2:
            names += ["beta1", "beta2"] if reading == "printed" else ["beta2"]
        names.append("beta3")
        if beta == n - 2:
            names.append("beta4")
        names.append("beta5")
        return names
    if f == "r_lambda":
        b = spec.branch
        if b == "lambda=2n-3":
            return _names("alpha", 1, 4)
        if b == "lambda=(5-2n)/2":
            return _names("a", 4, 2 * n) + _names("b", 1, 4)
        return ["alpha", "beta"]
    if f == "r_eps":
        return ["alpha", "beta"]
    if f == "r_lambdas":
        return ["alpha", "beta", "gamma"]
    if f == "r_2n2":
        return ["alpha"]
    if f in ("s2", "s3", "s4", "s_n2"):
        return variant_parameter_names(spec, "TP")
    raise ValueError(f"no general product table for {f}")


def make_general_product(spec: FamilySpec, params: Mapping[str, Scalar], reading: str = "printed") -> AlgebraTable:
    names = general_parameter_names(spec, reading)
    given = {k: to_rational(v) for k, v in params.items()}
    extra = sorted(set(given) - set(names))
    if extra:
        raise ValueError(f"general table of {spec.name} takes {names}; unexpected {extra}")
    a = {k: given.get(k, Fraction(0)) for k in names}
    t = _Table(spec)
    f = spec.family
    if f == "s1":
        _s1n_general(t, spec, a)
    elif f == "r_lambda":
        b = spec.branch
        if b == "lambda=2n-3":
            _r23_general(t, spec, a)
        elif b == "lambda=(5-2n)/2":
            _r52_general(t, spec, a, corrected=reading == "corrected")
        else:
            _rl_general(t, spec, a)
    elif f == "r_eps":
        _rl_general(t, spec, a)
    elif f == "r_lambdas":
        _rlams_general(t, spec, a)
    elif f == "r_2n2":
        _r2n2_general(t, spec, a)
    else:
        _find_variant(spec, "TP").build(t, spec, a)
    inner = ", ".join(f"{k}={v}" for k, v in a.items() if v)
    return t.product(f"general[{spec.name}]({inner})")


def general_product_space(spec: FamilySpec, reading: str = "corrected", *, check_complete: bool = True) -> ProductSpace:
    """Compatible space spanned by the general table, in the theorem's coordinates.

    Raises if a coordinate product violates the transposed Leibniz rule, which
    is what happens for the printed reading on the flagged branches.
    """
    names = general_parameter_names(spec, reading)
    bracket = make_algebra(spec)
    basis = [make_general_product(spec, {k: 1}, reading).renamed(f"{spec.name}:{k}") for k in names]
    return product_space_from_basis(bracket, basis, names, check_complete=check_complete)


def printed_general_span(spec: FamilySpec) -> ProductSpace:
    """Span of the printed general table, without the compatibility check.

    Only for reproducing the printed associativity restrictions; on flagged
    branches this span is not contained in the compatible space.
    """
    names = general_parameter_names(spec, "printed")
    bracket = make_algebra(spec)
    basis = tuple(make_general_product(spec, {k: 1}).renamed(f"{spec.name}:{k}") for k in names)
    return ProductSpace(bracket, basis, tuple(names))


# -- normalization maps ---------------------------------------------------------------


def rational_root(q: Scalar, k: int, label: str = "") -> Fraction:
    """Exact ``k``-th root of a rational, or ValueError naming the radical."""
    q = to_rational(q)
    if k == 1:
        return q
    if q == 0:
        return q
    sign = 1
    if q < 0:
        if k % 2 == 0:
            raise ValueError(f"radical {label or 'root'}: even root of negative {q} is not rational")
        sign, q = -1, -q

    def iroot(m: int):
        r = round(m ** (1.0 / k)) if m < 2 ** 1000 else int(m ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == m:
                return c
        lo, hi = 0, m + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** k < m:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** k == m else None

    num, den = iroot(q.numerator), iroot(q.denominator)
    if num is None or den is None:
        name = f"{label} = " if label else ""
        raise ValueError(f"radical {name}root of degree {k} of {q} is irrational")
    return sign * Fraction(num, den)


def _diag_map(spec: FamilySpec, values: Mapping[int, Fraction]) -> list:
    """Image columns for a diagonal map; unlisted basis vectors are fixed."""
    d = spec.dim
    cols = []
    for j in range(1, d + 1):
        col = [Fraction(0)] * d
        col[j - 1] = values.get(j, Fraction(1))
        cols.append(col)
    return cols


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def normalization_map(spec: TPSpec, raw_params: Mapping[str, Scalar]) -> LinearMap:
    """Basis change taking the general table at ``raw_params`` to ``spec``'s table.

    Use as ``transport(make_general_product(family, raw_params), g)``.
    """
    fam = spec.family
    f, n = fam.family, fam.n
    raw = {k: to_rational(v) for k, v in raw_params.items()}
    names = general_parameter_names(fam)
    extra = sorted(set(raw) - set(names))
    _require(not extra, f"raw parameters of {fam.name} are {names}; unexpected {extra}")
    g = lambda k: raw.get(k, Fraction(0))  # noqa: E731
    key = spec.variant
    q = 2 * n
    if f == "r_lambda" and fam.branch in _R_GEN:
        return _r_lambda_map(fam, key, g("alpha"), g("beta"))
    if f == "r_lambda" and fam.branch == "lambda=2n-3":
        return _r23_map(fam, key, *(g(f"alpha{i}") for i in range(1, 5)))
    if f == "r_eps":
        return _r_eps_map(fam, key, g("alpha"), g("beta"))
    if f == "r_lambdas":
        return _r_lambdas_map(fam, key, g("alpha"), g("beta"), g("gamma"))
    if f == "r_2n2":
        al = g("alpha")
        _require(al != 0, "TP of r_2n2 needs alpha != 0")
        s = 1 / rational_root(al, 2, "sqrt(alpha)")
        vals = {i: s for i in range(2, q)}
        vals[q] = 1 / al
        return LinearMap.from_images(_diag_map(fam, vals))
    raise ValueError(f"no explicit normalizing map is given for {key} of {f}")


def _r_lambda_map(fam: FamilySpec, key: str, alpha: Fraction, beta: Fraction) -> LinearMap:
    n, q = fam.n, 2 * fam.n
    lam = fam.params["lambda"]
    special = lam == Fraction(3 - 2 * n, 2)
    if key == "TP1":
        _require(alpha == 0 and beta != 0, "TP1 needs alpha = 0, beta != 0")
        s = 1 / rational_root(beta, 2, "sqrt(beta)")
        vals = {i: s for i in range(2, q)}
        vals[q] = 1 / beta
        return LinearMap.from_images(_diag_map(fam, vals))
    if key == "TP2" and special:
        _require(alpha != 0 and beta == 0, "TP2 at lambda=(3-2n)/2 needs alpha != 0, beta = 0")
        vals = {i: 1 / alpha for i in range(2, q)}
        vals[q] = alpha ** -2
        return LinearMap.from_images(_diag_map(fam, vals))
    if key == "TP3":
        _require(special and alpha != 0 and beta != 0, "TP3 needs lambda=(3-2n)/2, alpha != 0, beta != 0")
        r = 2 * n - 3
        vals = {1: rational_root(alpha ** -2 * beta, r, "(alpha^-2 beta)^(1/(2n-3))")}
        for i in range(2, q):
            vals[i] = rational_root(alpha ** (2 * n - 1 - i) * beta ** (i + 1 - 2 * n), r, f"phi(e{i})")
        vals[q] = 1 / beta
        return LinearMap.from_images(_diag_map(fam, vals))
    if key == "TP2":
        _require(alpha != 0, "TP2 needs alpha != 0")
        c = 2 * lam - 3 + 2 * n
        cols = _diag_map(fam, {i: 1 / alpha for i in range(2, q - 1)} | {q - 1: 1 / alpha, q: alpha ** -2})
        x = fam.index("x")
        cols[x - 1][1] = alpha ** -2 * beta * lam / c
        cols[0][2] = alpha ** -2 * beta / c
        cols[q - 2][q - 1] = alpha ** -3 * beta / c
        return LinearMap.from_images(cols)
    raise ValueError(f"no normalizing map for {key} of r_lambda")


def _r23_map(fam: FamilySpec, key: str, a1, a2, a3, a4) -> LinearMap:
    n, q = fam.n, 2 * fam.n
    r = 2 * n - 3
    nz = lambda v: v != 0  # noqa: E731
    pattern = (nz(a1), nz(a2), nz(a3), nz(a4))
    if key == "TP1":
        _require(pattern == (False, False, False, True), "TP1 needs only alpha4 != 0")
        A, B = Fraction(1), rational_root(a4, 2, "sqrt(alpha4)")
    elif key == "TP2":
        _require(pattern == (False, False, True, False), "TP2 needs only alpha3 != 0")
        A, B = Fraction(1), a3
    elif key == "TP3":
        _require(pattern == (False, False, True, True), "TP3 needs alpha1 = alpha2 = 0, alpha3, alpha4 != 0")
        A, B = rational_root(a3 ** 2 / a4, r, "A1"), a4 / a3
    elif key == "TP4":
        _require(pattern == (False, True, False, False), "TP4 needs only alpha2 != 0")
        A, B = rational_root(a2, r, "A1"), Fraction(1)
    elif key == "TP5":
        _require(pattern == (False, True, False, True), "TP5 needs alpha2, alpha4 != 0 only")
        A, B = rational_root(a2, r, "A1"), rational_root(a4 / a2, 2, "B2")
    elif key == "TP6":
        _require(not pattern[0] and pattern[1] and pattern[2], "TP6 needs alpha1 = 0, alpha2, alpha3 != 0")
        A, B = rational_root(a2, r, "A1"), a3 / a2
    elif key == "TP7":
        _require(pattern == (True, False, False, False), "TP7 needs only alpha1 != 0")
        A, B = Fraction(1), 1 / a1
    elif key == "TP8":
        _require(pattern == (True, False, False, True), "TP8 needs alpha1, alpha4 != 0 only")
        A, B = rational_root(a1 ** 2 * a4, 3 * r, "A1"), rational_root(a4 / a1, 3, "B2")
    elif key == "TP9":
        _require(pattern[0] and not pattern[1] and pattern[2], "TP9 needs alpha1, alpha3 != 0, alpha2 = 0")
        A, B = rational_root(a1 * a3, 2 * r, "A1"), rational_root(a3 / a1, 2, "B2")
    elif key == "TP10":
        _require(pattern[0] and pattern[1], "TP10 needs alpha1, alpha2 != 0")
        A, B = rational_root(a2, r, "A1"), a2 / a1
    else:
        raise ValueError(f"no normalizing map for {key} of r_lambda at lambda=2n-3")
    # new basis e1' = A e1, e_i' = A^{i-2} B e_i, e_{2n}' = A^{2n-3} B^2 e_{2n}; g is its inverse
    scale = {1: A}
    for i in range(2, q):
        scale[i] = A ** (i - 2) * B
    scale[q] = A ** (2 * n - 3) * B * B
    return LinearMap.from_images(_diag_map(fam, {i: 1 / s for i, s in scale.items()}))


def _r_eps_map(fam: FamilySpec, key: str, alpha, beta) -> LinearMap:
    n, q = fam.n, 2 * fam.n
    if key == "TP1":
        _require(alpha == 0 and beta != 0, "TP1 needs alpha = 0, beta != 0")
        vals = {1: 1 / beta, q: 1 / beta}
        for i in range(2, q):
            vals[i] = beta ** (n - i)
        return LinearMap.from_images(_diag_map(fam, vals))
    if key == "TP2":
        _require(alpha != 0, "TP2 needs alpha != 0")
        root = rational_root(1 / alpha, n - 1, "(alpha^-1)^(1/(n-1))")
        vals = {i: rational_root(alpha ** (n - i), n - 1, f"phi(e{i})") for i in range(2, q - 1)}
        vals.update({1: root, q - 1: 1 / alpha, q: root})
        cols = _diag_map(fam, vals)
        cols[0][2] = beta * root * root
        cols[fam.index("x") - 1][1] = -(n - 2) * beta * root
        cols[q - 2][q - 1] = -beta / alpha ** 2
        return LinearMap.from_images(cols)
    raise ValueError(f"no normalizing map for {key} of r_eps")


def _r_lambdas_map(fam: FamilySpec, key: str, alpha, beta, gamma) -> LinearMap:
    n, q = fam.n, 2 * fam.n
    r = 2 * n - 3
    vals: dict = {}
    if key == "TP1":
        _require(alpha == 0 and beta == 0 and gamma != 0, "TP1 needs alpha = beta = 0, gamma != 0")
        s = 1 / rational_root(gamma, 2, "sqrt(gamma)")
        vals = {i: s for i in range(2, q)}
        vals[q] = 1 / gamma
    elif key == "TP2":
        _require(alpha == 0 and beta != 0 and gamma == 0, "TP2 needs only beta != 0")
        vals = {i: 1 / beta for i in range(2, q)}
        vals[q] = beta ** -2
    elif key == "TP3":
        _require(alpha == 0 and beta != 0 and gamma != 0, "TP3 needs alpha = 0, beta, gamma != 0")
        base = gamma / beta ** 2
        vals = {1: rational_root(base, r, "(gamma beta^-2)^(1/(2n-3))")}
        for i in range(2, q):
            vals[i] = beta / gamma * rational_root(base ** (i - 2), r, f"phi(e{i})")
        vals[q] = 1 / gamma
    elif key == "TP4":
        _require(alpha != 0 and beta == 0 and gamma == 0, "TP4 needs only alpha != 0")
        vals = {1: rational_root(1 / alpha, r, "(alpha^-1)^(1/(2n-3))")}
        for i in range(2, q):
            vals[i] = rational_root(alpha ** (2 - i), r, f"phi(e{i})")
        vals[q] = 1 / alpha
    elif key == "TP5":
        _require(alpha != 0 and beta == 0 and gamma != 0, "TP5 needs alpha, gamma != 0, beta = 0")
        vals = {1: rational_root(1 / alpha, r, "(alpha^-1)^(1/(2n-3))")}
        for i in range(2, q):
            vals[i] = rational_root(alpha ** (2 * n - 2 * i + 1) * gamma ** (3 - 2 * n), 2 * r, f"phi(e{i})")
        vals[q] = 1 / gamma
    elif key == "TP6":
        _require(alpha != 0 and beta != 0, "TP6 needs alpha, beta != 0")
        vals = {1: rational_root(1 / alpha, r, "(alpha^-1)^(1/(2n-3))")}
        for i in range(2, q):
            vals[i] = rational_root(alpha ** (2 * n - i - 1), r, f"phi(e{i})") / beta
        vals[q] = alpha / beta ** 2
    else:
        raise ValueError(f"no normalizing map for {key} of r_lambdas")
    return LinearMap.from_images(_diag_map(fam, vals))


# -- listing ------------------------------------------------------------------------------


def list_catalog(n_s: int = 5, n_r: int = 3) -> list:
    """Stable enumeration of families with parameter schema and TP variants."""
    out = []
    for f in FAMILIES:
        n = n_r if f in _Q_BASED else n_s
        variants = {}
        for b in _branches_for(f, n):
            keys = [v.key for v in _variants_for(f, n) if b in v.branches]
            variants[b] = keys
        every = [v for nn in ((4, 5) if f == "s1" else (n,)) for v in _variants_for(f, nn)]
        disputed = list(dict.fromkeys(v.key for v in every if v.disputed and v.kind == "printed"))
        corrected = list(dict.fromkeys(v.key for v in every if v.kind == "corrected"))
        if f == "s1":
            # both theorem branches, regardless of the sample n
            variants = {}
            for nn, tag in ((4, "n=4"), (5, "n>=5")):
                for b in _branches_for(f, nn):
                    variants[f"{tag}, {b}"] = [v.key for v in _variants_for(f, nn) if b in v.branches]
        out.append(
            {
                "family": f,
                "title": TITLES[f],
                "min_n": _min_n(f),
                "params": param_names(f, n),
                "param_schema": _schema(f),
                "variants": variants,
                "disputed": disputed,
                "corrected": corrected,
            }
        )
    return out


def _schema(f: str) -> str:
    return {
        "s1": "beta (rational; branches beta=1, beta=2, beta=n-2, generic)",
        "s4": "alpha3 .. alpha{n-1} (rational)",
        "r_lambda": "lambda (rational; branches 2n-3, (5-2n)/2, (3-2n)/2, generic)",
        "r_eps": "eps in {-1, 1}",
        "r_lambdas": "lambda5, lambda7, .., lambda{2n-1} (rational)",
    }.get(f, "none")


def default_tp_params(spec: FamilySpec, variant: str) -> dict:
    """All-ones parameters for a variant, used by the catalog dump."""
    return {k: Fraction(1) for k in variant_parameter_names(spec, variant)}


def catalog_dump(n_s: int = 5, n_r: int = 3) -> dict:
    """Every family at default parameters with its TP variants, as JSON data."""
    from .serialize import algebra_to_json

    families = []
    for f in FAMILIES:
        n = n_r if f in _Q_BASED else n_s
        points = [default_params(f, n)]
        if f in ("s1", "r_lambda"):
            key = "beta" if f == "s1" else "lambda"
            points += [{key: v} for lbl, v in special_values(f, n).items() if lbl != "lambda=2-n"]
        for params in points:
            spec = FamilySpec(f, n, params)
            entry = {"family": f, "n": n, "params": spec.params_json(), "branch": spec.branch}
            entry["algebra"] = algebra_to_json(make_algebra(spec))
            products = []
            for key in tp_variants(spec):
                tp = TPSpec(spec, key, default_tp_params(spec, key))
                item = {"variant": key, "params": {k: format_rational(v) for k, v in tp.params.items()}}
                if tp.disputed:
                    item["disputed"] = tp.disputed
                item["product"] = algebra_to_json(make_tp_product(tp))
                products.append(item)
            entry["products"] = products
            families.append(entry)
    return {"families": families}
