from fractions import Fraction

import pytest

import oracles
from tpa_lab.algebra import AlgebraTable, transport
from tpa_lab.catalog import FAMILIES, FamilySpec, TPSpec, default_params, make_algebra, make_tp_product
from tpa_lab.linalg import LinearMap, RMatrix
from tpa_lab.tpa import (
    QuadraticConstraint,
    associativity_constraints,
    case_split_solve,
    commutative_product,
    is_poisson,
    leibniz_residual,
    mixed_triviality_residual,
    product_space_from_basis,
    transposed_leibniz_residual,
    tpa_linear_space,
    verify_tpa,
)

F = Fraction
Q = QuadraticConstraint.from_terms


def named_product(b, table):
    """Symmetric product from {("x", "x"): {"e6": c}} keyed by basis names."""
    idx = {name: i + 1 for i, name in enumerate(b.basis)}
    entries = {(idx[u], idx[v]): {idx[k]: F(c) for k, c in out.items()} for (u, v), out in table.items()}
    return commutative_product(b.dim, entries, basis=b.basis)


@pytest.fixture(scope="module")
def s52():
    spec = FamilySpec("s_n2", 5)
    return make_algebra(spec), make_tp_product(TPSpec(spec, "TP"))


def test_transposed_leibniz_examples(s52):
    b, p = s52
    assert transposed_leibniz_residual(b, p) == []
    assert transposed_leibniz_residual(b, commutative_product(b.dim)) == []
    s = make_algebra(FamilySpec("s1", 4, {"beta": 3}))
    assert transposed_leibniz_residual(s, named_product(s, {("x", "x"): {"e2": 1}})) != []


def test_leibniz_examples(s52):
    b, p = s52
    assert leibniz_residual(b, commutative_product(b.dim)) == []
    res = {v.indices: v.residual for v in leibniz_residual(b, p)}
    x1, x2 = b.basis.index("x1") + 1, b.basis.index("x2") + 1
    assert res[(x1, x2, x2)] == tuple(F(-3) if k == 4 else F(0) for k in range(b.dim))
    r7 = make_algebra(FamilySpec("r_lambda", 3, {"lambda": 7}))
    assert not is_poisson(r7, named_product(r7, {("x", "x"): {"e6": 1}}))


def test_mixed_examples(s52):
    b, p = s52
    assert mixed_triviality_residual(b, commutative_product(b.dim)) == []
    assert mixed_triviality_residual(b, p) != []
    rng = oracles.seeded(3)
    entries = {(i, j): {k: F(rng.randint(-2, 2))} for i in range(1, 4) for j in range(i, 4) for k in (1, 3)}
    assert mixed_triviality_residual(AlgebraTable(3), commutative_product(3, entries)) == []


def test_verify_examples(s52):
    b, p = s52
    r = verify_tpa(b, p)
    assert (r.is_tpa, r.is_poisson, r.is_both, r.is_trivial) == (True, False, False, False)
    z = verify_tpa(b, commutative_product(b.dim))
    assert z.is_tpa and z.is_poisson and z.is_trivial and z.is_both
    r8 = FamilySpec("r_2n2", 3)
    p8 = make_tp_product(TPSpec(r8, "TP"))
    assert p8.entries() == {(7, 7): {6: F(49)}, (7, 8): {6: F(14)}, (8, 8): {6: F(4)}}
    assert verify_tpa(make_algebra(r8), p8).is_tpa


def test_verify_json(s52):
    doc = verify_tpa(*s52).to_json()
    assert {"algebra", "product", "is_tpa", "is_poisson", "is_trivial", "violations"} <= set(doc)
    assert doc["violations"]["leibniz"][0][1][0] == "0/1"


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        verify_tpa(AlgebraTable(2), commutative_product(3))


def test_linear_space_examples():
    r7 = make_algebra(FamilySpec("r_lambda", 3, {"lambda": 1}))
    space = tpa_linear_space(r7)
    assert space.dim == 2
    alpha = named_product(r7, {("e2", "x"): {"e6": 1}, ("x", "x"): {"e5": -3}})
    beta = named_product(r7, {("x", "x"): {"e6": 1}})
    product_space_from_basis(r7, [alpha, beta], ["alpha", "beta"])
    assert tpa_linear_space(AlgebraTable(1)).dim == 1
    assert tpa_linear_space(make_algebra(FamilySpec("r_lambda", 4, {"lambda": 5}))).dim == 4


def test_space_from_basis_rejects():
    r7 = make_algebra(FamilySpec("r_lambda", 3, {"lambda": 1}))
    beta = named_product(r7, {("x", "x"): {"e6": 1}})
    with pytest.raises(ValueError, match="compatible space has 2"):
        product_space_from_basis(r7, [beta], ["beta"])
    with pytest.raises(ValueError, match="dependent"):
        product_space_from_basis(r7, [beta, beta], ["a", "b"], check_complete=False)
    with pytest.raises(ValueError, match="transposed Leibniz"):
        product_space_from_basis(r7, [named_product(r7, {("x", "x"): {"e5": 1}})], ["a"], check_complete=False)


@pytest.mark.parametrize("family", FAMILIES)
def test_space_soundness_and_oracle(family):
    n = 3 if family in ("Q_2n", "r_lambda", "r_eps", "r_lambdas", "r_2n2", "n_n1") else 4
    b = make_algebra(FamilySpec(family, n, default_params(family, n)))
    space = tpa_linear_space(b)
    for q in space.basis:
        assert transposed_leibniz_residual(b, q) == []
    if b.dim <= 6:
        c = oracles.dense_constants(b)
        assert space.dim == oracles.naive_tpa_dim(c)


def test_element_by_name_and_position():
    r7 = make_algebra(FamilySpec("r_lambda", 3, {"lambda": 1}))
    space = tpa_linear_space(r7)
    a = space.element({space.coordinates[0]: 2})
    assert a == space.element([2, 0])
    with pytest.raises(ValueError, match="unknown coordinates"):
        space.element({"nope": 1})
    with pytest.raises(ValueError):
        space.element([1])


def test_quadratic_constraint_canonical():
    q = Q({("b", "a"): F(-2, 3), ("c", "c"): F(4, 3)}, ["a", "b", "c"]).canonical()
    assert str(q) == "a*b - 2*c*c"
    assert q.is_proportional_to(Q({("a", "b"): 5, ("c", "c"): -10}, ["a", "b", "c"]))
    assert q.evaluate({"a": 2, "b": 1, "c": 1}) == 0


def test_associativity_constraints_examples():
    s = FamilySpec("s1", 5, {"beta": 7})
    assert associativity_constraints(tpa_linear_space(make_algebra(s))) == []
    empty = tpa_linear_space(make_algebra(FamilySpec("r_lambda", 3, {"lambda": 3})))
    assert associativity_constraints(empty) == []


def test_associativity_constraints_vanish_on_components():
    # every resolved component's witness makes the generic product associative
    s = FamilySpec("s1", 5, {"beta": 3})
    space = tpa_linear_space(make_algebra(s))
    cons = associativity_constraints(space)
    for comp in case_split_solve(cons):
        if comp.resolved:
            w = comp.witness()
            p = space.element({k: w.get(k, 1) for k in space.coordinates})
            assert verify_tpa(space.bracket, p).is_tpa


def test_case_split_examples():
    comps = case_split_solve([Q({("alpha", "beta"): 1})])
    assert [c.zero for c in comps] == [("alpha",), ("beta",)]
    comps = case_split_solve([Q({("a4", "b1"): 1}, ["a4", "b1", "b2"]), Q({("a4", "b2"): 1}, ["a4", "b1", "b2"])])
    assert [c.zero for c in comps] == [("a4",), ("b1", "b2")]
    comps = case_split_solve([])
    assert len(comps) == 1 and comps[0].zero == () and comps[0].resolved


def test_case_split_unresolved_and_bound():
    comps = case_split_solve([Q({("a", "b"): 1, ("c", "d"): -1})])
    assert any(not c.resolved for c in comps)
    assert {c.zero for c in comps if c.resolved} >= {("a", "c")}
    many = [Q({(f"v{i}", f"v{i + 1}"): 1}) for i in range(13)]
    with pytest.raises(ValueError, match="max_vars=12"):
        case_split_solve(many)


@pytest.mark.parametrize("family, n", [("s1", 4), ("s1", 5), ("s_n2", 4), ("r_lambda", 3), ("r_eps", 3), ("r_2n2", 3)])
def test_lemma_agrees_on_random_products(family, n):
    rng = oracles.seeded(f"{family}:{n}")
    spec = FamilySpec(family, n, default_params(family, n))
    b = make_algebra(spec)
    space = tpa_linear_space(b)
    for _ in range(3):
        p = space.element([F(rng.randint(-3, 3)) for _ in range(space.dim)])
        assert verify_tpa(b, p).lemma_agrees
    entries = {(i, j): {rng.randint(1, b.dim): F(1)} for i in range(1, b.dim + 1) for j in range(i, b.dim + 1) if rng.random() < 0.2}
    assert verify_tpa(b, commutative_product(b.dim, entries)).lemma_agrees


def test_transport_invariance():
    rng = oracles.seeded(4)
    spec = FamilySpec("r_lambda", 3, {"lambda": 7})
    b = make_algebra(spec)
    p = make_tp_product(TPSpec(spec, "TP2"))
    g = LinearMap(RMatrix.from_rows(oracles.random_invertible(rng, b.dim)))
    assert verify_tpa(transport(b, g), transport(p, g)).is_tpa


def test_proposition_on_catalog():
    for family, n, key in [("s_n2", 5, "TP"), ("r_2n2", 3, "TP"), ("r_lambda", 3, "TP1")]:
        spec = FamilySpec(family, n, default_params(family, n))
        b = make_algebra(spec)
        p = make_tp_product(TPSpec(spec, key))
        mixed = not mixed_triviality_residual(b, p)
        both = not leibniz_residual(b, p) and not transposed_leibniz_residual(b, p)
        assert mixed == both
