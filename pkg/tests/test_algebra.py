from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tpa_lab.algebra import (
    AlgebraTable,
    antisymmetry_residual,
    apply,
    associativity_residual,
    basis_element,
    center,
    commutativity_residual,
    derived_subalgebra,
    is_filiform,
    is_lie,
    jacobi_residual,
    lower_central_series,
    transport,
)
from tpa_lab.catalog import FamilySpec, make_algebra
from tpa_lab.linalg import LinearMap, RMatrix

F = Fraction


def e(t, name):
    return basis_element(t, t.basis.index(name) + 1)


def vec(t, **coeffs):
    out = [F(0)] * t.dim
    for name, c in coeffs.items():
        out[t.basis.index(name)] = F(c)
    return tuple(out)


@pytest.fixture
def q6():
    return make_algebra(FamilySpec("Q_2n", 3))


def test_apply_examples(q6):
    s = make_algebra(FamilySpec("s1", 5, {"beta": 3}))
    assert apply(s, e(s, "e2"), e(s, "x")) == vec(s, e2=3)
    assert apply(s, e(s, "e5"), e(s, "x")) == vec(s, e5=6)
    assert apply(s, e(s, "e1"), e(s, "e1")) == vec(s)
    assert apply(q6, e(q6, "e3"), e(q6, "e4")) == vec(q6, e6=-1)


def test_apply_rejects_bad_length(q6):
    with pytest.raises(ValueError):
        apply(q6, (1, 0), (0, 1))


def test_table_validation():
    with pytest.raises(ValueError, match="diagonal"):
        AlgebraTable(2, {(1, 1): {2: 1}})
    with pytest.raises(ValueError, match="twice"):
        AlgebraTable(2, {(1, 2): {2: 1}, (2, 1): {2: 1}})
    with pytest.raises(ValueError, match="out of range"):
        AlgebraTable(2, {(1, 3): {1: 1}})
    with pytest.raises(ValueError, match="symmetry"):
        AlgebraTable(2, symmetry="skew")


def test_antisymmetry_examples():
    t = AlgebraTable(3, {(1, 2): {3: 1}, (2, 1): {3: 1}}, symmetry="none")
    res = antisymmetry_residual(t)
    assert [(v.indices, v.residual) for v in res] == [((1, 2), (0, 0, 2))]
    assert antisymmetry_residual(AlgebraTable(3)) == []


def test_jacobi_examples(q6):
    assert jacobi_residual(q6) == []
    assert jacobi_residual(make_algebra(FamilySpec("r_lambda", 3, {"lambda": 1}))) == []
    entries = q6.entries()
    entries[(3, 4)] = {6: F(1)}
    flipped = AlgebraTable(6, entries)
    assert (1, 2, 4) in [v.indices for v in jacobi_residual(flipped)]


def test_comm_assoc_examples():
    zero = AlgebraTable(3, symmetry="symmetric")
    assert commutativity_residual(zero) == [] and associativity_residual(zero) == []
    p = AlgebraTable(2, {(1, 1): {2: 1}, (2, 2): {1: 1}}, symmetry="symmetric")
    res = associativity_residual(p)
    hit = [v for v in res if v.indices == (1, 1, 2)]
    assert hit and hit[0].residual == (1, 0)
    nc = AlgebraTable(2, {(1, 2): {1: 1}}, symmetry="none")
    assert [v.indices for v in commutativity_residual(nc)] == [(1, 2)]


def test_transport_examples():
    t = make_algebra(FamilySpec("r_lambda", 3, {"lambda": 1}))
    p = AlgebraTable(7, {(7, 7): {6: 4}}, symmetry="symmetric", basis=t.basis)
    g = LinearMap.diagonal([1, F(1, 2), F(1, 2), F(1, 2), F(1, 2), F(1, 4), 1])
    assert transport(p, g).entries() == {(7, 7): {6: F(1)}}
    assert transport(t, LinearMap.identity(7)) == t
    zero = AlgebraTable(3, symmetry="symmetric")
    assert transport(zero, LinearMap.diagonal([2, 3, 5])).is_zero()
    with pytest.raises(ValueError, match="not a basis change"):
        transport(zero, LinearMap(RMatrix.zeros(3, 3)))


def test_lower_central_series(q6):
    assert lower_central_series(make_algebra(FamilySpec("n_n1", 5))) == [5, 3, 2, 1, 0]
    assert lower_central_series(AlgebraTable(3)) == [3, 0]
    assert lower_central_series(q6) == [6, 4, 3, 2, 1, 0]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_nilradicals_are_filiform(n):
    assert is_filiform(make_algebra(FamilySpec("n_n1", n + 1)))
    assert is_filiform(make_algebra(FamilySpec("Q_2n", n)))


def test_center_and_derived(q6):
    assert not is_filiform(AlgebraTable(4))
    assert len(center(AlgebraTable(4))) == 4
    assert center(q6) == [vec(q6, e6=1)]
    assert derived_subalgebra(AlgebraTable(3)) == []


rat = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), rat, rat, st.data())
def test_bilinearity(seed, a, b, data):
    rng = oracles.seeded(seed)
    c = oracles.random_lie_constants(rng)
    t = AlgebraTable(len(c), oracles.constants_to_entries(c))
    n = t.dim
    x, y, z = (tuple(data.draw(st.lists(rat, min_size=n, max_size=n))) for _ in range(3))
    comb = tuple(a * p + b * q for p, q in zip(x, y))
    lhs = apply(t, comb, z)
    rhs = tuple(a * p + b * q for p, q in zip(apply(t, x, z), apply(t, y, z)))
    assert lhs == rhs
    lhs = apply(t, z, comb)
    rhs = tuple(a * p + b * q for p, q in zip(apply(t, z, x), apply(t, z, y)))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_transport_preserves_lie_and_round_trips(seed):
    rng = oracles.seeded(seed)
    c = oracles.random_lie_constants(rng)
    t = AlgebraTable(len(c), oracles.constants_to_entries(c))
    g = LinearMap(RMatrix.from_rows(oracles.random_invertible(rng, t.dim)))
    moved = transport(t, g)
    assert is_lie(moved)
    assert transport(moved, g.inverse()) == t
