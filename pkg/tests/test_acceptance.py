"""Acceptance criteria 1-9, one pass/fail line each.

Run under pytest (lines are printed even with output capture on) or directly:
``python3 tests/test_acceptance.py``. All comparisons are exact.
"""
import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from tpa_lab.algebra import AlgebraTable, antisymmetry_residual, is_lie, jacobi_residual  # noqa: E402
from tpa_lab.catalog import (  # noqa: E402
    FAMILIES,
    FamilySpec,
    TPSpec,
    expected_halfderivation_dim,
    expected_tpa_linear_dim,
    general_product_space,
    make_algebra,
    make_tp_product,
    parameter_grid,
    printed_general_span,
    tp_variants,
    variant_parameter_names,
)
from tpa_lab.derivations import delta_derivation_space  # noqa: E402
from tpa_lab.report import R_FAMILIES, S_FAMILIES  # noqa: E402
from shared import baseline_report  # noqa: E402
from tpa_lab.tpa import (  # noqa: E402
    QuadraticConstraint,
    associativity_constraints,
    case_split_solve,
    commutative_product,
    leibniz_residual,
    mixed_triviality_residual,
    transposed_leibniz_residual,
    tpa_linear_space,
    verify_tpa,
)
from tpa_lab.algebra import associativity_residual, commutativity_residual  # noqa: E402

S_RANGE = range(4, 9)
R_RANGE = range(3, 6)


def _grid(s_range=S_RANGE, r_range=R_RANGE):
    for f in FAMILIES:
        for n in (r_range if f in R_FAMILIES else s_range):
            for _, params in parameter_grid(f, n):
                yield FamilySpec(f, n, params)


def _report():
    return baseline_report(1)


def _line(number: int, ok: bool, detail: str) -> str:
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"


# -- criteria ---------------------------------------------------------------------------


def criterion_1():
    bad, count = [], 0
    for spec in _grid():
        b = make_algebra(spec)
        count += 1
        if antisymmetry_residual(b) or jacobi_residual(b):
            bad.append(spec.name)
    return not bad, f"{count} catalog brackets, residuals nonempty for {bad or 'none'}"


def criterion_2():
    bad, count = [], 0
    for spec in _grid():
        want = expected_halfderivation_dim(spec)
        if want is None:
            continue
        got = delta_derivation_space(make_algebra(spec)).dimension
        count += 1
        if got != want:
            bad.append(f"{spec.name}: {got} != {want}")
    return not bad and count > 0, f"{count} grid points, mismatches {bad or 'none'}"


def criterion_3():
    bad, count = [], 0
    for spec in _grid(range(5, 7), range(3, 5)):
        want = expected_tpa_linear_dim(spec)
        if want is None:
            continue
        got = tpa_linear_space(make_algebra(spec)).dim
        count += 1
        if got != want:
            bad.append(f"{spec.name}: {got} != {want}")
    return not bad and count > 0, f"{count} grid points, mismatches {bad or 'none'}"


def criterion_4():
    tp = [e for e in _report()["entries"] if e["check"] == "tp_verify"]
    printed = [e for e in tp if not (e["variant"] or "").endswith("-corrected")]
    disputed = [e for e in printed if e["pass"] is None]
    judged = [e for e in printed if e["pass"] is not None]
    failing = sorted({f"{e['family']}(n={e['n']}, {e['params']}) {e['variant']}" for e in judged if not e["computed"].startswith("is_tpa=true")})
    disputed_keys = sorted({e["variant"] for e in disputed})
    notes_ok = all(e["notes"] for e in disputed)
    ok = not failing and disputed_keys == ["TP1", "TP1-pattern"] and notes_ok
    return ok, (
        f"{len(judged)} judged draws, {len(disputed)} disputed draws ({', '.join(disputed_keys)}) with notes; "
        f"failing: {failing or 'none'}"
    )


def _nonzero(rng):
    q = Fraction(rng.randint(1, 9), rng.randint(1, 4))
    return q if rng.random() < 0.5 else -q


def criterion_5():
    rng = oracles.seeded(5)
    bad, checked = [], 0
    for f in S_FAMILIES + R_FAMILIES:
        for n in ((3,) if f in R_FAMILIES else (4, 5)):
            for _, params in parameter_grid(f, n):
                spec = FamilySpec(f, n, params)
                b = make_algebra(spec)
                for key in tp_variants(spec):
                    tp0 = TPSpec(spec, key, {k: 1 for k in variant_parameter_names(spec, key)})
                    if tp0.disputed:
                        continue
                    for _ in range(3):
                        tp = TPSpec(spec, key, {k: _nonzero(rng) for k in variant_parameter_names(spec, key)})
                        r = verify_tpa(b, make_tp_product(tp))
                        if not r.is_tpa or r.is_trivial:
                            continue
                        checked += 1
                        if r.is_poisson or not r.leibniz:
                            bad.append(tp.name)
    zero = commutative_product(7, name="zero")
    z = verify_tpa(make_algebra(FamilySpec("r_lambda", 3, {"lambda": 7})), zero)
    zero_ok = z.is_tpa and z.is_poisson and z.is_trivial
    bad = sorted(set(bad))
    return not bad and zero_ok and checked > 0, (
        f"{checked} nontrivial verified products; Poisson (no violating triple): {bad or 'none'}; "
        f"zero product tpa/poisson/trivial: {zero_ok}"
    )


_COMM_ASSOC = [
    (2, {}),
    (2, {(0, 0): {1: 1}}),
    (2, {(0, 0): {0: 1}}),
    (2, {(0, 0): {0: 1}, (1, 1): {1: 1}}),
    (3, {(0, 0): {1: 1}, (0, 1): {2: 1}}),
    (3, {(0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}}),
    (3, {(0, 0): {1: 1}, (2, 2): {1: 1}}),
    (4, {(0, 0): {1: 1}, (0, 1): {2: 1}, (0, 2): {3: 1}, (1, 1): {3: 1}}),
    (4, {(0, 0): {0: 1}, (1, 1): {1: 1}, (1, 2): {2: 1}, (1, 3): {3: 1}}),
    (4, {(0, 0): {3: 1}, (1, 1): {3: 1}}),
]


def _sym_constants(n, table):
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), vec in table.items():
        for k, v in vec.items():
            c[i][j][k] = Fraction(v)
            c[j][i][k] = Fraction(v)
    return c


def _random_pair(rng):
    """(bracket, product): Lie bracket plus commutative associative product of equal dim."""
    while True:
        c = oracles.random_lie_constants(rng)
        n = len(c)
        b = AlgebraTable(n, oracles.constants_to_entries(c), name="b")
        if rng.random() < 0.5:
            space = tpa_linear_space(b)
            if space.dim:
                for _ in range(4):
                    coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(space.dim)]
                    p = space.element(coeffs)
                    if not associativity_residual(p):
                        return b, p
            continue
        options = [t for t in _COMM_ASSOC if t[0] == n]
        if not options:
            continue
        _, table = rng.choice(options)
        pc = oracles.change_basis(_sym_constants(n, table), oracles.random_invertible(rng, n))
        scale = Fraction(rng.choice([1, -1, 2, Fraction(1, 3)]))
        entries = {(i + 1, j + 1): {k + 1: scale * pc[i][j][k] for k in range(n) if pc[i][j][k]} for i in range(n) for j in range(i, n)}
        return b, AlgebraTable(n, entries, symmetry="symmetric", name="p")


def criterion_6():
    rng = oracles.seeded(6)
    agree, both_true, both_false = 0, 0, 0
    bad = []
    for k in range(200):
        b, p = _random_pair(rng)
        assert is_lie(b) and not commutativity_residual(p) and not associativity_residual(p)
        mixed = not mixed_triviality_residual(b, p)
        pt = not leibniz_residual(b, p) and not transposed_leibniz_residual(b, p)
        if mixed == pt:
            agree += 1
            both_true += mixed
            both_false += not mixed
        else:
            bad.append(k)
    ok = not bad and both_true > 0 and both_false > 0
    return ok, f"{agree}/200 pairs agree ({both_true} mixed-trivial, {both_false} not); disagreements {bad or 'none'}"


def criterion_7():
    norm = [e for e in _report()["entries"] if e["check"] == "normalization"]
    failing = [f"{e['family']} {e['variant']} {e['params']}: {e['computed']}" for e in norm if e["pass"] is False]
    return bool(norm) and not failing, f"{len(norm)} normalization points; failing: {failing or 'none'}"


def _c8_spaces(reading):
    r52 = FamilySpec("r_lambda", 3, {"lambda": Fraction(-1, 2)})
    s13 = FamilySpec("s1", 5, {"beta": 3})
    if reading == "printed":
        return printed_general_span(r52), printed_general_span(s13)
    return general_product_space(r52, "corrected"), general_product_space(s13, "corrected")


def _c8_eval(r52_space, s1_space):
    target = QuadraticConstraint.from_terms({("a4", "b1"): 1})
    r_cons = associativity_constraints(r52_space)
    has = any(c.is_proportional_to(target) for c in r_cons)
    parts = case_split_solve(associativity_constraints(s1_space))
    got = sorted(tuple(sorted(c.zero)) for c in parts if c.resolved)
    unresolved = [c for c in parts if not c.resolved]
    want = sorted([("alpha4",), ("beta1", "beta2")])
    ok = has and got == want and not unresolved
    return ok, f"r7 constraints {[str(c) for c in r_cons]}; s1(5,3) components {[str(c) for c in parts]}"


def criterion_8():
    ok, detail = _c8_eval(*_c8_spaces("true"))
    _, printed = _c8_eval(*_c8_spaces("printed"))
    return ok, f"compatible spaces: {detail}; [info] printed general tables: {printed}"


def criterion_9():
    rng = oracles.seeded(9)
    bad, done = [], 0
    while done < 100:
        c = oracles.random_lie_constants(rng)
        if not oracles.naive_is_lie(c):
            continue
        t = AlgebraTable(len(c), oracles.constants_to_entries(c))
        done += 1
        got = (
            delta_derivation_space(t, 1).dimension,
            delta_derivation_space(t, Fraction(1, 2)).dimension,
            tpa_linear_space(t).dim,
        )
        want = (oracles.naive_derivation_dim(c, 1), oracles.naive_derivation_dim(c, Fraction(1, 2)), oracles.naive_tpa_dim(c))
        if got != want:
            bad.append((done, got, want))
    return not bad, f"{done} random Lie brackets (derivations, 1/2-derivations, TPA space); mismatches {bad or 'none'}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number - 1]()
    with capsys.disabled():
        print("\n" + _line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        failures += not ok
        print(_line(i, ok, detail))
    sys.exit(1 if failures else 0)
