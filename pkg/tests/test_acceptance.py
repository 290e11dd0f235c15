"""Acceptance criteria 1-9, one test each.  Every test prints a single PASS/FAIL line."""

import random
import time

import pytest

from coxinv import verify as V

import test_f2mat
import test_stiefel
import test_symbols
import test_verify


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_d4_relations_and_freeness(report):
    start = time.perf_counter()
    rel = V.verify_reld4()
    free = V.verify_d4_basis_freeness()
    elapsed = time.perf_counter() - start
    flags_cleared = not (rel.minus_one_square or rel.two_square or free.minus_one_square or free.two_square)
    literal = all(v["equal"] for v in rel.witness.values())
    order = free.witness["order"]
    ok = rel.passed and free.passed and flags_cleared and literal and order == ["lam3", "lam2", "lam1", "lam0"] \
        and elapsed < 1.0
    report(1, ok, f"reld4={rel.passed} d4-freeness={free.passed} flags_cleared={flags_cleared} "
                  f"order={order} time={elapsed:.3f}s")


def test_criterion_2_b_freeness(report):
    start = time.perf_counter()
    ranks = {}
    for n in range(2, 11):
        rep = V.verify_freeness("B", n)
        ranks[n] = (rep.witness["rank"], (n // 2 + 1) ** 2)
    elapsed = time.perf_counter() - start
    ok = all(r == e for r, e in ranks.values()) and elapsed < 30
    report(2, ok, f"ranks={ {n: r for n, (r, _) in ranks.items()} } time={elapsed:.2f}s")


def test_criterion_3_d_family(report):
    start = time.perf_counter()
    parts = {}
    for n in (4, 6, 8):
        m = n // 2
        free = V.verify_freeness("D", n)
        eq = V.verify_eq24(n)
        gen = V.verify_generation_Dn(n)
        parts[n] = (free.passed and free.witness["rank"] == (m + 1) * (m + 2) // 2,
                    eq.passed and eq.witness["lucas_matches_factorial_parity"],
                    gen.passed and len(gen.witness["solved"]) == (m + 1) * (m + 2) // 2)
    elapsed = time.perf_counter() - start
    ok = all(all(v) for v in parts.values()) and elapsed < 60
    report(3, ok, f"(freeness, eq24, generation) per n={parts} time={elapsed:.2f}s")


def test_criterion_4_type_a_basis(report):
    start = time.perf_counter()
    ranks = {n: V.verify_freeness("A", n).witness["rank"] for n in range(2, 10)}
    elapsed = time.perf_counter() - start
    ok = all(r == n // 2 + 1 for n, r in ranks.items()) and elapsed < 5
    report(4, ok, f"ranks={ranks} time={elapsed:.2f}s")


def test_criterion_5_vanishing_and_restrictions(report):
    vanishing = {n: V.verify_vanishing(n).passed for n in range(2, 9)}
    cleared = {n: not V.verify_vanishing(n, minus_one_is_square=False).passed for n in range(2, 9)}
    h0 = {n: V.verify_h0(n).passed for n in range(2, 9)}
    siw0 = {n: V.verify_siw0(n).passed for n in (4, 6)}
    ok = all(vanishing.values()) and all(cleared.values()) and all(h0.values()) and all(siw0.values())
    failing = [n for n, v in vanishing.items() if not v]
    report(5, ok, f"vanishing fails for n={failing}; cleared-flags failure reported={all(cleared.values())} "
                  f"h0={all(h0.values())} siw0={siw0}")


def test_criterion_6_subgroups(report):
    start = time.perf_counter()
    counts = {}
    for t, n in [("B", 2), ("B", 3), ("B", 4), ("D", 4)]:
        rep = V.verify_subgroups(t, n)
        counts[f"{t}{n}"] = (rep.passed, rep.witness["classes"])
    elapsed = time.perf_counter() - start
    ok = all(p for p, _ in counts.values()) and counts["D4"][1] == 1 and elapsed < 120
    report(6, ok, f"classes={ {k: c for k, (_, c) in counts.items()} } time={elapsed:.2f}s")


def test_criterion_7_fixed_basis(report):
    dims = {}
    for n in (2, 3, 4):
        rep = V.verify_fixed_basis("B-H0", n)
        dims[f"B-H0 n={n}"] = (rep.passed and rep.witness["fixed_dim"] == n + 1, rep.witness["fixed_dim"])
    rep = V.verify_fixed_basis("D-Hm", 4)
    dims["D-Hm n=4"] = (rep.passed and rep.witness["fixed_dim"] == 6, rep.witness["fixed_dim"])
    ok = all(p for p, _ in dims.values())
    detail = f"fixed dims={ {k: d for k, (_, d) in dims.items()} }"
    if not rep.passed:
        detail += f" extra D fixed vector={rep.witness.get('extra_fixed_vector')}"
    report(7, ok, detail)


def test_criterion_8_negligibility_oracle(report):
    checked = 0
    mismatches = []

    def compare(c):
        nonlocal checked
        checked += 1
        if V.negligible_2elementary(c) != test_verify.oracle_negligible(c):
            mismatches.append(str(c))

    # every class of degree <= 4 for n = 1, 2
    for n in (1, 2):
        monos = test_verify.monomials(n, 4)
        for mask in range(1 << len(monos)):
            compare(test_verify.class_from_mask(n, monos, mask))
    # n = 3: every class of degree <= 3, every homogeneous class of degree 4
    low = test_verify.monomials(3, 3)
    for mask in range(1 << len(low)):
        compare(test_verify.class_from_mask(3, low, mask))
    top = [e for e in test_verify.monomials(3, 4) if sum(e) == 4]
    for mask in range(1, 1 << len(top)):
        compare(test_verify.class_from_mask(3, top, mask))
    # n = 3 mixed classes with degree-4 terms: agreement and graded splitting on a random sample
    rng = random.Random(0)
    monos = test_verify.monomials(3, 4)
    graded = True
    for _ in range(1000):
        c = V.GradedPolynomialClass(3, frozenset(m for m in monos if rng.random() < 0.5))
        compare(c)
        parts = [V.GradedPolynomialClass(3, frozenset(e for e in c.terms if sum(e) == d)) for d in range(5)]
        graded &= V.negligible_2elementary(c) == all(V.negligible_2elementary(p) for p in parts)
    ok = not mismatches and graded
    report(8, ok, f"{checked} classes compared, mismatches={mismatches[:3]}, graded={graded} "
                  "(n=3 mixed degree-4 classes: sampled, see notes)")


PROPERTY_TESTS = [
    test_symbols.test_normalize_idempotent,
    test_symbols.test_cup_commutative,
    test_symbols.test_cup_associative,
    test_symbols.test_cup_distributive,
    test_symbols.test_residue_contract,
    test_symbols.test_residue_linear,
    test_stiefel.test_whitney_formula,
    test_stiefel.test_fingerprint_linear,
    test_f2mat.test_rank_nullity,
]


def test_criterion_9_property_suites(report):
    failures = []
    for prop in PROPERTY_TESTS:
        settings = getattr(prop, "_hypothesis_internal_use_settings", None)
        assert settings is not None and settings.max_examples == 1000, prop.__name__
        try:
            prop()
        except Exception as exc:  # noqa: BLE001 - reported in the line below
            failures.append(f"{prop.__name__}: {type(exc).__name__}")
    report(9, not failures, f"{len(PROPERTY_TESTS)} suites x 1000 cases, failures={failures}")
