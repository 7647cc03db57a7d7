"""Acceptance checks, one test per criterion.

Each check returns ``(ok, detail)``; the outcome line is recorded for the
terminal summary (see ``conftest.py``) and also printed when this file is
run directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from math import comb

import pytest

from topogs.arrangement import arrangement_survey
from topogs.choice import SocialChoiceFunction, axiom_summary, dictator_of, random_table
from topogs.enumeration import enumerate_monotonic_unanimous
from topogs.homology import homology_groups
from topogs.pipeline import (
    basis_coefficient_matrix,
    dictator_via_homology,
    duality_matrix,
    generator_test,
    induced_scf_map,
    nerve_NA,
    nerve_NM,
    nerve_NP,
    nerve_NProfiles,
    pairing_vector,
)
from topogs.report import complex_self_checks, fixture_rules

FIVE = [(3, 1), (3, 2), (3, 3), (4, 1), (4, 2)]
BASIS_INSTANCES = [(3, 2), (3, 3), (4, 2)]
RESULTS: dict[int, tuple[bool, str]] = {}


def _record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {title} -- {detail}"
    RESULTS[num] = (ok, line)
    print(line)
    assert ok, line


def crit_1():
    t0 = time.perf_counter()
    rows, ok = [], True
    for n in range(3, 7):
        groups = homology_groups(nerve_NA(n))
        expected = [(1 if k in (0, n - 2) else 0, []) for k in range(n - 1)]
        ok &= groups == expected
        rows.append(f"n={n}: betti {[b for b, _ in groups]}")
    dt = time.perf_counter() - t0
    ok &= dt < 10
    return ok, "; ".join(rows) + f" ({dt:.2f}s, limit 10s)"


def crit_2():
    rows, ok = [], True
    for n, N in FIVE:
        t0 = time.perf_counter()
        nerve_NProfiles.cache_clear()
        groups = homology_groups(nerve_NProfiles(n, N))
        dt = time.perf_counter() - t0
        good = all(groups[k] == (0, []) for k in range(1, n - 2))
        good &= groups[n - 2] == (N, [])
        good &= dt < (300 if (n, N) == (4, 2) else 30)
        ok &= good
        rows.append(f"({n},{N}) H_{n - 2}=Z^{groups[n - 2][0]} torsion {groups[n - 2][1]} "
                    f"{dt:.1f}s")
    return ok, "; ".join(rows)


def crit_3():
    rows, ok = [], True
    for n, N in FIVE:
        a, b = nerve_NProfiles(n, N), nerve_NM(n, N)
        same = a == b and list(a) == list(b)
        ok &= same
        rows.append(f"({n},{N}) {sum(a.f_vector())} faces {'equal' if same else 'DIFFER'}")
    return ok, "; ".join(rows)


def crit_4():
    rows, ok = [], True
    for n in (3, 4):
        res = generator_test(n)
        cyc = [r["coefficient"] for r in res if r["kind"] == "cyclic"]
        acyc = [r["coefficient"] for r in res if r["kind"] == "acyclic"]
        good = len(res) == 2 ** n and len(cyc) == 2 and all(abs(c) == 1 for c in cyc)
        good &= all(c == 0 for c in acyc)
        ok &= good
        rows.append(f"n={n}: cyclic {cyc}, acyclic nonzero {sum(c != 0 for c in acyc)}"
                    f"/{len(acyc)}")
    return ok, "; ".join(rows)


def crit_5():
    rows, ok = [], True
    for n, N in BASIS_INSTANCES:
        M = basis_coefficient_matrix(n, N)
        det = M.determinant() if M.rows == M.cols else None
        dual = duality_matrix(n, N)
        good = det in (1, -1) and dual == [[int(i == j) for j in range(N)] for i in range(N)]
        ok &= good
        rows.append(f"({n},{N}) det {det}, duality {'identity' if good else dual}")
    return ok, "; ".join(rows)


def crit_6():
    rows, ok = [], True
    for n, N in BASIS_INSTANCES:
        for l in range(N):
            f = SocialChoiceFunction.dictatorship(l, n, N)
            fs = induced_scf_map(f, exhaustive=True)
            vec = pairing_vector(f, fs)
            good = vec == [int(k == l) for k in range(N)]
            good &= dictator_via_homology(f, fs) == dictator_of(f) == l
            ok &= good
            rows.append(f"({n},{N}) d{l}->{vec}")
    return ok, "; ".join(rows)


def crit_7():
    t0 = time.perf_counter()
    res = enumerate_monotonic_unanimous(3, 2)
    dt = time.perf_counter() - t0
    dictators = sorted(dictator_of(f) for f in res.functions)
    ok = len(res.functions) == 2 and dictators == [0, 1] and dt < 60
    return ok, f"{len(res.functions)} functions, dictators {dictators}, {res.nodes} nodes, {dt:.2f}s"


def _perturbed_dictatorship(seed: int) -> SocialChoiceFunction:
    rng = random.Random(seed)
    table = SocialChoiceFunction.dictatorship(seed % 2, 3, 2).values.tolist()
    for _ in range(rng.randint(1, 3)):
        table[rng.randrange(36)] = rng.randrange(3)
    return SocialChoiceFunction.from_table(table, 3, 2)


def crit_8():
    fns = list(fixture_rules(3, 2))
    fns += [random_table(3, 2, s) for s in range(1000)]
    fns += [_perturbed_dictatorship(s) for s in range(300)]  # near the boundary
    both_true = exceptions = non_dictatorial = 0
    for f in fns:
        s = axiom_summary(f)
        exceptions += not s.equivalence_holds
        if s.monotonic_and_unanimous and s.surjective_and_strategy_proof:
            both_true += 1
            non_dictatorial += dictator_of(f) is None
    ok = exceptions == 0 and non_dictatorial == 0
    return ok, (f"{len(fns)} functions (fixtures, 1000 random, 300 perturbed), "
                f"{exceptions} exceptions, {both_true} satisfy both sides, "
                f"all dictatorial: {non_dictatorial == 0}")


def crit_9():
    rows, ok = [], True
    for n, N in BASIS_INSTANCES:
        s = arrangement_survey(n, N)
        ok &= s.passed and s.colorings == N ** comb(n, 2)
        rows.append(f"({n},{N}) {s.colorings} colorings, mismatches {len(s.mismatches)}, "
                    f"max {s.max_dimension}, maximizers {len(s.maximizers)}")
    return ok, "; ".join(rows)


def crit_10():
    complexes = [(f"NA({n})", nerve_NA(n)) for n in range(3, 7)]
    complexes += [(f"NP({n})", nerve_NP(n)) for n in (3, 4)]
    complexes += [(f"NProfiles{nN}", nerve_NProfiles(*nN)) for nN in FIVE]
    complexes += [(f"NM{nN}", nerve_NM(*nN)) for nN in FIVE]
    ok, bad = True, []
    for label, cx in complexes:
        c = complex_self_checks(cx, verify_factorizations=True)
        if not c["pass"]:
            ok = False
            bad.append(label)
    return ok, f"{len(complexes)} complexes: dd=0, SNF re-verified, Euler consistent" + \
        (f"; failures {bad}" if bad else "")


CRITERIA = [
    (1, "outcome nerve is a sphere", crit_1),
    (2, "profile nerve homology", crit_2),
    (3, "nerve equivalence", crit_3),
    (4, "generator dichotomy", crit_4),
    (5, "basis and duality", crit_5),
    (6, "dictator pairing", crit_6),
    (7, "exhaustive enumeration", crit_7),
    (8, "axiom equivalence", crit_8),
    (9, "arrangement dimensions", crit_9),
    (10, "kernel self-checks", crit_10),
]


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, title, check):
    ok, detail = check()
    _record(num, title, ok, detail)


if __name__ == "__main__":
    failed = 0
    for num, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {title} -- {detail}")
    raise SystemExit(1 if failed else 0)
