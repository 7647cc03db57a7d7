"""Verification suites and the JSON report document.

Every suite returns a JSON-ready dict with a boolean ``pass``.  Reports are
deterministic for a fixed configuration; wall-clock timings live under the
top-level ``timing`` key only.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

from topogs import __version__, _backend
from topogs.arrangement import arrangement_survey
from topogs.choice import (
    SocialChoiceFunction,
    axiom_summary,
    dictator_of,
    is_valid_manipulation,
    is_valid_monotonicity_violation,
    random_table,
)
from topogs.complexes import SimplicialComplex
from topogs.enumeration import BudgetExceeded, enumerate_monotonic_unanimous
from topogs.homology import homology, homology_groups
from topogs.intmat import smith_normal_form, verify_snf
from topogs.pipeline import (
    basis_coefficient_matrix,
    dictator_via_homology,
    duality_matrix,
    generator_test,
    nerve_NA,
    nerve_NM,
    nerve_NProfiles,
    pairing_vector,
)

SCHEMA_VERSION = 1
SUITES = ("axioms", "nerves", "homology", "generators", "basis", "pairing",
          "arrangement", "enumerate", "equivalence")
MAX_PROFILES = 1000
MAX_COLORINGS = 200_000


class EnvelopeError(ValueError):
    """Requested instance is outside the supported desk-scale envelope."""


@dataclass
class SuiteConfig:
    n: int
    N: int
    suites: tuple[str, ...] = SUITES
    seed: int = 0
    samples: int = 1000
    exhaustive: bool = False
    max_nodes: int = 50_000_000
    output_path: str | None = None

    def echo(self) -> dict:
        return {"n": self.n, "N": self.N, "suites": list(self.suites), "seed": self.seed,
                "samples": self.samples,
                "validation_level": "exhaustive" if self.exhaustive else "probe_only"}


def profile_count(n: int, N: int) -> int:
    return math.factorial(n) ** N


def check_envelope(suite: str, n: int, N: int) -> None:
    if suite not in SUITES:
        raise EnvelopeError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if n < 2 or N < 1:
        raise EnvelopeError(f"need n >= 2 and N >= 1, got n={n}, N={N}")
    needs_cycle = {"generators", "basis", "pairing", "enumerate"}
    if suite in needs_cycle and n < 3:
        raise EnvelopeError(f"suite {suite} needs n >= 3")
    if suite == "arrangement":
        if N ** math.comb(n, 2) > MAX_COLORINGS:
            raise EnvelopeError(f"{N ** math.comb(n, 2)} colorings exceed {MAX_COLORINGS}")
        return
    if suite == "generators":
        if math.factorial(n) > MAX_PROFILES:
            raise EnvelopeError(f"n={n} exceeds the supported envelope")
        return
    if profile_count(n, N) > MAX_PROFILES:
        raise EnvelopeError(f"(n!)^N = {profile_count(n, N)} profiles exceeds the "
                            f"supported envelope of {MAX_PROFILES}")


# -- kernel self-checks ----------------------------------------------------------------

def complex_self_checks(cx: SimplicialComplex, verify_factorizations: bool = True) -> dict:
    """Boundary-of-boundary, Smith form re-verification, Euler characteristic."""
    dd_zero = all((cx.boundary_matrix(k) @ cx.boundary_matrix(k + 1)).is_zero()
                  for k in range(1, cx.dim))
    snf_ok = True
    factors = [[] for _ in range(cx.dim + 2)]
    for k in range(1, cx.dim + 1):
        B = cx.boundary_matrix(k)
        res = smith_normal_form(B, track_rows=verify_factorizations,
                                track_cols=verify_factorizations)
        if verify_factorizations:
            try:
                verify_snf(B, res)
            except ArithmeticError:
                snf_ok = False
        factors[k] = res.diagonal
    betti = [cx.count(k) - len(factors[k]) - len(factors[k + 1]) for k in range(cx.dim + 1)]
    torsion = [[d for d in factors[k + 1] if d > 1] for k in range(cx.dim + 1)]
    euler_faces = cx.euler_characteristic()
    euler_betti = sum((-1) ** k * b for k, b in enumerate(betti))
    return {"boundary_squared_zero": dd_zero, "snf_verified": snf_ok,
            "euler_faces": euler_faces, "euler_betti": euler_betti,
            "betti": betti, "torsion": torsion,
            "pass": dd_zero and snf_ok and euler_faces == euler_betti}


# -- suites ---------------------------------------------------------------------------

def fixture_rules(n: int, N: int) -> list[SocialChoiceFunction]:
    rules = [SocialChoiceFunction.dictatorship(l, n, N) for l in range(N)]
    rules += [SocialChoiceFunction.constant(0, n, N),
              SocialChoiceFunction.plurality_lex(n, N),
              SocialChoiceFunction.borda_lex(n, N)]
    return rules


def _axiom_row(f: SocialChoiceFunction) -> dict:
    s = axiom_summary(f)
    ok = True
    if not s.monotonic:
        ok &= is_valid_monotonicity_violation(f, *s.monotonic.witness)
    if not s.strategy_proof:
        ok &= is_valid_manipulation(f, s.strategy_proof.witness)
    if not s.unanimous:
        p = s.unanimous.witness
        ok &= len(set(p.tops())) == 1 and f(p) != p.tops()[0]
    return {"rule": f.name, "monotonic": s.monotonic.holds, "unanimous": s.unanimous.holds,
            "surjective": s.surjective.holds, "strategy_proof": s.strategy_proof.holds,
            "dictator": dictator_of(f), "equivalence_holds": s.equivalence_holds,
            "witnesses_valid": bool(ok)}


def suite_axioms(cfg: SuiteConfig) -> dict:
    rows = [_axiom_row(f) for f in fixture_rules(cfg.n, cfg.N)]
    ok = all(r["witnesses_valid"] and r["equivalence_holds"] for r in rows)
    for l in range(cfg.N):
        r = rows[l]
        ok &= all(r[a] for a in ("monotonic", "unanimous", "surjective", "strategy_proof"))
        ok &= r["dictator"] == l
    const = rows[cfg.N]
    ok &= const["monotonic"] and const["strategy_proof"] and const["dictator"] is None
    if cfg.n >= 2:
        ok &= not const["unanimous"] and not const["surjective"]
    return {"rules": rows, "pass": bool(ok)}


def suite_nerves(cfg: SuiteConfig) -> dict:
    a = nerve_NProfiles(cfg.n, cfg.N)
    b = nerve_NM(cfg.n, cfg.N)
    NA = nerve_NA(cfg.n)
    na_ok = NA.count(cfg.n - 1) == 0 and NA.f_vector() == [math.comb(cfg.n, k + 1)
                                                          for k in range(cfg.n - 1)]
    return {"profile_nerve_f_vector": a.f_vector(), "cone_nerve_f_vector": b.f_vector(),
            "identical": a == b, "outcome_nerve_is_sphere_boundary": na_ok,
            "pass": a == b and na_ok}


def suite_homology(cfg: SuiteConfig) -> dict:
    n, N = cfg.n, cfg.N
    cx = nerve_NProfiles(n, N)
    groups = homology_groups(cx)
    top = n - 2
    ok = groups[0] == (1, [])
    ok &= all(groups[k] == (0, []) for k in range(1, top))
    if top > 0:
        ok &= groups[top] == (N, [])
    na = homology_groups(nerve_NA(n))
    na_ok = all(na[k] == ((1 if k in (0, n - 2) else 0), []) for k in range(len(na)))
    if n == 2:
        na_ok = na == [(2, [])]
    checks = {"profile_nerve": complex_self_checks(cx),
              "outcome_nerve": complex_self_checks(nerve_NA(n))}
    return {"profile_nerve": [{"degree": k, "betti": b, "torsion": t}
                              for k, (b, t) in enumerate(groups)],
            "outcome_nerve": [{"degree": k, "betti": b, "torsion": t}
                              for k, (b, t) in enumerate(na)],
            "rank_in_top_degree": groups[top][0] if top > 0 else None,
            "self_checks": checks,
            "pass": bool(ok and na_ok and all(c["pass"] for c in checks.values()))}


def suite_generators(cfg: SuiteConfig) -> dict:
    rows = generator_test(cfg.n)
    cyclic = [r for r in rows if r["kind"] == "cyclic"]
    ok = len(cyclic) == 2 and all(abs(r["coefficient"]) == 1 for r in cyclic)
    ok &= all(r["coefficient"] == 0 for r in rows if r["kind"] == "acyclic")
    return {"orientations": rows, "pass": bool(ok)}


def suite_basis(cfg: SuiteConfig) -> dict:
    M = basis_coefficient_matrix(cfg.n, cfg.N)
    det = M.determinant() if M.rows == M.cols else None
    dual = duality_matrix(cfg.n, cfg.N)
    ident = [[int(i == j) for j in range(cfg.N)] for i in range(cfg.N)]
    return {"coefficient_matrix": M.to_dense(), "determinant": det,
            "duality_matrix": dual, "pass": det in (1, -1) and dual == ident}


def suite_pairing(cfg: SuiteConfig) -> dict:
    rows, ok = [], True
    for l in range(cfg.N):
        f = SocialChoiceFunction.dictatorship(l, cfg.n, cfg.N)
        vec = pairing_vector(f)
        homological = dictator_via_homology(f)
        expected = [int(k == l) for k in range(cfg.N)]
        row_ok = vec == expected and homological == l == dictator_of(f)
        rows.append({"rule": f.name, "pairing_vector": vec, "dictator": homological,
                     "pass": row_ok})
        ok &= row_ok
    return {"rules": rows, "pass": bool(ok)}


def suite_arrangement(cfg: SuiteConfig) -> dict:
    return arrangement_survey(cfg.n, cfg.N, MAX_COLORINGS).to_dict()


def suite_enumerate(cfg: SuiteConfig) -> dict:
    try:
        res = enumerate_monotonic_unanimous(cfg.n, cfg.N, cfg.max_nodes)
    except BudgetExceeded as exc:
        return {"budget_exceeded": True, "message": str(exc), "pass": False}
    dictators = [dictator_of(f) for f in res.functions]
    valid = all(axiom_summary(f).monotonic_and_unanimous for f in res.functions)
    ok = (valid and None not in dictators and len(res.functions) == cfg.N
          and sorted(dictators) == list(range(cfg.N)))
    return {"count": len(res.functions), "dictators": dictators, "nodes": res.nodes,
            "all_monotonic_unanimous": valid, "budget_exceeded": False, "pass": bool(ok)}


def suite_equivalence(cfg: SuiteConfig) -> dict:
    exceptions = []
    fixtures = fixture_rules(cfg.n, cfg.N)
    for f in fixtures:
        if not axiom_summary(f).equivalence_holds:
            exceptions.append(f.name)
    counts = {"monotonic_unanimous": 0, "surjective_strategy_proof": 0}
    for s in range(cfg.samples):
        seed = cfg.seed + s
        f = random_table(cfg.n, cfg.N, seed)
        summ = axiom_summary(f)
        counts["monotonic_unanimous"] += summ.monotonic_and_unanimous
        counts["surjective_strategy_proof"] += summ.surjective_and_strategy_proof
        if not summ.equivalence_holds:
            exceptions.append(f"random:{seed}")
    return {"fixtures": [f.name for f in fixtures], "samples": cfg.samples,
            "seed": cfg.seed, "exceptions": exceptions, "counts": counts,
            "pass": not exceptions}


SUITE_FUNCS: dict[str, Callable[[SuiteConfig], dict]] = {
    "axioms": suite_axioms, "nerves": suite_nerves, "homology": suite_homology,
    "generators": suite_generators, "basis": suite_basis, "pairing": suite_pairing,
    "arrangement": suite_arrangement, "enumerate": suite_enumerate,
    "equivalence": suite_equivalence,
}


# -- documents ------------------------------------------------------------------------

@dataclass
class ReportDocument:
    command: str
    config: dict
    results: dict
    passed: bool
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "tool": "topogs", "version": __version__,
                "command": self.command, "config": self.config, "results": self.results,
                "pass": self.passed, "timing": self.timing}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def deterministic_json(self) -> str:
        d = self.to_dict()
        d.pop("timing")
        return json.dumps(d, indent=2, sort_keys=True)


def run_verify(cfg: SuiteConfig) -> ReportDocument:
    for s in cfg.suites:
        check_envelope(s, cfg.n, cfg.N)
    results, timing = {}, {"backend": _backend.name}
    for s in cfg.suites:
        t0 = time.perf_counter()
        results[s] = SUITE_FUNCS[s](cfg)
        timing[s] = round(time.perf_counter() - t0, 4)
    ok = all(r["pass"] for r in results.values())
    return ReportDocument("verify", cfg.echo(), results, ok, timing)


def homology_document(target: str, cx: SimplicialComplex, n: int, N: int | None,
                      degrees: list[int]) -> ReportDocument:
    t0 = time.perf_counter()
    groups = []
    for k in degrees:
        d = homology(cx, k)
        groups.append(d.summary())
    config = {"target": target, "n": n, "N": N, "degrees": degrees}
    results = {"f_vector": cx.f_vector(), "homology": groups}
    return ReportDocument("homology", config, results, True,
                          {"total": round(time.perf_counter() - t0, 4)})
