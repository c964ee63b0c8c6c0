"""Experiment records, parameter sweeps and named verification suites."""
from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
import random
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction

from . import oracles
from .constructions import (
    hairbrush_family,
    minimize_union,
    planes_family,
    random_family,
)
from .decomposition import (
    captured_fraction,
    extract_quasi_extremizers,
    foliate,
    iterated_popularity,
    plane_select,
    points_family,
    popularity_refine,
)
from .flats import (
    all_flats,
    count_containing,
    count_disjoint_hyperplanes,
    count_flats,
    gaussian_binomial,
    standard_flat,
    subflats,
)
from .incidence import (
    FlatFamily,
    check_dplane_wolff,
    check_wolff,
    union_points,
    union_subflats,
    verify_cauchy_schwarz,
)

GRID_KEYS = ("p", "n", "k", "kprime", "d", "beta", "gamma", "lambda", "C")
GRID_DEFAULTS = {"k": [1], "kprime": [0], "beta": [0], "gamma": [1], "lambda": [1], "C": [1]}
SEEDED = {"random", "search"}


def sig6(x: float) -> float:
    return float(f"{x:.6g}")


def content_hash(obj) -> str:
    """Git-style blob hash of the canonical JSON encoding of ``obj``."""
    body = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


@dataclass(frozen=True)
class ExperimentRecord:
    construction: str
    p: int
    n: int
    k: int
    kprime: int
    d: int
    beta: float
    gamma: float
    lam: float
    C: float
    seed: int
    size: int
    hypothesis_met: bool
    union: int
    target: float
    ratio: float
    wolff_pass: bool | None
    dplane_wolff_pass: bool | None
    digest: str

    def params(self) -> dict:
        return {
            "construction": self.construction, "p": self.p, "n": self.n, "k": self.k,
            "kprime": self.kprime, "d": self.d, "beta": self.beta, "gamma": self.gamma,
            "lambda": self.lam, "C": self.C, "seed": self.seed,
        }

    def to_record(self) -> dict:
        return {
            "kind": "experiment",
            **self.params(),
            "size": self.size,
            "hypothesis_met": self.hypothesis_met,
            "union": self.union,
            "target": sig6(self.target),
            "ratio": sig6(self.ratio),
            "wolff_pass": self.wolff_pass,
            "dplane_wolff_pass": self.dplane_wolff_pass,
            "hash": self.digest,
        }


def build_family(construction: str, pt: dict, seed: int, steps: int = 0) -> FlatFamily:
    """The family a sweep grid point asks for; raises ValueError when infeasible."""
    p, n, k, d, beta, gamma = pt["p"], pt["n"], pt["k"], pt["d"], pt["beta"], pt["gamma"]
    if construction in ("planes_family", "pencil"):
        N = round(p**beta)
        mode = "parallel" if construction == "planes_family" else "pencil"
        return planes_family(d, N, n, p, k, mode)
    if construction in SEEDED:
        size = math.ceil(gamma * p ** ((k + 1) * (d - k) + beta) - 1e-9)
        if construction == "random":
            return random_family(n, k, size, p, seed)
        return minimize_union(n, k, size, p, seed, steps)[0]
    if construction == "hairbrush":
        if k != 1:
            raise ValueError("hairbrush families are line families")
        return hairbrush_family(standard_flat(n, 1, p), 1.0, seed)
    raise ValueError(f"unknown construction {construction!r}")


def measure(family: FlatFamily, construction: str, pt: dict, seed: int,
            axioms: bool = True) -> ExperimentRecord:
    p, k, kp, d, beta = family.p, family.k, pt["kprime"], pt["d"], pt["beta"]
    if not 0 <= kp < k:
        raise ValueError(f"need 0 <= k' < k, got k'={kp}, k={k}")
    union = union_subflats(family, kp) if kp else union_points(family)
    target = float(p) ** ((kp + 1) * (d - kp) + beta)
    need = pt["gamma"] * float(p) ** ((k + 1) * (d - k) + beta)
    wolff = dplane = None
    if axioms and k == 1 and family.n >= 2:
        wolff = check_wolff(family, method="superflats").passed
        if 2 <= d <= family.n:
            dplane = check_dplane_wolff(family, d).passed
    digest = content_hash({"params": {**pt, "construction": construction, "seed": seed},
                           "family": family.to_dict()})
    return ExperimentRecord(construction, p, family.n, k, kp, d, beta, pt["gamma"],
                            pt["lambda"], pt["C"], seed, len(family), len(family) >= need - 1e-9,
                            union, target, union / target, wolff, dplane, digest)


@dataclass
class SweepResult:
    records: list[ExperimentRecord]
    skipped: list[dict]
    summary: list[dict]

    def rows(self) -> list[dict]:
        return [r.to_record() for r in self.records] + self.skipped + self.summary

    def min_ratio(self) -> float | None:
        return min((r.ratio for r in self.records), default=None)


def _blocks(config: dict) -> list[dict]:
    return config["blocks"] if "blocks" in config else [config]


def _grid_points(block: dict) -> Iterable[dict]:
    grid = {**GRID_DEFAULTS, **block.get("grid", {})}
    missing = [key for key in ("p", "n", "d") if key not in grid]
    if missing:
        if not block.get("grid"):
            return []
        raise ValueError(f"grid lacks {missing}")
    axes = [sorted(grid[key]) for key in GRID_KEYS]
    return (dict(zip(GRID_KEYS, vals)) for vals in itertools.product(*axes))


def _seeds(block: dict) -> list[int]:
    s = block.get("seeds", [0])
    if isinstance(s, dict):
        return list(range(s.get("start", 0), s.get("start", 0) + s["count"]))
    return list(s)


def run_sweep(config: dict) -> SweepResult:
    """One record per (grid point, construction, seed), in sorted parameter order."""
    records, skipped = [], []
    for block in _blocks(config):
        steps = block.get("steps", 0)
        axioms = block.get("axioms", True)
        seeds = _seeds(block)
        for pt in _grid_points(block):
            for cons in block.get("constructions", ["planes_family"]):
                for seed in (seeds if cons in SEEDED else seeds[:1]):
                    try:
                        fam = build_family(cons, pt, seed, steps)
                        rec = measure(fam, cons, pt, seed, axioms)
                    except ValueError as exc:
                        skipped.append({"kind": "skip", "construction": cons, **pt,
                                        "seed": seed, "reason": str(exc)})
                        continue
                    records.append(rec)
    records.sort(key=lambda r: (r.k, r.kprime, r.d, r.beta, r.p, r.n, r.gamma, r.lam, r.C,
                                r.construction, r.seed))
    groups: dict[tuple, list[float]] = {}
    for r in records:
        groups.setdefault((r.k, r.kprime, r.d, r.beta), []).append(r.ratio)
    summary = [
        {"kind": "summary", "k": k, "kprime": kp, "d": d, "beta": b,
         "count": len(v), "min_ratio": sig6(min(v))}
        for (k, kp, d, b), v in sorted(groups.items())
    ]
    return SweepResult(records, skipped, summary)


SUITES: dict[str, dict] = {
    "sharpness": {
        "blocks": [
            {"grid": {"p": [3], "n": [3], "k": [1], "d": [2], "beta": [0, 1]},
             "constructions": ["planes_family"]},
            {"grid": {"p": [2], "n": [4], "k": [2], "d": [3], "beta": [0]},
             "constructions": ["planes_family"], "axioms": False},
        ]
    },
    "floor": {
        "blocks": [
            {"grid": {"p": [2, 3, 5], "n": [3, 4], "k": [1], "d": [1, 2], "beta": [0, 0.5, 1]},
             "constructions": ["random", "search"], "seeds": {"count": 15}, "steps": 1000,
             "axioms": False},
        ]
    },
    "smoke": {
        "grid": {"p": [2, 3], "n": [3], "k": [1], "d": [2], "beta": [0, 1]},
        "constructions": ["planes_family", "random", "search"], "seeds": [0, 1], "steps": 100,
    },
}


def to_csv(rows: list[dict]) -> str:
    keys: list[str] = []
    for r in rows:
        for key in r:
            if key not in keys:
                keys.append(key)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def to_jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows)


# --- verification suites -------------------------------------------------------


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_record(self) -> dict:
        return {"kind": "check", "suite": self.suite, "name": self.name,
                "pass": self.passed, "detail": self.detail}


def _suite_counts() -> list[Check]:
    bad = []
    n_checked = 0
    for q in (2, 3):
        for d in range(0, 5):
            for k in range(d + 1):
                n_checked += 1
                if gaussian_binomial(d, k, q) != oracles.brute_gaussian(d, k, q):
                    bad.append(f"G({d},{k}) q={q}")
                if count_flats(d, k, q) != oracles.brute_count_flats(d, k, q) or \
                        count_flats(d, k, q) != len(all_flats(q, d, k)):
                    bad.append(f"G'({d},{k}) q={q}")
                for l in range(k):
                    if count_containing(l, k, d, q) != oracles.brute_count_containing(l, k, d, q):
                        bad.append(f"contain({l},{k},{d}) q={q}")
            for l in range(d):
                if count_disjoint_hyperplanes(l, d, q) != oracles.brute_count_disjoint(l, d, q):
                    bad.append(f"disjoint({l},{d}) q={q}")
    return [Check("counts", "closed forms equal point-set enumeration", not bad,
                  f"{n_checked} (d,k,q) cases" + (f"; failures {bad[:5]}" if bad else ""))]


def _suite_lemmas() -> list[Check]:
    bad = []
    for q in (2, 3, 5, 7):
        for d in range(7):
            for k in range(d + 1):
                g, gp = gaussian_binomial(d, k, q), count_flats(d, k, q)
                if not q ** (k * (d - k)) <= g <= 4**k * q ** (k * (d - k)):
                    bad.append(("G", d, k, q))
                if not q ** ((k + 1) * (d - k)) <= gp <= 4 ** (k + 1) * q ** ((k + 1) * (d - k)):
                    bad.append(("G'", d, k, q))
    out = [Check("lemmas", "subspace and flat count brackets", not bad, str(bad[:5]))]
    q = 3
    origin = (0, 0)
    lines = FlatFamily.of([f for f in all_flats(q, 2, 1) if f.contains_point(origin)][:3])
    pts = points_family(lines)
    rep = verify_cauchy_schwarz(lines, pts, 3)
    out.append(Check("lemmas", "incidence count, concurrent lines", rep.U == 15 and rep.holds,
                     f"U={rep.U} lower={rep.lower_bound}"))
    par = FlatFamily.of(standard_flat(2, 1, q, (0, t)) for t in range(3))
    rep = verify_cauchy_schwarz(par, points_family(par), 3)
    out.append(Check("lemmas", "incidence count, parallel lines", rep.U == 9 and rep.lower_bound == 9,
                     f"U={rep.U} lower={rep.lower_bound}"))
    return out


def _axiom_corpus() -> list[FlatFamily]:
    corpus = []
    for q in (2, 3):
        for n in (2, 3, 4):
            total = count_flats(n, 1, q)
            for seed in range(6):
                size = 1 + (seed * 7) % min(total, 30)
                corpus.append(random_family(n, 1, size, q, seed))
            if n >= 3:
                corpus.append(planes_family(2, 1, n, q))
    return corpus


def _suite_axioms() -> list[Check]:
    bad = 0
    corpus = _axiom_corpus()
    for fam in corpus:
        if check_wolff(fam).passed != check_wolff(fam, "exhaustive").passed:
            bad += 1
        for d in range(2, fam.n + 1):
            a = check_dplane_wolff(fam, d, "joins")
            b = check_dplane_wolff(fam, d, "exhaustive")
            if (a.passed, a.max_count) != (b.passed, b.max_count):
                bad += 1
    planar = planes_family(2, 1, 4, 3)
    remark = not check_wolff(planar).passed and check_dplane_wolff(planar, 3).passed
    return [
        Check("axioms", "join candidates agree with full enumeration", bad == 0,
              f"{len(corpus)} families, {bad} disagreements"),
        Check("axioms", "planar family fails 2-plane axiom, passes 3-plane axiom", remark),
    ]


def decomposition_corpus(seeds: int = 100) -> Iterable[tuple[dict, FlatFamily]]:
    """Seeded random families, half of them with a planted rich flat."""
    for q in (2, 3):
        for n in (3, 4):
            for k in (1, 2):
                for d in range(k, 4):
                    total = count_flats(n, k, q)
                    for s in range(seeds):
                        rng = random.Random(f"{q}-{n}-{k}-{d}-{s}")
                        size = rng.randint(1, min(total, 40))
                        fam = random_family(n, k, size, q, seed=rng.randrange(1 << 30))
                        if s % 2 and d > k:
                            R = rng.choice(all_flats(q, n, d))
                            fam = fam.like(list(fam) + list(subflats(R, k)))
                        yield {"q": q, "n": n, "k": k, "d": d, "seed": s}, fam


def _suite_decomposition(seeds: int = 100) -> list[Check]:
    bad = []
    count = 0
    for cfg, fam in decomposition_corpus(seeds):
        count += 1
        v = plane_select(fam, cfg["d"]).violations()
        if v:
            bad.append((cfg, v[0]))
    return [Check("decomposition", "plane selection properties (a)-(e)", not bad,
                  f"{count} families" + (f"; first failure {bad[0]}" if bad else ""))]


def _suite_foliation() -> list[Check]:
    pairs = viol = 0
    for q in (2, 3):
        for n in range(1, 5):
            for m in range(0, n + 1):
                for S in all_flats(q, n, m):
                    for k in range(1, n + 1):
                        for qi in range(0, min(k - 1, m) + 1):
                            if m + k - qi > n:
                                continue
                            r = foliate(S, qi, k).verify_exhaustive()
                            pairs += r.pairs
                            viol += r.violations
    return [Check("foliation", "unique-leaf routing for all qualifying pairs", viol == 0,
                  f"{pairs} pairs, {viol} violations")]


def _suite_refinement() -> list[Check]:
    out = []
    fam = planes_family(2, 3, 3, 3)
    t = popularity_refine(fam, points_family(fam), 1, 1, 2, 1)
    out.append(Check("refinement", "line refinement on three parallel planes",
                     not t.violations() and len(t.L_sharp) == 36, t.branch))
    t2 = iterated_popularity(fam, points_family(fam), 1, 1, 2)
    out.append(Check("refinement", "ladder with k=1 matches the line refinement",
                     set(t2.L_sharp) == set(t.L_sharp) and set(t2.P_sharp) == set(t.P_sharp)))
    planes = FlatFamily.of(all_flats(2, 3, 2))
    lines = FlatFamily.of(all_flats(2, 3, 1))
    t3 = iterated_popularity(planes, lines, 1, 1, 2)
    out.append(Check("refinement", "ladder on all planes of F_2^3",
                     not t3.violations() and len(t3.L_sharp) == 14))
    return out


def _suite_sharpness() -> list[Check]:
    res = run_sweep(SUITES["sharpness"])
    ok = bool(res.records) and all(r.ratio == 1.0 for r in res.records)
    qe = extract_quasi_extremizers(planes_family(2, 3, 3, 3), 2)
    ok_qe = len(qe) == 3 and all(x.density == 1 for x in qe) and \
        captured_fraction(planes_family(2, 3, 3, 3), qe) == Fraction(1)
    return [
        Check("sharpness", "parallel-plane witnesses have ratio exactly 1", ok,
              ", ".join(f"{r.k}:{r.beta}:{r.union}/{r.target:g}" for r in res.records)),
        Check("sharpness", "quasi-extremizer extraction on three parallel planes", ok_qe),
    ]


VERIFY_SUITES: dict[str, Callable[[], list[Check]]] = {
    "counts": _suite_counts,
    "lemmas": _suite_lemmas,
    "axioms": _suite_axioms,
    "decomposition": _suite_decomposition,
    "foliation": _suite_foliation,
    "refinement": _suite_refinement,
    "sharpness": _suite_sharpness,
}


def verify_suite(name: str) -> list[Check]:
    if name not in VERIFY_SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(VERIFY_SUITES)}")
    return VERIFY_SUITES[name]()


__all__ = [
    "ExperimentRecord", "SweepResult", "SUITES", "VERIFY_SUITES", "Check", "build_family",
    "content_hash", "measure", "run_sweep", "to_csv", "to_jsonl", "verify_suite",
    "decomposition_corpus",
]
