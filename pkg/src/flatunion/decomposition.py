"""Plane selection, foliation, popularity refinement and the hairbrush trace.

Every routine here runs a constructive step of the union-of-planes argument
on a concrete family and records the quantities involved. Exact
consequences of the construction are checked; asymptotic claims are only
measured and written to a ledger.
"""
from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .flats import (
    AffineFlat,
    _subspace_bases,
    all_flats,
    canonicalize,
    contains,
    decode_point,
    intersect,
    EMPTY,
    subflats,
    superflats,
)
from .gf_linear import combine, complement_units
from .incidence import (
    FlatFamily,
    HypothesisError,
    _plane_matrix,
    contained_members,
    incidence_matrix,
    max_containment,
    union_codes,
)


def richness_threshold(k: int, m: int, q: int) -> int:
    """Members an m-flat must hold to be grabbed during plane selection (m > k)."""
    return q ** ((k + 1) * (m - 1 - k) + k)


@dataclass(frozen=True)
class LedgerRow:
    """One measured inequality ``lhs <relation> rhs``.

    ``asserted`` rows are exact consequences of the construction and must
    pass; the others record how a desk-scale instance compares with an
    asymptotic claim.
    """

    name: str
    lhs: float
    rhs: float
    relation: str = ">="
    asserted: bool = False
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        if self.vacuous:
            return True
        if self.relation == ">=":
            return self.lhs >= self.rhs
        if self.relation == "<":
            return self.lhs < self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs
        if self.relation == "==":
            return self.lhs == self.rhs
        raise ValueError(self.relation)

    @property
    def ratio(self) -> float | None:
        return None if not self.rhs else float(self.lhs) / float(self.rhs)

    def to_record(self) -> dict:
        r = self.ratio
        return {
            "name": self.name,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "ratio": None if r is None else float(f"{r:.6g}"),
            "pass": self.passed,
            "asserted": self.asserted,
            "vacuous": self.vacuous,
        }


def _num(x):
    if isinstance(x, Fraction):
        return float(f"{float(x):.6g}") if x.denominator != 1 else int(x)
    if isinstance(x, float):
        return float(f"{x:.6g}")
    return x


# --- plane selection ----------------------------------------------------------


def _containment_map(members: list[AffineFlat], m: int, method: str) -> dict[AffineFlat, set[AffineFlat]]:
    """m-flat -> members inside it, over every m-flat holding at least one member."""
    out: dict[AffineFlat, set[AffineFlat]] = {}
    if method == "exhaustive":
        if not members:
            return out
        L0 = members[0]
        planes = all_flats(L0.p, L0.n, m)
        mm = incidence_matrix(members, L0.p, L0.n).astype(np.int32)
        inside = (mm @ _plane_matrix(L0.p, L0.n, m).T) == L0.size
        for j in np.flatnonzero(inside.any(axis=0)):
            out[planes[j]] = {members[i] for i in np.flatnonzero(inside[:, j])}
        return out
    if method != "superflats":
        raise ValueError(f"unknown method {method!r}")
    for L in members:
        for R in superflats(L, m):
            out.setdefault(R, set()).add(L)
    return out


def _greedy_grab(members: list[AffineFlat], m: int, thr: int, method: str
                 ) -> list[tuple[AffineFlat, list[AffineFlat]]]:
    """Repeatedly take the m-flat holding the most remaining members while that is >= thr.

    Ties go to the canonically smallest flat. ``thr >= 1`` guarantees that a
    qualifying flat holds a member, so the candidate map is complete.
    """
    contents = _containment_map(members, m, method)
    where: dict[AffineFlat, list[AffineFlat]] = {}
    for R, s in contents.items():
        for L in s:
            where.setdefault(L, []).append(R)
    picks = []
    while contents:
        best = min(contents, key=lambda R: (-len(contents[R]), R))
        if len(contents[best]) < thr:
            break
        taken = sorted(contents[best])
        picks.append((best, taken))
        for L in taken:
            for R in where[L]:
                s = contents.get(R)
                if s is not None:
                    s.discard(L)
                    if not s:
                        del contents[R]
    return picks


@dataclass(frozen=True)
class Decomposition:
    family: FlatFamily
    d: int
    m: int
    planes: tuple[AffineFlat, ...]
    parts: tuple[FlatFamily, ...]
    residue_chain: tuple[tuple[int, FlatFamily], ...]
    Lm: FlatFamily

    @property
    def k(self) -> int:
        return self.family.k

    @property
    def N(self) -> int:
        return len(self.planes)

    def threshold(self, level: int) -> int:
        return richness_threshold(self.k, level, self.family.q)

    def violations(self, method: str = "superflats") -> list[str]:
        """Failed selection properties; an empty list means all hold."""
        out = []
        fam, k, m, q = self.family, self.k, self.m, self.family.q
        seen: set[AffineFlat] = set()
        for R, part in zip(self.planes, self.parts):
            if R.k != m:
                out.append(f"(a) plane {R} has dimension {R.k} != m={m}")
            for L in part:
                if L not in fam:
                    out.append(f"(a) {L} is not a family member")
                if L in seen:
                    out.append(f"(a) {L} appears in two parts")
                seen.add(L)
                if not contains(R, L):
                    out.append(f"(a) {L} not contained in {R}")
            if m > k and len(part) < self.threshold(m):
                out.append(f"(b) part of size {len(part)} < {self.threshold(m)}")
            if m == k and len(part) != 1:
                out.append(f"(c) part of size {len(part)} at m=k")
        if set(self.Lm) != seen:
            out.append("Lm is not the union of the parts")
        if len(self.Lm) * 2 ** (self.d - m + 1) < len(fam):
            out.append(f"(d) |Lm|={len(self.Lm)} < 2^-{self.d - m + 1}|L|, |L|={len(fam)}")
        for mp in range(m + 1, self.d + 1):
            best, S = max_containment(self.Lm, mp, method)
            if best >= self.threshold(mp):
                out.append(f"(e) {mp}-flat {S} holds {best} >= {self.threshold(mp)} members of Lm")
        return out

    def to_record(self) -> dict:
        return {
            "kind": "decomposition",
            "d": self.d,
            "k": self.k,
            "m": self.m,
            "N": self.N,
            "L": len(self.family),
            "Lm": len(self.Lm),
            "part_sizes": [len(P) for P in self.parts],
            "residue": {str(lv): len(F) for lv, F in self.residue_chain},
        }


def plane_select(family: FlatFamily, d: int, method: str = "superflats") -> Decomposition:
    """Greedy selection of m-planes rich in members, for m = d, d-1, ..., k."""
    k = family.k
    if not k <= d <= family.n:
        raise ValueError(f"need k={k} <= d <= n={family.n}, got d={d}")
    if not len(family):
        raise ValueError("plane selection needs a nonempty family")
    q = family.q
    remaining = list(family.members)
    chain = []
    for m in range(d, k, -1):
        picks = _greedy_grab(remaining, m, richness_threshold(k, m, q), method)
        taken = {L for _, part in picks for L in part}
        rest = [L for L in remaining if L not in taken]
        chain.append((m, family.like(rest)))
        if 2 * len(rest) < len(remaining):
            parts = tuple(family.like(part) for _, part in picks)
            return Decomposition(family, d, m, tuple(R for R, _ in picks), parts,
                                 tuple(chain), family.like(taken))
        remaining = rest
    parts = tuple(family.like([L]) for L in remaining)
    return Decomposition(family, d, k, tuple(remaining), parts, tuple(chain), family.like(remaining))


# --- foliation ------------------------------------------------------------------


@dataclass(frozen=True)
class FoliationCheck:
    pairs: int
    violations: int
    example: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class Foliation:
    """Leaves ``S + V_i`` over all (k - q_int)-subspaces V_i of a complement of S."""

    S: AffineFlat
    q_int: int
    k: int
    leaves: tuple[AffineFlat, ...]

    @property
    def leaf_dim(self) -> int:
        return self.S.k + self.k - self.q_int

    def leaves_containing(self, X: AffineFlat) -> list[int]:
        return [i for i, T in enumerate(self.leaves) if contains(T, X)]

    def qualifies(self, P: AffineFlat, L: AffineFlat) -> bool:
        """Whether ``(P, L)`` satisfies the routing hypotheses."""
        if L.k != self.k or P.k != self.k - 1 or not contains(L, P):
            return False
        LS = intersect(L, self.S)
        if LS is EMPTY or LS.k != self.q_int:
            return False
        PS = intersect(P, self.S)
        if self.q_int == 0:
            return PS is EMPTY
        return PS is not EMPTY and PS.k == self.q_int - 1

    def route(self, L: AffineFlat) -> int:
        hits = self.leaves_containing(L)
        if len(hits) != 1:
            raise ValueError(f"{L} lies in {len(hits)} leaves")
        return hits[0]

    def check_pair(self, P: AffineFlat, L: AffineFlat) -> bool:
        """L lies in exactly one leaf and no other leaf contains P."""
        hits = self.leaves_containing(L)
        if len(hits) != 1:
            return False
        return self.leaves_containing(P) == hits

    def verify_exhaustive(self) -> FoliationCheck:
        """Check every qualifying (P, L) pair in the ambient space."""
        S, k, p, n = self.S, self.k, self.S.p, self.S.n
        q = p
        Lmat = _plane_matrix(p, n, k)
        Pmat = _plane_matrix(p, n, k - 1)
        s = np.zeros(p**n, dtype=np.int32)
        s[S.codes] = 1
        T = incidence_matrix(self.leaves, p, n).astype(np.int32)
        LS = Lmat @ s
        PS = Pmat @ s
        L_ok = LS == q**self.q_int
        P_ok = PS == (q ** (self.q_int - 1) if self.q_int > 0 else 0)
        contL = ((Lmat @ T.T) == q**k).sum(axis=1)
        contP = ((Pmat @ T.T) == q ** (k - 1)).sum(axis=1)
        iP, iL = _subflat_pairs(p, n, k)
        sel = L_ok[iL] & P_ok[iP]
        bad = sel & ((contL[iL] != 1) | (contP[iP] != 1))
        nbad = int(bad.sum())
        example = None
        if nbad:
            j = int(np.flatnonzero(bad)[0])
            example = (all_flats(p, n, k - 1)[iP[j]], all_flats(p, n, k)[iL[j]])
        return FoliationCheck(int(sel.sum()), nbad, example)


@functools.lru_cache(maxsize=32)
def _subflat_pairs(p: int, n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (P, L) with P a (k-1)-flat inside the k-flat L."""
    Ls = all_flats(p, n, k)
    index = {P: i for i, P in enumerate(all_flats(p, n, k - 1))}
    iP, iL = [], []
    for j, L in enumerate(Ls):
        for P in subflats(L, k - 1):
            iP.append(index[P])
            iL.append(j)
    return np.array(iP, dtype=np.int64), np.array(iL, dtype=np.int64)


def foliate(S: AffineFlat, q_int: int, k: int) -> Foliation:
    m, n, p = S.k, S.n, S.p
    if not 0 <= q_int <= k - 1:
        raise ValueError(f"need 0 <= q_int <= k-1, got q_int={q_int}, k={k}")
    if m + k - q_int > n:
        raise ValueError(f"leaf dimension {m + k - q_int} exceeds n={n}")
    comp = complement_units(S.pivots, n)
    leaves = []
    for local in _subspace_bases(n - m, k - q_int, p):
        extra = tuple(combine(r, comp, p, n) for r in local)
        leaves.append(canonicalize(S.base, S.dirs + extra, p))
    return Foliation(S, q_int, k, tuple(sorted(leaves)))


# --- popularity refinement ------------------------------------------------------


@dataclass(frozen=True)
class RefinementTrace:
    """Nested (P, L) levels of a popularity refinement.

    ``levels[0]`` is the input; for ``mode == "lines"`` degrees are measured
    in the full line family, for ``mode == "planes"`` in the previous level.
    """

    mode: str
    levels: tuple[tuple[FlatFamily, FlatFamily], ...]
    point_thresholds: tuple[float, ...]
    member_thresholds: tuple[float, ...]
    C: float
    lam: float
    Lm: FlatFamily
    branch: str
    ledger: tuple[LedgerRow, ...]
    window_ok: bool = True

    @property
    def P_sharp(self) -> FlatFamily:
        return self.levels[-1][0]

    @property
    def L_sharp(self) -> FlatFamily:
        return self.levels[-1][1]

    def violations(self) -> list[str]:
        out = []
        for q in range(1, len(self.levels)):
            P_prev, L_prev = self.levels[q - 1]
            P_cur, L_cur = self.levels[q]
            if not set(P_cur) <= set(P_prev):
                out.append(f"P level {q} not nested")
            if not set(L_cur) <= set(L_prev):
                out.append(f"L level {q} not nested")
            basis = self.levels[0][1] if self.mode == "lines" else L_prev
            deg = _degrees(basis, P_prev)
            for X in P_cur:
                if deg[X] < self.point_thresholds[q - 1]:
                    out.append(f"level {q}: {X} has degree {deg[X]} below threshold")
            keep = set(P_cur)
            for L in L_cur:
                rich = sum(1 for X in contained_members(L, P_prev) if X in keep)
                if rich < self.member_thresholds[q - 1]:
                    out.append(f"level {q}: {L} keeps only {rich} members")
        if self.branch == "survival" and self.window_ok:
            for row in self.ledger:
                if row.name.startswith("survival") and not row.passed:
                    out.append(f"survival branch but {row.name} fails")
        return out

    def to_records(self) -> list[dict]:
        head = {
            "kind": "refinement",
            "mode": self.mode,
            "branch": self.branch,
            "C": self.C,
            "lambda": self.lam,
            "Lm": len(self.Lm),
            "levels": [[len(P), len(L)] for P, L in self.levels],
        }
        return [head] + [r.to_record() for r in self.ledger]


def _degrees(lines: FlatFamily, P: FlatFamily) -> Counter:
    deg: Counter = Counter()
    for L in lines:
        deg.update(contained_members(L, P))
    return deg


def _richness(family: FlatFamily, P: FlatFamily, need: float) -> dict[AffineFlat, list[AffineFlat]]:
    inside = {}
    for L in family:
        got = contained_members(L, P)
        if len(got) < need:
            raise HypothesisError(f"{L} contains {len(got)} < {need:g} members of P", L)
        inside[L] = got
    return inside


def _incidence_split(Lm: FlatFamily, inside: dict, keep: set, pool: set, size: int) -> tuple[int, int]:
    """|I| and |I'| when each L keeps its first ``size`` members from ``pool``."""
    I = Ip = 0
    for L in Lm:
        chosen = [X for X in inside[L] if X in pool][:size]
        I += len(chosen)
        Ip += sum(1 for X in chosen if X not in keep)
    return I, Ip


def popularity_refine(L: FlatFamily, P: FlatFamily, C: float = 1.0, lam: float = 1.0,
                      d: int = 1, beta: float = 1.0, Lm: FlatFamily | None = None
                      ) -> RefinementTrace:
    """One round of popular-point / rich-line pruning for a line family."""
    if L.k != 1 or P.k != 0:
        raise ValueError("popularity_refine takes lines and points")
    q = L.q
    inside = _richness(L, P, lam * q)
    if Lm is None:
        Lm = plane_select(L, d).Lm
    thrP = C * q ** (d - 1 - (1 - beta) / 2)
    thrL = lam * q / 4
    deg: Counter = Counter()
    for pts in inside.values():
        deg.update(pts)
    Ps = P.like(X for X in P if deg[X] >= thrP)
    keep = set(Ps)
    Ls = L.like(x for x in L if sum(1 for X in inside[x] if X in keep) >= thrL)
    size = math.ceil(lam * q)
    I, Ip = _incidence_split(Lm, inside, keep, set(P), size)
    eq13 = LedgerRow("size-bound |P| >= lam q |Lm| / (2 thrP)", len(P), lam * q * len(Lm) / (2 * thrP))
    eq14 = LedgerRow("survival |L#| >= |Lm|/8", len(Ls), len(Lm) / 8)
    pivot = LedgerRow("pivot |I'| < |I|/2", Ip, I / 2, relation="<")
    branch = "size-bound" if eq13.passed else "survival"
    return RefinementTrace("lines", ((P, L), (Ps, Ls)), (thrP,), (thrL,), C, lam, Lm, branch,
                           (eq13, eq14, pivot), window_ok=size < 2 * lam * q)


def iterated_popularity(L: FlatFamily, P: FlatFamily, C: float = 1.0, lam: float = 1.0,
                        d: int | None = None, Lm: FlatFamily | None = None) -> RefinementTrace:
    """The k-level ladder of popular (k-1)-flats and rich k-flats."""
    k, q = L.k, L.q
    if P.k != k - 1:
        raise ValueError(f"P must hold {k - 1}-flats, got {P.k}-flats")
    d = k if d is None else d
    inside = _richness(L, P, lam * q**k)
    if Lm is None:
        Lm = plane_select(L, d).Lm
    levels = [(P, Lm)]
    ledger = []
    pthr, lthr = [], []
    window_ok = True
    Pcur, Lcur = P, Lm
    thrP = C * q ** (d - k)
    for lvl in range(1, k + 1):
        pool = set(Pcur)
        deg: Counter = Counter()
        for x in Lcur:
            deg.update(X for X in inside[x] if X in pool)
        Pn = P.like(X for X in Pcur if deg[X] >= thrP)
        keep = set(Pn)
        thrL = 2.0 ** (-2 * lvl) * lam * q**k
        Ln = L.like(x for x in Lcur if sum(1 for X in inside[x] if X in keep) >= thrL)
        low = 2.0 ** (-2 * (lvl - 1)) * lam * q**k
        size = math.ceil(low)
        window_ok = window_ok and size < 2 * low
        I, Ip = _incidence_split(Lcur, inside, keep, pool, size)
        ledger.append(LedgerRow(f"pivot[{lvl - 1}] |I'| < |I|/2", Ip, I / 2, relation="<"))
        ledger.append(LedgerRow(f"survival[{lvl}] |L#,{lvl}| >= 2^-{3 * lvl}|Lm|", len(Ln),
                                2.0 ** (-3 * lvl) * len(Lm)))
        levels.append((Pn, Ln))
        pthr.append(thrP)
        lthr.append(thrL)
        Pcur, Lcur = Pn, Ln
    eq18 = LedgerRow("size-bound |P| >= 2^-5k lam q^k |Lm| / (C q^(d-k))", len(P),
                     2.0 ** (-5 * k) * lam * q**k * len(Lm) / thrP)
    branch = "size-bound" if eq18.passed else "survival"
    return RefinementTrace("planes", tuple(levels), tuple(pthr), tuple(lthr), C, lam, Lm,
                           branch, (eq18, *ledger), window_ok=window_ok)


# --- hairbrush --------------------------------------------------------------------


@dataclass(frozen=True)
class Bucket:
    leaf: AffineFlat
    lines: FlatFamily
    points: int


@dataclass(frozen=True)
class HairbrushTrace:
    case: int
    decomposition: Decomposition
    beta: float
    refinement: RefinementTrace | None = None
    j: int | None = None
    choice_ratio: float | None = None
    L_sharp_Rj: FlatFamily | None = None
    P_sharp_Rj: FlatFamily | None = None
    L_prime: FlatFamily | None = None
    P_prime: int | None = None
    foliation: Foliation | None = None
    buckets: tuple[Bucket, ...] = ()
    ledger: tuple[LedgerRow, ...] = field(default=())

    @property
    def stem(self) -> AffineFlat | None:
        return None if self.j is None else self.decomposition.planes[self.j]

    def violations(self) -> list[str]:
        return [r.name for r in self.ledger if r.asserted and not r.passed]

    def to_records(self) -> list[dict]:
        head = {
            "kind": "hairbrush",
            "case": self.case,
            "m": self.decomposition.m,
            "d": self.decomposition.d,
            "beta": float(f"{self.beta:.6g}"),
            "j": self.j,
            "leaves": len(self.buckets),
            "bucket_sizes": [len(b.lines) for b in self.buckets],
        }
        return [head] + [r.to_record() for r in self.ledger]


def default_beta(size: int, d: int, q: int) -> float:
    """beta with |L| = q^(2(d-1)+beta), clipped to [max(1-d, -1), 1]."""
    b = math.log(size, q) - 2 * (d - 1) if size else -1.0
    return min(1.0, max(max(1 - d, -1), b))


def points_family(family: FlatFamily) -> FlatFamily:
    """The union of a family as a family of 0-flats."""
    p, n = family.p, family.n
    pts = [canonicalize(decode_point(int(c), p, n), [], p) for c in union_codes(family)]
    return FlatFamily(p, n, 0, tuple(pts))


def hairbrush_decompose(L: FlatFamily, d: int, C: float = 1.0, lam: float = 1.0,
                        beta: float | None = None, P: FlatFamily | None = None,
                        method: str = "superflats") -> HairbrushTrace:
    """Run the line-case pipeline: select planes, refine, pick a stem, foliate, bucket."""
    if L.k != 1:
        raise ValueError("hairbrush_decompose takes a line family")
    q = L.q
    dec = plane_select(L, d, method)
    beta = default_beta(len(L), d, q) if beta is None else beta
    if dec.m == d:
        return HairbrushTrace(1, dec, beta)
    m = dec.m
    P = points_family(L) if P is None else P
    ref = popularity_refine(L, P, C, lam, d, beta, Lm=dec.Lm)
    Ls = set(ref.L_sharp)

    Lm = dec.Lm

    def meets_once(R, x):
        X = intersect(x, R)
        return X is not EMPTY and X.k == 0

    scored = []
    for j, (R, part) in enumerate(zip(dec.planes, dec.parts)):
        ratio = sum(1 for x in part if x in Ls) / len(part)
        hairs = sum(1 for x in Lm if meets_once(R, x))
        scored.append((-ratio, -hairs, j))
    _, _, j = min(scored)
    R, part = dec.planes[j], dec.parts[j]
    ratio = sum(1 for x in part if x in Ls) / len(part)
    L_sharp_Rj = L.like(x for x in part if x in Ls)
    P_sharp_Rj = P.like(X for X in ref.P_sharp if R.contains_point(X.base))
    L_prime = L.like(x for x in Lm if meets_once(R, x))
    P_prime_codes = set(int(c) for c in union_codes(P)) - set(int(c) for c in R.codes)

    fol = foliate(R, 0, 1)
    buckets = []
    for T in fol.leaves:
        lines = L.like(x for x in L_prime if contains(T, x))
        pts = len(P_prime_codes & set(int(c) for c in T.codes))
        buckets.append(Bucket(T, lines, pts))

    hair_exp = d - 1 - (1 - beta) / 2
    vac = not len(L_prime)
    hairs_per_point = [sum(1 for x in L_prime if x.contains_point(X.base)) for X in P_sharp_Rj]
    cap = q ** (2 * (m - 1) + 1)
    ledger = [
        LedgerRow("choice |L#_Rj| vs |L_Rj|", len(L_sharp_Rj), len(part)),
        LedgerRow("|P#_Rj| >~ q^m", len(P_sharp_Rj), q**m),
        LedgerRow("min hairs at P#_Rj >= q^(d-1-(1-b)/2)/2",
                  min(hairs_per_point) if hairs_per_point else 0, q**hair_exp / 2,
                  vacuous=not hairs_per_point),
        LedgerRow("|L'_Rj| >~ q^(m+d-1-(1-b)/2)", len(L_prime), q ** (m + hair_exp), vacuous=vac),
    ]
    for i, b in enumerate(buckets):
        ledger.append(LedgerRow(f"leaf[{i}] |L_i| < q^(2(m-1)+1)", len(b.lines), cap,
                                relation="<", asserted=True))
    ledger += [
        LedgerRow("buckets partition L'_Rj", sum(len(b.lines) for b in buckets), len(L_prime),
                  relation="==", asserted=True),
        LedgerRow("|P| >= sum |P_i|", len(P), sum(b.points for b in buckets), asserted=True),
        LedgerRow("sum |P_i| >~ sum |L_i| / q^(m-2)", sum(b.points for b in buckets),
                  sum(len(b.lines) for b in buckets) / q ** (m - 2), vacuous=vac),
        LedgerRow("|P| >~ q^(d+(b+1)/2)", len(P), q ** (d + (beta + 1) / 2), vacuous=vac),
    ]
    return HairbrushTrace(2, dec, beta, ref, j, ratio, L_sharp_Rj, P_sharp_Rj, L_prime,
                          len(P_prime_codes), fol, tuple(buckets), tuple(ledger))


# --- quasi-extremizers ------------------------------------------------------------


@dataclass(frozen=True)
class QuasiExtremizer:
    plane: AffineFlat
    lines: FlatFamily
    density: Fraction


def extract_quasi_extremizers(L: FlatFamily, d: int, method: str = "superflats"
                              ) -> list[QuasiExtremizer]:
    """Greedily take d-planes holding at least q^(2d-3) not-yet-taken lines."""
    if L.k != 1:
        raise ValueError("quasi-extremizer extraction takes a line family")
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    q = L.q
    union = set(int(c) for c in union_codes(L))
    out = []
    for R, lines in _greedy_grab(list(L.members), d, q ** (2 * d - 3), method):
        hit = sum(1 for c in R.codes if int(c) in union)
        out.append(QuasiExtremizer(R, L.like(lines), Fraction(hit, q**d)))
    return out


def captured_fraction(L: FlatFamily, extracted: list[QuasiExtremizer]) -> Fraction:
    """Share of the union of L lying in the extracted planes."""
    union = set(int(c) for c in union_codes(L))
    if not union:
        return Fraction(0)
    inside = set()
    for qe in extracted:
        inside.update(int(c) for c in qe.plane.codes)
    return Fraction(len(union & inside), len(union))
