"""Families of flats: unions, containment maxima, axiom checks and incidence counting."""
from __future__ import annotations

import functools
import json
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .flats import (
    AffineFlat,
    GuardError,
    _check_guard,
    all_flats,
    canonicalize,
    contains,
    count_flats,
    join,
    subflats,
    superflats,
)
from .gf_linear import as_field

MATRIX_POINT_LIMIT = 1 << 20


class HypothesisError(ValueError):
    """An input violates a counting hypothesis; ``witness`` names the offender."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class FlatFamily:
    """A deduplicated, canonically sorted set of k-flats sharing one ambient space."""

    p: int
    n: int
    k: int
    members: tuple[AffineFlat, ...] = ()

    def __post_init__(self) -> None:
        as_field(self.p)
        uniq = sorted(set(self.members))
        for L in uniq:
            if (L.p, L.n, L.k) != (self.p, self.n, self.k):
                raise ValueError(
                    f"member {L} does not live in F_{self.p}^{self.n} with dimension {self.k}"
                )
        object.__setattr__(self, "members", tuple(uniq))

    @classmethod
    def of(cls, flats: Iterable[AffineFlat], p: int | None = None, n: int | None = None,
           k: int | None = None) -> FlatFamily:
        flats = list(flats)
        if flats:
            p = flats[0].p if p is None else p
            n = flats[0].n if n is None else n
            k = flats[0].k if k is None else k
        if p is None or n is None or k is None:
            raise ValueError("an empty family needs explicit p, n, k")
        return cls(p, n, k, tuple(flats))

    def like(self, flats: Iterable[AffineFlat]) -> FlatFamily:
        """A family over the same ambient and dimension."""
        return FlatFamily(self.p, self.n, self.k, tuple(flats))

    @property
    def q(self) -> int:
        return self.p

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[AffineFlat]:
        return iter(self.members)

    @functools.cached_property
    def _index(self) -> dict[AffineFlat, int]:
        return {L: i for i, L in enumerate(self.members)}

    def __contains__(self, L: object) -> bool:
        return L in self._index

    def index(self, L: AffineFlat) -> int:
        return self._index[L]

    @functools.cached_property
    def point_matrix(self) -> np.ndarray:
        return incidence_matrix(self.members, self.p, self.n)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "flats": [{"base": list(L.base), "dirs": [list(r) for r in L.dirs]} for L in self.members],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> FlatFamily:
        p, n, k = int(obj["p"]), int(obj["n"]), int(obj["k"])
        flats = []
        for rec in obj.get("flats", []):
            L = canonicalize(rec["base"], rec.get("dirs", []), p)
            if L.n != n or L.k != k:
                raise ValueError(f"flat {rec} does not span a {k}-flat of F_{p}^{n}")
            flats.append(L)
        return cls(p, n, k, tuple(flats))


def load_family(path: str | Path) -> FlatFamily:
    with open(path, encoding="utf-8") as fh:
        return FlatFamily.from_dict(json.load(fh))


def dump_family(family: FlatFamily) -> str:
    return json.dumps(family.to_dict(), separators=(",", ":"))


def save_family(family: FlatFamily, path: str | Path) -> None:
    Path(path).write_text(dump_family(family) + "\n", encoding="utf-8")


def incidence_matrix(flats: Iterable[AffineFlat], p: int, n: int) -> np.ndarray:
    """Boolean (flat x point) matrix, points indexed by their integer code."""
    npts = p**n
    if npts > MATRIX_POINT_LIMIT:
        raise GuardError(f"F_{p}^{n} has {npts} points; too many for a dense incidence matrix")
    flats = list(flats)
    out = np.zeros((len(flats), npts), dtype=bool)
    for i, L in enumerate(flats):
        out[i, L.codes] = True
    return out


@functools.lru_cache(maxsize=32)
def _plane_matrix(p: int, n: int, dim: int) -> np.ndarray:
    out = incidence_matrix(all_flats(p, n, dim), p, n).astype(np.int32)
    out.setflags(write=False)
    return out


# --- unions ----------------------------------------------------------------


def union_codes(family: FlatFamily) -> np.ndarray:
    if not len(family):
        return np.zeros(0, dtype=np.int64)
    _check_guard(len(family) * family.q**family.k, "union_points")
    return np.unique(np.concatenate([L.codes for L in family]))


def union_points(family: FlatFamily) -> int:
    return int(union_codes(family).size)


def union_subflats(family: FlatFamily, kprime: int) -> int:
    """Number of distinct k'-flats lying in some member."""
    if not 0 <= kprime < family.k:
        raise ValueError(f"need 0 <= k' < k={family.k}, got {kprime}")
    if kprime == 0:
        return union_points(family)
    seen: set[AffineFlat] = set()
    for L in family:
        seen.update(subflats(L, kprime))
    return len(seen)


def degree(P: AffineFlat, family: FlatFamily) -> int:
    """Number of members containing ``P``."""
    if (P.p, P.n) != (family.p, family.n) or P.k >= family.k:
        raise ValueError(f"cannot count {P.k}-flat incidences in a family of {family.k}-flats")
    return sum(1 for L in family if contains(L, P))


# --- containment maxima and axioms -------------------------------------------


def max_containment(family: FlatFamily, dim: int, method: str = "superflats"
                    ) -> tuple[int, AffineFlat | None]:
    """Exact ``max_R |{L in family : L ⊂ R}|`` over all ``dim``-flats R, with a witness.

    ``method`` picks the candidate set: ``"superflats"`` tallies the dim-flats
    through each member, ``"joins"`` closes the family under joins of
    dimension at most ``dim``, ``"exhaustive"`` scans every dim-flat.
    Ties on the witness go to the canonically smallest plane.
    """
    if not family.k <= dim <= family.n:
        raise ValueError(f"need k={family.k} <= dim <= n={family.n}, got {dim}")
    if not len(family):
        return 0, None
    if method == "superflats":
        tally: Counter[AffineFlat] = Counter()
        for L in family:
            tally.update(superflats(L, dim))
        best = max(tally.values())
        return best, min(R for R, c in tally.items() if c == best)
    if method == "joins":
        return _max_by_joins(family, dim)
    if method == "exhaustive":
        planes = all_flats(family.p, family.n, dim)
        shared = family.point_matrix.astype(np.int32) @ _plane_matrix(family.p, family.n, dim).T
        counts = (shared == family.q**family.k).sum(axis=0)
        i = int(np.argmax(counts))
        return int(counts[i]), planes[i]
    raise ValueError(f"unknown method {method!r}")


def _max_by_joins(family: FlatFamily, dim: int) -> tuple[int, AffineFlat]:
    members = family.members
    seen = set(members)
    frontier = list(members)
    while frontier:
        nxt = []
        for F in frontier:
            if F.k >= dim:
                continue
            for L in members:
                if contains(F, L):
                    continue
                J = join(F, L)
                if J.k <= dim and J not in seen:
                    seen.add(J)
                    nxt.append(J)
        frontier = nxt
    best, cands = 0, []
    for F in seen:
        c = sum(1 for L in members if contains(F, L))
        if c > best:
            best, cands = c, [F]
        elif c == best:
            cands.append(F)
    witness = min(F if F.k == dim else next(superflats(F, dim)) for F in cands)
    return best, witness


@dataclass(frozen=True)
class AxiomReport:
    kind: str
    threshold: int
    max_count: int
    worst_witness: AffineFlat | None
    passed: bool

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "pass": self.passed,
            "max_count": self.max_count,
            "threshold": self.threshold,
            "witness": None if self.worst_witness is None else self.worst_witness.to_dict(),
        }


def _require_lines(family: FlatFamily) -> None:
    if family.k != 1:
        raise ValueError(f"axiom checks apply to line families, got k={family.k}")


def check_wolff(family: FlatFamily, method: str = "joins") -> AxiomReport:
    """Wolff axiom: every 2-plane holds fewer than q members."""
    _require_lines(family)
    thr = family.q
    if family.n < 2:
        return AxiomReport("wolff-2plane", thr, 0, None, True)
    best, R = max_containment(family, 2, method)
    return AxiomReport("wolff-2plane", thr, best, R, best < thr)


def check_dplane_wolff(family: FlatFamily, d: int, method: str = "superflats") -> AxiomReport:
    """d-plane Wolff axiom: every d-plane holds fewer than q^(2d-3) members."""
    _require_lines(family)
    if d < 2:
        raise ValueError(f"the d-plane axiom needs d >= 2, got {d}")
    if d > family.n:
        raise ValueError(f"d={d} exceeds the ambient dimension {family.n}")
    thr = family.q ** (2 * d - 3)
    best, R = max_containment(family, d, method)
    return AxiomReport(f"wolff-dplane({d})", thr, best, R, best < thr)


def is_direction_separated(family: FlatFamily) -> bool:
    """True iff no two member lines are parallel."""
    _require_lines(family)
    dirs = [L.dirs for L in family]
    return len(dirs) == len(set(dirs))


# --- Cauchy-Schwarz incidence count -----------------------------------------


@dataclass(frozen=True)
class CSReport:
    n_planes: int
    n_subflats: int
    M: int
    U: int
    lower_bound: Fraction
    pairwise_term: int
    upper_bound: int
    condition_met: bool
    kappa: Fraction
    selected: tuple[int, ...] = field(repr=False, default=())

    @property
    def holds(self) -> bool:
        return self.U >= self.lower_bound

    def to_record(self) -> dict:
        return {
            "kind": "cauchy-schwarz",
            "L": self.n_planes,
            "P": self.n_subflats,
            "M": self.M,
            "U": self.U,
            "lower_bound": str(self.lower_bound),
            "pairwise_term": self.pairwise_term,
            "upper_bound": self.upper_bound,
            "condition_met": self.condition_met,
            "kappa": str(self.kappa),
            "pass": self.holds and self.U <= self.upper_bound,
        }


def contained_members(L: AffineFlat, P: FlatFamily) -> list[AffineFlat]:
    """Members of ``P`` inside ``L``, in canonical order."""
    return [X for X in subflats(L, P.k) if X in P]


def verify_cauchy_schwarz(L: FlatFamily, P: FlatFamily, M: int) -> CSReport:
    """Count ``U = {(P, L, L') : P ∈ P_L ∩ P_L'}`` and compare with ``M²|L|²/|P|``.

    ``P_L`` is the first ``min(|P ∩ L|, 2M)`` members of P inside L in
    canonical order. Raises :class:`HypothesisError` if some member of L
    contains fewer than M members of P.
    """
    if (L.p, L.n) != (P.p, P.n):
        raise ValueError("families live in different ambient spaces")
    m, k = L.k, P.k + 1
    if k > m:
        raise ValueError(f"(k-1)-flats of dimension {P.k} cannot lie in {m}-flats")
    if M < 1:
        raise ValueError("M must be positive")
    q = L.q
    deg: Counter[AffineFlat] = Counter()
    sel_sizes = []
    for R in L:
        inside = contained_members(R, P)
        if len(inside) < M:
            raise HypothesisError(f"{R} contains only {len(inside)} < M={M} members of P", R)
        chosen = inside[: 2 * M]
        sel_sizes.append(len(chosen))
        deg.update(chosen)
    U = sum(c * c for c in deg.values())
    nL, nP = len(L), len(P)
    lower = Fraction(M * M * nL * nL, nP) if nP else Fraction(0)
    # two distinct m-flats meet in at most an (m-1)-flat
    pair_cap = count_flats(m - 1, k - 1, q) if k <= m else 0
    upper = (nL * nL - nL) * pair_cap + sum(sel_sizes)
    return CSReport(
        n_planes=nL,
        n_subflats=nP,
        M=M,
        U=U,
        lower_bound=lower,
        pairwise_term=nL * nL * q ** (k * (m - k)),
        upper_bound=upper,
        condition_met=nL * q ** (k * (m - k)) <= M,
        kappa=Fraction(nL * M, nP) if nP else Fraction(0),
        selected=tuple(sel_sizes),
    )

