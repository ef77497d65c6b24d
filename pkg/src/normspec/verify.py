"""Spectral-space checks and the end-to-end pipeline for one group.

The facts checked here are theorems about finite groups.  A failing check
therefore means a bug somewhere in this package, and is raised as
:class:`TheoremViolation` carrying a diagnostic dump instead of being
returned as a result.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .bits import is_subset, to_indices
from .lattice import (
    DEFAULT_LATTICE_CAP,
    DEFAULT_LATTICE_ORDER_CAP,
    enumerate_normal_subgroups,
    has_maximal_normal_subgroup,
    join_family,
    maximal_normal_subgroups,
    proper_points,
    subgroup_label,
)
from .topology import (
    DEFAULT_EXHAUSTIVE_POINT_CAP,
    EXHAUSTIVE,
    CompactnessResult,
    NotOpen,
    closure,
    coarse_lower_topology,
    expand_mask,
    is_open,
    is_quasi_compact_alexander,
    is_sober,
    is_t0,
    open_transfer_check,
    qc_open_basis,
    quasi_compact_open_sets,
    subspace,
    v_set,
)

EXHAUSTIVE_FAMILY_LIMIT = 12
DEFAULT_TRIALS = 1000
WITNESS_KEEP = 16


class TheoremViolation(AssertionError):
    """A proved statement failed on a concrete instance."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class AmbientNotSpectral(ValueError):
    pass


@dataclass
class VerifyConfig:
    order_cap: int = DEFAULT_LATTICE_ORDER_CAP
    lattice_cap: int = DEFAULT_LATTICE_CAP
    exhaustive_point_cap: int = DEFAULT_EXHAUSTIVE_POINT_CAP
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    exhaustive_family_limit: int = EXHAUSTIVE_FAMILY_LIMIT

    def caps(self):
        return {
            "order_cap": self.order_cap,
            "lattice_cap": self.lattice_cap,
            "exhaustive_point_cap": self.exhaustive_point_cap,
        }


@dataclass
class SpectralReport:
    space_id: str
    point_count: int
    mode: str
    quasi_compact: CompactnessResult
    sober: object
    t0: object
    qc_open_basis: object
    verdict: bool
    empty: bool = False

    @property
    def flags(self):
        return ["empty: conditions hold vacuously"] if self.empty else []


def check_spectral(space, space_id="", seed=0):
    """Quasi-compactness, sobriety, T0, and the quasi-compact open basis condition."""
    qc = is_quasi_compact_alexander(space, seed=seed)
    sober = is_sober(space)
    t0 = is_t0(space)
    basis = qc_open_basis(space, seed=seed)
    if sober.holds != t0.holds:
        raise TheoremViolation(
            "sobriety and T0 disagree on a finite space",
            space_id=space_id, sober=sober, t0=t0,
        )
    verdict = qc.holds and sober.holds and basis.holds
    return SpectralReport(space_id, space.point_count, space.mode, qc, sober, t0, basis,
                          verdict, empty=space.point_count == 0)


@dataclass
class LemmaReport:
    ambient_spectral: bool
    open: bool
    quasi_compact: bool
    sober: bool
    subspace_report: SpectralReport
    open_transfer: bool
    qc_open_transfer: bool | None

    @property
    def premises(self):
        return self.ambient_spectral and self.open and self.quasi_compact and self.sober

    @property
    def implication_holds(self):
        return (not self.premises) or self.subspace_report.verdict

    @property
    def valid(self):
        return self.implication_holds and self.open_transfer and self.qc_open_transfer is not False


def verify_lemma_open_subspace(space, open_subset, seed=0, ambient_report=None):
    """An open, quasi-compact, sober subspace of a spectral space is spectral.

    The subspace's premises and its full spectral check are computed
    independently.  Also checks that opens, and quasi-compact opens, of the
    subspace are exactly the ambient ones lying inside ``open_subset``.
    """
    ambient = ambient_report or check_spectral(space, seed=seed)
    if not ambient.verdict:
        raise AmbientNotSpectral("ambient space is not spectral")
    if not is_open(space, open_subset):
        raise NotOpen("subset is not open in the ambient space")
    sub = subspace(space, open_subset)
    qc = is_quasi_compact_alexander(sub, seed=seed).holds
    sober = is_sober(sub).holds
    sub_report = check_spectral(sub, seed=seed)
    transfer = open_transfer_check(space, open_subset, seed=seed)
    qc_transfer = None
    if space.mode == EXHAUSTIVE:
        positions = to_indices(open_subset)
        inside = sorted(
            expand_mask(t, positions) for t in quasi_compact_open_sets(sub)
        )
        ambient_qc = sorted(u for u in quasi_compact_open_sets(space) if is_subset(u, open_subset))
        qc_transfer = inside == ambient_qc
    return LemmaReport(True, True, qc, sober, sub_report, transfer, qc_transfer)


@dataclass
class ClosureIdentityResult:
    holds: bool
    points: list = field(default_factory=list)


def verify_closure_identity(g, lattice=None, space=None, proper_space=None):
    """``closure({N}) == v_set(N)`` in the full space, and restricted to the proper part."""
    lat = lattice or enumerate_normal_subgroups(g)
    x = space or coarse_lower_topology(lat)
    plus = proper_points(lat).indices
    p = proper_space or subspace(x, plus)
    rows = []
    ok = True
    for n in range(len(lat)):
        v = v_set(lat, n).members
        c = closure(x, 1 << n).members
        row = {"point": n, "closure": c, "v_set": v, "full_space": c == v}
        if plus >> n & 1:
            # proper points keep their indices in the subspace
            cp = closure(p, 1 << n).members
            row["proper_closure"] = cp
            row["proper_space"] = cp == v & plus
        ok = ok and row["full_space"] and row.get("proper_space", True)
        rows.append(row)
    return ClosureIdentityResult(ok, rows)


def _families(indices, limit_exhaustive, trials, rng):
    k = len(indices)
    if k <= limit_exhaustive:
        for f in range(1 << k):
            yield [indices[i] for i in range(k) if f >> i & 1]
    else:
        for _ in range(trials):
            size = rng.randint(0, k)
            yield sorted(rng.sample(indices, size))


@dataclass
class FamilyCheckResult:
    holds: bool
    method: str
    families_checked: int
    empty_instances: int = 0
    witnesses: list = field(default_factory=list)
    failure: dict | None = None
    seed: int = 0


def verify_intersection_identity(g, trials=DEFAULT_TRIALS, seed=0, lattice=None,
                                 exhaustive_limit=EXHAUSTIVE_FAMILY_LIMIT):
    """Intersection of ``v_set(N)`` over a family equals ``v_set`` of the family's join."""
    lat = lattice or enumerate_normal_subgroups(g)
    n = len(lat)
    exhaustive = n <= exhaustive_limit
    rng = random.Random(seed)
    checked = 0
    for fam in _families(list(range(n)), exhaustive_limit, trials, rng):
        checked += 1
        inter = lat.full
        for s in fam:
            inter &= lat.up_mask(s)
        j = join_family(lat, fam)
        if inter != lat.up_mask(j):
            return FamilyCheckResult(False, "exhaustive" if exhaustive else "sampled", checked,
                                     failure={"family": fam, "intersection": inter, "join": j},
                                     seed=seed)
    return FamilyCheckResult(True, "exhaustive" if exhaustive else "sampled", checked, seed=seed)


def _minimal_empty_subfamily(lat, fam, plus):
    keep = list(fam)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        inter = plus
        for s in trial:
            inter &= lat.up_mask(s)
        if inter == 0:
            keep = trial
        else:
            i += 1
    return keep


def verify_join_compactness(g, trials=DEFAULT_TRIALS, seed=0, lattice=None,
                            exhaustive_limit=EXHAUSTIVE_FAMILY_LIMIT):
    """For families of proper normal subgroups: the restricted ``v_set``s have
    empty intersection exactly when the family joins to the whole group.

    Each empty instance yields a minimal subfamily, checked to join to the top
    and to have at most ``len(lattice)`` members.
    """
    lat = lattice or enumerate_normal_subgroups(g)
    plus = proper_points(lat).indices
    exhaustive = len(lat) <= exhaustive_limit
    method = "exhaustive" if exhaustive else "sampled"
    rng = random.Random(seed)
    checked = empties = 0
    witnesses = []
    for fam in _families(to_indices(plus), exhaustive_limit, trials, rng):
        checked += 1
        inter = plus
        for s in fam:
            inter &= lat.up_mask(s)
        j = join_family(lat, fam)
        if (inter == 0) != (j == lat.top_index):
            return FamilyCheckResult(False, method, checked, empties, witnesses,
                                     {"family": fam, "intersection": inter, "join": j}, seed)
        if inter == 0:
            empties += 1
            wit = _minimal_empty_subfamily(lat, fam, plus)
            if join_family(lat, wit) != lat.top_index or len(wit) > len(lat):
                return FamilyCheckResult(False, method, checked, empties, witnesses,
                                         {"family": fam, "witness": wit}, seed)
            if len(witnesses) < WITNESS_KEEP:
                witnesses.append({"family": fam, "witness": wit})
    return FamilyCheckResult(True, method, checked, empties, witnesses, seed=seed)


@dataclass
class TheoremReport:
    group_id: str
    order: int
    lattice: object
    hypothesis_holds: bool
    maximal_normal_subgroups: list
    n_space_report: SpectralReport
    n_plus_open: bool
    n_plus_report: SpectralReport
    lemma: LemmaReport
    closure_identity: ClosureIdentityResult
    intersection_identity: FamilyCheckResult
    join_compactness: FamilyCheckResult
    seed: int
    caps: dict
    timings_ms: dict

    @property
    def status(self):
        return "verified" if self.hypothesis_holds else "hypothesis_failed"

    @property
    def lemma_chain_valid(self):
        return self.lemma.valid

    @property
    def closure_identity_holds(self):
        return self.closure_identity.holds

    @property
    def join_compactness_holds(self):
        return self.join_compactness.holds


def verify_theorem_main(g, group_id="", config=None):
    """Run the whole pipeline on ``g`` and return a :class:`TheoremReport`.

    Raises :class:`TheoremViolation` if any proved statement fails.  The
    trivial group is reported with ``hypothesis_holds=False``.
    """
    cfg = config or VerifyConfig()
    timings = {}
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = round((now - clock) * 1000, 3)
        clock = now

    lat = enumerate_normal_subgroups(g, order_cap=cfg.order_cap, lattice_cap=cfg.lattice_cap)
    lap("enumerate")
    labels = [subgroup_label(g, p.members) for p in lat.points]
    x = coarse_lower_topology(lat, exhaustive_point_cap=cfg.exhaustive_point_cap,
                              point_labels=labels)
    n_report = check_spectral(x, f"{group_id}:N", seed=cfg.seed)
    lap("n_space")
    plus = proper_points(lat).indices
    plus_open = is_open(x, plus)
    p = subspace(x, plus)
    plus_report = check_spectral(p, f"{group_id}:N+", seed=cfg.seed)
    lap("n_plus_space")
    hypothesis = has_maximal_normal_subgroup(lat)
    lemma = verify_lemma_open_subspace(x, plus, seed=cfg.seed, ambient_report=n_report) \
        if n_report.verdict and plus_open else None
    lap("lemma")
    closure_id = verify_closure_identity(g, lat, x, p)
    inter_id = verify_intersection_identity(g, cfg.trials, cfg.seed, lat, cfg.exhaustive_family_limit)
    join_c = verify_join_compactness(g, cfg.trials, cfg.seed, lat, cfg.exhaustive_family_limit)
    lap("identities")

    dump = {"group_id": group_id, "order": g.order, "points": lat.masks()}
    if not n_report.verdict:
        raise TheoremViolation("space of all normal subgroups is not spectral", report=n_report, **dump)
    if not plus_open:
        raise TheoremViolation("proper normal subgroups are not open", **dump)
    if g.order > 1 and not hypothesis:
        raise TheoremViolation("nontrivial finite group without a maximal normal subgroup", **dump)
    if hypothesis and not plus_report.verdict:
        raise TheoremViolation("proper normal subgroups do not form a spectral space",
                               report=plus_report, **dump)
    if not lemma.valid:
        raise TheoremViolation("open subspace check failed", lemma=lemma, **dump)
    if not closure_id.holds:
        raise TheoremViolation("closure of a point differs from its v_set",
                               rows=closure_id.points, **dump)
    if not inter_id.holds:
        raise TheoremViolation("intersection identity failed", failure=inter_id.failure, **dump)
    if not join_c.holds:
        raise TheoremViolation("join/compactness equivalence failed", failure=join_c.failure, **dump)

    return TheoremReport(
        group_id=group_id,
        order=g.order,
        lattice=lat,
        hypothesis_holds=hypothesis,
        maximal_normal_subgroups=maximal_normal_subgroups(lat),
        n_space_report=n_report,
        n_plus_open=plus_open,
        n_plus_report=plus_report,
        lemma=lemma,
        closure_identity=closure_id,
        intersection_identity=inter_id,
        join_compactness=join_c,
        seed=cfg.seed,
        caps=cfg.caps(),
        timings_ms=timings,
    )
