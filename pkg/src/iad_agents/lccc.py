"""LCCC agent: threat assessment and interceptor allocation.

Clusters arrive already formed (position, mission type, member aircraft).
Package size is a fuzzy label over the aircraft count. Each cluster is
ranked with::

    rank = clamp(floor(d1 / 100 + size_value / 2 + mission_value / 2), 0, 9)

where ``d1`` is the distance to the nearest VAVP point, and clusters are
served in order of descending precedence ``9 - rank``. Interceptors are then
handed out greedily: cluster by cluster, aircraft by aircraft (scenario
ranking), nearest available interceptor first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import EmptyVavpSet
from .eventlog import LogRecord
from .kernel import AgentState, Belief, Event, Execution, MAX_RANK, PlanSpec, clamp_rank

Point = tuple[float, float]

SIZES = ("Small", "Medium", "Big")
MISSIONS = ("Strike", "Escort")


# -- fuzzy package size ---------------------------------------------------

@dataclass(frozen=True)
class Trapezoid:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not self.a <= self.b <= self.c <= self.d:
            raise ValueError(f"trapezoid needs a <= b <= c <= d, got {self}")

    def __call__(self, x: float) -> float:
        if self.b <= x <= self.c:
            return 1.0
        if self.a < x < self.b:
            return (x - self.a) / (self.b - self.a)
        if self.c < x < self.d:
            return (self.d - x) / (self.d - self.c)
        return 0.0


@dataclass(frozen=True)
class PackageTrapezoids:
    small: Trapezoid = Trapezoid(0, 0, 3, 5)
    medium: Trapezoid = Trapezoid(3, 5, 8, 10)
    big: Trapezoid = Trapezoid(8, 10, math.inf, math.inf)

    def __post_init__(self):
        shapes = (self.small, self.medium, self.big)
        if not any(t.c == math.inf for t in shapes):
            raise ValueError("one package label must stay at full membership for large counts")
        finite = [v for t in shapes for v in (t.a, t.b, t.c, t.d) if v != math.inf]
        for count in range(1, math.ceil(max(finite)) + 2):
            if max(t(count) for t in shapes) == 0.0:
                raise ValueError(f"no package label covers aircraft count {count}")

    def memberships(self, count: int) -> dict[str, float]:
        return {"Small": self.small(count), "Medium": self.medium(count), "Big": self.big(count)}


def package_label(count: int, traps: PackageTrapezoids = PackageTrapezoids()) -> str:
    """Label with the highest membership; ties go to the larger package."""
    if count < 1:
        raise ValueError("aircraft count must be positive")
    mu = traps.memberships(count)
    best = max(mu.values())
    return [s for s in SIZES if mu[s] == best][-1]


# -- ranking --------------------------------------------------------------

@dataclass(frozen=True)
class RankValues:
    """Per-label weights; swap them to invert the threat polarity."""

    size: Mapping[str, float] = field(default_factory=lambda: {"Small": 1, "Medium": 1, "Big": 2})
    mission: Mapping[str, float] = field(default_factory=lambda: {"Strike": 2, "Escort": 1})


@dataclass(frozen=True)
class RankBreakdown:
    distance: float
    pkg_contrib: float
    msn_contrib: float
    rank: int

    @property
    def precedence(self) -> int:
        return MAX_RANK - self.rank


def plan_rank(distance: float, pkg: str, msn: str, values: RankValues = RankValues()) -> RankBreakdown:
    if distance < 0:
        raise ValueError("distance must be non-negative")
    pkg_contrib = values.size[pkg] / 2
    msn_contrib = values.mission[msn] / 2
    rank = clamp_rank(math.floor(distance / 100.0 + pkg_contrib + msn_contrib))
    return RankBreakdown(distance, pkg_contrib, msn_contrib, rank)


# -- domain records -------------------------------------------------------

@dataclass(frozen=True)
class Aircraft:
    aircraft_id: str
    ranking: int


@dataclass(frozen=True)
class Cluster:
    cluster_id: str
    location: Point
    mission: str
    members: tuple[Aircraft, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"cluster {self.cluster_id} has no aircraft")
        if self.mission not in MISSIONS:
            raise ValueError(f"unknown mission type {self.mission!r}")

    @property
    def aircraft_count(self) -> int:
        return len(self.members)

    def attack_order(self) -> list[Aircraft]:
        return sorted(self.members, key=lambda a: (a.ranking, a.aircraft_id))


@dataclass(frozen=True)
class VavpPoint:
    vavp_id: str
    location: Point
    value: float = 1.0

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("VAVP value must be positive")


@dataclass(frozen=True)
class Interceptor:
    interceptor_id: str
    location: Point
    available: bool = True


@dataclass(frozen=True)
class Assignment:
    target_id: str
    interceptor_id: str
    cluster_id: str
    tick: int


@dataclass(frozen=True)
class ThreatInstance:
    """One (cluster, size label, mission type) candidate of the ranking plan."""

    cluster_id: str
    size: str
    mission: str
    vavp_id: str
    membership: float
    breakdown: RankBreakdown


@dataclass(frozen=True)
class PriorityEntry:
    cluster: Cluster
    vavp_id: str
    size: str
    breakdown: RankBreakdown

    @property
    def cluster_id(self) -> str:
        return self.cluster.cluster_id

    @property
    def precedence(self) -> int:
        return self.breakdown.precedence


@dataclass
class AllocationResult:
    assignments: list[Assignment] = field(default_factory=list)
    unassigned: list[str] = field(default_factory=list)


def nearest_vavp(location: Point, vavps: Sequence[VavpPoint]) -> tuple[float, str]:
    if not vavps:
        raise EmptyVavpSet("cluster prioritization needs at least one VAVP point")
    return min((math.dist(location, v.location), v.vavp_id) for v in vavps)


def enumerate_threat_instances(
    clusters: Iterable[Cluster],
    vavps: Sequence[VavpPoint],
    traps: PackageTrapezoids = PackageTrapezoids(),
    values: RankValues = RankValues(),
) -> list[ThreatInstance]:
    """The full candidate space: every size label and mission for every cluster."""
    out = []
    for cluster in sorted(clusters, key=lambda c: c.cluster_id):
        d1, vavp_id = nearest_vavp(cluster.location, vavps)
        mu = traps.memberships(cluster.aircraft_count)
        for size in SIZES:
            for mission in MISSIONS:
                membership = mu[size] if mission == cluster.mission else 0.0
                out.append(ThreatInstance(
                    cluster.cluster_id, size, mission, vavp_id, membership,
                    plan_rank(d1, size, mission, values),
                ))
    return out


def prioritize_clusters(
    clusters: Sequence[Cluster],
    vavps: Sequence[VavpPoint],
    traps: PackageTrapezoids = PackageTrapezoids(),
    values: RankValues = RankValues(),
) -> list[PriorityEntry]:
    if not vavps:
        raise EmptyVavpSet("cluster prioritization needs at least one VAVP point")
    entries = []
    for cluster in clusters:
        d1, vavp_id = nearest_vavp(cluster.location, vavps)
        size = package_label(cluster.aircraft_count, traps)
        entries.append(PriorityEntry(cluster, vavp_id, size, plan_rank(d1, size, cluster.mission, values)))
    entries.sort(key=lambda e: (-e.precedence, e.cluster_id))
    return entries


def _nearest_interceptor(location: Point, pool: Iterable[Interceptor]) -> Interceptor | None:
    best = None
    for icp in pool:
        key = (math.dist(location, icp.location), icp.interceptor_id)
        if best is None or key < best[0]:
            best = (key, icp)
    return best[1] if best else None


def allocate_interceptors(
    priority: Sequence[PriorityEntry],
    interceptors: Sequence[Interceptor],
    tick: int = 0,
) -> AllocationResult:
    """Greedy target-interceptor pairing in priority order."""
    pool = {i.interceptor_id: i for i in interceptors if i.available}
    result = AllocationResult()
    seen = set()
    for entry in priority:
        for aircraft in entry.cluster.attack_order():
            if aircraft.aircraft_id in seen:
                continue
            seen.add(aircraft.aircraft_id)
            pick = _nearest_interceptor(entry.cluster.location, pool.values())
            if pick is None:
                result.unassigned.append(aircraft.aircraft_id)
                continue
            del pool[pick.interceptor_id]
            result.assignments.append(
                Assignment(aircraft.aircraft_id, pick.interceptor_id, entry.cluster_id, tick)
            )
    return result


# -- the agent ------------------------------------------------------------

@dataclass
class LcccStep:
    tick: int
    priority: list[PriorityEntry] = field(default_factory=list)
    assignments: list[Assignment] = field(default_factory=list)
    unassigned: list[str] = field(default_factory=list)
    instances: int = 0
    events: list[Event] = field(default_factory=list)
    records: list[LogRecord] = field(default_factory=list)


class LcccAgent:
    """Kernel-driven LCCC agent.

    Beliefsets (numbered as in the agent design):

    1. ``cluster_vavp``: (cluster, size, mission) -> (vavp, d1, membership)
    2. ``cluster_interceptor``: (cluster, interceptor) -> (d2,)
    3. ``aircraft_ranking``: (cluster, aircraft) -> (ranking,)
    4. ``aircraft_status``: (aircraft,) -> (engaged,)
    5. ``interceptor_status``: (interceptor,) -> (available,)

    plus ``cluster_assessment`` (the fuzzy label actually assigned to each
    cluster) and ``cluster_order`` (clusters already served this tick).
    Availability and engagement persist across ticks.
    """

    def __init__(
        self,
        agent_id: str = "lccc",
        traps: PackageTrapezoids = PackageTrapezoids(),
        values: RankValues = RankValues(),
    ):
        self.traps = traps
        self.values = values
        rank = lambda ev, b: plan_rank(b["d1"], b["size"], b["mission"], values).rank  # noqa: E731
        plans = [
            PlanSpec("NewClusterPlan", "ev1", (self._serve_cluster,),
                     context=self._cluster_context, rank=rank),
            PlanSpec("NextClusterPlan", "cluster_done", (self._serve_cluster,),
                     context=self._cluster_context, rank=rank),
            PlanSpec("AllocatePlan", "ev2", (self._allocate,)),
        ]
        self.state = AgentState(agent_id, plans, outbound=("ev3",))
        s = self.state
        s.declare_beliefset("cluster_vavp", ("cluster", "size", "mission"), ("vavp", "d1", "membership"))
        s.declare_beliefset("cluster_interceptor", ("cluster", "interceptor"), ("d2",))
        s.declare_beliefset("aircraft_ranking", ("cluster", "aircraft"), ("ranking",))
        s.declare_beliefset("aircraft_status", ("aircraft",), ("engaged",))
        s.declare_beliefset("interceptor_status", ("interceptor",), ("available",))
        s.declare_beliefset("cluster_assessment", ("cluster",), ("size", "mission"))
        s.declare_beliefset("cluster_order", ("cluster",), ("position",))
        s.declare_event("ev1", ("clusters",))
        s.declare_event("ev2", ("cluster", "precedence"))
        s.declare_event("ev3", ("target", "interceptor", "cluster"))
        s.declare_event("cluster_done", ("cluster",))
        self._clusters: dict[str, Cluster] = {}
        self._step: LcccStep | None = None

    @property
    def agent_id(self) -> str:
        return self.state.agent_id

    # plan context: current-tick candidates that match the cluster's assessed
    # labels and have not been served yet, in cluster id order
    def _cluster_context(self, state: AgentState, event: Event):
        tick = event.tick
        bs1 = state.beliefsets["cluster_vavp"]
        assessed = state.beliefsets["cluster_assessment"]
        served = {b.key[0] for b in state.beliefsets["cluster_order"] if b.tick == tick}
        rows = sorted((b for b in bs1 if b.tick == tick), key=lambda b: b.key)
        for row in rows:
            cluster_id, size, mission = row.key
            if cluster_id in served or assessed.get((cluster_id,)) != (size, mission):
                continue
            vavp_id, d1, _ = row.value
            yield {"cluster": cluster_id, "size": size, "mission": mission, "vavp": vavp_id, "d1": d1}

    def _serve_cluster(self, run: Execution) -> None:
        b = run.binding
        step = self._step
        breakdown = plan_rank(b["d1"], b["size"], b["mission"], self.values)
        entry = PriorityEntry(self._clusters[b["cluster"]], b["vavp"], b["size"], breakdown)
        step.priority.append(entry)
        run.assert_belief("cluster_order", (entry.cluster_id,), (len(step.priority),))
        run.log("priority", position=len(step.priority), cluster=entry.cluster_id,
                vavp=entry.vavp_id, d1=breakdown.distance, size=entry.size,
                mission=b["mission"], rank=breakdown.rank, precedence=breakdown.precedence,
                instances=step.instances)
        run.post("ev2", cluster=entry.cluster_id, precedence=entry.precedence)

    def _allocate(self, run: Execution) -> None:
        state = run.state
        step = self._step
        cluster_id = run.event["cluster"]
        ranking = state.beliefsets["aircraft_ranking"]
        distances = state.beliefsets["cluster_interceptor"]
        aircraft_status = state.beliefsets["aircraft_status"]
        icp_status = state.beliefsets["interceptor_status"]

        targets = sorted(
            (b.value[0], b.key[1]) for b in ranking.match(cluster_id) if b.tick == run.tick
        )
        for _, target in targets:
            if aircraft_status.get((target,)) == (1,):
                continue
            options = [
                (b.value[0], b.key[1]) for b in distances.match(cluster_id)
                if b.tick == run.tick and icp_status.get((b.key[1],)) == (1,)
            ]
            if not options:
                step.unassigned.append(target)
                run.log("assignment", target=target, cluster=cluster_id, status="unassigned")
                continue
            d2, icp = min(options)
            run.assert_belief("aircraft_status", (target,), (1,))
            run.assert_belief("interceptor_status", (icp,), (0,))
            step.assignments.append(Assignment(target, icp, cluster_id, run.tick))
            run.log("assignment", target=target, interceptor=icp, cluster=cluster_id,
                    d2=d2, status="assigned")
            run.post("ev3", target=target, interceptor=icp, cluster=cluster_id)

        served = {b.key[0] for b in state.beliefsets["cluster_order"] if b.tick == run.tick}
        if set(self._clusters) - served:
            run.post("cluster_done", cluster=cluster_id)

    def step(
        self,
        clusters: Sequence[Cluster],
        vavps: Sequence[VavpPoint],
        interceptors: Sequence[Interceptor],
        tick: int,
    ) -> LcccStep:
        if not vavps:
            raise EmptyVavpSet("cluster prioritization needs at least one VAVP point")
        s = self.state
        self._clusters = {c.cluster_id: c for c in clusters}
        instances = enumerate_threat_instances(clusters, vavps, self.traps, self.values)
        self._step = LcccStep(tick, instances=len(instances))

        for inst in instances:
            s.assert_belief(Belief("cluster_vavp", (inst.cluster_id, inst.size, inst.mission),
                                   (inst.vavp_id, inst.breakdown.distance, inst.membership), tick))
        for cluster in sorted(clusters, key=lambda c: c.cluster_id):
            label = package_label(cluster.aircraft_count, self.traps)
            s.assert_belief(Belief("cluster_assessment", (cluster.cluster_id,),
                                   (label, cluster.mission), tick))
            for icp in sorted(interceptors, key=lambda i: i.interceptor_id):
                s.assert_belief(Belief("cluster_interceptor", (cluster.cluster_id, icp.interceptor_id),
                                       (math.dist(cluster.location, icp.location),), tick))
            for ac in cluster.members:
                s.assert_belief(Belief("aircraft_ranking", (cluster.cluster_id, ac.aircraft_id),
                                       (ac.ranking,), tick))
                if (ac.aircraft_id,) not in s.beliefsets["aircraft_status"]:
                    s.assert_belief(Belief("aircraft_status", (ac.aircraft_id,), (0,), tick))
        for icp in sorted(interceptors, key=lambda i: i.interceptor_id):
            if (icp.interceptor_id,) not in s.beliefsets["interceptor_status"]:
                s.assert_belief(Belief("interceptor_status", (icp.interceptor_id,),
                                       (int(icp.available),), tick))
        s.post("ev1", {"clusters": len(clusters)}, tick)

        result = s.run_tick(tick)
        step, self._step = self._step, None
        step.events = result.events
        step.records = result.records
        return step


def lccc_step(agent: LcccAgent, clusters, vavps, interceptors, tick: int) -> LcccStep:
    return agent.step(clusters, vavps, interceptors, tick)
