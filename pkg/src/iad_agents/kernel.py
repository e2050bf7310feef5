"""A small BDI runtime.

Agents hold named beliefsets, a plan repository and a FIFO event queue.
Each event is dispatched to at most one plan instance, chosen in three
stages:

1. relevance: plans that handle the event kind and whose ``relevance``
   predicate accepts the event;
2. context: each surviving plan is expanded into one instance per binding
   yielded by its ``context`` query over the agent's beliefs;
3. ranking: every instance gets a rank in ``[0, 9]`` (clamped) and the one
   with the highest precedence ``9 - rank`` wins. Ties go to the plan
   declared first, then to the binding enumerated first.

Plan bodies run immediately and may post further events; those are handled
in the same tick until the queue drains.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import CycleGuardExceeded, TickOrderError
from .eventlog import LogRecord

MAX_RANK = 9
CYCLE_LIMIT = 100

Binding = Mapping[str, Any]
Action = Callable[["Execution"], None]

# keys the kernel writes next to the payload in ``event`` log records
_RESERVED_KEYS = frozenset({"event", "handled_by", "rank"})


@dataclass(frozen=True)
class Belief:
    beliefset: str
    key: tuple
    value: tuple
    tick: int

    def __post_init__(self):
        if not self.key:
            raise ValueError("belief key must be non-empty")
        if self.tick < 0:
            raise ValueError("belief tick must be non-negative")


class BeliefSet:
    """Keyed collection of beliefs; re-asserting a key replaces its value.

    ``key_fields`` and ``value_fields`` name the tuple positions. They are
    used for auto-posted event payloads and for log records.
    """

    def __init__(self, name: str, key_fields: Sequence[str] = (), value_fields: Sequence[str] = ()):
        self.name = name
        self.key_fields = tuple(key_fields)
        self.value_fields = tuple(value_fields)
        self._rows: dict[tuple, Belief] = {}
        self._last_tick = 0

    def add(self, belief: Belief) -> None:
        if belief.tick < self._last_tick:
            raise ValueError(
                f"beliefset {self.name!r}: tick {belief.tick} precedes {self._last_tick}"
            )
        self._last_tick = belief.tick
        # pop first so insertion order stays tick-ordered
        self._rows.pop(belief.key, None)
        self._rows[belief.key] = belief

    def get(self, key: tuple, default=None):
        row = self._rows.get(tuple(key))
        return row.value if row is not None else default

    def match(self, *pattern) -> list[Belief]:
        """Beliefs whose key agrees with ``pattern``; ``None`` is a wildcard."""
        return [
            b for b in self._rows.values()
            if len(b.key) >= len(pattern)
            and all(p is None or p == k for p, k in zip(pattern, b.key))
        ]

    def named(self, belief: Belief) -> dict[str, Any]:
        keys = self.key_fields or tuple(f"k{i}" for i in range(len(belief.key)))
        values = self.value_fields or tuple(f"v{i}" for i in range(len(belief.value)))
        return {**dict(zip(keys, belief.key)), **dict(zip(values, belief.value))}

    def __iter__(self):
        return iter(self._rows.values())

    def __len__(self):
        return len(self._rows)

    def __contains__(self, key):
        return tuple(key) in self._rows


@dataclass(frozen=True)
class Event:
    kind: str
    payload: Mapping[str, Any]
    source: str
    tick: int
    seq: int = 0

    def __getitem__(self, key):
        return self.payload[key]

    @property
    def order_key(self):
        return (self.tick, self.source, self.seq)


def _always(event: Event) -> bool:
    return True


def _single_binding(state: "AgentState", event: Event) -> Iterable[Binding]:
    return ({},)


def _zero_rank(event: Event, binding: Binding) -> int:
    return 0


@dataclass(frozen=True)
class PlanSpec:
    name: str
    handles: str
    body: tuple[Action, ...] = ()
    relevance: Callable[[Event], bool] = _always
    context: Callable[["AgentState", Event], Iterable[Binding]] = _single_binding
    rank: Callable[[Event, Binding], int] = _zero_rank


def clamp_rank(rank: int) -> int:
    return min(max(int(rank), 0), MAX_RANK)


@dataclass(frozen=True)
class PlanInstance:
    plan: PlanSpec
    binding: Binding
    rank: int

    @property
    def precedence(self) -> int:
        return MAX_RANK - self.rank


@dataclass
class TickResult:
    events: list[Event] = field(default_factory=list)
    records: list[LogRecord] = field(default_factory=list)


class Execution:
    """Handle passed to plan body actions while an instance runs."""

    def __init__(self, state: "AgentState", event: Event, instance: PlanInstance, tick: int):
        self.state = state
        self.event = event
        self.instance = instance
        self.tick = tick

    @property
    def binding(self) -> Binding:
        return self.instance.binding

    def assert_belief(self, beliefset: str, key: tuple, value: tuple, auto_post: str | None = None):
        self.state.assert_belief(Belief(beliefset, tuple(key), tuple(value), self.tick), auto_post)

    def post(self, kind: str, /, **payload) -> Event:
        return self.state.post(kind, payload, self.tick)

    def log(self, kind: str, /, **payload) -> None:
        self.state.log(self.tick, kind, **payload)


class AgentState:
    """Beliefs, plans and the pending event queue of one agent.

    ``outbound`` lists event kinds addressed to other agents. They are
    reported in the tick's output but never dispatched to local plans.
    """

    def __init__(
        self,
        agent_id: str,
        plans: Sequence[PlanSpec] = (),
        outbound: Iterable[str] = (),
    ):
        names = [p.name for p in plans]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate plan names in repository: {names}")
        self.agent_id = agent_id
        self.plans: list[PlanSpec] = list(plans)
        self.outbound = frozenset(outbound)
        self.beliefsets: dict[str, BeliefSet] = {}
        self.event_kinds: dict[str, frozenset[str]] = {}
        self.pending: deque[Event] = deque()
        self.last_tick: int | None = None
        self._seq = 0
        self._records: list[LogRecord] = []
        self._emitted: list[Event] = []

    # -- declarations -----------------------------------------------------

    def declare_beliefset(self, name: str, key_fields: Sequence[str], value_fields: Sequence[str]) -> BeliefSet:
        bs = BeliefSet(name, key_fields, value_fields)
        self.beliefsets[name] = bs
        return bs

    def declare_event(self, kind: str, keys: Iterable[str]) -> None:
        keys = frozenset(keys)
        if keys & _RESERVED_KEYS:
            raise ValueError(f"payload keys {sorted(keys & _RESERVED_KEYS)} are reserved")
        self.event_kinds[kind] = keys

    def beliefset(self, name: str) -> BeliefSet:
        if name not in self.beliefsets:
            self.beliefsets[name] = BeliefSet(name)
        return self.beliefsets[name]

    # -- beliefs and events ---------------------------------------------

    def assert_belief(self, belief: Belief, auto_post: str | None = None) -> "AgentState":
        bs = self.beliefset(belief.beliefset)
        bs.add(belief)
        named = bs.named(belief)
        self.log(belief.tick, "belief", beliefset=belief.beliefset, **named)
        if auto_post is not None:
            self.post(auto_post, named, belief.tick)
        return self

    def post(self, kind: str, payload: Mapping[str, Any], tick: int) -> Event:
        declared = self.event_kinds.get(kind)
        if declared is not None and frozenset(payload) != declared:
            raise ValueError(
                f"event {kind!r} expects payload keys {sorted(declared)}, got {sorted(payload)}"
            )
        if _RESERVED_KEYS & set(payload):
            raise ValueError(f"payload of {kind!r} uses a reserved key")
        self._seq += 1
        event = Event(kind, dict(payload), self.agent_id, tick, self._seq)
        if kind in self.outbound:
            self._emitted.append(event)
            self._log_event(event, "event", handled_by="external")
        else:
            self.pending.append(event)
        return event

    def log(self, tick: int, kind: str, /, **payload) -> None:
        self._records.append(LogRecord.create(tick, self.agent_id, kind, **payload))

    def _log_event(self, event: Event, kind: str, **extra) -> None:
        items = [("event", event.kind), *sorted(event.payload.items()), *extra.items()]
        self._records.append(LogRecord.from_items(event.tick, self.agent_id, kind, items))

    # -- plan selection -------------------------------------------------

    def applicable_instances(self, event: Event) -> list[PlanInstance]:
        """Every instance surviving relevance and context, in tie-break order."""
        found = []
        for plan in self.plans:
            if plan.handles != event.kind or not plan.relevance(event):
                continue
            for binding in plan.context(self, event):
                found.append(PlanInstance(plan, binding, clamp_rank(plan.rank(event, binding))))
        return found

    def select_plan(self, event: Event) -> PlanInstance | None:
        best = None
        for inst in self.applicable_instances(event):
            if best is None or inst.precedence > best.precedence:
                best = inst
        return best

    # -- execution ------------------------------------------------------

    def run_tick(self, tick: int) -> TickResult:
        expected = 0 if self.last_tick is None else self.last_tick + 1
        if tick != expected:
            raise TickOrderError(f"agent {self.agent_id!r}: expected tick {expected}, got {tick}")
        self.last_tick = tick

        processed = 0
        while self.pending:
            event = self.pending.popleft()
            processed += 1
            if processed > CYCLE_LIMIT:
                exc = CycleGuardExceeded(self.agent_id, tick, CYCLE_LIMIT)
                exc.records = self._drain_records()
                raise exc
            self._emitted.append(event)
            instance = self.select_plan(event)
            if instance is None:
                self._log_event(event, "dropped")
                continue
            self._log_event(event, "event", handled_by=instance.plan.name, rank=instance.rank)
            run = Execution(self, event, instance, tick)
            for action in instance.plan.body:
                action(run)

        result = TickResult(self._emitted, self._drain_records())
        self._emitted = []
        return result

    def _drain_records(self) -> list[LogRecord]:
        records, self._records = self._records, []
        return records
