"""Surveillance-radar agent: jamming detection from detection-count swings.

The jamming index is the normalized target difference between consecutive
detection counts, ``|n_t - n_next| / n_t``. Four plans handle it:

========  =======  ===================================  ==========================
plan      handles  relevant when                        effect
========  =======  ===================================  ==========================
plan-1    ev1      ntd < theta_low                      back to {SenseMode}
plan-2    ev1      ntd >= theta_low                     post ev2 (radar jammed)
plan-3    ev2      theta_low <= ntd <= theta_high       {FrequencyHopping, SenseMode}
plan-4    ev2      ntd > theta_high                     {SwitchOff, SleepMode}
========  =======  ===================================  ==========================
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .eventlog import LogRecord
from .kernel import AgentState, Belief, Event, Execution, PlanSpec


class RadarMode(str, enum.Enum):
    SENSE = "SenseMode"
    SLEEP = "SleepMode"
    SWITCH_OFF = "SwitchOff"
    FREQUENCY_HOPPING = "FrequencyHopping"

    def __str__(self):
        return self.value


class JammingAction(str, enum.Enum):
    NO_ACTION = "NoAction"
    FREQUENCY_HOPPING = "FrequencyHopping"
    SWITCH_OFF = "SwitchOff"

    def __str__(self):
        return self.value


SENSING = (RadarMode.SENSE,)
HOPPING = (RadarMode.FREQUENCY_HOPPING, RadarMode.SENSE)
SWITCHED_OFF = (RadarMode.SWITCH_OFF, RadarMode.SLEEP)

JOINT_MODE = {
    JammingAction.NO_ACTION: SENSING,
    JammingAction.FREQUENCY_HOPPING: HOPPING,
    JammingAction.SWITCH_OFF: SWITCHED_OFF,
}


@dataclass(frozen=True)
class SrdrConfig:
    theta_low: float = 0.5
    theta_high: float = 0.75

    def __post_init__(self):
        if not 0 < self.theta_low < self.theta_high < 1:
            raise ValueError(
                f"need 0 < theta_low < theta_high < 1, got {self.theta_low}, {self.theta_high}"
            )


@dataclass(frozen=True)
class RadarObservation:
    tick: int
    n_t: int

    def __post_init__(self):
        if self.tick < 0 or self.n_t < 0:
            raise ValueError("tick and count must be non-negative")


@dataclass(frozen=True)
class NtdSample:
    tick: int
    ntd: float


def compute_ntd(n_t: int, n_next: int) -> float:
    """Normalized target difference ``|n_t - n_next| / n_t``.

    A zero denominator saturates: 0.0 when both counts are zero, else 1.0.
    """
    if n_t == 0:
        return 0.0 if n_next == 0 else 1.0
    return abs(n_t - n_next) / n_t


def classify_ntd(ntd: float, cfg: SrdrConfig = SrdrConfig()) -> JammingAction:
    if ntd < cfg.theta_low:
        return JammingAction.NO_ACTION
    if ntd <= cfg.theta_high:
        return JammingAction.FREQUENCY_HOPPING
    return JammingAction.SWITCH_OFF


def _set_mode(modes: tuple[RadarMode, ...]):
    def action(run: Execution) -> None:
        run.assert_belief("mode", ("joint",), tuple(m.value for m in modes))
    return action


def _post_jammed(run: Execution) -> None:
    run.post("ev2", NTD=run.event["NTD"], clock=run.event["clock"])


def srdr_plans(cfg: SrdrConfig) -> list[PlanSpec]:
    lo, hi = cfg.theta_low, cfg.theta_high
    return [
        PlanSpec("plan-1", "ev1", (_set_mode(SENSING),),
                 relevance=lambda ev: ev["NTD"] < lo),
        PlanSpec("plan-2", "ev1", (_post_jammed,),
                 relevance=lambda ev: ev["NTD"] >= lo),
        PlanSpec("plan-3", "ev2", (_set_mode(HOPPING),),
                 relevance=lambda ev: lo <= ev["NTD"] <= hi),
        PlanSpec("plan-4", "ev2", (_set_mode(SWITCHED_OFF),),
                 relevance=lambda ev: ev["NTD"] > hi),
    ]


@dataclass
class SrdrStep:
    tick: int
    mode: tuple[RadarMode, ...]
    ntd: float | None
    action: JammingAction | None
    events: list[Event] = field(default_factory=list)
    records: list[LogRecord] = field(default_factory=list)


class SrdrAgent:
    """Per-tick jamming detector driving the radar's joint mode.

    Beliefsets: ``counts`` (tick -> n_t), ``ntd`` (clock -> NTD, auto-posts
    ev1), ``mode`` (joint radar mode).
    """

    def __init__(self, agent_id: str = "srdr", cfg: SrdrConfig = SrdrConfig()):
        self.cfg = cfg
        self.state = AgentState(agent_id, srdr_plans(cfg))
        self.state.declare_beliefset("counts", ("tick",), ("n_t",))
        self.state.declare_beliefset("ntd", ("clock",), ("NTD",))
        self.state.declare_beliefset("mode", ("slot",), ("modes",))
        self.state.declare_event("ev1", ("NTD", "clock"))
        self.state.declare_event("ev2", ("NTD", "clock"))
        self._previous: int | None = None

    @property
    def agent_id(self) -> str:
        return self.state.agent_id

    @property
    def mode(self) -> tuple[RadarMode, ...]:
        value = self.state.beliefsets["mode"].get(("joint",))
        return tuple(RadarMode(m) for m in value) if value else SENSING

    def step(self, obs: RadarObservation) -> SrdrStep:
        state = self.state
        previous = self._previous
        state.assert_belief(Belief("counts", (obs.tick,), (obs.n_t,), obs.tick))
        ntd = action = None
        if previous is not None:
            ntd = compute_ntd(previous, obs.n_t)
            action = classify_ntd(ntd, self.cfg)
            state.assert_belief(Belief("ntd", (obs.tick,), (ntd,), obs.tick), auto_post="ev1")
        self._previous = obs.n_t
        result = state.run_tick(obs.tick)
        mode = self.mode
        result.records.append(
            LogRecord.create(obs.tick, self.agent_id, "mode", modes=tuple(m.value for m in mode))
        )
        return SrdrStep(obs.tick, mode, ntd, action, result.events, result.records)


def srdr_step(agent: SrdrAgent, obs: RadarObservation) -> SrdrStep:
    return agent.step(obs)
