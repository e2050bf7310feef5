"""Fixed-step world loop: radar first, then the LCCC, once per tick."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .distributions import CountSampler
from .errors import CycleGuardExceeded
from .evaluation import STUDENT_T2, ExperimentReport, Tally, ks_distances
from .eventlog import LogRecord, dump_log, order_records
from .goals import TraceReport, validate_trace
from .lccc import LcccAgent, LcccStep
from .scenario import Scenario
from .srdr import JammingAction, NtdSample, RadarObservation, SrdrAgent

SRDR_ID = "srdr"
LCCC_ID = "lccc"


@dataclass
class SimulationResult:
    records: list[LogRecord]
    report: ExperimentReport
    validation: TraceReport
    counts: list[int] = field(default_factory=list)
    ntds: list[NtdSample] = field(default_factory=list)
    modes: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)
    lccc_steps: list[LcccStep] = field(default_factory=list)

    def log_text(self) -> str:
        return dump_log(self.records)

    def validation_lines(self) -> list[str]:
        v = self.validation
        lines = [
            f"valid={int(v.valid)}",
            f"violations={len(v.violations)}",
            f"first_offending_tick={'' if v.first_offending_tick is None else v.first_offending_tick}",
            "extensions=" + " ".join(str(e) for e in v.extensions),
        ]
        for item in v.violations:
            lines.append(f"violation[{item.tick}]={','.join(sorted(item.goals))}: {item.reason}")
        return lines


def detected_count(baseline: int, factor: float | None) -> int:
    """Counts under a jamming episode are scaled by ``factor`` and floored."""
    if factor is None:
        return baseline
    return max(0, math.floor(baseline * factor))


def run_simulation(scn: Scenario, seed: int | None = None, ticks: int | None = None) -> SimulationResult:
    seed = scn.seed if seed is None else seed
    horizon = scn.simulation_time if ticks is None else ticks
    if horizon < 1:
        raise ValueError("simulation needs at least one tick")

    sampler = CountSampler(scn.detection, seed)
    radar = SrdrAgent(SRDR_ID, scn.srdr)
    lccc = LcccAgent(LCCC_ID, scn.traps, scn.values)
    result = SimulationResult([], None, None)  # type: ignore[arg-type]
    records = result.records
    fh = off = 0

    try:
        for tick in range(horizon):
            n_t = detected_count(sampler.draw(), scn.suppression_at(tick))
            result.counts.append(n_t)
            step = radar.step(RadarObservation(tick, n_t))
            records.extend(step.records)
            result.modes.append((tick, tuple(m.value for m in step.mode)))
            if step.ntd is not None:
                result.ntds.append(NtdSample(tick, step.ntd))
                fh += step.action is JammingAction.FREQUENCY_HOPPING
                off += step.action is JammingAction.SWITCH_OFF

            if tick % scn.lccc_cadence == 0:
                lstep = lccc.step(scn.clusters_at(tick), scn.vavps, scn.interceptors, tick)
                result.lccc_steps.append(lstep)
                records.extend(lstep.records)
            else:
                records.extend(lccc.state.run_tick(tick).records)
    except CycleGuardExceeded as exc:
        exc.partial_log = order_records(records + getattr(exc, "records", []))
        raise

    result.validation = validate_trace(result.modes, scn.rules, scn.forbidden)
    for v in result.validation.violations:
        records.append(LogRecord.create(v.tick, SRDR_ID, "violation",
                                        goals=tuple(sorted(v.goals)), reason=v.reason))
    result.records = order_records(records)

    series = [s.ntd for s in result.ntds]
    result.report = ExperimentReport.from_tally(
        f"scenario:{scn.detection}", seed, Tally(len(series), fh, off),
        ks_against=ks_distances(series, [STUDENT_T2]) if series else {},
    )
    return result
