"""Scenario files.

UTF-8 text with ``#`` comments and bracketed sections. Settings sections
(``[WORLD]``, ``[DETECTION]``, ``[FUZZY]``) hold one ``key=value`` per line.
Record sections hold one record per line: an identifier followed by
whitespace-separated ``key=value`` fields (``[JAMMING]`` records have no
identifier). ``[GIR]`` holds goal rules and ``forbid`` lines. See
``docs/scenario-format.md`` for the full grammar.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from importlib import resources

from .distributions import DistributionSpec
from .errors import InvalidSpec, ParseError, ValidationError
from .goals import Formula, GoalInferenceRule, parse_gir_line, radar_goal_rules
from .lccc import (
    MISSIONS, Aircraft, Cluster, Interceptor, PackageTrapezoids, RankValues, SIZES,
    Trapezoid, VavpPoint,
)
from .srdr import SrdrConfig

SECTIONS = ("WORLD", "VAVP", "CLUSTER", "INTERCEPTOR", "DETECTION", "JAMMING", "GIR", "FUZZY")


@dataclass(frozen=True)
class JammingEpisode:
    start_tick: int
    end_tick: int  # inclusive
    factor: float

    def covers(self, tick: int) -> bool:
        return self.start_tick <= tick <= self.end_tick


@dataclass(frozen=True)
class ClusterTrack:
    """A cluster plus its movement and visibility over the run."""

    cluster: Cluster
    waypoints: tuple[tuple[int, float, float], ...] = ()
    first_tick: int = 0
    last_tick: int | None = None

    def visible(self, tick: int) -> bool:
        return tick >= self.first_tick and (self.last_tick is None or tick <= self.last_tick)

    def at(self, tick: int) -> Cluster:
        location = self.cluster.location
        for t, x, y in self.waypoints:
            if t <= tick:
                location = (x, y)
        if location == self.cluster.location:
            return self.cluster
        return Cluster(self.cluster.cluster_id, location, self.cluster.mission, self.cluster.members)


@dataclass
class Scenario:
    width: float = 1000.0
    height: float = 1000.0
    simulation_time: int = 60
    seed: int = 0
    lccc_cadence: int = 1
    vavps: list[VavpPoint] = field(default_factory=list)
    clusters: list[ClusterTrack] = field(default_factory=list)
    interceptors: list[Interceptor] = field(default_factory=list)
    detection: DistributionSpec = DistributionSpec("normal", (20.0, 10.0))
    srdr: SrdrConfig = SrdrConfig()
    jamming: list[JammingEpisode] = field(default_factory=list)
    rules: list[GoalInferenceRule] = field(default_factory=list)
    forbidden: list[Formula] = field(default_factory=list)
    traps: PackageTrapezoids = PackageTrapezoids()
    values: RankValues = RankValues()

    def suppression_at(self, tick: int) -> float | None:
        for ep in self.jamming:
            if ep.covers(tick):
                return ep.factor
        return None

    def clusters_at(self, tick: int) -> list[Cluster]:
        return [t.at(tick) for t in self.clusters if t.visible(tick)]

    def validate(self) -> "Scenario":
        if self.simulation_time < 1:
            raise ValidationError("simulation_time must be at least 1")
        if self.lccc_cadence < 1:
            raise ValidationError("lccc_cadence must be at least 1")
        if self.width <= 0 or self.height <= 0:
            raise ValidationError("world bounds must be positive")
        if not self.vavps:
            raise ValidationError("at least one VAVP point is required")

        def inside(point, what):
            x, y = point
            if not (0 <= x <= self.width and 0 <= y <= self.height):
                raise ValidationError(f"{what} at {point} lies outside the world bounds")

        ids: set[str] = set()

        def unique(ident, what):
            if ident in ids:
                raise ValidationError(f"duplicate identifier {ident!r} ({what})")
            ids.add(ident)

        for v in self.vavps:
            unique(v.vavp_id, "VAVP")
            inside(v.location, f"VAVP {v.vavp_id}")
        for i in self.interceptors:
            unique(i.interceptor_id, "interceptor")
            inside(i.location, f"interceptor {i.interceptor_id}")
        for track in self.clusters:
            c = track.cluster
            unique(c.cluster_id, "cluster")
            inside(c.location, f"cluster {c.cluster_id}")
            for t, x, y in track.waypoints:
                inside((x, y), f"cluster {c.cluster_id} waypoint at tick {t}")
            for a in c.members:
                unique(a.aircraft_id, f"aircraft of {c.cluster_id}")
            if track.last_tick is not None and track.last_tick < track.first_tick:
                raise ValidationError(f"cluster {c.cluster_id} leaves before it appears")

        episodes = sorted(self.jamming, key=lambda e: e.start_tick)
        for ep in episodes:
            if ep.start_tick < 0 or ep.end_tick < ep.start_tick:
                raise ValidationError(f"jamming episode {ep} has an invalid tick window")
            if not 0 < ep.factor <= 1:
                raise ValidationError(f"jamming factor {ep.factor} outside (0, 1]")
        for a, b in zip(episodes, episodes[1:]):
            if b.start_tick <= a.end_tick:
                raise ValidationError(f"jamming episodes overlap: {a} and {b}")
        return self


# -- parsing --------------------------------------------------------------


def _number(text: str, lineno: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what}: expected a number, got {text!r}", lineno) from None
    if math.isnan(value):
        raise ParseError(f"{what}: NaN is not allowed", lineno)
    return value


def _integer(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {text!r}", lineno) from None


def _fields(tokens: list[str], lineno: int, allowed: set[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not key or not value:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        if key not in allowed:
            raise ParseError(f"unknown field {key!r} (expected one of {sorted(allowed)})", lineno)
        if key in out:
            raise ParseError(f"field {key!r} given twice", lineno)
        out[key] = value
    return out


def _require(fields: dict[str, str], keys: tuple[str, ...], lineno: int, what: str):
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ParseError(f"{what} is missing {', '.join(missing)}", lineno)


def _parse_members(fields: dict[str, str], cid: str, lineno: int) -> tuple[Aircraft, ...]:
    if "members" in fields:
        members = []
        for pos, item in enumerate(fields["members"].split(","), start=1):
            aid, sep, rank = item.partition(":")
            if not aid:
                raise ParseError(f"empty aircraft id in cluster {cid}", lineno)
            members.append(Aircraft(aid, _integer(rank, lineno, f"ranking of {aid}") if sep else pos))
        if "count" in fields and _integer(fields["count"], lineno, "count") != len(members):
            raise ValidationError(f"cluster {cid}: count does not match the member list")
        return tuple(members)
    if "count" in fields:
        count = _integer(fields["count"], lineno, "count")
        if count < 1:
            raise ValidationError(f"cluster {cid}: aircraft count must be positive")
        return tuple(Aircraft(f"{cid}-{k}", k) for k in range(1, count + 1))
    raise ParseError(f"cluster {cid} needs members= or count=", lineno)


def _parse_waypoints(text: str, lineno: int) -> tuple[tuple[int, float, float], ...]:
    points = []
    for item in text.split(";"):
        parts = item.split(":")
        if len(parts) != 3:
            raise ParseError(f"waypoint must be tick:x:y, got {item!r}", lineno)
        points.append((_integer(parts[0], lineno, "waypoint tick"),
                       _number(parts[1], lineno, "waypoint x"),
                       _number(parts[2], lineno, "waypoint y")))
    return tuple(sorted(points))


def _trapezoid(text: str, lineno: int, label: str) -> Trapezoid:
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError(f"{label} needs four abscissae a,b,c,d", lineno)
    try:
        return Trapezoid(*(_number(p, lineno, label) for p in parts))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    scn = Scenario()
    section = None
    seen_sections = set()
    gir_rules: list[GoalInferenceRule] = []
    gir_forbidden: list[Formula] = []
    fuzzy: dict[str, Trapezoid] = {}
    size_values = dict(scn.values.size)
    mission_values = dict(scn.values.mission)
    srdr_kw: dict[str, float] = {}
    content = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        content = True
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().upper()
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", lineno)
            if section in seen_sections:
                raise ParseError(f"section [{section}] appears twice", lineno)
            seen_sections.add(section)
            continue
        if section is None:
            raise ParseError("content before the first section header", lineno)

        if section == "GIR":
            try:
                item = parse_gir_line(line)
            except ParseError as exc:
                raise ParseError(f"{source}: {exc}", lineno) from None
            (gir_rules if isinstance(item, GoalInferenceRule) else gir_forbidden).append(item)
            continue

        tokens = line.split()
        if section in ("WORLD", "DETECTION", "FUZZY"):
            if len(tokens) != 1 or "=" not in line:
                raise ParseError(f"expected one key=value per line in [{section}]", lineno)
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not value:
                raise ParseError(f"empty value for {key!r}", lineno)
            if section == "WORLD":
                if key in ("width", "height"):
                    setattr(scn, key, _number(value, lineno, key))
                elif key in ("simulation_time", "seed", "lccc_cadence"):
                    setattr(scn, key, _integer(value, lineno, key))
                else:
                    raise ParseError(f"unknown [WORLD] key {key!r}", lineno)
            elif section == "DETECTION":
                if key == "dist":
                    try:
                        scn.detection = DistributionSpec.parse(value)
                    except InvalidSpec as exc:
                        raise ValidationError(f"line {lineno}: {exc}") from None
                elif key in ("theta_low", "theta_high"):
                    srdr_kw[key] = _number(value, lineno, key)
                else:
                    raise ParseError(f"unknown [DETECTION] key {key!r}", lineno)
            else:
                if key in SIZES:
                    fuzzy[key] = _trapezoid(value, lineno, key)
                elif key.startswith("value.") and key[6:] in SIZES:
                    size_values[key[6:]] = _number(value, lineno, key)
                elif key.startswith("value.") and key[6:] in MISSIONS:
                    mission_values[key[6:]] = _number(value, lineno, key)
                else:
                    raise ParseError(f"unknown [FUZZY] key {key!r}", lineno)
            continue

        if section == "JAMMING":
            f = _fields(tokens, lineno, {"start", "end", "factor"})
            _require(f, ("start", "end", "factor"), lineno, "jamming episode")
            scn.jamming.append(JammingEpisode(
                _integer(f["start"], lineno, "start"), _integer(f["end"], lineno, "end"),
                _number(f["factor"], lineno, "factor"),
            ))
            continue

        ident, rest = tokens[0], tokens[1:]
        if "=" in ident:
            raise ParseError(f"[{section}] records start with an identifier", lineno)
        try:
            if section == "VAVP":
                f = _fields(rest, lineno, {"x", "y", "value"})
                _require(f, ("x", "y"), lineno, f"VAVP {ident}")
                scn.vavps.append(VavpPoint(
                    ident, (_number(f["x"], lineno, "x"), _number(f["y"], lineno, "y")),
                    _number(f.get("value", "1"), lineno, "value"),
                ))
            elif section == "INTERCEPTOR":
                f = _fields(rest, lineno, {"x", "y", "available"})
                _require(f, ("x", "y"), lineno, f"interceptor {ident}")
                available = f.get("available", "1").lower()
                if available not in ("0", "1", "true", "false"):
                    raise ParseError(f"available must be 0/1, got {available!r}", lineno)
                scn.interceptors.append(Interceptor(
                    ident, (_number(f["x"], lineno, "x"), _number(f["y"], lineno, "y")),
                    available in ("1", "true"),
                ))
            else:
                f = _fields(rest, lineno, {"x", "y", "mission", "members", "count", "waypoints", "from", "until"})
                _require(f, ("x", "y", "mission"), lineno, f"cluster {ident}")
                mission = f["mission"].capitalize()
                if mission not in MISSIONS:
                    raise ParseError(f"mission must be Strike or Escort, got {f['mission']!r}", lineno)
                cluster = Cluster(ident, (_number(f["x"], lineno, "x"), _number(f["y"], lineno, "y")),
                                  mission, _parse_members(f, ident, lineno))
                scn.clusters.append(ClusterTrack(
                    cluster,
                    _parse_waypoints(f["waypoints"], lineno) if "waypoints" in f else (),
                    _integer(f.get("from", "0"), lineno, "from"),
                    _integer(f["until"], lineno, "until") if "until" in f else None,
                ))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"line {lineno}: {exc}") from None

    if not content:
        raise ParseError(f"{source}: scenario is empty", 1)

    try:
        if srdr_kw:
            scn.srdr = SrdrConfig(**srdr_kw)
        if fuzzy:
            defaults = PackageTrapezoids()
            scn.traps = PackageTrapezoids(
                fuzzy.get("Small", defaults.small),
                fuzzy.get("Medium", defaults.medium),
                fuzzy.get("Big", defaults.big),
            )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    scn.values = RankValues(size_values, mission_values)

    if "GIR" in seen_sections:
        scn.rules, scn.forbidden = gir_rules, gir_forbidden
    else:
        scn.rules, scn.forbidden = radar_goal_rules()
    return scn.validate()


def load_scenario(path: str | os.PathLike) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario(text, str(path))


def bundled_scenario_path(name: str = "baseline.scn"):
    """Path-like handle to a scenario shipped with the package."""
    return resources.files("iad_agents") / "data" / name


def load_bundled(name: str = "baseline.scn") -> Scenario:
    return parse_scenario(bundled_scenario_path(name).read_text(encoding="utf-8"), name)
