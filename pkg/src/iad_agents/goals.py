"""Goal inference rules read as default logic.

A rule ``beliefs | k- | k+ => goal`` is a default whose prerequisite is the
belief atoms plus the supporting goals ``k+``, whose justification is the
absence of every conflicting goal ``k-``, and whose consequent is ``goal``.
Extensions are found by walking every application order (rule sets here are
tiny) and keeping the closed, successful end states.

Forbidden goal combinations are propositional formulas such as
``!G{SwitchOff & FrequencyHopping}``; a goal set violates one when the
formula evaluates false under it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ParseError

# -- formulas -------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def holds(self, goals: frozenset[str]) -> bool:
        return self.name in goals

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    operand: "Formula"

    def holds(self, goals):
        return not self.operand.holds(goals)

    def __str__(self):
        return f"!{self.operand}"


@dataclass(frozen=True)
class And:
    operands: tuple["Formula", ...]

    def holds(self, goals):
        return all(op.holds(goals) for op in self.operands)

    def __str__(self):
        return "(" + " & ".join(map(str, self.operands)) + ")"


@dataclass(frozen=True)
class Or:
    operands: tuple["Formula", ...]

    def holds(self, goals):
        return any(op.holds(goals) for op in self.operands)

    def __str__(self):
        return "(" + " | ".join(map(str, self.operands)) + ")"


@dataclass(frozen=True)
class Goal:
    """``G{...}``: the body is pursued as a goal, i.e. holds in the goal set."""

    body: "Formula"

    def holds(self, goals):
        return self.body.holds(goals)

    def __str__(self):
        body = str(self.body)
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        return "G{" + body + "}"


Formula = Atom | Not | And | Or | Goal

_TOKEN = re.compile(r"\s*(?:(?P<op>[!¬~&∧|∨(){}])|(?P<word>[A-Za-z_][A-Za-z0-9_]*))")
_WORD_OPS = {"NOT": "!", "AND": "&", "OR": "|"}
_OP_ALIASES = {"¬": "!", "~": "!", "∧": "&", "∨": "|"}


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in formula {text!r}")
        pos = m.end()
        if m.group("op"):
            tokens.append(_OP_ALIASES.get(m.group("op"), m.group("op")))
        else:
            word = m.group("word")
            tokens.append(_WORD_OPS.get(word.upper(), word))
    return tokens


def parse_formula(text: str) -> Formula:
    """Parse ``!``/``&``/``|``, ``G{...}`` and parentheses (also ¬ ∧ ∨ and NOT/AND/OR)."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a term'} in formula {text!r}")
        pos += 1
        return tok

    def disjunction():
        ops = [conjunction()]
        while peek() == "|":
            take()
            ops.append(conjunction())
        return ops[0] if len(ops) == 1 else Or(tuple(ops))

    def conjunction():
        ops = [unary()]
        while peek() == "&":
            take()
            ops.append(unary())
        return ops[0] if len(ops) == 1 else And(tuple(ops))

    def unary():
        tok = peek()
        if tok == "!":
            take()
            return Not(unary())
        if tok == "(":
            take()
            inner = disjunction()
            take(")")
            return inner
        if tok == "G" and pos + 1 < len(tokens) and tokens[pos + 1] == "{":
            take()
            take("{")
            inner = disjunction()
            take("}")
            return Goal(inner)
        if tok is None or not re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"unexpected token {tok!r} in formula {text!r}")
        take()
        return Atom(tok)

    result = disjunction()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in formula {text!r}")
    return result


# -- rules and extensions -------------------------------------------------


@dataclass(frozen=True)
class GoalInferenceRule:
    beliefs: frozenset[str]
    negative_goals: frozenset[str]
    positive_goals: frozenset[str]
    derived_goal: str

    def __post_init__(self):
        if self.derived_goal in self.negative_goals:
            raise ValueError(f"rule derives {self.derived_goal!r} while listing it as conflicting")

    @classmethod
    def of(cls, beliefs=(), negative=(), positive=(), goal: str = "") -> "GoalInferenceRule":
        return cls(frozenset(beliefs), frozenset(negative), frozenset(positive), goal)

    def __str__(self):
        part = lambda s: ",".join(sorted(s))  # noqa: E731
        return f"{part(self.beliefs)} | {part(self.negative_goals)} | {part(self.positive_goals)} => {self.derived_goal}"


def parse_rule(text: str) -> GoalInferenceRule:
    """Parse ``beliefs | k- | k+ => goal`` (comma-separated atoms, any part may be empty)."""
    lhs, arrow, goal = text.partition("=>")
    goal = goal.strip()
    parts = lhs.split("|")
    if not arrow or len(parts) != 3 or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", goal):
        raise ParseError(f"expected 'beliefs | k- | k+ => goal', got {text.strip()!r}")
    sets = []
    for part in parts:
        atoms = [a.strip() for a in part.split(",") if a.strip()]
        for a in atoms:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", a):
                raise ParseError(f"bad atom {a!r} in rule {text.strip()!r}")
        sets.append(frozenset(atoms))
    try:
        return GoalInferenceRule(sets[0], sets[1], sets[2], goal)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class Extension:
    goal_set: frozenset[str]

    def __contains__(self, goal):
        return goal in self.goal_set

    def __str__(self):
        return "{" + ", ".join(sorted(self.goal_set)) + "}"


def _applicable(rule: GoalInferenceRule, beliefs: frozenset[str], goals: frozenset[str]) -> bool:
    return (
        rule.derived_goal not in goals
        and rule.beliefs <= beliefs
        and rule.positive_goals <= goals
        and not (rule.negative_goals & goals)
    )


def compute_extensions(rules: Sequence[GoalInferenceRule], beliefs: Iterable[str]) -> set[Extension]:
    """All extensions of ``rules`` under ``beliefs``.

    A branch applies one applicable rule at a time. It is closed when no rule
    applies; it succeeds when no applied rule's conflicting goal ended up in
    the final set. Branches reaching an already-seen state are pruned.
    """
    beliefs = frozenset(beliefs)
    rules = list(rules)
    found: set[Extension] = set()
    seen: set[tuple[frozenset[str], frozenset[int]]] = set()
    stack = [(frozenset(), frozenset())]
    while stack:
        goals, applied = stack.pop()
        if (goals, applied) in seen:
            continue
        seen.add((goals, applied))
        nexts = [i for i, r in enumerate(rules) if _applicable(r, beliefs, goals)]
        if not nexts:
            blocked = set().union(*(rules[i].negative_goals for i in applied)) if applied else set()
            if not blocked & goals:
                found.add(Extension(goals))
            continue
        for i in nexts:
            stack.append((goals | {rules[i].derived_goal}, applied | {i}))
    return found


def check_conflicts(goals: Iterable[str], forbidden: Sequence[Formula]) -> list[Formula]:
    goals = frozenset(goals)
    return [f for f in forbidden if not f.holds(goals)]


# -- reference rule set ---------------------------------------------------

RADAR_RULES: tuple[GoalInferenceRule, ...] = (
    GoalInferenceRule.of(["Jammed"], ["FrequencyHopping"], [], "SwitchOff"),
    GoalInferenceRule.of(["Jammed"], ["SwitchOff"], [], "FrequencyHopping"),
    GoalInferenceRule.of([], [], ["FrequencyHopping"], "SenseMode"),
    GoalInferenceRule.of([], [], ["SwitchOff"], "SleepMode"),
)

RADAR_FORBIDDEN: tuple[Formula, ...] = tuple(parse_formula(t) for t in (
    "!G{SwitchOff & FrequencyHopping}",
    "!G{SenseMode & SleepMode}",
    "!G{SwitchOff & SenseMode}",
    "!G{FrequencyHopping & SleepMode}",
))


def radar_goal_rules() -> tuple[list[GoalInferenceRule], list[Formula]]:
    return list(RADAR_RULES), list(RADAR_FORBIDDEN)


def parse_rules_text(text: str, source: str = "<rules>") -> tuple[list[GoalInferenceRule], list[Formula]]:
    """Read rule lines (``... => goal``) and forbidden lines (``forbid <formula>``).

    Blank lines, ``#`` comments and a ``[GIR]`` header are ignored.
    """
    rules, forbidden = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.upper() == "[GIR]":
            continue
        try:
            item = parse_gir_line(line)
        except ParseError as exc:
            raise ParseError(f"{source}: {exc}", lineno) from None
        (rules if isinstance(item, GoalInferenceRule) else forbidden).append(item)
    return rules, forbidden


def parse_gir_line(line: str) -> GoalInferenceRule | Formula:
    """One rule (``... => goal``) or one ``forbid <formula>`` line."""
    if line.lower().startswith("forbid "):
        return parse_formula(line[len("forbid "):])
    if "=>" in line:
        return parse_rule(line)
    raise ParseError(f"expected a rule or 'forbid <formula>', got {line!r}")


# -- trace validation -----------------------------------------------------


@dataclass(frozen=True)
class Violation:
    tick: int
    goals: frozenset[str]
    reason: str


@dataclass
class TraceReport:
    violations: list[Violation] = field(default_factory=list)
    extensions: list[Extension] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def first_offending_tick(self) -> int | None:
        return self.violations[0].tick if self.violations else None


def validate_trace(
    trace: Sequence[tuple[int, Iterable[str]]],
    rules: Sequence[GoalInferenceRule],
    forbidden: Sequence[Formula],
    beliefs: Iterable[str] | None = None,
) -> TraceReport:
    """Check each (tick, joint goal set) against the forbidden formulas and extensions.

    Extensions are computed once with ``beliefs``, defaulting to every belief
    atom the rules mention, so a state is legal when the rules can reach it
    (or a subset of it) under some belief situation.
    """
    if beliefs is None:
        beliefs = set().union(*(r.beliefs for r in rules)) if rules else set()
    extensions = sorted(compute_extensions(rules, beliefs), key=lambda e: sorted(e.goal_set))
    report = TraceReport(extensions=extensions)
    last = None
    for tick, goals in trace:
        if last is not None and tick <= last:
            raise ValueError(f"trace ticks must increase strictly ({last} then {tick})")
        last = tick
        goals = frozenset(goals)
        for formula in check_conflicts(goals, forbidden):
            report.violations.append(Violation(tick, goals, str(formula)))
        if not any(goals <= ext.goal_set for ext in extensions):
            report.violations.append(Violation(tick, goals, "not within any extension"))
    return report
