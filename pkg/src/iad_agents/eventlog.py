"""Append-only event log.

One record per line, tab separated::

    tick <TAB> agent <TAB> kind <TAB> k1=v1;k2=v2

Payload values are stored as their rendered strings, so a record read back
from disk compares equal to the record that was written. Floats are rendered
with six fractional digits (round-half-even on the exact binary value).
"""

from __future__ import annotations

import io
import os
from typing import IO, Iterable, Iterator, NamedTuple

from .errors import ParseError

KINDS = ("belief", "event", "mode", "priority", "assignment", "dropped", "violation")

_FORBIDDEN = set("\t\n\r;=")


def format_value(value) -> str:
    """Render a scalar (or a sequence of scalars) for the log."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        text = f"{value:.6f}"
        if text.startswith("-") and text.strip("-0.") == "":
            text = text[1:]
        return text
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(v) for v in value)
    if isinstance(value, (frozenset, set)):
        return ",".join(sorted(format_value(v) for v in value))
    text = str(value)
    if _FORBIDDEN & set(text):
        raise ValueError(f"log value {text!r} contains a reserved character")
    return text


def _check_token(token: str, what: str) -> str:
    if not token or _FORBIDDEN & set(token):
        raise ValueError(f"invalid log {what}: {token!r}")
    return token


class LogRecord(NamedTuple):
    tick: int
    agent_id: str
    kind: str
    payload: tuple[tuple[str, str], ...] = ()

    @classmethod
    def create(cls, tick: int, agent_id: str, kind: str, /, **payload) -> "LogRecord":
        return cls.from_items(tick, agent_id, kind, payload.items())

    @classmethod
    def from_items(cls, tick, agent_id, kind, items: Iterable[tuple[str, object]]) -> "LogRecord":
        pairs = tuple((_check_token(k, "key"), format_value(v)) for k, v in items)
        return cls(int(tick), _check_token(agent_id, "agent"), _check_token(kind, "kind"), pairs)

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.payload:
            if k == key:
                return v
        return default

    def as_dict(self) -> dict[str, str]:
        return dict(self.payload)

    def to_line(self) -> str:
        body = ";".join(f"{k}={v}" for k, v in self.payload)
        return f"{self.tick}\t{self.agent_id}\t{self.kind}\t{body}"


def parse_line(line: str, lineno: int = 0) -> LogRecord:
    fields = line.rstrip("\r\n").split("\t")
    if len(fields) != 4:
        raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}", lineno)
    tick_text, agent, kind, body = fields
    try:
        tick = int(tick_text)
    except ValueError:
        raise ParseError(f"tick field is not an integer: {tick_text!r}", lineno) from None
    if tick < 0:
        raise ParseError("negative tick", lineno)
    if not agent or not kind:
        raise ParseError("empty agent or kind field", lineno)
    if not body:
        return LogRecord(tick, agent, kind, ())
    pairs = tuple([tuple(item.split("=", 1)) for item in body.split(";")])
    for pair in pairs:
        if len(pair) != 2 or not pair[0]:
            raise ParseError(f"malformed payload item {'='.join(pair)!r}", lineno)
    return LogRecord(tick, agent, kind, pairs)


def write_log(records: Iterable[LogRecord], stream: IO[str]) -> None:
    stream.writelines(r.to_line() + "\n" for r in records)


def read_log(stream: IO[str]) -> Iterator[LogRecord]:
    for lineno, line in enumerate(stream, start=1):
        if line.strip():
            yield parse_line(line, lineno)


def dump_log(records: Iterable[LogRecord]) -> str:
    buf = io.StringIO()
    write_log(records, buf)
    return buf.getvalue()


def load_log(text: str) -> list[LogRecord]:
    return [parse_line(line, n) for n, line in enumerate(text.split("\n"), start=1) if line.strip()]


def save_log(records: Iterable[LogRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_log(records, fh)


def open_log(path: str | os.PathLike) -> list[LogRecord]:
    with open(path, encoding="utf-8") as fh:
        return list(read_log(fh))


def log_roundtrip(records: Iterable[LogRecord]) -> list[LogRecord]:
    """Serialize then parse ``records``; used to check the format is lossless."""
    return load_log(dump_log(records))


def order_records(records: Iterable[LogRecord]) -> list[LogRecord]:
    """Stable sort by (tick, agent); emission order breaks ties."""
    return sorted(records, key=lambda r: (r.tick, r.agent_id))
