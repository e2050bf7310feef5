import time

import pytest
from hypothesis import given, strategies as st

from iad_agents.errors import ParseError
from iad_agents.eventlog import (
    LogRecord, dump_log, format_value, load_log, log_roundtrip, open_log, order_records,
    parse_line, save_log,
)


def test_reals_use_six_digits_half_even():
    assert format_value(0.1) == "0.100000"
    assert format_value(2.5e-7) == "0.000000"
    assert format_value(-0.0) == "0.000000"
    assert format_value(1 / 3) == "0.333333"


def test_scalar_rendering():
    assert format_value(True) == "1"
    assert format_value(7) == "7"
    assert format_value(("SwitchOff", "SleepMode")) == "SwitchOff,SleepMode"


@pytest.mark.parametrize("bad", ["a;b", "x=y", "tab\there", "line\nbreak"])
def test_reserved_characters_rejected(bad):
    with pytest.raises(ValueError):
        LogRecord.create(0, "srdr", "belief", note=bad)


def test_line_shape():
    rec = LogRecord.create(3, "srdr", "mode", modes=("SenseMode",))
    assert rec.to_line() == "3\tsrdr\tmode\tmodes=SenseMode"
    assert parse_line(rec.to_line()) == rec


def test_payload_key_named_tick_is_allowed():
    rec = LogRecord.create(1, "srdr", "belief", tick=1, n_t=4)
    assert rec.get("tick") == "1"


def test_missing_tick_field():
    with pytest.raises(ParseError) as info:
        load_log("0\tsrdr\tmode\tmodes=SenseMode\nsrdr\tmode\tmodes=SenseMode\n")
    assert info.value.line == 2


def test_non_integer_tick():
    with pytest.raises(ParseError):
        parse_line("x\tsrdr\tmode\t", 5)


def test_unknown_kinds_survive():
    recs = [LogRecord.create(0, "radar9", "telemetry", gain=1.25)]
    assert log_roundtrip(recs) == recs


def test_empty_payload_roundtrip():
    recs = [LogRecord(4, "lccc", "dropped", ())]
    assert log_roundtrip(recs) == recs


def test_file_roundtrip(tmp_path):
    recs = [LogRecord.create(t, "srdr", "belief", ntd=t / 7) for t in range(5)]
    path = tmp_path / "x.log"
    save_log(recs, path)
    assert open_log(path) == recs


def test_order_is_stable_within_agent():
    recs = [
        LogRecord.create(1, "srdr", "a"),
        LogRecord.create(0, "srdr", "b"),
        LogRecord.create(1, "lccc", "c"),
        LogRecord.create(1, "srdr", "d"),
    ]
    assert [r.kind for r in order_records(recs)] == ["b", "c", "a", "d"]


_token = st.text(alphabet=st.characters(blacklist_characters="\t\n\r;=", blacklist_categories=("Cs",)),
                 min_size=1, max_size=8)
_value = st.one_of(st.integers(-10**6, 10**6), st.booleans(), _token,
                   st.floats(-1e6, 1e6, allow_nan=False))


@given(st.lists(st.tuples(st.integers(0, 100), _token, _token,
                          st.dictionaries(_token, _value, max_size=4)), max_size=20))
def test_roundtrip_property(rows):
    recs = [LogRecord.create(t, a, k, **p) for t, a, k, p in rows]
    assert log_roundtrip(recs) == recs


def test_large_log_budget():
    recs = [LogRecord.create(i // 100, "srdr", "belief", ntd=i * 0.001, clock=i) for i in range(10**5)]
    start = time.perf_counter()
    back = load_log(dump_log(recs))
    elapsed = time.perf_counter() - start
    assert back == recs
    assert elapsed < 1.0
