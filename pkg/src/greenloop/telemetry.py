"""Telemetry line, CSV, JSONL, and metrics-JSON codecs.

The line format is fixed and bit-exact:

    t_ms,t_set,t_curr,err,duty,light,state,fault\\n

with decimal integers, state N or A, fault 0 or 1, ASCII only. Every line
must fit a 96-byte budget: a 9600 baud 8-N-1 link moves 960 bytes/s, so a
10 Hz logger gets 96 bytes per record. format_line asserts the budget at
emission and parse(format(r)) == r for every valid record.
"""

import json
from dataclasses import asdict

from .safety import ALARM_STATE, NORMAL_STATE, SafetyLevel
from .sim_engine import RunMetrics, TelemetryRecord

LINE_BUDGET_BYTES = 96

CSV_FIELDS = ("t_ms", "t_set", "t_curr", "err", "duty", "light", "state", "fault")
CSV_HEADER = ",".join(CSV_FIELDS) + "\n"


class TelemetryFormatError(ValueError):
    """Line does not match the telemetry format."""


def format_line(record: TelemetryRecord) -> str:
    """Serialize one record; raises if the line would blow the byte budget."""
    line = (
        f"{record.t_ms},{record.t_set},{record.t_curr},{record.error},"
        f"{record.duty},{record.light},{record.state.level.value},"
        f"{1 if record.adc_fault else 0}\n"
    )
    encoded = line.encode("ascii")
    if len(encoded) > LINE_BUDGET_BYTES:
        raise TelemetryFormatError(
            f"record serializes to {len(encoded)} bytes, over the "
            f"{LINE_BUDGET_BYTES}-byte line budget"
        )
    return line


def parse_line(line: str) -> TelemetryRecord:
    """Inverse of format_line."""
    parts = line.rstrip("\n").split(",")
    if len(parts) != 8:
        raise TelemetryFormatError(f"expected 8 fields, got {len(parts)}")
    try:
        t_ms, t_set, t_curr, err, duty, light = (int(p) for p in parts[:6])
    except ValueError as exc:
        raise TelemetryFormatError(f"non-integer field in {line!r}") from exc
    state_char, fault_char = parts[6], parts[7]
    if state_char == SafetyLevel.NORMAL.value:
        state = NORMAL_STATE
    elif state_char == SafetyLevel.ALARM.value:
        state = ALARM_STATE
    else:
        raise TelemetryFormatError(f"unknown safety state {state_char!r}")
    if fault_char not in ("0", "1"):
        raise TelemetryFormatError(f"fault flag must be 0 or 1, got {fault_char!r}")
    return TelemetryRecord(
        t_ms=t_ms,
        t_set=t_set,
        t_curr=t_curr,
        error=err,
        duty=duty,
        light=light,
        state=state,
        adc_fault=fault_char == "1",
    )


def write_csv(records, fp) -> None:
    """Header plus one line per record; byte-identical across reruns."""
    fp.write(CSV_HEADER)
    for rec in records:
        fp.write(format_line(rec))


def parse_csv(text: str) -> list[TelemetryRecord]:
    lines = text.splitlines()
    if not lines or lines[0] + "\n" != CSV_HEADER:
        raise TelemetryFormatError("missing or wrong CSV header")
    return [parse_line(line) for line in lines[1:] if line]


def record_to_obj(record: TelemetryRecord) -> dict:
    """JSON-ready dict; keys match the CSV columns."""
    return {
        "t_ms": record.t_ms,
        "t_set": record.t_set,
        "t_curr": record.t_curr,
        "err": record.error,
        "duty": record.duty,
        "light": record.light,
        "state": record.state.level.value,
        "fault": 1 if record.adc_fault else 0,
    }


def write_jsonl(records, fp) -> None:
    for rec in records:
        fp.write(json.dumps(record_to_obj(rec), separators=(",", ":")) + "\n")


def metrics_to_json(metrics: RunMetrics) -> str:
    """Metrics as JSON; keys are exactly the RunMetrics field names."""
    return json.dumps(asdict(metrics), indent=2) + "\n"
