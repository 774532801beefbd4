"""Line-oriented scenario file format.

    # comments and blank lines are allowed
    name step_response
    duration_ms 60000
    initial_temp_deci 250
    initial_setpoint_deci 300     (optional, default 250)
    at 5000 setpoint_deci 200
    at 20000 adc_fault_on temperature
    at 21000 adc_fault_off temperature

Headers come first; `at <t_ms> <event> [arg]` lines must be in
nondecreasing time order. Errors carry the offending line number.
serialize/parse round-trip exactly.
"""

from .signal_chain import Channel
from .sim_engine import (
    AdcFault,
    Disturbance,
    Event,
    Scenario,
    ScenarioError,
    SetpointCode,
    SetpointTemp,
    validate_scenario,
)

_REQUIRED_HEADERS = ("name", "duration_ms", "initial_temp_deci")
_OPTIONAL_HEADERS = ("initial_setpoint_deci",)

_CHANNEL_NAMES = {ch.value: ch for ch in Channel}


class ScenarioFormatError(ScenarioError):
    """Syntax or ordering error, with the line number in the message."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _parse_int(line_no: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScenarioFormatError(line_no, f"{what} must be an integer, got {text!r}") from None


def _parse_event(line_no: int, kind: str, arg: str | None) -> Event:
    def need_arg(what: str) -> str:
        if arg is None:
            raise ScenarioFormatError(line_no, f"{kind} needs a {what} argument")
        return arg

    def no_arg() -> None:
        if arg is not None:
            raise ScenarioFormatError(line_no, f"{kind} takes no argument")

    if kind == "setpoint_deci":
        return SetpointTemp(_parse_int(line_no, need_arg("deci-degree"), "setpoint"))
    if kind == "setpoint_code":
        return SetpointCode(_parse_int(line_no, need_arg("ADC code"), "code"))
    if kind == "disturbance_on":
        no_arg()
        return Disturbance(True)
    if kind == "disturbance_off":
        no_arg()
        return Disturbance(False)
    if kind in ("adc_fault_on", "adc_fault_off"):
        name = need_arg("channel")
        if name not in _CHANNEL_NAMES:
            raise ScenarioFormatError(
                line_no, f"unknown channel {name!r} (one of {sorted(_CHANNEL_NAMES)})"
            )
        return AdcFault(_CHANNEL_NAMES[name], kind == "adc_fault_on")
    raise ScenarioFormatError(line_no, f"unknown event {kind!r}")


def parse_scenario(text: str) -> Scenario:
    headers: dict[str, str] = {}
    events: list[tuple[int, Event]] = []
    last_t: int | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        key = fields[0]
        if key == "at":
            if len(fields) not in (3, 4):
                raise ScenarioFormatError(line_no, "expected: at <t_ms> <event> [arg]")
            t_ms = _parse_int(line_no, fields[1], "event time")
            if t_ms < 0:
                raise ScenarioFormatError(line_no, "event time must be >= 0")
            if last_t is not None and t_ms < last_t:
                raise ScenarioFormatError(
                    line_no, f"event at {t_ms} ms is earlier than the previous one ({last_t} ms)"
                )
            last_t = t_ms
            events.append((t_ms, _parse_event(line_no, fields[2], fields[3] if len(fields) == 4 else None)))
        elif key in _REQUIRED_HEADERS or key in _OPTIONAL_HEADERS:
            if events:
                raise ScenarioFormatError(line_no, f"header {key!r} must precede event lines")
            if key in headers:
                raise ScenarioFormatError(line_no, f"duplicate header {key!r}")
            if len(fields) != 2:
                raise ScenarioFormatError(line_no, f"expected: {key} <value>")
            headers[key] = fields[1]
        else:
            raise ScenarioFormatError(line_no, f"unknown directive {key!r}")

    for key in _REQUIRED_HEADERS:
        if key not in headers:
            raise ScenarioFormatError(0, f"missing required header {key!r}")

    scenario = Scenario(
        name=headers["name"],
        duration_ms=_parse_int(0, headers["duration_ms"], "duration_ms"),
        initial_temp_deci=_parse_int(0, headers["initial_temp_deci"], "initial_temp_deci"),
        initial_setpoint_deci=_parse_int(
            0, headers.get("initial_setpoint_deci", "250"), "initial_setpoint_deci"
        ),
        events=tuple(events),
    )
    validate_scenario(scenario)
    return scenario


def _event_line(t_ms: int, event: Event) -> str:
    if isinstance(event, SetpointTemp):
        return f"at {t_ms} setpoint_deci {event.deci}"
    if isinstance(event, SetpointCode):
        return f"at {t_ms} setpoint_code {event.code}"
    if isinstance(event, Disturbance):
        return f"at {t_ms} disturbance_{'on' if event.on else 'off'}"
    if isinstance(event, AdcFault):
        return f"at {t_ms} adc_fault_{'on' if event.on else 'off'} {event.channel.value}"
    raise ScenarioError(f"unknown event type {type(event).__name__}")


def serialize_scenario(scenario: Scenario) -> str:
    lines = [
        f"name {scenario.name}",
        f"duration_ms {scenario.duration_ms}",
        f"initial_temp_deci {scenario.initial_temp_deci}",
        f"initial_setpoint_deci {scenario.initial_setpoint_deci}",
    ]
    lines.extend(_event_line(t, ev) for t, ev in scenario.events)
    return "\n".join(lines) + "\n"
