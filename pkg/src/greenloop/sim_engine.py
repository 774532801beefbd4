"""Closed-loop scheduler, scenario definitions, and run metrics.

Every 100 ms control cycle, in this order: apply due scenario events,
single-shot sample the three ADC channels (a timed-out channel reuses the
previous cycle's code and flags the record), decode, compute the error, run
the PID, classify safety, advance the plant ten 10 ms substeps under the
freshly computed duty (zero-order hold), and append one telemetry record
stamped at the cycle start. Runs are fully deterministic for a given
config/scenario/seed, down to the seeded noise on the light channel.

Three built-in scenarios mirror the bench experiments: a setpoint step from
30.0 to 20.0 C, a heat-source disturbance against a fixed 25.0 C setpoint,
and the recovery after that disturbance is removed.
"""

from dataclasses import dataclass, field
from typing import Union

from . import plant as plant_mod
from . import signal_chain as sc
from .controller import DEFAULT_GAINS, PWM_MAX, PidGains, PidState, compute_error, pid_step
from .plant import PlantParams, PlantState
from .safety import DEFAULT_SAFETY, SafetyConfig, SafetyLevel, SafetyState, classify

CONTROL_PERIOD_MS = 100
SUBSTEPS_PER_CYCLE = 10


class ScenarioError(ValueError):
    """Invalid scenario definition; raised before any cycle runs."""


# --- scenario events -------------------------------------------------------


@dataclass(frozen=True)
class SetpointTemp:
    """Operator turns the pot to the position that decodes to this value."""

    deci: int


@dataclass(frozen=True)
class SetpointCode:
    """Operator pot lands on a raw ADC code."""

    code: int


@dataclass(frozen=True)
class Disturbance:
    """External heat source applied to (or removed from) the sensor."""

    on: bool


@dataclass(frozen=True)
class AdcFault:
    """Makes one ADC channel stop responding (or recover)."""

    channel: sc.Channel
    on: bool


Event = Union[SetpointTemp, SetpointCode, Disturbance, AdcFault]


@dataclass(frozen=True)
class Scenario:
    name: str
    duration_ms: int
    initial_temp_deci: int = 250
    initial_setpoint_deci: int = 250
    events: tuple[tuple[int, Event], ...] = ()


def validate_scenario(scenario: Scenario) -> None:
    """Reject malformed scenarios; event times are checked against the
    scenario's own duration (a shorter runtime override simply truncates)."""
    if not scenario.name:
        raise ScenarioError("scenario name must be nonempty")
    if scenario.duration_ms < 0:
        raise ScenarioError("duration_ms must be >= 0")
    if abs(scenario.initial_temp_deci) > plant_mod.GUARD_LIMIT_DECI:
        raise ScenarioError(
            f"initial_temp_deci {scenario.initial_temp_deci} outside the plant guard rail"
        )
    if not sc.POT_MIN_DECI <= scenario.initial_setpoint_deci <= sc.POT_MAX_DECI:
        raise ScenarioError(
            f"initial_setpoint_deci {scenario.initial_setpoint_deci} outside "
            f"[{sc.POT_MIN_DECI}, {sc.POT_MAX_DECI}]"
        )
    prev_t = 0
    for t_ms, event in scenario.events:
        if t_ms < prev_t:
            raise ScenarioError(f"event at {t_ms} ms is out of order")
        if t_ms > scenario.duration_ms:
            raise ScenarioError(f"event at {t_ms} ms lies beyond duration_ms")
        prev_t = t_ms
        if isinstance(event, SetpointTemp):
            if not sc.POT_MIN_DECI <= event.deci <= sc.POT_MAX_DECI:
                raise ScenarioError(
                    f"setpoint {event.deci} deci outside [{sc.POT_MIN_DECI}, {sc.POT_MAX_DECI}]"
                )
        elif isinstance(event, SetpointCode):
            if not 0 <= event.code <= sc.ADC_MAX_CODE:
                raise ScenarioError(f"setpoint code {event.code} outside [0, {sc.ADC_MAX_CODE}]")
        elif isinstance(event, (Disturbance, AdcFault)):
            pass
        else:
            raise ScenarioError(f"unknown event type {type(event).__name__}")


# --- telemetry -------------------------------------------------------------


@dataclass(frozen=True)
class TelemetryRecord:
    """One control-cycle snapshot, stamped at the cycle start."""

    t_ms: int
    t_set: int
    t_curr: int
    error: int
    duty: int
    light: int
    state: SafetyState
    adc_fault: bool


@dataclass(frozen=True)
class RunMetrics:
    """Operationalized performance summary of one run.

    `response_latency_cycles` counts cycles from the first setpoint-change
    event to the first duty that differs from the pre-event duty, inclusive
    (a same-cycle reaction counts as 1); 0 means no setpoint event or no
    response. `time_to_full_duty_ms` is -1 when full duty is never reached
    (or there is no setpoint event to anchor it)."""

    response_latency_cycles: int = 0
    time_to_full_duty_ms: int = -1
    undershoot_deci: int = 0
    alarm_first_ms: int | None = None
    idle_duty_violations: int = 0
    saturation_held: bool = True


# --- loop configuration ----------------------------------------------------


@dataclass(frozen=True)
class LoopConfig:
    control_period_ms: int = CONTROL_PERIOD_MS
    substeps: int = SUBSTEPS_PER_CYCLE
    gains: PidGains = DEFAULT_GAINS
    safety: SafetyConfig = DEFAULT_SAFETY
    plant: PlantParams = field(default_factory=PlantParams)
    duration_ms: int | None = None  # None: use the scenario's duration
    seed: int = 0

    def __post_init__(self) -> None:
        if self.control_period_ms != self.substeps * self.plant.dt_sub_ms:
            raise ValueError(
                f"control period {self.control_period_ms} ms must equal "
                f"substeps ({self.substeps}) x plant substep ({self.plant.dt_sub_ms} ms)"
            )
        if self.duration_ms is not None and self.duration_ms < 0:
            raise ValueError("duration_ms must be >= 0")


def effective_duration_ms(cfg: LoopConfig, scenario: Scenario) -> int:
    return scenario.duration_ms if cfg.duration_ms is None else cfg.duration_ms


# --- the loop itself -------------------------------------------------------


class ControlLoop:
    """Mutable closed-loop instance: channel models, controller state, plant.

    Single-owner: one caller advances it cycle by cycle. Both the batch
    scenario runner and the live operator service drive this same class so
    their trajectories are identical by construction.
    """

    def __init__(self, cfg: LoopConfig, scenario: Scenario):
        validate_scenario(scenario)
        self.cfg = cfg
        self.scenario = scenario
        self.gains = cfg.gains
        self.cycle = 0
        self.pid = PidState()
        self.plant = PlantState.from_deci(scenario.initial_temp_deci)
        self.pot_code = sc.setpoint_to_pot_code(scenario.initial_setpoint_deci)
        self.ambient_ir = 0  # dark baseline; the channel is log-only
        self.channels = {
            ch: sc.AdcChannelModel(channel=ch) for ch in sc.Channel
        }
        # Last-good codes seed the timeout fallback; a fault on the very
        # first cycle freezes the initial conditions.
        self.last_codes = {
            sc.Channel.TEMPERATURE: self._plant_code(),
            sc.Channel.SETPOINT: self.pot_code,
            sc.Channel.LIGHT: sc.LIGHT_DARK_BASELINE,
        }
        self.last_record: TelemetryRecord | None = None

    def _plant_code(self) -> int:
        sensed = plant_mod.sensed_temperature(self.plant)
        clamped = min(max(sensed, sc.TMP36_MIN_DECI), sc.TMP36_MAX_DECI)  # sensor rails
        return sc.temp_to_tmp36_code(clamped)

    def _light_seed(self) -> int:
        return (self.cfg.seed << 20) + self.cycle

    def apply_event(self, event: Event) -> None:
        if isinstance(event, SetpointTemp):
            self.pot_code = sc.setpoint_to_pot_code(event.deci)
        elif isinstance(event, SetpointCode):
            if not 0 <= event.code <= sc.ADC_MAX_CODE:
                raise ScenarioError(f"setpoint code {event.code} out of range")
            self.pot_code = event.code
        elif isinstance(event, Disturbance):
            self.plant = plant_mod.set_disturbance(self.plant, event.on)
        elif isinstance(event, AdcFault):
            self.channels[event.channel].responsive = not event.on
        else:
            raise ScenarioError(f"unknown event type {type(event).__name__}")

    def set_gains(self, gains: PidGains) -> None:
        self.gains = gains

    def reset_dynamics(self) -> None:
        """Fresh controller and plant; pot position and gains persist."""
        self.pid = PidState()
        self.plant = PlantState.from_deci(self.scenario.initial_temp_deci)
        for model in self.channels.values():
            model.responsive = True
        self.last_codes[sc.Channel.TEMPERATURE] = self._plant_code()

    def _sample(self, channel: sc.Channel, pending: int) -> tuple[int, bool]:
        model = self.channels[channel]
        model.pending_code = pending
        code = sc.adc_read_single_shot(model)
        if code is None:
            return self.last_codes[channel], True
        self.last_codes[channel] = code
        return code, False

    def step(self) -> TelemetryRecord:
        """Advance one control cycle and return its telemetry record."""
        t_ms = self.cycle * self.cfg.control_period_ms

        temp_code, fault_t = self._sample(sc.Channel.TEMPERATURE, self._plant_code())
        pot_code, fault_s = self._sample(sc.Channel.SETPOINT, self.pot_code)
        light_code, fault_l = self._sample(
            sc.Channel.LIGHT, sc.light_channel_sample(self.ambient_ir, self._light_seed())
        )
        adc_fault = fault_t or fault_s or fault_l

        t_curr = sc.tmp36_code_to_temp(temp_code)
        t_set = sc.pot_code_to_setpoint(pot_code)
        error = compute_error(t_curr, t_set)
        self.pid, out = pid_step(self.pid, self.gains, error)
        state = classify(error, self.cfg.safety)
        self.plant = plant_mod.advance(self.plant, self.cfg.plant, out.duty, self.cfg.substeps)

        record = TelemetryRecord(
            t_ms=t_ms,
            t_set=t_set,
            t_curr=t_curr,
            error=error,
            duty=out.duty,
            light=light_code,
            state=state,
            adc_fault=adc_fault,
        )
        self.cycle += 1
        self.last_record = record
        return record


def run_scenario(cfg: LoopConfig, scenario: Scenario) -> tuple[list[TelemetryRecord], RunMetrics]:
    """Execute a scenario to completion; returns the full log and metrics."""
    loop = ControlLoop(cfg, scenario)
    duration = effective_duration_ms(cfg, scenario)
    period = cfg.control_period_ms
    cycles = -(-duration // period)  # ceil
    records: list[TelemetryRecord] = []
    pending = list(scenario.events)
    idx = 0
    for cycle in range(cycles):
        now = cycle * period
        while idx < len(pending) and pending[idx][0] <= now:
            loop.apply_event(pending[idx][1])
            idx += 1
        records.append(loop.step())
    if not records:
        return records, RunMetrics()
    return records, compute_metrics(records, scenario, control_period_ms=period,
                                    alarm_threshold=cfg.safety.threshold_deci)


# --- built-in scenarios ----------------------------------------------------


def scenario_step_response() -> Scenario:
    """Setpoint step: idle at a 30.0 C target, then drop it to 20.0 C at t=5 s."""
    return Scenario(
        name="step_response",
        duration_ms=60_000,
        initial_temp_deci=250,
        initial_setpoint_deci=300,
        events=((5_000, SetpointTemp(200)),),
    )


def scenario_disturbance() -> Scenario:
    """Heat-source disturbance against a fixed 25.0 C setpoint from t=5 s."""
    return Scenario(
        name="disturbance",
        duration_ms=120_000,
        initial_temp_deci=250,
        initial_setpoint_deci=250,
        events=((5_000, Disturbance(True)),),
    )


def scenario_recovery() -> Scenario:
    """Disturbance run continued: the heat source is removed at t=120 s."""
    return Scenario(
        name="recovery",
        duration_ms=300_000,
        initial_temp_deci=250,
        initial_setpoint_deci=250,
        events=((5_000, Disturbance(True)), (120_000, Disturbance(False))),
    )


BUILTIN_SCENARIOS = {
    "step_response": scenario_step_response,
    "disturbance": scenario_disturbance,
    "recovery": scenario_recovery,
}


# --- metrics ---------------------------------------------------------------


def _setpoint_target(event: Event) -> int | None:
    if isinstance(event, SetpointTemp):
        return event.deci
    if isinstance(event, SetpointCode):
        return sc.pot_code_to_setpoint(event.code)
    return None


def compute_metrics(
    records: list[TelemetryRecord],
    scenario: Scenario,
    control_period_ms: int = CONTROL_PERIOD_MS,
    alarm_threshold: int = 50,
) -> RunMetrics:
    """Summarize a nonempty run log.

    Latency/full-duty/undershoot are anchored to the first setpoint-change
    event; scenarios without one report the neutral values (0 / -1 / 0)."""
    if not records:
        raise ValueError("metrics require a nonempty log")

    setpoint_events = [
        (t, _setpoint_target(ev))
        for t, ev in scenario.events
        if _setpoint_target(ev) is not None
    ]

    response_latency = 0
    time_to_full = -1
    undershoot = 0
    if setpoint_events:
        t_event = setpoint_events[0][0]
        final_target = setpoint_events[-1][1]
        pre_duty = 0
        for rec in records:
            if rec.t_ms >= t_event:
                break
            pre_duty = rec.duty
        post = [rec for rec in records if rec.t_ms >= t_event]
        for rec in post:
            if rec.duty != pre_duty:
                response_latency = (rec.t_ms - t_event) // control_period_ms + 1
                break
        for rec in post:
            if rec.duty == PWM_MAX:
                time_to_full = rec.t_ms - t_event
                break
        if post:
            undershoot = max(0, final_target - min(rec.t_curr for rec in post))

    alarm_first = next(
        (rec.t_ms for rec in records if rec.state.level is SafetyLevel.ALARM), None
    )
    idle_violations = sum(1 for rec in records if rec.error < 0 and rec.duty > 0)
    saturation_held = all(
        rec.duty == PWM_MAX for rec in records if rec.error > alarm_threshold
    )

    return RunMetrics(
        response_latency_cycles=response_latency,
        time_to_full_duty_ms=time_to_full,
        undershoot_deci=undershoot,
        alarm_first_ms=alarm_first,
        idle_duty_violations=idle_violations,
        saturation_held=saturation_held,
    )
