"""Deterministic digital twin of a fixed-point greenhouse fan control loop.

Integer PID with anti-windup and Smart Idle, quantized sensor/ADC/PWM
models, a +/-5.0 C safety supervisor, an exact-integer thermal plant, a
10 Hz scenario engine with run metrics, bit-exact telemetry formats, and a
live operator service.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .controller import DEFAULT_GAINS, PidGains, PidOutput, PidState, compute_error, pid_step
from .plant import PlantParams, PlantState, plant_step, sensed_temperature, set_disturbance
from .safety import SafetyConfig, SafetyLevel, SafetyState, classify
from .sim_engine import (
    BUILTIN_SCENARIOS,
    LoopConfig,
    RunMetrics,
    Scenario,
    TelemetryRecord,
    compute_metrics,
    run_scenario,
    scenario_disturbance,
    scenario_recovery,
    scenario_step_response,
)

__all__ = [
    "__version__",
    "backend_name",
    "DEFAULT_GAINS",
    "PidGains",
    "PidOutput",
    "PidState",
    "compute_error",
    "pid_step",
    "PlantParams",
    "PlantState",
    "plant_step",
    "sensed_temperature",
    "set_disturbance",
    "SafetyConfig",
    "SafetyLevel",
    "SafetyState",
    "classify",
    "BUILTIN_SCENARIOS",
    "LoopConfig",
    "RunMetrics",
    "Scenario",
    "TelemetryRecord",
    "compute_metrics",
    "run_scenario",
    "scenario_disturbance",
    "scenario_recovery",
    "scenario_step_response",
]
