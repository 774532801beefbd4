"""Discrete fixed-point PID with conditional-integration anti-windup and Smart Idle.

Error convention: error = current - setpoint in deci-degrees, so a positive
error means too hot and demands cooling. The output is a PWM compare value
in counts (0..40000 = 0..100% duty).

One step, in order:

1. error < 0: Smart Idle. Duty forced to 0, accumulator cleared, done.
2. Candidate accumulator = accumulator + error.
3. unclamped = kp*error + ki*candidate + kd*(error - last_error).
4. unclamped inside [0, 40000]: commit the candidate, output unclamped.
   Otherwise: keep the old accumulator (anti-windup) and clamp.
5. Remember error and duty for the next cycle.

The integral is a plain per-cycle sum (the 100 ms period is folded into ki)
and the derivative is the raw one-cycle error difference, unfiltered.
"""

from dataclasses import dataclass

from ._backend import kernels

PWM_MAX = 40000

# Kernel math runs in 64-bit integers; these bounds keep every
# intermediate product far from wrapping.
GAIN_LIMIT = 10**6
ERROR_LIMIT = 10**5


@dataclass(frozen=True)
class PidGains:
    """Tuning constants, in PWM counts per deci-degree (ki: per cycle)."""

    kp: int = 2500
    ki: int = 10
    kd: int = 500

    def __post_init__(self) -> None:
        for name, value in (("kp", self.kp), ("ki", self.ki), ("kd", self.kd)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if not 0 <= value <= GAIN_LIMIT:
                raise ValueError(f"{name}={value} outside [0, {GAIN_LIMIT}]")


DEFAULT_GAINS = PidGains()


@dataclass(frozen=True)
class PidState:
    """Controller memory carried between cycles."""

    integral_acc: int = 0
    last_error: int = 0
    last_output: int = 0


@dataclass(frozen=True)
class PidOutput:
    duty: int
    saturated: bool
    idle: bool
    unclamped: int  # diagnostic; 0 on idle steps, which never compute it


def compute_error(t_curr: int, t_set: int) -> int:
    """Loop error in deci-degrees: positive means cooling demanded."""
    return t_curr - t_set


def pid_step(state: PidState, gains: PidGains, error: int) -> tuple[PidState, PidOutput]:
    """Advance the controller one cycle. Pure: returns the new state."""
    if abs(error) > ERROR_LIMIT:
        raise ValueError(f"error {error} outside +/-{ERROR_LIMIT} deci-degrees")
    duty, acc, saturated, idle, unclamped = kernels.pid_step(
        state.integral_acc, state.last_error, gains.kp, gains.ki, gains.kd, error
    )
    return (
        PidState(integral_acc=acc, last_error=error, last_output=duty),
        PidOutput(duty=duty, saturated=saturated, idle=idle, unclamped=unclamped),
    )


def reset(state: PidState | None = None) -> PidState:
    """Zeroed controller memory."""
    return PidState()
