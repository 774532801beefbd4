"""First-order thermal model of the sensed environment.

Newton-cooling surrogate: the air passively relaxes toward ambient, the fan
adds duty-proportional coupling toward ambient (a fan can never push the
temperature past ambient, which is what makes the loop structurally
overshoot-free), and an optional heat-source disturbance pulls toward a
hotter source temperature:

    dT/dt = k_passive*(T_amb - T) + k_fan*duty*(T_amb - T) + k_src*(T_src - T)

Integration is explicit Euler with fixed 10 ms substeps. The state lives in
integer milli-degrees and every substep adds the round-half-up image of the
exact rational increment, so trajectories are bit-reproducible. The flip
side of that quantization is a deadband: once the per-substep drift rounds
to zero (rate * gap below half a milli-degree per substep) the state stops
moving, so very slow plants stall a small distance short of their
continuous-model equilibrium.

Rate constants are stored in integer nano-per-second units (1e-9 1/s
resolution), which keeps the kernels in fixed-width integer math.
"""

from dataclasses import dataclass, replace
from fractions import Fraction

from ._backend import kernels
from .signal_chain import PWM_MAX

NANO = 10**9
MILLI_PER_DECI = 100

# |temperature| beyond this is a misconfigured model, not a plant state
GUARD_LIMIT_MILLI = 200_000
GUARD_LIMIT_DECI = GUARD_LIMIT_MILLI // MILLI_PER_DECI

# dt_sub * (k_passive + k_fan + k_src) < 0.1, in (ms, nano/s) units
_STABILITY_LIMIT = 100_000_000_000


class PlantFault(RuntimeError):
    """Raised when the thermal state escapes the +/-200 C guard rail."""


def rate_to_nano(rate) -> int:
    """Convert a per-second rate to exact integer nano-per-second.

    Accepts int, Fraction, decimal string, or float (floats go through
    their decimal repr, so 0.02 means exactly 1/50). Rates needing more
    than 1e-9 resolution are rejected rather than silently rounded.
    """
    if isinstance(rate, float):
        rate = Fraction(repr(rate))
    frac = Fraction(rate) * NANO
    if frac.denominator != 1:
        raise ValueError(f"rate {rate} is not a multiple of 1e-9 per second")
    return int(frac)


@dataclass(frozen=True)
class PlantParams:
    """Thermal coupling constants. Defaults give a desk-scale test rig:
    weak passive losses, a fan worth 10x the passive coupling at full duty,
    and a 40.0 C disturbance source strong enough to overwhelm the fan.
    """

    t_amb_deci: int = 250
    t_src_deci: int = 400
    k_passive_nano: int = 20_000_000  # 0.02 /s
    k_fan_nano: int = 200_000_000  # 0.20 /s at 100% duty
    k_src_nano: int = 500_000_000  # 0.50 /s while disturbed
    dt_sub_ms: int = 10

    def __post_init__(self) -> None:
        for name in ("k_passive_nano", "k_fan_nano", "k_src_nano"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("t_amb_deci", "t_src_deci"):
            if abs(getattr(self, name)) > GUARD_LIMIT_DECI:
                raise ValueError(f"{name} outside the +/-{GUARD_LIMIT_DECI} deci guard rail")
        if self.dt_sub_ms <= 0:
            raise ValueError("dt_sub_ms must be positive")
        total = self.k_passive_nano + self.k_fan_nano + self.k_src_nano
        if self.dt_sub_ms * total >= _STABILITY_LIMIT:
            raise ValueError(
                "unstable discretization: dt_sub * (k_passive + k_fan + k_src) "
                "must stay below 0.1"
            )

    @classmethod
    def from_rates(
        cls,
        t_amb_deci: int = 250,
        t_src_deci: int = 400,
        k_passive=0.02,
        k_fan=0.2,
        k_src=0.5,
        dt_sub_ms: int = 10,
    ) -> "PlantParams":
        """Build params from per-second rates in any rational form."""
        return cls(
            t_amb_deci=t_amb_deci,
            t_src_deci=t_src_deci,
            k_passive_nano=rate_to_nano(k_passive),
            k_fan_nano=rate_to_nano(k_fan),
            k_src_nano=rate_to_nano(k_src),
            dt_sub_ms=dt_sub_ms,
        )


@dataclass(frozen=True)
class PlantState:
    temp_milli: int
    disturbance_on: bool = False

    @classmethod
    def from_deci(cls, temp_deci: int, disturbance_on: bool = False) -> "PlantState":
        return cls(temp_milli=temp_deci * MILLI_PER_DECI, disturbance_on=disturbance_on)


def _check_guard(temp_milli: int) -> None:
    if abs(temp_milli) > GUARD_LIMIT_MILLI:
        raise PlantFault(
            f"plant temperature {temp_milli} milli-C breached the "
            f"+/-{GUARD_LIMIT_MILLI} guard rail (misconfigured parameters?)"
        )


def _duty_fraction_to_counts(duty_fraction) -> int:
    if isinstance(duty_fraction, float):
        duty_fraction = Fraction(repr(duty_fraction))
    counts = Fraction(duty_fraction) * PWM_MAX
    if counts.denominator != 1 or not 0 <= counts.numerator <= PWM_MAX:
        raise ValueError(
            f"duty fraction {duty_fraction} is not a whole number of PWM counts in [0, 1]"
        )
    return counts.numerator


def advance(state: PlantState, params: PlantParams, duty_counts: int, substeps: int) -> PlantState:
    """Advance `substeps` Euler substeps under a held duty (zero-order hold)."""
    if not 0 <= duty_counts <= PWM_MAX:
        raise ValueError(f"duty {duty_counts} outside [0, {PWM_MAX}] counts")
    _check_guard(state.temp_milli)
    temp = kernels.plant_run_substeps(
        state.temp_milli,
        params.t_amb_deci * MILLI_PER_DECI,
        params.t_src_deci * MILLI_PER_DECI,
        params.k_passive_nano,
        params.k_fan_nano,
        params.k_src_nano,
        duty_counts,
        state.disturbance_on,
        params.dt_sub_ms,
        substeps,
    )
    _check_guard(temp)
    return replace(state, temp_milli=temp)


def plant_step(state: PlantState, params: PlantParams, duty_fraction, dt_ms: int | None = None) -> PlantState:
    """One Euler substep at the given duty fraction.

    `dt_ms`, when given, must equal the configured substep; the model is
    only defined on its own grid.
    """
    if dt_ms is not None and dt_ms != params.dt_sub_ms:
        raise ValueError(f"dt {dt_ms} ms does not match the {params.dt_sub_ms} ms substep")
    return advance(state, params, _duty_fraction_to_counts(duty_fraction), 1)


def set_disturbance(state: PlantState, on: bool) -> PlantState:
    """Toggle the external heat source; the temperature is untouched."""
    return replace(state, disturbance_on=on)


def sensed_temperature(state: PlantState) -> int:
    """Internal milli-degrees rounded (half-up) to sensor deci-degrees."""
    return (2 * state.temp_milli + MILLI_PER_DECI) // (2 * MILLI_PER_DECI)
