"""Transducer and converter models between physical quantities and loop integers.

Everything the controller sees is an integer: temperatures are deci-degrees
Celsius (1 unit = 0.1 C), converter outputs are 12-bit codes, fan commands
are PWM compare counts out of 40000. This module holds the transfer
functions at those boundaries:

- 12-bit ADC quantization over a 0..3300 mV input range (floor, like a SAR
  converter truncating the residue),
- the TMP36 channel (500 mV at 0 C, 10 mV per degree; in millivolts the
  decode is simply V - 500 deci-degrees) and its inverse so the simulated
  plant can feed the ADC,
- the setpoint potentiometer mapped onto 20.0..40.0 C,
- an NTE3100-style infrared channel that is logged but never controls
  anything,
- PWM duty counts to an exact duty fraction,
- a single-shot conversion model with the 10 ms watchdog timeout.

Decodes round half-up (toward +inf) so quantization error is centered;
all functions are exact integer/rational arithmetic and total over their
stated domains.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

ADC_MAX_CODE = 4095
ADC_FULL_SCALE_MV = 3300
ADC_LEVELS = 4096

PWM_MAX = 40000

TMP36_OFFSET_MV = 500
TMP36_MIN_DECI = -500
TMP36_MAX_DECI = 2800

POT_MIN_DECI = 200
POT_MAX_DECI = 400

LIGHT_DARK_BASELINE = 2828  # flat dark-room reading of the IR channel
LIGHT_FULL_IR_CODE = 3900  # model's code at full IR illumination
LIGHT_NOISE_SPAN = 8  # seeded noise is uniform in [-8, +8] codes

TIMEOUT_BUDGET_MS = 10

_U64 = (1 << 64) - 1


class Channel(Enum):
    """The three analog inputs sampled each control cycle."""

    TEMPERATURE = "temperature"
    SETPOINT = "setpoint"
    LIGHT = "light"


def _round_half_up(num: int, den: int) -> int:
    """Round num/den (den > 0) to the nearest integer, halves toward +inf."""
    return (2 * num + den) // (2 * den)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"expected a number, got {type(value).__name__}")


def adc_quantize(voltage_mv) -> int:
    """Quantize a voltage in millivolts to a 12-bit code.

    floor(mV * 4096 / 3300), clamped to 4095 so the full-scale input maps
    onto the top code. Raises ValueError outside [0, 3300] mV: the converter
    model treats an out-of-range voltage as a broken upstream model, not a
    clampable reading.
    """
    v = _as_fraction(voltage_mv)
    if v < 0 or v > ADC_FULL_SCALE_MV:
        raise ValueError(f"voltage {voltage_mv} mV outside [0, {ADC_FULL_SCALE_MV}] mV")
    code = (v.numerator * ADC_LEVELS) // (v.denominator * ADC_FULL_SCALE_MV)
    return min(int(code), ADC_MAX_CODE)


def tmp36_code_to_temp(code: int) -> int:
    """Decode a temperature-channel ADC code to deci-degrees Celsius."""
    _check_code(code)
    return _round_half_up(code * ADC_FULL_SCALE_MV, ADC_LEVELS) - TMP36_OFFSET_MV


def temp_to_tmp36_code(temp_deci: int) -> int:
    """Encode a deci-degree temperature as the TMP36 channel's ADC code.

    Inverse path used by the plant model; round-trips within +/-1
    deci-degree over the sensor's full span.
    """
    if not TMP36_MIN_DECI <= temp_deci <= TMP36_MAX_DECI:
        raise ValueError(
            f"temperature {temp_deci} deci-C outside TMP36 span "
            f"[{TMP36_MIN_DECI}, {TMP36_MAX_DECI}]"
        )
    return adc_quantize(temp_deci + TMP36_OFFSET_MV)


def pot_code_to_setpoint(code: int) -> int:
    """Map a potentiometer ADC code onto the 20.0..40.0 C setpoint range."""
    _check_code(code)
    return POT_MIN_DECI + _round_half_up(code * (POT_MAX_DECI - POT_MIN_DECI), ADC_MAX_CODE)


def setpoint_to_pot_code(setpoint_deci: int) -> int:
    """Pot position whose decode equals the requested setpoint exactly.

    The pot grid is ~20x finer than a deci-degree, so the nearest code
    always decodes back to the requested value (checked exhaustively in the
    test suite).
    """
    if not POT_MIN_DECI <= setpoint_deci <= POT_MAX_DECI:
        raise ValueError(
            f"setpoint {setpoint_deci} deci-C outside [{POT_MIN_DECI}, {POT_MAX_DECI}]"
        )
    return _round_half_up(
        (setpoint_deci - POT_MIN_DECI) * ADC_MAX_CODE, POT_MAX_DECI - POT_MIN_DECI
    )


def _splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return z ^ (z >> 31)


def light_channel_sample(ambient_ir, noise_seed: int | None = None) -> int:
    """Sample the IR light channel: monitoring data only, never a control input.

    `ambient_ir` is normalized 0..1; 0 reproduces the dark baseline code
    2828, 1 gives the documented full-IR code 3900, linear in between.
    `noise_seed=None` disables noise; an integer seed adds a deterministic
    offset in [-8, +8] codes (splitmix64 hash, stable across platforms).
    """
    ir = _as_fraction(ambient_ir)
    if ir < 0 or ir > 1:
        raise ValueError(f"ambient_ir {ambient_ir} outside [0, 1]")
    span = LIGHT_FULL_IR_CODE - LIGHT_DARK_BASELINE
    scaled = ir * span
    code = LIGHT_DARK_BASELINE + _round_half_up(scaled.numerator, scaled.denominator)
    if noise_seed is not None:
        code += _splitmix64(noise_seed & _U64) % (2 * LIGHT_NOISE_SPAN + 1) - LIGHT_NOISE_SPAN
    return max(0, min(code, ADC_MAX_CODE))


@dataclass
class AdcChannelModel:
    """Behavioral model of one single-shot ADC channel.

    `pending_code` is the conversion result the hardware would deliver;
    `responsive=False` or a conversion slower than the 10 ms watchdog makes
    the read time out instead. The timeout budget is fixed: it mirrors the
    firmware's forced break out of the conversion-wait loop.
    """

    channel: Channel
    pending_code: int = 0
    responsive: bool = True
    conversion_delay_ms: int = 0
    timeout_budget_ms: int = TIMEOUT_BUDGET_MS


def adc_read_single_shot(model: AdcChannelModel, budget_ms: int | None = None) -> int | None:
    """Trigger one conversion; return the code, or None on timeout.

    A timeout is a value, not an error: it costs the full 10 ms of simulated
    time and the caller is expected to fall back to its last good sample.
    """
    budget = model.timeout_budget_ms if budget_ms is None else budget_ms
    if model.responsive and model.conversion_delay_ms <= budget:
        _check_code(model.pending_code)
        return model.pending_code
    return None


def duty_to_fraction(duty_counts: int) -> Fraction:
    """Exact duty fraction counts/40000 delivered to the fan."""
    if not 0 <= duty_counts <= PWM_MAX:
        raise ValueError(f"duty {duty_counts} outside [0, {PWM_MAX}] counts")
    return Fraction(duty_counts, PWM_MAX)


def _check_code(code: int) -> None:
    if not 0 <= code <= ADC_MAX_CODE:
        raise ValueError(f"ADC code {code} outside [0, {ADC_MAX_CODE}]")
