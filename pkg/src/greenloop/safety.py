"""Supervisory alarm: compares the instantaneous error to a +/-5.0 C threshold.

Memoryless by design: no hysteresis, no latching, so the state may chatter
if the error sits on the boundary. "Exceeds" is strict: an error of exactly
50 deci-degrees (5.0 C) is still Normal; 51 trips the alarm.
"""

from dataclasses import dataclass
from enum import Enum


class SafetyLevel(Enum):
    NORMAL = "N"
    ALARM = "A"


class LedColor(Enum):
    GREEN = "green"
    RED = "red"


@dataclass(frozen=True)
class SafetyConfig:
    threshold_deci: int = 50

    def __post_init__(self) -> None:
        if self.threshold_deci <= 0:
            raise ValueError("safety threshold must be positive")


DEFAULT_SAFETY = SafetyConfig()


@dataclass(frozen=True)
class SafetyState:
    """Alarm level plus the indicator outputs it drives."""

    level: SafetyLevel
    led: LedColor
    buzzer_on: bool


NORMAL_STATE = SafetyState(SafetyLevel.NORMAL, LedColor.GREEN, False)
ALARM_STATE = SafetyState(SafetyLevel.ALARM, LedColor.RED, True)


def classify(error_deci: int, cfg: SafetyConfig = DEFAULT_SAFETY) -> SafetyState:
    """Alarm iff |error| strictly exceeds the threshold."""
    if abs(error_deci) > cfg.threshold_deci:
        return ALARM_STATE
    return NORMAL_STATE
