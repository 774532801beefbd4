"""Alarm classifier: boundary pinned by exhaustive sweep over the deci grid."""

import pytest

from greenloop.safety import (
    ALARM_STATE,
    LedColor,
    NORMAL_STATE,
    SafetyConfig,
    SafetyLevel,
    classify,
)


def test_zero_error_is_normal():
    state = classify(0)
    assert state.level is SafetyLevel.NORMAL
    assert state.led is LedColor.GREEN
    assert not state.buzzer_on


@pytest.mark.parametrize("error", [51, -51])
def test_just_over_threshold_alarms(error):
    state = classify(error)
    assert state.level is SafetyLevel.ALARM
    assert state.led is LedColor.RED
    assert state.buzzer_on


def test_exactly_at_threshold_is_normal():
    # "exceeds" is strict: 5.0 C on the nose does not alarm
    assert classify(50) is NORMAL_STATE
    assert classify(-50) is NORMAL_STATE


def test_symmetry():
    for e in range(-600, 601):
        assert classify(e) == classify(-e)


def test_exhaustive_boundary():
    for e in range(-600, 601):
        expected = ALARM_STATE if abs(e) >= 51 else NORMAL_STATE
        assert classify(e) is expected


def test_state_field_consistency():
    for e in range(-600, 601):
        s = classify(e)
        if s.level is SafetyLevel.NORMAL:
            assert s.led is LedColor.GREEN and not s.buzzer_on
        else:
            assert s.led is LedColor.RED and s.buzzer_on


def test_custom_threshold():
    cfg = SafetyConfig(threshold_deci=10)
    assert classify(10, cfg).level is SafetyLevel.NORMAL
    assert classify(11, cfg).level is SafetyLevel.ALARM


def test_threshold_must_be_positive():
    with pytest.raises(ValueError):
        SafetyConfig(threshold_deci=0)
