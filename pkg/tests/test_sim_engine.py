"""Closed-loop engine: cycle bookkeeping, the three bench scenarios,
fault injection, and the metrics operationalization."""

import pytest

from greenloop.safety import LedColor, SafetyLevel
from greenloop.signal_chain import Channel
from greenloop.sim_engine import (
    AdcFault,
    ControlLoop,
    Disturbance,
    LoopConfig,
    RunMetrics,
    Scenario,
    ScenarioError,
    SetpointCode,
    SetpointTemp,
    compute_metrics,
    run_scenario,
    scenario_disturbance,
    scenario_recovery,
    scenario_step_response,
)
from greenloop.plant import PlantParams
from greenloop.telemetry import format_line


@pytest.fixture(scope="module")
def cfg():
    return LoopConfig()


@pytest.fixture(scope="module")
def log_a(cfg):
    return run_scenario(cfg, scenario_step_response())


@pytest.fixture(scope="module")
def log_b(cfg):
    return run_scenario(cfg, scenario_disturbance())


@pytest.fixture(scope="module")
def log_c(cfg):
    return run_scenario(cfg, scenario_recovery())


class TestCycleBookkeeping:
    def test_sixty_seconds_is_exactly_600_records(self, log_a):
        records, _ = log_a
        assert len(records) == 600
        assert [r.t_ms for r in records] == list(range(0, 60000, 100))

    def test_duration_rounds_up_to_whole_cycles(self, cfg):
        scenario = Scenario(name="short", duration_ms=250)
        records, _ = run_scenario(cfg, scenario)
        assert [r.t_ms for r in records] == [0, 100, 200]

    def test_zero_duration_runs_no_cycles(self, cfg):
        records, metrics = run_scenario(cfg, Scenario(name="empty", duration_ms=0))
        assert records == []
        assert metrics == RunMetrics()

    def test_every_record_error_identity(self, log_a, log_b, log_c):
        for records, _ in (log_a, log_b, log_c):
            for rec in records:
                assert rec.error == rec.t_curr - rec.t_set

    def test_every_record_state_consistent(self, log_b):
        for rec in log_b[0]:
            if rec.state.level is SafetyLevel.ALARM:
                assert rec.state.led is LedColor.RED and rec.state.buzzer_on
            else:
                assert rec.state.led is LedColor.GREEN and not rec.state.buzzer_on

    def test_replay_is_byte_identical(self, cfg, log_a):
        again, _ = run_scenario(cfg, scenario_step_response())
        first = "".join(format_line(r) for r in log_a[0])
        second = "".join(format_line(r) for r in again)
        assert first == second


class TestStepResponseScenario:
    def test_shape(self):
        s = scenario_step_response()
        assert s.name == "step_response"
        assert s.events == ((5000, SetpointTemp(200)),)
        assert s.initial_setpoint_deci == 300
        assert s.duration_ms == 60000

    def test_idle_before_the_step(self, log_a):
        records, _ = log_a
        for rec in records:
            if rec.t_ms < 5000:
                assert rec.duty == 0
                assert rec.t_set == 300

    def test_full_duty_on_the_step_cycle(self, log_a):
        records, _ = log_a
        by_t = {r.t_ms: r for r in records}
        assert by_t[5000].t_set == 200
        assert by_t[5000].duty == 40000

    def test_metrics(self, log_a):
        _, metrics = log_a
        assert metrics.response_latency_cycles == 1
        assert metrics.time_to_full_duty_ms == 0
        assert metrics.undershoot_deci == 0
        assert metrics.idle_duty_violations == 0


class TestDisturbanceScenario:
    def test_setpoint_fixed_throughout(self, log_b):
        records, _ = log_b
        assert all(rec.t_set == 250 for rec in records)

    def test_idle_before_disturbance(self, log_b):
        records, _ = log_b
        assert all(rec.duty == 0 for rec in records if rec.t_ms < 5000)

    def test_error_eventually_exceeds_alarm_threshold(self, log_b):
        records, metrics = log_b
        assert max(rec.error for rec in records) > 50
        assert metrics.alarm_first_ms is not None

    def test_alarm_records_run_at_full_duty(self, log_b):
        records, _ = log_b
        alarmed = [rec for rec in records if rec.state.level is SafetyLevel.ALARM]
        assert alarmed
        assert all(rec.duty == 40000 for rec in alarmed)

    def test_saturation_held(self, log_b):
        _, metrics = log_b
        assert metrics.saturation_held

    def test_late_error_near_plant_equilibrium(self, log_b):
        # continuous fixed point at full fan sits ~10.4 C over the setpoint;
        # quantization parks the loop a hair below it
        records, _ = log_b
        assert 95 <= records[-1].error <= 105


class TestRecoveryScenario:
    def test_shape(self):
        s = scenario_recovery()
        assert (120_000, Disturbance(False)) in s.events
        assert s.duration_ms == 300_000

    def test_duty_zero_after_error_goes_negative_in_cooldown(self, log_c):
        # scoped to the cooldown: the pre-disturbance phase also reads a -1
        # error (quantization bias at temp == setpoint) and idles there
        records, _ = log_c
        seen_negative = False
        for rec in records:
            if rec.t_ms < 120_000:
                continue
            if seen_negative:
                assert rec.duty == 0
            if rec.error < 0:
                seen_negative = True

    def test_strong_fan_cooldown_actually_reaches_idle(self, cfg):
        # with the default weak fan the milli-degree deadband parks the
        # cooldown a couple of deci-degrees hot, so the negative-error branch
        # above is vacuous; a 2.0 /s fan drives the error negative for real
        params = PlantParams.from_rates(k_fan=2.0)
        scenario = Scenario(
            name="strongfan",
            duration_ms=400_000,
            events=((5_000, Disturbance(True)), (30_000, Disturbance(False))),
        )
        records, metrics = run_scenario(LoopConfig(plant=params), scenario)
        cooldown = [r for r in records if r.t_ms >= 30_000]
        idx = next(i for i, r in enumerate(cooldown) if r.error < 0)
        assert all(r.duty == 0 for r in cooldown[idx:])
        assert metrics.idle_duty_violations == 0

    def test_cooldown_duty_nonincreasing_on_strict_error_descents(self, log_c):
        # brute-force check over the produced log: wherever the error fell
        # strictly across three consecutive records and the controller was
        # neither saturated nor idle, the duty did not rise
        records, _ = log_c
        start = next(i for i, r in enumerate(records) if r.t_ms >= 120_000)
        for i in range(start + 2, len(records)):
            a, b, c = records[i - 2], records[i - 1], records[i]
            if a.error > b.error > c.error and 0 < b.duty < 40000 and 0 < c.duty < 40000:
                assert c.duty <= b.duty

    def test_no_idle_violations(self, log_c):
        _, metrics = log_c
        assert metrics.idle_duty_violations == 0


class TestSmartIdleLoop:
    def test_setpoint_above_temp_idles_forever(self, cfg):
        scenario = Scenario(
            name="idle", duration_ms=20_000, initial_temp_deci=250, initial_setpoint_deci=300
        )
        records, metrics = run_scenario(cfg, scenario)
        assert all(rec.duty == 0 for rec in records)
        assert metrics.idle_duty_violations == 0


class TestEvents:
    def test_event_applies_at_next_cycle_boundary(self, cfg):
        scenario = Scenario(
            name="late",
            duration_ms=1_000,
            initial_setpoint_deci=300,
            events=((250, SetpointTemp(210)),),
        )
        records, _ = run_scenario(cfg, scenario)
        by_t = {r.t_ms: r for r in records}
        assert by_t[200].t_set == 300
        assert by_t[300].t_set == 210

    def test_setpoint_code_event(self, cfg):
        scenario = Scenario(
            name="code",
            duration_ms=500,
            events=((0, SetpointCode(4095)),),
        )
        records, _ = run_scenario(cfg, scenario)
        assert records[0].t_set == 400

    def test_out_of_order_events_rejected(self, cfg):
        scenario = Scenario(
            name="bad",
            duration_ms=10_000,
            events=((5000, Disturbance(True)), (4000, Disturbance(False))),
        )
        with pytest.raises(ScenarioError):
            run_scenario(cfg, scenario)

    def test_event_beyond_duration_rejected(self, cfg):
        scenario = Scenario(
            name="bad", duration_ms=1_000, events=((2_000, Disturbance(True)),)
        )
        with pytest.raises(ScenarioError):
            run_scenario(cfg, scenario)

    def test_setpoint_outside_pot_range_rejected(self, cfg):
        scenario = Scenario(
            name="bad", duration_ms=1_000, events=((0, SetpointTemp(500)),)
        )
        with pytest.raises(ScenarioError):
            run_scenario(cfg, scenario)

    def test_runtime_duration_override_truncates_without_invalidating(self, cfg):
        # shrinking the runtime below an event's time skips the event but is
        # not a configuration error
        short = LoopConfig(duration_ms=1_000)
        records, _ = run_scenario(short, scenario_step_response())
        assert len(records) == 10
        assert all(rec.t_set == 300 for rec in records)


class TestFaultInjection:
    def test_temperature_fault_freezes_last_good_reading(self, cfg):
        scenario = Scenario(
            name="fault",
            duration_ms=30_000,
            events=(
                (5_000, Disturbance(True)),
                (10_000, AdcFault(Channel.TEMPERATURE, True)),
                (11_000, AdcFault(Channel.TEMPERATURE, False)),
            ),
        )
        records, _ = run_scenario(cfg, scenario)
        assert len(records) == 300  # the loop never stalls
        flagged = [rec for rec in records if rec.adc_fault]
        assert len(flagged) == 10
        assert [rec.t_ms for rec in flagged] == list(range(10_000, 11_000, 100))
        frozen = {rec.t_curr for rec in flagged}
        assert len(frozen) == 1  # held at the last good sample
        by_t = {r.t_ms: r for r in records}
        assert frozen == {by_t[9_900].t_curr}
        # the plant kept heating underneath: the first live reading jumps
        assert by_t[11_000].t_curr > by_t[10_900].t_curr

    def test_fault_on_first_cycle_freezes_initial_conditions(self, cfg):
        scenario = Scenario(
            name="fault0",
            duration_ms=1_000,
            events=((0, AdcFault(Channel.SETPOINT, True)),),
            initial_setpoint_deci=300,
        )
        records, _ = run_scenario(cfg, scenario)
        assert all(rec.adc_fault for rec in records)
        assert all(rec.t_set == 300 for rec in records)


class TestLightChannel:
    def test_light_column_is_seed_deterministic(self, cfg):
        records1, _ = run_scenario(cfg, scenario_step_response())
        records2, _ = run_scenario(LoopConfig(seed=0), scenario_step_response())
        assert [r.light for r in records1] == [r.light for r in records2]

    def test_different_seed_changes_light_noise(self):
        a, _ = run_scenario(LoopConfig(seed=1), scenario_step_response())
        b, _ = run_scenario(LoopConfig(seed=2), scenario_step_response())
        assert [r.light for r in a] != [r.light for r in b]

    def test_light_stays_near_dark_baseline(self, log_b):
        records, _ = log_b
        assert all(abs(rec.light - 2828) <= 8 for rec in records)


class TestMetrics:
    def test_empty_log_rejected(self):
        with pytest.raises(ValueError):
            compute_metrics([], scenario_step_response())

    def test_no_setpoint_event_yields_neutral_anchors(self, log_b):
        _, metrics = log_b
        assert metrics.response_latency_cycles == 0
        assert metrics.time_to_full_duty_ms == -1
        assert metrics.undershoot_deci == 0

    def test_quiet_run_has_no_alarm(self, cfg):
        records, metrics = run_scenario(
            cfg, Scenario(name="quiet", duration_ms=5_000, initial_setpoint_deci=252)
        )
        assert metrics.alarm_first_ms is None
        assert all(rec.state.level is SafetyLevel.NORMAL for rec in records)


class TestLoopConfigValidation:
    def test_period_must_match_substeps(self):
        with pytest.raises(ValueError):
            LoopConfig(control_period_ms=100, substeps=10, plant=PlantParams(dt_sub_ms=20))

    def test_negative_duration_rejected(self):
        with pytest.raises(ValueError):
            LoopConfig(duration_ms=-1)


class TestControlLoopReset:
    def test_reset_restores_initial_dynamics_but_keeps_pot(self):
        cfg = LoopConfig()
        scenario = Scenario(name="live", duration_ms=0, initial_temp_deci=250)
        loop = ControlLoop(cfg, scenario)
        loop.apply_event(Disturbance(True))
        loop.apply_event(SetpointTemp(300))
        for _ in range(50):
            loop.step()
        assert loop.plant.temp_milli > 25000
        loop.reset_dynamics()
        assert loop.plant.temp_milli == 25000
        assert not loop.plant.disturbance_on
        assert loop.pid.integral_acc == 0
        rec = loop.step()
        assert rec.t_set == 300  # operator's pot position survives a reset
