from dataclasses import replace

import pytest

from canforge import (
    AttackConfig,
    AttackKind,
    Label,
    LabelMode,
    MissingTapeError,
    ScenarioSpec,
    UnknownScenarioError,
    builtin_scenario,
    injection_count,
    run_scenario,
)
from canforge.scenarios import profile_from_dict, profile_to_dict, spec_from_dict, spec_to_dict
from canforge.traffic import DEFAULT_PROFILE

F, Z, R = AttackKind.FLOODING, AttackKind.FUZZY, AttackKind.REPLAY

# Frozen timeline table: total, boot_end, takeoff_end, landing_start,
# [(kind, start, end, interval)].
EXPECTED = {
    1: (180, 20, 50, 170, [(F, 50, 80, 0.0015), (F, 90, 120, 0.0015), (F, 130, 160, 0.0015)]),
    2: (180, 20, 50, 170, [(F, 50, 80, 0.005), (F, 90, 120, 0.005), (F, 130, 160, 0.005)]),
    3: (180, 20, 50, 170, [(Z, 50, 80, 0.0015), (Z, 90, 120, 0.0015), (Z, 130, 160, 0.0015)]),
    4: (180, 20, 50, 170, [(Z, 50, 80, 0.005), (Z, 90, 120, 0.005), (Z, 130, 160, 0.005)]),
    5: (210, 30, 60, 200, [(R, 60, 100, 0.005), (R, 110, 140, 0.005), (R, 160, 200, 0.005)]),
    6: (280, 30, 60, 270, [(R, 60, 100, 0.005), (R, 110, 150, 0.005), (R, 170, 210, 0.005), (R, 220, 260, 0.005)]),
    7: (240, 30, 50, 230, [(F, 50, 90, 0.005), (Z, 100, 130, 0.005), (F, 140, 180, 0.005), (Z, 190, 220, 0.005)]),
    8: (240, 30, 60, 230, [(Z, 60, 100, 0.005), (R, 110, 140, 0.005), (Z, 150, 190, 0.005), (R, 200, 230, 0.005)]),
    9: (270, 30, 60, 260, [(F, 60, 110, 0.005), (R, 120, 150, 0.005), (F, 160, 200, 0.005), (R, 210, 250, 0.005)]),
    10: (220, 30, 60, 210, [(F, 60, 110, 0.005), (Z, 120, 160, 0.005), (R, 170, 200, 0.005)]),
}


class TestBuiltins:
    @pytest.mark.parametrize("number", sorted(EXPECTED))
    def test_timeline_matches_frozen_table(self, number):
        spec = builtin_scenario(number)
        total, boot, takeoff, landing, attacks = EXPECTED[number]
        assert spec.total_time == total
        assert spec.boot_end == boot
        assert spec.takeoff_end == takeoff
        assert spec.landing_start == landing
        got = [(c.kind, c.start, c.end, c.interval) for c in spec.attacks]
        assert got == attacks

    @pytest.mark.parametrize("number", [0, 11, -3])
    def test_unknown_scenario(self, number):
        with pytest.raises(UnknownScenarioError):
            builtin_scenario(number)

    @pytest.mark.parametrize("number", sorted(EXPECTED))
    def test_windows_disjoint_and_inside_flight(self, number):
        spec = builtin_scenario(number)
        previous_end = spec.takeoff_end
        for cfg in spec.attacks:
            assert cfg.start >= previous_end
            assert cfg.end <= spec.landing_start
            previous_end = cfg.end


class TestSpecValidation:
    def test_window_outside_flight_rejected(self):
        with pytest.raises(ValueError):
            ScenarioSpec(
                scenario_id=99,
                total_time=100,
                boot_end=10,
                takeoff_end=20,
                landing_start=90,
                attacks=(AttackConfig(F, start=5, duration=10, interval=0.01),),
            )

    def test_overlapping_windows_rejected(self):
        with pytest.raises(ValueError):
            ScenarioSpec(
                scenario_id=99,
                total_time=100,
                boot_end=10,
                takeoff_end=20,
                landing_start=90,
                attacks=(
                    AttackConfig(F, start=30, duration=20, interval=0.01),
                    AttackConfig(F, start=45, duration=10, interval=0.01),
                ),
            )

    def test_unordered_boundaries_rejected(self):
        with pytest.raises(ValueError):
            ScenarioSpec(99, 100, 50, 20, 90)


def small_spec(label_mode=LabelMode.ORIGIN, attacks=None):
    if attacks is None:
        attacks = (
            AttackConfig(F, start=20, duration=5, interval=0.01),
            AttackConfig(Z, start=30, duration=5, interval=0.02),
        )
    return ScenarioSpec(
        scenario_id=90,
        total_time=50,
        boot_end=0,
        takeoff_end=10,
        landing_start=45,
        attacks=attacks,
        label_mode=label_mode,
    )


class TestRunScenario:
    def test_missing_tape(self):
        spec = small_spec(attacks=(AttackConfig(R, start=20, duration=5, interval=0.01),))
        with pytest.raises(MissingTapeError):
            run_scenario(spec, seed=1)

    def test_origin_attack_count_is_analytic(self):
        records = run_scenario(small_spec(), seed=1)
        attack = sum(1 for r in records if r.label is Label.ATTACK)
        expected = 2 * injection_count(5, 0.01) + 2 * injection_count(5, 0.02)
        assert attack == expected

    def test_zero_attacks_all_normal(self):
        records = run_scenario(small_spec(attacks=()), seed=1)
        assert records and all(r.label is Label.NORMAL for r in records)

    def test_window_labels_superset_of_origin(self):
        origin = run_scenario(small_spec(LabelMode.ORIGIN), seed=1)
        window = run_scenario(small_spec(LabelMode.WINDOW), seed=1)
        assert len(origin) == len(window)
        for o, w in zip(origin, window):
            assert o.frame == w.frame
            if o.label is Label.ATTACK:
                assert w.label is Label.ATTACK

    def test_no_attack_frames_outside_windows(self):
        spec = small_spec(LabelMode.ORIGIN)
        windows = spec.windows()
        for record in run_scenario(spec, seed=1):
            if record.label is Label.ATTACK:
                t = record.frame.timestamp
                assert any(s <= t < e for s, e in windows)

    def test_sorted_and_bounded(self):
        spec = small_spec()
        records = run_scenario(spec, seed=1)
        times = [r.frame.timestamp for r in records]
        assert times == sorted(times)
        assert 0 <= times[0] and times[-1] <= spec.total_time

    def test_deterministic(self):
        a = run_scenario(small_spec(), seed=4)
        b = run_scenario(small_spec(), seed=4)
        assert a == b

    def test_normal_before_attack_on_ties(self):
        records = run_scenario(small_spec(LabelMode.ORIGIN), seed=1)
        by_time = {}
        for r in records:
            by_time.setdefault(r.frame.timestamp, []).append(r.label)
        for labels in by_time.values():
            if Label.NORMAL in labels and Label.ATTACK in labels:
                assert labels.index(Label.ATTACK) > max(
                    i for i, l in enumerate(labels) if l is Label.NORMAL
                )

    def test_explicit_attack_seed_wins(self):
        base = (AttackConfig(Z, start=20, duration=2, interval=0.1, seed=77),)
        a = run_scenario(small_spec(attacks=base), seed=1)
        b = run_scenario(small_spec(attacks=base), seed=2)
        a_attack = [r.frame for r in a if r.label is Label.ATTACK]
        b_attack = [r.frame for r in b if r.label is Label.ATTACK]
        assert a_attack == b_attack

    def test_interface_name_propagates(self):
        records = run_scenario(small_spec(attacks=()), seed=1, interface="vcan9")
        assert all(r.interface == "vcan9" for r in records)

    def test_replay_scenario_runs_with_tape(self, bundled_tape):
        spec = small_spec(attacks=(AttackConfig(R, start=20, duration=5, interval=0.01),))
        records = run_scenario(spec, seed=1, tape=bundled_tape)
        attack = [r for r in records if r.label is Label.ATTACK]
        assert attack
        assert all(20 <= r.frame.timestamp < 25 for r in attack)


class TestConfigRoundTrip:
    @pytest.mark.parametrize("number", [1, 5, 10])
    def test_spec_dict_round_trip(self, number):
        spec = builtin_scenario(number)
        assert spec_from_dict(spec_to_dict(spec)) == spec

    def test_spec_with_overrides_round_trips(self):
        spec = replace(builtin_scenario(3), label_mode=LabelMode.ORIGIN)
        assert spec_from_dict(spec_to_dict(spec)) == spec

    def test_profile_dict_round_trip(self):
        assert profile_from_dict(profile_to_dict(DEFAULT_PROFILE)) == DEFAULT_PROFILE
