"""Acceptance suite: one test per numbered criterion, stated tolerances.

Each test prints a single ``[acceptance] criterion NN <name>: PASS|FAIL``
line (run pytest with ``-s`` to see the lines as they happen). Criteria 5
and 6 each contain one bound that exact arithmetic contradicts by a small
margin (the quoted percentage claims were rounded); they are asserted as
stated anyway and fail honestly rather than being loosened. See the README
for the measured values.
"""

import math
import subprocess
import sys
from contextlib import contextmanager

from phasekit.helstrom import d_err_small_alpha, p_err_optimal
from phasekit.model import Beamsplitter, PulsePair, homodyne_splitter, kennedy_angle
from phasekit.montecarlo import DecisionRule, TrialConfig, run_trials
from phasekit.receivers import (
    best_angle,
    p_beamsplitter_ml,
    p_homodyne_asymptotic,
    p_homodyne_generalized,
    p_kennedy_generalized,
    p_kennedy_asymptotic,
    p_min_pure,
)

GRID = (0.05, 0.1, 0.5, 1.0, 4.0)


@contextmanager
def criterion(num: int, name: str):
    try:
        yield
    except BaseException:
        print(f"[acceptance] criterion {num:02d} {name}: FAIL")
        raise
    print(f"[acceptance] criterion {num:02d} {name}: PASS")


def test_criterion_01_generalized_kennedy_anchor():
    with criterion(1, "generalized kennedy anchor"):
        p = p_kennedy_generalized(PulsePair(0.1, 1.0)).error_probability
        assert abs(p - 0.3476) <= 0.0005
        assert abs(p - 0.35) <= 0.01


def test_criterion_02_generalized_homodyne_anchor():
    with criterion(2, "generalized homodyne anchor"):
        p = p_homodyne_generalized(PulsePair(0.1, 1.0)).error_probability
        assert abs(p - 0.30) <= 0.01


def test_criterion_03_asymptotic_homodyne_anchor():
    with criterion(3, "asymptotic homodyne anchor"):
        p = p_homodyne_asymptotic(0.1).error_probability
        assert abs(p - 0.26) <= 0.005
        assert abs(p - 0.2636) <= 2e-4


def test_criterion_04_angle_family_optimum():
    with criterion(4, "angle family optimum"):
        _, res = best_angle(PulsePair(0.1, 10.0), grid_points=256)
        p_hom = p_homodyne_asymptotic(0.1).error_probability
        assert abs(res.error_probability - 0.25) <= 0.005
        assert res.error_probability < p_hom - 0.005


def test_criterion_05_reference_strength_kennedy():
    with criterion(5, "reference strength claims, kennedy"):
        d_base = p_kennedy_asymptotic(0.1).distinguishability
        r10 = p_kennedy_generalized(PulsePair(0.1, 10.0)).distinguishability / d_base
        r1 = p_kennedy_generalized(PulsePair(0.1, 1.0)).distinguishability / d_base
        assert r10 >= 0.99, f"beta2=10 ratio {r10:.6f}"
        assert r1 >= 0.93, f"beta2=1 ratio {r1:.6f} (exact value 0.924703)"


def test_criterion_06_reference_strength_homodyne():
    with criterion(6, "reference strength claims, homodyne"):
        d_base = p_homodyne_asymptotic(0.1).distinguishability
        r10 = p_homodyne_generalized(PulsePair(0.1, 10.0)).distinguishability / d_base
        r1 = p_homodyne_generalized(PulsePair(0.1, 1.0)).distinguishability / d_base
        assert 0.83 <= r1 <= 0.88, f"beta2=1 ratio {r1:.6f}"
        assert r10 >= 0.99, f"beta2=10 ratio {r10:.6f} (exact value 0.988774)"


def test_criterion_07_symmetry_of_generalized_receivers():
    with criterion(7, "signal reference symmetry"):
        for a2 in GRID:
            for b2 in GRID:
                ken = p_kennedy_generalized(PulsePair(a2, b2)).error_probability
                ken_swapped = p_kennedy_generalized(PulsePair(b2, a2)).error_probability
                assert abs(ken - ken_swapped) < 1e-10
                hom = p_homodyne_generalized(PulsePair(a2, b2)).error_probability
                hom_swapped = p_homodyne_generalized(PulsePair(b2, a2)).error_probability
                assert abs(hom - hom_swapped) < 1e-10


def test_criterion_08_family_contains_both_special_angles():
    with criterion(8, "family consistency at special angles"):
        for a2 in GRID:
            for b2 in GRID:
                pair = PulsePair(a2, b2)
                ml = p_beamsplitter_ml(pair, homodyne_splitter()).error_probability
                hom = p_homodyne_generalized(pair).error_probability
                assert abs(ml - hom) <= 1e-12
                if b2 >= a2:
                    # the cancellation angle only exists on this half of the
                    # grid; the swapped pairs are covered by criterion 7
                    ml_ken = p_beamsplitter_ml(pair, kennedy_angle(pair)).error_probability
                    ken = p_kennedy_generalized(pair).error_probability
                    assert ml_ken <= ken + 1e-12


def test_criterion_09_gaussian_limit_of_homodyne_sum():
    with criterion(9, "gaussian limit of the count comparison"):
        strong = p_homodyne_generalized(PulsePair(0.1, 2000.0)).error_probability
        assert abs(strong - p_homodyne_asymptotic(0.1).error_probability) < 0.005


def test_criterion_10_monte_carlo_oracle():
    with criterion(10, "monte carlo oracle agreement"):
        for b2 in (1.0, 10.0):
            pair = PulsePair(0.1, b2)
            est = run_trials(
                TrialConfig(pair, kennedy_angle(pair), DecisionRule.KENNEDY_SINGLE_PORT,
                            trials=1_000_000, seed=101)
            )
            assert est.contains(p_kennedy_generalized(pair).error_probability)
            est = run_trials(
                TrialConfig(pair, homodyne_splitter(), DecisionRule.HOMODYNE_COMPARE,
                            trials=1_000_000, seed=102)
            )
            assert est.contains(p_homodyne_generalized(pair).error_probability)
            splitter = Beamsplitter(0.15 * math.pi)
            est = run_trials(
                TrialConfig(pair, splitter, DecisionRule.ML_JOINT,
                            trials=1_000_000, seed=103)
            )
            assert est.contains(p_beamsplitter_ml(pair, splitter).error_probability)


def test_criterion_11_optimal_bound_dominance_and_limit():
    with criterion(11, "optimal bound dominance and strong-reference limit"):
        for a2 in GRID:
            for b2 in GRID:
                pair = PulsePair(a2, b2)
                opt = p_err_optimal(pair).error_probability
                ken = p_kennedy_generalized(pair).error_probability
                hom = p_homodyne_generalized(pair).error_probability
                _, best = best_angle(pair, grid_points=64)
                assert opt <= min(hom, ken, best.error_probability) + 1e-9
        strong = p_err_optimal(PulsePair(0.1, 25.0)).error_probability
        assert abs(strong - p_min_pure(0.1).error_probability) <= 0.02
        assert abs(p_min_pure(0.1).error_probability - 0.2129) <= 2e-4


def test_criterion_12_weak_signal_cross_oracle():
    with criterion(12, "weak signal cross oracle"):
        ratio = d_err_small_alpha(PulsePair(1.0, 1.0)) / 2.0
        assert abs(ratio - 0.773) <= 0.002
        rels = []
        for a2 in (1e-2, 1e-3, 1e-4):
            exact = p_err_optimal(PulsePair(a2, 1.0)).distinguishability
            series = ratio * 2.0 * math.sqrt(a2)
            rels.append(abs(exact - series) / exact)
        assert rels[0] > rels[1] > rels[2]
        assert rels[1] < 0.05


def test_criterion_13_ratio_survey_range():
    with criterion(13, "distinguishability ratios between 75 and 95 percent"):
        pair = PulsePair(0.1, 1.0)
        ken_ratio = (
            p_kennedy_generalized(pair).distinguishability
            / p_kennedy_asymptotic(0.1).distinguishability
        )
        hom_ratio = (
            p_homodyne_generalized(pair).distinguishability
            / p_homodyne_asymptotic(0.1).distinguishability
        )
        opt_ratio = (
            p_err_optimal(pair).distinguishability / p_min_pure(0.1).distinguishability
        )
        for ratio in (ken_ratio, hom_ratio, opt_ratio):
            assert 0.75 <= ratio <= 0.95


def test_criterion_14_cli_determinism():
    with criterion(14, "cli determinism"):
        for args in (
            ("kennedy", "--alpha2", "0.1", "--beta2", "1"),
            ("montecarlo", "--alpha2", "0.1", "--beta2", "1", "--rule", "homodyne",
             "--trials", "20000", "--seed", "5"),
            ("figure", "--id", "5", "--beta2-grid", "0,1,4"),
        ):
            cmd = [sys.executable, "-m", "phasekit", *args]
            first = subprocess.run(cmd, capture_output=True)
            second = subprocess.run(cmd, capture_output=True)
            assert first.returncode == 0
            assert first.stdout == second.stdout
