import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import phasekit.numerics as numerics
from phasekit.numerics import (
    EigensolverError,
    LogFactorialTable,
    Spectrum,
    SymmetricMatrix,
    eigenvalues_symmetric,
    gaussian_upper_tail,
    log_poisson_pmf,
    log_poisson_pmf_array,
    poisson_tail_cutoff,
    poisson_upper_tail,
)

mp.mp.dps = 40


# ---------------------------------------------------------------- factorials


def test_log_factorial_table_anchors():
    t = LogFactorialTable.build(16)
    assert t.values[0] == 0.0
    assert t.values[1] == 0.0
    assert t.values[3] == pytest.approx(math.log(6), rel=1e-15)
    assert t.max_n == 16


def test_log_factorial_table_monotone_and_difference():
    # the difference invariant is representation-limited: ln(n!) grows while
    # ln(n) stays O(1), so 1e-13 relative is honest only for moderate tables
    t = LogFactorialTable.build(512)
    v = t.values
    assert np.all(np.diff(v) >= 0.0)
    n = np.arange(1, 513)
    rel = np.abs((v[1:] - v[:-1]) - np.log(n)) / np.log(np.maximum(n, 2))
    assert rel.max() < 1e-13


def test_log_factorial_table_matches_loggamma():
    t = LogFactorialTable.build(5000)
    for k in (2, 17, 400, 5000):
        exact = mp.loggamma(k + 1)
        assert abs(t.values[k] - float(exact)) <= 4e-16 * float(exact) + 1e-15


def test_log_factorial_rejects_negative():
    with pytest.raises(ValueError):
        LogFactorialTable.build(-1)
    with pytest.raises(ValueError):
        numerics.log_factorial(-3)


# ------------------------------------------------------------------- poisson


def test_log_poisson_pmf_examples():
    assert log_poisson_pmf(0, 0.0) == 0.0
    assert log_poisson_pmf(0, 0.5) == pytest.approx(-0.5, rel=1e-15)
    # Poisson(1) at n=2 has mass e^-1 / 2
    assert log_poisson_pmf(2, 1.0) == pytest.approx(-1.0 - math.log(2.0), rel=1e-13)
    assert log_poisson_pmf(3, 0.0) == float("-inf")


def test_log_poisson_pmf_validation():
    with pytest.raises(ValueError):
        log_poisson_pmf(1, -0.1)
    with pytest.raises(ValueError):
        log_poisson_pmf(-1, 0.1)
    with pytest.raises(ValueError):
        log_poisson_pmf_array(4, -1.0)


@given(st.floats(min_value=1e-3, max_value=50.0), st.integers(min_value=0, max_value=60))
@settings(max_examples=60)
def test_log_poisson_pmf_matches_direct_formula(mean, n):
    expected = mp.mpf(n) * mp.log(mean) - mean - mp.loggamma(n + 1)
    assert log_poisson_pmf(n, mean) == pytest.approx(float(expected), rel=1e-12, abs=1e-12)


def _brute_force_cutoff(mean, tail_mass):
    # independent route: high-precision partial sums until the tail drops
    with mp.workdps(60):
        m = mp.mpf(mean)
        total = mp.mpf(0)
        n = 0
        while True:
            total += mp.e ** (-m) * m**n / mp.factorial(n)
            if 1 - total < tail_mass:
                return n
            n += 1


def test_poisson_tail_cutoff_examples():
    assert poisson_tail_cutoff(0.0, 1e-12) == 0
    assert poisson_tail_cutoff(1.0, 1e-12) == _brute_force_cutoff(1.0, 1e-12)
    assert poisson_tail_cutoff(10.0, 1e-12) >= 10
    assert poisson_tail_cutoff(10.0, 1e-12) == _brute_force_cutoff(10.0, 1e-12)


def test_poisson_tail_cutoff_validation():
    with pytest.raises(ValueError):
        poisson_tail_cutoff(-1.0, 1e-6)
    with pytest.raises(ValueError):
        poisson_tail_cutoff(1.0, 0.0)
    with pytest.raises(ValueError):
        poisson_tail_cutoff(1.0, 1.0)


@given(
    st.floats(min_value=0.0, max_value=40.0),
    st.floats(min_value=1e-14, max_value=0.5),
    st.floats(min_value=1.0, max_value=100.0),
)
@settings(max_examples=40)
def test_poisson_tail_cutoff_monotone_in_tail_mass(mean, tail, factor):
    smaller = tail / factor
    assert poisson_tail_cutoff(mean, smaller) >= poisson_tail_cutoff(mean, tail)


@pytest.mark.parametrize("mean", [0.1, 1.0, 10.0])
def test_poisson_pmf_sums_to_one(mean):
    cut = poisson_tail_cutoff(mean, 1e-14)
    total = float(np.exp(log_poisson_pmf_array(cut, mean)).sum())
    assert 1.0 - 1e-12 <= total <= 1.0


def test_poisson_upper_tail_matches_brute_force():
    with mp.workdps(60):
        m = mp.mpf("2.5")
        exact = 1 - mp.fsum(mp.e ** (-m) * m**n / mp.factorial(n) for n in range(9))
    assert poisson_upper_tail(2.5, 8) == pytest.approx(float(exact), rel=1e-10)
    assert poisson_upper_tail(0.0, 3) == 0.0


# ------------------------------------------------------------- gaussian tail


def test_gaussian_upper_tail_anchors():
    assert gaussian_upper_tail(0.0) == 0.5
    assert gaussian_upper_tail(float("inf")) == 0.0
    assert gaussian_upper_tail(float("-inf")) == 1.0
    x = 2.0 * math.sqrt(0.1)
    expected = mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2
    assert gaussian_upper_tail(x) == pytest.approx(float(expected), rel=1e-13)


@pytest.mark.parametrize("x", np.linspace(-8.0, 8.0, 20))
def test_gaussian_upper_tail_reference_points(x):
    expected = mp.erfc(mp.mpf(float(x)) / mp.sqrt(2)) / 2
    assert gaussian_upper_tail(float(x)) == pytest.approx(float(expected), rel=1e-12)


@given(st.floats(min_value=-6.0, max_value=6.0))
@settings(max_examples=80)
def test_gaussian_upper_tail_symmetry(x):
    assert gaussian_upper_tail(x) + gaussian_upper_tail(-x) == pytest.approx(1.0, abs=1e-12)


# --------------------------------------------------------------- eigensolver


def test_symmetric_matrix_validation():
    with pytest.raises(ValueError):
        SymmetricMatrix(np.array([[0.0, 1.0], [1.0 + 1e-15, 0.0]]))
    with pytest.raises(ValueError):
        SymmetricMatrix(np.zeros((0, 0)))
    with pytest.raises(ValueError):
        SymmetricMatrix(np.array([[np.inf]]))
    m = SymmetricMatrix(np.array([[1.0, 2.0], [2.0, 3.0]]))
    assert m.dimension == 2
    assert m.trace() == 4.0
    with pytest.raises(ValueError):
        m.values[0, 0] = 5.0


def test_eigenvalues_one_by_one():
    s = eigenvalues_symmetric(np.array([[3.5]]))
    assert s.eigenvalues.tolist() == [3.5]
    assert s.residuals.tolist() == [0.0]


@given(st.floats(min_value=-10.0, max_value=10.0))
@settings(max_examples=40)
def test_eigenvalues_off_diagonal_pair(a):
    s = eigenvalues_symmetric(np.array([[0.0, a], [a, 0.0]]))
    assert s.eigenvalues[0] == pytest.approx(-abs(a), abs=1e-14)
    assert s.eigenvalues[1] == pytest.approx(abs(a), abs=1e-14)


def _charpoly_roots(a):
    # Faddeev-LeVerrier coefficients, roots from the companion matrix: a
    # genuinely different route than any similarity-transform diagonalisation
    d = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, d + 1):
        m = a @ m + coeffs[-1] * np.eye(d)
        coeffs.append(-np.trace(a @ m) / k)
    return np.sort(np.roots(coeffs).real)


def test_eigenvalues_random_matrix_against_charpoly():
    rng = np.random.default_rng(2024)
    a = rng.standard_normal((6, 6))
    a = (a + a.T) / 2.0
    s = eigenvalues_symmetric(a)
    assert np.abs(s.eigenvalues - _charpoly_roots(a)).max() < 1e-9


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25)
def test_eigenvalues_invariant_under_permutation(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((5, 5))
    a = (a + a.T) / 2.0
    perm = rng.permutation(5)
    p = np.eye(5)[perm]
    w1 = eigenvalues_symmetric(a).eigenvalues
    w2 = eigenvalues_symmetric(p @ a @ p.T).eigenvalues
    assert np.abs(np.sort(w1) - np.sort(w2)).max() < 1e-9


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25)
def test_eigenvalues_preserve_trace_and_count(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    a = rng.standard_normal((d, d))
    a = (a + a.T) / 2.0
    s = eigenvalues_symmetric(a)
    assert len(s.eigenvalues) == d
    assert len(s.residuals) == d
    scale = max(1.0, abs(np.trace(a)))
    assert abs(s.trace() - np.trace(a)) < 1e-10 * scale


def test_eigenvalues_zero_matrix():
    s = eigenvalues_symmetric(np.zeros((4, 4)))
    assert np.all(s.eigenvalues == 0.0)
    assert s.sweeps == 0


def test_eigensolver_budget_exhaustion(monkeypatch):
    monkeypatch.setattr(numerics, "JACOBI_SWEEP_BUDGET", 0)
    with pytest.raises(EigensolverError) as err:
        eigenvalues_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert err.value.off_diagonal_norm > 0.0


def test_spectrum_absolute_sum():
    s = Spectrum(np.array([-2.0, 3.0]), np.zeros(2), 1)
    assert s.absolute_sum() == 5.0
    assert s.trace() == 1.0
