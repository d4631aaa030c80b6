"""Poisson log-weights, Gaussian tails, and a dense symmetric eigensolver.

Probability machinery works in log space so that products of Poisson
weights survive strong reference pulses, and returns to linear space only
for the final sums. Everything here is a pure function of its inputs; the
shared factorial table is built once and then only read.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalResourceError",
    "EigensolverError",
    "LogFactorialTable",
    "SymmetricMatrix",
    "Spectrum",
    "log_factorial",
    "log_poisson_pmf",
    "log_poisson_pmf_array",
    "poisson_tail_cutoff",
    "poisson_upper_tail",
    "gaussian_upper_tail",
    "eigenvalues_symmetric",
]

NEG_INF = float("-inf")

_SQRT2 = math.sqrt(2.0)
_EPS = np.finfo(float).eps

JACOBI_SWEEP_BUDGET = 100
JACOBI_STOP_FACTOR = 1e-12


class NumericalResourceError(RuntimeError):
    """A computation exceeded its configured numerical budget."""


class EigensolverError(NumericalResourceError):
    """Jacobi sweeps ran out before the off-diagonal norm converged."""

    def __init__(self, message: str, off_diagonal_norm: float) -> None:
        super().__init__(message)
        self.off_diagonal_norm = off_diagonal_norm


@dataclass(frozen=True)
class LogFactorialTable:
    """Cached values of ln(n!) for n = 0 .. max_n."""

    values: np.ndarray

    @classmethod
    def build(cls, max_n: int) -> "LogFactorialTable":
        if max_n < 0:
            raise ValueError(f"max_n must be non-negative, got {max_n}")
        values = np.empty(max_n + 1)
        values[0] = 0.0
        # compensated summation keeps each entry within ~1 ulp of ln(n!)
        total = 0.0
        carry = 0.0
        for n in range(1, max_n + 1):
            term = math.log(n) - carry
            acc = total + term
            carry = (acc - total) - term
            total = acc
            values[n] = total
        values.setflags(write=False)
        return cls(values)

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    def __call__(self, n):
        return self.values[n]


_shared_table = LogFactorialTable.build(256)


def log_factorial(n):
    """ln(n!) for a scalar or integer array, served from a shared table."""
    global _shared_table
    if np.min(n) < 0:
        raise ValueError("factorial argument must be non-negative")
    top = int(np.max(n))
    if top > _shared_table.max_n:
        _shared_table = LogFactorialTable.build(max(top, 2 * _shared_table.max_n))
    return _shared_table.values[n]


def log_poisson_pmf(n: int, mean: float) -> float:
    """ln P[Poisson(mean) = n]; a zero mean is a point mass at n = 0."""
    if mean < 0:
        raise ValueError(f"mean must be non-negative, got {mean}")
    if n < 0:
        raise ValueError(f"count must be non-negative, got {n}")
    if mean == 0.0:
        return 0.0 if n == 0 else NEG_INF
    return n * math.log(mean) - mean - float(log_factorial(n))


def log_poisson_pmf_array(n_max: int, mean: float) -> np.ndarray:
    """ln pmf at n = 0 .. n_max as one vector."""
    if mean < 0:
        raise ValueError(f"mean must be non-negative, got {mean}")
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    if mean == 0.0:
        out = np.full(n_max + 1, NEG_INF)
        out[0] = 0.0
        return out
    ns = np.arange(n_max + 1)
    return ns * math.log(mean) - mean - log_factorial(ns)


def _extended_pmf(mean: float, min_upper: int, log_floor: float) -> np.ndarray:
    """pmf values out to where the remaining mass is provably negligible."""
    margin = 10.0 * math.sqrt(mean + 1.0) + 40.0
    while True:
        upper = max(int(mean + margin), min_upper)
        logs = log_poisson_pmf_array(upper, mean)
        # geometric decay beyond `upper` bounds the neglected remainder
        if mean / (upper + 1.0) < 0.9 and logs[-1] < log_floor:
            return np.exp(logs)
        margin *= 2.0


def poisson_tail_cutoff(mean: float, tail_mass: float) -> int:
    """Smallest N with P[Poisson(mean) > N] < tail_mass."""
    if mean < 0:
        raise ValueError(f"mean must be non-negative, got {mean}")
    if not (0.0 < tail_mass < 1.0):
        raise ValueError(f"tail_mass must lie in (0, 1), got {tail_mass}")
    if mean == 0.0:
        return 0
    pmf = _extended_pmf(mean, 0, math.log(tail_mass) - 30.0)
    # summed from the far end so tiny tails keep full relative accuracy
    tails = np.cumsum(pmf[::-1])[::-1]
    return int(np.argmax(tails[1:] < tail_mass))


def poisson_upper_tail(mean: float, n: int) -> float:
    """P[Poisson(mean) > n], accurate even deep in the tail."""
    if mean < 0:
        raise ValueError(f"mean must be non-negative, got {mean}")
    if n < 0:
        raise ValueError(f"count must be non-negative, got {n}")
    if mean == 0.0:
        return 0.0
    floor = log_poisson_pmf(n, mean) - 60.0 if mean > 0 else -80.0
    pmf = _extended_pmf(mean, n + 20, floor)
    tail = float(np.cumsum(pmf[n + 1 :][::-1])[-1])
    decay = mean / (len(pmf) + 1.0)
    return tail + float(pmf[-1]) * decay / (1.0 - decay)


def gaussian_upper_tail(x: float) -> float:
    """P[Z > x] for a standard normal Z, via the complementary error function."""
    return 0.5 * math.erfc(x / _SQRT2)


@dataclass(frozen=True)
class SymmetricMatrix:
    """Real symmetric matrix; entries are validated to match exactly."""

    values: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("matrix must be square with dimension >= 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix must be exactly symmetric")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.values))

    def frobenius_norm(self) -> float:
        return float(np.sqrt((self.values * self.values).sum()))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with per-eigenvalue residuals."""

    eigenvalues: np.ndarray
    residuals: np.ndarray
    sweeps: int

    def trace(self) -> float:
        return float(self.eigenvalues.sum())

    def absolute_sum(self) -> float:
        return float(np.abs(self.eigenvalues).sum())


def _off_diagonal_norm(a: np.ndarray) -> float:
    # computed from the off-diagonal entries themselves: subtracting the
    # diagonal from the full Frobenius norm would cancel catastrophically
    od = a.copy()
    np.fill_diagonal(od, 0.0)
    return float(np.sqrt((od * od).sum()))


def eigenvalues_symmetric(matrix) -> Spectrum:
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm falls below
    1e-12 times the matrix norm; the budget is 100 sweeps (the matrices in
    this package converge in well under ten). Raises ``EigensolverError``
    with the residual attached if the budget runs out.
    """
    if isinstance(matrix, SymmetricMatrix):
        a = matrix.values.copy()
    else:
        a = SymmetricMatrix(np.asarray(matrix)).values.copy()
    d = a.shape[0]
    if d == 1:
        return Spectrum(a[0, :1].copy(), np.zeros(1), 0)
    fro = float(np.sqrt((a * a).sum()))
    if fro == 0.0:
        return Spectrum(np.zeros(d), np.zeros(d), 0)
    stop = JACOBI_STOP_FACTOR * fro
    # skipping pivots this small cannot leave the off-norm above `stop`
    skip = stop / (2.0 * d)
    sweeps = 0
    while _off_diagonal_norm(a) > stop:
        if sweeps >= JACOBI_SWEEP_BUDGET:
            off = _off_diagonal_norm(a)
            raise EigensolverError(
                f"Jacobi did not converge in {JACOBI_SWEEP_BUDGET} sweeps: "
                f"off-diagonal norm {off:.3e} vs target {stop:.3e}",
                off,
            )
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e100:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
    od = a.copy()
    np.fill_diagonal(od, 0.0)
    residuals = np.sqrt((od * od).sum(axis=1))
    eigenvalues = np.diagonal(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return Spectrum(eigenvalues[order], residuals[order], sweeps)
