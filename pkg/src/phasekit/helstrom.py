"""Optimal discrimination of the phase-averaged two-mode states.

Averaging the common optical phase away leaves two mixed states whose
difference, written in the two-mode number basis, only connects states of
equal total photon number and of opposite signal-photon parity. The
difference operator is therefore assembled block by block in the total
photon number, each block a small real symmetric matrix, and the minimum
error probability follows from the trace norm

    P_err = 1/2 - 1/4 * sum over blocks of sum |eigenvalues|.

For weak signals the leading order in the signal amplitude admits a
closed-form spectrum and a fast series for the distinguishability; both
routes are provided so they can cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .model import DiscriminationResult, PulsePair
from .numerics import (
    NumericalResourceError,
    SymmetricMatrix,
    eigenvalues_symmetric,
    log_factorial,
    poisson_tail_cutoff,
    poisson_upper_tail,
)

__all__ = [
    "DEFAULT_TAIL_TOL",
    "DEFAULT_MAX_TOTAL_PHOTONS",
    "TRUNCATION_SAFETY_MARGIN",
    "TruncationCeilingError",
    "TruncatedOperator",
    "SmallAlphaMode",
    "SmallAlphaSpectrum",
    "build_rho_diff",
    "p_err_optimal",
    "small_alpha_spectrum",
    "small_alpha_series_cutoff",
    "d_err_small_alpha",
]

DEFAULT_TAIL_TOL = 1e-10

# beyond the Poisson cutoff in total photons; the operator's block masses
# are close to, but not exactly, that Poisson law
TRUNCATION_SAFETY_MARGIN = 10

DEFAULT_MAX_TOTAL_PHOTONS = 2048

_EPS = np.finfo(float).eps

SERIES_REL_TOL = 1e-12


class TruncationCeilingError(NumericalResourceError):
    """The required basis size exceeds the configured ceiling."""

    def __init__(self, needed: int, ceiling: int) -> None:
        super().__init__(
            f"truncation needs total photon number {needed} but the ceiling is "
            f"{ceiling}; raise max_total_photons (memory and time grow with it)"
        )
        self.needed = needed
        self.ceiling = ceiling


@dataclass(frozen=True)
class TruncatedOperator:
    """Difference of the two phase-averaged states on a truncated basis.

    ``blocks[N]`` acts on the span of |n_ref> x |n_sig> with
    n_ref + n_sig = N, indexed by n_ref = 0 .. N. Entries vanish unless the
    signal parities of bra and ket differ, so every diagonal (and the total
    trace) is exactly zero.
    """

    n_max: int
    blocks: tuple[SymmetricMatrix, ...]
    tail_bound: float

    def trace(self) -> float:
        return sum(b.trace() for b in self.blocks)

    @staticmethod
    def block_basis(n_total: int) -> list[tuple[int, int]]:
        return [(n_ref, n_total - n_ref) for n_ref in range(n_total + 1)]


def build_rho_diff(
    pair: PulsePair,
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_total_photons: int = DEFAULT_MAX_TOTAL_PHOTONS,
) -> TruncatedOperator:
    """Assemble the state difference blockwise in total photon number.

    The basis keeps total photon numbers up to the Poisson cutoff of
    alpha^2 + beta^2 at ``tail_tol`` plus a safety margin. Entry magnitudes
    are formed in log space and exponentiated once; all entries are
    non-negative, so no sign bookkeeping survives to the caller.
    """
    if not (0.0 < tail_tol < 1.0):
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    n_max = poisson_tail_cutoff(pair.total, tail_tol) + TRUNCATION_SAFETY_MARGIN
    if n_max > max_total_photons:
        raise TruncationCeilingError(n_max, max_total_photons)
    tail_bound = poisson_upper_tail(pair.total, n_max)
    blocks = []
    if pair.alpha2 == 0.0 or pair.beta2 == 0.0:
        # the parity factor kills every entry carrying no signal photons and
        # the reference weight kills the rest
        for n_total in range(n_max + 1):
            blocks.append(SymmetricMatrix(np.zeros((n_total + 1, n_total + 1))))
        return TruncatedOperator(n_max, tuple(blocks), tail_bound)
    log_alpha = 0.5 * math.log(pair.alpha2)
    log_beta = 0.5 * math.log(pair.beta2)
    prefactor = 0.5 * math.log(2.0) - 0.5 * pair.total
    for n_total in range(n_max + 1):
        n_ref = np.arange(n_total + 1)
        n_sig = n_total - n_ref
        log_u = (
            prefactor
            + n_ref * log_beta
            + n_sig * log_alpha
            - 0.5 * (log_factorial(n_ref) + log_factorial(n_sig))
        )
        u = np.exp(log_u)
        odd = (n_ref[:, None] + n_ref[None, :]) % 2 == 1
        blocks.append(SymmetricMatrix(np.where(odd, np.outer(u, u), 0.0)))
    return TruncatedOperator(n_max, tuple(blocks), tail_bound)


def p_err_optimal(
    pair: PulsePair,
    tail_tol: float = DEFAULT_TAIL_TOL,
    max_total_photons: int = DEFAULT_MAX_TOTAL_PHOTONS,
) -> DiscriminationResult:
    """Minimum error probability via the trace norm of the state difference.

    Blocks are diagonalised independently and their absolute eigenvalue
    sums combined in fixed block order. ``metadata['truncation_bound']``
    bounds the error in P from the discarded basis states plus the
    eigensolver's converged residuals.
    """
    operator = build_rho_diff(pair, tail_tol, max_total_photons)

    def block_term(block: SymmetricMatrix) -> tuple[float, float]:
        if not block.values.any():
            return 0.0, 0.0
        spectrum = eigenvalues_symmetric(block)
        off = float(np.sqrt((spectrum.residuals**2).sum()))
        slack = block.dimension * (off + _EPS * block.frobenius_norm())
        return spectrum.absolute_sum(), slack

    terms = parallel_map(block_term, operator.blocks)
    trace_norm = sum(t for t, _ in terms)
    solver_slack = sum(s for _, s in terms)
    p = 0.5 - 0.25 * trace_norm
    bound = 0.5 * operator.tail_bound + 0.25 * solver_slack
    return DiscriminationResult.from_error_probability(
        p,
        "helstrom_truncated",
        n_max=operator.n_max,
        tail_tol=tail_tol,
        truncation_bound=bound,
        trace_norm=trace_norm,
    )


@dataclass(frozen=True)
class SmallAlphaMode:
    """One +/- eigenvalue pair of the leading-order state difference."""

    n: int
    eigenvalue_plus: float
    eigenvalue_minus: float

    def vector(self, sign: int) -> tuple[tuple[tuple[int, int], float], ...]:
        """Eigenvector components as ((n_ref, n_sig), coefficient) pairs."""
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        w = 1.0 / math.sqrt(2.0)
        return (((self.n, 1), w), ((self.n + 1, 0), sign * w))


@dataclass(frozen=True)
class SmallAlphaSpectrum:
    """Leading-order spectrum: lambda_n = 2 beta^(2n+1) alpha e^(-beta^2) / sqrt(n!(n+1)!)."""

    modes: tuple[SmallAlphaMode, ...]
    n_cut: int

    def distinguishability(self) -> float:
        return sum(m.eigenvalue_plus for m in self.modes)


def _mode_magnitudes(pair: PulsePair, n_cut: int) -> np.ndarray:
    if pair.alpha2 == 0.0 or pair.beta2 == 0.0:
        return np.zeros(n_cut + 1)
    n = np.arange(n_cut + 1)
    logs = (
        math.log(2.0)
        + 0.5 * math.log(pair.alpha2)
        + (n + 0.5) * math.log(pair.beta2)
        - pair.beta2
        - 0.5 * (log_factorial(n) + log_factorial(n + 1))
    )
    return np.exp(logs)


def small_alpha_spectrum(pair: PulsePair, n_cut: int) -> SmallAlphaSpectrum:
    """Eigenvalue pairs of the weak-signal operator for n = 0 .. n_cut.

    The optimal measurement projects onto (|n,1> +/- |n+1,0>)/sqrt(2);
    those index pairs are exposed on each mode. Callers pick ``n_cut`` so
    the neglected series tail is immaterial (``small_alpha_series_cutoff``
    does that bookkeeping).
    """
    if n_cut < 0:
        raise ValueError(f"n_cut must be non-negative, got {n_cut}")
    lam = _mode_magnitudes(pair, n_cut)
    modes = tuple(
        SmallAlphaMode(n, float(lam[n]), -float(lam[n])) for n in range(n_cut + 1)
    )
    return SmallAlphaSpectrum(modes, n_cut)


def small_alpha_series_cutoff(beta2: float, rel_tol: float = SERIES_REL_TOL) -> int:
    """Index past which the weak-signal series tail is below rel_tol of the sum."""
    if beta2 < 0:
        raise ValueError(f"beta2 must be non-negative, got {beta2}")
    if not (0.0 < rel_tol < 1.0):
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if beta2 == 0.0:
        return 0
    margin = 12.0 * math.sqrt(beta2 + 1.0) + 30.0
    probe = PulsePair(1.0, beta2)
    while True:
        n_cut = int(beta2 + margin)
        terms = _mode_magnitudes(probe, n_cut)
        total = float(terms.sum())
        # term ratio beta^2 / sqrt((n+1)(n+2)) < 1 gives a geometric tail bound
        ratio = beta2 / math.sqrt((n_cut + 1.0) * (n_cut + 2.0))
        if ratio < 1.0 and float(terms[-1]) * ratio / (1.0 - ratio) < rel_tol * total:
            return n_cut
        margin *= 2.0


def d_err_small_alpha(pair: PulsePair) -> float:
    """Weak-signal distinguishability series, summed to relative 1e-12.

    Linear in the signal amplitude; dividing by 2*alpha gives the ratio to
    the infinite-reference value, which is what the optimal-measurement
    sweep tabulates.
    """
    if pair.alpha2 == 0.0 or pair.beta2 == 0.0:
        return 0.0
    n_cut = small_alpha_series_cutoff(pair.beta2)
    return float(_mode_magnitudes(pair, n_cut).sum())
