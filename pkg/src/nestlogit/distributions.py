"""Gumbel and positive stable distribution primitives.

The Gumbel distribution G(mu, beta) has CDF exp(-exp(-(x - mu)/beta)). The
positive stable distribution P(lambda), lambda in (0, 1), is the
nonnegative law with Laplace transform E[exp(-t Z)] = exp(-t^lambda); at
lambda = 1 it degenerates to the point mass at 1 and every routine here
treats that case exactly.

Sampling uses Kanter's representation, with the log of the draw assembled
in log space so extreme uniforms cannot overflow. Densities come from the
alternating power series in x^(-lambda k); its terms can grow before they
decay, so the evaluator tracks the largest intermediate term and warns
when cancellation has eaten the result.
"""

from __future__ import annotations

import math
import sys
import warnings

import numpy as np

from .errors import ConvergenceError, DomainError, PrecisionLossWarning
from .montecarlo import EstimateWithError, mean_with_error
from .streams import SeededStream

__all__ = [
    "EULER_GAMMA",
    "gumbel_inverse_cdf",
    "gumbel_sample",
    "gumbel_mgf",
    "stable_sample",
    "stable_log_sample",
    "stable_moment",
    "eta_moments",
    "eta_mgf",
    "stable_density_series",
    "stable_survival_series",
    "stable_density_half",
    "stable_product_check",
]

EULER_GAMMA = float(np.euler_gamma)

# Kanter's angle is drawn from (0, pi); clip away the endpoints where the
# log-sine terms are singular. The displaced mass is ~1e-12 of the support.
_ANGLE_EPS = 1e-12

_SERIES_BUDGET = 400
_CANCEL_RATIO = 1e12


def _check_lambda(lam: float, allow_one: bool) -> float:
    lam = float(lam)
    top = "(0, 1]" if allow_one else "(0, 1)"
    if not math.isfinite(lam) or lam <= 0.0 or lam > 1.0 or (lam == 1.0 and not allow_one):
        raise DomainError(f"lambda must lie in {top}, got {lam!r}")
    return lam


# ---------------------------------------------------------------------------
# Gumbel
# ---------------------------------------------------------------------------

def gumbel_inverse_cdf(u, mu: float = 0.0, beta: float = 1.0):
    """Quantile function of G(mu, beta): mu - beta*log(-log(u)).

    u may be a scalar or array in (0, 1). At u = 1/e the result is exactly
    mu, the location parameter, where the CDF takes the value 1/e.
    """
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise DomainError("u must lie strictly inside (0, 1)")
    out = mu - beta * np.log(-np.log(u))
    return float(out) if out.ndim == 0 else out


def gumbel_sample(stream: SeededStream, mu: float = 0.0, beta: float = 1.0, size=None):
    """Draw from G(mu, beta) by inverse CDF on a uniform draw."""
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    n = 1 if size is None else int(size)
    u = stream.rng.random(n)
    # Keep u off 0 exactly; 0 occurs with probability 2^-53 and would map
    # to -inf.
    np.clip(u, sys.float_info.min, np.nextafter(1.0, 0.0), out=u)
    out = mu - beta * np.log(-np.log(u))
    return float(out[0]) if size is None else out


def gumbel_mgf(t: float) -> float:
    """E[exp(t*eps)] = Gamma(1 - t) for eps ~ G(0, 1), defined for t < 1."""
    t = float(t)
    if t >= 1.0:
        raise DomainError(f"Gumbel MGF requires t < 1, got {t!r}")
    return math.gamma(1.0 - t)


# ---------------------------------------------------------------------------
# Positive stable sampling (Kanter)
# ---------------------------------------------------------------------------

def _kanter_log(rng: np.random.Generator, lam: float, n: int) -> np.ndarray:
    """log Z for n draws of Z ~ P(lam), 0 < lam < 1.

    Z = (a(U)/E)^((1-lam)/lam) with U uniform on (0, pi), E standard
    exponential and
        a(u) = sin((1-lam)u) * sin(lam*u)^(lam/(1-lam)) / sin(u)^(1/(1-lam)).
    Everything is assembled as log a(U) so neither factor can overflow.
    """
    u = rng.uniform(0.0, math.pi, n)
    np.clip(u, _ANGLE_EPS, math.pi - _ANGLE_EPS, out=u)
    e = rng.standard_exponential(n)
    np.maximum(e, sys.float_info.min, out=e)
    log_a = (
        np.log(np.sin((1.0 - lam) * u))
        + (lam / (1.0 - lam)) * np.log(np.sin(lam * u))
        - (1.0 / (1.0 - lam)) * np.log(np.sin(u))
    )
    return ((1.0 - lam) / lam) * (log_a - np.log(e))


def stable_log_sample(stream: SeededStream, lam: float, size=None):
    """log of a P(lam) draw; exact zeros when lam = 1 (point mass at 1)."""
    lam = _check_lambda(lam, allow_one=True)
    n = 1 if size is None else int(size)
    if lam == 1.0:
        out = np.zeros(n)
    else:
        out = _kanter_log(stream.rng, lam, n)
    return float(out[0]) if size is None else out


def stable_sample(stream: SeededStream, lam: float, size=None):
    """Draw from P(lam) via Kanter's representation; lam = 1 returns 1."""
    out = stable_log_sample(stream, lam, size=size)
    return math.exp(out) if size is None else np.exp(out)


# ---------------------------------------------------------------------------
# Moments and transforms
# ---------------------------------------------------------------------------

def stable_moment(lam: float, kappa: float) -> float:
    """Fractional moment E[Z^kappa] = Gamma(1 - kappa/lam)/Gamma(1 - kappa).

    Finite only for 0 < kappa < lam; integer and higher moments diverge.
    """
    lam = _check_lambda(lam, allow_one=True)
    kappa = float(kappa)
    if not 0.0 < kappa < lam:
        raise DomainError(f"kappa must lie in (0, lambda), got kappa={kappa!r}, lambda={lam!r}")
    return math.exp(math.lgamma(1.0 - kappa / lam) - math.lgamma(1.0 - kappa))


def eta_moments(lam: float) -> tuple[float, float]:
    """Mean and variance of eta = lam * log Z for Z ~ P(lam).

    eta is the non-Gumbel part of a unit Gumbel split as lam*eps + eta:
    E[eta] = (1 - lam)*gamma_E and var(eta) = (1 - lam^2)*pi^2/6.
    """
    lam = _check_lambda(lam, allow_one=True)
    return (1.0 - lam) * EULER_GAMMA, (1.0 - lam * lam) * math.pi**2 / 6.0


def eta_mgf(lam: float, t: float) -> float:
    """E[exp(t*eta)] = Gamma(1 - t)/Gamma(1 - lam*t), defined for t < 1."""
    lam = _check_lambda(lam, allow_one=True)
    t = float(t)
    if t >= 1.0:
        raise DomainError(f"eta MGF requires t < 1, got {t!r}")
    return math.exp(math.lgamma(1.0 - t) - math.lgamma(1.0 - lam * t))


# ---------------------------------------------------------------------------
# Density by series
# ---------------------------------------------------------------------------

def _alternating_series(lam: float, x: float, tol: float, gamma_shift: float) -> float:
    """Shared evaluator for the density (gamma_shift=1) and survival
    (gamma_shift=0) series in powers of x^(-lam).

    Term k has magnitude Gamma(lam*k + gamma_shift) * x^(-lam*k - gamma_shift)
    * |sin(k*pi*lam)| / (pi * k!), computed through lgamma so no
    intermediate factorial overflows. Stops once two consecutive terms fall
    below tol * (|sum| + tiny); raises ConvergenceError when the budget of
    400 terms runs out; warns PrecisionLossWarning when the largest
    intermediate term exceeded 1e12 times the final sum.
    """
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    log_x = math.log(x)
    tiny = sys.float_info.min
    total = 0.0
    largest = 0.0
    consecutive_small = 0
    converged = False

    for k in range(1, _SERIES_BUDGET + 1):
        s = math.sin(k * math.pi * lam)
        if s == 0.0:
            term = 0.0
        else:
            log_mag = (
                math.lgamma(lam * k + gamma_shift)
                - math.lgamma(k + 1.0)
                + math.log(abs(s))
                - (lam * k + gamma_shift) * log_x
                - math.log(math.pi)
            )
            if log_mag > 700.0:  # term would overflow a double
                raise ConvergenceError(
                    f"series terms overflow at term {k} for lambda={lam!r}, x={x!r}"
                )
            sign = 1.0 if (k % 2 == 1) == (s > 0.0) else -1.0
            term = sign * math.exp(log_mag)
        total += term
        if not math.isfinite(total):
            raise ConvergenceError(
                f"series overflowed at term {k} for lambda={lam!r}, x={x!r}"
            )
        largest = max(largest, abs(term))
        if abs(term) < tol * (abs(total) + tiny):
            consecutive_small += 1
            if consecutive_small == 2:
                converged = True
                break
        else:
            consecutive_small = 0

    if not converged:
        raise ConvergenceError(
            f"series did not converge within {_SERIES_BUDGET} terms "
            f"for lambda={lam!r}, x={x!r}"
        )
    if largest > _CANCEL_RATIO * abs(total):
        warnings.warn(
            f"cancellation of {largest:.3e} down to {total:.3e} left few "
            f"significant digits (lambda={lam!r}, x={x!r})",
            PrecisionLossWarning,
            stacklevel=3,
        )
    return total


def stable_density_series(lam: float, x: float, tol: float = 1e-12) -> float:
    """Density of P(lam) at x > 0 from the alternating series

        f(x) = (1/pi) * sum_{k>=1} (-1)^(k+1)/k! * sin(k*pi*lam)
               * Gamma(lam*k + 1) * x^(-lam*k - 1).

    Accurate where the terms stay comparable to the result; for small x
    the leading terms dwarf the density and a PrecisionLossWarning is
    issued once fewer than ~4 significant digits can survive.
    """
    lam = _check_lambda(lam, allow_one=False)
    return _alternating_series(lam, float(x), float(tol), gamma_shift=1.0)


def stable_survival_series(lam: float, x: float, tol: float = 1e-12) -> float:
    """P(Z > x) for Z ~ P(lam), by integrating the density series term by
    term: sum_{k>=1} (-1)^(k+1)/k! * sin(k*pi*lam) * Gamma(lam*k)
    * x^(-lam*k) / pi."""
    lam = _check_lambda(lam, allow_one=False)
    return _alternating_series(lam, float(x), float(tol), gamma_shift=0.0)


def stable_density_half(x: float) -> float:
    """Closed form at lam = 1/2: f(x) = x^(-3/2) exp(-1/(4x)) / (2 sqrt(pi))."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise DomainError(f"x must be positive, got {x!r}")
    return 0.5 / math.sqrt(math.pi) * x**-1.5 * math.exp(-0.25 / x)


# ---------------------------------------------------------------------------
# Composition check
# ---------------------------------------------------------------------------

def stable_product_check(
    stream: SeededStream, lam1: float, lam2: float, n_draws: int
) -> EstimateWithError:
    """Monte Carlo check of the composition law Z1 * Z2^(1/lam1) ~ P(lam1*lam2).

    Draws the product W and returns the estimated Laplace transform at 1,
    E[exp(-W)], whose exact value is exp(-1) whenever the law holds.
    """
    lam1 = _check_lambda(lam1, allow_one=True)
    lam2 = _check_lambda(lam2, allow_one=True)
    if n_draws <= 0:
        raise DomainError("n_draws must be positive")
    log_z1 = stable_log_sample(stream, lam1, size=n_draws)
    log_z2 = stable_log_sample(stream, lam2, size=n_draws)
    log_w = log_z1 + log_z2 / lam1
    return mean_with_error(np.exp(-np.exp(log_w)))
