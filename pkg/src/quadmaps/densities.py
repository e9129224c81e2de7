"""Closed-form limit densities and the small statistical helpers used by
the Monte-Carlo harness.

``zeta`` is the joint limit density of the scaled contour heights at p
marked times and the p-1 minima in between; ``xi`` is the conditional
density of the scaled labels given those heights: independent centered
Gaussians whose variance is the corresponding (scaled) branch length.

Note on normalization: contour heights at fixed parity live on a lattice of
spacing 2 (not 1) in unscaled units, and zeta is the local-limit density
with respect to mesh (2n)^{-1/2}; for p = 1 it therefore integrates to 2
over x > 0, twice the plain marginal density.  Goodness-of-fit comparisons
normalize expected masses within the histogram window, which cancels the
constant.
"""

from __future__ import annotations

from math import erf, exp, pi, sqrt
from typing import Sequence

import numpy as np
from scipy import stats

__all__ = [
    "DensityError",
    "zeta",
    "xi",
    "zeta_marginal_p1",
    "wilson_interval",
    "chi_square_gof",
]


class DensityError(ValueError):
    """Dimension mismatch or out-of-domain evaluation point."""


def zeta(x: Sequence[float], m: Sequence[float], tau: Sequence[float]) -> float:
    """Joint limit density of scaled heights x_1..x_p at times tau_1..tau_p
    and inter-time minima m_1..m_{p-1}; zero outside the admissible cone
    (some relative rise or drop negative)."""
    x = [float(v) for v in x]
    m = [float(v) for v in m]
    tau = [float(v) for v in tau]
    p = len(x)
    if p < 1 or len(m) != p - 1 or len(tau) != p:
        raise DensityError(
            f"need |x| = p, |m| = p-1, |tau| = p; got {len(x)}, {len(m)}, {len(tau)}"
        )
    for i in range(p - 1):
        if tau[i] >= tau[i + 1]:
            raise DensityError("times must be strictly increasing")
    if tau[0] <= 0.0 or tau[-1] >= 1.0:
        raise DensityError("times must lie strictly inside (0, 1)")

    # relative rises gamma_i and drops beta_i around each marked time
    gamma = [x[0]] + [x[i + 1] - m[i] for i in range(p - 1)] + [0.0]
    beta = [0.0] + [x[i] - m[i] for i in range(p - 1)] + [x[p - 1]]
    if any(g < 0 for g in gamma) or any(b < 0 for b in beta):
        return 0.0
    if any(v < 0 for v in m):
        return 0.0

    bounds = [0.0] + tau + [1.0]
    out = 2.0 ** (2 * p) * (2.0 * pi) ** (-p / 2.0)
    for i in range(p + 1):
        dt = bounds[i + 1] - bounds[i]
        s = beta[i] + gamma[i]
        out *= s * exp(-(s * s) / (2.0 * dt)) / dt**1.5
    return out


def xi(lengths: Sequence[float], ks: Sequence[float]) -> float:
    """Product of centered Gaussian densities: label displacement k_i along
    a superedge of scaled length l_i has variance l_i."""
    lengths = [float(v) for v in lengths]
    ks = [float(v) for v in ks]
    if len(lengths) != len(ks):
        raise DensityError(f"got {len(lengths)} lengths but {len(ks)} displacements")
    if not lengths:
        raise DensityError("need at least one superedge")
    out = 1.0
    for l, k in zip(lengths, ks):
        if l <= 0.0:
            raise DensityError(f"superedge length {l} must be positive")
        out *= exp(-(k * k) / (2.0 * l)) / sqrt(2.0 * pi * l)
    return out


def zeta_marginal_p1(x: float, tau: float = 0.5) -> float:
    """Convenience scalar form of zeta for a single marked time."""
    return zeta([x], [], [tau])


def zeta_mass_p1(a: float, b: float, tau: float = 0.5) -> float:
    """Exact integral of zeta(., tau) over [a, b] for p = 1.

    With v = tau(1-tau) the antiderivative of c x^2 exp(-x^2/2v) is
    elementary; used to build expected histogram masses.
    """
    if a < 0 or b < a:
        raise DensityError("need 0 <= a <= b")
    v = tau * (1.0 - tau)
    c = 4.0 / sqrt(2.0 * pi) / v**1.5

    def antider(t: float) -> float:
        # integral of x^2 exp(-x^2 / 2v) from 0 to t
        return -v * t * exp(-(t * t) / (2.0 * v)) + v * sqrt(pi * v / 2.0) * erf(
            t / sqrt(2.0 * v)
        )

    return c * (antider(b) - antider(a))


def wilson_interval(successes: int, trials: int, z: float = 3.0) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion at z sigmas."""
    if trials <= 0:
        raise DensityError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def chi_square_gof(observed: np.ndarray, expected: np.ndarray) -> tuple[float, float]:
    """Chi-square statistic and p-value; expected is rescaled to the
    observed total so only the profile matters."""
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    if observed.shape != expected.shape:
        raise DensityError("observed/expected shape mismatch")
    if (expected <= 0).any():
        raise DensityError("expected counts must be positive")
    expected = expected * (observed.sum() / expected.sum())
    stat = float(((observed - expected) ** 2 / expected).sum())
    dof = len(observed) - 1
    return stat, float(stats.chi2.sf(stat, dof))
