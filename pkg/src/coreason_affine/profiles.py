# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import math
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.interpolate import CubicSpline
from scipy.special import gammaln

from coreason_affine.exceptions import DomainError
from coreason_affine.interfaces import FrequencyProfile
from coreason_affine.specfun import PolyParams, gauss_laguerre_integral, laguerre

# Rate of the e^(-2 xi) envelope of |profile|^2 for the Laguerre family.
MOMENT_SCALE = 2.0


class LaguerreProfile(FrequencyProfile):
    """
    The analytic mother profile xi^(alpha/2) e^(-xi) L_n^alpha(2 xi), without normalization.
    """

    def __init__(self, alpha: float, n: int) -> None:
        if alpha < 0.0:
            raise DomainError(f"alpha must be >= 0 for a Laguerre profile, got {alpha}")
        self.alpha = alpha
        self.n = n
        self._poly = PolyParams(n=n, alpha=alpha)

    def __call__(self, xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        x = np.asarray(xi, dtype=np.float64)
        xc = np.maximum(x, 0.0)
        values = xc ** (self.alpha / 2.0) * np.exp(-xc) * np.asarray(laguerre(self._poly, 2.0 * xc))
        return np.where(x > 0.0, values, 0.0).astype(np.complex128)

    @property
    def xi_max(self) -> float:
        return 40.0 + 2.0 * self.alpha + 4.0 * self.n

    @property
    def small_xi_exponent(self) -> float:
        return self.alpha / 2.0

    def norm_squared(self) -> float:
        # Gamma(n+alpha+1) / (n! 2^(alpha+1))
        return math.exp(gammaln(self.n + self.alpha + 1.0) - gammaln(self.n + 1.0)) / 2.0 ** (self.alpha + 1.0)


class SampledProfile(FrequencyProfile):
    """
    Profile interpolated by cubic splines in log(xi) through complex samples.

    Below the first sample the profile follows xi^p from the first value; above the last sample it is zero.
    """

    def __init__(self, xi: Sequence[float], values: Sequence[complex], decay_exponent: float) -> None:
        self.xi = np.asarray(xi, dtype=np.float64)
        self.values = np.asarray(values, dtype=np.complex128)
        self.decay_exponent = float(decay_exponent)
        log_xi = np.log(self.xi)
        self._real = CubicSpline(log_xi, self.values.real)
        self._imag = CubicSpline(log_xi, self.values.imag)
        self._norm_squared: Optional[float] = None

    def __call__(self, xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        x = np.asarray(xi, dtype=np.float64)
        out = np.zeros(x.shape, dtype=np.complex128)
        inside = (x >= self.xi[0]) & (x <= self.xi[-1])
        if np.any(inside):
            log_x = np.log(x[inside])
            out[inside] = self._real(log_x) + 1j * self._imag(log_x)
        below = (x > 0.0) & (x < self.xi[0])
        if np.any(below):
            out[below] = self.values[0] * (x[below] / self.xi[0]) ** self.decay_exponent
        return out

    @property
    def xi_max(self) -> float:
        return float(self.xi[-1])

    @property
    def small_xi_exponent(self) -> float:
        return self.decay_exponent

    def moment(self, power: float) -> float:
        """
        Integral of |profile(t)|^2 t^power over (0, inf).

        The small-xi power is moved into the Gauss-Laguerre weight, so the rule needs 2p + power > -1.
        """
        p = self.decay_exponent

        def integrand(t: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
            out = np.zeros_like(t)
            inside = t <= self.xi_max
            ti = t[inside]
            out[inside] = np.abs(self(ti)) ** 2 * ti ** (-2.0 * p) * np.exp(MOMENT_SCALE * ti)
            return out

        return gauss_laguerre_integral(integrand, alpha=2.0 * p + power, scale=MOMENT_SCALE, rtol=1e-7)

    def norm_squared(self) -> float:
        if self._norm_squared is None:
            self._norm_squared = self.moment(0.0)
        return self._norm_squared


def load_profile_samples(path: Path) -> Tuple[Tuple[float, ...], Tuple[complex, ...]]:
    """
    Reads a two-column (xi, value) or three-column (xi, re, im) text file.
    """
    try:
        data = np.loadtxt(path, ndmin=2)
    except ValueError as e:
        raise DomainError(f"profile file {path} is not a numeric table: {e}") from e
    if data.shape[1] == 2:
        values = data[:, 1].astype(np.complex128)
    elif data.shape[1] == 3:
        values = data[:, 1] + 1j * data[:, 2]
    else:
        raise DomainError(f"profile file {path} must have two or three columns, found {data.shape[1]}")
    return tuple(float(v) for v in data[:, 0]), tuple(complex(v) for v in values)


def sample_laguerre_profile(
    alpha: float, n: int, count: int = 256, lo: float = 1e-4, hi: float = 40.0
) -> Tuple[Tuple[float, ...], Tuple[complex, ...]]:
    """Samples the analytic mother profile on a log-spaced grid."""
    xi = np.geomspace(lo, hi, count)
    values = LaguerreProfile(alpha, n)(xi)
    return tuple(float(v) for v in xi), tuple(complex(v) for v in values)
