# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

"""
Classical special functions behind the affine-ensemble kernels.

Polynomials are evaluated by recurrences and finite products, never by quotients of gamma
functions, so that large n + alpha does not overflow. Terminating hypergeometric series fall
back to the Jacobi recurrence wherever their alternating terms cancel badly. Semi-infinite
oracle integrals use Gauss-Laguerre rules whose node count is doubled until the value settles.
"""

import math
from typing import Callable, Optional, Union

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.special import roots_genlaguerre

from coreason_affine.exceptions import ConvergenceError, DomainError
from coreason_affine.utils.logger import logger

RealInput = Union[float, npt.ArrayLike]
RealOutput = Union[float, npt.NDArray[np.float64]]

# Largest ratio of the absolute-term sum to the absolute series sum accepted from direct summation.
SERIES_CONDITION = 100.0


class PolyParams(BaseModel):
    """
    Degree and parameters of a classical orthogonal polynomial.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0, description="Polynomial degree")
    alpha: float = Field(description="Laguerre/Jacobi parameter, > -1")
    beta: float = Field(default=0.0, description="Second Jacobi parameter")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        if not math.isfinite(v) or v <= -1.0:
            raise ValueError(f"alpha must be a finite real > -1, got {v}")
        return v


def _check_params(n: int, alpha: float) -> None:
    if n < 0:
        raise DomainError(f"degree must be nonnegative, got {n}")
    if not alpha > -1.0:
        raise DomainError(f"alpha must be > -1, got {alpha}")


def _as_output(values: npt.NDArray[np.float64], like: RealInput) -> RealOutput:
    if np.ndim(like) == 0:
        return float(values)
    return values


def laguerre(p: PolyParams, t: RealInput) -> RealOutput:
    """Generalized Laguerre polynomial L_n^alpha(t) by its three-term recurrence."""
    _check_params(p.n, p.alpha)
    x = np.asarray(t, dtype=np.float64)
    previous = np.ones_like(x)
    if p.n == 0:
        return _as_output(previous, t)
    current = 1.0 + p.alpha - x
    for k in range(1, p.n):
        previous, current = current, ((2 * k + 1 + p.alpha - x) * current - (k + p.alpha) * previous) / (k + 1)
    return _as_output(current, t)


def gamma_ratio(n: int, alpha: float) -> float:
    """Gamma(n+1+alpha) / (n! Gamma(1+alpha)) as the product of (alpha+k)/k."""
    _check_params(n, alpha)
    ratio = 1.0
    for k in range(1, n + 1):
        ratio *= (alpha + k) / k
    return ratio


def _jacobi_three_term(n: int, a: float, b: float, y: npt.NDArray[np.float64]) -> Optional[npt.NDArray[np.float64]]:
    """P_n^(a,b)(y) by the three-term recurrence in n; None when a leading coefficient vanishes."""
    previous = np.ones_like(y)
    if n == 0:
        return previous
    current = (a + 1.0) + (a + b + 2.0) * (y - 1.0) / 2.0
    for m in range(2, n + 1):
        s = 2 * m + a + b
        c1 = 2 * m * (m + a + b) * (s - 2)
        if c1 == 0.0:
            return None
        c2 = (s - 1) * (s * (s - 2) * y + a * a - b * b)
        c3 = 2 * (m + a - 1) * (m + b - 1) * s
        previous, current = current, (c2 * current - c3 * previous) / c1
    return current


def hyp2f1_terminating(a: float, n: int, c: float, x: RealInput) -> RealOutput:
    """
    Terminating Gauss series F(a, -n; c; x) = sum_k (a)_k (-n)_k x^k / (k! (c)_k), k = 0..n.

    The series is summed directly where it is well conditioned, i.e. where the sum of the
    absolute terms stays within SERIES_CONDITION of the absolute sum. Elsewhere the value is
    taken from the identity F(a, -n; c; x) = n! P_n^(c-1, a-c-n)(1 - 2x) / (c)_n with the
    Jacobi polynomial built by its three-term recurrence.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    for k in range(n):
        if c + k == 0.0:
            raise DomainError(f"(c)_k vanishes at k={k + 1} for c={c}")
    xs = np.array(x, dtype=np.float64, ndmin=1)
    total = np.ones_like(xs)
    magnitude = np.ones_like(xs)
    term = np.ones_like(xs)
    for k in range(1, n + 1):
        term = term * ((a + k - 1) * (k - 1 - n) / (k * (c + k - 1))) * xs
        total = total + term
        magnitude = magnitude + np.abs(term)
    ill = magnitude > SERIES_CONDITION * np.abs(total)
    if np.any(ill):
        polynomial = _jacobi_three_term(n, c - 1.0, a - c - n, 1.0 - 2.0 * xs[ill])
        if polynomial is None:
            logger.debug(f"Jacobi recurrence degenerates for a={a}, n={n}, c={c}; keeping the direct series")
        else:
            pochhammer = 1.0
            for k in range(1, n + 1):
                pochhammer *= (c - 1.0 + k) / k
            total[ill] = polynomial / pochhammer
    return _as_output(total.reshape(np.shape(x)), x)


def jacobi(p: PolyParams, x: RealInput) -> RealOutput:
    """Jacobi polynomial P_n^(alpha,beta)(x) through its terminating hypergeometric form."""
    _check_params(p.n, p.alpha)
    xs = np.asarray(x, dtype=np.float64)
    series = hyp2f1_terminating(p.n + p.alpha + p.beta + 1.0, p.n, 1.0 + p.alpha, (1.0 - xs) / 2.0)
    return _as_output(gamma_ratio(p.n, p.alpha) * np.asarray(series), x)


def jacobi_recurrence(p: PolyParams, x: RealInput) -> RealOutput:
    """Jacobi polynomial by the standard three-term recurrence in n."""
    _check_params(p.n, p.alpha)
    xs = np.asarray(x, dtype=np.float64)
    values = _jacobi_three_term(p.n, p.alpha, p.beta, xs)
    if values is None:
        raise DomainError(f"Jacobi recurrence degenerates for alpha={p.alpha}, beta={p.beta}")
    return _as_output(values, x)


def gauss_laguerre_integral(
    g: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    alpha: float = 0.0,
    scale: float = 1.0,
    rtol: float = 1e-10,
    atol: float = 1e-13,
    n_start: int = 8,
    n_max: int = 128,
) -> float:
    """
    Integral of g(t) t^alpha e^(-scale t) over (0, inf).

    The generalized Gauss-Laguerre node count starts at `n_start` and doubles until two
    successive values differ by less than rtol * I_abs + atol, where I_abs is the rule applied
    to |g|. Integrals that cancel to zero, such as orthogonality relations, therefore settle
    at the rounding level of their integrand rather than of their value.
    """
    previous = None
    n = n_start
    history = []
    while n <= n_max:
        nodes, weights = roots_genlaguerre(n, alpha)
        samples = weights * np.real(g(nodes / scale))
        normalizer = scale ** (alpha + 1.0)
        value = float(np.sum(samples)) / normalizer
        magnitude = float(np.sum(np.abs(samples))) / normalizer
        history.append(value)
        if previous is not None and abs(value - previous) <= rtol * magnitude + atol:
            return value
        previous = value
        n *= 2
    raise ConvergenceError(
        f"Gauss-Laguerre rule did not settle by {n_max} nodes",
        diagnostics={"iterates": history, "alpha": alpha, "scale": scale},
    )


def laguerre_inner_product(n: int, m: int, alpha: float) -> float:
    """Integral of L_n^alpha L_m^alpha t^alpha e^(-t) over (0, inf)."""
    pn = PolyParams(n=n, alpha=alpha)
    pm = PolyParams(n=m, alpha=alpha)
    return gauss_laguerre_integral(lambda t: np.asarray(laguerre(pn, t)) * np.asarray(laguerre(pm, t)), alpha=alpha)


def weighted_norm_integral(n: int, alpha: float) -> float:
    """Integral of t^(alpha-1) e^(-2t) L_n^alpha(2t)^2 over (0, inf); requires alpha > 0."""
    if not alpha > 0.0:
        raise DomainError(f"the weighted norm integral diverges for alpha={alpha}")
    p = PolyParams(n=n, alpha=alpha)
    return gauss_laguerre_integral(lambda t: np.asarray(laguerre(p, 2.0 * t)) ** 2, alpha=alpha - 1.0, scale=2.0)
