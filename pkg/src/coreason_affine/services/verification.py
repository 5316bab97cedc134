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
Acceptance suite: every invariant of the package as a named numerical check, grouped by module.
"""

import math
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict
from scipy.special import gammaln

from coreason_affine.concentration import build_operator, traces
from coreason_affine.config import TOLERANCE_PROFILES, ToleranceProfile, get_settings
from coreason_affine.exceptions import AffineEnsembleError, DomainError
from coreason_affine.geometry import cayley_inv_array, disc_area, hyp_dist_array, mobius_array, rho_array
from coreason_affine.kernels import (
    closed_form_values,
    kernel_matrix,
    kernel_quadrature,
    maass_residual,
)
from coreason_affine.models import (
    HalfPlanePoint,
    HyperbolicDisc,
    KernelSpec,
    LaguerreMode,
    MaassLandau,
    MobiusMap,
)
from coreason_affine.quadrature import disc_grid, fit_lens_constant, halfplane_grid, integrate
from coreason_affine.sampler import batch_stats, make_generator
from coreason_affine.specfun import (
    PolyParams,
    gamma_ratio,
    hyp2f1_terminating,
    jacobi,
    jacobi_recurrence,
    laguerre_inner_product,
    weighted_norm_integral,
)
from coreason_affine.utils.logger import logger
from coreason_affine.variance import (
    asymptotic_constant,
    bounds_report,
    halfplane_integral,
    variance_double,
    variance_geometric,
    variance_trace,
)

ComplexArray = npt.NDArray[np.complex128]


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    module: str
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    profile: str
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def render(self) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"[{status}] {r.module}.{r.name}: value={r.value:.3e} tol={r.tolerance:.1e} {r.detail}"
            lines.append(line.rstrip())
        lines.append(f"{sum(r.passed for r in self.results)}/{len(self.results)} checks passed ({self.profile})")
        return "\n".join(lines)


class Check(NamedTuple):
    """
    A measurement compared as value <= tolerance, or value < tolerance when `exclusive`.
    Exact-arithmetic checks scale with the profile.
    """

    name: str
    tolerance: float
    run: Callable[[], float]
    scalable: bool = True
    exclusive: bool = False


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _maass(B: float, n: int) -> KernelSpec:
    return KernelSpec(variant=MaassLandau(B=B, n=n))


def _laguerre(alpha: float, n: int) -> KernelSpec:
    return KernelSpec(variant=LaguerreMode(alpha=alpha, n=n))


class VerificationSuite:
    """
    Runs the checks of one or more modules under a tolerance profile.
    """

    def __init__(self, profile: Optional[ToleranceProfile] = None, seed: int = 0, depth: Optional[int] = None) -> None:
        self.profile = profile or TOLERANCE_PROFILES["default"]
        self.seed = seed
        self.base_depth = get_settings().GRID_DEPTH if depth is None else depth
        self.depth = self.base_depth + self.profile.depth_bonus

    # Helpers

    def _rng(self, stream: int) -> np.random.Generator:
        return make_generator(self.seed + stream)

    def _points(self, rng: np.random.Generator, count: int) -> ComplexArray:
        return rng.uniform(-2.0, 2.0, count) + 1j * np.exp(rng.uniform(-1.0, 1.0, count))

    def _near_i(self, rng: np.random.Generator, count: int, radius: float = 0.4) -> ComplexArray:
        u = rng.uniform(0.0, radius, count) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, count))
        return np.asarray(cayley_inv_array(u))

    # specfun

    def _laguerre_orthogonality(self) -> float:
        worst = 0.0
        for alpha in (0.5, 2.0, 6.0):
            norms = [math.exp(gammaln(n + alpha + 1.0) - gammaln(n + 1.0)) for n in range(7)]
            for n in range(7):
                for m in range(n, 7):
                    value = laguerre_inner_product(n, m, alpha)
                    target = norms[n] if n == m else 0.0
                    worst = max(worst, abs(value - target) / math.sqrt(norms[n] * norms[m]))
        return worst

    def _weighted_norm(self) -> float:
        worst = 0.0
        for alpha in (0.5, 2.0, 6.0):
            for n in range(7):
                target = math.exp(gammaln(n + alpha + 1.0) - gammaln(n + 1.0)) / (2.0**alpha * alpha)
                worst = max(worst, _relative(weighted_norm_integral(n, alpha), target))
        return worst

    def _jacobi_forms(self) -> float:
        x = np.linspace(-1.0, 1.0, 41)
        worst = 0.0
        for alpha in (0.0, 0.5, 2.0, 6.0):
            for n in range(21):
                p = PolyParams(n=n, alpha=alpha)
                a = np.asarray(jacobi(p, x))
                b = np.asarray(jacobi_recurrence(p, x))
                worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0))))
        return worst

    def _chu_vandermonde(self) -> float:
        """F(n + alpha + 1, -n; 1 + alpha; 1) against (-1)^n n! / (1 + alpha)_n."""
        rng = self._rng(8)
        worst = 0.0
        for _ in range(50):
            n = int(rng.integers(0, 26))
            alpha = float(rng.uniform(0.0, 10.0))
            value = float(hyp2f1_terminating(n + alpha + 1.0, n, 1.0 + alpha, 1.0))  # type: ignore[arg-type]
            worst = max(worst, _relative(value, (-1.0) ** n / gamma_ratio(n, alpha)))
        return worst

    # geometry

    def _disc_area(self) -> float:
        worst = 0.0
        for R in (0.3, 0.5, 0.8):
            grid = disc_grid(HalfPlanePoint(x=0.0, s=1.0), R, self.depth)
            worst = max(worst, _relative(float(np.sum(grid.weights)), disc_area(R)))
        return worst

    def _measure_transport(self) -> float:
        grid = halfplane_grid(depth=self.depth)
        r_max = grid.region.R
        x, w = np.polynomial.legendre.leggauss(256)
        r = r_max * (x + 1.0) / 2.0
        wr = r_max * w / 2.0
        n_theta = 512
        theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
        u = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
        wu = (wr[:, None] * r[:, None] * 4.0 / (1.0 - r[:, None] ** 2) ** 2 * np.ones_like(theta)[None, :]).ravel()
        wu = wu * 2.0 * np.pi / n_theta
        z_disc = cayley_inv_array(u)

        worst = 0.0
        for z0 in (1j, 0.3 + 1.2j, -0.5 + 0.8j, 1.0 + 2.0j, 0.2 + 0.5j):

            def f(z: ComplexArray, z0: complex = z0) -> ComplexArray:
                return np.asarray(np.exp(-hyp_dist_array(z, z0) ** 2), dtype=np.complex128)

            worst = max(worst, _relative(integrate(f, grid), complex(np.sum(f(z_disc) * wu))))
        return worst

    def _rho_inverse(self) -> float:
        z = self._points(self._rng(1), 10_000)
        inverse = (-z.real + 1j) / z.imag
        return float(np.max(np.abs(rho_array(inverse, 1j) - rho_array(1j, z))))

    def _rho_product(self) -> float:
        rng = self._rng(2)
        z = self._points(rng, 10_000)
        w = self._points(rng, 10_000)
        product = z.real + z.imag * w.real + 1j * z.imag * w.imag
        z_inverse = (-z.real + 1j) / z.imag
        return float(np.max(np.abs(rho_array(product, 1j) - rho_array(z_inverse, w))))

    # kernels

    def _specs(self) -> List[KernelSpec]:
        return [
            _laguerre(6.0, 0),
            _laguerre(3.0, 2),
            _laguerre(1.0, 1),
            _maass(3.5, 3),
            _maass(2.75, 1),
            _laguerre(2.0, 20),
            _laguerre(6.0, 25),
            _maass(12.5, 10),
        ]

    def _diagonal(self) -> float:
        z = self._points(self._rng(3), 100)
        return max(float(np.max(np.abs(np.diag(kernel_matrix(s, z)) - 1.0))) for s in self._specs())

    def _hermitian(self) -> float:
        z = self._points(self._rng(4), 100)
        worst = 0.0
        for s in self._specs():
            K = kernel_matrix(s, z)
            worst = max(worst, float(np.max(np.abs(K - K.conj().T))))
        return worst

    def _mobius(self) -> float:
        rng = self._rng(5)
        worst = 0.0
        for _ in range(100):
            a, b, c, d = rng.normal(size=4)
            if a * d - b * c < 0.0:
                a, b = -a, -b
            m = MobiusMap(a=a, b=b, c=c, d=d)
            z, w = self._points(rng, 2)
            for s in self._specs():
                alpha, n = float(s.alpha), int(s.n)  # type: ignore[arg-type]
                before = abs(complex(closed_form_values(alpha, n, z, w)))
                after = abs(complex(closed_form_values(alpha, n, mobius_array(m, z), mobius_array(m, w))))
                worst = max(worst, abs(before - after))
        return worst

    def _closed_vs_quadrature(self) -> float:
        rng = self._rng(6)
        worst = 0.0
        for spec in (_laguerre(6.0, 0), _laguerre(3.0, 2), _laguerre(1.0, 1)):
            for _ in range(100):
                z, w = self._points(rng, 2)
                closed = complex(closed_form_values(float(spec.alpha), int(spec.n), z, w))  # type: ignore[arg-type]
                zp, wp = HalfPlanePoint.from_complex(complex(z)), HalfPlanePoint.from_complex(complex(w))
                worst = max(worst, _relative(kernel_quadrature(spec, zp, wp).value, closed))
        return worst

    def _admissibility_mass(self) -> float:
        worst = 0.0
        for B, n in ((1.5, 0), (2.75, 1), (3.5, 0), (3.5, 2)):
            spec = _maass(B, n)
            mass = halfplane_integral(spec, depth=self.depth)
            worst = max(worst, _relative(mass, 4.0 * math.pi / float(spec.alpha)))  # type: ignore[arg-type]
        return worst

    def _maass_level(self, n: int) -> float:
        mode = MaassLandau(B=3.5, n=n)
        return maass_residual(mode, HalfPlanePoint(x=0.2, s=1.3), 1e-3)

    def _maass_order(self) -> float:
        """Distance of residual(h/2) / residual(h) from 1/4."""
        worst = 0.0
        w0 = HalfPlanePoint(x=0.2, s=1.3)
        for n in (0, 3):
            mode = MaassLandau(B=3.5, n=n)
            worst = max(worst, abs(maass_residual(mode, w0, 5e-4) / maass_residual(mode, w0, 1e-3) - 0.25))
        return worst

    def _projection_identity(self) -> float:
        spec = _maass(3.5, 0)
        C = 4.0 * math.pi / 6.0
        grid = halfplane_grid(depth=self.depth)
        rng = self._rng(7)
        worst = 0.0
        for z, w in zip(self._near_i(rng, 10), self._near_i(rng, 10), strict=True):
            left = kernel_matrix(spec, [z], grid.nodes)[0]
            right = kernel_matrix(spec, grid.nodes, [w])[:, 0]
            value = complex(np.sum(left * right * grid.weights))
            target = C * complex(closed_form_values(6.0, 0, z, w))
            worst = max(worst, abs(value - target) / C)
        return worst

    # quadrature

    def _lens_fit(self) -> float:
        return 1.0 - fit_lens_constant(self.depth).r_squared

    # concentration and variance

    def _operator_trace(self) -> float:
        op = build_operator(_maass(3.5, 0), HyperbolicDisc(R=0.8), self.base_depth)
        return _relative(traces(op).expected, 6.0 * 0.64 / 0.36)

    def _trace_vs_double(self) -> float:
        spec = _maass(3.5, 0)
        return _relative(variance_trace(spec, 0.8, self.depth), variance_double(spec, 0.8, self.depth))

    def _geometric_vs_double(self) -> float:
        worst = 0.0
        for n in (0, 1):
            spec = _maass(3.5, n)
            for R in (0.5, 0.7, 0.9):
                geometric = variance_geometric(spec, R, self.depth)
                worst = max(worst, _relative(geometric, variance_double(spec, R, self.depth)))
        return worst

    def _asymptotic(self) -> float:
        return asymptotic_constant(_maass(3.5, 0), self.depth).relative_gap

    def _bounds(self) -> float:
        """Number of violated upper bounds over the R sweep."""
        violations = 0
        for R in get_settings().R_SWEEP:
            report = bounds_report(_maass(3.5, 0), R, self.depth)
            violations += int(not report.below_expected) + int(not report.below_admissible)
        return float(violations)

    # sampler

    def _sampler_stats(self) -> Dict[str, float]:
        op = build_operator(_maass(3.5, 0), HyperbolicDisc(R=0.8), self.base_depth)
        stats = batch_stats(op, 2000, self.seed, bin_width=0.05)
        return {
            "mean": abs(stats.mean - stats.expected) / stats.se_mean,
            "variance": abs(stats.variance - stats.trace_variance) / stats.se_variance,
            "law": stats.total_variation,
            "pairs": stats.pair_counts[0] - stats.poisson_pair_benchmark[0],
        }

    def checks(self) -> Dict[str, List[Check]]:
        sampler: Dict[str, float] = {}

        def sampler_value(key: str) -> Callable[[], float]:
            def run() -> float:
                if not sampler:
                    sampler.update(self._sampler_stats())
                return sampler[key]

            return run

        return {
            "specfun": [
                Check("laguerre_orthogonality", 1e-8, self._laguerre_orthogonality),
                Check("weighted_norm_integral", 1e-8, self._weighted_norm),
                Check("jacobi_hypergeometric_vs_recurrence", 1e-11, self._jacobi_forms, scalable=False),
                Check("chu_vandermonde", 1e-12, self._chu_vandermonde, scalable=False),
            ],
            "geometry": [
                Check("disc_area_quadrature", 1e-3, self._disc_area),
                Check("measure_transport", 1e-6, self._measure_transport, scalable=False),
                Check("rho_inverse_symmetry", 1e-12, self._rho_inverse),
                Check("rho_product_identity", 1e-12, self._rho_product),
            ],
            "kernels": [
                Check("diagonal_is_one", 1e-10, self._diagonal),
                Check("hermitian_symmetry", 1e-12, self._hermitian),
                Check("mobius_modulus_invariance", 1e-10, self._mobius),
                Check("closed_vs_quadrature", 1e-6, self._closed_vs_quadrature),
                Check("admissibility_mass", 1e-3, self._admissibility_mass, scalable=False),
                Check("maass_residual_level0", 1e-3, lambda: self._maass_level(0)),
                Check("maass_residual_top_level", 1e-3, lambda: self._maass_level(3)),
                Check("maass_second_order", 0.05, self._maass_order, scalable=False),
                Check("projection_identity", 5e-3, self._projection_identity, scalable=False),
            ],
            "quadrature": [
                Check("lens_fit_r_squared", 1e-3, self._lens_fit, scalable=False),
            ],
            "concentration": [
                Check("operator_trace", 1e-3, self._operator_trace, scalable=False),
                Check("trace_vs_double", 1e-2, self._trace_vs_double, scalable=False),
            ],
            "variance": [
                Check("geometric_vs_double", 1e-2, self._geometric_vs_double, scalable=False),
                Check("asymptotic_constant_gap", 2e-2, self._asymptotic, scalable=False),
                Check("upper_bound_violations", 0.0, self._bounds, scalable=False),
            ],
            "sampler": [
                Check("mean_standard_errors", 3.0, sampler_value("mean"), scalable=False),
                Check("variance_standard_errors", 5.0, sampler_value("variance"), scalable=False),
                Check("count_law_total_variation", 0.03, sampler_value("law"), scalable=False),
                Check("short_range_repulsion", 0.0, sampler_value("pairs"), scalable=False, exclusive=True),
            ],
        }

    def run(self, only: Optional[Sequence[str]] = None) -> VerificationReport:
        groups = self.checks()
        selected = list(groups) if not only else list(only)
        unknown = [m for m in selected if m not in groups]
        if unknown:
            raise DomainError(f"unknown modules {unknown}; choose from {list(groups)}")

        results: List[CheckResult] = []
        for module in selected:
            for check in groups[module]:
                tolerance = check.tolerance * (self.profile.scale if check.scalable else 1.0)
                try:
                    value = float(check.run())
                    passed = bool(value < tolerance if check.exclusive else value <= tolerance)
                    detail = ""
                except AffineEnsembleError as e:
                    value, passed, detail = float("nan"), False, f"{type(e).__name__}: {e}"
                logger.info(f"{module}.{check.name}: value={value:.3e} tol={tolerance:.1e} passed={passed}")
                results.append(
                    CheckResult(
                        module=module,
                        name=check.name,
                        value=value,
                        tolerance=tolerance,
                        passed=passed,
                        detail=detail,
                    )
                )
        return VerificationReport(profile=self.profile.name, results=results)
