# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

from typing import Any, Dict, Optional, Sequence


class AffineEnsembleError(Exception):
    """Base class for every error raised by the package."""

    pass


class DomainError(AffineEnsembleError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class ResolutionError(AffineEnsembleError):
    """Raised when a grid or quadrature rule cannot resolve the requested integral."""

    def __init__(self, message: str, iterates: Optional[Sequence[complex]] = None) -> None:
        super().__init__(message)
        self.iterates = list(iterates) if iterates is not None else []


class AdmissibilityError(AffineEnsembleError):
    """Raised when a wavelet profile has an infinite admissibility constant."""

    pass


class ConvergenceError(AffineEnsembleError):
    """Raised when an iterative or extrapolated sequence fails its convergence test."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EvaluationError(AffineEnsembleError):
    """Raised when an integrand returns a non-finite value at a quadrature node."""

    def __init__(self, message: str, node: Optional[complex] = None) -> None:
        super().__init__(message)
        self.node = node


class ResourceError(AffineEnsembleError):
    """Raised when a discretization exceeds the configured memory budget."""

    def __init__(self, message: str, suggested_depth: Optional[int] = None) -> None:
        super().__init__(message)
        self.suggested_depth = suggested_depth
