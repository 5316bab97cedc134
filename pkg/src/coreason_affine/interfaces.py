# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

from abc import ABC, abstractmethod

import numpy as np
import numpy.typing as npt


class FrequencyProfile(ABC):
    """
    Abstract base class for a wavelet's Fourier transform on the positive half-line.
    """

    @abstractmethod
    def __call__(self, xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Evaluates the profile; zero for xi <= 0."""
        pass  # pragma: no cover

    @property
    @abstractmethod
    def xi_max(self) -> float:
        """Frequency beyond which the profile is treated as zero."""
        pass  # pragma: no cover

    @property
    @abstractmethod
    def small_xi_exponent(self) -> float:
        """Power p with profile(xi) ~ xi^p as xi -> 0+."""
        pass  # pragma: no cover

    @abstractmethod
    def norm_squared(self) -> float:
        """Squared L2(0, inf) norm."""
        pass  # pragma: no cover

    def normalized(self) -> "FrequencyProfile":
        """Returns the unit-norm rescaling of this profile."""
        return ScaledProfile(self, 1.0 / float(np.sqrt(self.norm_squared())))


class ScaledProfile(FrequencyProfile):
    """
    A constant multiple of another profile.
    """

    def __init__(self, base: FrequencyProfile, factor: float) -> None:
        self.base = base
        self.factor = factor

    def __call__(self, xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        return self.factor * self.base(xi)

    @property
    def xi_max(self) -> float:
        return self.base.xi_max

    @property
    def small_xi_exponent(self) -> float:
        return self.base.small_xi_exponent

    def norm_squared(self) -> float:
        return self.factor**2 * self.base.norm_squared()
