"""Forward degradation model ``f = K * u + n`` with seeded Gaussian noise.

Noise comes from numpy's ``PCG64`` bit generator through
``Generator.standard_normal``, which is stable across platforms for a given
numpy release; a checksum test pins the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DomainError, as_field
from .kernels import Kernel, convolve, kernel_spectrum


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise DomainError(f"noise sigma must be >= 0, got {self.sigma}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) \
                or not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


def add_gaussian_noise(field, spec: NoiseSpec) -> np.ndarray:
    u = as_field(field, copy=True)
    if spec.sigma == 0:
        return u
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return u + spec.sigma * rng.standard_normal(u.shape)


def degrade(clean, kernel: Kernel, spec: NoiseSpec) -> np.ndarray:
    u = as_field(clean)
    H, W = u.shape
    return add_gaussian_noise(convolve(u, kernel_spectrum(kernel, W, H)), spec)
