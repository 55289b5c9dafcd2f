"""PSNR and SSIM.

SSIM uses local statistics under an 11x11 Gaussian window (std 1.5) with
periodic boundaries, ``c1 = (0.01*255)**2`` and ``c2 = (0.03*255)**2``, and
reports the mean of the SSIM map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import DomainError, as_field
from .kernels import Kernel, convolve, kernel_spectrum

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
C1 = (0.01 * PEAK) ** 2
C2 = (0.03 * PEAK) ** 2


@dataclass(frozen=True)
class QualityReport:
    psnr: float
    ssim: float

    def to_dict(self) -> dict:
        # +inf is reported as a string; JSON has no infinity literal
        return {"psnr": "inf" if math.isinf(self.psnr) else self.psnr, "ssim": self.ssim}


def _pair(u, f):
    u = as_field(u)
    f = as_field(f)
    if u.shape != f.shape:
        raise DomainError(f"image sizes differ: {u.shape} vs {f.shape}")
    return u, f


def psnr(u, f) -> float:
    """``10 log10(sum 255^2 / sum (u - f)^2)``; ``inf`` for identical images."""
    u, f = _pair(u, f)
    sse = float(np.sum((u - f) ** 2))
    if sse == 0:
        return math.inf
    return 10.0 * math.log10(u.size * PEAK**2 / sse)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    off = np.arange(size) - size // 2
    g = np.exp(-(off**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim_map(u, f) -> np.ndarray:
    u, f = _pair(u, f)
    H, W = u.shape
    if H < SSIM_WINDOW or W < SSIM_WINDOW:
        raise DomainError(f"image {H}x{W} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} window")
    ks = kernel_spectrum(Kernel.centered(gaussian_window()), W, H)

    def blur(x):
        return convolve(x, ks)

    mu_u, mu_f = blur(u), blur(f)
    var_u = blur(u * u) - mu_u * mu_u
    var_f = blur(f * f) - mu_f * mu_f
    cov = blur(u * f) - mu_u * mu_f
    num = (2.0 * mu_u * mu_f + C1) * (2.0 * cov + C2)
    den = (mu_u * mu_u + mu_f * mu_f + C1) * (var_u + var_f + C2)
    return num / den


def ssim(u, f) -> float:
    return float(np.mean(ssim_map(u, f)))


def evaluate(u, f) -> QualityReport:
    return QualityReport(psnr(u, f), ssim(u, f))
