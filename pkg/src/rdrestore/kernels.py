"""Blur kernels and periodic convolution with a kernel and its adjoint.

Kernel taps are stored as a ``(kh, kw)`` array indexed ``[row, col]`` like
images, with ``origin`` naming the tap that sits at zero offset. Convolution
is circular and carried out in the frequency domain.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .grid import DomainError, as_field


@dataclass(frozen=True)
class Kernel:
    taps: np.ndarray
    origin: tuple[int, int]
    normalized: bool = True

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        if taps.ndim != 2 or taps.size == 0:
            raise DomainError(f"kernel taps must be a non-empty 2-D array, got {taps.shape}")
        r, c = self.origin
        if not (0 <= r < taps.shape[0] and 0 <= c < taps.shape[1]):
            raise DomainError(f"origin {self.origin} outside {taps.shape} stencil")
        if self.normalized and abs(taps.sum() - 1.0) > 1e-12:
            raise DomainError(f"normalized kernel taps sum to {taps.sum()!r}")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @classmethod
    def centered(cls, taps) -> "Kernel":
        taps = np.asarray(taps, dtype=np.float64)
        taps = taps / taps.sum()
        return cls(taps, (taps.shape[0] // 2, taps.shape[1] // 2))


@dataclass(frozen=True)
class KernelSpectrum:
    spectrum: np.ndarray
    conj_spectrum: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.spectrum.shape

    @property
    def power(self) -> np.ndarray:
        """``|K^|**2``, the symbol of ``K' * K``."""
        return (self.conj_spectrum * self.spectrum).real


def delta_kernel() -> Kernel:
    return Kernel(np.ones((1, 1)), (0, 0))


def average_kernel(n: int = 5) -> Kernel:
    """``n x n`` box filter."""
    if int(n) != n or n < 1 or n % 2 == 0:
        raise DomainError(f"average kernel size must be a positive odd integer, got {n}")
    n = int(n)
    return Kernel(np.full((n, n), 1.0 / (n * n)), (n // 2, n // 2))


def disk_kernel(radius: float = 3.0) -> Kernel:
    """Uniform disk: every tap whose center lies within ``radius`` of the origin."""
    if not radius > 0:
        raise DomainError(f"disk radius must be positive, got {radius}")
    r = math.ceil(radius)
    off = np.arange(-r, r + 1)
    inside = (off[:, None] ** 2 + off[None, :] ** 2) <= radius * radius
    taps = inside / np.count_nonzero(inside)
    return Kernel(taps, (r, r))


def motion_kernel(length: float = 20.0, angle: float = math.pi / 3) -> Kernel:
    """Linear motion blur of ``length`` pixels at ``angle`` radians.

    The segment is centered on the origin, with its end points on the centers
    of the first and last covered pixels (so it spans ``length - 1``). It is
    sampled at ``ceil(length)`` evenly spaced points and each point is
    spread over its four neighbouring pixels with bilinear weights. The angle
    is counter-clockwise from the +x axis with y pointing up, so a positive
    angle moves toward smaller row indices.
    """
    if not length >= 1:
        raise DomainError(f"motion length must be >= 1, got {length}")
    half = (length - 1) / 2.0
    npts = math.ceil(length)
    r = math.ceil(half)
    size = 2 * r + 1
    taps = np.zeros((size, size))
    ts = np.linspace(-half, half, npts) if npts > 1 else np.zeros(1)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    for t in ts:
        x = t * cos_a + r
        y = -t * sin_a + r
        x0, y0 = math.floor(x), math.floor(y)
        fx, fy = x - x0, y - y0
        for dy, wy in ((0, 1.0 - fy), (1, fy)):
            for dx, wx in ((0, 1.0 - fx), (1, fx)):
                w = wy * wx
                if w > 0:
                    taps[y0 + dy, x0 + dx] += w
    taps /= taps.sum()
    return Kernel(taps, (r, r))


def make_kernel(spec: dict) -> Kernel:
    """Build a kernel from a config mapping ``{"type": ..., params...}``."""
    kind = spec.get("type")
    params = {k: v for k, v in spec.items() if k != "type"}
    builders = {
        "average": (average_kernel, {"n"}),
        "disk": (disk_kernel, {"radius"}),
        "motion": (motion_kernel, {"length", "angle"}),
        "delta": (delta_kernel, set()),
    }
    if kind not in builders:
        raise DomainError(f"unknown kernel type {kind!r}")
    fn, allowed = builders[kind]
    extra = set(params) - allowed
    if extra:
        raise DomainError(f"unexpected parameters for {kind} kernel: {sorted(extra)}")
    return fn(**params)


def pad_kernel(k: Kernel, shape: tuple[int, int]) -> np.ndarray:
    """Embed the taps in a zero field with the origin tap at index (0, 0)."""
    H, W = shape
    kh, kw = k.taps.shape
    if kh > H or kw > W:
        raise DomainError(f"kernel {kh}x{kw} larger than image {H}x{W}")
    out = np.zeros((H, W))
    r0, c0 = k.origin
    rows = (np.arange(kh) - r0) % H
    cols = (np.arange(kw) - c0) % W
    np.add.at(out, (rows[:, None], cols[None, :]), k.taps)
    return out


def kernel_spectrum(k: Kernel, width: int, height: int) -> KernelSpectrum:
    spec = np.fft.fft2(pad_kernel(k, (height, width)))
    return KernelSpectrum(spec, np.conj(spec))


def _apply(field, symbol: np.ndarray) -> np.ndarray:
    u = as_field(field)
    if u.shape != symbol.shape:
        raise DomainError(f"field {u.shape} does not match kernel spectrum {symbol.shape}")
    return np.fft.ifft2(symbol * np.fft.fft2(u)).real


def convolve(field, ks: KernelSpectrum) -> np.ndarray:
    """Circular convolution ``K * u``."""
    return _apply(field, ks.spectrum)


def adjoint_convolve(field, ks: KernelSpectrum) -> np.ndarray:
    """Circular convolution with the adjoint kernel, ``K' * u``."""
    return _apply(field, ks.conj_spectrum)


def write_kernel_csv(k: Kernel, path) -> None:
    """Dump taps as CSV rows ``row_offset, col_offset, value`` (nonzero taps only)."""
    r0, c0 = k.origin
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_offset", "col_offset", "value"])
        for (r, c), val in np.ndenumerate(k.taps):
            if val != 0:
                writer.writerow([r - r0, c - c0, repr(float(val))])
