"""DFT plumbing and fractional-order differences defined by Fourier multipliers.

Transform convention: the forward DFT is unnormalized and the inverse carries
the ``1/(W*H)`` factor (numpy's default ``"backward"`` norm). Frequencies are
``w1 = 2*pi*p/W`` along x and ``w2 = 2*pi*q/H`` along y with ``p = 0..W-1``
and ``q = 0..H-1``; there is no re-centering to negative frequencies.

With this uncentered grid and ``h = 1`` the shifted-difference symbol
``(1 - exp(-i w h))**alpha * exp(i alpha w h / 2)`` reduces to
``(2 sin(w/2))**alpha * exp(i alpha pi / 2)``, i.e. a real even symbol times a
constant phase. The real part of the inverse transform is therefore
``cos(alpha pi / 2)`` times a real operator; at ``alpha = 1`` it vanishes for
real input.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .grid import DomainError, as_field

PARTS = ("real", "modulus")


@dataclass(frozen=True)
class Spectrum:
    width: int
    height: int
    coeffs: np.ndarray  # complex, shape (height, width)

    def __post_init__(self):
        if self.coeffs.shape != (self.height, self.width):
            raise DomainError(
                f"coefficient grid {self.coeffs.shape} does not match "
                f"{self.height}x{self.width}"
            )


@dataclass(frozen=True)
class FracMultiplier:
    alpha: float
    axis: str
    values: np.ndarray  # complex, shape (height, width)


def dft2(field) -> Spectrum:
    u = as_field(field)
    h, w = u.shape
    return Spectrum(w, h, np.fft.fft2(u))


def idft2(spec: Spectrum, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Inverse DFT; returns the complex field.

    ``shape``, if given, is the expected ``(height, width)`` and is checked
    against the spectrum.
    """
    if shape is not None and tuple(shape) != (spec.height, spec.width):
        raise DomainError(
            f"spectrum is {spec.height}x{spec.width}, expected {shape[0]}x{shape[1]}"
        )
    return np.fft.ifft2(spec.coeffs)


def frequencies(n: int) -> np.ndarray:
    """Radian frequencies ``2*pi*p/n`` for ``p = 0..n-1``."""
    return 2.0 * np.pi * np.arange(n) / n


def _symbol_1d(alpha: float, n: int, h: float) -> np.ndarray:
    omega = frequencies(n)
    base = 1.0 - np.exp(-1j * omega * h)
    out = np.zeros(n, dtype=np.complex128)
    nz = base != 0
    # principal branch: exp(alpha * Log(base))
    out[nz] = np.exp(alpha * np.log(base[nz])) * np.exp(0.5j * alpha * omega[nz] * h)
    return out


def frac_multiplier(alpha: float, axis: str, width: int, height: int,
                    h: float = 1.0) -> FracMultiplier:
    """Symbol of the fractional-order shifted difference along one axis."""
    if not alpha > 0:
        raise DomainError(f"fractional order must be positive, got {alpha}")
    if width < 1 or height < 1:
        raise DomainError(f"grid sizes must be positive, got {width}x{height}")
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    if axis == "x":
        values = np.broadcast_to(_symbol_1d(alpha, width, h), (height, width))
    elif axis == "y":
        values = np.broadcast_to(_symbol_1d(alpha, height, h)[:, None], (height, width))
    else:
        raise DomainError(f"axis must be 'x' or 'y', got {axis!r}")
    return FracMultiplier(alpha, axis, np.array(values))


def _to_real(z: np.ndarray, part: str) -> np.ndarray:
    if part == "real":
        return z.real.copy()
    if part == "modulus":
        return np.abs(z)
    raise DomainError(f"part must be one of {PARTS}, got {part!r}")


def frac_diff(field, alpha: float, axis: str = "x", h: float = 1.0,
              part: str = "real") -> np.ndarray:
    """Fractional difference ``D^alpha`` of a field along ``axis``.

    ``part`` selects how the complex inverse transform becomes real:
    ``"real"`` (default) or ``"modulus"``.
    """
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    u = as_field(field)
    hgt, wid = u.shape
    mult = frac_multiplier(alpha, axis, wid, hgt, h)
    return _to_real(np.fft.ifft2(mult.values * np.fft.fft2(u)), part)


def frac_gradient(field, alpha: float, h: float = 1.0,
                  part: str = "real") -> tuple[np.ndarray, np.ndarray]:
    """Both components ``(D_x^alpha u, D_y^alpha u)`` sharing one forward DFT."""
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    u = as_field(field)
    hgt, wid = u.shape
    uhat = np.fft.fft2(u)
    mx = frac_multiplier(alpha, "x", wid, hgt, h).values
    my = frac_multiplier(alpha, "y", wid, hgt, h).values
    return (_to_real(np.fft.ifft2(mx * uhat), part),
            _to_real(np.fft.ifft2(my * uhat), part))


def frac_grad_magnitude(field, alpha: float, h: float = 1.0,
                        part: str = "real") -> np.ndarray:
    """Pixelwise ``sqrt(Dx**2 + Dy**2)`` of the fractional differences."""
    dx, dy = frac_gradient(field, alpha, h, part)
    return np.hypot(dx, dy)


def write_multiplier_csv(mult: FracMultiplier, path) -> None:
    """Dump a multiplier table as CSV rows ``q, p, real, imag``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "p", "real", "imag"])
        hgt, wid = mult.values.shape
        for q in range(hgt):
            for p in range(wid):
                z = mult.values[q, p]
                writer.writerow([q, p, repr(float(z.real)), repr(float(z.imag))])
