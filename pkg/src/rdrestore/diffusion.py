"""Diffusion coefficients of the coupled u/v system.

* ``c(u, v) = (|v|/M)**gamma * b(|grad^alpha u|)`` drives the restored image u;
* ``a(u, v) = lambda1 (|u|/M)**mu + (1 - lambda1) (|v|/M)**gamma`` drives the
  auxiliary gray-level field v;
* ``b(s) = 1 / (1 + k1 s**beta)`` is the texture detector.

``M`` is the gray-level normalizer (max of the observed image); it is passed
explicitly since it comes from the data, not the configuration.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .grid import DomainError, as_field
from .spectral import frac_gradient


@dataclass(frozen=True)
class ModelParams:
    """Model constants.

    ``beta < 1`` is accepted. Values around 0.6 to 0.9 work well on textured
    images, although the well-posedness argument needs ``beta >= 1``.
    """

    alpha: float = 0.9
    beta: float = 1.0
    gamma: float = 1.0
    mu: float = 0.4
    k1: float = 1.0
    lam: float = 45.0
    lambda1: float = 0.9

    def __post_init__(self):
        checks = [
            ("alpha", 0 < self.alpha < 1, "(0, 1)"),
            ("beta", self.beta > 0, "> 0"),
            ("gamma", self.gamma > 0, "> 0"),
            ("mu", self.mu > 0, "> 0"),
            ("k1", self.k1 > 0, "> 0"),
            ("lambda", self.lam >= 0, ">= 0"),
            ("lambda1", 0 < self.lambda1 < 1, "(0, 1)"),
        ]
        for name, ok, rng in checks:
            if not ok:
                raise DomainError(f"{name} must be in {rng}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        return cls(**d)


def _check_M(M: float):
    if not M > 0:
        raise DomainError(f"gray-level normalizer M must be positive, got {M}")


def gray_indicator(field, exponent: float, M: float) -> np.ndarray:
    """``(|field| / M) ** exponent``."""
    _check_M(M)
    u = as_field(field)
    return (np.abs(u) / M) ** exponent


def texture_detector(gmag, k1: float, beta: float) -> np.ndarray:
    """``1 / (1 + k1 * gmag**beta)``; 1 on flat regions, toward 0 on texture."""
    g = as_field(gmag)
    if np.any(g < 0):
        raise DomainError("gradient magnitude must be nonnegative")
    return 1.0 / (1.0 + k1 * g**beta)


def texture_argument(dx, dy, beta: float, literal: bool = False) -> np.ndarray:
    """``|grad u|**beta`` from the two fractional difference components.

    ``literal=True`` instead evaluates ``(dx + dy) ** (beta / 2)`` as printed
    in the algorithm listing; negative sums then produce NaN. Comparison use
    only.
    """
    if literal:
        with np.errstate(invalid="ignore"):
            return np.power(dx + dy, beta / 2.0)
    return (dx * dx + dy * dy) ** (beta / 2.0)


def coeff_c(u, v, p: ModelParams, M: float, h: float = 1.0, *,
            part: str = "real", literal: bool = False) -> np.ndarray:
    """Diffusivity of the u equation, ``gray(v) * b(|grad^alpha u|)``."""
    u = as_field(u)
    v = as_field(v)
    if u.shape != v.shape:
        raise DomainError(f"shape mismatch: {u.shape} vs {v.shape}")
    dx, dy = frac_gradient(u, p.alpha, h, part)
    b = 1.0 / (1.0 + p.k1 * texture_argument(dx, dy, p.beta, literal))
    return gray_indicator(v, p.gamma, M) * b


def coeff_a(u, v, p: ModelParams, M: float) -> np.ndarray:
    u = as_field(u)
    v = as_field(v)
    if u.shape != v.shape:
        raise DomainError(f"shape mismatch: {u.shape} vs {v.shape}")
    return (p.lambda1 * gray_indicator(u, p.mu, M)
            + (1.0 - p.lambda1) * gray_indicator(v, p.gamma, M))
