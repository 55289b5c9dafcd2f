"""Time stepping for the coupled system and its stability bounds.

One iteration, in order:

1. ``a^n = a(u^n, v^n)``
2. explicit step for ``v^{n+1}``
3. fractional gradients of ``u^n`` and ``c^n = c(u^n, v^{n+1})``
4. ``d^n = u^n + tau div(c^n grad u^n) + tau lambda K'f``
5. ``u^{n+1} = IDFT[ DFT(d^n) / (1 + tau lambda |K^|^2) ]``
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .diffusion import ModelParams, coeff_a, coeff_c
from .grid import DomainError, GridGeometry, as_field, divergence_flux
from .kernels import Kernel, KernelSpectrum, adjoint_convolve, convolve, kernel_spectrum

STOP_RULES = ("successive-change", "distance-to-f")

TRACE_FIELDS = ("n", "rel_change", "u_min", "u_max", "v_min", "v_max",
                "c_max", "a_max", "energy")


class NumericalAbort(RuntimeError):
    """A run produced non-finite values or broke a monitored bound."""

    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration


class CFLViolation(NumericalAbort):
    pass


class CFLWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CFLCheck:
    bound: float
    lhs: float
    ok: bool


def cfl_bound_u(cmax: float, geometry: GridGeometry) -> CFLCheck:
    """Semi-implicit u scheme: ``tau * max c / h**2 <= 1/4``."""
    lhs = geometry.tau * cmax / geometry.h**2
    return CFLCheck(0.25, lhs, lhs <= 0.25)


def cfl_bound_v(amax: float, geometry: GridGeometry) -> CFLCheck:
    """Explicit v scheme: ``tau * max a / h**2 <= 1/4``."""
    lhs = geometry.tau * amax / geometry.h**2
    return CFLCheck(0.25, lhs, lhs <= 0.25)


def cfl_bound_u_explicit(cmax: float, geometry: GridGeometry, lam: float) -> CFLCheck:
    """Fully explicit u scheme: ``tau * max c <= 2 / (lambda + 8/h**2)``."""
    bound = 2.0 / (lam + 8.0 / geometry.h**2)
    lhs = geometry.tau * cmax
    return CFLCheck(bound, lhs, lhs <= bound)


def amplification_factor(w1: float, w2: float, c: float, tau: float, h: float,
                         lam: float, khat: complex) -> float:
    """Von Neumann amplification factor of the frozen-coefficient u scheme."""
    if c < 0:
        raise DomainError(f"diffusivity must be nonnegative, got {c}")
    s = math.sin(w1 * h / 2) ** 2 + math.sin(w2 * h / 2) ** 2
    return (1.0 - 4.0 * tau * c / h**2 * s) / (1.0 + tau * lam * abs(khat) ** 2)


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``fixed_c`` / ``fixed_a`` freeze the diffusivities to a constant; they
    exist for the stability experiments and the pure-deconvolution check.
    ``frac_part`` and ``literal_texture`` are experiment switches for the
    fractional gradient (see ``spectral.frac_diff`` and
    ``diffusion.texture_argument``).
    """

    params: ModelParams = field(default_factory=ModelParams)
    geometry: GridGeometry = field(default_factory=GridGeometry)
    tol: float = 0.005
    max_iter: int = 500
    stop_rule: str = "successive-change"
    enforce_cfl: bool = True
    fixed_c: float | None = None
    fixed_a: float | None = None
    frac_part: str = "real"
    literal_texture: bool = False
    monitor_linf: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.stop_rule not in STOP_RULES:
            raise DomainError(f"stop_rule must be one of {STOP_RULES}, got {self.stop_rule!r}")


@dataclass
class RestorationState:
    u: np.ndarray
    v: np.ndarray
    f: np.ndarray
    M: float
    ks: KernelSpectrum
    fidelity_rhs: np.ndarray  # K' * f
    n: int = 0
    trace: list[dict] = field(default_factory=list)


@dataclass
class RunResult:
    restored: np.ndarray
    state: RestorationState
    stop_reason: str


def init_state(f, kernel: Kernel | KernelSpectrum, M: float | None = None) -> RestorationState:
    """Initial state ``u = v = f``; ``M`` defaults to ``max f``."""
    f = as_field(f, copy=True)
    H, W = f.shape
    ks = kernel if isinstance(kernel, KernelSpectrum) else kernel_spectrum(kernel, W, H)
    if ks.shape != f.shape:
        raise DomainError(f"kernel spectrum {ks.shape} does not match image {f.shape}")
    if M is None:
        M = float(f.max())
    if not M > 0:
        raise DomainError(f"max of the observed image must be positive, got {M}")
    return RestorationState(u=f.copy(), v=f.copy(), f=f, M=float(M), ks=ks,
                            fidelity_rhs=adjoint_convolve(f, ks))


def _coeff_a(state: RestorationState, config: SolverConfig) -> np.ndarray:
    if config.fixed_a is not None:
        return np.full(state.u.shape, float(config.fixed_a))
    return coeff_a(state.u, state.v, config.params, state.M)


def _coeff_c(state: RestorationState, v_new: np.ndarray, config: SolverConfig) -> np.ndarray:
    if config.fixed_c is not None:
        return np.full(state.u.shape, float(config.fixed_c))
    return coeff_c(state.u, v_new, config.params, state.M, config.geometry.h,
                   part=config.frac_part, literal=config.literal_texture)


def _finite(arr: np.ndarray, what: str, n: int) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise NumericalAbort(f"non-finite values in {what} at iteration {n}", n)
    return arr


def _flux(coeff, field, h, what, n):
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            return divergence_flux(coeff, field, h)
        except DomainError:
            raise NumericalAbort(f"non-finite flux in the {what} update at iteration {n}",
                                 n) from None


def v_step(state: RestorationState, config: SolverConfig,
           a: np.ndarray | None = None) -> np.ndarray:
    """Explicit conservative step for v with ``a^n = a(u^n, v^n)``."""
    if a is None:
        a = _coeff_a(state, config)
    g = config.geometry
    v_new = state.v + g.tau * _flux(a, state.v, g.h, "v", state.n)
    return _finite(v_new, "v", state.n)


def _diffusion_rhs(state, config, c):
    g = config.geometry
    return state.u + g.tau * _flux(c, state.u, g.h, "u", state.n)


def u_step(state: RestorationState, config: SolverConfig, v_new: np.ndarray | None = None,
           c: np.ndarray | None = None) -> np.ndarray:
    """Semi-implicit step for u: explicit diffusion, implicit fidelity.

    ``v_new`` is ``v^{n+1}``; when omitted it is computed here with
    :func:`v_step`.
    """
    if c is None:
        if v_new is None:
            v_new = v_step(state, config)
        c = _coeff_c(state, v_new, config)
    g = config.geometry
    lam = config.params.lam
    d = _diffusion_rhs(state, config, c)
    if lam == 0:
        return _finite(d, "u", state.n)
    d = d + g.tau * lam * state.fidelity_rhs
    denom = 1.0 + g.tau * lam * state.ks.power
    u_new = np.fft.ifft2(np.fft.fft2(d) / denom).real
    return _finite(u_new, "u", state.n)


def u_step_explicit(state: RestorationState, config: SolverConfig,
                    v_new: np.ndarray | None = None, c: np.ndarray | None = None) -> np.ndarray:
    """Fully explicit u step, fidelity term ``-tau lambda K'(K u - f)``."""
    if c is None:
        if v_new is None:
            v_new = v_step(state, config)
        c = _coeff_c(state, v_new, config)
    g = config.geometry
    lam = config.params.lam
    u_new = _diffusion_rhs(state, config, c)
    if lam != 0:
        resid = convolve(state.u, state.ks) - state.f
        u_new = u_new - g.tau * lam * adjoint_convolve(resid, state.ks)
    return _finite(u_new, "u", state.n)


def energy(u: np.ndarray, v: np.ndarray, h: float = 1.0) -> float:
    """Discrete ``1/2 sum(u**2 + v**2) h**2``."""
    return 0.5 * float(np.sum(u * u) + np.sum(v * v)) * h * h


def linf_bound(state: RestorationState, lam: float, t: float) -> float:
    """``exp(2 lambda t) (|f|_inf + |K'f|_inf)``, inf on overflow."""
    base = float(np.abs(state.f).max() + np.abs(state.fidelity_rhs).max())
    expo = 2.0 * lam * t
    if expo > 700:
        return math.inf
    return math.exp(expo) * base


def _check_cfl(check: CFLCheck, scheme: str, n: int, config: SolverConfig, warned: set):
    if check.ok:
        return
    msg = (f"{scheme} scheme: tau*max/h^2 = {check.lhs:.6g} exceeds "
           f"{check.bound:.6g} at iteration {n}")
    if config.enforce_cfl:
        raise CFLViolation(msg, n)
    if scheme not in warned:
        warned.add(scheme)
        warnings.warn(msg, CFLWarning, stacklevel=3)


def step(state: RestorationState, config: SolverConfig, warned: set | None = None) -> dict:
    """Advance the state by one iteration in place; returns the trace record."""
    warned = set() if warned is None else warned
    g = config.geometry
    n = state.n

    a = _finite(_coeff_a(state, config), "a", n)
    _check_cfl(cfl_bound_v(float(a.max()), g), "v", n, config, warned)
    v_new = v_step(state, config, a)

    c = _finite(_coeff_c(state, v_new, config), "c", n)
    _check_cfl(cfl_bound_u(float(c.max()), g), "u", n, config, warned)
    u_new = u_step(state, config, c=c)

    ref = state.u if config.stop_rule == "successive-change" else state.f
    with np.errstate(over="ignore", invalid="ignore"):
        num = float(np.sum((u_new - ref) ** 2))
        den = float(np.sum(u_new * u_new))
        rel = num / den if den > 0 else (0.0 if num == 0 else math.inf)
        e = energy(u_new, v_new, g.h)

    state.u, state.v = u_new, v_new
    state.n = n + 1
    rec = {
        "n": state.n,
        "rel_change": rel,
        "u_min": float(u_new.min()),
        "u_max": float(u_new.max()),
        "v_min": float(v_new.min()),
        "v_max": float(v_new.max()),
        "c_max": float(c.max()),
        "a_max": float(a.max()),
        "energy": e,
    }
    state.trace.append(rec)

    if config.monitor_linf:
        bound = linf_bound(state, config.params.lam, state.n * g.tau)
        unorm = float(np.abs(u_new).max())
        if unorm > bound:
            raise NumericalAbort(
                f"|u|_inf = {unorm:.6g} exceeds the growth bound {bound:.6g} "
                f"at iteration {state.n}", state.n)
    return rec


def run(f, kernel: Kernel | KernelSpectrum, config: SolverConfig | None = None) -> RunResult:
    """Restore ``f`` by iterating until the stop rule fires or ``max_iter``."""
    config = SolverConfig() if config is None else config
    f = as_field(f)
    if np.any(f <= 0):
        warnings.warn("observed image has non-positive pixels; the model assumes f > 0",
                      RuntimeWarning, stacklevel=2)
    state = init_state(f, kernel)
    warned: set = set()
    stop_reason = "max_iter"
    while state.n < config.max_iter:
        rec = step(state, config, warned)
        if rec["rel_change"] <= config.tol:
            stop_reason = "converged"
            break
    return RunResult(state.u.copy(), state, stop_reason)


def write_trace_csv(trace: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        for rec in trace:
            writer.writerow([rec["n"]] + [repr(float(rec[k])) for k in TRACE_FIELDS[1:]])
