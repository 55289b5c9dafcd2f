"""JSON run configuration.

The file has five sections, all optional; missing keys take the defaults
below, unknown keys are an error::

    {
      "model":  {"alpha": 0.9, "beta": 1.0, "gamma": 1.0, "mu": 0.4,
                 "k1": 1.0, "lambda": 45.0, "lambda1": 0.9},
      "solver": {"tau": 0.5, "h": 1.0, "tol": 0.005, "max_iter": 500,
                 "stop_rule": "successive-change", "enforce_cfl": false},
      "kernel": {"type": "disk", "radius": 3.0},
      "noise":  {"sigma": 3.0, "seed": 0},
      "io":     {"input": null, "output": null, "trace": null, "reference": null}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace

from .diffusion import ModelParams
from .grid import GridGeometry
from .kernels import Kernel, make_kernel
from .degrade import NoiseSpec
from .solver import STOP_RULES, SolverConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverSettings:
    tau: float = 0.5
    h: float = 1.0
    tol: float = 0.005
    max_iter: int = 500
    stop_rule: str = "successive-change"
    # tau = 0.5 already exceeds tau*max(a)/h^2 <= 1/4 wherever u = v = M
    enforce_cfl: bool = False


@dataclass(frozen=True)
class IOSettings:
    input: str | None = None
    output: str | None = None
    trace: str | None = None
    reference: str | None = None


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams = field(default_factory=ModelParams)
    solver: SolverSettings = field(default_factory=SolverSettings)
    kernel: dict = field(default_factory=lambda: {"type": "disk", "radius": 3.0})
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    io: IOSettings = field(default_factory=IOSettings)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "solver": {f.name: getattr(self.solver, f.name) for f in fields(SolverSettings)},
            "kernel": dict(self.kernel),
            "noise": {"sigma": self.noise.sigma, "seed": self.noise.seed},
            "io": {f.name: getattr(self.io, f.name) for f in fields(IOSettings)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def build_kernel(self) -> Kernel:
        return make_kernel(self.kernel)

    def solver_config(self) -> SolverConfig:
        s = self.solver
        return SolverConfig(
            params=self.model,
            geometry=GridGeometry(h=s.h, tau=s.tau),
            tol=s.tol,
            max_iter=s.max_iter,
            stop_rule=s.stop_rule,
            enforce_cfl=s.enforce_cfl,
        )


_SECTIONS = {
    "model": {"alpha", "beta", "gamma", "mu", "k1", "lambda", "lambda1"},
    "solver": {f.name for f in fields(SolverSettings)},
    "noise": {"sigma", "seed"},
    "io": {f.name for f in fields(IOSettings)},
}


def from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - set(_SECTIONS) - {"kernel"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for name, allowed in _SECTIONS.items():
        sec = d.get(name, {})
        if not isinstance(sec, dict):
            raise ConfigError(f"section {name!r} must be an object")
        extra = set(sec) - allowed
        if extra:
            raise ConfigError(f"unknown keys in {name!r}: {sorted(extra)}")
    try:
        model = ModelParams.from_dict(d.get("model", {}))
        solver = SolverSettings(**d.get("solver", {}))
        if solver.stop_rule not in STOP_RULES:
            raise ConfigError(f"stop_rule must be one of {STOP_RULES}")
        GridGeometry(h=solver.h, tau=solver.tau)
        kernel = dict(d.get("kernel", RunConfig().kernel))
        make_kernel(kernel)
        noise = NoiseSpec(**d.get("noise", {}))
        io = IOSettings(**d.get("io", {}))
        cfg = RunConfig(model, solver, kernel, noise, io)
        cfg.solver_config()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def loads(text: str) -> RunConfig:
    try:
        return from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc


def load(path) -> RunConfig:
    with open(path) as fh:
        return loads(fh.read())


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply ``section.key=value`` strings; values are parsed as JSON when possible."""
    d = cfg.to_dict()
    for item in overrides:
        key, sep, raw = item.partition("=")
        section, dot, name = key.partition(".")
        if not sep or not dot or not name:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        if section not in d:
            raise ConfigError(f"unknown config section {section!r}")
        if section == "kernel" and name == "type" and raw != d["kernel"].get("type"):
            d["kernel"] = {}
        d[section][name] = _parse_value(raw)
    return from_dict(d)


def with_io(cfg: RunConfig, **kwargs) -> RunConfig:
    vals = {k: v for k, v in kwargs.items() if v is not None}
    return replace(cfg, io=replace(cfg.io, **vals)) if vals else cfg
