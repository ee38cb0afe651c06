"""Dataclass configs for the numeric suites, loaded from JSON files."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .gvnum import BumpKernel, GridSpec


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    a: dict = field(default_factory=lambda: {1: 0.3})   # f(z) = z + sum a_n sin nz + b_n cos nz
    b: dict = field(default_factory=dict)
    profile_order: int = 2
    alt_profile_order: int = 3
    steps: int = 1000
    refinement_steps: tuple = (8, 16, 32)
    max_winding: int = 3
    basepoints: int = 32
    pairs: int = 1000
    seed: int = 0
    flat_rotation: float = 0.5
    cocycle_tol: float = 1e-10
    path_rel_tol: float = 1e-6
    rel_floor: float = 1e-8
    order_min: float = 2.0


@dataclass
class GVConfig:
    grid: GridSpec = field(default_factory=lambda: GridSpec(64, 64, 32, 2.0))
    ladder: int = 2                 # number of halvings below the default grid
    window: tuple = (-2, -1, 0, 1, 2)
    kernels: list = field(default_factory=list)
    antisym_tol: float = 1e-3
    hochschild_tol: float = 1e-3
    order_min: float = 1.8
    formula_tol: float = 1e-10
    flat_tol: float = 1e-12
    tau_shift_tol: float = 1e-12


@dataclass
class Config:
    name: str = "default"
    model: ModelConfig = field(default_factory=ModelConfig)
    gv: GVConfig = field(default_factory=GVConfig)


def _int_keys(d: dict) -> dict:
    try:
        return {int(k): float(v) for k, v in d.items()}
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Fourier coefficients must map integers to numbers: {d!r}") from e


def _kernel(d: dict) -> BumpKernel:
    try:
        win = tuple((int(n), float(a)) for n, a in d["windings"].items())
        z = d.get("z")
        return BumpKernel(windings=win, xt=tuple(d["xt"]), xs=tuple(d["xs"]),
                          z=tuple(z) if z is not None else None, tau=tuple(d["tau"]),
                          z_mod=tuple(d.get("z_mod", (0.0, 0.0))), tau_shift=float(d.get("tau_shift", 0.0)))
    except (AttributeError, KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad kernel entry {d!r}: {e}") from e


_MODEL_KEYS = set(ModelConfig.__dataclass_fields__)
_GV_KEYS = set(GVConfig.__dataclass_fields__)


def config_from_dict(raw: dict) -> Config:
    cfg = Config(name=str(raw.get("name", "default")))
    unknown = set(raw) - {"name", "model", "gv"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    m = dict(raw.get("model", {}))
    if set(m) - _MODEL_KEYS:
        raise ConfigError(f"unknown model keys {sorted(set(m) - _MODEL_KEYS)}")
    for key in ("a", "b"):
        if key in m:
            m[key] = _int_keys(m[key])
    if "refinement_steps" in m:
        m["refinement_steps"] = tuple(m["refinement_steps"])
    cfg.model = ModelConfig(**m)
    g = dict(raw.get("gv", {}))
    if set(g) - _GV_KEYS:
        raise ConfigError(f"unknown gv keys {sorted(set(g) - _GV_KEYS)}")
    if "grid" in g:
        gd = g["grid"]
        g["grid"] = GridSpec(int(gd["nx"]), int(gd["nz"]), int(gd["nt"]), float(gd.get("tau_max", 2.0)))
    if "window" in g:
        g["window"] = tuple(int(n) for n in g["window"])
    g["kernels"] = [_kernel(k) for k in g.get("kernels", [])]
    cfg.gv = GVConfig(**g)
    return cfg


def load_config(path) -> Config:
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {p}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    return config_from_dict(raw)


def default_config() -> Config:
    return load_config(Path(__file__).with_name("data") / "default.json")


def config_to_dict(cfg: Config) -> dict:
    """Inverse of ``config_from_dict``: a JSON-ready dict in the loader's format."""
    m = asdict(cfg.model)
    m["a"] = {str(k): v for k, v in cfg.model.a.items()}
    m["b"] = {str(k): v for k, v in cfg.model.b.items()}
    m["refinement_steps"] = list(m["refinement_steps"])
    g = asdict(cfg.gv)
    g["window"] = list(cfg.gv.window)
    g["kernels"] = []
    for k in cfg.gv.kernels:
        kd = asdict(k)
        kd["windings"] = {str(n): a for n, a in k.windings}
        g["kernels"].append(kd)
    return {"name": cfg.name, "model": m, "gv": g}
