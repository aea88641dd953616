"""Run configuration: file grammar, unit handling, validation.

Grammar: flat ``key = value`` lines, optionally grouped under INI-style
``[section]`` headers (sections are cosmetic; keys are globally unique).
``#`` and ``;`` start comments.  A value may carry a unit suffix, which is
converted on load so everything downstream is SI / linear:

    deg            angle in degrees          -> radians
    cm2            area in cm^2              -> m^2
    mw, w          optical power             -> W
    khz, mhz, hz   bandwidth                 -> Hz
    db             threshold in dB           -> linear (10^(x/10))
    m              metres (identity)

Unknown keys, malformed lines and out-of-range values raise ConfigError with
the offending key (and line number for parse errors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .channel import SystemModel, build_model
from .errors import ConfigError
from .montecarlo import McConfig
from .reliability import OutageQuery, TrafficModel
from .sinr import QuadratureSpec

__all__ = ["RunConfig", "load_config", "parse_config_text", "resolved_items"]

_UNIT_SCALES = {
    "": 1.0,
    "m": 1.0,
    "hz": 1.0,
    "w": 1.0,
    "khz": 1e3,
    "mhz": 1e6,
    "mw": 1e-3,
    "cm2": 1e-4,
    "m2": 1.0,
}

# key -> (attribute, kind); kind controls unit interpretation
_KEYS = {
    "semi_angle": ("semi_angle", "angle"),
    "fov": ("fov", "angle"),
    "area": ("area", "plain"),
    "responsivity": ("responsivity", "plain"),
    "ts": ("ts", "plain"),
    "zeta": ("zeta", "plain"),
    "eta": ("eta", "plain"),
    "n0": ("n0", "plain"),
    "bandwidth": ("bandwidth", "plain"),
    "pt": ("pt", "plain"),
    "height": ("height", "plain"),
    "radius": ("radius", "plain"),
    "users": ("users", "int"),
    "pa": ("pa", "float"),
    "threshold": ("threshold", "threshold"),
    "mode": ("mode", "str"),
    "mixture": ("mixture", "str"),
    "cf_nodes": ("cf_nodes", "int"),
    "inversion_t_max": ("inversion_t_max", "float"),
    "inversion_nodes": ("inversion_nodes", "int"),
    "lambda_nodes": ("lambda_nodes", "int"),
    "rel_tol": ("rel_tol", "float"),
    "trials": ("trials", "int"),
    "seed": ("seed", "int"),
    "stream_id": ("stream_id", "int"),
    "out": ("out", "str"),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters with defaults applied (SI units, linear SINR)."""

    semi_angle: float = math.radians(60.0)
    fov: float = math.pi / 2
    area: float = 1e-4
    responsivity: float = 0.4
    ts: float = 1.0
    zeta: float = 1.5
    eta: float = 0.8
    n0: float = 1e-21
    bandwidth: float = 200e3
    pt: float = 30e-3
    height: float = 2.5
    radius: float = 3.0
    users: int = 50
    pa: float = 0.01
    threshold: float = 10.0 ** 0.3   # 3 dB
    mode: str = "capture"
    mixture: str = "paper"
    cf_nodes: int = 4096
    inversion_t_max: float = 5e4
    inversion_nodes: int = 8_000_000
    lambda_nodes: int = 2048
    trials: int = 1_000_000
    seed: int = 1
    stream_id: int = 0
    rel_tol: float = 1e-6
    out: str = "-"
    defaulted: tuple = field(default=(), compare=False)

    def system_model(self) -> SystemModel:
        try:
            return build_model(
                semi_angle=self.semi_angle, fov=self.fov, area=self.area,
                responsivity=self.responsivity, filter_gain=self.ts,
                lens_refractive_index=self.zeta, eta=self.eta,
                noise_psd=self.n0, bandwidth=self.bandwidth, tx_power=self.pt,
                height=self.height, radius=self.radius,
            )
        except ValueError as exc:
            raise ConfigError(f"invalid system parameters: {exc}") from exc

    def traffic_model(self) -> TrafficModel:
        try:
            return TrafficModel(population=self.users, activation_prob=self.pa)
        except ValueError as exc:
            raise ConfigError(f"invalid key 'users'/'pa': {exc}") from exc

    def quadrature_spec(self) -> QuadratureSpec:
        try:
            return QuadratureSpec(
                cf_nodes=self.cf_nodes, inversion_t_max=self.inversion_t_max,
                inversion_nodes=self.inversion_nodes,
                lambda_nodes=self.lambda_nodes, rel_tol=self.rel_tol,
            )
        except ValueError as exc:
            raise ConfigError(f"invalid quadrature key: {exc}") from exc

    def mc_config(self) -> McConfig:
        try:
            return McConfig(trials=self.trials, seed=self.seed, stream_id=self.stream_id)
        except ValueError as exc:
            raise ConfigError(f"invalid key 'trials': {exc}") from exc

    def outage_query(self) -> OutageQuery:
        try:
            return OutageQuery(threshold=self.threshold, mode=self.mode,
                               mixture_mode=self.mixture)
        except ValueError as exc:
            raise ConfigError(f"invalid key 'threshold'/'mode'/'mixture': {exc}") from exc


def _parse_value(key: str, raw: str, kind: str):
    raw = raw.strip()
    parts = raw.split()
    token, unit = (parts[0], parts[1].lower()) if len(parts) == 2 else (raw, "")
    if len(parts) > 2:
        raise ConfigError(f"key '{key}': cannot parse value {raw!r}")
    if kind == "str":
        return raw
    if kind == "int":
        try:
            v = int(token)
        except ValueError as exc:
            raise ConfigError(f"key '{key}': expected integer, got {raw!r}") from exc
        if unit:
            raise ConfigError(f"key '{key}': unexpected unit {unit!r}")
        return v
    try:
        v = float(token)
    except ValueError as exc:
        raise ConfigError(f"key '{key}': expected number, got {raw!r}") from exc
    if kind == "angle":
        if unit in ("deg", "degree", "degrees"):
            return math.radians(v)
        if unit in ("", "rad"):
            return v
        raise ConfigError(f"key '{key}': unknown angle unit {unit!r}")
    if kind == "threshold":
        if unit == "db":
            return 10.0 ** (v / 10.0)
        if unit == "":
            return v
        raise ConfigError(f"key '{key}': unknown threshold unit {unit!r}")
    if unit not in _UNIT_SCALES:
        raise ConfigError(f"key '{key}': unknown unit {unit!r}")
    return v * _UNIT_SCALES[unit]


def parse_config_text(text: str, origin: str = "<config>") -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].split(";", 1)[0].strip()
        if not stripped or (stripped.startswith("[") and stripped.endswith("]")):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        key = key.lower()
        if key not in _KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key '{key}'")
        attr, kind = _KEYS[key]
        values[attr] = _parse_value(key, raw, kind)
    defaulted = tuple(
        f.name for f in fields(RunConfig)
        if f.name not in values and f.name != "defaulted"
    )
    cfg = RunConfig(**values, defaulted=defaulted)
    _validate(cfg)
    return cfg


def load_config(path: str) -> RunConfig:
    """Parse and validate a config file; defaults fill absent keys."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config_text(text, origin=path)


_BOUNDS = {
    "semi_angle": (0.0, math.pi / 2, "(0, pi/2) radians", False),
    "fov": (0.0, math.pi / 2, "(0, pi/2] radians", True),
    "area": (0.0, math.inf, "> 0", False),
    "responsivity": (0.0, math.inf, "> 0", False),
    "ts": (0.0, math.inf, "> 0", False),
    "zeta": (0.0, math.inf, "> 0", False),
    "eta": (0.0, math.inf, "> 0", False),
    "n0": (0.0, math.inf, "> 0", False),
    "bandwidth": (0.0, math.inf, "> 0", False),
    "pt": (0.0, math.inf, "> 0", False),
    "height": (0.0, math.inf, "> 0", False),
    "radius": (0.0, math.inf, "> 0", False),
    "threshold": (0.0, math.inf, "> 0", False),
    "inversion_t_max": (0.0, math.inf, "> 0", False),
    "rel_tol": (0.0, 1e-2, "(0, 1e-2]", True),
}


def _validate(cfg: RunConfig):
    for key, (lo, hi, desc, closed_hi) in _BOUNDS.items():
        v = getattr(cfg, key)
        ok = v > lo and (v <= hi if closed_hi else v < hi)
        if not ok:
            raise ConfigError(f"key '{key}' must be {desc}, got {v!r}")
    if not 0.0 <= cfg.pa <= 1.0:
        raise ConfigError(f"key 'pa' must be in [0, 1], got {cfg.pa!r}")
    if cfg.users < 1:
        raise ConfigError(f"key 'users' must be >= 1, got {cfg.users!r}")
    if cfg.trials < 1:
        raise ConfigError(f"key 'trials' must be >= 1, got {cfg.trials!r}")
    for key in ("cf_nodes", "inversion_nodes", "lambda_nodes"):
        if getattr(cfg, key) < 16:
            raise ConfigError(f"key '{key}' must be >= 16, got {getattr(cfg, key)!r}")
    if cfg.mode not in ("capture", "classical"):
        raise ConfigError(f"key 'mode' must be capture|classical, got {cfg.mode!r}")
    if cfg.mixture not in ("paper", "conditional"):
        raise ConfigError(f"key 'mixture' must be paper|conditional, got {cfg.mixture!r}")


def resolved_items(cfg: RunConfig):
    """(key, rendered value, was_defaulted) for the CSV header echo."""
    rows = []
    for f in fields(RunConfig):
        if f.name == "defaulted":
            continue
        v = getattr(cfg, f.name)
        rendered = f"{v:.12g}" if isinstance(v, float) else str(v)
        rows.append((f.name, rendered, f.name in cfg.defaulted))
    return rows


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    """Apply CLI flag overrides; overridden keys no longer count as defaulted."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    if not clean:
        return cfg
    defaulted = tuple(name for name in cfg.defaulted if name not in clean)
    cfg = replace(cfg, **clean, defaulted=defaulted)
    _validate(cfg)
    return cfg
