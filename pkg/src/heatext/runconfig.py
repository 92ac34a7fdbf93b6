"""Run configuration: dataclass, flat key = value config files, validation.

Config files are diff-able plain text: optional [section] headers, one
key = value per line, '#' comments. Command-line flags override file
values. Every field is validated against the geometry rules before any
run starts.
"""

from dataclasses import dataclass, field, fields, replace
from typing import Optional, Tuple

from .domain import (
    BallHole,
    ExteriorDomain,
    HoleSpec,
    RectHole,
    ThetaBoundary,
    required_far_radius,
)
from .errors import ConfigError, GeometryError

STUDIES = ("l1", "linf", "lp", "mass", "balance")


def parse_hole(spec: str) -> HoleSpec:
    """'ball:RADIUS' or 'rect:WXxWY' (half-widths)."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "ball":
            return BallHole(float(arg))
        if kind == "rect":
            wx, _, wy = arg.partition("x")
            return RectHole(float(wx), float(wy or wx))
    except (ValueError, GeometryError) as exc:
        raise ConfigError(f"bad hole spec '{spec}': {exc}") from exc
    raise ConfigError(f"unknown hole kind '{kind}' (expected ball: or rect:)")


def hole_to_spec(hole: HoleSpec) -> str:
    if isinstance(hole, BallHole):
        return f"ball:{hole.radius:g}"
    return f"rect:{hole.half_width_x:g}x{hole.half_width_y:g}"


@dataclass(frozen=True)
class RunConfig:
    dim: int = 3
    hole: HoleSpec = field(default_factory=lambda: BallHole(1.0))
    theta: float = 0.0
    preset: str = "explicit-remark"
    study: str = "linf"
    t_max: float = 100.0
    h: Optional[float] = None          # grid spacing (defaults per dim)
    dt: Optional[float] = None         # time step (defaults to h/2)
    r_out: Optional[float] = None      # defaults to the sizing rule
    snapshot_times: Optional[Tuple[float, ...]] = None
    delta: float = 1.0                 # near/far split knob
    audit: bool = False                # rerun at 2 r_out and compare verdicts
    out_dir: Optional[str] = None

    def resolved(self) -> "RunConfig":
        """Fill derived defaults and validate against the geometry rules."""
        if self.study not in STUDIES:
            raise ConfigError(f"study must be one of {STUDIES}, got '{self.study}'")
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta}")
        if self.t_max <= 0:
            raise ConfigError("t_max must be positive")
        h = self.h if self.h is not None else (1.0 / 64.0 if self.dim == 3 else 0.5)
        dt = self.dt if self.dt is not None else h / 2.0
        try:
            r_out = self.r_out if self.r_out is not None else required_far_radius(
                self.hole, self.t_max)
            ExteriorDomain(self.dim, self.hole, r_out)
        except GeometryError as exc:
            raise ConfigError(str(exc)) from exc
        snaps = self.snapshot_times
        if snaps is None:
            snaps = _default_snapshots(self.study, self.t_max)
        if dt > h:
            raise ConfigError(f"dt = {dt} exceeds the accuracy guard h = {h}")
        if max(snaps) > self.t_max + 1e-12:
            raise ConfigError("snapshot times must not exceed t_max")
        return replace(self, h=h, dt=dt, r_out=r_out, snapshot_times=tuple(snaps))

    def domain(self) -> ExteriorDomain:
        return ExteriorDomain(self.dim, self.hole, self.r_out)

    def theta_boundary(self) -> ThetaBoundary:
        return ThetaBoundary(self.theta)

    def run_id(self) -> str:
        th = ("%g" % self.theta).replace(".", "p")
        preset = self.preset.replace(":", "-").replace(",", "_").replace(";", "_")
        return (f"evolve-d{self.dim}-{hole_to_spec(self.hole).replace(':', '')}"
                f"-th{th}-{preset}-{self.study}-T{self.t_max:g}")

    def echo_rows(self):
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "hole":
                v = hole_to_spec(v)
            elif f.name == "snapshot_times" and v is not None:
                v = ";".join("%g" % t for t in v)
            out.append((f.name, str(v)))
        return out


def _default_snapshots(study: str, t_max: float) -> Tuple[float, ...]:
    base = {
        "l1": (10.0, 20.0, 50.0, 100.0, 200.0),
        "linf": (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0),
        "lp": (10.0, 20.0, 50.0, 100.0),
        "mass": (1.0, 10.0, 50.0, 100.0, 200.0),
        "balance": (1.0, 10.0, 100.0),
    }[study]
    times = tuple(t for t in base if t <= t_max)
    if not times or times[-1] < t_max:
        times = times + (t_max,)
    return times


def parse_config_file(path: str) -> dict:
    out = {}
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line or (line.startswith("[") and line.endswith("]")):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got '{line}'")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


_PARSERS = {
    "dim": int,
    "hole": parse_hole,
    "theta": float,
    "preset": str,
    "study": str,
    "t_max": float,
    "h": float,
    "dt": float,
    "r_out": float,
    "snapshot_times": lambda s: tuple(float(x) for x in s.replace(";", ",").split(",") if x),
    "delta": float,
    "audit": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "out_dir": str,
}


def runconfig_from_mapping(mapping: dict, overrides: Optional[dict] = None) -> RunConfig:
    merged = dict(mapping)
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    kwargs = {}
    for key, value in merged.items():
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key '{key}'")
        try:
            kwargs[key] = _PARSERS[key](value) if isinstance(value, str) else value
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"bad value for '{key}': {value!r} ({exc})") from exc
    return RunConfig(**kwargs)
