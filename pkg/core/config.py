"""Scenario configuration: nested dataclass sections loaded from a flat key = value file."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Iterator, List, Tuple

import numpy as np

from controllers.base import FlightController
from controllers.pid import CascadePID, PIDGains
from controllers.sliding_mode import (
    EQUIVALENT_FORMS,
    CommandFilter,
    ReachingGains,
    SlidingModeController,
    SurfaceParams,
)
from core.storage import atomic_write_text
from plant.dynamics import PlantParams, rotation_matrix
from plant.inertia import MassBudget
from plant.kinematics import DHRow, LinkInertial, Manipulator

DEFAULT_CONFIG_PATH = Path("scenario.cfg")
CONTROLLERS = ("PID", "FTSMC", "FOFTSMC")
PLANT_MODELS = ("simplified", "coupled")
JOINT_PROFILES = ("sine", "static")

_STEP_TOL = 1e-9
_LINK_KEY = re.compile(r"^link(\d+)$")


class ConfigError(ValueError):
    """Raised for unreadable, unknown or out-of-range configuration entries."""


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

@dataclass
class PlantConfig:
    model: str = "simplified"
    m_b: float = 2.65
    inertia: List[float] = field(default_factory=lambda: [0.05, 0.05, 0.05])
    g: float = 9.81
    # Recorded only: the plant takes total thrust and body torque directly.
    wheelbase: float = 0.55
    attitude_limit: float = 0.5


_TABLE_INERTIA = [290.2e-6, 0.3e-6, 32.5e-6, 0.3e-6, 324.2e-6, 2.1e-6, 32.5e-6, 2.1e-6, 141.3e-6]


@dataclass
class LinkConfig:
    mass: float
    com: List[float]
    inertia: List[float]
    dh: List[float]


def _default_links() -> List[LinkConfig]:
    return [
        LinkConfig(0.238, [-0.0068, 0.0003, -0.0488], list(_TABLE_INERTIA), [0.0, 0.012, 0.0935, 0.0]),
        LinkConfig(0.123, [0.1071, -0.0106, 0.0005], list(_TABLE_INERTIA), [-math.pi / 2, 0.0, 0.0, -1.3855]),
        LinkConfig(0.118, [0.0943, 0.0, 0.0005], list(_TABLE_INERTIA), [0.0, 0.13023, 0.0, 1.3855]),
        LinkConfig(0.224, [0.0605, 0.0061, 0.0], list(_TABLE_INERTIA), [0.0, 0.124, 0.0, 0.0]),
    ]


@dataclass
class ArmConfig:
    links: List[LinkConfig] = field(default_factory=_default_links)
    mount_offset: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    mount_rpy: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    fd_step: float = 1e-5


@dataclass
class SurfaceConfig:
    gamma1: float
    gamma2: float
    D: float = 1.5
    I: float = 0.8
    c1: float = 4.0
    c2: float = 2.0

    def params(self) -> SurfaceParams:
        return SurfaceParams(self.gamma1, self.gamma2, self.D, self.I, self.c1, self.c2)


@dataclass
class SurfacePair:
    position: SurfaceConfig = field(default_factory=lambda: SurfaceConfig(gamma1=0.4, gamma2=0.6))
    attitude: SurfaceConfig = field(default_factory=lambda: SurfaceConfig(gamma1=0.2, gamma2=0.8))


@dataclass
class ReachingConfig:
    eps: float
    h1: float = 1.0
    h2: float = 2.0

    def gains(self) -> ReachingGains:
        return ReachingGains(self.h1, self.h2)


@dataclass
class ReachingPair:
    position: ReachingConfig = field(default_factory=lambda: ReachingConfig(eps=0.5))
    attitude: ReachingConfig = field(default_factory=lambda: ReachingConfig(eps=0.002))


@dataclass
class SmcConfig:
    delta: float = 2e-3
    equivalent_control: str = "derivative"
    singularity_floor: float = 1e-6
    # Attitude command filter natural frequency (rad/s) and damping ratio.
    filter_frequency: float = 10.0
    filter_damping: float = 0.7


@dataclass
class TrajectoryConfig:
    hover_altitude: float = 1.0
    takeoff_time: float = 5.0
    joint_switch_time: float = 10.0
    joints: str = "sine"
    # Negative: the joint switch time, or 0 when the run ends before it.
    metrics_start: float = -1.0
    # 0 means the end of the run.
    metrics_end: float = 0.0


@dataclass
class InitialConfig:
    position: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    euler: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    velocity: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    rates: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])


@dataclass
class OutputConfig:
    directory: str = "./runs"


@dataclass
class ScenarioConfig:
    duration: float = 40.0
    dt: float = 1e-3
    controller: str = "FOFTSMC"
    memory_window: float = 1.0
    plant: PlantConfig = field(default_factory=PlantConfig)
    arm: ArmConfig = field(default_factory=ArmConfig)
    surface: SurfacePair = field(default_factory=SurfacePair)
    reaching: ReachingPair = field(default_factory=ReachingPair)
    smc: SmcConfig = field(default_factory=SmcConfig)
    pid: PIDGains = field(default_factory=PIDGains)
    trajectory: TrajectoryConfig = field(default_factory=TrajectoryConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def metrics_window(self) -> Tuple[float, float]:
        end = self.trajectory.metrics_end or self.duration
        start = self.trajectory.metrics_start
        if start < 0:
            switch = self.trajectory.joint_switch_time
            start = switch if switch < end else 0.0
        return start, end

    def validate(self) -> "ScenarioConfig":
        if not (self.duration > 0 and self.dt > 0):
            raise ConfigError(f"duration and dt must be positive (duration={self.duration}, dt={self.dt})")
        ratio = self.duration / self.dt
        if abs(ratio - round(ratio)) > _STEP_TOL * max(1.0, ratio):
            raise ConfigError(f"duration {self.duration} is not an integral multiple of dt {self.dt}")
        _one_of("controller", self.controller, CONTROLLERS)
        _one_of("plant.model", self.plant.model, PLANT_MODELS)
        _one_of("trajectory.joints", self.trajectory.joints, JOINT_PROFILES)
        _one_of("smc.equivalent_control", self.smc.equivalent_control, EQUIVALENT_FORMS)
        if not self.memory_window >= self.dt:
            raise ConfigError(f"memory_window must cover at least one step, got {self.memory_window}")
        if not self.smc.delta > 0 or not self.smc.singularity_floor > 0:
            raise ConfigError("smc.delta and smc.singularity_floor must be positive")
        for loop in ("position", "attitude"):
            if not getattr(self.reaching, loop).eps > 0:
                raise ConfigError(f"reaching.{loop}.eps must be positive")
        t_a, t_b = self.metrics_window
        if not 0 <= t_a < t_b <= self.duration + _STEP_TOL:
            raise ConfigError(f"Metrics window [{t_a}, {t_b}] must lie inside [0, {self.duration}]")
        if self.trajectory.takeoff_time < 0 or self.trajectory.joint_switch_time < 0:
            raise ConfigError("Trajectory times must be non-negative")
        # Constructors carry the physical range checks.
        try:
            self.surface.position.params()
            self.surface.attitude.params()
            self.reaching.position.gains()
            self.reaching.attitude.gains()
            build_plant_params(self)
            build_manipulator(self.arm)
            build_controller(self, "PID")
            CommandFilter(self.dt, self.smc.filter_frequency, self.smc.filter_damping)
        except (ValueError, ArithmeticError) as exc:
            raise ConfigError(str(exc)) from exc
        return self


def _one_of(key: str, value: str, allowed: Tuple[str, ...]) -> None:
    if value not in allowed:
        raise ConfigError(f"{key} must be one of {', '.join(allowed)}, got {value!r}")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def build_manipulator(arm: ArmConfig) -> Manipulator:
    chain = [DHRow(*link.dh) for link in arm.links]
    links = [
        LinkInertial(link.mass, np.array(link.com), np.array(link.inertia).reshape(3, 3))
        for link in arm.links
    ]
    mount = np.eye(4)
    mount[:3, :3] = rotation_matrix(np.array(arm.mount_rpy, dtype=float))
    mount[:3, 3] = arm.mount_offset
    return Manipulator(chain=chain, links=links, mount=mount)


def build_plant_params(cfg: ScenarioConfig) -> PlantParams:
    mass = MassBudget(m_b=cfg.plant.m_b, m_m=float(sum(link.mass for link in cfg.arm.links)))
    return PlantParams(mass=mass, I_b=np.array(cfg.plant.inertia, dtype=float), g=cfg.plant.g)


def build_controller(cfg: ScenarioConfig, name: str | None = None) -> FlightController:
    name = name or cfg.controller
    _one_of("controller", name, CONTROLLERS)
    params = build_plant_params(cfg)
    if name == "PID":
        return CascadePID(params, cfg.pid, dt=cfg.dt, attitude_limit=cfg.plant.attitude_limit)
    factory = SlidingModeController.integer_order if name == "FTSMC" else SlidingModeController
    return factory(
        params,
        cfg.surface.position.params(),
        cfg.surface.attitude.params(),
        cfg.reaching.position.gains(),
        cfg.reaching.attitude.gains(),
        dt=cfg.dt,
        memory_window=cfg.memory_window,
        eps_position=cfg.reaching.position.eps,
        eps_attitude=cfg.reaching.attitude.eps,
        delta=cfg.smc.delta,
        equivalent_form=cfg.smc.equivalent_control,
        attitude_limit=cfg.plant.attitude_limit,
        singularity_floor=cfg.smc.singularity_floor,
        filter_frequency=cfg.smc.filter_frequency,
        filter_damping=cfg.smc.filter_damping,
    )


# ---------------------------------------------------------------------------
# key = value file format
# ---------------------------------------------------------------------------

def _child(node: Any, part: str, key: str) -> Any:
    if isinstance(node, ArmConfig):
        m = _LINK_KEY.match(part)
        if m:
            index = int(m.group(1)) - 1
            if not 0 <= index < len(node.links):
                raise ConfigError(f"Unknown configuration key {key!r}: arm has {len(node.links)} links")
            return node.links[index]
    if is_dataclass(node) and part in {f.name for f in fields(node)} and part != "links":
        return getattr(node, part)
    raise ConfigError(f"Unknown configuration key {key!r}")


def _coerce(current: Any, raw: str, key: str) -> Any:
    try:
        if isinstance(current, list):
            values = [float(v) for v in raw.split(",") if v.strip()]
            if len(values) != len(current):
                raise ConfigError(f"{key} expects {len(current)} comma-separated numbers, got {len(values)}")
            return values
        if isinstance(current, str):
            return raw
        return float(raw)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"Cannot parse {key} = {raw!r}: {exc}") from exc


def set_value(cfg: ScenarioConfig, key: str, raw: str) -> None:
    """Assign one dotted key, coercing *raw* to the type of the current value."""
    *path, leaf = key.split(".")
    node: Any = cfg
    for part in path:
        node = _child(node, part, key)
    if not is_dataclass(node) or leaf not in {f.name for f in fields(node)} or leaf == "links":
        raise ConfigError(f"Unknown configuration key {key!r}")
    if is_dataclass(getattr(node, leaf)):
        raise ConfigError(f"{key!r} names a section, not a value")
    setattr(node, leaf, _coerce(getattr(node, leaf), raw.strip(), key))


def parse_config(text: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"Line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        set_value(cfg, key.strip(), value)
    return cfg


def load_config(path: Path | str | None = None) -> ScenarioConfig:
    """Read and validate a scenario file.

    With *path* None, ``./scenario.cfg`` is read when present and the built-in
    defaults are used otherwise.
    """
    if path is None:
        if not DEFAULT_CONFIG_PATH.is_file():
            return ScenarioConfig().validate()
        path = DEFAULT_CONFIG_PATH
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration {path}: {exc}") from exc
    return parse_config(text).validate()


def _items(node: Any, prefix: str = "") -> Iterator[Tuple[str, Any]]:
    for f in fields(node):
        value = getattr(node, f.name)
        if f.name == "links":
            for i, link in enumerate(value, start=1):
                yield from _items(link, f"{prefix}link{i}.")
        elif is_dataclass(value):
            yield from _items(value, f"{prefix}{f.name}.")
        else:
            yield f"{prefix}{f.name}", value


def _format(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(cfg: ScenarioConfig) -> str:
    lines = ["# Resolved scenario configuration"]
    lines += [f"{key} = {_format(value)}" for key, value in _items(cfg)]
    return "\n".join(lines) + "\n"


def save_config(cfg: ScenarioConfig, path: Path | str) -> Path:
    return atomic_write_text(path, dump_config(cfg))
