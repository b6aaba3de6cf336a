"""Flat `section.key = value` configuration files for scenario runs.

The format is deliberately minimal: one assignment per line, `#`
comments, values parsed as bool/int/float/string.  Every key must be
known (a typo is an error, never a silently ignored default), and every
known key has a documented default.
"""

from dataclasses import dataclass, field, fields

from .closures import PhysicalConstants
from .diagnostics import WeightParams
from .initial_data import TurningParams


class ConfigError(Exception):
    pass


SCENARIOS = (
    "muskat-linear",
    "muskat-turning",
    "muskat-breakdown",
    "waterwave-linear",
    "waterwave-turning",
    "ck-compare",
    "rt-verify",
)


@dataclass
class GridConfig:
    n: int = 256
    periodic: bool = True
    L: float = 40.0


@dataclass
class NumericsConfig:
    dt: float = 2e-3
    t_end: float = 0.5
    filter_threshold: float = 1e-12
    snapshot_cadence: int = 10


@dataclass
class StripConfig:
    r0: float = 0.04
    M: int = 512            # mode/grid count used by the strip solver
    T: float = 0.02         # continuation horizon
    shrink: str = "linear"  # or "exponential"
    gamma: float = 1.0      # exponential-shrink rate
    panels: int = 64
    tol: float = 1e-10
    max_iter: int = 50


@dataclass
class TurningConfig:
    beta1: float = 1.0
    beta2: float = 3.0
    beta3: float = 5.0
    b: float = 3.0
    cbar: float = -0.2
    mollify_tau: float = 0.0
    tilt: float = 0.05


@dataclass
class WeightConfig:
    A: float = 100.0
    tau: float = 0.005
    literal_hbar: bool = False


@dataclass
class PhysicsConfig:
    rho1: float = 0.0
    rho2: float = 1.0
    g: float = 1.0
    mu: float = 1.0
    kappa: float = 1.0


@dataclass
class WaveConfig:
    delta: float = 1e-3     # backward-construction horizon for the datum
    epsilon: float = 1e-4   # linear-scenario amplitude
    k: int = 2              # linear-scenario wavenumber


@dataclass
class ScenarioConfig:
    scenario: str = "muskat-linear"
    seed: int = 0
    output_dir: str = "out"
    grid: GridConfig = field(default_factory=GridConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    turning: TurningConfig = field(default_factory=TurningConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    strip: StripConfig = field(default_factory=StripConfig)
    weights: WeightConfig = field(default_factory=WeightConfig)
    wave: WaveConfig = field(default_factory=WaveConfig)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(
                f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")

    def constants(self) -> PhysicalConstants:
        p = self.physics
        return PhysicalConstants(rho1=p.rho1, rho2=p.rho2, g=p.g,
                                 mu=p.mu, kappa=p.kappa)

    def turning_params(self) -> TurningParams:
        t = self.turning
        return TurningParams(beta1=t.beta1, beta2=t.beta2, beta3=t.beta3,
                             b=t.b, cbar=t.cbar, mollify_tau=t.mollify_tau)

    def weight_params(self) -> WeightParams:
        w = self.weights
        return WeightParams(A=w.A, tau=w.tau, literal_hbar=w.literal_hbar)


_TOP_LEVEL = {"scenario": str, "seed": int, "output_dir": str}
_SECTIONS = {
    "grid": GridConfig,
    "physics": PhysicsConfig,
    "turning": TurningConfig,
    "numerics": NumericsConfig,
    "strip": StripConfig,
    "weights": WeightConfig,
    "wave": WaveConfig,
}


def _parse_value(text: str, target_type):
    text = text.strip()
    if target_type is bool:
        if text.lower() in ("true", "1", "yes"):
            return True
        if text.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"expected a boolean, got {text!r}")
    if target_type is int:
        try:
            return int(text)
        except ValueError as exc:
            raise ConfigError(f"expected an integer, got {text!r}") from exc
    if target_type is float:
        try:
            return float(text)
        except ValueError as exc:
            raise ConfigError(f"expected a number, got {text!r}") from exc
    return text.strip("\"'")


def apply_assignment(config: ScenarioConfig, key: str, value: str) -> None:
    """Apply one `section.key` or top-level assignment, validating the key."""
    key = key.strip()
    if "." not in key:
        if key not in _TOP_LEVEL:
            raise ConfigError(f"unknown key {key!r}")
        setattr(config, key, _parse_value(value, _TOP_LEVEL[key]))
        if key == "scenario" and config.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {config.scenario!r}")
        return
    section, _, name = key.partition(".")
    if section not in _SECTIONS:
        raise ConfigError(f"unknown section {section!r} in key {key!r}")
    target = getattr(config, section)
    known = {f.name: f.type for f in fields(target)}
    if name not in known:
        raise ConfigError(f"unknown key {key!r} (section {section!r} has: "
                          f"{', '.join(sorted(known))})")
    current = getattr(target, name)
    setattr(target, name, _parse_value(value, type(current)))


def load_config(path) -> ScenarioConfig:
    config = ScenarioConfig()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            try:
                apply_assignment(config, key, value)
            except ConfigError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return config


def dump_config(config: ScenarioConfig) -> str:
    lines = [f"scenario = {config.scenario}",
             f"seed = {config.seed}",
             f"output_dir = {config.output_dir}"]
    for section, cls in _SECTIONS.items():
        target = getattr(config, section)
        for f in fields(cls):
            lines.append(f"{section}.{f.name} = {getattr(target, f.name)}")
    return "\n".join(lines) + "\n"
