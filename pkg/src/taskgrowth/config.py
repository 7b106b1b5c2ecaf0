"""Structural parameters, baseline values, and JSON config ingestion."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import ConfigError, ModelDomainError
from .production import FactorEndowment, FrictionParams
from .profiles import ProductivityProfile


@dataclass(frozen=True)
class GrowthParams:
    """Knowledge and task-creation dynamics parameters."""

    zeta: float = 0.1     # R&D productivity
    alpha: float = 0.4    # R&D-labor elasticity
    phi: float = 0.5      # intertemporal spillover strength
    beta: float = 0.3     # output elasticity w.r.t. knowledge
    xi: float = 0.4       # GPT elasticity in knowledge production
    kappa: float = 0.1    # validation-cost scale
    theta: float = 2.0    # validation-cost curvature
    lam: float = 2.0      # automation-GPT complementarity
    chi: float = 0.003    # task-expansion rate

    def __post_init__(self):
        if self.zeta < 0.0:
            raise ModelDomainError("zeta must be non-negative")
        if not (0.0 < self.alpha <= 1.0):
            raise ModelDomainError("alpha must lie in (0, 1]")
        if not (0.0 <= self.phi <= 1.0):
            raise ModelDomainError("phi must lie in [0, 1]")
        if self.beta < 0.0:
            raise ModelDomainError("beta must be non-negative")
        if self.xi < 0.0:
            raise ModelDomainError("xi must be non-negative")
        if self.kappa < 0.0:
            raise ModelDomainError("kappa must be non-negative")
        if not (self.theta > 0.0):
            raise ModelDomainError("theta must be positive")
        if self.lam < 0.0:
            raise ModelDomainError("lambda must be non-negative")
        if self.chi < 0.0:
            raise ModelDomainError("chi must be non-negative")


@dataclass(frozen=True)
class DiffusionParams:
    """Convergence of the domestic GPT level toward the global frontier."""

    rho: float = 0.0      # diffusion speed; 0 freezes A_bar
    T: float = 1.0        # openness / absorptive capacity
    A_tilde: float = 1.0  # global frontier level

    def __post_init__(self):
        if self.rho < 0.0:
            raise ModelDomainError("rho must be non-negative")
        if self.T < 0.0:
            raise ModelDomainError("T must be non-negative")
        if not (self.A_tilde > 0.0):
            raise ModelDomainError("A_tilde must be positive")


def default_profiles():
    """Capital constant, labor exponential: a_L/a_K = e^z is increasing."""
    return (
        ProductivityProfile("constant", scale=1.0),
        ProductivityProfile("exponential", scale=1.0, shape=1.0),
    )


@dataclass(frozen=True)
class ModelConfig:
    """Full resolved configuration of a simulation run."""

    endow: FactorEndowment
    sigma: float = 2.0
    growth: GrowthParams = field(default_factory=GrowthParams)
    friction: FrictionParams = field(default_factory=lambda: FrictionParams(gamma=0.3, eta=2.0))
    diffusion: DiffusionParams = field(default_factory=DiffusionParams)
    a_K: ProductivityProfile = field(default_factory=lambda: ProductivityProfile("constant"))
    a_L: ProductivityProfile = field(
        default_factory=lambda: ProductivityProfile("exponential", scale=1.0, shape=1.0)
    )
    knowledge0: float = 0.1
    M0: float = 1.0
    A_bar0: float = 1.0
    dt: float = 0.1
    horizon: float = 50.0
    discount: float = 0.96

    def __post_init__(self):
        if not (self.sigma > 0.0) or self.sigma == 1.0:
            raise ModelDomainError("sigma: need sigma > 0 and sigma != 1")
        if not (self.knowledge0 > 0.0):
            raise ModelDomainError("knowledge0 must be positive")
        if self.M0 < 1.0:
            raise ModelDomainError("M0 must be at least 1")
        if not (self.A_bar0 > 0.0):
            raise ModelDomainError("A_bar0 must be positive")
        if not (self.dt > 0.0) or not (self.horizon > 0.0):
            raise ModelDomainError("dt and horizon must be positive")
        if not (0.0 < self.discount <= 1.0):
            raise ModelDomainError("discount must lie in (0, 1]")

    @property
    def profiles(self):
        return (self.a_K, self.a_L)

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))


# Table of baseline values and exploration ranges for the sampled parameters.
# K_over_L is treated as an additional sampled feature (reference value 3).
BASELINE = {
    "alpha": 0.4, "beta": 0.3, "gamma": 0.3, "zeta": 0.1, "eta": 2.0,
    "theta": 2.0, "kappa": 0.1, "lambda": 2.0, "xi": 0.4, "sigma": 2.0,
    "S_R": 0.015, "phi": 0.5, "chi": 0.003, "K_over_L": 3.0,
}

RANGES = {
    "alpha": (0.4, 0.7), "beta": (0.2, 0.6), "gamma": (0.0, 1.0),
    "zeta": (0.0, 0.4), "eta": (1.0, 3.0), "theta": (1.0, 3.0),
    "kappa": (0.0, 0.3), "lambda": (0.0, 3.0), "xi": (0.2, 0.6),
    "sigma": (0.8, 3.0), "S_R": (0.01, 0.03), "phi": (0.25, 1.0),
    "chi": (0.0, 0.01), "K_over_L": (1.0, 5.0),
}

FEATURE_NAMES = list(RANGES)

_SCALAR_KEYS = set(BASELINE) | {
    "L_bar", "K", "z0", "rho", "T", "A_tilde",
    "knowledge0", "M0", "A_bar0", "dt", "horizon", "discount",
}
_PROFILE_KEYS = {"a_K", "a_L"}


def _profile_from_dict(d) -> ProductivityProfile:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError(f"profile spec must be an object with a 'kind' key, got {d!r}")
    allowed = {"kind", "scale", "shape", "offset"}
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown profile keys: {sorted(extra)}")
    try:
        return ProductivityProfile(**d)
    except (TypeError, ModelDomainError) as e:
        raise ConfigError(str(e)) from e


def config_from_dict(doc: dict) -> ModelConfig:
    """Build a ModelConfig from a JSON-style dict; omitted keys take defaults.

    Keys mirror the parameter names of the baseline table ("alpha", "lambda",
    ...), plus endowment, initial-condition, diffusion, and run controls.
    """
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = set(doc) - _SCALAR_KEYS - _PROFILE_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    vals = dict(BASELINE)
    for k in _SCALAR_KEYS:
        if k in doc:
            v = doc[k]
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"config key {k!r} must be a number, got {v!r}")
            vals[k] = float(v)

    L_bar = vals.get("L_bar", 1.0)
    S_R = vals["S_R"]
    L = (1.0 - S_R) * L_bar
    K = vals.get("K", vals["K_over_L"] * L)
    try:
        endow = FactorEndowment(K=K, L_bar=L_bar, S_R=S_R)
        growth = GrowthParams(
            zeta=vals["zeta"], alpha=vals["alpha"], phi=vals["phi"], beta=vals["beta"],
            xi=vals["xi"], kappa=vals["kappa"], theta=vals["theta"],
            lam=vals["lambda"], chi=vals["chi"],
        )
        friction = FrictionParams(gamma=vals["gamma"], eta=vals["eta"], z0=vals.get("z0", 0.0))
        diffusion = DiffusionParams(
            rho=vals.get("rho", 0.0), T=vals.get("T", 1.0), A_tilde=vals.get("A_tilde", 1.0)
        )
        a_K, a_L = default_profiles()
        if "a_K" in doc:
            a_K = _profile_from_dict(doc["a_K"])
        if "a_L" in doc:
            a_L = _profile_from_dict(doc["a_L"])
        return ModelConfig(
            endow=endow, sigma=vals["sigma"], growth=growth, friction=friction,
            diffusion=diffusion, a_K=a_K, a_L=a_L,
            knowledge0=vals.get("knowledge0", 0.1), M0=vals.get("M0", 1.0),
            A_bar0=vals.get("A_bar0", 1.0), dt=vals.get("dt", 0.1),
            horizon=vals.get("horizon", 50.0), discount=vals.get("discount", 0.96),
        )
    except ModelDomainError:
        raise


def load_config(path) -> ModelConfig:
    try:
        with open(path) as f:
            doc = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return config_from_dict(doc)


def config_to_dict(cfg: ModelConfig) -> dict:
    """Fully resolved config as a JSON-serializable dict (manifest payload)."""

    def prof(p):
        return {"kind": p.kind, "scale": p.scale, "shape": p.shape, "offset": p.offset}

    g, f, d = cfg.growth, cfg.friction, cfg.diffusion
    return {
        "alpha": g.alpha, "beta": g.beta, "gamma": f.gamma, "zeta": g.zeta,
        "eta": f.eta, "theta": g.theta, "kappa": g.kappa, "lambda": g.lam,
        "xi": g.xi, "sigma": cfg.sigma, "S_R": cfg.endow.S_R, "phi": g.phi,
        "chi": g.chi, "K": cfg.endow.K, "L_bar": cfg.endow.L_bar,
        "K_over_L": cfg.endow.K / cfg.endow.L, "z0": f.z0,
        "rho": d.rho, "T": d.T, "A_tilde": d.A_tilde,
        "knowledge0": cfg.knowledge0, "M0": cfg.M0, "A_bar0": cfg.A_bar0,
        "dt": cfg.dt, "horizon": cfg.horizon, "discount": cfg.discount,
        "a_K": prof(cfg.a_K), "a_L": prof(cfg.a_L),
    }


SCENARIOS = ("0", "knowledge", "adaptive", "full")


def apply_scenario(cfg: ModelConfig, scenario: str) -> ModelConfig:
    """Overlay a scenario preset: progressively enable knowledge accumulation,
    task creation with automation-GPT coupling, and capital frictions."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose one of {SCENARIOS}")
    g = cfg.growth
    if scenario == "0":
        # kappa is zeroed too so the validation drag cannot move the stock
        return replace(
            cfg,
            growth=replace(g, zeta=0.0, lam=0.0, chi=0.0, kappa=0.0),
            friction=replace(cfg.friction, gamma=0.0),
        )
    if scenario == "knowledge":
        return replace(
            cfg,
            growth=replace(g, lam=0.0, chi=0.0),
            friction=replace(cfg.friction, gamma=0.0),
        )
    if scenario == "adaptive":
        return replace(cfg, friction=replace(cfg.friction, gamma=0.0))
    return cfg
