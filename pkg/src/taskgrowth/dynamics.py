"""Forward simulation of the full model.

Per step: the planner picks the automation frontier myopically (maximizing
current net output), then knowledge, task mass, and the GPT level advance by
a predictor-corrector rule (explicit half-step predictor, midpoint-flow
corrector; second order in dt).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

from .config import DiffusionParams, GrowthParams, ModelConfig
from .errors import ConfigError, ModelDomainError, NonFiniteStateError
from .production import FactorEndowment, friction_cost, optimal_frontier
from .profiles import check_ratio_monotone

KNOWLEDGE_FLOOR = 1e-12


def effective_gpt(A_bar: float, lam: float, z_star: float) -> float:
    """GPT effectiveness including the automation complementarity: A_bar*(1+lam*z*)."""
    if not (A_bar > 0.0):
        raise ModelDomainError("A_bar must be positive")
    if lam < 0.0 or z_star < 0.0:
        raise ModelDomainError("lambda and z* must be non-negative")
    return A_bar * (1.0 + lam * z_star)


def knowledge_flow(knowledge: float, R: float, A_eff: float, gp: GrowthParams) -> float:
    """Net knowledge production: zeta*A_eff^xi*R^alpha*K^phi - kappa*K^theta.

    A_eff already carries the (1 + lambda*z*) factor.  May be negative when
    validation costs dominate.
    """
    if not (knowledge > 0.0):
        raise ModelDomainError("knowledge must be positive")
    if R < 0.0:
        raise ModelDomainError("R&D labor must be non-negative")
    gross = gp.zeta * A_eff**gp.xi * R**gp.alpha * knowledge**gp.phi
    return gross - gp.kappa * knowledge**gp.theta


def task_mass_flow(M: float, R: float, A_eff: float, gp: GrowthParams) -> float:
    """Task creation: chi*A_eff^xi*R^alpha*M^phi (non-negative)."""
    if M < 1.0:
        raise ModelDomainError("task mass must be at least 1")
    if R < 0.0:
        raise ModelDomainError("R&D labor must be non-negative")
    return gp.chi * A_eff**gp.xi * R**gp.alpha * M**gp.phi


def gpt_diffusion_flow(A_bar: float, dp: DiffusionParams) -> float:
    """Catch-up toward the global frontier: rho*T*(A_tilde - A_bar)."""
    if not (A_bar > 0.0):
        raise ModelDomainError("A_bar must be positive")
    return dp.rho * dp.T * (dp.A_tilde - A_bar)


@dataclass
class SimState:
    t: float
    knowledge: float
    M: float
    A_bar: float
    z_star: float = 0.0


@dataclass(frozen=True)
class ShockEvent:
    """Multiplicative perturbation of one parameter over [t_start, t_end)."""

    param: str
    multiplier: float
    t_start: float
    t_end: float

    def __post_init__(self):
        if not (self.multiplier > 0.0):
            raise ConfigError("shock multiplier must be positive")
        if self.t_end < self.t_start:
            raise ConfigError("shock window must have t_end >= t_start")
        if self.param not in _SHOCKABLE:
            raise ConfigError(f"cannot shock parameter {self.param!r}")


_SHOCKABLE = {
    "K", "K_over_L", "alpha", "beta", "gamma", "zeta", "eta", "theta",
    "kappa", "lambda", "xi", "phi", "chi", "S_R", "rho", "T", "A_tilde",
}

_SHOCK_RE = re.compile(r"^([A-Za-z_,]+):\*([0-9.eE+-]+)@\[([^,]+),([^)]+)\)$")


def parse_shock_spec(spec: str) -> list[ShockEvent]:
    """Parse 'name[,name...]:*MULT@[t0,t1)' into shock events."""
    m = _SHOCK_RE.match(spec.strip())
    if not m:
        raise ConfigError(f"malformed shock spec {spec!r}; expected name[,name...]:*MULT@[t0,t1)")
    names, mult, t0, t1 = m.groups()
    try:
        mult, t0, t1 = float(mult), float(t0), float(t1)
    except ValueError as e:
        raise ConfigError(f"malformed shock spec {spec!r}: {e}") from e
    return [ShockEvent(n, mult, t0, t1) for n in names.split(",") if n]


def validate_schedule(shocks: list[ShockEvent]) -> None:
    """Reject overlapping windows on the same parameter."""
    by_param: dict[str, list[ShockEvent]] = {}
    for ev in shocks:
        by_param.setdefault(ev.param, []).append(ev)
    for param, evs in by_param.items():
        evs = sorted(evs, key=lambda e: e.t_start)
        for a, b in zip(evs, evs[1:]):
            if b.t_start < a.t_end:
                raise ConfigError(f"overlapping shock windows for parameter {param!r}")


def _apply_multipliers(cfg: ModelConfig, mults: dict[str, float]) -> ModelConfig:
    g, fr, dp, en = cfg.growth, cfg.friction, cfg.diffusion, cfg.endow
    growth_map = {"alpha": "alpha", "beta": "beta", "zeta": "zeta", "theta": "theta",
                  "kappa": "kappa", "lambda": "lam", "xi": "xi", "phi": "phi", "chi": "chi"}
    g_kw, fr_kw, dp_kw, en_kw = {}, {}, {}, {}
    for name, mult in mults.items():
        if name in growth_map:
            f = growth_map[name]
            g_kw[f] = getattr(g, f) * mult
        elif name == "gamma":
            fr_kw["gamma"] = fr.gamma * mult
        elif name == "eta":
            fr_kw["eta"] = fr.eta * mult
        elif name in ("K", "K_over_L"):
            en_kw["K"] = en.K * mult
        elif name == "S_R":
            en_kw["S_R"] = en.S_R * mult
        elif name == "rho":
            dp_kw["rho"] = dp.rho * mult
        elif name == "T":
            dp_kw["T"] = dp.T * mult
        elif name == "A_tilde":
            dp_kw["A_tilde"] = dp.A_tilde * mult
    kw = {}
    if g_kw:
        kw["growth"] = replace(g, **g_kw)
    if fr_kw:
        kw["friction"] = replace(fr, **fr_kw)
    if dp_kw:
        kw["diffusion"] = replace(dp, **dp_kw)
    if en_kw:
        kw["endow"] = FactorEndowment(
            K=en_kw.get("K", en.K), L_bar=en.L_bar, S_R=en_kw.get("S_R", en.S_R)
        )
    return replace(cfg, **kw) if kw else cfg


@dataclass
class Trajectory:
    """Recorded time series of a simulation run."""

    t: np.ndarray
    knowledge: np.ndarray
    task_mass: np.ndarray
    z_star: np.ndarray
    Y: np.ndarray
    Y_net: np.ndarray
    w: np.ndarray
    s_L: np.ndarray
    g_Y: np.ndarray
    g_K: np.ndarray
    A_eff: np.ndarray
    stagnated: bool = False
    converged: bool | None = None

    def __len__(self):
        return self.t.size

    def discounted_welfare(self, b: float) -> float:
        """Discounted sum of net output over the recorded horizon."""
        return float(np.sum(b ** np.arange(self.t.size) * self.Y_net))


TRAJECTORY_CSV_HEADER = "t,knowledge,task_mass,z_star,Y,Y_net,w,s_L,g_Y,g_K,A_eff"


def trajectory_to_csv(traj: Trajectory) -> str:
    lines = [TRAJECTORY_CSV_HEADER]
    cols = (traj.t, traj.knowledge, traj.task_mass, traj.z_star, traj.Y, traj.Y_net,
            traj.w, traj.s_L, traj.g_Y, traj.g_K, traj.A_eff)
    for row in zip(*cols):
        lines.append(",".join("%.12g" % v for v in row))
    return "\n".join(lines) + "\n"


def _frontier(cfg: ModelConfig, knowledge: float, M: float) -> float:
    return optimal_frontier(
        cfg.endow, cfg.sigma, cfg.profiles, M=M, knowledge=knowledge,
        beta=cfg.growth.beta, fr=cfg.friction, _skip_profile_check=True,
    )


def _flows(cfg: ModelConfig, knowledge, M, A_bar, z_star):
    g = cfg.growth
    A_eff = A_bar * (1.0 + g.lam * z_star)
    R = cfg.endow.R
    fK = knowledge_flow(knowledge, R, A_eff, g)
    fM = task_mass_flow(M, R, A_eff, g)
    fA = gpt_diffusion_flow(A_bar, cfg.diffusion)
    return fK, fM, fA, A_eff


def step(state: SimState, cfg: ModelConfig, dt: float) -> SimState:
    """Advance one time step.

    The frontier is chosen once at the step start and held fixed while the
    continuous states advance with the midpoint-corrected flow.
    """
    if not (dt > 0.0):
        raise ModelDomainError("dt must be positive")
    z = _frontier(cfg, state.knowledge, state.M)
    K1, M1, A1, stag = _advance(cfg, state.knowledge, state.M, state.A_bar, z, dt)
    if not all(map(math.isfinite, (K1, M1, A1))):
        raise NonFiniteStateError("non-finite state after step", step_index=None)
    out = SimState(t=state.t + dt, knowledge=K1, M=M1, A_bar=A1, z_star=z)
    return out


def _advance(cfg, knowledge, M, A_bar, z_star, dt):
    """Predictor-corrector update of (knowledge, M, A_bar) at fixed z*."""
    fK0, fM0, fA0, _ = _flows(cfg, knowledge, M, A_bar, z_star)
    half = 0.5 * dt
    K_mid = max(knowledge + half * fK0, KNOWLEDGE_FLOOR)
    M_mid = max(M + half * fM0, 1.0)
    A_mid = max(A_bar + half * fA0, KNOWLEDGE_FLOOR)
    fK, fM, fA, _ = _flows(cfg, K_mid, M_mid, A_mid, z_star)
    stagnated = False
    K1 = knowledge + dt * fK
    if K1 < KNOWLEDGE_FLOOR:
        K1 = KNOWLEDGE_FLOOR
        stagnated = True
    M1 = max(M + dt * fM, M)  # task flows are non-negative; guard float dust
    A1 = A_bar + dt * fA
    return K1, M1, A1, stagnated


def _instant(cfg: ModelConfig, knowledge, M, A_bar, z_star):
    """Key variables and flow-based growth rates at one instant."""
    en, sigma, g = cfg.endow, cfg.sigma, cfg.growth
    a_K, a_L = cfg.profiles
    s1 = sigma - 1.0
    I_K = max(a_K.integral(0.0, z_star, sigma), 0.0)
    I_L = max(a_L.integral(z_star, M, sigma), 0.0)
    y_K = I_K ** (1.0 / sigma) * en.K ** (s1 / sigma)
    y_L = I_L ** (1.0 / sigma) * en.L ** (s1 / sigma)
    total = y_K + y_L
    kb = knowledge**g.beta
    Y = kb * total ** (sigma / s1) if total > 0.0 else 0.0
    if y_L > 0.0:
        w = kb * total ** (1.0 / s1) * y_L / en.L
        s_L = y_L / total
    else:
        w, s_L = 0.0, 0.0
    Y_net = Y - friction_cost(z_star, cfg.friction)
    fK, fM, fA, A_eff = _flows(cfg, knowledge, M, A_bar, z_star)
    g_K = fK / knowledge
    g_Y = g.beta * g_K
    return Y, Y_net, w, s_L, g_Y, g_K, A_eff, fK, fM, fA


def simulate(
    cfg: ModelConfig,
    shocks: list[ShockEvent] | None = None,
    horizon: float | None = None,
    dt: float | None = None,
) -> Trajectory:
    """Run the full model forward and record every step.

    Shock multipliers apply during their half-open windows and revert after.
    Deterministic for a fixed configuration.
    """
    shocks = list(shocks or [])
    validate_schedule(shocks)
    horizon = cfg.horizon if horizon is None else horizon
    dt = cfg.dt if dt is None else dt
    if not (horizon > 0.0 and dt > 0.0):
        raise ModelDomainError("horizon and dt must be positive")
    if not check_ratio_monotone(cfg.a_K, cfg.a_L, max(cfg.M0, 1.0)):
        raise ModelDomainError("profile pair violates ratio monotonicity on [0, M0]")

    n_steps = int(round(horizon / dt))
    n_rec = n_steps + 1
    cols = {name: np.empty(n_rec) for name in (
        "t", "knowledge", "task_mass", "z_star", "Y", "Y_net", "w", "s_L",
        "g_Y", "g_K", "A_eff")}
    stagnated = False

    knowledge, M, A_bar = cfg.knowledge0, cfg.M0, cfg.A_bar0
    active_cache: tuple | None = None
    cfg_t = cfg
    for i in range(n_rec):
        t = i * dt
        if shocks:
            active = tuple(
                j for j, ev in enumerate(shocks) if ev.t_start <= t < ev.t_end
            )
            if active != active_cache:
                mults: dict[str, float] = {}
                for j in active:
                    ev = shocks[j]
                    mults[ev.param] = mults.get(ev.param, 1.0) * ev.multiplier
                cfg_t = _apply_multipliers(cfg, mults) if mults else cfg
                active_cache = active
        try:
            z = _frontier(cfg_t, knowledge, M)
            (Y, Y_net, w, s_L, g_Y, g_K, A_eff, fK, fM, fA) = _instant(
                cfg_t, knowledge, M, A_bar, z
            )
        except (ModelDomainError, OverflowError) as e:
            raise NonFiniteStateError(
                f"non-finite state at step {i} (t={t:g}): {e}", step_index=i
            ) from e
        vals = (t, knowledge, M, z, Y, Y_net, w, s_L, g_Y, g_K, A_eff)
        if not all(map(math.isfinite, vals)):
            raise NonFiniteStateError(
                f"non-finite state at step {i} (t={t:g})", step_index=i
            )
        for name, v in zip(cols, vals):
            cols[name][i] = v
        if i < n_steps:
            try:
                knowledge, M, A_bar, stag = _advance(cfg_t, knowledge, M, A_bar, z, dt)
            except (ModelDomainError, OverflowError) as e:
                raise NonFiniteStateError(
                    f"non-finite state at step {i + 1}: {e}", step_index=i + 1
                ) from e
            stagnated = stagnated or stag

    return Trajectory(stagnated=stagnated, **cols)
