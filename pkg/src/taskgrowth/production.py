"""Single-instant production mathematics.

Covers the CES task aggregate, effective factor outputs after optimal
within-factor allocation, wages and labor share, the lock-in friction cost,
and the planner's choice of the automation frontier z*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelDomainError, ProfileViolationError
from .profiles import ProductivityProfile, check_ratio_monotone, _check_sigma

# K/Y above this value flags ineffective capital allocation in statics tables.
CAPITAL_OUTPUT_FLAG_THRESHOLD = 3.0

FRONTIER_GRID_POINTS = 256
FRONTIER_TOL = 1e-8

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class FactorEndowment:
    """Fixed factor supplies: capital stock, total labor, and R&D labor share."""

    K: float
    L_bar: float = 1.0
    S_R: float = 0.0

    def __post_init__(self):
        if not (self.K > 0.0):
            raise ModelDomainError("capital stock K must be positive")
        if not (self.L_bar > 0.0):
            raise ModelDomainError("total labor supply must be positive")
        if not (0.0 <= self.S_R <= 1.0):
            raise ModelDomainError("R&D labor share must lie in [0, 1]")
        if self.L <= 0.0:
            raise ModelDomainError("production labor (1 - S_R) * L_bar must be positive")

    @property
    def L(self) -> float:
        """Production labor."""
        return (1.0 - self.S_R) * self.L_bar

    @property
    def R(self) -> float:
        """R&D labor."""
        return self.S_R * self.L_bar


@dataclass(frozen=True)
class FrictionParams:
    """Lock-in friction cost Phi(z*) = gamma * (z0 * z* + z***(eta+1) / (eta+1))."""

    gamma: float = 0.0
    eta: float = 2.0
    z0: float = 0.0

    def __post_init__(self):
        if self.gamma < 0.0:
            raise ModelDomainError("friction scale gamma must be non-negative")
        if not (self.eta > 0.0):
            raise ModelDomainError("friction curvature eta must be positive")
        if self.z0 < 0.0:
            raise ModelDomainError("per-task base cost z0 must be non-negative")


@dataclass(frozen=True)
class StaticEquilibrium:
    z_star: float
    y_K: float
    y_L: float
    Y: float
    Y_net: float
    w: float
    s_L: float
    K_over_Y: float

    @property
    def flag_KY(self) -> bool:
        return self.K_over_Y > CAPITAL_OUTPUT_FLAG_THRESHOLD


def effective_outputs(z_star, endow, sigma, profiles, M):
    """Effective factor outputs (y_K, y_L) at automation frontier z_star.

    profiles is the (a_K, a_L) pair.  Capital performs tasks [0, z*], labor
    performs (z*, M]; each factor is allocated optimally within its range.
    """
    _check_sigma(sigma)
    if not (0.0 <= z_star <= M):
        raise ModelDomainError(f"frontier z*={z_star} outside [0, {M}]")
    a_K, a_L = profiles
    s1 = sigma - 1.0
    I_K = max(a_K.integral(0.0, z_star, sigma), 0.0)
    I_L = max(a_L.integral(z_star, M, sigma), 0.0)
    y_K = I_K ** (1.0 / sigma) * endow.K ** (s1 / sigma)
    y_L = I_L ** (1.0 / sigma) * endow.L ** (s1 / sigma)
    return y_K, y_L


def aggregate_output(y_K, y_L, sigma, knowledge=1.0, beta=0.0):
    """Gross output K(t)^beta * (y_K + y_L)^(sigma/(sigma-1))."""
    _check_sigma(sigma)
    if y_K < 0.0 or y_L < 0.0:
        raise ModelDomainError("effective outputs must be non-negative")
    if not (knowledge > 0.0):
        raise ModelDomainError("knowledge stock must be positive")
    if beta < 0.0:
        raise ModelDomainError("beta must be non-negative")
    total = y_K + y_L
    if total == 0.0:
        return 0.0
    Y = knowledge**beta * total ** (sigma / (sigma - 1.0))
    if not math.isfinite(Y):
        raise ModelDomainError("sigma-degenerate: non-finite output (sigma too close to 1?)")
    return Y


def wage_and_labor_share(z_star, endow, sigma, profiles, M, knowledge=1.0, beta=0.0):
    """Wage from the marginal product of production labor, and the labor share.

    w = K^beta * (y_K + y_L)^(1/(sigma-1)) * y_L / L,  s_L = y_L / (y_K + y_L).
    s_L does not depend on the knowledge stock.
    """
    L = endow.L
    if L <= 0.0:
        raise ModelDomainError("zero-labor: production labor must be positive")
    y_K, y_L = effective_outputs(z_star, endow, sigma, profiles, M)
    total = y_K + y_L
    if y_L == 0.0:
        return 0.0, 0.0
    w = knowledge**beta * total ** (1.0 / (sigma - 1.0)) * y_L / L
    s_L = y_L / total
    return w, s_L


def friction_cost(z_star, fr: FrictionParams):
    """Aggregate lock-in cost Phi(z*); zero at z* = 0 and non-decreasing."""
    if z_star < 0.0:
        raise ModelDomainError("z* must be non-negative")
    return fr.gamma * (fr.z0 * z_star + z_star ** (fr.eta + 1.0) / (fr.eta + 1.0))


def _net_output_fn(endow, sigma, profiles, M, knowledge, beta, fr):
    """Scalar net-output objective z* -> Y(z*) - Phi(z*), in closed form."""
    a_K, a_L = profiles
    s1 = sigma - 1.0
    inv_sigma = 1.0 / sigma
    KS = endow.K ** (s1 / sigma)
    LS = endow.L ** (s1 / sigma)
    kb = knowledge**beta
    ces_exp = sigma / s1
    I_L_total = a_L.integral(0.0, M, sigma)
    gamma, eta, z0 = fr.gamma, fr.eta, fr.z0

    def net(z):
        I_K = a_K.integral(0.0, z, sigma)
        I_L = I_L_total - a_L.integral(0.0, z, sigma)
        if I_K < 0.0:
            I_K = 0.0
        if I_L < 0.0:
            I_L = 0.0
        total = I_K**inv_sigma * KS + I_L**inv_sigma * LS
        Y = kb * total**ces_exp if total > 0.0 else 0.0
        return Y - gamma * (z0 * z + z ** (eta + 1.0) / (eta + 1.0))

    return net


def _net_output_grid(z, endow, sigma, profiles, M, knowledge, beta, fr):
    """Vectorized net output over a z* grid."""
    a_K, a_L = profiles
    s1 = sigma - 1.0
    KS = endow.K ** (s1 / sigma)
    LS = endow.L ** (s1 / sigma)
    I_K = np.clip(a_K.integral_grid(z, 0.0, sigma), 0.0, None)
    I_L = np.clip(
        a_L.integral(0.0, M, sigma) - a_L.integral_grid(z, 0.0, sigma), 0.0, None
    )
    total = I_K ** (1.0 / sigma) * KS + I_L ** (1.0 / sigma) * LS
    with np.errstate(divide="ignore", over="ignore"):
        Y = np.where(total > 0.0, knowledge**beta * total ** (sigma / s1), 0.0)
    Phi = fr.gamma * (fr.z0 * z + z ** (fr.eta + 1.0) / (fr.eta + 1.0))
    return Y - Phi


def optimal_frontier(
    endow,
    sigma,
    profiles,
    M=1.0,
    knowledge=1.0,
    beta=0.0,
    fr=FrictionParams(),
    grid_points=FRONTIER_GRID_POINTS,
    tol=FRONTIER_TOL,
    _skip_profile_check=False,
):
    """Planner's frontier: argmax over z* in [0, M] of Y(z*) - Phi(z*).

    Coarse grid scan (global guard against multi-modality) followed by
    golden-section refinement on the bracketing interval.  Deterministic;
    ties resolve toward the smaller z*.
    """
    _check_sigma(sigma)
    if not _skip_profile_check and not check_ratio_monotone(profiles[0], profiles[1], M):
        raise ProfileViolationError(
            "profile pair violates ratio monotonicity of a_L(z)/a_K(z) on [0, M]"
        )
    z = np.linspace(0.0, M, grid_points)
    vals = _net_output_grid(z, endow, sigma, profiles, M, knowledge, beta, fr)
    if not np.all(np.isfinite(vals)):
        raise ModelDomainError("non-finite net output on the frontier grid")
    i = int(np.argmax(vals))
    a = z[max(i - 1, 0)]
    b = z[min(i + 1, grid_points - 1)]
    net = _net_output_fn(endow, sigma, profiles, M, knowledge, beta, fr)

    # golden-section refinement on [a, b]
    dist = b - a
    if dist <= tol:
        return 0.5 * (a + b)
    n = int(math.ceil(math.log(tol / dist) / math.log(_INV_PHI)))
    c = a + _INV_PHI_SQ * dist
    d = a + _INV_PHI * dist
    yc = net(c)
    yd = net(d)
    for _ in range(n - 1):
        dist *= _INV_PHI
        if yc >= yd:  # maximizing; prefer the left interval on ties -> smaller z*
            b, d, yd = d, c, yc
            c = a + _INV_PHI_SQ * dist
            yc = net(c)
        else:
            a, c, yc = c, d, yd
            d = a + _INV_PHI * dist
            yd = net(d)
    z_ref = 0.5 * (a + b)
    # the refined point can only improve on the grid argmax
    if net(z_ref) < vals[i]:
        z_ref = z[i]
    return float(min(max(z_ref, 0.0), M))


def static_equilibrium(z_star, endow, sigma, profiles, M=1.0, knowledge=1.0, beta=0.0,
                       fr=FrictionParams()):
    """Evaluate all static key variables at a given frontier."""
    y_K, y_L = effective_outputs(z_star, endow, sigma, profiles, M)
    Y = aggregate_output(y_K, y_L, sigma, knowledge, beta)
    Phi = friction_cost(z_star, fr)
    total = y_K + y_L
    if y_L == 0.0 or endow.L <= 0.0:
        w, s_L = 0.0, 0.0
    else:
        w = knowledge**beta * total ** (1.0 / (sigma - 1.0)) * y_L / endow.L
        s_L = y_L / total
    K_over_Y = endow.K / Y if Y > 0.0 else math.inf
    return StaticEquilibrium(
        z_star=float(z_star), y_K=y_K, y_L=y_L, Y=Y, Y_net=Y - Phi,
        w=w, s_L=s_L, K_over_Y=K_over_Y,
    )


def statics_sweep(endow, sigma, profiles, M=1.0, knowledge=1.0, beta=0.0,
                  fr=FrictionParams(), grid_size=256):
    """Key variables on a uniform z* grid over [0, M]."""
    if grid_size < 2:
        raise ModelDomainError("grid_size must be at least 2")
    rows = []
    for z in np.linspace(0.0, M, grid_size):
        rows.append(static_equilibrium(z, endow, sigma, profiles, M, knowledge, beta, fr))
    return rows


STATICS_CSV_HEADER = "z_star,Y,Y_per_L,w,s_L,K_over_Y,flag_KY_gt_3"


def statics_to_csv(rows, endow) -> str:
    """Serialize a statics table; floats carry 9 significant digits."""
    lines = [STATICS_CSV_HEADER]
    for r in rows:
        lines.append(
            "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d"
            % (r.z_star, r.Y, r.Y / endow.L, r.w, r.s_L, r.K_over_Y, int(r.flag_KY))
        )
    return "\n".join(lines) + "\n"
