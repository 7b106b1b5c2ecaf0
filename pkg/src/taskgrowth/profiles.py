"""Task productivity profiles and their CES integral kernels.

A profile assigns a productivity a(z) to each task index z.  The production
math only ever consumes profiles through the kernel

    I(lo, hi) = integral of a(z)**(sigma - 1) dz over [lo, hi],

which has a closed form for all three supported families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ModelDomainError

PROFILE_KINDS = ("constant", "power", "exponential")


def _check_sigma(sigma: float) -> None:
    if not (sigma > 0.0) or sigma == 1.0:
        raise ModelDomainError(f"unsupported sigma={sigma!r}: need sigma > 0 and sigma != 1")


@dataclass(frozen=True)
class ProductivityProfile:
    """Functional form of a task productivity schedule a(z).

    kind:   one of 'constant', 'power', 'exponential'
    scale:  multiplicative constant c > 0
    shape:  exponent p (power) or rate mu (exponential); ignored for constant
    offset: z-offset for the power family, a(z) = c * (z + offset)**p
    """

    kind: str
    scale: float = 1.0
    shape: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ModelDomainError(f"unknown profile kind {self.kind!r}")
        if not (self.scale > 0.0):
            raise ModelDomainError("profile scale must be positive")
        if self.kind == "power" and self.offset < 0.0:
            raise ModelDomainError("power profile offset must be non-negative")

    def value(self, z):
        """Evaluate a(z); accepts scalars or arrays."""
        if self.kind == "constant":
            return self.scale * np.ones_like(np.asarray(z, dtype=float))
        if self.kind == "power":
            return self.scale * np.power(np.asarray(z, dtype=float) + self.offset, self.shape)
        return self.scale * np.exp(self.shape * np.asarray(z, dtype=float))

    def integral(self, lo: float, hi: float, sigma: float) -> float:
        """Closed-form integral of a(z)**(sigma-1) over [lo, hi]."""
        if lo > hi:
            raise ModelDomainError(f"invalid integration range [{lo}, {hi}]")
        _check_sigma(sigma)
        if lo == hi:
            return 0.0
        s1 = sigma - 1.0
        c = self.scale**s1
        if self.kind == "constant":
            return c * (hi - lo)
        if self.kind == "power":
            q = self.shape * s1
            a, b = lo + self.offset, hi + self.offset
            if q == -1.0:
                if a <= 0.0:
                    raise ModelDomainError("divergent power kernel at the lower bound")
                return c * math.log(b / a)
            return c * (b ** (q + 1.0) - a ** (q + 1.0)) / (q + 1.0)
        # exponential; expm1 keeps precision for tiny rates
        r = self.shape * s1
        if r == 0.0:
            return c * (hi - lo)
        return c * (math.expm1(r * hi) - math.expm1(r * lo)) / r

    def integral_grid(self, z: np.ndarray, ref: float, sigma: float) -> np.ndarray:
        """Vectorized signed integral of a(u)**(sigma-1) du from ref to each z.

        Used by the frontier grid scan; z may lie on either side of ref.
        """
        _check_sigma(sigma)
        s1 = sigma - 1.0
        c = self.scale**s1
        if self.kind == "constant":
            return c * (z - ref)
        if self.kind == "power":
            q = self.shape * s1
            a = ref + self.offset
            b = z + self.offset
            if q == -1.0:
                return c * (np.log(b) - math.log(a))
            return c * (b ** (q + 1.0) - a ** (q + 1.0)) / (q + 1.0)
        r = self.shape * s1
        if r == 0.0:
            return c * (z - ref)
        return c * (np.expm1(r * z) - math.expm1(r * ref)) / r


def profile_integral(profile: ProductivityProfile, lo: float, hi: float, sigma: float) -> float:
    """Integral of a(z)**(sigma-1) over [lo, hi] in closed form."""
    return profile.integral(lo, hi, sigma)


def profile_integral_quadrature(
    profile: ProductivityProfile, lo: float, hi: float, sigma: float
) -> float:
    """Adaptive-quadrature evaluation of the same kernel (independent check)."""
    if lo > hi:
        raise ModelDomainError(f"invalid integration range [{lo}, {hi}]")
    _check_sigma(sigma)
    if lo == hi:
        return 0.0
    val, _ = quad(lambda z: float(profile.value(z)) ** (sigma - 1.0), lo, hi, limit=200)
    return val


def check_ratio_monotone(
    a_K: ProductivityProfile,
    a_L: ProductivityProfile,
    M: float,
    n_grid: int = 64,
    rel_tol: float = 1e-12,
) -> bool:
    """True iff a_L(z)/a_K(z) is non-decreasing on a grid over [0, M].

    The frontier optimizer relies on this ordering of comparative advantage.
    """
    z = np.linspace(0.0, M, n_grid)
    vK = a_K.value(z)
    vL = a_L.value(z)
    if not (np.all(np.isfinite(vK)) and np.all(np.isfinite(vL))):
        return False
    if np.any(vK[1:] <= 0.0) or np.any(vL[1:] <= 0.0):
        return False
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = vL / vK
    ratio = ratio[np.isfinite(ratio)]
    if ratio.size < 2:
        return False
    diffs = np.diff(ratio)
    return bool(np.all(diffs >= -rel_tol * (1.0 + np.abs(ratio[:-1]))))
