import math

import numpy as np
import pytest

from taskgrowth.config import default_profiles
from taskgrowth.errors import ModelDomainError, ProfileViolationError
from taskgrowth.production import (
    FactorEndowment,
    FrictionParams,
    aggregate_output,
    effective_outputs,
    friction_cost,
    optimal_frontier,
    static_equilibrium,
    statics_sweep,
    statics_to_csv,
    wage_and_labor_share,
)
from taskgrowth.profiles import ProductivityProfile

CONST = ProductivityProfile("constant", scale=1.0)
CONST_PAIR = (CONST, CONST)


def test_effective_outputs_symmetric_case():
    en = FactorEndowment(K=1.0, L_bar=1.0)
    y_K, y_L = effective_outputs(0.5, en, 2.0, CONST_PAIR, M=1.0)
    assert y_K == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert y_L == pytest.approx(math.sqrt(0.5), rel=1e-12)


def test_effective_outputs_endpoints():
    en = FactorEndowment(K=5.0, L_bar=1.0)
    y_K, _ = effective_outputs(0.0, en, 2.0, CONST_PAIR, M=1.0)
    assert y_K == 0.0
    _, y_L = effective_outputs(1.0, en, 2.0, CONST_PAIR, M=1.0)
    assert y_L == 0.0


def test_effective_outputs_hand_values():
    en = FactorEndowment(K=3.0, L_bar=1.0)
    y_K, y_L = effective_outputs(0.2, en, 2.0, CONST_PAIR, M=1.0)
    assert y_K == pytest.approx(math.sqrt(0.2 * 3.0), rel=1e-9)
    assert y_L == pytest.approx(math.sqrt(0.8), rel=1e-9)


def test_effective_outputs_range_check():
    en = FactorEndowment(K=1.0, L_bar=1.0)
    with pytest.raises(ModelDomainError):
        effective_outputs(1.5, en, 2.0, CONST_PAIR, M=1.0)


def test_aggregate_output_identity():
    assert aggregate_output(0.0, 1.0, 2.0) == pytest.approx(1.0)


def test_aggregate_output_ces_square():
    v = math.sqrt(0.5)
    assert aggregate_output(v, v, 2.0) == pytest.approx(2.0, rel=1e-12)


def test_aggregate_output_knowledge_scaling():
    base = aggregate_output(0.3, 0.7, 2.0, knowledge=1.0, beta=0.5)
    scaled = aggregate_output(0.3, 0.7, 2.0, knowledge=4.0, beta=0.5)
    assert scaled == pytest.approx(2.0 * base, rel=1e-14)


def test_wage_symmetric_share():
    en = FactorEndowment(K=1.0, L_bar=1.0)
    _, s_L = wage_and_labor_share(0.5, en, 2.0, CONST_PAIR, M=1.0)
    assert s_L == pytest.approx(0.5, rel=1e-12)


def test_wage_hand_values():
    en = FactorEndowment(K=3.0, L_bar=1.0)
    w, s_L = wage_and_labor_share(0.2, en, 2.0, CONST_PAIR, M=1.0)
    assert w == pytest.approx(1.4928203, abs=1e-6)
    assert s_L == pytest.approx(0.5358984, abs=1e-6)


def test_wage_knowledge_scaling_invariance():
    en = FactorEndowment(K=2.0, L_bar=1.0)
    w1, s1 = wage_and_labor_share(0.4, en, 2.0, CONST_PAIR, M=1.0, knowledge=1.0, beta=0.3)
    w2, s2 = wage_and_labor_share(0.4, en, 2.0, CONST_PAIR, M=1.0, knowledge=2.0, beta=0.3)
    assert w2 / w1 == pytest.approx(2.0**0.3, rel=1e-12)
    assert abs(s2 - s1) < 1e-12


def test_friction_cost_values():
    fr = FrictionParams(gamma=0.3, eta=2.0)
    assert friction_cost(0.0, fr) == 0.0
    assert friction_cost(1.0, fr) == pytest.approx(0.1, rel=1e-12)
    assert friction_cost(1.0, FrictionParams(gamma=0.0)) == 0.0


def test_friction_cost_nondecreasing():
    fr = FrictionParams(gamma=0.5, eta=1.5, z0=0.1)
    z = np.linspace(0.0, 2.0, 50)
    vals = [friction_cost(zi, fr) for zi in z]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("K,L,expect", [(1.0, 1.0, 0.5), (3.0, 1.0, 0.75)])
def test_frontier_closed_form_frictionless(K, L, expect):
    en = FactorEndowment(K=K, L_bar=L)
    z = optimal_frontier(en, 2.0, CONST_PAIR, M=1.0)
    assert z == pytest.approx(expect, abs=1e-6)


def test_frontier_friction_lowers_automation():
    en = FactorEndowment(K=1.0, L_bar=1.0)
    fr = FrictionParams(gamma=0.3, eta=2.0)
    z = optimal_frontier(en, 2.0, CONST_PAIR, M=1.0, fr=fr)
    assert z < 0.5
    # brute-force grid oracle at step 1e-4
    grid = np.arange(0.0, 1.0 + 1e-4, 1e-4)
    best = max(
        grid,
        key=lambda zz: aggregate_output(
            *effective_outputs(min(zz, 1.0), en, 2.0, CONST_PAIR, 1.0), 2.0
        )
        - friction_cost(zz, fr),
    )
    assert z == pytest.approx(best, abs=2e-4)


def test_frontier_nonincreasing_in_gamma():
    en = FactorEndowment(K=3.0, L_bar=1.0, S_R=0.015)
    prev = math.inf
    for gamma in (0.0, 0.3, 0.6, 1.0):
        z = optimal_frontier(
            en, 2.0, default_profiles(), M=1.0, fr=FrictionParams(gamma=gamma, eta=2.0)
        )
        assert z <= prev + 1e-9
        prev = z


def test_frontier_rejects_nonmonotone_profiles():
    bad = (ProductivityProfile("exponential", scale=1.0, shape=1.0), CONST)
    en = FactorEndowment(K=1.0, L_bar=1.0)
    with pytest.raises(ProfileViolationError):
        optimal_frontier(en, 2.0, bad, M=1.0)


def test_labor_share_nonincreasing_on_grid():
    rng = np.random.default_rng(11)
    for _ in range(20):
        K = rng.uniform(0.5, 5.0)
        sigma = rng.uniform(1.2, 3.0)
        mu = rng.uniform(0.0, 2.0)
        profiles = (CONST, ProductivityProfile("exponential", scale=1.0, shape=mu))
        en = FactorEndowment(K=K, L_bar=1.0)
        z = np.linspace(0.0, 1.0, 256)
        s = [wage_and_labor_share(zi, en, sigma, profiles, M=1.0)[1] for zi in z]
        diffs = np.diff(s)
        assert np.all(diffs <= 1e-9)


def test_gradient_wage_matches_finite_differences():
    # w = dY/dL at 10 random valid points
    rng = np.random.default_rng(3)
    for _ in range(10):
        K = rng.uniform(0.5, 4.0)
        L = rng.uniform(0.5, 2.0)
        sigma = rng.uniform(1.3, 3.0)
        z = rng.uniform(0.05, 0.95)
        profiles = (CONST, ProductivityProfile("exponential", scale=1.0, shape=0.7))

        def Y_of_L(Lv):
            en = FactorEndowment(K=K, L_bar=Lv)
            return aggregate_output(*effective_outputs(z, en, sigma, profiles, 1.0), sigma)

        h = 1e-6 * L
        fd = (Y_of_L(L + h) - Y_of_L(L - h)) / (2.0 * h)
        en = FactorEndowment(K=K, L_bar=L)
        w, _ = wage_and_labor_share(z, en, sigma, profiles, M=1.0)
        assert w == pytest.approx(fd, rel=1e-6)


def test_static_equilibrium_invariants():
    en = FactorEndowment(K=3.0, L_bar=1.0)
    eq = static_equilibrium(0.3, en, 2.0, CONST_PAIR, fr=FrictionParams(gamma=0.2, eta=2.0))
    assert eq.s_L == pytest.approx(eq.y_L / (eq.y_K + eq.y_L), abs=1e-12)
    assert eq.Y_net <= eq.Y
    assert all(map(math.isfinite, (eq.Y, eq.Y_net, eq.w, eq.s_L, eq.K_over_Y)))


def test_statics_sweep_shape_and_endpoint():
    en = FactorEndowment(K=3.0, L_bar=1.0)
    rows = statics_sweep(en, 2.0, CONST_PAIR, grid_size=64)
    assert len(rows) == 64
    assert rows[-1].s_L == 0.0
    s = [r.s_L for r in rows]
    assert all(b <= a + 1e-12 for a, b in zip(s, s[1:]))


def test_statics_csv_header_and_flag():
    en = FactorEndowment(K=9.0, L_bar=1.0)
    rows = statics_sweep(en, 2.0, CONST_PAIR, grid_size=8)
    text = statics_to_csv(rows, en)
    lines = text.strip().split("\n")
    assert lines[0] == "z_star,Y,Y_per_L,w,s_L,K_over_Y,flag_KY_gt_3"
    assert len(lines) == 9
    flags = [int(ln.split(",")[-1]) for ln in lines[1:]]
    assert set(flags) <= {0, 1}
    assert flags[0] == 1  # z*=0 leaves capital idle, K/Y blows up


def test_endowment_validation():
    with pytest.raises(ModelDomainError):
        FactorEndowment(K=0.0, L_bar=1.0)
    with pytest.raises(ModelDomainError):
        FactorEndowment(K=1.0, L_bar=1.0, S_R=1.0)
    en = FactorEndowment(K=1.0, L_bar=2.0, S_R=0.25)
    assert en.L == pytest.approx(1.5)
    assert en.R == pytest.approx(0.5)
