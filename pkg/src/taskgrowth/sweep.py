"""High-throughput parameter sweeps: sampling, batch runs, convergence
filtering, and CSV dataset persistence for surrogate training."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .config import FEATURE_NAMES, RANGES, ModelConfig, GrowthParams
from .dynamics import simulate
from .errors import ConfigError, ModelDomainError, NonFiniteStateError
from .production import FactorEndowment, FrictionParams

OUTPUT_NAMES = ["w", "s_L", "z_star", "Y", "g_Y"]

DATASET_CSV_HEADER = (
    "sample_id,seed,alpha,beta,gamma,zeta,eta,theta,kappa,lambda,xi,sigma,"
    "S_R,phi,chi,K_over_L,w,s_L,z_star,Y,g_Y,converged"
)

CONVERGENCE_TOL = 1e-4
CONVERGENCE_WINDOW_FRACTION = 0.1


@dataclass(frozen=True)
class ParamRange:
    name: str
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ConfigError(f"range for {self.name!r} has lo > hi")


def default_ranges() -> list[ParamRange]:
    """Exploration ranges from the baseline parameter table."""
    return [ParamRange(name, lo, hi) for name, (lo, hi) in RANGES.items()]


def sample_params(ranges, n, seed, method="uniform"):
    """Draw n parameter vectors, one coordinate per range.

    'uniform' draws independently per coordinate; 'lhs' stratifies each
    coordinate (Latin hypercube).  Seeded and fully deterministic.
    """
    if not ranges:
        raise ConfigError("empty ranges")
    if n < 0:
        raise ConfigError("sample count must be non-negative")
    rng = np.random.default_rng(seed)
    d = len(ranges)
    if method == "uniform":
        u = rng.random((n, d))
    elif method == "lhs":
        u = np.empty((n, d))
        for j in range(d):
            u[:, j] = (rng.permutation(n) + rng.random(n)) / max(n, 1)
    else:
        raise ConfigError(f"unknown sampling method {method!r}")
    lo = np.array([r.lo for r in ranges])
    hi = np.array([r.hi for r in ranges])
    return lo + u * (hi - lo)


@dataclass
class SweepRow:
    sample_id: int
    seed: int
    params: dict  # feature name -> sampled value
    outputs: dict  # output name -> value (nan on failure)
    converged: bool
    reason: str | None = None  # machine-readable failure reason ('drift'|'non-finite')


@dataclass
class SweepDataset:
    rows: list[SweepRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def feature_matrix(self) -> np.ndarray:
        return np.array([[r.params[f] for f in FEATURE_NAMES] for r in self.rows])

    def output_vector(self, name: str) -> np.ndarray:
        return np.array([r.outputs[name] for r in self.rows])

    def converged_subset(self) -> "SweepDataset":
        return SweepDataset([r for r in self.rows if r.converged])


def config_for_sample(base: ModelConfig, values: dict) -> ModelConfig:
    """Overlay one sampled feature vector on a base configuration."""
    v = values
    growth = GrowthParams(
        zeta=v["zeta"], alpha=v["alpha"], phi=v["phi"], beta=v["beta"], xi=v["xi"],
        kappa=v["kappa"], theta=v["theta"], lam=v["lambda"], chi=v["chi"],
    )
    friction = replace(base.friction, gamma=v["gamma"], eta=v["eta"])
    L = (1.0 - v["S_R"]) * base.endow.L_bar
    endow = FactorEndowment(K=v["K_over_L"] * L, L_bar=base.endow.L_bar, S_R=v["S_R"])
    return replace(base, growth=growth, friction=friction, endow=endow, sigma=v["sigma"])


def convergence_filter(traj, tol=CONVERGENCE_TOL, window_fraction=CONVERGENCE_WINDOW_FRACTION):
    """True iff s_L and w have both settled over the trailing window.

    Settled means every per-step absolute change stays strictly below
    tol * (1 + |final value|).
    """
    if not (0.0 < window_fraction <= 0.5):
        raise ConfigError("window_fraction must lie in (0, 0.5]")
    n = len(traj)
    if n < 10:
        raise ConfigError("trajectory too short for convergence filtering (< 10 steps)")
    w = max(int(round(n * window_fraction)), 2)
    for series in (traj.s_L, traj.w):
        tail = series[n - w:]
        limit = tol * (1.0 + abs(float(tail[-1])))
        if np.max(np.abs(np.diff(tail))) >= limit:
            return False
    return True


def run_sweep(samples, base_config: ModelConfig, horizon=None, dt=None, seed=0,
              tol=CONVERGENCE_TOL, window_fraction=CONVERGENCE_WINDOW_FRACTION):
    """One simulation per sampled vector; never aborts the batch.

    Outputs are read from the trajectory tail; rows that fail mid-run are
    recorded as non-converged with a machine-readable reason.
    """
    samples = np.asarray(samples, dtype=float)
    rows = []
    nan_outputs = {name: float("nan") for name in OUTPUT_NAMES}
    for i in range(samples.shape[0]):
        values = dict(zip(FEATURE_NAMES, samples[i]))
        try:
            cfg = config_for_sample(base_config, values)
            traj = simulate(cfg, horizon=horizon, dt=dt)
        except (NonFiniteStateError, ModelDomainError):
            rows.append(SweepRow(i, seed, values, dict(nan_outputs), False, "non-finite"))
            continue
        converged = convergence_filter(traj, tol=tol, window_fraction=window_fraction)
        traj.converged = converged
        outputs = {
            "w": float(traj.w[-1]), "s_L": float(traj.s_L[-1]),
            "z_star": float(traj.z_star[-1]), "Y": float(traj.Y[-1]),
            "g_Y": float(traj.g_Y[-1]),
        }
        rows.append(SweepRow(i, seed, values, outputs, converged,
                             None if converged else "drift"))
    rows.sort(key=lambda r: r.sample_id)
    return SweepDataset(rows)


def write_dataset(ds: SweepDataset, path) -> None:
    """CSV persistence; 17 significant digits make the round trip lossless."""
    lines = [DATASET_CSV_HEADER]
    for r in ds.rows:
        fields = [str(r.sample_id), str(r.seed)]
        fields += ["%.17g" % r.params[f] for f in FEATURE_NAMES]
        fields += ["%.17g" % r.outputs[o] for o in OUTPUT_NAMES]
        fields.append("1" if r.converged else "0")
        lines.append(",".join(fields))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_dataset(path) -> SweepDataset:
    try:
        with open(path) as f:
            lines = [ln for ln in f.read().splitlines() if ln]
    except OSError as e:
        raise ConfigError(f"cannot read dataset {path}: {e}") from e
    if not lines or lines[0] != DATASET_CSV_HEADER:
        raise ConfigError(f"malformed dataset header in {path}")
    n_fields = len(DATASET_CSV_HEADER.split(","))
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != n_fields:
            raise ConfigError(f"ragged dataset row: {ln!r}")
        sample_id, seed = int(parts[0]), int(parts[1])
        params = {f: float(x) for f, x in zip(FEATURE_NAMES, parts[2:2 + len(FEATURE_NAMES)])}
        off = 2 + len(FEATURE_NAMES)
        outputs = {o: float(x) for o, x in zip(OUTPUT_NAMES, parts[off:off + len(OUTPUT_NAMES)])}
        converged = parts[-1] == "1"
        rows.append(SweepRow(sample_id, seed, params, outputs, converged))
    return SweepDataset(rows)
