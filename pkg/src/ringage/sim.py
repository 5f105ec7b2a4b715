"""Continuous-time Monte-Carlo simulation of the ring gossip process.

Three independent Poisson mechanisms drive the network:

* the source observes a new version at rate lambda_e,
* the source pushes its version to a uniformly random node at total rate lam,
* each node pushes its version to one of its 2f neighbors at total rate lam
  (uniform over neighbors); the receiver keeps the fresher version.

All mechanisms superpose into a single exponential clock at constant total
rate lambda_e + lam + n*lam, with the event type drawn categorically.  The
network-wide age sum is maintained incrementally, so each event costs O(1)
and no adjacency structure is ever materialized.  The estimator is the
time-average of the network-average age over the post-warmup window, valid
for a single node because every node's marginal age has the same law.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy import stats

from ._rng import derive_stream_seed
from .bounds import Rates
from .ring import NeighborFunction, eval_f

__all__ = ["SimConfig", "AgeEstimate", "SweepResult", "simulate", "simulate_sweep"]

_U_GOLD = np.uint64(0x9E3779B97F4A7C15)
_U_M1 = np.uint64(0xBF58476D1CE4E5B9)
_U_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@dataclass(frozen=True)
class SimConfig:
    """One simulation setup.

    `neighbor` resolves to the connectivity radius at `n`.  Rings need
    n >= 3; smaller n are accepted as degenerate source-only systems (no
    gossip links) so the single-node sanity limit lambda_e/lam is reachable.
    `cell_index` namespaces the replication streams when many configs share
    one master seed.
    """

    n: int
    neighbor: NeighborFunction | None
    rates: Rates = Rates()
    horizon: float = 2000.0
    warmup_fraction: float = 0.2
    replications: int = 5
    seed: int = 1
    batches: int = 20
    cell_index: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.n >= 3 and self.neighbor is None:
            raise ValueError("a neighbor function is required for n >= 3")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise ValueError("warmup_fraction must lie in [0, 1)")
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if self.batches < 2:
            raise ValueError("need at least two batches")

    @property
    def resolved_f(self) -> int:
        """Connectivity radius actually simulated (0 for degenerate n < 3)."""
        if self.n < 3:
            return 0
        return eval_f(self.neighbor, self.n)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "f": self.resolved_f,
            "neighbor": self.neighbor.describe() if self.neighbor else None,
            "rates": self.rates.describe(),
            "horizon": self.horizon,
            "warmup_fraction": self.warmup_fraction,
            "replications": self.replications,
            "seed": self.seed,
            "batches": self.batches,
            "cell_index": self.cell_index,
            "seed_rule": "splitmix64(master seed, cell index, replication index)",
        }


@dataclass(frozen=True, eq=False)
class AgeEstimate:
    """Estimated stationary mean age with a 95% confidence half-width."""

    mean: float
    ci_halfwidth: float
    stderr: float
    effective_horizon: float
    events_processed: int
    config: dict
    per_node_means: np.ndarray | None = None


@njit(cache=True, inline="always")
def _mix(x):
    x = (x ^ (x >> _S30)) * _U_M1
    x = (x ^ (x >> _S27)) * _U_M2
    return x ^ (x >> _S31)


@njit(cache=True)
def _event_loop(n, f, lambda_e, lam, horizon, warmup, seed, n_batches, track, debug):
    versions = np.zeros(n, np.int64)
    src = np.int64(0)
    sum_age = np.int64(0)  # sum over nodes of (source version - node version)
    has_gossip = f >= 1 and n >= 2
    total_rate = lambda_e + lam + (lam * n if has_gossip else 0.0)
    p_update = lambda_e / total_rate
    p_direct = (lambda_e + lam) / total_rate
    span = horizon - warmup
    batch_width = span / n_batches
    batch_integrals = np.zeros(n_batches)

    # Lazy per-node bookkeeping for the optional symmetry diagnostic:
    # integrate source and node version counters separately, both clipped to
    # the post-warmup window; per-node mean age falls out at the end.
    m = n if track else 1
    node_integral = np.zeros(m)
    node_last = np.full(m, warmup)
    src_integral = 0.0
    src_last = warmup

    nn = np.uint64(n)
    n2f = np.uint64(2 * f if has_gossip else 1)
    state = seed
    t = 0.0
    events = np.int64(0)
    violations = np.int64(0)
    cur = 0
    cur_end = warmup + batch_width

    while True:
        state += _U_GOLD
        u = (_mix(state) >> _S11) * _INV53
        t_next = t - math.log(1.0 - u) / total_rate

        seg_end = t_next if t_next < horizon else horizon
        pos = t if t > warmup else warmup
        if pos < seg_end:
            while cur < n_batches and cur_end <= seg_end:
                if cur_end > pos:
                    batch_integrals[cur] += sum_age * (cur_end - pos)
                    pos = cur_end
                cur += 1
                cur_end = warmup + (cur + 1) * batch_width
            if cur < n_batches and seg_end > pos:
                batch_integrals[cur] += sum_age * (seg_end - pos)
        if t_next >= horizon:
            break
        t = t_next
        events += 1

        state += _U_GOLD
        u = (_mix(state) >> _S11) * _INV53
        if u < p_update:
            # source observes a new version; every node ages by one
            if track:
                tc = t if t > warmup else warmup
                src_integral += src * (tc - src_last)
                src_last = tc
            src += 1
            sum_age += n
        elif u < p_direct:
            # source pushes to a uniform node
            state += _U_GOLD
            i = np.int64(_mix(state) % nn)
            if versions[i] < src:
                if track:
                    tc = t if t > warmup else warmup
                    node_integral[i] += versions[i] * (tc - node_last[i])
                    node_last[i] = tc
                sum_age -= src - versions[i]
                versions[i] = src
        else:
            # a uniform node pushes to a uniform neighbor; fresher wins
            state += _U_GOLD
            i = np.int64(_mix(state) % nn)
            state += _U_GOLD
            k = np.int64(_mix(state) % n2f)
            delta = k + 1 if k < f else -(k - f) - 1
            j = (i + delta) % n
            vi = versions[i]
            if vi > versions[j]:
                if track:
                    tc = t if t > warmup else warmup
                    node_integral[j] += versions[j] * (tc - node_last[j])
                    node_last[j] = tc
                sum_age -= vi - versions[j]
                versions[j] = vi
            if debug and (vi > src or versions[j] > src or sum_age < 0):
                violations += 1

    per_node = np.zeros(m)
    if track:
        src_integral += src * (horizon - src_last)
        for i in range(n):
            node_integral[i] += versions[i] * (horizon - node_last[i])
            per_node[i] = (src_integral - node_integral[i]) / span
    return batch_integrals, per_node, events, violations


def simulate(config: SimConfig, per_node: bool = False, debug: bool = False) -> AgeEstimate:
    """Run all replications of one configuration and pool the estimates.

    Each replication integrates the network-average age over the post-warmup
    window.  With two or more replications the 95% interval comes from the
    t-distribution over replication means; a single replication falls back to
    batch means within the run.  Identical configs produce identical output
    regardless of how callers schedule the replications.
    """
    n = config.n
    f = config.resolved_f
    warmup = config.warmup_fraction * config.horizon
    span = config.horizon - warmup
    rep_means = np.empty(config.replications)
    batch_means: list[np.ndarray] = []
    per_node_acc = np.zeros(n) if per_node else None
    events = 0
    for rep in range(config.replications):
        seed = derive_stream_seed(config.seed, config.cell_index, rep)
        batch_integrals, node_means, ev, violations = _event_loop(
            n,
            f,
            config.rates.lambda_e,
            config.rates.lam,
            config.horizon,
            warmup,
            np.uint64(seed),
            config.batches,
            per_node,
            debug,
        )
        if debug and violations:
            raise AssertionError(f"age invariant violated {violations} times")
        rep_means[rep] = batch_integrals.sum() / (n * span)
        batch_means.append(batch_integrals / (n * span / config.batches))
        if per_node:
            per_node_acc += node_means
        events += int(ev)
    mean = float(rep_means.mean())
    if config.replications >= 2:
        stderr = float(rep_means.std(ddof=1) / math.sqrt(config.replications))
        dof = config.replications - 1
    else:
        b = batch_means[0]
        stderr = float(b.std(ddof=1) / math.sqrt(config.batches))
        dof = config.batches - 1
    halfwidth = float(stats.t.ppf(0.975, dof) * stderr)
    return AgeEstimate(
        mean=mean,
        ci_halfwidth=halfwidth,
        stderr=stderr,
        effective_horizon=span * config.replications,
        events_processed=events,
        config=config.describe(),
        per_node_means=(per_node_acc / config.replications) if per_node else None,
    )


@dataclass(frozen=True)
class SweepResult:
    """Per-cell estimates of a grid sweep, plus any per-cell failures."""

    cells: tuple[tuple[int, float], ...]
    estimates: dict
    errors: dict


def simulate_sweep(
    grid,
    base: SimConfig,
    master_seed: int | None = None,
) -> SweepResult:
    """Simulate every (n, alpha) cell of a grid with f(n) = floor(n**alpha).

    Cells are processed in the given order; the cell index in that order
    namespaces its replication streams, so a re-run with the same master seed
    reproduces every estimate bit-exactly and cells never interact.  A cell
    that raises is recorded under `errors` and the sweep continues.
    """
    cells = tuple((int(n), float(a)) for n, a in grid)
    if not cells:
        raise ValueError("sweep grid must be non-empty")
    seed = base.seed if master_seed is None else master_seed
    estimates = {}
    errors = {}
    for idx, (n, alpha) in enumerate(cells):
        try:
            cfg = SimConfig(
                n=n,
                neighbor=NeighborFunction.power(alpha),
                rates=base.rates,
                horizon=base.horizon,
                warmup_fraction=base.warmup_fraction,
                replications=base.replications,
                seed=seed,
                batches=base.batches,
                cell_index=idx,
            )
            estimates[(n, alpha)] = simulate(cfg)
        except Exception as exc:  # noqa: BLE001 - cell isolation is the contract
            errors[(n, alpha)] = f"{type(exc).__name__}: {exc}"
    return SweepResult(cells=cells, estimates=estimates, errors=errors)
