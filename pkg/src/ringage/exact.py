"""Exact stationary subset ages for small rings.

Solves the fixed-point equations for the limiting average version age of
every non-empty node subset:

    v_S = (lambda_e + sum_i rate_i(S) * v_{S+i}) / (|S|*lam/n + sum_i rate_i(S))

where i ranges over nodes outside S and rate_i(S) = lam/(2f) times the number
of links from i into S.  Each v_S depends only on strict supersets, so one
pass over subsets in decreasing-size order solves the whole table.  The
recursion is evaluated for all subsets, connected or not: supersets reached
by adding a neighbor need not stay contiguous, and the fixed point itself
imposes no connectivity requirement.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bounds import Rates
from .ring import neighbor_bitmasks

__all__ = ["ExactSolution", "solve_exact", "exact_v1", "EXACT_CAP"]

# 2**n table entries; 16 keeps the dense table and the solve affordable.
EXACT_CAP = 16


@dataclass(frozen=True, eq=False)
class ExactSolution:
    """Dense table of limiting subset ages, indexed by node bitmask."""

    n: int
    f: int
    rates: Rates
    v: np.ndarray  # v[mask] for every non-empty mask; entry 0 unused

    def value(self, nodes) -> float:
        """Age of a subset given as an iterable of node ids or a bitmask."""
        if isinstance(nodes, (int, np.integer)):
            mask = int(nodes)
        else:
            mask = 0
            for i in nodes:
                if not 0 <= i < self.n:
                    raise ValueError(f"node id {i} outside [0, {self.n})")
                mask |= 1 << i
        if not 0 < mask < (1 << self.n):
            raise ValueError("subset must be a non-empty set of ring nodes")
        return float(self.v[mask])

    @property
    def v1(self) -> float:
        """Age of a single node; all singletons agree by rotational symmetry."""
        return float(self.v[1])

    def as_dict(self) -> dict[str, float]:
        """Full table keyed by comma-joined sorted node ids (JSON-friendly)."""
        out = {}
        for mask in range(1, 1 << self.n):
            nodes = [i for i in range(self.n) if (mask >> i) & 1]
            out[",".join(map(str, nodes))] = float(self.v[mask])
        return out


def solve_exact(n: int, f: int, rates: Rates = Rates(), cap: int = EXACT_CAP) -> ExactSolution:
    """Solve the subset-age fixed point exactly for every non-empty subset.

    Subsets are processed grouped by size, largest first; within one size
    there are no dependencies.  Memory and time grow as 2**n, so n is capped.
    """
    if not 3 <= n <= cap:
        raise ValueError(f"exact solve supports 3 <= n <= {cap}, got n={n}")
    if not 1 <= f <= (n - 1) // 2:
        raise ValueError(f"radius f={f} outside [1, {(n - 1) // 2}] for n={n}")
    masks = neighbor_bitmasks(n, f)
    lam_e, lam = rates.lambda_e, rates.lam
    edge_rate = lam / (2.0 * f)
    v = np.zeros(1 << n, dtype=np.float64)
    full = (1 << n) - 1
    v[full] = lam_e / lam
    for size in range(n - 1, 0, -1):
        base_den = lam * size / n
        for combo in combinations(range(n), size):
            smask = 0
            for i in combo:
                smask |= 1 << i
            num = lam_e
            den = base_den
            rest = full & ~smask
            while rest:
                low = rest & -rest
                i = low.bit_length() - 1
                links = (masks[i] & smask).bit_count()
                if links:
                    r = edge_rate * links
                    num += r * v[smask | low]
                    den += r
                rest ^= low
            v[smask] = num / den
    return ExactSolution(n=n, f=f, rates=rates, v=v)


def exact_v1(n: int, f: int, rates: Rates = Rates(), cap: int = EXACT_CAP) -> float:
    """Exact stationary age of one node (the full solve, projected to {0})."""
    return solve_exact(n, f, rates, cap).v1
