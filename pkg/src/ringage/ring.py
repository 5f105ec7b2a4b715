"""Generalized ring topology.

n nodes sit on a cycle and each node is linked to the f nearest nodes on each
side (2f neighbors in total), where f is produced by a connectivity-radius
rule evaluated at n.  This module answers neighbor queries, counts edges
entering a node set, and provides the exhaustive minimal-incoming-edge search
used to validate the three-range counting formula on small rings.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "NeighborFunction",
    "RingTopology",
    "eval_f",
    "min_incoming_edges_formula",
    "brute_force_min_incoming",
    "neighbor_bitmasks",
    "EXHAUSTIVE_CAP",
]

# Exhaustive subset enumeration is refused above this node count by default.
EXHAUSTIVE_CAP = 14

_KINDS = ("constant", "power", "full", "nlog2", "explicit")

# Guards against math.pow landing one ulp under an exact integer (e.g. 1e5**0.4).
_POW_EPS = 1e-9


@dataclass(frozen=True)
class NeighborFunction:
    """Connectivity-radius rule f(n).

    Supported kinds:
      constant   f(n) = d                (param = d)
      power      f(n) = floor(n**alpha)  (param = alpha, 0 < alpha < 1)
      full       f(n) = floor((n-1)/2)   (every other node is a neighbor)
      nlog2      f(n) = floor(n / ln(n)**2)
      explicit   f(n) = value            (param = value, must already be valid)

    Every evaluation is clamped into [1, floor((n-1)/2)], which keeps the
    result a valid radius and non-decreasing in n for all kinds.
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown neighbor function kind {self.kind!r}")
        if self.kind == "constant":
            if self.param is None or int(self.param) != self.param or self.param < 1:
                raise ValueError("constant radius requires a positive integer d")
        elif self.kind == "power":
            if self.param is None or not 0.0 < self.param < 1.0:
                raise ValueError("power exponent must lie strictly in (0, 1)")
        elif self.kind == "explicit":
            if self.param is None or int(self.param) != self.param or self.param < 1:
                raise ValueError("explicit radius must be a positive integer")
        elif self.param is not None:
            raise ValueError(f"kind {self.kind!r} takes no parameter")

    @classmethod
    def constant(cls, d: int) -> "NeighborFunction":
        return cls("constant", d)

    @classmethod
    def power(cls, alpha: float) -> "NeighborFunction":
        return cls("power", alpha)

    @classmethod
    def fully_connected(cls) -> "NeighborFunction":
        return cls("full")

    @classmethod
    def n_over_log_sq(cls) -> "NeighborFunction":
        return cls("nlog2")

    @classmethod
    def explicit(cls, value: int) -> "NeighborFunction":
        return cls("explicit", value)

    def __call__(self, n: int) -> int:
        return eval_f(self, n)

    def describe(self) -> dict:
        return {"kind": self.kind, "param": self.param}


def eval_f(spec: NeighborFunction, n: int) -> int:
    """Evaluate the connectivity radius f(n) for an n-node ring.

    The raw rule value is floored and clamped into [1, floor((n-1)/2)].
    Explicit radii outside that interval are rejected rather than clamped,
    since the caller stated an exact value.
    """
    if n < 3:
        raise ValueError(f"ring needs at least 3 nodes, got n={n}")
    cap = (n - 1) // 2
    if spec.kind == "constant":
        raw = int(spec.param)
    elif spec.kind == "power":
        raw = int(n ** spec.param + _POW_EPS)
    elif spec.kind == "full":
        raw = cap
    elif spec.kind == "nlog2":
        raw = int(n / math.log(n) ** 2)
    else:  # explicit
        raw = int(spec.param)
        if not 1 <= raw <= cap:
            raise ValueError(
                f"explicit radius {raw} outside [1, {cap}] for n={n}")
    return min(max(raw, 1), cap)


@lru_cache(maxsize=None)
def neighbor_bitmasks(n: int, f: int) -> tuple[int, ...]:
    """Bitmask of the 2f neighbors of each node (bit j set iff j is adjacent)."""
    masks = []
    for i in range(n):
        m = 0
        for d in range(1, f + 1):
            m |= 1 << ((i + d) % n)
            m |= 1 << ((i - d) % n)
        masks.append(m)
    return tuple(masks)


@dataclass(frozen=True)
class RingTopology:
    """Immutable n-node ring where nodes at circular distance <= f are linked."""

    n: int
    f: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"ring needs at least 3 nodes, got n={self.n}")
        cap = (self.n - 1) // 2
        if not 1 <= self.f <= cap:
            raise ValueError(f"radius f={self.f} outside [1, {cap}] for n={self.n}")

    @classmethod
    def from_spec(cls, n: int, spec: NeighborFunction) -> "RingTopology":
        return cls(n, eval_f(spec, n))

    def circular_distance(self, i: int, j: int) -> int:
        d = abs(i - j)
        return min(d, self.n - d)

    def neighbors(self, i: int) -> frozenset[int]:
        """The 2f nodes at circular distance 1..f from node i."""
        self._check_node(i)
        return frozenset(
            (i + off) % self.n
            for off in itertools.chain(range(1, self.f + 1), range(-self.f, 0))
        )

    def incoming_edge_count(self, nodes) -> int:
        """Number of directed edges from outside the set into it.

        Each undirected link crossing the boundary contributes exactly one
        incoming edge.  The full node set has no boundary and returns 0 by
        convention; callers that divide by this count must handle it.
        """
        s = self._as_set(nodes)
        if len(s) == self.n:
            return 0
        masks = neighbor_bitmasks(self.n, self.f)
        smask = _mask_of(s)
        return sum(
            (masks[i] & smask).bit_count() for i in range(self.n) if i not in s
        )

    def incoming_edges_from(self, nodes, i: int) -> int:
        """Edges entering the set that start at node i; 0 if i is inside."""
        self._check_node(i)
        s = self._as_set(nodes)
        if i in s:
            return 0
        return len(self.neighbors(i) & s)

    def inner_edge_count(self, nodes) -> int:
        """Undirected links with both endpoints inside the set."""
        s = self._as_set(nodes)
        masks = neighbor_bitmasks(self.n, self.f)
        smask = _mask_of(s)
        return sum((masks[i] & smask).bit_count() for i in s) // 2

    def _check_node(self, i: int):
        if not 0 <= i < self.n:
            raise ValueError(f"node id {i} outside [0, {self.n})")

    def _as_set(self, nodes) -> frozenset[int]:
        s = frozenset(nodes)
        if not s:
            raise ValueError("node set must be non-empty")
        for i in s:
            self._check_node(i)
        return s


def min_incoming_edges_formula(n: int, f: int, j: int) -> int:
    """Minimum incoming edges over connected j-node subsets, in closed form.

    Three ranges, exact for a contiguous arc of j nodes and a lower bound for
    every other connected set:
      j <= f          2jf - j(j-1)
      f < j < n-f     f(f+1)
      j >= n-f        2(n-j)f - (n-j)(n-j-1)    (0 when j = n)
    """
    cap = (n - 1) // 2
    if n < 3 or not 1 <= f <= cap:
        raise ValueError(f"invalid ring parameters n={n}, f={f}")
    if not 1 <= j <= n:
        raise ValueError(f"subset size j={j} outside [1, {n}]")
    if j <= f:
        return 2 * j * f - j * (j - 1)
    if j >= n - f:
        m = n - j
        return 2 * m * f - m * (m - 1)
    return f * (f + 1)


def _mask_of(nodes) -> int:
    m = 0
    for i in nodes:
        m |= 1 << i
    return m


def _nodes_of(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _connected_masks(n: int, f: int, j: int):
    """All connected subsets of size j, as bitmasks.

    Grows sets one neighbor at a time starting from every singleton and
    deduplicates by mask, so each connected set is visited exactly once.
    """
    masks = neighbor_bitmasks(n, f)
    seen = set()
    stack = []
    for v in range(n):
        m = 1 << v
        seen.add(m)
        stack.append((m, 1))
    out = []
    while stack:
        m, size = stack.pop()
        if size == j:
            out.append(m)
            continue
        frontier = 0
        mm = m
        while mm:
            low = mm & -mm
            frontier |= masks[low.bit_length() - 1]
            mm ^= low
        frontier &= ~m
        while frontier:
            low = frontier & -frontier
            m2 = m | low
            if m2 not in seen:
                seen.add(m2)
                stack.append((m2, size + 1))
            frontier ^= low
    return out


def brute_force_min_incoming(
    topo: RingTopology,
    j: int,
    cap: int = EXHAUSTIVE_CAP,
    include_disconnected: bool = False,
) -> tuple[int, frozenset[int]]:
    """Exhaustive minimum of incoming edges over size-j subsets.

    Enumerates subsets that are connected in the gossip graph (or every
    subset when include_disconnected is set), returning the minimum count and
    one minimizing set.  Refuses rings larger than `cap` nodes, where the
    enumeration blows up combinatorially.
    """
    n, f = topo.n, topo.f
    if n > cap:
        raise ValueError(
            f"exhaustive search refused for n={n} > cap={cap}; "
            "raise cap explicitly if the cost is acceptable")
    if not 1 <= j <= n:
        raise ValueError(f"subset size j={j} outside [1, {n}]")
    masks = neighbor_bitmasks(n, f)

    def count(smask: int) -> int:
        total = 0
        for i in range(n):
            if not (smask >> i) & 1:
                total += (masks[i] & smask).bit_count()
        return total

    if include_disconnected:
        candidates = (_mask_of(c) for c in itertools.combinations(range(n), j))
    else:
        candidates = _connected_masks(n, f, j)
    best = min(candidates, key=lambda m: (count(m), m))
    return count(best), _nodes_of(best)
