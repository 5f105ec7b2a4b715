"""Upper bounds on the stationary version age of a single ring node.

Two routes to a bound:

* ``recursive_bound`` runs the subset-age recursion backward from the full
  set, replacing the incoming-edge count of a size-j set by its closed-form
  minimum.  This yields a vector u with u_j bounding the age of the
  worst connected j-set, and u_1 bounding a single node.
* ``closed_form_bound`` evaluates the analytic envelope
  ratio*(5 + ln2 + 2 ln f + gamma) + sqrt(pi)*ratio*sqrt(n/f),
  which is the sum of the three per-range components x/y/z.

``domination_threshold`` answers when the sqrt(n)/sqrt(f) term of the
envelope outgrows its logarithmic term by a chosen factor.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "Rates",
    "BoundReport",
    "DominationCriterion",
    "RiemannCheck",
    "recursive_bound",
    "range_sum_x",
    "range_sum_y",
    "range_sum_z",
    "closed_form_bound",
    "special_case_bound",
    "riemann_gaussian_check",
    "domination_threshold",
    "scaling_exponent",
]

EULER_GAMMA = float(np.euler_gamma)

# Above this size the full u vector is not kept unless explicitly requested
# (n = 1e8 would need 800 MB).
_KEEP_VECTOR_LIMIT = 20_000_000


@dataclass(frozen=True)
class Rates:
    """Source self-update rate and total per-node dissemination rate."""

    lambda_e: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        for name, v in (("lambda_e", self.lambda_e), ("lam", self.lam)):
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def ratio(self) -> float:
        return self.lambda_e / self.lam

    def describe(self) -> dict:
        return {"lambda_e": self.lambda_e, "lam": self.lam}


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Recursive bound vector and closed-form components for one (n, f)."""

    n: int
    f: int
    ratio: float
    u1: float
    x_sum: float
    y_sum: float
    z_sum: float
    closed_form: float
    u: np.ndarray | None = None  # u[j-1] bounds a contiguous j-set; None when streamed


@njit(cache=True)
def _backward_pass(n, f, ratio, keep, out):
    # One backward sweep of u_j = (ratio + c*u_{j+1}) / (j/n + c) with
    # c = E_min(j)/(2f).  Integer products stay below 2**53 for n <= 1e8.
    u = ratio
    if keep:
        out[n - 1] = ratio
    for j in range(n - 1, 0, -1):
        if j <= f:
            e = j * (2 * f - (j - 1))
        elif j >= n - f:
            m = n - j
            e = m * (2 * f - (m - 1))
        else:
            e = f * (f + 1)
        c = e / (2.0 * f)
        u = (ratio + c * u) / (j / n + c)
        if keep:
            out[j - 1] = u
    return u


def recursive_bound(
    n: int,
    f: int,
    rates: Rates = Rates(),
    keep_vector: bool | None = None,
) -> BoundReport:
    """Backward recursion over subset sizes, from the full set down to 1.

    u_n = lambda_e/lam exactly; every step substitutes the minimal incoming
    edge count for size j, which preserves the upper-bound direction because
    subset ages shrink as sets grow.  With keep_vector unset, the full vector
    is kept only for n small enough to hold in memory; u1 is always returned.
    """
    cap = (n - 1) // 2
    if n < 3 or not 1 <= f <= cap:
        raise ValueError(f"invalid ring parameters n={n}, f={f}")
    if keep_vector is None:
        keep_vector = n <= _KEEP_VECTOR_LIMIT
    out = np.empty(n if keep_vector else 1, dtype=np.float64)
    u1 = float(_backward_pass(n, f, rates.ratio, keep_vector, out))
    x = range_sum_x(f, rates.ratio)
    y = range_sum_y(n, f, rates.ratio)
    z = range_sum_z(f, rates.ratio)
    return BoundReport(
        n=n,
        f=f,
        ratio=rates.ratio,
        u1=u1,
        x_sum=x,
        y_sum=y,
        z_sum=z,
        closed_form=x + y + z,
        u=out if keep_vector else None,
    )


def range_sum_x(f: float, ratio: float) -> float:
    """Small-set component: ratio * (2 + ln2 + ln f + gamma)."""
    _check_radius(f)
    return ratio * (2.0 + math.log(2.0) + math.log(f) + EULER_GAMMA)


def range_sum_y(n: float, f: float, ratio: float) -> float:
    """Middle-range component: ratio * sqrt(pi) * sqrt(n/f)."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    _check_radius(f)
    return ratio * math.sqrt(math.pi) * math.sqrt(n) / math.sqrt(f)


def range_sum_z(f: float, ratio: float) -> float:
    """Near-full-set component: ratio * (3 + ln f)."""
    _check_radius(f)
    return ratio * (3.0 + math.log(f))


def closed_form_bound(n: float, f: float, rates: Rates = Rates()) -> float:
    """Sum of the three range components; the analytic age envelope."""
    r = rates.ratio
    return range_sum_x(f, r) + range_sum_y(n, f, r) + range_sum_z(f, r)


def special_case_bound(
    regime: str,
    n: float,
    rates: Rates = Rates(),
    d: int | None = None,
    alpha: float | None = None,
) -> float:
    """Reduced envelope for the standard connectivity regimes.

    fully-connected  ratio * (2 + ln(n-1))
    fixed-d          ratio * sqrt(pi * n / d)
    power            ratio * sqrt(pi) * n**((1-alpha)/2)
    near-linear      ratio * ln n   (representative of the log regime)
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    r = rates.ratio
    if regime == "fully-connected":
        return r * (2.0 + math.log(n - 1))
    if regime == "fixed-d":
        if d is None or d < 1:
            raise ValueError("fixed-d regime needs d >= 1")
        return r * math.sqrt(math.pi) * math.sqrt(n / d)
    if regime == "power":
        if alpha is None or not 0.0 < alpha < 1.0:
            raise ValueError("power regime needs alpha in (0, 1)")
        return r * math.sqrt(math.pi) * n ** ((1.0 - alpha) / 2.0)
    if regime == "near-linear":
        return r * math.log(n)
    raise ValueError(f"unknown regime {regime!r}")


@dataclass(frozen=True)
class RiemannCheck:
    sum_value: float
    analytic_value: float
    abs_gap: float


def riemann_gaussian_check(n: int, f: int) -> RiemannCheck:
    """Compare sum_{i=1..n} exp(-i^2/(n(f+1))) with its Gaussian-integral limit.

    The analytic value is (sqrt(pi)/2) * sqrt(n(f+1)); the sum approaches it
    from below as the implied step size 1/sqrt(n(f+1)) shrinks.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    _check_radius(f)
    scale = float(n) * (f + 1.0)
    # Terms past i_cut underflow to exactly 0.0 in float64 and cannot change
    # the sum; exp(-x) == 0.0 for x > ~745.2.
    i_cut = min(n, int(math.sqrt(746.0 * scale)) + 1)
    i = np.arange(1, i_cut + 1, dtype=np.float64)
    s = float(np.exp(-(i * i) / scale).sum())
    a = 0.5 * math.sqrt(math.pi) * math.sqrt(scale)
    return RiemannCheck(sum_value=s, analytic_value=a, abs_gap=abs(s - a))


@dataclass(frozen=True)
class DominationCriterion:
    """When does g(n) = sqrt(n)/sqrt(f) count as dominating h(n) = ln f?

    factor            g must reach factor * h (default 10).
    log_base          base of the logarithm in h.
    use_coefficients  multiply g by sqrt(pi) and h by 2, i.e. compare the
                      envelope's actual terms instead of the bare shapes.

    The defaults are one documented reading of an ambiguous convention; see
    the README for how the alternates behave.
    """

    factor: float = 10.0
    log_base: float = math.e
    use_coefficients: bool = False

    def __post_init__(self):
        if not self.factor > 0:
            raise ValueError("factor must be positive")
        if not self.log_base > 1:
            raise ValueError("log base must exceed 1")


def domination_threshold(
    alpha: float,
    criterion: DominationCriterion | None = None,
) -> int:
    """Smallest integer n* from which n**((1-alpha)/2) >= factor * alpha * log(n).

    With f(n) = n**alpha the envelope's rational term is g(n) = n**((1-alpha)/2)
    and its log term is h(n) = alpha * log(n).  In t = ln n the margin
    phi(t) = cg*exp(kt) - A*t is convex, so past its largest real root it
    stays nonnegative; the root is bisected in t and rounded up to the first
    dominating integer.  Returns 1 when g already dominates everywhere.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    crit = criterion if criterion is not None else DominationCriterion()
    cg = math.sqrt(math.pi) if crit.use_coefficients else 1.0
    ch = 2.0 if crit.use_coefficients else 1.0
    k = (1.0 - alpha) / 2.0
    a = crit.factor * ch * alpha / math.log(crit.log_base)

    def phi(t: float) -> float:
        return cg * math.exp(k * t) - a * t

    if cg * k >= a:
        return 1  # phi' >= 0 for all t >= 0 and phi(0) = cg > 0
    t_min = math.log(a / (cg * k)) / k
    if phi(t_min) >= 0.0:
        return 1
    lo, hi = t_min, max(t_min + 1.0, math.log(1e70))
    while phi(hi) < 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if phi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    candidate = max(1, int(math.floor(math.exp(hi))) - 2)
    for _ in range(8):
        if phi(math.log(candidate)) >= 0.0:
            break
        candidate += 1
    # Convexity makes phi increasing past its minimum; spot-check anyway.
    for extra in (1.0, 2.0, 5.0):
        if phi(math.log(candidate) + extra) < 0.0:
            raise RuntimeError("domination verification failed past the crossing")
    return candidate


def scaling_exponent(alpha: float) -> float:
    """Growth exponent of the age envelope under f(n) = n**alpha: (1-alpha)/2."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return (1.0 - alpha) / 2.0


def _check_radius(f: float):
    if not f >= 1:
        raise ValueError(f"need radius f >= 1, got {f}")
