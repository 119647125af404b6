"""Correlation and significance statistics.

Pearson and Spearman coefficients with two-tailed p-values from the
Student t distribution, fractional ranking, and a paired z-test. The t
tail is evaluated through the regularized incomplete beta function,
implemented here with a modified Lentz continued fraction so the results do
not depend on any special-function library.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidDegreesOfFreedomError,
    NonFiniteValueError,
    StatisticsError,
    TooFewPointsError,
    ZeroVarianceError,
)

__all__ = [
    "PairedSample",
    "CorrelationResult",
    "ZTestResult",
    "betainc",
    "student_t_cdf",
    "student_t_two_tailed_p",
    "normal_two_tailed_p",
    "fractional_ranks",
    "pearson",
    "spearman",
    "paired_z_test",
    "format_p",
]

_CF_TOL = 1e-15
_CF_MAX_ITER = 10_000
_TINY = 1e-300
EXACT_MAX_N = 10


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Aligned ``(x, y)`` observations with optional per-point labels."""

    x: np.ndarray
    y: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise StatisticsError(f"x and y must be 1-D of equal length, got {x.shape}, {y.shape}")
        labels = tuple(self.labels)
        if labels and len(labels) != len(x):
            raise StatisticsError(f"{len(labels)} labels for {len(x)} points")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.x)

    def swapped(self) -> "PairedSample":
        return PairedSample(self.y, self.x, self.labels)


@dataclass(frozen=True)
class CorrelationResult:
    method: str
    rho: float
    p_value: float
    n: int

    @property
    def df(self) -> int:
        return self.n - 2


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_value: float
    n: int
    mean_diff: float
    sd_diff: float


# --------------------------------------------------------------------------
# special functions


def _betacf(a, b, x):
    # Continued fraction for I_x(a, b), modified Lentz evaluation.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    raise StatisticsError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b) for a, b > 0, 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the fraction converges fast only on this side of the mean; use symmetry otherwise
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _check_df(df):
    if isinstance(df, bool) or not float(df).is_integer() or df < 1:
        raise InvalidDegreesOfFreedomError(f"degrees of freedom must be an integer >= 1, got {df}")


def student_t_two_tailed_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for a Student t variable with ``df`` degrees of freedom."""
    _check_df(df)
    if not math.isfinite(t):
        raise NonFiniteValueError(f"t must be finite, got {t}")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return min(1.0, max(0.0, betainc(df / 2.0, 0.5, x)))


def student_t_cdf(t: float, df: int) -> float:
    tail = 0.5 * student_t_two_tailed_p(t, df)
    return 1.0 - tail if t > 0 else tail


def normal_two_tailed_p(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


# --------------------------------------------------------------------------
# correlation


def fractional_ranks(xs) -> np.ndarray:
    """Ranks starting at 1; tied values share the mean of the positions they span."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size == 0:
        raise StatisticsError("need a non-empty 1-D sequence")
    if not np.all(np.isfinite(xs)):
        raise NonFiniteValueError("ranks undefined for NaN or infinite values")
    order = np.argsort(xs, kind="mergesort")
    ranks = np.empty(xs.size)
    sorted_x = xs[order]
    i = 0
    n = xs.size
    while i < n:
        j = i
        while j + 1 < n and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        # positions i..j (0-based) hold ranks i+1..j+1
        ranks[order[i:j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    return ranks


def _check_sample(s: PairedSample):
    if s.n < 3:
        raise TooFewPointsError(f"correlation needs at least 3 points, got {s.n}")
    if not (np.all(np.isfinite(s.x)) and np.all(np.isfinite(s.y))):
        raise NonFiniteValueError("sample contains NaN or infinite values")


def _r(x, y):
    if np.all(x == x[0]):
        raise ZeroVarianceError("x has zero variance")
    if np.all(y == y[0]):
        raise ZeroVarianceError("y has zero variance")
    mx = math.fsum(x) / len(x)
    my = math.fsum(y) / len(y)
    xm = x - mx
    ym = y - my
    sxx = math.fsum(xm * xm)
    syy = math.fsum(ym * ym)
    r = math.fsum(xm * ym) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def _r_to_p(r, n):
    if abs(r) == 1.0:
        return 0.0
    df = n - 2
    # with t = r*sqrt(df/(1-r^2)), df/(df+t^2) reduces to 1 - r^2
    return min(1.0, max(0.0, betainc(df / 2.0, 0.5, 1.0 - r * r)))


def pearson(s: PairedSample) -> CorrelationResult:
    """Pearson product-moment correlation with a two-tailed t-test p-value."""
    _check_sample(s)
    r = _r(s.x, s.y)
    return CorrelationResult("pearson", r, _r_to_p(r, s.n), s.n)


def spearman(s: PairedSample, exact: bool = False) -> CorrelationResult:
    """Spearman rank correlation (Pearson on fractional ranks).

    The p-value uses the same t approximation as :func:`pearson`. With
    ``exact=True`` (only for n <= 10) it is instead the two-sided
    permutation probability obtained by enumerating every reordering of y.
    """
    _check_sample(s)
    rx = fractional_ranks(s.x)
    ry = fractional_ranks(s.y)
    r = _r(rx, ry)
    if not exact:
        return CorrelationResult("spearman", r, _r_to_p(r, s.n), s.n)
    if s.n > EXACT_MAX_N:
        raise StatisticsError(f"exact permutation p-value limited to n <= {EXACT_MAX_N}")
    return CorrelationResult("spearman", r, _permutation_p(rx, ry, r), s.n)


def _permutation_p(rx, ry, r_obs):
    # rank vectors have a fixed mean and norm, so rho is an affine map of sum(rx*ry_perm)
    xm = rx - rx.mean()
    ym = ry - ry.mean()
    denom = math.sqrt(float(xm @ xm) * float(ym @ ym))
    hits = 0
    total = 0
    chunk = []
    target = abs(r_obs) - 1e-12

    def flush():
        nonlocal hits, total
        perms = np.array(chunk)
        rho = (perms @ xm) / denom
        hits += int(np.count_nonzero(np.abs(rho) >= target))
        total += len(chunk)
        chunk.clear()

    for p in itertools.permutations(ym):
        chunk.append(p)
        if len(chunk) == 100_000:
            flush()
    if chunk:
        flush()
    return hits / total


# --------------------------------------------------------------------------
# z-test


def paired_z_test(diffs) -> ZTestResult:
    """One-sample z-test of the mean of paired differences against zero.

    ``z = mean(d) / (sd(d) / sqrt(n))`` with the sample (n - 1) standard
    deviation; the p-value is two-tailed under the standard normal.
    """
    d = np.asarray(diffs, dtype=float)
    n = d.size
    if n < 2:
        raise TooFewPointsError(f"z-test needs at least 2 differences, got {n}")
    if not np.all(np.isfinite(d)):
        raise NonFiniteValueError("differences contain NaN or infinite values")
    if np.all(d == d[0]):
        raise ZeroVarianceError("all differences are identical")
    mean = math.fsum(d) / n
    dev = d - mean
    sd = math.sqrt(math.fsum(dev * dev) / (n - 1))
    if sd == 0.0:
        raise ZeroVarianceError("standard deviation of the differences underflows to zero")
    z = mean / (sd / math.sqrt(n))
    return ZTestResult(z, normal_two_tailed_p(z), n, mean, sd)


def format_p(p: float, digits: int = 3) -> str:
    """Fixed-point p-value; anything below half a unit in the last place prints as zeros."""
    return f"{p:.{digits}f}"
