"""Deterministic growth verdicts for desk-scale measurement series."""
import math
from dataclasses import dataclass, field

CONSTANT = "constant"
LOGARITHMIC = "logarithmic"
LINEAR = "linear"
LINEARITHMIC = "linearithmic"
EXPONENTIAL = "exponential"
INCONCLUSIVE = "inconclusive"
VERDICTS = (CONSTANT, LOGARITHMIC, LINEAR, LINEARITHMIC, EXPONENTIAL, INCONCLUSIVE)

# frozen defaults
EXP_RATIO = 1.5
CONST_SPREAD = 2
LOG_PER_DOUBLING = 8
FIT_RESIDUAL = 0.15
MIN_POINTS = 4


@dataclass
class Thresholds:
    exp_ratio: float = EXP_RATIO
    const_spread: float = CONST_SPREAD
    log_per_doubling: float = LOG_PER_DOUBLING
    fit_residual: float = FIT_RESIDUAL


def _fit_residual(xs, ys):
    """Relative residual of the least-squares fit y ~ a + b x (b must be > 0)."""
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return math.inf
    b = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    if b <= 0:
        return math.inf
    a = my - b * mx
    rms = math.sqrt(sum((y - a - b * x) ** 2 for x, y in zip(xs, ys)) / n)
    # normalised by the range, so a large offset cannot hide a bad shape
    span = max(ys) - min(ys)
    return rms / span if span else math.inf


def growth_classify(series, th=None):
    th = th or Thresholds()
    pts = sorted((int(n), v) for n, v in series)
    if len(pts) < MIN_POINTS:
        return INCONCLUSIVE
    ns = [p[0] for p in pts]
    vs = [p[1] for p in pts]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        return INCONCLUSIVE

    # exponential: the per-unit ratio stays above the threshold over the tail
    tail = list(zip(pts, pts[1:]))[len(pts) // 2 - 1:]
    if all(v0 > 0 and (v1 / v0) ** (1 / (n1 - n0)) >= th.exp_ratio
           for (n0, v0), (n1, v1) in tail):
        return EXPONENTIAL

    if max(vs) - min(vs) <= th.const_spread and vs[-1] <= vs[0]:
        return CONSTANT

    if vs[-1] > vs[0] and ns[0] > 0:
        ok = True
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                doublings = max(1.0, math.log2(ns[j] / ns[i]))
                if vs[j] - vs[i] > th.log_per_doubling * doublings:
                    ok = False
        if ok:
            return LOGARITHMIC

    lin = _fit_residual(ns, vs)
    nlog = [n * math.log2(n) if n > 1 else 0.0 for n in ns]
    nl = _fit_residual(nlog, vs)
    if min(lin, nl) < th.fit_residual:
        return LINEAR if lin <= nl else LINEARITHMIC
    return INCONCLUSIVE


@dataclass
class GrowthSeries:
    name: str
    points: list = field(default_factory=list)

    def add(self, n, value):
        self.points.append((n, value))
        self.points.sort()

    @property
    def verdict(self):
        return growth_classify(self.points)
