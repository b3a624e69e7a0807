"""Experiment families: each maps a size parameter n to a closed term, runs
the selected machines and collects one row per (n, machine)."""
import random
from dataclasses import dataclass, field

from .terms import App, Lam, Var, apps, eta_expand
from .encodings import BITS, IDENT, scott_string, scroller, read_scott_string
from .generate import generate_closed_term
from .reference import reference_whnf, FuelExhausted
from .machines import run
from .machines.fast import fast_run
from .growth import growth_classify, GrowthSeries
from . import tm as tmmod

CSV_COLUMNS = ("experiment", "machine", "n", "beta_steps", "transitions",
               "max_bit_space", "max_abstract_space", "heap_cells", "completed")
KINDS = ("toy", "locpy", "glcpy", "eta", "counter", "tm")


def sample_string(n, seed=0):
    rng = random.Random(1000 + 31 * seed + n)
    return "".join(rng.choice("01") for _ in range(n))


# ---------------------------------------------------------------- families

def scroll_term(kind, n):
    return App(scroller(kind), scott_string(BITS, sample_string(n)))


def counter_term(n):
    """C_0[C_1[...C_n[λy.I]...]] I with C_0 = λx0.[.](x0 x0) and
    C_k = λxk.[.](x0 x1 ... xk)."""
    # built inside out; the hole sits under k+1 binders x0..xk
    t = Lam(IDENT, "y")
    for k in range(n, -1, -1):
        if k == 0:
            arg = App(Var(1, "x0"), Var(1, "x0"))
        else:
            arg = Var(k + 1, "x0")
            for j in range(1, k + 1):
                arg = App(arg, Var(k + 1 - j, f"x{j}"))
        t = Lam(App(t, arg), f"x{k}")
    return App(t, IDENT)


def eta_bases(count=5, budget=24, fuel=10**4):
    """Corpus terms t such that t I reaches a weak head normal form."""
    out = []
    seed = 0
    while len(out) < count:
        t = generate_closed_term(seed, budget)
        seed += 1
        try:
            reference_whnf(App(t, IDENT), fuel)
        except FuelExhausted:
            continue
        out.append(t)
    return out


def eta_term(n, base=0):
    t = eta_bases(base + 1)[base]
    return App(eta_expand(t, n), IDENT)


def tm_input(n):
    return sample_string(n, seed=7)


# ---------------------------------------------------------------- specs

@dataclass
class ExperimentSpec:
    kind: str
    nmin: int
    nmax: int
    step: int = 1
    machines: tuple = ("space",)
    fuel: int = 10**7
    output: str = None
    tm: str = "parity"
    check: bool = False
    points: tuple = None  # explicit n values, overriding the range

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment {self.kind!r}")
        if self.nmin > self.nmax:
            raise ValueError("min must not exceed max")
        if self.step < 1:
            raise ValueError("step must be >= 1")

    def ns(self):
        if self.points is not None:
            return list(self.points)
        return list(range(self.nmin, self.nmax + 1, self.step))


# expected verdicts per (kind, machine, column); anything unlisted is reported only
EXPECTED = {
    ("toy", "naive", "max_bit_space"): "exponential",
    ("toy", "space", "max_bit_space"): "logarithmic",
    ("toy", "space", "max_abstract_space"): "constant",
    ("locpy", "space", "max_bit_space"): "linear",
    ("glcpy", "space", "max_bit_space"): "logarithmic",
    ("glcpy", "space", "max_abstract_space"): "constant",
    ("eta", "space", "max_abstract_space"): "constant",
    ("counter", "space", "max_bit_space"): "exponential",
    ("counter", "time", "heap_cells"): "linear",
    ("tm", "space", "max_bit_space"): "logarithmic",
}


def term_for(spec, n):
    if spec.kind in ("toy", "locpy", "glcpy"):
        return scroll_term(spec.kind, n)
    if spec.kind == "eta":
        return eta_term(n)
    if spec.kind == "counter":
        return counter_term(n)
    m = tmmod.load_fixture(spec.tm) if "/" not in spec.tm else tmmod.parse_tm(open(spec.tm).read())
    return apps(tmmod.encode_tm(m), tmmod.encode_input(tm_input(n)))


def run_point(kind, machine, n, t0, fuel, check=False):
    if machine == "space" and not check:
        prof = fast_run(t0, fuel)
    else:
        prof = run(machine, t0, fuel, check=check)
    row = {
        "experiment": kind,
        "machine": machine,
        "n": n,
        "beta_steps": prof.beta_steps,
        "transitions": prof.transitions,
        "max_bit_space": prof.max_bit_space,
        "max_abstract_space": "" if prof.max_abstract_space is None else prof.max_abstract_space,
        "heap_cells": "" if prof.max_heap_cells is None else prof.max_heap_cells,
        "completed": int(prof.completed),
    }
    return row, prof


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: list = field(default_factory=list)
    series: dict = field(default_factory=dict)   # (machine, column) -> GrowthSeries
    profiles: dict = field(default_factory=dict)

    def verdicts(self):
        return {key: s.verdict for key, s in self.series.items()}

    def contradictions(self):
        out = []
        for (machine, col), verdict in self.verdicts().items():
            exp = EXPECTED.get((self.spec.kind, machine, col))
            if exp is not None and verdict != exp:
                out.append((machine, col, exp, verdict))
        return out


def run_experiment(spec, keep_profiles=False):
    res = ExperimentResult(spec)
    for n in spec.ns():
        t0 = term_for(spec, n)
        for machine in spec.machines:
            row, prof = run_point(spec.kind, machine, n, t0, spec.fuel, spec.check)
            res.rows.append(row)
            if keep_profiles:
                res.profiles[(machine, n)] = prof
            if not row["completed"]:
                continue  # flagged rows stay out of the series
            for col in ("max_bit_space", "max_abstract_space", "heap_cells"):
                if row[col] == "":
                    continue
                key = (machine, col)
                res.series.setdefault(key, GrowthSeries(f"{spec.kind}/{machine}/{col}"))
                res.series[key].add(n, row[col])
    res.rows.sort(key=lambda r: (r["n"], spec.machines.index(r["machine"])))
    return res


def write_csv(rows, path):
    import csv
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
