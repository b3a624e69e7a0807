"""Acceptance criteria 1-11.  Tolerances and fitted constants are frozen
below; the summary at the end of the pytest run prints one PASS/FAIL line
per criterion."""
import itertools
import math
import random
import time

import pytest

from lamspace.terms import (App, Lam, Var, Code, apps, eta_expand, in_lambda_det,
                            constructor_at_tree_address, UNDEFINED)
from lamspace.encodings import (BITS, IDENT, THETA, TRUE, FALSE, scott_string,
                                read_scott_string, scroller)
from lamspace.generate import corpus, generate_closed_term
from lamspace.reference import reference_whnf, FuelExhausted
from lamspace.machines import run
from lamspace.machines.core import iter_stack
from lamspace.machines.fast import Applied
from lamspace.machines.space import SpaceKAM
from lamspace.growth import growth_classify
from lamspace.readback import constructor_at, WalkStats
from lamspace.experiments import (ExperimentSpec, run_experiment, counter_term, eta_bases,
                                  sample_string, tm_input)
from lamspace import tm as tmmod

# frozen constants
CORPUS_SIZE, CORPUS_BUDGET, CORPUS_FUEL = 1000, 40, 10**4
NAIVE_RATIO = 1.5
ETA_C = 2.5            # bits over base <= ETA_C * log2(n+2); measured worst 2.16
TM_BETA_C = 100        # beta <= c (T+1) max(|i|,1) log2(|i|+2); measured worst 92.7
LAM_ABS_DIFF = 1       # |abstract space (KAM) - abstract space (LAM)|, measured once
TM_FUEL = 10**8


def _scroll(kind, s):
    return App(scroller(kind), scott_string(BITS, s))


@pytest.fixture(scope="module")
def det_corpus():
    return corpus(400, CORPUS_BUDGET, det=True)


# ---------------------------------------------------------------- 1

@pytest.mark.criterion(1)
def test_c01_differential_corpus():
    start = time.time()
    terminating = 0
    for t in corpus(CORPUS_SIZE, CORPUS_BUDGET):
        assert t.size <= CORPUS_BUDGET and t.closed
        try:
            whnf, steps = reference_whnf(t, CORPUS_FUEL)
        except FuelExhausted:
            continue
        terminating += 1
        for machine in ("naive", "space", "time"):
            prof = run(machine, t, 10 * CORPUS_FUEL)
            assert prof.completed, (machine, t)
            assert prof.machine_obj.decode(prof.final_state) == whnf, (machine, t)
            assert prof.beta_steps == steps, (machine, t)
    assert terminating > 900
    assert time.time() - start <= 120


# ---------------------------------------------------------------- 2

@pytest.mark.criterion(2)
def test_c02_environment_domain_invariant():
    # check=True validates the domain of every closure the run creates
    for t in corpus(CORPUS_SIZE, CORPUS_BUDGET):
        run("space", t, CORPUS_FUEL, check=True)
    specs = [
        ExperimentSpec("toy", 2, 14, check=True),
        ExperimentSpec("locpy", 4, 64, check=True, points=(4, 8, 16, 32, 64)),
        ExperimentSpec("glcpy", 4, 256, check=True, points=(4, 8, 16, 32, 64, 128, 256)),
        ExperimentSpec("eta", 0, 16, check=True, points=(0, 1, 2, 4, 8, 16)),
        ExperimentSpec("counter", 2, 12, check=True),
        ExperimentSpec("tm", 0, 8, check=True, points=(0, 1, 2, 4, 8)),
    ]
    for spec in specs:
        res = run_experiment(spec)
        assert all(r["completed"] for r in res.rows), spec.kind


# ---------------------------------------------------------------- 3

@pytest.mark.criterion(3)
def test_c03_toy():
    start = time.time()
    ns = list(range(2, 15))
    naive = {n: run("naive", _scroll("toy", sample_string(n)), 10**6).max_bit_space for n in ns}
    for n in ns:
        if n >= 6:
            assert naive[n] / naive[n - 1] >= NAIVE_RATIO, n
    assert growth_classify(naive.items()) == "exponential"
    space = [run("space", _scroll("toy", sample_string(n)), 10**6) for n in ns]
    abstract = [p.max_abstract_space for p in space]
    assert len(set(abstract)) == 1
    assert growth_classify(list(zip(ns, abstract))) == "constant"
    assert growth_classify([(n, p.max_bit_space) for n, p in zip(ns, space)]) == "logarithmic"
    assert time.time() - start <= 60


# ---------------------------------------------------------------- 4

def _max_ref_bits_in_region(t0, region):
    code = Code(t0)
    best = [0]

    def observe(m, s, kind):
        todo = [(s.node, s.env)] + [(c.node, c.env) for c in iter_stack(s.stack)]
        while todo:
            node, env = todo.pop()
            if node <= region and code.abits[node] > best[0]:
                best[0] = code.abits[node]
            todo.extend((c.node, c.env) for _, c in env)

    prof = run("space", code, 10**6, observer=observe)
    assert prof.completed
    return best[0], prof


@pytest.mark.criterion(4)
def test_c04_locpy():
    ns = [4, 8, 16, 32, 64]
    series = []
    for n in ns:
        s = sample_string(n)
        prof = run("space", _scroll("locpy", s), 10**6)
        assert read_scott_string(prof.machine_obj.decode(prof.final_state), BITS) == s
        series.append((n, prof.max_bit_space))
    assert growth_classify(series) == "linear"
    region = scroller("locpy").size
    b4, _ = _max_ref_bits_in_region(_scroll("locpy", sample_string(4)), region)
    b64, _ = _max_ref_bits_in_region(_scroll("locpy", sample_string(64)), region)
    assert b4 == b64


# ---------------------------------------------------------------- 5

@pytest.mark.criterion(5)
def test_c05_glcpy():
    ns = list(range(4, 257))
    bits, abstract = [], []
    for n in ns:
        s = sample_string(n)
        prof = run("space", _scroll("glcpy", s), 10**6)
        assert read_scott_string(prof.machine_obj.decode(prof.final_state), BITS) == s
        bits.append((n, prof.max_bit_space))
        abstract.append((n, prof.max_abstract_space))
    assert growth_classify(abstract) == "constant"
    assert growth_classify(bits) == "logarithmic"


# ---------------------------------------------------------------- 6

@pytest.mark.criterion(6)
def test_c06_eta_expansion():
    for t in eta_bases(5):
        base = run("space", App(t, IDENT), 10**5)
        assert base.completed
        for n in (0, 1, 2, 4, 8, 16):
            p = run("space", App(eta_expand(t, n), IDENT), 10**5)
            assert p.completed
            assert p.max_abstract_space == base.max_abstract_space
            assert p.max_bit_space - base.max_bit_space <= ETA_C * math.log2(n + 2)


# ---------------------------------------------------------------- 7

@pytest.mark.criterion(7)
def test_c07_counter_explosion():
    start = time.time()
    heap = []
    for n in range(2, 13):
        t = counter_term(n)
        sp = run("space", t, 10**6)
        assert sp.completed and sp.machine_obj.decode(sp.final_state) == IDENT
        assert sp.max_bit_space >= 2 ** n
        tk = run("time", t, 10**6)
        assert tk.completed and tk.machine_obj.decode(tk.final_state) == IDENT
        heap.append((n, tk.max_heap_cells))
    assert growth_classify(heap) == "linear"
    assert time.time() - start <= 120


# ---------------------------------------------------------------- 8

@pytest.mark.criterion(8)
def test_c08_turing_machines():
    start = time.time()
    mismatches = 0
    worst = 0.0
    for name in ("always_accept", "parity", "contains01"):
        m = tmmod.load_fixture(name)
        enc = tmmod.encode_tm(m)
        assert in_lambda_det(enc)
        runner = Applied(enc)
        for n in range(13):
            for bits in itertools.product("01", repeat=n):
                i = "".join(bits)
                r = tmmod.simulate_tm(m, i)
                assert isinstance(r, tmmod.TMResult)
                prof = runner.run(tmmod.encode_input(i), TM_FUEL, accounting=False)
                got = prof.machine_obj.decode(prof.final_state) if prof.completed else None
                if got != (TRUE if r.accept else FALSE):
                    mismatches += 1
                bound = (r.steps + 1) * max(n, 1) * math.log2(n + 2)
                worst = max(worst, prof.beta_steps / bound)
    assert mismatches == 0
    assert worst <= TM_BETA_C, worst

    parity = Applied(tmmod.encode_tm(tmmod.load_fixture("parity")))
    series = []
    for n in (2, 4, 8, 16, 32):
        prof = parity.run(tmmod.encode_input(tm_input(n)), TM_FUEL)
        assert prof.completed
        series.append((n, prof.max_bit_space))
    assert growth_classify(series) == "logarithmic", series
    assert time.time() - start <= 300


# ---------------------------------------------------------------- 9

@pytest.mark.criterion(9)
def test_c09_space_lam_bisimilar(det_corpus):
    pairs = []
    for t in det_corpus:
        if len(pairs) == 200:
            break
        kam = run("space", t, CORPUS_FUEL)
        if kam.completed:
            pairs.append((t, kam))
    assert len(pairs) == 200
    for name in tmmod.fixture_names():
        if name == "loop":
            continue
        enc = tmmod.encode_tm(tmmod.load_fixture(name))
        for i in ("", "1", "0110"):
            t = apps(enc, tmmod.encode_input(i))
            pairs.append((t, run("space", t, 10**6)))
    for t, kam in pairs:
        assert in_lambda_det(t)
        lam = run("lam", t, 10**6)
        assert kam.completed and lam.completed
        assert lam.machine_obj.decode(lam.final_state) == kam.machine_obj.decode(kam.final_state)
        assert lam.beta_steps == kam.beta_steps
        assert abs(lam.max_abstract_space - kam.max_abstract_space) <= LAM_ABS_DIFF


# ---------------------------------------------------------------- 10

def _addresses(t, limit=12):
    out = []
    todo = [("", t)]
    while todo:
        a, x = todo.pop()
        out.append(a)
        if len(a) == limit:
            continue
        if type(x) is Lam:
            todo.append((a + "0", x.body))
        elif type(x) is App:
            todo.append((a + "0", x.fun))
            todo.append((a + "1", x.arg))
    return out


@pytest.mark.criterion(10)
def test_c10_constructor_at_address():
    rng = random.Random(10)
    finals = 0
    undefined = 0
    for t in corpus(CORPUS_SIZE, CORPUS_BUDGET):
        if finals == 200:
            break
        prof = run("space", t, CORPUS_FUEL)
        if not prof.completed:
            continue
        finals += 1
        m = prof.machine_obj
        fc = m.final_closure(prof.final_state)
        whnf = m.decode(prof.final_state)
        valid = _addresses(whnf)
        invalid = set()
        while len(invalid) < 50:
            a = "".join(rng.choice("01") for _ in range(rng.randint(1, 16)))
            if constructor_at_tree_address(whnf, a) == UNDEFINED or len(a) > 12:
                invalid.add(a)
        for a in valid + sorted(invalid):
            st = WalkStats()
            got = constructor_at(m.code, fc, a, st)
            assert got == constructor_at_tree_address(whnf, a), (t, a)
            assert st.max_live == 1
            assert st.steps <= len(a) + st.jumps
            undefined += got == UNDEFINED
    assert finals == 200 and undefined > 0


# ---------------------------------------------------------------- 11

def _fix_samples(count=10):
    """t0 = (λa. θ θ U) B S1 .. Sk with U mentioning a, so that u has a
    non-empty environment; B and the Si are corpus terms."""
    rng = random.Random(11)
    out = []
    seed = 0
    while len(out) < count:
        b = generate_closed_term(seed, 12)
        extra = [generate_closed_term(seed + 500 + j, 10) for j in range(rng.randint(0, 3))]
        seed += 1
        # U = λf. a (f a) or λf.λz. a z, over the binder a
        u = rng.choice([
            Lam(App(Var(2, "a"), App(Var(1, "f"), Var(2, "a"))), "f"),
            Lam(Lam(App(Var(3, "a"), Var(1, "z")), "z"), "f"),
            Lam(App(App(Var(2, "a"), Var(1, "f")), Var(2, "a")), "f"),
        ])
        t0 = apps(Lam(apps(THETA, THETA, u), "a"), b, *extra)
        out.append((t0, u, len(extra)))
    return out


@pytest.mark.criterion(11)
def test_c11_fixpoint_trace():
    expected = ["beta_nw", "beta_nw", "sea_nv", "sub"]
    for t0, u, k in _fix_samples():
        code = Code(t0)
        m = SpaceKAM(code)
        s = m.initial()
        # drive until the first θ is active with (θ, ε) on top of the stack
        while True:
            if code.kind[s.node] == 1 and code.terms[s.node] is THETA and s.stack is not None:
                top = s.stack[0]
                if code.terms[top.node] is THETA and top.env == ():
                    break
            s = m.step(s)[1]
        u_closure = s.stack[1][0]
        rest = s.stack[1][1]
        assert code.terms[u_closure.node] is u and u_closure.env != ()
        kinds = []
        for _ in range(4):
            kind, s = m.step(s)
            kinds.append(kind)
        assert kinds == expected
        assert s.node == u_closure.node and s.env == u_closure.env
        fixk = s.stack[0]
        assert s.stack[1] is rest
        # fixK = (x x y, [x <- θ, y <- (u, e)])
        assert code.kind[fixk.node] == 2
        assert sorted(code.terms[c.node] is THETA or c is u_closure for _, c in fixk.env) == [True, True]
        assert m.decode_closure(fixk) == apps(THETA, THETA, m.decode_closure(u_closure))
