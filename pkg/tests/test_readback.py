import itertools

from lamspace.terms import App, Lam, Var, Code, parse, DeBruijn, LAMBDA, APPLY, UNDEFINED, \
    constructor_at_tree_address
from lamspace.reference import reference_whnf, FuelExhausted
from lamspace.generate import corpus
from lamspace.machines import run
from lamspace.readback import constructor_at, finals_equal_at, WalkStats, live_cursors

I = Lam(Var(1))
K = parse(r"\x.\y.x")


def final(name, t0, fuel=10**5):
    prof = run(name, t0, fuel)
    m = prof.machine_obj
    return m.code, m.final_closure(prof.final_state)


def addresses(k):
    for n in range(k + 1):
        for bs in itertools.product("01", repeat=n):
            yield "".join(bs)


def test_identity_examples():
    code, f = final("space", App(I, I))
    assert constructor_at(code, f, "") == LAMBDA
    assert constructor_at(code, f, "0") == DeBruijn(1)
    assert constructor_at(code, f, "00") == UNDEFINED


def test_finals_equal_at():
    ca, fa = final("space", App(I, I))
    cb, fb = final("space", App(I, K))
    for a in addresses(4):
        assert finals_equal_at(fa, fa, a, ca, ca)
    assert not finals_equal_at(fa, fb, "0", ca, cb)
    assert finals_equal_at(fa, fb, "", ca, cb)


def test_matches_decode_oracle_through_environments():
    # the result is only reachable by jumping through the environment
    t0 = parse(r"(\x.\y. y x) (\z.z z) (\w.\v. w (v w))")
    code, f = final("space", t0)
    want = run("space", t0, 10**5)
    decoded = want.machine_obj.decode(want.final_state)
    for a in addresses(8):
        st = WalkStats()
        assert constructor_at(code, f, a, st) == constructor_at_tree_address(decoded, a)
        assert st.steps <= len(a) + st.jumps
        assert st.max_live == 1


def test_corpus_and_lam_agree():
    n = 0
    for t in corpus(80, 30, det=True):
        try:
            reference_whnf(t, 10**4)
        except FuelExhausted:
            continue
        ck, fk = final("space", t)
        cl, fl = final("lam", t)
        for a in addresses(6):
            assert finals_equal_at(fk, fl, a, ck, cl)
        n += 1
    assert n > 20
    assert live_cursors() <= 1
