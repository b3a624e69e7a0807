"""Log-sensitive Turing machines: the description format, a direct simulator
and the compiler to the deterministic λ-calculus.

A machine has a read-only input tape over {0,1} framed by the delimiters L
and R, and one work tape over {0,1,_}.  The compiled term keeps the input
as an immutable Scott string together with a binary head index, and the work
tape split around its head.
"""
from dataclasses import dataclass, field
from importlib import resources

from .terms import TermError, in_lambda_det
from .encodings import (
    A, L, build, Alphabet, BITS, INCHARS, EMPTY2, SHARED, CONSB, IDENT, TRUE, FALSE,
    THETA_DET, scott_char, scott_string, scott_empty, bin_encode, read_expr,
    succ_expr, pred_expr,
)

INPUT_CHARS = ("0", "1", "L", "R")
WORK_CHARS = ("0", "1", "_")
MOVES = ("L", "R", "S")
WORK = Alphabet(WORK_CHARS, "work")
BLANK = "_"


class TMError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class TMDesc:
    states: list
    init: str
    accept: str
    reject: str
    table: dict = field(default_factory=dict)
    name: str = ""

    def transition(self, q, c, w):
        return self.table.get((q, c, w))

    def is_final(self, q):
        return q in (self.accept, self.reject)


def parse_tm(text, name=""):
    states = None
    init = accept = reject = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise TMError(f"expected 'key: value', got {line!r}", lineno)
        key = key.strip()
        vals = rest.split()
        if key == "states":
            if states is not None:
                raise TMError("states declared twice", lineno)
            if len(set(vals)) != len(vals) or not vals:
                raise TMError("states must be a non-empty list of distinct names", lineno)
            states = vals
        elif key in ("init", "accept", "reject"):
            if len(vals) != 1:
                raise TMError(f"{key} takes exactly one state", lineno)
            if key == "init":
                init = vals[0]
            elif key == "accept":
                accept = vals[0]
            else:
                reject = vals[0]
        elif key == "t":
            if len(vals) != 8 or vals[3] != "->":
                raise TMError("transition must read 'q c w -> q2 w2 imove wmove'", lineno)
            rows.append((lineno, vals))
        else:
            raise TMError(f"unknown key {key!r}", lineno)

    if states is None:
        raise TMError("missing states")
    for key, v in (("init", init), ("accept", accept), ("reject", reject)):
        if v is None:
            raise TMError(f"missing {key}")
        if v not in states:
            raise TMError(f"{key} state {v!r} is not declared")
    if accept == reject:
        raise TMError("accept and reject states must differ")

    table = {}
    for lineno, (q, c, w, _, q2, w2, im, wm) in rows:
        for s in (q, q2):
            if s not in states:
                raise TMError(f"unknown state {s!r}", lineno)
        if c not in INPUT_CHARS:
            raise TMError(f"unknown input symbol {c!r}", lineno)
        for x in (w, w2):
            if x not in WORK_CHARS:
                raise TMError(f"unknown work symbol {x!r}", lineno)
        for mv in (im, wm):
            if mv not in MOVES:
                raise TMError(f"unknown move {mv!r}", lineno)
        if q in (accept, reject):
            raise TMError(f"final state {q!r} has a transition", lineno)
        if (q, c, w) in table:
            raise TMError(f"duplicate transition for ({q}, {c}, {w})", lineno)
        table[(q, c, w)] = (q2, w2, im, wm)
    return TMDesc(states, init, accept, reject, table, name)


def fixture_names():
    return sorted(p.name[:-3] for p in resources.files("lamspace.data").iterdir()
                  if p.name.endswith(".tm"))


def load_fixture(name):
    text = resources.files("lamspace.data").joinpath(name + ".tm").read_text("utf-8")
    return parse_tm(text, name)


# ---------------------------------------------------------------- simulator

@dataclass(frozen=True)
class TMConfig:
    input: str
    n: int
    left: str      # reversed: the cell next to the head comes first
    scanned: str
    right: str
    state: str

    def input_char(self):
        if self.n == 0:
            return "L"
        if self.n > len(self.input):
            return "R"
        return self.input[self.n - 1]


@dataclass
class TMResult:
    accept: bool
    steps: int
    space: int
    final: TMConfig = None


@dataclass
class Stuck:
    config: TMConfig
    steps: int
    space: int


@dataclass
class TMFuelExhausted:
    steps: int
    space: int


def initial_config(m, i):
    return TMConfig(i, 0, "", BLANK, "", m.init)


def step_config(m, c):
    """One transition, or None when no rule applies."""
    rule = m.transition(c.state, c.input_char(), c.scanned)
    if rule is None:
        return None
    q2, w2, im, wm = rule
    n = c.n
    if im == "R":
        n = min(n + 1, len(c.input) + 1)
    elif im == "L":
        n = max(n - 1, 0)
    left, a, right = c.left, w2, c.right
    if wm == "R":
        left, a, right = a + left, (right[:1] or BLANK), right[1:]
    elif wm == "L":
        right, a, left = a + right, (left[:1] or BLANK), left[1:]
    return TMConfig(c.input, n, left, a, right, q2)


def simulate_tm(m, i, fuel=10**6, trace=None):
    """Run m on i.  If trace is a list, every configuration is appended to it."""
    if any(ch not in "01" for ch in i):
        raise ValueError("input must be a bit string")
    c = initial_config(m, i)
    pos = 0
    seen = {0}
    steps = 0
    if trace is not None:
        trace.append(c)
    while not m.is_final(c.state):
        if steps >= fuel:
            return TMFuelExhausted(steps, len(seen))
        rule = m.transition(c.state, c.input_char(), c.scanned)
        if rule is None:
            return Stuck(c, steps, len(seen))
        c = step_config(m, c)
        pos += {"L": -1, "R": 1, "S": 0}[rule[3]]
        seen.add(pos)
        steps += 1
        if trace is not None:
            trace.append(c)
    return TMResult(c.state == m.accept, steps, len(seen), c)


# ---------------------------------------------------------------- compiler

def encode_input(i):
    return scott_string(BITS, i)


def work_char(ch):
    return scott_char(WORK, WORK.index(ch) + 1)


def state_char(m, q):
    return scott_char(Alphabet(m.states, "states"), m.states.index(q) + 1)


def config_tuple(m, c):
    """The 6-tuple λx. x i n sl a sr q denoting configuration c."""
    return build(L("x", A("x", encode_input(c.input), bin_encode(c.n),
                          scott_string(WORK, c.left), work_char(c.scanned),
                          scott_string(WORK, c.right), state_char(m, c.state))))


def _wcell(ch, r):
    # cell of a work string: 3 symbols plus the empty case
    names = ("w0", "w1", "wb", "we")
    return L(*names, A(names[WORK.index(ch)], r))


WEMPTY = scott_empty(3)

# pop s k -> k a s' : head and tail of a work string, blank when it is empty
POP = build(L("s", "k", A(
    "s",
    L("r", "k", A("k", work_char("0"), "r")),
    L("r", "k", A("k", work_char("1"), "r")),
    L("r", "k", A("k", work_char("_"), "r")),
    L("k", A("k", work_char("_"), WEMPTY)),
    "k")))


def _action(m, rule, c):
    """Body of A = λi.λn.λsl.λsr.λf.λk. ... for one table entry."""
    q2, w2, im, wm = rule
    q2t = state_char(m, q2)
    nxt = lambda sl, a, sr: A("f", "k", L("x", A("x", "i", "n", sl, a, sr, q2t)))
    if wm == "S":
        work = nxt("sl", work_char(w2), "sr")
    elif wm == "R":
        work = A(POP, "sr", L("a", "sr", nxt(_wcell(w2, "sl"), "a", "sr")))
    else:
        work = A(POP, "sl", L("a", "sl", nxt("sl", "a", _wcell(w2, "sr"))))
    # the head never leaves the delimiters
    if im == "R" and c != "R":
        return A(succ_expr(SHARED), "n", L("n", work))
    if im == "L" and c != "L":
        return A(pred_expr(SHARED), "n", L("n", work))
    return work


STUCK = IDENT


def _state_branch(m, q):
    nargs = ("a", "i", "n", "sl", "sr", "f", "k")
    if m.is_final(q):
        return L("c", *nargs, A("k", L("x", A("x", "i", "n", "sl", "a", "sr", state_char(m, q)))))
    per_char = []
    for c in INPUT_CHARS:
        per_work = []
        for w in WORK_CHARS:
            rule = m.transition(q, c, w)
            if rule is None:
                per_work.append(L("i", "n", "sl", "sr", "f", "k", STUCK))
            else:
                per_work.append(L("i", "n", "sl", "sr", "f", "k", _action(m, rule, c)))
        per_char.append(L("a", A("a", *per_work)))
    return L("c", A("c", *per_char))


def _transaux(m):
    branches = [_state_branch(m, q) for q in m.states]
    after_read = L("c", "n", A("q", *branches, "c", "a", "i", "n", "sl", "sr", "f", "k"))
    return L("f", "k", "C", A("C", L("i", "n", "sl", "a", "sr", "q",
                                     A(read_expr(SHARED), "i", "n", after_read))))


def _final(m):
    outs = []
    for q in m.states:
        if q == m.accept:
            outs.append(L("k", A("k", TRUE)))
        elif q == m.reject:
            outs.append(L("k", A("k", FALSE)))
        else:
            outs.append(IDENT)
    return L("k2", "D", A("D", L("i", "n", "sl", "a", "sr", "q", A("q", *outs, "k2"))))


class Compiled:
    """encode_tm's result plus the bookkeeping the lockstep check needs."""

    def __init__(self, m, term, transaux):
        self.machine = m
        self.term = term
        self.transaux = transaux

    def boundary_term(self):
        # the node where trans inspects a fresh configuration C
        return self.transaux.body.body.body


def compile_tm(m):
    init = L("k", "i", A("k", L("x", A("x", "i", EMPTY2, WEMPTY, work_char(BLANK), WEMPTY,
                                        state_char(m, m.init)))))
    trans = A(THETA_DET, THETA_DET, _transaux(m))
    main = L("consb", "i", A(init, L("C", A(trans, L("D", A(_final(m), IDENT, "D")), "C")), "i"))
    # the shared cons sits leftmost so numeral cells get short code references
    term = build(A(L("K", A("K", CONSB)), main))
    if not in_lambda_det(term):
        raise TermError("compiled machine left the deterministic fragment")
    # main = λconsb.λi. init (λC. θ θ transaux (...) C) i
    trans_app = term.arg.body.body.fun.arg.body.fun.fun
    return Compiled(m, term, trans_app.arg)


def encode_tm(m):
    return compile_tm(m).term


def encoded_configs(compiled, i, fuel):
    """Run the compiled machine on i with the Space KAM and decode the
    configuration every time trans starts an iteration.  Returns the decoded
    tuples and the run profile."""
    from .terms import Code, apps
    from .machines import run
    code = Code(apps(compiled.term, encode_input(i)))
    target = compiled.boundary_term()
    node = next(k for k in range(1, code.size + 1) if code.terms[k] is target)
    binder = code.parent[node]
    seen = []

    def observe(m, s, kind):
        if s.node == node:
            for b, c in s.env:
                if b == binder:
                    seen.append(m.decode_closure(c))

    prof = run("space", code, fuel, observer=observe)
    return seen, prof
