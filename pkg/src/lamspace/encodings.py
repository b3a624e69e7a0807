"""Scott-encoded data, fix-point combinators, string scrollers and the
binary-counter arithmetic used to read the input tape.

A small named-term builder keeps the combinators readable:
L("x", "y", body) is an abstraction, A(f, a, b) a left-nested application,
a str is a variable, and a closed Term can be embedded as is.
"""
from .terms import App, Lam, Var, Term, TermError, parse, in_lambda_det


# ---------------------------------------------------------------- builder

class _L:
    __slots__ = ("names", "body")

    def __init__(self, names, body):
        self.names = names
        self.body = body


class _A:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = items


def L(*args):
    return _L(args[:-1], args[-1])


def A(*items):
    if len(items) == 1:
        return items[0]
    return _A(items)


def build(expr, scope=()):
    """Named expression -> de Bruijn Term.  scope lists binder names, innermost last."""
    if isinstance(expr, Term):
        if not expr.closed:
            raise TermError("only closed terms can be embedded")
        return expr
    if isinstance(expr, str):
        for i in range(len(scope) - 1, -1, -1):
            if scope[i] == expr:
                return Var(len(scope) - i, expr)
        raise TermError(f"unbound name {expr!r}")
    if isinstance(expr, _L):
        inner = scope + tuple(expr.names)
        t = build(expr.body, inner)
        for name in reversed(expr.names):
            t = Lam(t, name)
        return t
    if isinstance(expr, _A):
        t = build(expr.items[0], scope)
        for x in expr.items[1:]:
            t = App(t, build(x, scope))
        return t
    raise TypeError(f"cannot build {expr!r}")


# ---------------------------------------------------------------- Scott data

class Alphabet:
    """Ordered symbols; a Scott string over it uses len+1 binders (the last for ε)."""

    def __init__(self, symbols, name=""):
        self.symbols = tuple(symbols)
        self.name = name
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    def __len__(self):
        return len(self.symbols)

    def index(self, sym):
        try:
            return self.symbols.index(sym)
        except ValueError:
            raise ValueError(f"symbol {sym!r} not in alphabet {self.symbols}") from None

    def __repr__(self):
        return f"Alphabet({''.join(map(str, self.symbols))})"


BITS = Alphabet("01", "bits")


def _binder_names(n):
    return [f"x{i}" for i in range(n)]


def scott_char(sigma, i):
    """λx_1..λx_n. x_i for the i-th symbol, counting from 1."""
    n = len(sigma)
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range for {sigma}")
    i -= 1
    t = Var(n - i, f"x{i}")
    for k in reversed(range(n)):
        t = Lam(t, f"x{k}")
    return t


def _cell(n, i, rest):
    # λx_0..λx_{n-1}.λxe. x_i rest
    t = App(Var(n + 1 - i, f"x{i}"), rest)
    t = Lam(t, "xe")
    for k in reversed(range(n)):
        t = Lam(t, f"x{k}")
    return t


def scott_empty(n):
    t = Lam(Var(1, "xe"), "xe")
    for k in reversed(range(n)):
        t = Lam(t, f"x{k}")
    return t


def scott_string(sigma, s):
    n = len(sigma)
    t = scott_empty(n)
    for ch in reversed(list(s)):
        t = _cell(n, sigma.index(ch), t)
    return t


def read_scott_string(t, sigma):
    """Inverse of scott_string; raises ValueError on anything else."""
    n = len(sigma)
    out = []
    while True:
        body = t
        for _ in range(n + 1):
            if type(body) is not Lam:
                raise ValueError("not a Scott string: expected an abstraction")
            body = body.body
        if type(body) is Var and body.index == 1:
            return "".join(map(str, out)) if all(isinstance(x, str) for x in out) else out
        if type(body) is not App or type(body.fun) is not Var:
            raise ValueError("not a Scott string cell")
        k = body.fun.index
        if not 2 <= k <= n + 1:
            raise ValueError("not a Scott string cell")
        if not body.arg.closed:
            raise ValueError("Scott string tail is not closed")
        out.append(sigma.symbols[n + 1 - k])
        t = body.arg


def read_scott_char(t, sigma):
    n = len(sigma)
    body = t
    for _ in range(n):
        if type(body) is not Lam:
            raise ValueError("not a Scott character")
        body = body.body
    if type(body) is not Var or not 1 <= body.index <= n:
        raise ValueError("not a Scott character")
    return sigma.symbols[n - body.index]


def bin_encode(n):
    """Little-endian binary numeral without high zeros (0 is the empty string)."""
    out = []
    while n:
        out.append("1" if n & 1 else "0")
        n >>= 1
    return scott_string(BITS, "".join(out))


def bin_decode(t):
    s = read_scott_string(t, BITS)
    return sum(1 << i for i, c in enumerate(s) if c == "1")


TRUE = parse(r"\x.\y.x")
FALSE = parse(r"\x.\y.y")
IDENT = parse(r"\x.x")

# ---------------------------------------------------------------- fix points

# Turing's θ as usually written; its body applies y to an application, so it
# is outside the deterministic fragment.  THETA_DET is its η-expansion.
THETA = parse(r"\x.\y. y (x x y)")
THETA_DET = parse(r"\x.\y. y (\z. x x y z)")


def fix(f):
    return A(THETA, THETA, f)


def fix_det(f):
    return A(THETA_DET, THETA_DET, f)


# ---------------------------------------------------------------- scrollers

def toy():
    return build(fix(L("f", "z", A("z", "f", "f", IDENT))))


def glcpy():
    return build(L("z", A(fix(L("f", "s", A("s", "f", "f", "z"))), "z")))


def locpy():
    """Copies its argument by consing every character read onto an accumulator
    and reversing that accumulator at the end.  Deterministic fragment only."""
    cell0 = lambda r: L("a", "b", "c", A("a", r))
    cell1 = lambda r: L("a", "b", "c", A("b", r))
    empty = scott_empty(2)
    rev = fix_det(L("g", "z", "out",
                    A("z", L("r", A("g", "r", cell0("out"))),
                      L("r", A("g", "r", cell1("out"))),
                      "out")))
    # the ε action must be a value, so every branch takes a unit argument u
    fwd = fix_det(L("f", "z", "acc", "u",
                    A("z", L("r", "u", A("f", "r", cell0("acc"), "u")),
                      L("r", "u", A("f", "r", cell1("acc"), "u")),
                      L("u", A(rev, "acc", empty)),
                      "u")))
    return build(L("s", A(fwd, "s", empty, IDENT)))


def scroller(kind):
    if kind == "toy":
        return toy()
    if kind == "glcpy":
        return glcpy()
    if kind == "locpy":
        return locpy()
    raise ValueError(f"unknown scroller {kind!r}")


# ---------------------------------------------------------------- binary counters
#
# Numerals are little-endian Scott strings over {0,1} without high zeros, so
# zero is the empty string.  Every operation takes its continuation last.
#
# Cell construction goes through a "cell strategy".  INLINE writes the cell
# literal at the use site.  SHARED routes every numeral cell through one cons
# function bound to `consb`; placed at the far left of a program, the cell
# code then has a tiny left address and numeral cells stay cheap.

EMPTY2 = scott_empty(2)
INCHARS = Alphabet("01LR", "input")


def cell0(r):
    return L("a", "b", "c", A("a", r))


def cell1(r):
    return L("a", "b", "c", A("b", r))


class InlineCells:
    def cons(self, bit, r, k):
        """Expression passing the numeral cell bit·r to continuation k."""
        return A(k, cell1(r) if bit else cell0(r))


class SharedCells:
    var = "consb"

    def cons(self, bit, r, k):
        return A(self.var, L("c_0", "c_1", A(k, "c_1" if bit else "c_0")), r)


INLINE = InlineCells()
SHARED = SharedCells()

# consb k r -> k (0·r) (1·r); the unused cell is discarded by the continuation
CONSB = build(L("k", "r", A("k", cell0("r"), cell1("r"))))


def succ_expr(cs):
    return fix_det(L("s", "n", "k", A(
        "n",
        L("r", "k", cs.cons(1, "r", "k")),
        L("r", "k", A("s", "r", L("q", cs.cons(0, "q", "k")))),
        L("k", cs.cons(1, EMPTY2, "k")),
        "k")))


def pred_expr(cs):
    # 0r -> 1 pred(r);  1r -> 0r unless r is empty;  pred 0 = 0
    one_tail = A("r",
                 L("q", "k", cs.cons(0, "q", L("t", cs.cons(0, "t", "k")))),
                 L("q", "k", cs.cons(1, "q", L("t", cs.cons(0, "t", "k")))),
                 L("k", A("k", EMPTY2)),
                 "k")
    return fix_det(L("p", "n", "k", A(
        "n",
        L("r", "k", A("p", "r", L("q", cs.cons(1, "q", "k")))),
        L("r", "k", one_tail),
        L("k", A("k", EMPTY2)),
        "k")))


def iszero_expr():
    # scans, so non-canonical numerals such as "00" are zero too
    return fix_det(L("z", "n", "k", A(
        "n",
        L("r", "k", A("z", "r", "k")),
        L("r", "k", A("k", FALSE)),
        L("k", A("k", TRUE)),
        "k")))


def dec_expr(cs):
    """dec m kz knz: for canonical m >= 1, m-1 goes to kz when it is zero and
    to knz otherwise.  Decrementing and testing in one pass saves a second
    inspection of the numeral per scanned character."""
    pred_tail = L("r", "kz", "knz", A(pred_expr(cs), "r", L("q", cs.cons(1, "q", "knz"))))
    one = L("r", "kz", "knz", A(
        "r",
        L("q", "kz", "knz", cs.cons(0, "q", L("t", cs.cons(0, "t", "knz")))),
        L("q", "kz", "knz", cs.cons(1, "q", L("t", cs.cons(0, "t", "knz")))),
        L("kz", "knz", A("kz", EMPTY2)),
        "kz", "knz"))
    return L("m", "kz", "knz", A("m", pred_tail, one, L("kz", "knz", A("kz", EMPTY2)), "kz", "knz"))


def sel(ch):
    return scott_char(INCHARS, INCHARS.index(ch) + 1)


def count_expr(cs):
    # count a u k: k (u + |a|)
    step = L("r", "u", "k", A(succ_expr(cs), "u", L("v", A("c", "r", "v", "k"))))
    return fix_det(L("c", "a", "u", "k", A("a", step, step, L("u", "k", A("k", "u")), "u", "k")))


def lockstep_expr(cs):
    """lock a b k with |b| <= |a|: drop |b| characters of a, then count the rest."""
    adv = L("a2", "b2", "k", A("w", "a2", "b2", "k"))
    on_b = L("b2", "a", "k", A("a", adv, adv, L("b2", "k", A("k", EMPTY2)), "b2", "k"))
    return fix_det(L("w", "a", "b", "k", A(
        "b", on_b, on_b, L("a", "k", A(count_expr(cs), "a", EMPTY2, "k")), "a", "k")))


def scan_expr(cs):
    """scan s m i k, m >= 1: k sel n where sel is the character at position m
    of s (R past the end) and n is the index rebuilt from where the scan
    stopped.  The scanned copy of the index is used up by the scan, so only
    one numeral is ever live."""
    def branch(ch):
        found = L("z", A("lock", "i", "r", L("n", A("k", sel(ch), "n"))))
        return L("r", "m", "i", "k", A("dec", "m", found, L("m", A("sc", "r", "m", "i", "k"))))
    # past the end: the index was |i|+1, rebuilt by counting i from one
    past = L("m", "i", "k", cs.cons(1, EMPTY2, L("one", A("count", "i", "one", L("n", A("k", sel("R"), "n"))))))
    body = fix_det(L("sc", "s", "m", "i", "k", A("s", branch("0"), branch("1"), past, "m", "i", "k")))
    return L("s", "m", "i", "k", A(
        L("dec", "lock", "count", A(body, "s", "m", "i", "k")),
        dec_expr(cs),
        L("a", "b", "k", A(lockstep_expr(cs), "a", "b", "k")),
        L("a", "u", "k", A(count_expr(cs), "a", "u", "k"))))


def read_expr(cs):
    """read i n k -> k sel n: sel selects over {0,1,L,R}; n is handed back."""
    scan = scan_expr(cs)
    return L("i", "n", "k", A(
        "n",
        L("q", "k", cs.cons(0, "q", L("m", A(scan, "i", "m", "i", "k")))),
        L("q", "k", cs.cons(1, "q", L("m", A(scan, "i", "m", "i", "k")))),
        L("k", A("k", sel("L"), EMPTY2)),
        "k"))


BIN_SUCC = build(succ_expr(INLINE))
BIN_PRED = build(pred_expr(INLINE))
BIN_ISZERO = build(iszero_expr())
READ_N = build(read_expr(INLINE))
# read i n k -> k sel, the index being dropped
READ = build(L("i", "n", "k", A(READ_N, "i", "n", L("c", "m", A("k", "c")))))


def bin_arith():
    return {"bin_succ": BIN_SUCC, "bin_pred": BIN_PRED, "bin_iszero": BIN_ISZERO}


def input_reader():
    return READ


COMBINATORS = {
    "theta": THETA,
    "theta_det": THETA_DET,
    "fix": build(L("f", A(THETA, THETA, "f"))),
    "I": IDENT,
    "true": TRUE,
    "false": FALSE,
    "bin_succ": BIN_SUCC,
    "bin_pred": BIN_PRED,
    "bin_iszero": BIN_ISZERO,
    "input_reader": READ,
    "read_with_index": READ_N,
}
