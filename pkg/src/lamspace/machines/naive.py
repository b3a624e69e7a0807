"""The Naive KAM: environments are extended at every β and never trimmed."""
from ..terms import LAM, APP
from .core import Closure, InvariantViolation, Machine, decode_closure, apply_stack, iter_stack


class NEnv:
    """Persistent environment cell.  Variable bits are positional (the entry at
    position k is reached by de Bruijn index k), which telescopes so the cached
    total stays O(1) to compute: sum of bits(k) for k=1..L."""
    __slots__ = ("binder", "closure", "rest", "length", "bits", "count")

    def __init__(self, binder, closure, rest):
        self.binder = binder
        self.closure = closure
        self.rest = rest
        if rest is None:
            self.length = 1
            self.bits = 1 + closure.bits
            self.count = closure.count
        else:
            self.length = rest.length + 1
            self.bits = closure.bits + rest.bits + self.length.bit_length()
            self.count = closure.count + rest.count


def nenv_entries(e):
    while e is not None:
        yield e.binder, e.closure
        e = e.rest


class NaiveState:
    __slots__ = ("node", "env", "stack", "sbits", "scount", "bits", "count")

    def __init__(self, node, env, stack, sbits, scount, bits, count):
        self.node = node
        self.env = env
        self.stack = stack
        self.sbits = sbits
        self.scount = scount
        self.bits = bits
        self.count = count


class NaiveKAM(Machine):
    name = "naive"
    kinds = ("sea", "beta", "sub")
    beta_kinds = ("beta",)
    has_abstract_space = True
    has_heap = False

    def __init__(self, code):
        super().__init__(code)
        self.ubits = code.size.bit_length()

    def closure(self, node, env):
        if env is None:
            return Closure(node, None, self.ubits, 1)
        return Closure(node, env, self.ubits + env.bits, 1 + env.count)

    def state(self, node, env, stack, sbits, scount):
        eb, ec = (0, 0) if env is None else (env.bits, env.count)
        return NaiveState(node, env, stack, sbits, scount,
                          self.ubits + eb + sbits, 1 + ec + scount)

    def initial(self):
        return self.state(self.code.root, None, None, 0, 0)

    def step(self, s):
        code = self.code
        n = s.node
        k = code.kind[n]
        if k == APP:
            c = self.closure(code.right[n], s.env)
            return "sea", self.state(code.left[n], s.env, (c, s.stack),
                                     s.sbits + c.bits, s.scount + c.count)
        if k == LAM:
            if s.stack is None:
                return None
            c, rest = s.stack
            return "beta", self.state(code.left[n], NEnv(n, c, s.env), rest,
                                      s.sbits - c.bits, s.scount - c.count)
        e = s.env
        for _ in range(code.index[n] - 1):
            e = e.rest
        if e is None:
            raise InvariantViolation(f"unbound variable at node {n}")
        c = e.closure
        return "sub", self.state(c.node, c.env, s.stack, s.sbits, s.scount)

    def lookup(self, env, b):
        e = env
        while e is not None:
            if e.binder == b:
                return e.closure.node, e.closure.env
            e = e.rest
        raise InvariantViolation(f"variable {b} not in environment")

    def check(self, s, kind):
        # positional invariant: one entry per enclosing binder, which makes
        # every closure closed and bounds environment length by |t0|
        for node, env in [(s.node, s.env)] + ([(s.stack[0].node, s.stack[0].env)] if kind == "sea" else []):
            length = 0 if env is None else env.length
            if length != self.code.depth[node]:
                raise InvariantViolation(f"environment length {length} at depth {self.code.depth[node]}")
            binders = [b for b, _ in nenv_entries(env)]
            chain = []
            p = self.code.parent[node]
            while p:
                if self.code.kind[p] == LAM:
                    chain.append(p)
                p = self.code.parent[p]
            if binders != chain:
                raise InvariantViolation("environment entries do not follow the enclosing binders")

    def decode_closure(self, c, memo=None):
        return decode_closure(self.code, c.node, c.env, self.lookup, memo)

    def decode(self, s):
        memo = {}
        head = decode_closure(self.code, s.node, s.env, self.lookup, memo)
        return apply_stack(head, [self.decode_closure(c, memo) for c in iter_stack(s.stack)])

    def final_closure(self, s):
        return self.closure(s.node, s.env)
