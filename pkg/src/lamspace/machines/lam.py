"""The Space LAM: right-to-left call-by-value with a dump, sharing the Space
KAM's restricted environments."""
from ..terms import VAR, LAM, APP
from ..terms import App
from .core import InvariantViolation, apply_stack, iter_stack
from .space import KamLike, env_lookup
from .core import decode_closure


class LamState:
    __slots__ = ("dump", "node", "env", "stack", "sbits", "scount", "dbits", "dcount", "bits", "count")

    def __init__(self, dump, node, env, stack, sbits, scount, dbits, dcount, abits, acount):
        self.dump = dump      # linked ((closure, stack, sbits, scount), rest)
        self.node = node
        self.env = env
        self.stack = stack
        self.sbits = sbits
        self.scount = scount
        self.dbits = dbits
        self.dcount = dcount
        self.bits = abits + sbits + dbits
        self.count = acount + scount + dcount

    def dump_entries(self):
        out = []
        d = self.dump
        while d is not None:
            out.append(d[0])
            d = d[1]
        return out


class SpaceLAM(KamLike):
    name = "lam"
    kinds = ("sea", "ret", "beta_w", "beta_nw", "sub")
    beta_kinds = ("beta_w", "beta_nw")

    def initial(self):
        root = self.code.root
        return LamState(None, root, (), None, 0, 0, 0, 0, self.abits[root], 1)

    def state(self, dump, node, env, stack, sbits, scount, dbits, dcount):
        a = self.closure(node, env)
        return LamState(dump, node, env, stack, sbits, scount, dbits, dcount, a.bits, a.count)

    def step(self, s):
        code = self.code
        n = s.node
        k = code.kind[n]
        env = s.env
        if k == APP:
            f = code.left[n]
            a = code.right[n]
            fvf, fva = code.fv[f], code.fv[a]
            cf = self.closure(f, env if len(fvf) == len(env) else tuple(p for p in env if p[0] in fvf))
            enva = env if len(fva) == len(env) else tuple(p for p in env if p[0] in fva)
            entry = (cf, s.stack, s.sbits, s.scount)
            return "sea", self.state((entry, s.dump), a, enva, None, 0, 0,
                                     s.dbits + cf.bits + s.sbits, s.dcount + cf.count + s.scount)
        if k == LAM:
            if s.stack is not None:
                c, rest = s.stack
                body = code.left[n]
                if n in code.fv[body]:
                    return "beta_nw", self.state(s.dump, body, ((n, c),) + env, rest,
                                                 s.sbits - c.bits, s.scount - c.count, s.dbits, s.dcount)
                return "beta_w", self.state(s.dump, body, env, rest,
                                            s.sbits - c.bits, s.scount - c.count, s.dbits, s.dcount)
            if s.dump is None:
                return None
            (cf, stk, sb, sc), rest = s.dump
            v = self.closure(n, env)
            return "ret", self.state(rest, cf.node, cf.env, (v, stk), sb + v.bits, sc + v.count,
                                     s.dbits - cf.bits - sb, s.dcount - cf.count - sc)
        if len(env) != 1 or env[0][0] != code.binder[n]:
            raise InvariantViolation(f"sub at node {n} with a non-singleton environment")
        c = env[0][1]
        return "sub", self.state(s.dump, c.node, c.env, s.stack, s.sbits, s.scount, s.dbits, s.dcount)

    def check(self, s, kind):
        self.check_closure(s.node, s.env)
        if kind == "sea":
            c = s.dump[0][0]
            self.check_closure(c.node, c.env)
        elif kind == "ret":
            c = s.stack[0]
            self.check_closure(c.node, c.env)

    def decode(self, s):
        memo = {}
        dc = lambda c: decode_closure(self.code, c.node, c.env, self.lookup, memo)
        t = decode_closure(self.code, s.node, s.env, self.lookup, memo)
        t = apply_stack(t, [dc(c) for c in iter_stack(s.stack)])
        d = s.dump
        while d is not None:
            (cf, stk, _, _), d = d
            t = apply_stack(App(dc(cf), t), [dc(c) for c in iter_stack(stk)])
        return t

    def final_closure(self, s):
        return self.closure(s.node, s.env)
