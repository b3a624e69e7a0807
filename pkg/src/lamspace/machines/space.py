"""The Space KAM: environments restricted to the free variables of their code,
argument variables unchained at push time, and no structure sharing."""
from ..terms import VAR, LAM, APP
from .core import Closure, InvariantViolation, Machine, decode_closure, apply_stack, iter_stack


def env_restrict(env, vars):
    """Entries of env whose binder is in vars, in order.  Every var must be bound."""
    out = tuple(p for p in env if p[0] in vars)
    if len(out) != len(vars):
        missing = set(vars) - {b for b, _ in env}
        raise InvariantViolation(f"restriction to unbound variables {sorted(missing)}")
    return out


def env_lookup(env, b):
    for x, c in env:
        if x == b:
            return c
    raise InvariantViolation(f"variable {b} not in environment")


class SpaceState:
    __slots__ = ("node", "env", "stack", "sbits", "scount", "bits", "count")

    def __init__(self, node, env, stack, sbits, scount, bits, count):
        self.node = node
        self.env = env
        self.stack = stack
        self.sbits = sbits
        self.scount = scount
        self.bits = bits
        self.count = count

    @property
    def active(self):
        return self.node


class KamLike(Machine):
    """Helpers shared by the Space KAM and the Space LAM (same environments)."""
    has_abstract_space = True
    has_heap = False

    def __init__(self, code):
        super().__init__(code)
        self.depth = code.depth
        self.abits = code.abits

    def env_bits(self, node, env):
        d = self.depth[node]
        depth = self.depth
        total = 0
        for b, c in env:
            total += (d - depth[b]).bit_length() + c.bits
        return total

    def closure(self, node, env):
        d = self.depth[node]
        depth = self.depth
        bits = self.abits[node]
        count = 1
        for b, c in env:
            bits += (d - depth[b]).bit_length() + c.bits
            count += c.count
        return Closure(node, env, bits, count)

    def lookup(self, env, b):
        c = env_lookup(env, b)
        return c.node, c.env

    def decode_closure(self, c, memo=None):
        return decode_closure(self.code, c.node, c.env, self.lookup, memo)

    def check_closure(self, node, env):
        dom = [b for b, _ in env]
        if len(set(dom)) != len(dom) or set(dom) != self.code.fv[node]:
            raise InvariantViolation(
                f"environment domain {sorted(dom)} differs from free variables "
                f"{sorted(self.code.fv[node])} at node {node}")
        if not 1 <= node <= self.code.size:
            raise InvariantViolation(f"node {node} outside the code")


class SpaceKAM(KamLike):
    name = "space"
    kinds = ("sea_v", "sea_nv", "beta_w", "beta_nw", "sub")
    beta_kinds = ("beta_w", "beta_nw")

    def initial(self):
        root = self.code.root
        return SpaceState(root, (), None, 0, 0, self.abits[root], 1)

    def state(self, node, env, stack, sbits, scount):
        a = self.closure(node, env)
        return SpaceState(node, env, stack, sbits, scount, a.bits + sbits, a.count + scount)

    def step(self, s):
        code = self.code
        n = s.node
        k = code.kind[n]
        env = s.env
        if k == APP:
            f = code.left[n]
            a = code.right[n]
            fvf = code.fv[f]
            envf = env if len(fvf) == len(env) else tuple(p for p in env if p[0] in fvf)
            if code.kind[a] == VAR:
                c = env_lookup(env, code.binder[a])
                kind = "sea_v"
            else:
                fva = code.fv[a]
                c = self.closure(a, env if len(fva) == len(env) else tuple(p for p in env if p[0] in fva))
                kind = "sea_nv"
            return kind, self.state(f, envf, (c, s.stack), s.sbits + c.bits, s.scount + c.count)
        if k == LAM:
            if s.stack is None:
                return None
            c, rest = s.stack
            body = code.left[n]
            if n in code.fv[body]:
                return "beta_nw", self.state(body, ((n, c),) + env, rest,
                                             s.sbits - c.bits, s.scount - c.count)
            return "beta_w", self.state(body, env, rest, s.sbits - c.bits, s.scount - c.count)
        if len(env) != 1 or env[0][0] != code.binder[n]:
            raise InvariantViolation(f"sub at node {n} with a non-singleton environment")
        c = env[0][1]
        return "sub", SpaceState(c.node, c.env, s.stack, s.sbits, s.scount,
                                 c.bits + s.sbits, c.count + s.scount)

    def check(self, s, kind):
        self.check_closure(s.node, s.env)
        if kind in ("sea_v", "sea_nv"):
            c = s.stack[0]
            self.check_closure(c.node, c.env)

    def decode(self, s):
        memo = {}
        head = decode_closure(self.code, s.node, s.env, self.lookup, memo)
        return apply_stack(head, [self.decode_closure(c, memo) for c in iter_stack(s.stack)])

    def final_closure(self, s):
        return Closure(s.node, s.env, s.bits - s.sbits, s.count - s.scount)


def all_closures(s):
    """Every closure of a Space KAM / LAM state, walking environments (test helper)."""
    out = []
    todo = [c for _, c in s.env] + list(iter_stack(s.stack))
    for entry in getattr(s, "dump_entries", lambda: [])():
        todo.append(entry[0])
        todo.extend(iter_stack(entry[1]))
    while todo:
        c = todo.pop()
        out.append(c)
        todo.extend(x for _, x in c.env)
    return out
