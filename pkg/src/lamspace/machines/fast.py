"""A faster driver for the Space KAM.

Environments of the Space KAM hold exactly the free variables of their code,
innermost binder first, so for a given code node the layout of its
environment is fixed.  Here an environment is a plain tuple of closures and
every restriction or lookup is an index selection computed once per node.
Closures are tuples (node, env, bits, count).

Same transitions, counts and space figures as SpaceKAM; the test suite
checks the two against each other.
"""
from collections import Counter

from ..terms import VAR, LAM, APP, Code
from .core import Closure, RunProfile
from .space import SpaceKAM, SpaceState


class _Layout:
    @classmethod
    def join(cls, fl, al, nf):
        """Layout of App(f, a) for closed f and a (see Code.join)."""
        self = cls.__new__(cls)
        off = nf + 1
        self.order = fl.order + [()] + [tuple(b + off for b in o) for o in al.order[1:]]
        self.vbits = fl.vbits + [()] + al.vbits[1:]
        self.sel_f = fl.sel_f + [None] + al.sel_f[1:]
        self.sel_a = fl.sel_a + [None] + al.sel_a[1:]
        self.var_pos = fl.var_pos + [None] + al.var_pos[1:]
        self.keeps = fl.keeps + [False] + al.keeps[1:]
        return self

    def __init__(self, code):
        n = code.size
        depth = code.depth
        # env order of node k: free binders, innermost (deepest) first
        order = [None] * (n + 1)
        for k in range(1, n + 1):
            order[k] = tuple(sorted(code.fv[k], key=lambda b: -depth[b]))
        self.order = order
        # per-position variable bits of a closure at node k
        self.vbits = [None] * (n + 1)
        for k in range(1, n + 1):
            self.vbits[k] = tuple((depth[k] - depth[b]).bit_length() for b in order[k])
        self.sel_f = [None] * (n + 1)
        self.sel_a = [None] * (n + 1)
        self.var_pos = [None] * (n + 1)
        self.keeps = [False] * (n + 1)
        for k in range(1, n + 1):
            kind = code.kind[k]
            if kind == APP:
                pos = {b: j for j, b in enumerate(order[k])}
                f, a = code.left[k], code.right[k]
                sf = tuple(pos[b] for b in order[f])
                self.sel_f[k] = None if len(sf) == len(order[k]) else sf
                if code.kind[a] == VAR:
                    self.var_pos[k] = pos[code.binder[a]]
                else:
                    sa = tuple(pos[b] for b in order[a])
                    self.sel_a[k] = None if len(sa) == len(order[k]) else sa
            elif kind == LAM:
                self.keeps[k] = k in code.fv[code.left[k]]


def _closure_bits(abits, vbits, node, env):
    b = abits[node]
    cnt = 1
    for j, c in enumerate(env):
        b += vbits[node][j] + c[2]
        cnt += c[3]
    return b, cnt


class Applied:
    """Runs f a for many closed arguments a, laying f out only once."""

    def __init__(self, f):
        self.fcode = f if isinstance(f, Code) else Code(f)
        self.flay = _Layout(self.fcode)

    def code(self, a):
        acode = Code(a)
        return Code.join(self.fcode, acode), _Layout.join(self.flay, _Layout(acode), self.fcode.size)

    def run(self, a, fuel, accounting=True):
        code, lay = self.code(a)
        return fast_run(code, fuel, accounting, layout=lay)


def fast_run(t0, fuel, accounting=True, layout=None):
    """Run the Space KAM on t0.  Returns a RunProfile whose final_state is a
    regular SpaceState, so decoding and read-back work unchanged."""
    code = t0 if isinstance(t0, Code) else Code(t0)
    lay = layout or _Layout(code)
    kind_of = code.kind
    left = code.left
    right = code.right
    abits = code.abits
    vbits = lay.vbits
    sel_f = lay.sel_f
    sel_a = lay.sel_a
    var_pos = lay.var_pos
    keeps = lay.keeps

    node = code.root
    env = ()
    stack = None
    sbits = scount = 0
    cur_bits, cur_count = abits[node], 1
    max_bits, max_count = cur_bits, cur_count
    n_sea_v = n_sea_nv = n_bw = n_bnw = n_sub = 0
    i = 0
    completed = False
    while True:
        k = kind_of[node]
        if k == LAM and stack is None:
            completed = True
            break
        if i >= fuel:
            break
        i += 1
        if k == APP:
            a = right[node]
            vp = var_pos[node]
            if vp is not None:
                c = env[vp]
                n_sea_v += 1
            else:
                sa = sel_a[node]
                ea = env if sa is None else tuple([env[j] for j in sa])
                if accounting:
                    cb, cc = _closure_bits(abits, vbits, a, ea)
                else:
                    cb = cc = 0
                c = (a, ea, cb, cc)
                n_sea_nv += 1
            sf = sel_f[node]
            if sf is not None:
                env = tuple([env[j] for j in sf])
            stack = (c, stack)
            node = left[node]
            if accounting:
                sbits += c[2]
                scount += c[3]
        elif k == LAM:
            c, stack = stack
            body = left[node]
            if keeps[node]:
                env = (c,) + env
                n_bnw += 1
            else:
                n_bw += 1
            node = body
            if accounting:
                sbits -= c[2]
                scount -= c[3]
        else:
            c = env[0]
            node = c[0]
            env = c[1]
            n_sub += 1
            if accounting:
                b = c[2] + sbits
                if b > max_bits:
                    max_bits = b
                b = c[3] + scount
                if b > max_count:
                    max_count = b
            continue
        if accounting:
            cb, cc = _closure_bits(abits, vbits, node, env)
            b = cb + sbits
            if b > max_bits:
                max_bits = b
            b = cc + scount
            if b > max_count:
                max_count = b

    prof = RunProfile("space", code.size)
    prof.counts = Counter({k: v for k, v in (("sea_v", n_sea_v), ("sea_nv", n_sea_nv),
                                             ("beta_w", n_bw), ("beta_nw", n_bnw),
                                             ("sub", n_sub)) if v})
    prof.transitions = i
    prof.beta_steps = n_bw + n_bnw
    prof.completed = completed
    if accounting:
        prof.max_bit_space = max_bits
        prof.max_abstract_space = max_count
    else:
        prof.max_bit_space = prof.max_abstract_space = None
    m = SpaceKAM(code)
    prof.machine_obj = m
    prof.final_state = _to_state(m, lay, node, env, stack)
    return prof


def _convert(m, lay, c, memo):
    key = id(c)
    got = memo.get(key)
    if got is not None:
        return got[0]
    node, env = c[0], c[1]
    out = m.closure(node, _convert_env(m, lay, node, env, memo))
    memo[key] = (out, c)
    return out


def _convert_env(m, lay, node, env, memo):
    return tuple((b, _convert(m, lay, c, memo)) for b, c in zip(lay.order[node], env))


def _to_state(m, lay, node, env, stack):
    memo = {}
    env2 = _convert_env(m, lay, node, env, memo)
    items = []
    while stack is not None:
        c, stack = stack
        items.append(_convert(m, lay, c, memo))
    st = None
    sbits = scount = 0
    for c in reversed(items):
        st = (c, st)
        sbits += c.bits
        scount += c.count
    return m.state(node, env2, st, sbits, scount)
