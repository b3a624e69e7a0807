"""Reading a constructor out of a final closure without decoding it.

The walk keeps one cursor: a position in the initial code, the root of the
code occurrence it is in, the environment of that occurrence, and how much
of the address is consumed.  A variable bound outside the occurrence makes
the cursor jump into the closure the environment maps it to; nothing is
ever revisited, so the walk needs a constant number of pointers.
"""
import weakref

from .terms import Code, DeBruijn, LAMBDA, APPLY, UNDEFINED, VAR, LAM, check_address
from .machines.space import env_lookup

_live = weakref.WeakSet()


class Cursor:
    __slots__ = ("node", "root", "env", "pos", "__weakref__")

    def __init__(self, node, env):
        self.node = node
        self.root = node
        self.env = env
        self.pos = 0
        _live.add(self)

    def jump(self, closure):
        self.node = self.root = closure.node
        self.env = closure.env


def live_cursors():
    return len(_live)


class WalkStats:
    def __init__(self):
        self.steps = 0
        self.jumps = 0
        self.max_live = 0


def _code_of(t0):
    return t0 if isinstance(t0, Code) else Code(t0)


def constructor_at(t0, final_closure, a0, stats=None):
    """Label of the constructor at tree address a0 of the term final_closure
    denotes.  final_closure is a Space KAM or Space LAM closure over the code of t0."""
    check_address(a0)
    code = _code_of(t0)
    kind, left, right, depth = code.kind, code.left, code.right, code.depth
    index, binder = code.index, code.binder
    st = stats if stats is not None else WalkStats()
    cur = Cursor(final_closure.node, final_closure.env)
    n = len(a0)
    while True:
        live = live_cursors()
        if live > st.max_live:
            st.max_live = live
        k = kind[cur.node]
        if k == VAR:
            i = index[cur.node]
            if i <= depth[cur.node] - depth[cur.root]:
                # bound inside the current occurrence
                return DeBruijn(i) if cur.pos == n else UNDEFINED
            cur.jump(env_lookup(cur.env, binder[cur.node]))
            st.jumps += 1
            st.steps += 1
            continue
        if cur.pos == n:
            return LAMBDA if k == LAM else APPLY
        b = a0[cur.pos]
        cur.pos += 1
        st.steps += 1
        if k == LAM:
            cur.node = left[cur.node]
        else:
            cur.node = left[cur.node] if b == "0" else right[cur.node]


def finals_equal_at(f1, f2, a, t0a, t0b):
    return constructor_at(t0a, f1, a) == constructor_at(t0b, f2, a)
