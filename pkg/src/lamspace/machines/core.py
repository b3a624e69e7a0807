"""Shared pieces of the machines: closures, decoding, run profiles and the run driver."""
from collections import Counter

from ..terms import App, Code, Lam, VAR, LAM, APP


class InvariantViolation(Exception):
    pass


class Closure:
    """A code occurrence (node id of the shared Code) with an environment.

    bits and count are cached when the closure is built, so size accounting
    never walks an environment twice."""
    __slots__ = ("node", "env", "bits", "count")

    def __init__(self, node, env, bits, count):
        self.node = node
        self.env = env
        self.bits = bits
        self.count = count

    def __repr__(self):
        return f"Closure({self.node}, bits={self.bits})"


def iter_stack(stack):
    while stack is not None:
        yield stack[0]
        stack = stack[1]


def stack_from(closures):
    s = None
    for c in reversed(list(closures)):
        s = (c, s)
    return s


def rebuild(code, root, repl):
    """The subterm at root with every variable bound by a key of repl replaced
    by the (closed) term repl[binder]."""
    fv, kind, left, right, terms, binder = (
        code.fv, code.kind, code.left, code.right, code.terms, code.binder)
    keys = repl.keys()
    out = {}
    stack = [(root, False)]
    while stack:
        m, done = stack.pop()
        if fv[m].isdisjoint(keys):
            out[m] = terms[m]
            continue
        k = kind[m]
        if k == VAR:
            out[m] = repl[binder[m]]
        elif not done:
            stack.append((m, True))
            stack.append((left[m], False))
            if k == APP:
                stack.append((right[m], False))
        elif k == APP:
            out[m] = App(out[left[m]], out[right[m]])
        else:
            out[m] = Lam(out[left[m]], terms[m].name)
    return out[root]


def decode_closure(code, node, env, lookup, memo=None):
    """Unfold environments by substitution.  lookup(env, binder) -> (node, env)."""
    if memo is None:
        memo = {}
    fv = code.fv
    stack = [(node, env)]
    while stack:
        n, e = stack[-1]
        key = (n, e)
        if key in memo:
            stack.pop()
            continue
        deps = {}
        missing = False
        for b in fv[n]:
            dn, de = lookup(e, b)
            deps[b] = (dn, de)
            if (dn, de) not in memo:
                stack.append((dn, de))
                missing = True
        if missing:
            continue
        memo[key] = rebuild(code, n, {b: memo[d] for b, d in deps.items()})
        stack.pop()
    return memo[(node, env)]


def apply_stack(term, args):
    for a in args:
        term = App(term, a)
    return term


class RunProfile:
    """What a run recorded.  Maxima cover every visited state, the initial one included."""

    def __init__(self, machine, t0_size):
        self.machine = machine
        self.t0_size = t0_size
        self.counts = Counter()
        self.transitions = 0
        self.beta_steps = 0
        self.max_bit_space = 0
        self.max_abstract_space = None
        self.max_heap_cells = None
        self.final_state = None
        self.completed = False
        self.trace = None

    def summary(self):
        return {
            "machine": self.machine,
            "completed": self.completed,
            "transitions": self.transitions,
            "beta_steps": self.beta_steps,
            "counts": dict(sorted(self.counts.items())),
            "max_bit_space": self.max_bit_space,
            "max_abstract_space": self.max_abstract_space,
            "max_heap_cells": self.max_heap_cells,
        }

    def __eq__(self, other):
        return isinstance(other, RunProfile) and self.summary() == other.summary()

    def __repr__(self):
        return f"RunProfile({self.summary()})"


class Machine:
    """Interface every machine family implements."""
    name = "?"
    beta_kinds = ()
    kinds = ()

    def __init__(self, code):
        self.code = code

    def initial(self):
        raise NotImplementedError

    def step(self, s):
        """Return (kind, next state), or None on a final state."""
        raise NotImplementedError

    def bit_size(self, s):
        return s.bits

    def abstract_space(self, s):
        return s.count

    def heap_cells(self, s):
        return None

    def decode(self, s):
        raise NotImplementedError

    def is_final(self, s):
        return self.code.kind[s.node] == LAM and not s.stack and not getattr(s, "dump", None)

    def check(self, s, kind):
        """Raise InvariantViolation if s breaks a machine invariant."""


def run(machine, t0, fuel, trace=False, check=False, observer=None):
    """Drive a machine from the compiled initial state of t0.

    machine is a name ("naive", "space", "time", "lam") or a Machine class.
    observer, if given, is called with (machine, state, kind) after every
    transition (kind None for the initial state)."""
    from . import MACHINES
    cls = MACHINES[machine] if isinstance(machine, str) else machine
    code = t0 if isinstance(t0, Code) else Code(t0)
    m = cls(code)
    s = m.initial()
    prof = RunProfile(m.name, code.size)
    has_abs = cls.has_abstract_space
    has_heap = cls.has_heap
    betas = m.beta_kinds
    counts = prof.counts
    if trace:
        prof.trace = []

    def record(s, kind, i):
        b = s.bits
        if b > prof.max_bit_space:
            prof.max_bit_space = b
        a = s.count if has_abs else None
        if has_abs and (prof.max_abstract_space is None or a > prof.max_abstract_space):
            prof.max_abstract_space = a
        h = m.heap_cells(s) if has_heap else None
        if has_heap and (prof.max_heap_cells is None or h > prof.max_heap_cells):
            prof.max_heap_cells = h
        if trace:
            prof.trace.append((i, kind or "init", b, a, h))

    if check:
        m.check(s, None)
    record(s, None, 0)
    if observer:
        observer(m, s, None)
    step = m.step
    i = 0
    while True:
        if i >= fuel:
            prof.completed = m.is_final(s)
            break
        r = step(s)
        if r is None:
            prof.completed = True
            break
        kind, s = r
        i += 1
        counts[kind] += 1
        if check:
            m.check(s, kind)
        # inline of record() for the common untraced case
        if not trace and not has_heap:
            b = s.bits
            if b > prof.max_bit_space:
                prof.max_bit_space = b
            if has_abs:
                a = s.count
                if a > prof.max_abstract_space:
                    prof.max_abstract_space = a
        else:
            record(s, kind, i)
        if observer:
            observer(m, s, kind)
    prof.transitions = i
    prof.beta_steps = sum(counts[k] for k in betas)
    prof.final_state = s
    prof.machine_obj = m
    return prof


def format_trace(prof):
    lines = []
    for i, kind, b, a, h in prof.trace or ():
        lines.append(f"{i}  {kind}  {b}  {'-' if a is None else a}  {'-' if h is None else h}")
    return "\n".join(lines)
