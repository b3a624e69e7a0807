"""Substitution-based weak head evaluation, the oracle the machines are checked against."""
import sys

from .terms import App, Lam, Var, TermError

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class FuelExhausted(Exception):
    def __init__(self, steps, reason="fuel"):
        super().__init__(f"no weak head normal form after {steps} steps ({reason})")
        self.steps = steps
        self.reason = reason


def _subst(t, d, arg):
    # replace the variable bound just outside depth d by the closed term arg
    if t.maxfree <= d:
        return t
    if type(t) is Var:
        return arg if t.index == d + 1 else t
    if type(t) is Lam:
        return Lam(_subst(t.body, d + 1, arg), t.name)
    return App(_subst(t.fun, d, arg), _subst(t.arg, d, arg))


def reference_whnf(t, fuel, size_limit=1_000_000):
    """Closed call-by-name weak head evaluation.

    Returns (whnf, beta steps).  Raises FuelExhausted after `fuel` steps, or
    when an intermediate head grows past size_limit constructors (treated
    like divergence: the term is not a useful oracle input).
    """
    if not t.closed:
        raise TermError("reference_whnf needs a closed term")
    args = []  # innermost argument last
    head = t
    steps = 0
    while True:
        while type(head) is App:
            args.append(head.arg)
            head = head.fun
        if type(head) is Var:
            raise TermError("open head variable in a closed term")
        if not args:
            return head, steps
        if steps >= fuel:
            raise FuelExhausted(steps)
        steps += 1
        head = _subst(head.body, 0, args.pop())
        if head.size > size_limit:
            raise FuelExhausted(steps, "size limit")
