"""Deterministic random closed terms for differential testing."""
import random

from .terms import App, Lam, Var

NAMES = "xyzwuvpq"


def generate_closed_term(seed, size_budget, det=False):
    """A closed term with constructor size <= size_budget.

    Biased toward application spines at the top and toward reusing the most
    recent binders, which makes environments get duplicated.  With det=True
    every application argument is a variable or an abstraction.
    """
    if size_budget < 2:
        raise ValueError("size_budget must be >= 2")
    rng = random.Random(seed * 7919 + size_budget)
    target = rng.randint(max(2, size_budget // 2), size_budget)
    return _gen(rng, target, 0, det, top=True, force_app=True)


def _min_size(depth):
    return 1 if depth > 0 else 2


def _var(rng, depth):
    # favour recent binders, which repeats variables
    i = 1
    while i < depth and rng.random() < 0.35:
        i += 1
    return Var(i, NAMES[(depth - i) % len(NAMES)])


def _gen(rng, size, depth, det, top=False, force_app=False):
    lo = _min_size(depth)
    if size <= lo:
        return _var(rng, depth) if depth > 0 else Lam(Var(1, "x"), "x")
    can_app = size >= 2 * lo + 1
    if depth > 0 and size == 1:
        return _var(rng, depth)
    p_app = 1.0 if force_app else 0.8 if top else 0.45
    if can_app and rng.random() < p_app:
        # argument sizes: small arguments keep spines long
        if det:
            if depth > 0 and rng.random() < 0.5:
                arg = _var(rng, depth)
            else:
                asz = rng.randint(2, max(2, min(size - 1 - lo, (size - 1) // 2)))
                if size - 1 - asz < lo:
                    return Lam(_gen(rng, size - 1, depth + 1, det), NAMES[depth % len(NAMES)])
                arg = Lam(_gen(rng, asz - 1, depth + 1, det), NAMES[depth % len(NAMES)])
        else:
            amax = max(lo, (size - 1) // 2)
            asz = rng.randint(lo, amax)
            if size - 1 - asz < lo:
                asz = size - 1 - lo
            arg = _gen(rng, asz, depth, det)
        fun = _gen(rng, size - 1 - arg.size, depth, det, top=top)
        return App(fun, arg)
    return Lam(_gen(rng, size - 1, depth + 1, det), NAMES[depth % len(NAMES)])


def corpus(n=1000, budget=40, det=False, base_seed=0):
    return [generate_closed_term(base_seed + i, budget, det=det) for i in range(n)]
