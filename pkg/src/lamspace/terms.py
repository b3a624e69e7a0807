"""Lambda terms with de Bruijn indices, parsing and rendering, sizes and addresses.

Variables carry 1-based binder distances.  Names are kept only so that
printed terms look like what was typed; equality ignores them.
"""
import re


class TermError(Exception):
    pass


class ParseError(TermError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


def bits(n):
    """Bit length of a positive integer: floor(log2 n) + 1."""
    if n < 1:
        raise ValueError(f"bits() needs n >= 1, got {n}")
    return n.bit_length()


class Term:
    __slots__ = ("size", "maxfree", "_hash")

    def __eq__(self, other):
        return isinstance(other, Term) and terms_equal(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{render(self)}>"

    def __str__(self):
        return render(self)

    @property
    def closed(self):
        return self.maxfree == 0


class Var(Term):
    __slots__ = ("index", "name")

    def __init__(self, index, name=None):
        if index < 1:
            raise TermError("variable index must be >= 1")
        self.index = index
        self.name = name
        self.size = 1
        self.maxfree = index
        self._hash = hash(("v", index))


class Lam(Term):
    __slots__ = ("body", "name")

    def __init__(self, body, name=None):
        self.body = body
        self.name = name
        self.size = body.size + 1
        self.maxfree = body.maxfree - 1 if body.maxfree > 0 else 0
        self._hash = hash(("l", body._hash))


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun, arg):
        self.fun = fun
        self.arg = arg
        self.size = fun.size + arg.size + 1
        self.maxfree = max(fun.maxfree, arg.maxfree)
        self._hash = hash(("a", fun._hash, arg._hash))


def terms_equal(a, b):
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        if x._hash != y._hash or x.size != y.size or type(x) is not type(y):
            return False
        if type(x) is Var:
            if x.index != y.index:
                return False
        elif type(x) is Lam:
            stack.append((x.body, y.body))
        else:
            stack.append((x.fun, y.fun))
            stack.append((x.arg, y.arg))
    return True


def constructor_size(t):
    return t.size


def apps(head, *args):
    t = head
    for a in args:
        t = App(t, a)
    return t


def spine(t):
    """Split t into head and argument list."""
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\)))")


def _tokens(text):
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            yield ("eof", None, pos)
            return
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            yield ("bad", text[pos], pos)
            return
        kind = m.lastgroup
        yield (kind, m.group(kind), m.start(kind))
        pos = m.end()


def _linecol(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse(text, open_terms=False):
    """Parse a term.  With open_terms, unknown names become free variables
    numbered past the enclosing binders (first free name gets the smallest
    index); otherwise they are an error."""
    # frames: [kind, items, name]; kind in {"top", "paren", "lam"}
    frames = [["top", [], None]]
    free_names = []
    toks = _tokens(text)

    def err(msg, pos):
        line, col = _linecol(text, pos)
        raise ParseError(msg, line, col)

    def close_app(items, pos):
        if not items:
            err("expected a term", pos)
        t = items[0]
        for a in items[1:]:
            t = App(t, a)
        return t

    def close_lams(pos):
        # fold lambda frames on top of the stack into their parents
        while frames[-1][0] == "lam":
            _, items, name = frames.pop()
            body = close_app(items, pos)
            frames[-1][1].append(Lam(body, name))

    for kind, val, pos in toks:
        if kind == "bad":
            err(f"unexpected character {val!r}", pos)
        if kind == "id":
            depth = 0
            index = None
            for fr in reversed(frames):
                if fr[0] == "lam":
                    depth += 1
                    if fr[2] == val and index is None:
                        index = depth
            if index is None:
                if not open_terms:
                    err(f"unbound variable {val!r}", pos)
                if val not in free_names:
                    free_names.append(val)
                index = depth + free_names.index(val) + 1
            frames[-1][1].append(Var(index, val))
        elif kind == "lam":
            k2, name, p2 = next(toks)
            if k2 != "id":
                err("expected a variable name after lambda", p2)
            k3, _, p3 = next(toks)
            if k3 != "dot":
                err("expected '.'", p3)
            frames.append(["lam", [], name])
        elif kind == "lp":
            frames.append(["paren", [], None])
        elif kind == "rp":
            close_lams(pos)
            if frames[-1][0] != "paren":
                err("unbalanced ')'", pos)
            _, items, _ = frames.pop()
            frames[-1][1].append(close_app(items, pos))
        elif kind == "dot":
            err("unexpected '.'", pos)
        elif kind == "eof":
            close_lams(pos)
            if frames[-1][0] != "top":
                err("missing ')'", pos)
            return close_app(frames[0][1], pos)
    raise AssertionError("unreachable")


# ---------------------------------------------------------------- rendering

def _free_index_sets(t):
    """Map id(node) -> frozenset of free indices, for every Lam body / node."""
    out = {}
    stack = [(t, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in out:
            continue
        if type(node) is Var:
            out[id(node)] = frozenset((node.index,))
        elif not done:
            stack.append((node, True))
            if type(node) is Lam:
                stack.append((node.body, False))
            else:
                stack.append((node.fun, False))
                stack.append((node.arg, False))
        elif type(node) is Lam:
            out[id(node)] = frozenset(i - 1 for i in out[id(node.body)] if i > 1)
        else:
            out[id(node)] = out[id(node.fun)] | out[id(node.arg)]
    return out


def render(t, lam="\\", free_names=None):
    """Render with display names, renaming binders only where a name would
    capture a variable it must not."""
    fis = _free_index_sets(t)
    out = []
    scope = []  # names of enclosing binders, innermost last
    free_names = list(free_names or [])
    counter = [0]

    def name_of(index):
        if index <= len(scope):
            return scope[-index]
        k = index - len(scope) - 1
        while len(free_names) <= k:
            free_names.append(f"free{len(free_names)}")
        return free_names[k]

    def pick(node):
        base = node.name or "x"
        # names of outer binders that the body still refers to
        used = set()
        for i in fis[id(node.body)]:
            if i > 1:
                used.add(name_of(i - 1))
        name = base
        while name in used:
            counter[0] += 1
            name = f"{base}{counter[0]}"
        return name

    # work items: ("t", term, paren) | ("s", text) | ("pop",)
    work = [("t", t, False)]
    while work:
        item = work.pop()
        if item[0] == "s":
            out.append(item[1])
            continue
        if item[0] == "pop":
            scope.pop()
            continue
        _, node, paren = item
        if type(node) is Var:
            if node.index > len(scope) and node.name and not free_names:
                out.append(node.name)
            else:
                out.append(name_of(node.index))
        elif type(node) is Lam:
            name = pick(node)
            if paren:
                out.append("(")
                work.append(("s", ")"))
            out.append(f"{lam}{name}.")
            work.append(("pop",))
            work.append(("t", node.body, False))
            scope.append(name)
        else:
            if paren:
                out.append("(")
                work.append(("s", ")"))
            work.append(("t", node.arg, type(node.arg) is not Var))
            work.append(("s", " "))
            work.append(("t", node.fun, type(node.fun) is Lam))
    return "".join(out)


# ---------------------------------------------------------------- addresses

LAMBDA = "Lambda"
APPLY = "Apply"
UNDEFINED = "Undefined"


class DeBruijn:
    __slots__ = ("index",)

    def __init__(self, index):
        if index < 1:
            raise ValueError("de Bruijn index must be >= 1")
        self.index = index

    def __eq__(self, other):
        return isinstance(other, DeBruijn) and other.index == self.index

    def __hash__(self):
        return hash(("dB", self.index))

    def __repr__(self):
        return f"dB({self.index})"

    __str__ = __repr__


def check_address(a):
    if not all(c in "01" for c in a):
        raise ValueError(f"tree address must be a string over 0/1, got {a!r}")
    return a


def constructor_at_tree_address(t, a):
    check_address(a)
    for i, b in enumerate(a):
        if type(t) is Var:
            return UNDEFINED
        if type(t) is Lam:
            t = t.body
        else:
            t = t.fun if b == "0" else t.arg
    if type(t) is Var:
        return DeBruijn(t.index)
    return LAMBDA if type(t) is Lam else APPLY


def label_text(label):
    return str(label)


def eta(t):
    # t closed in all our uses, but shift anyway so open terms stay correct
    return Lam(App(shift(t, 1), Var(1)), "x")


def eta_expand(t, n):
    for _ in range(n):
        t = eta(t)
    return t


def shift(t, d, cutoff=0):
    """Add d to every free index above cutoff."""
    if d == 0 or t.maxfree <= cutoff:
        return t
    if type(t) is Var:
        return Var(t.index + d, t.name) if t.index > cutoff else t
    if type(t) is Lam:
        return Lam(shift(t.body, d, cutoff + 1), t.name)
    return App(shift(t.fun, d, cutoff), shift(t.arg, d, cutoff))


def in_lambda_det(t):
    stack = [t]
    while stack:
        n = stack.pop()
        if type(n) is Lam:
            stack.append(n.body)
        elif type(n) is App:
            if type(n.arg) is App:
                return False
            stack.append(n.fun)
            stack.append(n.arg)
    return True


# ---------------------------------------------------------------- code objects

VAR, LAM, APP = 0, 1, 2


class Code:
    """A term laid out by left address.  Node ids are the left addresses
    1..|t0|; slot 0 is unused.  All machines refer to occurrences of t0 by
    these ids, so code is never synthesized during a run."""

    def __init__(self, t0):
        if not t0.closed:
            raise TermError("code must be a closed term")
        n = t0.size
        self.term = t0
        self.size = n
        self.kind = [0] * (n + 1)
        self.left = [0] * (n + 1)    # app: function node; lam: body node
        self.right = [0] * (n + 1)   # app: argument node
        self.index = [0] * (n + 1)   # var: de Bruijn index
        self.binder = [0] * (n + 1)  # var: node id of its binder
        self.depth = [0] * (n + 1)   # enclosing abstractions
        self.terms = [None] * (n + 1)
        self.fv = [None] * (n + 1)   # frozenset of binder ids free in the subterm
        self.parent = [0] * (n + 1)
        self.abits = [0] * (n + 1)   # bits of the left address
        self._layout(t0)

    def _layout(self, t0):
        kind, left, right, index, binder, depth, terms, parent = (
            self.kind, self.left, self.right, self.index, self.binder,
            self.depth, self.terms, self.parent)
        order = []
        # (term, offset, binder chain as linked tuples, depth, parent id)
        stack = [(t0, 0, None, 0, 0)]
        while stack:
            t, off, chain, d, par = stack.pop()
            if type(t) is App:
                me = off + t.fun.size + 1
                kind[me] = APP
                left[me] = off + (t.fun.fun.size + 1 if type(t.fun) is App else 1)
                a = t.arg
                right[me] = me + (a.fun.size + 1 if type(a) is App else 1)
                stack.append((t.fun, off, chain, d, me))
                stack.append((a, me, chain, d, me))
            elif type(t) is Lam:
                me = off + 1
                kind[me] = LAM
                b = t.body
                left[me] = me + (b.fun.size + 1 if type(b) is App else 1)
                stack.append((b, me, (me, chain), d + 1, me))
            else:
                me = off + 1
                kind[me] = VAR
                index[me] = t.index
                c = chain
                for _ in range(t.index - 1):
                    c = c[1]
                binder[me] = c[0]
            terms[me] = t
            depth[me] = d
            parent[me] = par
            order.append(me)
        empty = frozenset()
        fv = self.fv
        for me in reversed(order):
            k = kind[me]
            if terms[me].maxfree == 0:
                fv[me] = empty
            elif k == VAR:
                fv[me] = frozenset((binder[me],))
            elif k == LAM:
                fv[me] = fv[left[me]] - {me}
            else:
                fv[me] = fv[left[me]] | fv[right[me]]
        ab = self.abits
        for i in range(1, self.size + 1):
            ab[i] = i.bit_length()
        self.root = (t0.fun.size + 1) if type(t0) is App else 1

    @classmethod
    def join(cls, fcode, acode):
        """Code of App(f, a) from the codes of closed f and a, without
        walking f again.  f keeps its node ids; a is shifted past the root."""
        self = cls.__new__(cls)
        nf = fcode.size
        off = nf + 1
        n = nf + 1 + acode.size
        self.term = App(fcode.term, acode.term)
        self.size = n

        def shifted(xs, zero_stays=True):
            return [x + off if x or not zero_stays else 0 for x in xs[1:]]

        self.kind = fcode.kind + [APP] + acode.kind[1:]
        self.left = fcode.left + [fcode.root] + shifted(acode.left)
        self.right = fcode.right + [off + acode.root] + shifted(acode.right)
        self.index = fcode.index + [0] + acode.index[1:]
        self.binder = fcode.binder + [0] + shifted(acode.binder)
        self.depth = fcode.depth + [0] + acode.depth[1:]
        self.terms = fcode.terms + [self.term] + acode.terms[1:]
        memo = {}
        fv = []
        for x in acode.fv[1:]:
            y = memo.get(id(x))
            if y is None:
                y = memo[id(x)] = frozenset(b + off for b in x)
            fv.append(y)
        self.fv = fcode.fv + [frozenset()] + fv
        parent = fcode.parent + [0] + shifted(acode.parent)
        parent[fcode.root] = off
        parent[off + acode.root] = off
        self.parent = parent
        self.abits = fcode.abits + [i.bit_length() for i in range(off, n + 1)]
        self.root = off
        return self

    def node_at(self, ladd):
        if not 1 <= ladd <= self.size:
            raise TermError(f"node {ladd} not in code of size {self.size}")
        return self.terms[ladd]


    def address_bits(self, ladd):
        self.node_at(ladd)
        return self.abits[ladd]

    def occurrences(self):
        return range(1, self.size + 1)


def left_address_bits(t, node):
    """Bits of the left address of occurrence `node` (an int id of Code(t))."""
    code = t if isinstance(t, Code) else Code(t)
    return code.address_bits(node)
