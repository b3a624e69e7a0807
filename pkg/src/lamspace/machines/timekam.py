"""The Time KAM: environments and stacks live in a heap of cells that is only
ever extended.  Pointer size is bits(cells allocated so far)."""
from ..terms import VAR, LAM, APP
from .core import InvariantViolation, Machine, decode_closure, apply_stack

# heap cells
STACK_CELL, ENV_CELL = 0, 1
VAR_BITS = 1  # a freshly bound variable has index 1 in the body it binds


class TimeState:
    __slots__ = ("node", "env", "stack", "heap", "ncells", "fixed", "bits")

    def __init__(self, node, env, stack, heap, ncells, fixed, ubits):
        self.node = node
        self.env = env
        self.stack = stack
        self.heap = heap
        self.ncells = ncells
        self.fixed = fixed  # code and variable bits stored in the heap
        ptr = max(ncells, 1).bit_length()
        # active code + env pointer + stack pointer + heap
        self.bits = ubits + 2 * ptr + fixed + 2 * ptr * ncells

    @property
    def count(self):
        raise InvariantViolation("abstract space is not defined for the Time KAM")


class TimeKAM(Machine):
    name = "time"
    kinds = ("sea_v", "sea_nv", "beta", "sub")
    beta_kinds = ("beta",)
    has_abstract_space = False
    has_heap = True

    def __init__(self, code):
        super().__init__(code)
        self.ubits = code.size.bit_length()

    def initial(self):
        # slot 0 is the nil address
        return TimeState(self.code.root, 0, 0, [None], 0, 0, self.ubits)

    def _alloc(self, s, cell, extra):
        heap = s.heap
        if len(heap) != s.ncells + 1:
            raise InvariantViolation("stepping a Time KAM state that is not the latest")
        heap.append(cell)
        return s.ncells + 1, s.fixed + extra

    def _lookup_pos(self, heap, e, k):
        for _ in range(k - 1):
            if e == 0:
                break
            e = heap[e][4]
        if e == 0:
            raise InvariantViolation("dangling or unbound variable")
        cell = heap[e]
        return cell[2], cell[3]

    def step(self, s):
        code = self.code
        n = s.node
        k = code.kind[n]
        heap = s.heap
        if k == APP:
            a = code.right[n]
            if code.kind[a] == VAR:
                cn, ce = self._lookup_pos(heap, s.env, code.index[a])
                kind = "sea_v"
            else:
                cn, ce = a, s.env
                kind = "sea_nv"
            addr, fixed = self._alloc(s, (STACK_CELL, None, cn, ce, s.stack), self.ubits)
            return kind, TimeState(code.left[n], s.env, addr, heap, addr, fixed, self.ubits)
        if k == LAM:
            if s.stack == 0:
                return None
            _, _, cn, ce, rest = heap[s.stack]
            addr, fixed = self._alloc(s, (ENV_CELL, n, cn, ce, s.env), VAR_BITS + self.ubits)
            return "beta", TimeState(code.left[n], addr, rest, heap, addr, fixed, self.ubits)
        cn, ce = self._lookup_pos(heap, s.env, code.index[n])
        return "sub", TimeState(cn, ce, s.stack, heap, s.ncells, s.fixed, self.ubits)

    def heap_cells(self, s):
        return s.ncells

    def abstract_space(self, s):
        raise InvariantViolation("abstract space is not defined for the Time KAM")

    def lookup(self, env, b):
        heap = self._heap
        while env != 0:
            cell = heap[env]
            if cell[1] == b:
                return cell[2], cell[3]
            env = cell[4]
        raise InvariantViolation(f"variable {b} not in environment")

    def decode(self, s):
        self._heap = s.heap
        memo = {}
        head = decode_closure(self.code, s.node, s.env, self.lookup, memo)
        args = []
        p = s.stack
        while p != 0:
            _, _, cn, ce, p = s.heap[p]
            args.append(decode_closure(self.code, cn, ce, self.lookup, memo))
        return apply_stack(head, args)

    def check(self, s, kind):
        if not 1 <= s.node <= self.code.size:
            raise InvariantViolation("node outside the code")
