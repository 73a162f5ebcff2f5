"""Finite quandles, 2-cocycles, colorings of closed braids and cocycle invariants."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .braid import BraidWord, trace_invariant
from .eybo import Eybo, verify_enhanced_2cocycle
from .ring import ZZ, Ring, cyclic, truncated
from .tensor import from_function, identity


class QuandleError(ValueError):
    pass


GROUP_VAR = "z"


@dataclass(frozen=True)
class Quandle:
    labels: tuple
    table: tuple  # table[x][y] = x * y, by index

    def __post_init__(self):
        n = len(self.labels)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise QuandleError("operation table must be square")
        for x in range(n):
            for y in range(n):
                if not 0 <= self.table[x][y] < n:
                    raise QuandleError("operation table entry out of range")
        problems = self.axiom_failures()
        if problems:
            raise QuandleError("; ".join(problems))

    @property
    def size(self) -> int:
        return len(self.labels)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def op_inv(self, x: int, y: int) -> int:
        """The unique w with w * y = x."""
        for w in range(self.size):
            if self.table[w][y] == x:
                return w
        raise QuandleError("right translation is not a bijection")

    def axiom_failures(self) -> list:
        n = len(self.labels)
        t = self.table
        out = []
        if any(t[x][x] != x for x in range(n)):
            out.append("operation is not idempotent")
        for y in range(n):
            if len({t[x][y] for x in range(n)}) != n:
                out.append(f"right translation by {self.labels[y]} is not a bijection")
                break
        for x, y, z in product(range(n), repeat=3):
            if t[t[x][y]][z] != t[t[x][z]][t[y][z]]:
                out.append("operation is not self-distributive")
                break
        return out

    def index(self, label) -> int:
        return self.labels.index(label)


def _f4_mul(a: tuple, b: tuple) -> tuple:
    # elements a0 + a1 t with t^2 = t + 1 over F_2
    a0, a1 = a
    b0, b1 = b
    c0 = (a0 * b0 + a1 * b1) % 2
    c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2
    return (c0, c1)


def _f4_add(a: tuple, b: tuple) -> tuple:
    return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)


F4_ELEMENTS = ((0, 0), (1, 0), (0, 1), (1, 1))
F4_LABELS = ("0", "1", "t", "1+t")


def alexander_quandle_F4() -> Quandle:
    """x * y = t x + (1 + t) y on F_2[t]/(t^2 + t + 1)."""
    t = (0, 1)
    one_t = (1, 1)
    table = []
    for x in F4_ELEMENTS:
        row = []
        for y in F4_ELEMENTS:
            row.append(F4_ELEMENTS.index(_f4_add(_f4_mul(t, x), _f4_mul(one_t, y))))
        table.append(tuple(row))
    return Quandle(F4_LABELS, tuple(table))


def dihedral_quandle(n: int) -> Quandle:
    if n < 1:
        raise QuandleError("dihedral quandle needs n >= 1")
    table = tuple(tuple((2 * y - x) % n for y in range(n)) for x in range(n))
    return Quandle(tuple(str(i) for i in range(n)), table)


def trivial_quandle(n: int) -> Quandle:
    return Quandle(tuple(str(i) for i in range(n)), tuple(tuple(x for _ in range(n)) for x in range(n)))


def parse_quandle(text: str) -> Quandle:
    """``F4``, ``dihedral:n``, or an element count followed by table rows."""
    text = text.strip()
    if text == "F4":
        return alexander_quandle_F4()
    if text.startswith("dihedral:"):
        try:
            return dihedral_quandle(int(text.split(":", 1)[1]))
        except ValueError as exc:
            raise QuandleError(f"bad dihedral order in {text!r}") from exc
    tokens = text.replace(";", " ").replace(",", " ").split()
    try:
        nums = [int(x) for x in tokens]
    except ValueError as exc:
        raise QuandleError(f"unrecognized quandle {text!r}") from exc
    if not nums:
        raise QuandleError("empty quandle description")
    n = nums[0]
    if len(nums) != 1 + n * n:
        raise QuandleError(f"expected {n * n} table entries, got {len(nums) - 1}")
    rows = tuple(tuple(nums[1 + r * n: 1 + (r + 1) * n]) for r in range(n))
    return Quandle(tuple(str(i) for i in range(n)), rows)


# ---------------------------------------------------------------------------
# Cocycles


@dataclass(frozen=True)
class QuandleCocycle:
    values: tuple  # values[x][y] as integers
    group_orders: tuple = (2,)

    def __post_init__(self):
        if len(self.group_orders) != 1:
            raise QuandleError("only cyclic coefficient groups are supported")

    @property
    def order(self) -> int:
        return self.group_orders[0]

    def __call__(self, x: int, y: int) -> int:
        return self.values[x][y]


def cocycle_failures(Q: Quandle, psi: QuandleCocycle) -> list:
    n = Q.size
    if len(psi.values) != n or any(len(r) != n for r in psi.values):
        return ["cocycle table has the wrong size"]
    k = psi.order
    out = []
    if any(psi(x, x) % k for x in range(n)):
        out.append("psi(x, x) is not zero")
    for x, y, z in product(range(n), repeat=3):
        lhs = psi(x, y) + psi(Q.op(x, y), z) - psi(x, z) - psi(Q.op(x, z), Q.op(y, z))
        if lhs % k:
            out.append(f"cocycle condition fails at {(Q.labels[x], Q.labels[y], Q.labels[z])}")
            break
    return out


def is_cocycle(Q: Quandle, psi: QuandleCocycle) -> bool:
    return not cocycle_failures(Q, psi)


def chi_cocycle(Q: Quandle | None = None) -> QuandleCocycle:
    """Sum of characteristic functions of (a, b), a != b in {0, 1, 1+t}."""
    Q = Q or alexander_quandle_F4()
    marked = {Q.index("0"), Q.index("1"), Q.index("1+t")}
    vals = tuple(tuple(1 if (x != y and x in marked and y in marked) else 0 for y in range(Q.size))
                 for x in range(Q.size))
    return QuandleCocycle(vals, (2,))


def zero_cocycle(Q: Quandle, order: int = 2) -> QuandleCocycle:
    return QuandleCocycle(tuple((0,) * Q.size for _ in range(Q.size)), (order,))


def group_ring(order: int = 2, base: Ring = ZZ) -> Ring:
    return base.with_vars(cyclic(GROUP_VAR, order))


# ---------------------------------------------------------------------------
# Yang-Baxter lift


def vanishes_mod(op, k: int) -> bool:
    """Every integer coefficient of every entry is divisible by k."""
    for _, _, v in op.entries():
        for c in v.terms.values():
            if c % k:
                return False
    return True


def lift_report(Q: Quandle, psi: QuandleCocycle, ring: Ring | None = None):
    """Verification report for the order-1 lift; ``report.result`` is the deformation.

    The Yang-Baxter cocycle identity is checked twice: exactly, and modulo the
    order of the coefficient group.  Integer-embedded values of a cocycle
    with finite coefficients satisfy the quandle condition only modulo that
    order, so the exact check can fail while the reduced one passes.
    """
    bad = cocycle_failures(Q, psi)
    if bad:
        raise QuandleError("; ".join(bad))
    if ring is None:
        ring = group_ring(psi.order)
    base = _base_eybo(Q, ring)
    n = Q.size
    phi = from_function(n, 2, ring, lambda v: {(v[1], Q.op(v[0], v[1])): psi(v[0], v[1])})

    def hat(v):
        x, y = v
        w = Q.op_inv(y, x)
        return {(w, x): -psi(w, x)}

    phi_hat = from_function(n, 2, ring, hat)
    mu1 = identity(n, 1, ring).scale(0)
    rep = verify_enhanced_2cocycle(base, phi, mu1, phi_hat)
    residual = rep["cocycle"].residual
    rep.add_flag("cocycle-mod-order", vanishes_mod(residual, psi.order), f"order {psi.order}")
    return rep


def _base_eybo(Q: Quandle, ring: Ring) -> Eybo:
    n = Q.size
    R = from_function(n, 2, ring, lambda v: {(v[1], Q.op(v[0], v[1])): 1})
    R_inv = from_function(n, 2, ring, lambda v: {(Q.op_inv(v[1], v[0]), v[0]): 1})
    one = ring.one()
    return Eybo(R, R_inv, one, one, identity(n, 1, ring))


def yb_from_quandle(Q: Quandle, psi: QuandleCocycle | None = None, ring: Ring | None = None):
    """(base enhanced operator, order-1 deformation or None) over the group ring."""
    if ring is None:
        ring = group_ring(psi.order if psi is not None else 2)
    if psi is None:
        return _base_eybo(Q, ring), None
    rep = lift_report(Q, psi, ring)
    failed = [c.name for c in rep.checks if not c.passed and c.name != "cocycle"]
    if failed:
        raise QuandleError("lifted deformation failed verification:\n" + rep.serialize())
    D = rep.result
    return D.base(), D


# ---------------------------------------------------------------------------
# Colorings and state sums


def _run(b: BraidWord, Q: Quandle, colors: tuple, psi: QuandleCocycle | None):
    """Push a color tuple through the braid (rightmost letter first).

    Returns the output tuple and the signed weight sum.
    """
    cur = list(colors)
    weight = 0
    for letter in reversed(b.letters):
        i = abs(letter) - 1
        x, y = cur[i], cur[i + 1]
        if letter > 0:
            if psi is not None:
                weight += psi(x, y)
            cur[i], cur[i + 1] = y, Q.op(x, y)
        else:
            w = Q.op_inv(y, x)
            if psi is not None:
                weight -= psi(w, x)
            cur[i], cur[i + 1] = w, x
    return tuple(cur), weight


def colorings(b: BraidWord, Q: Quandle) -> list:
    out = []
    for colors in product(range(Q.size), repeat=b.strands):
        image, _ = _run(b, Q, colors, None)
        if image == colors:
            out.append(colors)
    return out


def coloring_weights(b: BraidWord, Q: Quandle, psi: QuandleCocycle) -> list:
    """(coloring, sum of signed crossing weights) for every coloring."""
    out = []
    for colors in product(range(Q.size), repeat=b.strands):
        image, weight = _run(b, Q, colors, psi)
        if image == colors:
            out.append((colors, weight))
    return out


def state_sum_invariants(b: BraidWord, Q: Quandle, psi: QuandleCocycle, check: bool = True):
    """(classical value in Z[A], quantum value in Z[A][h]/(h^2)).

    With ``check`` the quantum value is compared against the trace of the
    lifted deformation and a mismatch raises AssertionError.
    """
    ring = group_ring(psi.order)
    z = ring.gen(GROUP_VAR)
    qring = ring.with_vars(truncated("h", 1))
    classical = ring.zero()
    count = 0
    total = 0
    for _, weight in coloring_weights(b, Q, psi):
        classical = classical + z ** (weight % psi.order)
        count += 1
        total += weight
    quantum = qring.const(count) + qring.gen("h").scale(total)
    if check:
        _, D = yb_from_quandle(Q, psi, ring)
        traced = trace_invariant(b, D)
        if traced != quantum:
            raise AssertionError(f"state sum {quantum} disagrees with trace {traced}")
    return classical, quantum
