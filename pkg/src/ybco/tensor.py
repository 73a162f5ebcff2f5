"""Linear maps V^(x k) -> V^(x l) for a free module V of rank d.

Basis vectors of V^(x m) are indexed by integers whose base-d digits are the
tensor factors, leftmost factor most significant.  An operator stores, for
each input basis index, the output indices carrying a nonzero coefficient;
entries that are absent are zero.  Semantically every operator is the full
d^l x d^k matrix.

Composition follows the usual convention: ``compose(f, g)`` is f after g.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .ring import NotAUnitError, Ring, RingElement, RingError, RingMismatchError, invert_unit, parse, render


class TensorError(Exception):
    pass


class ShapeError(TensorError, ValueError):
    pass


class SingularOperatorError(TensorError, ArithmeticError):
    pass


class NotAFieldError(TensorError, ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _digits_table(d: int, m: int) -> tuple:
    return tuple(product(range(d), repeat=m))


def digits(index: int, d: int, m: int) -> tuple:
    return _digits_table(d, m)[index]


def index_of(multi: Sequence[int], d: int) -> int:
    out = 0
    for x in multi:
        if not 0 <= x < d:
            raise ShapeError(f"basis digit {x} out of range for d={d}")
        out = out * d + x
    return out


Vector = dict  # basis index -> RingElement


class TensorOperator:
    """Linear map between tensor powers of V with exact coefficients."""

    __slots__ = ("d", "m_out", "m_in", "ring", "cols")

    def __init__(self, d: int, m_out: int, m_in: int, ring: Ring, cols: Mapping[int, Mapping[int, RingElement]]):
        if d < 1:
            raise ShapeError("rank d must be positive")
        self.d = d
        self.m_out = m_out
        self.m_in = m_in
        self.ring = ring
        clean = {}
        for j, col in cols.items():
            c = {i: v for i, v in col.items() if v.terms}
            if c:
                clean[j] = c
        self.cols = clean

    # -- shape ----------------------------------------------------------------

    @property
    def m(self) -> int:
        if self.m_in != self.m_out:
            raise ShapeError(f"operator is {self.m_in}->{self.m_out}, not an endomorphism")
        return self.m_in

    @property
    def is_square(self) -> bool:
        return self.m_in == self.m_out

    @property
    def shape(self) -> tuple:
        return (self.d, self.m_out, self.m_in)

    # -- access ---------------------------------------------------------------

    def entry(self, out, inp) -> RingElement:
        if not isinstance(out, int):
            out = index_of(out, self.d)
        if not isinstance(inp, int):
            inp = index_of(inp, self.d)
        col = self.cols.get(inp)
        if col is None:
            return self.ring.zero()
        return col.get(out, self.ring.zero())

    def column(self, inp) -> dict:
        if not isinstance(inp, int):
            inp = index_of(inp, self.d)
        return dict(self.cols.get(inp, {}))

    def matrix(self) -> list:
        """Dense rows: ``matrix()[out][in]``."""
        zero = self.ring.zero()
        rows = [[zero] * (self.d ** self.m_in) for _ in range(self.d ** self.m_out)]
        for j, col in self.cols.items():
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def entries(self) -> Iterable:
        for j, col in self.cols.items():
            for i, v in col.items():
                yield i, j, v

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and self.cols == other.cols

    def __hash__(self):
        return hash((self.shape, self.ring, frozenset((j, frozenset(c.items())) for j, c in self.cols.items())))

    def __repr__(self):
        return f"<TensorOperator d={self.d} {self.m_in}->{self.m_out} over {self.ring.ring_id}, nnz={self.nnz()}>"

    # -- arithmetic -----------------------------------------------------------

    def _check_same(self, other: "TensorOperator"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.ring != other.ring:
            raise RingMismatchError(self.ring, other.ring)

    def __add__(self, other: "TensorOperator") -> "TensorOperator":
        self._check_same(other)
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            tgt = cols.setdefault(j, {})
            for i, v in col.items():
                tgt[i] = tgt[i] + v if i in tgt else v
        return TensorOperator(self.d, self.m_out, self.m_in, self.ring, cols)

    def __neg__(self) -> "TensorOperator":
        return TensorOperator(self.d, self.m_out, self.m_in, self.ring,
                              {j: {i: -v for i, v in c.items()} for j, c in self.cols.items()})

    def __sub__(self, other: "TensorOperator") -> "TensorOperator":
        return self + (-other)

    def scale(self, c) -> "TensorOperator":
        c = self.ring.coerce(c)
        if not c.terms:
            return zero(self.d, self.m_out, self.ring, self.m_in)
        return TensorOperator(self.d, self.m_out, self.m_in, self.ring,
                              {j: {i: c * v for i, v in col.items()} for j, col in self.cols.items()})

    def __rmul__(self, c) -> "TensorOperator":
        return self.scale(c)

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        return compose(self, other)

    def map_coeffs(self, fn: Callable[[RingElement], RingElement], ring: Ring) -> "TensorOperator":
        return TensorOperator(self.d, self.m_out, self.m_in, ring,
                              {j: {i: fn(v) for i, v in c.items()} for j, c in self.cols.items()})

    def embed(self, ring: Ring) -> "TensorOperator":
        if ring == self.ring:
            return self
        return self.map_coeffs(ring.embed, ring)

    def apply(self, vec: Vector) -> Vector:
        out: dict = {}
        for j, c in vec.items():
            col = self.cols.get(j)
            if not col:
                continue
            for i, v in col.items():
                t = c * v
                out[i] = out[i] + t if i in out else t
        return {i: v for i, v in out.items() if v.terms}

    # -- serialization ----------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"{self.d} {self.m} {self.ring.ring_id}"]
        n = self.d ** self.m
        for i in range(n):
            for j in range(n):
                di = ",".join(map(str, digits(i, self.d, self.m)))
                dj = ",".join(map(str, digits(j, self.d, self.m)))
                lines.append(f"{di}|{dj}: {render(self.entry(i, j))}")
        return "\n".join(lines) + "\n"


def deserialize(text: str) -> TensorOperator:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise TensorError("empty operator text")
    head = lines[0].split(None, 2)
    if len(head) != 3:
        raise TensorError(f"bad header {lines[0]!r}")
    d, m = int(head[0]), int(head[1])
    ring = Ring.from_id(head[2])
    n = d ** m
    if len(lines) - 1 != n * n:
        raise TensorError(f"expected {n * n} entries, got {len(lines) - 1}")
    cols: dict = {}
    k = 0
    for i in range(n):
        for j in range(n):
            idx, val = lines[1 + k].split(":", 1)
            k += 1
            o, p = idx.split("|")
            if index_of([int(x) for x in o.split(",")], d) != i or index_of([int(x) for x in p.split(",")], d) != j:
                raise TensorError(f"entry {k} out of lexicographic order")
            v = parse(val, ring)
            if v.terms:
                cols.setdefault(j, {})[i] = v
    return TensorOperator(d, m, m, ring, cols)


# ---------------------------------------------------------------------------
# Constructors


def zero(d: int, m: int, ring: Ring, m_in: int | None = None) -> TensorOperator:
    return TensorOperator(d, m, m if m_in is None else m_in, ring, {})


def identity(d: int, m: int, ring: Ring) -> TensorOperator:
    one = ring.one()
    return TensorOperator(d, m, m, ring, {j: {j: one} for j in range(d ** m)})


def from_matrix(d: int, m: int, ring: Ring, rows: Sequence[Sequence], m_in: int | None = None) -> TensorOperator:
    """Build from dense ``rows[out][in]``; entries may be scalars or ring elements."""
    m_in = m if m_in is None else m_in
    if len(rows) != d ** m or any(len(r) != d ** m_in for r in rows):
        raise ShapeError("matrix has the wrong size")
    cols: dict = {}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            v = ring.coerce(v)
            if v.terms:
                cols.setdefault(j, {})[i] = v
    return TensorOperator(d, m, m_in, ring, cols)


def from_function(d: int, m: int, ring: Ring, fn: Callable[[tuple], Mapping], m_in: int | None = None) -> TensorOperator:
    """``fn(input_digits)`` returns a mapping output_digits -> coefficient."""
    m_in = m if m_in is None else m_in
    cols: dict = {}
    for j, dj in enumerate(_digits_table(d, m_in)):
        col: dict = {}
        for out, v in fn(dj).items():
            i = index_of(out, d)
            v = ring.coerce(v)
            col[i] = col[i] + v if i in col else v
        cols[j] = col
    return TensorOperator(d, m, m_in, ring, cols)


def diagonal(d: int, ring: Ring, values: Sequence) -> TensorOperator:
    return from_function(d, 1, ring, lambda x: {x: values[x[0]]})


def transposition(d: int, ring: Ring) -> TensorOperator:
    """The flip e_a (x) e_b -> e_b (x) e_a."""
    return from_function(d, 2, ring, lambda x: {(x[1], x[0]): 1})


# ---------------------------------------------------------------------------
# Core operations


def compose(f: TensorOperator, g: TensorOperator) -> TensorOperator:
    """f after g."""
    if f.d != g.d or f.m_in != g.m_out:
        raise ShapeError(f"cannot compose {f.shape} after {g.shape}")
    if f.ring != g.ring:
        raise RingMismatchError(f.ring, g.ring)
    fcols = f.cols
    cols: dict = {}
    for j, gcol in g.cols.items():
        out: dict = {}
        for k, c in gcol.items():
            fcol = fcols.get(k)
            if not fcol:
                continue
            for i, v in fcol.items():
                t = v * c
                out[i] = out[i] + t if i in out else t
        if out:
            cols[j] = out
    return TensorOperator(f.d, f.m_out, g.m_in, f.ring, cols)


def compose_all(*ops: TensorOperator) -> TensorOperator:
    """ops[0] after ops[1] after ... ."""
    out = ops[-1]
    for f in reversed(ops[:-1]):
        out = compose(f, out)
    return out


def kron(f: TensorOperator, g: TensorOperator) -> TensorOperator:
    """Tensor product f (x) g."""
    if f.d != g.d:
        raise ShapeError("rank mismatch")
    if f.ring != g.ring:
        raise RingMismatchError(f.ring, g.ring)
    d = f.d
    gi_n = d ** g.m_in
    go_n = d ** g.m_out
    cols: dict = {}
    for jf, fcol in f.cols.items():
        for jg, gcol in g.cols.items():
            out = {}
            for i_f, a in fcol.items():
                for i_g, b in gcol.items():
                    out[i_f * go_n + i_g] = a * b
            cols[jf * gi_n + jg] = out
    return TensorOperator(d, f.m_out + g.m_out, f.m_in + g.m_in, f.ring, cols)


def pad(f: TensorOperator, m: int, i: int) -> TensorOperator:
    """Identity^(i-1) (x) f (x) identity^(rest) on V^(x m); i is 1-based."""
    k = f.m
    if i < 1 or i + k - 1 > m:
        raise ShapeError(f"cannot place a {k}-factor operator at position {i} of {m}")
    d = f.d
    left_n = d ** (i - 1)
    right_n = d ** (m - i - k + 1)
    block = d ** k
    cols: dict = {}
    for left in range(left_n):
        for mid, fcol in f.cols.items():
            for right in range(right_n):
                j = (left * block + mid) * right_n + right
                cols[j] = {(left * block + o) * right_n + right: v for o, v in fcol.items()}
    return TensorOperator(d, m, m, f.ring, cols)


def act(f: TensorOperator, vec: Vector, m: int, i: int) -> Vector:
    """Apply pad(f, m, i) to a sparse vector without building the padded operator."""
    k = f.m
    d = f.d
    stride = d ** (m - i - k + 1)
    block = d ** k
    cols = f.cols
    out: dict = {}
    for idx, c in vec.items():
        left, rest = divmod(idx, block * stride)
        mid, right = divmod(rest, stride)
        col = cols.get(mid)
        if not col:
            continue
        base = left * block
        for o, v in col.items():
            n = (base + o) * stride + right
            t = c * v
            out[n] = out[n] + t if n in out else t
    return {n: v for n, v in out.items() if v.terms}


def partial_trace(f: TensorOperator, factors: Iterable[int]) -> TensorOperator:
    """Trace over the given 1-based factor positions."""
    m = f.m
    traced = sorted(set(factors))
    for p in traced:
        if not 1 <= p <= m:
            raise ShapeError(f"trace position {p} out of range 1..{m}")
    if not traced:
        return f
    keep = [p - 1 for p in range(1, m + 1) if p not in traced]
    tpos = [p - 1 for p in traced]
    d = f.d
    table = _digits_table(d, m)
    cols: dict = {}
    for j, col in f.cols.items():
        dj = table[j]
        jt = [dj[p] for p in tpos]
        jk = index_of([dj[p] for p in keep], d)
        for i, v in col.items():
            di = table[i]
            if [di[p] for p in tpos] != jt:
                continue
            ik = index_of([di[p] for p in keep], d)
            tgt = cols.setdefault(jk, {})
            tgt[ik] = tgt[ik] + v if ik in tgt else v
    return TensorOperator(d, len(keep), len(keep), f.ring, cols)


def trace(f: TensorOperator) -> RingElement:
    total = f.ring.zero()
    for j, col in f.cols.items():
        v = col.get(j)
        if v is not None:
            total = total + v
    return total


def linear_combine(terms: Sequence[tuple]) -> TensorOperator:
    """Sum of c_k * f_k; scalars may be ring elements or plain numbers."""
    if not terms:
        raise TensorError("empty linear combination")
    f0 = terms[0][1]
    total = zero(f0.d, f0.m_out, f0.ring, f0.m_in)
    for c, f in terms:
        if isinstance(c, RingElement) and c.ring != f.ring:
            raise RingMismatchError(c.ring, f.ring)
        total = total + f.scale(c)
    return total


def invert(f: TensorOperator) -> TensorOperator:
    """Two-sided inverse by Gauss-Jordan elimination with unit pivots."""
    m = f.m
    ring = f.ring
    n = f.d ** m
    rows = f.matrix()
    inv = identity(f.d, m, ring).matrix()
    rows = [list(r) for r in rows]
    inv = [list(r) for r in inv]
    for col in range(n):
        pivot = None
        pivot_inv = None
        saw_nonzero = False
        # prefer constant pivots, then any unit
        candidates = [r for r in range(col, n) if rows[r][col].terms]
        candidates.sort(key=lambda r: (not rows[r][col].is_constant(), r))
        for r in candidates:
            saw_nonzero = True
            try:
                pivot_inv = invert_unit(rows[r][col])
            except NotAUnitError:
                continue
            pivot = r
            break
        if pivot is None:
            if not saw_nonzero:
                raise SingularOperatorError(f"operator is singular (column {col} has no pivot)")
            if ring.is_field:
                raise SingularOperatorError(f"operator is singular (column {col})")
            raise NotAFieldError(
                f"no unit pivot in column {col} over {ring.ring_id}; "
                "invert over a field, or build the inverse degree by degree with eybo.inverse_series"
            )
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        rows[col] = [x * pivot_inv for x in rows[col]]
        inv[col] = [x * pivot_inv for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            factor = rows[r][col]
            if not factor.terms:
                continue
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
            inv[r] = [a - factor * b for a, b in zip(inv[r], inv[col])]
    result = from_matrix(f.d, m, ring, inv)
    one = identity(f.d, m, ring)
    if compose(f, result) != one or compose(result, f) != one:
        raise SingularOperatorError("elimination did not produce a two-sided inverse")
    return result


def transpose_factors(f: TensorOperator) -> TensorOperator:
    """Reverse the order of tensor factors (conjugation by the full flip)."""
    m = f.m
    d = f.d
    table = _digits_table(d, m)
    def rev(i):
        return index_of(table[i][::-1], d)
    return TensorOperator(d, m, m, f.ring, {rev(j): {rev(i): v for i, v in c.items()} for j, c in f.cols.items()})


def as_ring(ring: Ring, *ops: TensorOperator) -> list:
    try:
        return [op.embed(ring) for op in ops]
    except RingError as exc:
        raise TensorError(str(exc)) from exc
