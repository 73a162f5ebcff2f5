"""Exact commutative rings.

A ring is described by a base field or ring of scalars (integers, rationals
or Gaussian rationals) together with an ordered list of formal variables.
Each variable is polynomial, Laurent, truncated (v^(N+1) = 0) or cyclic
(a generator of a finite cyclic group, giving a group ring).

Elements are immutable and kept in a canonical form: a mapping from
exponent tuples to nonzero coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

BASES = ("ZZ", "QQ", "QQi")
KINDS = ("poly", "laurent", "trunc", "cyclic")


class RingError(Exception):
    """Base class for ring errors."""


class RingMismatchError(RingError, TypeError):
    def __init__(self, left: "Ring", right: "Ring"):
        super().__init__(f"ring mismatch: {left.ring_id} vs {right.ring_id}")
        self.left = left
        self.right = right


class NotAUnitError(RingError, ArithmeticError):
    pass


class ParseError(RingError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rational coefficients


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


class Gauss:
    """Gaussian rational re + im*i with im != 0 (otherwise a plain number)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = _norm(re)
        self.im = _norm(im)

    @staticmethod
    def make(re, im):
        if im == 0:
            return _norm(re)
        return Gauss(re, im)

    @staticmethod
    def parts(x):
        if isinstance(x, Gauss):
            return x.re, x.im
        return x, 0

    def __add__(self, o):
        a, b = Gauss.parts(o)
        return Gauss.make(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, o):
        a, b = Gauss.parts(o)
        return Gauss.make(self.re - a, self.im - b)

    def __rsub__(self, o):
        a, b = Gauss.parts(o)
        return Gauss.make(a - self.re, b - self.im)

    def __mul__(self, o):
        a, b = Gauss.parts(o)
        return Gauss.make(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def inverse(self):
        n = Fraction(self.re * self.re + self.im * self.im)
        return Gauss.make(self.re / n, -self.im / n)

    def __eq__(self, o):
        a, b = Gauss.parts(o)
        return self.re == a and self.im == b

    def __hash__(self):
        return hash(("Gauss", self.re, self.im))

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Gauss({self.re}, {self.im})"


def _coeff_inverse(c):
    if isinstance(c, Gauss):
        return c.inverse()
    return _norm(Fraction(1) / Fraction(c))


# ---------------------------------------------------------------------------
# Ring descriptors


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = "poly"
    bound: int = 0  # N for trunc (v^(N+1) = 0), order for cyclic

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RingError(f"unknown variable kind {self.kind!r}")
        if self.kind == "trunc" and self.bound < 0:
            raise RingError("truncation degree must be >= 0")
        if self.kind == "cyclic" and self.bound < 1:
            raise RingError("cyclic order must be >= 1")
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", self.name) or self.name == "i":
            raise RingError(f"invalid variable name {self.name!r}")

    @property
    def spec(self) -> str:
        if self.kind == "poly":
            return self.name
        if self.kind == "laurent":
            return f"{self.name}^+-1"
        if self.kind == "trunc":
            return f"{self.name}:trunc{self.bound}"
        return f"{self.name}:cyclic{self.bound}"


def poly(name: str) -> Variable:
    return Variable(name, "poly")


def laurent(name: str) -> Variable:
    return Variable(name, "laurent")


def truncated(name: str, degree: int) -> Variable:
    return Variable(name, "trunc", degree)


def cyclic(name: str, order: int) -> Variable:
    return Variable(name, "cyclic", order)


Scalar = Union[int, Fraction, Gauss]


@dataclass(frozen=True)
class Ring:
    """Descriptor of an exact commutative ring."""

    base: str = "QQ"
    variables: tuple = ()

    def __post_init__(self):
        if self.base not in BASES:
            raise RingError(f"unknown base {self.base!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise RingError(f"duplicate variable names in {names}")

    # -- identity -----------------------------------------------------------

    @property
    def ring_id(self) -> str:
        if not self.variables:
            return self.base
        return f"{self.base}[{','.join(v.spec for v in self.variables)}]"

    @staticmethod
    def from_id(text: str) -> "Ring":
        m = re.fullmatch(r"(ZZ|QQi|QQ)(?:\[(.*)\])?", text.strip())
        if not m:
            raise ParseError(f"bad ring id {text!r}")
        variables = []
        if m.group(2):
            for part in m.group(2).split(","):
                part = part.strip()
                if part.endswith("^+-1"):
                    variables.append(laurent(part[:-4]))
                elif ":trunc" in part:
                    n, d = part.split(":trunc")
                    variables.append(truncated(n, int(d)))
                elif ":cyclic" in part:
                    n, d = part.split(":cyclic")
                    variables.append(cyclic(n, int(d)))
                else:
                    variables.append(poly(part))
        return Ring(m.group(1), tuple(variables))

    def __str__(self):
        return self.ring_id

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_field(self) -> bool:
        return self.base != "ZZ" and not self.variables

    def index(self, name: str) -> int:
        for k, v in enumerate(self.variables):
            if v.name == name:
                return k
        raise RingError(f"variable {name!r} not in ring {self.ring_id}")

    def has(self, name: str) -> bool:
        return any(v.name == name for v in self.variables)

    # -- derived rings ------------------------------------------------------

    def without(self, *names: str) -> "Ring":
        return Ring(self.base, tuple(v for v in self.variables if v.name not in names))

    def with_vars(self, *variables: Variable, base: str | None = None) -> "Ring":
        out = list(self.variables)
        for v in variables:
            if self.has(v.name):
                if self.variables[self.index(v.name)] != v:
                    raise RingError(f"conflicting declarations of {v.name!r}")
                continue
            out.append(v)
        b = self.base if base is None else _max_base(self.base, base)
        return Ring(b, tuple(out))

    def union(self, other: "Ring") -> "Ring":
        return self.with_vars(*other.variables, base=other.base)

    # -- element construction -------------------------------------------------

    def _zero_exp(self):
        return (0,) * len(self.variables)

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return RingElement(self, {self._zero_exp(): 1})

    def const(self, c) -> "RingElement":
        c = self._coerce_scalar(c)
        if c == 0:
            return self.zero()
        return RingElement(self, {self._zero_exp(): c})

    def gen(self, name: str, power: int = 1) -> "RingElement":
        k = self.index(name)
        e = [0] * len(self.variables)
        e[k] = power
        return self.monomial(tuple(e))

    def imag(self) -> "RingElement":
        if self.base != "QQi":
            raise RingError(f"ring {self.ring_id} has no imaginary unit")
        return RingElement(self, {self._zero_exp(): Gauss(0, 1)})

    def monomial(self, exps, coeff=1) -> "RingElement":
        exps = tuple(exps)
        if len(exps) != len(self.variables):
            raise RingError("exponent length mismatch")
        e = self._reduce(exps)
        if e is None:
            return self.zero()
        c = self._coerce_scalar(coeff)
        return RingElement(self, {e: c} if c != 0 else {})

    def from_terms(self, terms: Mapping) -> "RingElement":
        out: dict = {}
        for e, c in terms.items():
            e = self._reduce(tuple(e))
            if e is None:
                continue
            out[e] = out.get(e, 0) + self._coerce_scalar(c)
        return RingElement(self, {e: c for e, c in out.items() if c != 0})

    def __call__(self, x) -> "RingElement":
        return self.coerce(x)

    def coerce(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring == self:
                return x
            raise RingMismatchError(x.ring, self)
        return self.const(x)

    def embed(self, x: "RingElement") -> "RingElement":
        """Map an element of a ring whose variables all occur here (by name)."""
        if isinstance(x, RingElement) and x.ring == self:
            return x
        if not isinstance(x, RingElement):
            return self.const(x)
        src = x.ring
        if _BASE_ORDER[src.base] > _BASE_ORDER[self.base]:
            raise RingError(f"cannot embed {src.ring_id} into {self.ring_id}")
        slots = []
        for v in src.variables:
            if not self.has(v.name):
                raise RingError(f"cannot embed {src.ring_id} into {self.ring_id}: missing {v.name}")
            w = self.variables[self.index(v.name)]
            if w.kind != v.kind and not (w.kind == "laurent" and v.kind in ("poly", "trunc")):
                raise RingError(f"variable {v.name} is {v.kind} in source but {w.kind} in target")
            if w.kind == "trunc" and v.kind == "trunc" and w.bound > v.bound:
                raise RingError(f"cannot embed {v.name} truncated at {v.bound} into a finer truncation")
            slots.append(self.index(v.name))
        n = len(self.variables)
        out: dict = {}
        for e, c in x.terms.items():
            f = [0] * n
            for k, p in zip(slots, e):
                f[k] = p
            g = self._reduce(tuple(f))
            if g is None:
                continue
            out[g] = out.get(g, 0) + c
        return RingElement(self, {e: c for e, c in out.items() if c != 0})

    def _coerce_scalar(self, c):
        if isinstance(c, RingElement):
            raise RingError("expected a scalar")
        if isinstance(c, bool):
            c = int(c)
        if isinstance(c, Gauss):
            if self.base != "QQi":
                raise RingError(f"Gaussian scalar in {self.ring_id}")
            return c
        if isinstance(c, complex):
            if self.base != "QQi":
                raise RingError(f"complex scalar in {self.ring_id}")
            return Gauss.make(Fraction(c.real), Fraction(c.imag))
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction):
            if self.base == "ZZ" and c.denominator != 1:
                raise RingError(f"non-integer scalar {c} in {self.ring_id}")
            return _norm(c)
        if isinstance(c, str):
            return self._coerce_scalar(Fraction(c))
        raise RingError(f"cannot use {c!r} as a scalar of {self.ring_id}")

    # -- normal form --------------------------------------------------------

    def _reduce(self, e: tuple):
        out = None
        for k, v in enumerate(self.variables):
            p = e[k]
            if v.kind == "trunc":
                if p > v.bound:
                    return None
                if p < 0:
                    raise RingError(f"negative power of truncated variable {v.name}")
            elif v.kind == "cyclic":
                if not 0 <= p < v.bound:
                    if out is None:
                        out = list(e)
                    out[k] = p % v.bound
            elif v.kind == "poly" and p < 0:
                raise RingError(f"negative power of polynomial variable {v.name}")
        return e if out is None else tuple(out)

    @property
    def _needs_reduce(self) -> bool:
        return any(v.kind in ("trunc", "cyclic") for v in self.variables)


_BASE_ORDER = {"ZZ": 0, "QQ": 1, "QQi": 2}


def _max_base(a: str, b: str) -> str:
    return a if _BASE_ORDER[a] >= _BASE_ORDER[b] else b


QQ = Ring("QQ")
ZZ = Ring("ZZ")
QQi = Ring("QQi")


def rationals() -> Ring:
    return QQ


def gaussian_rationals() -> Ring:
    return QQi


def integers() -> Ring:
    return ZZ


# ---------------------------------------------------------------------------
# Elements


def _term_key(e: tuple):
    return (sum(abs(p) for p in e), tuple(-p for p in e))


class RingElement:
    """An immutable element of a :class:`Ring` in canonical form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- coercion -------------------------------------------------------------

    def _other(self, o) -> "RingElement":
        if isinstance(o, RingElement):
            if o.ring != self.ring:
                raise RingMismatchError(self.ring, o.ring)
            return o
        return self.ring.const(o)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, o):
        o = self._other(o)
        if not o.terms:
            return self
        if not self.terms:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        a, b = self.terms, o.terms
        if not a or not b:
            return self.ring.zero()
        ring = self.ring
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return RingElement(ring, {e: c * cb for e, c in a.items()})
        if len(a) == 1:
            (ea, ca), = a.items()
            if not any(ea):
                return RingElement(ring, {e: ca * c for e, c in b.items()})
        red = ring._reduce if ring._needs_reduce else None
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if red is not None:
                    e = red(e)
                    if e is None:
                        continue
                out[e] = out.get(e, 0) + c1 * c2
        return RingElement(ring, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert_unit(self) ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "RingElement":
        c = self.ring._coerce_scalar(c)
        if c == 0:
            return self.ring.zero()
        return RingElement(self.ring, {e: v * c for e, v in self.terms.items()})

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get(self.ring._zero_exp(), 0)

    def __eq__(self, o):
        if isinstance(o, RingElement):
            return self.ring == o.ring and self.terms == o.terms
        try:
            return self.terms == self.ring.const(o).terms
        except RingError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"<{self.ring.ring_id}: {render(self)}>"

    def __str__(self):
        return render(self)


def add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def sub(a: RingElement, b: RingElement) -> RingElement:
    return a - b


def mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def arithmetic(a: RingElement, b: RingElement, op: str) -> RingElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise RingError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Units


def invert_unit(a: RingElement) -> RingElement:
    """Exact inverse of a unit, or :class:`NotAUnitError`."""
    ring = a.ring
    if not a.terms:
        raise NotAUnitError("zero is not a unit")
    trunc = [k for k, v in enumerate(ring.variables) if v.kind == "trunc"]
    if trunc:
        head = {e: c for e, c in a.terms.items() if not any(e[k] for k in trunc)}
        if not head:
            names = ", ".join(ring.variables[k].name for k in trunc)
            raise NotAUnitError(f"non-unit: zero constant term in truncated variables ({names})")
        u = _invert_untruncated(RingElement(ring, head))
        x = ring.one() - u * a
        total = ring.one()
        power = ring.one()
        while True:
            power = power * x
            if not power.terms:
                break
            total = total + power
        inv = u * total
        return inv
    return _invert_untruncated(a)


def _invert_untruncated(a: RingElement) -> RingElement:
    ring = a.ring
    items = list(a.terms.items())
    for e, _ in items:
        for k, v in enumerate(ring.variables):
            if v.kind == "poly" and e[k] != 0:
                raise NotAUnitError(f"non-unit: positive degree in polynomial variable {v.name}")
    if len(items) == 1:
        e, c = items[0]
        if ring.base == "ZZ" and c not in (1, -1):
            raise NotAUnitError(f"non-unit: integer {c} is not invertible")
        inv_e = ring._reduce(tuple(-p for p in e))
        return RingElement(ring, {inv_e: _coeff_inverse(c)})
    raise NotAUnitError(
        f"non-unit or unsupported inverse: {render(a)} has several terms; "
        "only monomials times base units and truncated series are inverted"
    )


def exact_divide(a: RingElement, b: RingElement) -> RingElement:
    """Quotient q with q*b == a, for rings without truncated variables."""
    ring = a.ring
    if b.ring != ring:
        raise RingMismatchError(ring, b.ring)
    if any(v.kind in ("trunc", "cyclic") for v in ring.variables):
        raise RingError("exact_divide needs a ring without truncated or cyclic variables")
    if not b.terms:
        raise ZeroDivisionError("division by zero")
    if not a.terms:
        return ring.zero()
    lead_b = max(b.terms)
    low_b = min(b.terms)
    low_a = min(a.terms)
    floor = tuple(x - y for x, y in zip(low_a, low_b))
    cb = _coeff_inverse(b.terms[lead_b])
    q: dict = {}
    r = a
    while r.terms:
        lead = max(r.terms)
        e = tuple(x - y for x, y in zip(lead, lead_b))
        if e < floor:
            raise RingError(f"{render(b)} does not divide {render(a)}")
        for k, v in enumerate(ring.variables):
            if v.kind == "poly" and e[k] < 0:
                raise RingError(f"{render(b)} does not divide {render(a)}")
        c = r.terms[lead] * cb
        if not isinstance(c, Gauss):
            c = _norm(c)
        if ring.base == "ZZ" and isinstance(c, Fraction):
            raise RingError(f"{render(b)} does not divide {render(a)} over the integers")
        q[e] = q.get(e, 0) + c
        r = r - RingElement(ring, {e: c}) * b
    return RingElement(ring, {e: c for e, c in q.items() if c != 0})


# ---------------------------------------------------------------------------
# Specialization and grading


def specialize(a: RingElement, assignment: Mapping[str, object], target: Ring | None = None) -> RingElement:
    """Substitute ring elements (or scalars) for variables."""
    ring = a.ring
    for name in assignment:
        ring.index(name)
    values = {}
    out_ring = ring.without(*assignment)
    for name, val in assignment.items():
        if isinstance(val, RingElement):
            out_ring = out_ring.union(val.ring)
    if target is not None:
        out_ring = target
    for name, val in assignment.items():
        values[name] = out_ring.embed(val) if isinstance(val, RingElement) else out_ring.const(val)
    slots = [(k, v) for k, v in enumerate(ring.variables) if v.name in assignment]
    keep = [(k, v) for k, v in enumerate(ring.variables) if v.name not in assignment]
    keep_slots = [out_ring.index(v.name) for _, v in keep]
    for k, v in slots:
        if v.kind == "laurent":
            try:
                invert_unit(values[v.name])
            except NotAUnitError as exc:
                raise NotAUnitError(f"cannot substitute a non-unit for Laurent variable {v.name}: {exc}")
        if v.kind == "cyclic":
            if values[v.name] ** v.bound != out_ring.one():
                raise RingError(f"value for {v.name} does not have order dividing {v.bound}")
    powers: dict = {}

    def power(name, p):
        key = (name, p)
        if key not in powers:
            powers[key] = values[name] ** p
        return powers[key]

    n = out_ring.nvars
    total = out_ring.zero()
    for e, c in a.terms.items():
        f = [0] * n
        for (k, _), slot in zip(keep, keep_slots):
            f[slot] = e[k]
        term = out_ring.monomial(f, c)
        for k, v in slots:
            if e[k]:
                term = term * power(v.name, e[k])
        total = total + term
    return total


def grade(a: RingElement, variable: str, degree: int) -> RingElement:
    ring = a.ring
    k = ring.index(variable)
    v = ring.variables[k]
    if v.kind == "cyclic":
        degree %= v.bound
    out_ring = ring.without(variable)
    terms = {e[:k] + e[k + 1:]: c for e, c in a.terms.items() if e[k] == degree}
    return RingElement(out_ring, terms)


def degrees(a: RingElement, variable: str) -> list[int]:
    k = a.ring.index(variable)
    return sorted({e[k] for e in a.terms})


def from_grades(ring: Ring, variable: str, parts: Mapping[int, RingElement]) -> RingElement:
    """Inverse of :func:`grade`: assemble sum of variable^deg * part."""
    total = ring.zero()
    for deg, part in parts.items():
        total = total + ring.embed(part) * ring.gen(variable, deg)
    return total


# ---------------------------------------------------------------------------
# Rendering and parsing


def _scalar_text(c) -> str:
    c = _norm(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _mono_text(ring: Ring, e: tuple, imag: bool) -> list[str]:
    parts = ["i"] if imag else []
    for v, p in zip(ring.variables, e):
        if p == 0:
            continue
        parts.append(v.name if p == 1 else f"{v.name}^{p}")
    return parts


def render(a: RingElement) -> str:
    """Canonical text form, e.g. ``4 + 18*h`` or ``h + h^-1``."""
    pieces: list[tuple[int, str]] = []
    for e in sorted(a.terms, key=_term_key):
        c = a.terms[e]
        re_part, im_part = Gauss.parts(c)
        for coeff, imag in ((re_part, False), (im_part, True)):
            if coeff == 0:
                continue
            mono = _mono_text(a.ring, e, imag)
            sign = -1 if coeff < 0 else 1
            mag = abs(coeff)
            if not mono:
                body = _scalar_text(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = "*".join([_scalar_text(mag)] + mono)
            pieces.append((sign, body))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] < 0 else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


def _tokenize(text: str) -> list[str]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        out.append(m.group(0).strip())
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse(text: str, ring: Ring) -> RingElement:
    """Parse the grammar produced by :func:`render` (parentheses allowed)."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise ParseError(f"expected {expected or 'token'} at token {pos} in {text!r}")
        pos += 1
        return t

    def integer():
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        t = take()
        if not t.isdigit():
            raise ParseError(f"expected integer exponent in {text!r}")
        return sign * int(t)

    def atom():
        t = peek()
        if t is None:
            raise ParseError(f"unexpected end of {text!r}")
        if t.isdigit():
            take()
            val = Fraction(int(t))
            if peek() == "/" and pos + 1 < len(toks) and toks[pos + 1].isdigit():
                take()
                val /= int(take())
            base = ring.const(val)
        elif t == "(":
            take()
            base = expr()
            take(")")
        elif t == "i" and ring.base == "QQi":
            take()
            base = ring.imag()
        elif re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", t):
            take()
            if not ring.has(t):
                raise ParseError(f"unknown symbol {t!r} for ring {ring.ring_id}")
            base = ring.gen(t)
        else:
            raise ParseError(f"unexpected token {t!r} in {text!r}")
        if peek() == "^":
            take()
            base = base ** integer()
        return base

    def term():
        val = atom()
        while peek() in ("*", "/"):
            op = take()
            rhs = atom()
            val = val * rhs if op == "*" else val * invert_unit(rhs)
        return val

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        val = term()
        if sign < 0:
            val = -val
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    if not toks:
        raise ParseError("empty expression")
    result = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input at token {pos} in {text!r}")
    return result


def elements(ring: Ring, values: Iterable) -> list[RingElement]:
    return [ring.coerce(v) for v in values]
