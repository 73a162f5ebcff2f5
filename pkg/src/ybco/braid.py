"""Braid words, their operator representation and the Markov trace invariant."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .eybo import DeformedEybo, Eybo
from .ring import Ring, RingElement
from .tensor import act, compose, identity, pad


class BraidError(ValueError):
    pass


class MarkovError(BraidError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        for x in self.letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise BraidError(f"letter {x} out of range for {self.strands} strands")

    @property
    def positive(self) -> int:
        return sum(1 for x in self.letters if x > 0)

    @property
    def negative(self) -> int:
        return sum(1 for x in self.letters if x < 0)

    @property
    def writhe(self) -> int:
        return self.positive - self.negative

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_braid(self)


def parse_braid(text: str) -> BraidWord:
    """Parse ``strands=M; i j k ...``; signed integers, negative = inverse letter."""
    head, sep, body = text.partition(";")
    if not sep:
        raise BraidError("braid text must look like 'strands=M; letters'")
    key, eq, value = head.partition("=")
    if key.strip() != "strands" or not eq:
        raise BraidError("braid text must start with 'strands='")
    try:
        m = int(value.strip())
        letters = [int(t) for t in body.split()]
    except ValueError as exc:
        raise BraidError(f"malformed braid text: {text!r}") from exc
    return BraidWord(m, tuple(letters))


def format_braid(b: BraidWord) -> str:
    body = " ".join(str(x) for x in b.letters)
    return f"strands={b.strands}; {body}".rstrip()


def torus_braid(n: int) -> BraidWord:
    if n < 1:
        raise BraidError("torus braid needs n >= 1")
    return BraidWord(2, (1,) * n)


def free_reduce(letters: Iterable[int]) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


# ---------------------------------------------------------------------------
# Markov moves


@dataclass(frozen=True)
class Conjugate:
    g: int


@dataclass(frozen=True)
class StabilizePos:
    pass


@dataclass(frozen=True)
class StabilizeNeg:
    pass


@dataclass(frozen=True)
class DestabilizeIfPossible:
    pass


def can_destabilize(b: BraidWord) -> bool:
    m = b.strands
    if m < 2 or not b.letters or abs(b.letters[-1]) != m - 1:
        return False
    return sum(1 for x in b.letters if abs(x) == m - 1) == 1


def markov_transform(b: BraidWord, move) -> BraidWord:
    m = b.strands
    if isinstance(move, Conjugate):
        g = move.g
        if g == 0 or abs(g) > m - 1:
            raise MarkovError(f"conjugating letter {g} out of range for {m} strands")
        return BraidWord(m, free_reduce((-g,) + b.letters + (g,)))
    if isinstance(move, StabilizePos):
        return BraidWord(m + 1, b.letters + (m,))
    if isinstance(move, StabilizeNeg):
        return BraidWord(m + 1, b.letters + (-m,))
    if isinstance(move, DestabilizeIfPossible):
        if not can_destabilize(b):
            raise MarkovError("last letter is not the only occurrence of the top generator")
        return BraidWord(m - 1, b.letters[:-1])
    raise MarkovError(f"unknown move {move!r}")


def random_braid(rng: random.Random, max_strands: int = 4, max_letters: int = 6, min_strands: int = 2) -> BraidWord:
    m = rng.randint(min_strands, max_strands)
    if m == 1:
        return BraidWord(1)
    n = rng.randint(0, max_letters)
    letters = tuple(rng.choice([-1, 1]) * rng.randint(1, m - 1) for _ in range(n))
    return BraidWord(m, letters)


def random_move(rng: random.Random, b: BraidWord):
    moves = [StabilizePos(), StabilizeNeg()]
    if b.strands >= 2:
        g = rng.choice([-1, 1]) * rng.randint(1, b.strands - 1)
        moves.append(Conjugate(g))
    if can_destabilize(b):
        moves.append(DestabilizeIfPossible())
    return rng.choice(moves)


# ---------------------------------------------------------------------------
# Representation and trace


def _as_deformed(model) -> DeformedEybo:
    if isinstance(model, DeformedEybo):
        return model
    if isinstance(model, Eybo):
        return DeformedEybo([model.R], [model.R_inv], [model.mu], model.alpha, model.beta)
    raise TypeError(f"expected an enhanced operator, got {type(model).__name__}")


def _cap(D: DeformedEybo):
    return D.order if D.mode == "truncated" else None


def _convolve(a: dict, b: dict, cap) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            if cap is not None and k > cap:
                continue
            t = compose(x, y)
            out[k] = out[k] + t if k in out else t
    return {k: v for k, v in out.items() if not v.is_zero() or k == 0}


def psi(b: BraidWord, model) -> dict:
    """Graded operator on V^(x m): {h-degree: component}."""
    D = _as_deformed(model)
    m = b.strands
    ring = D.base_ring
    fwd, inv = D.forward(), D.inverse()
    cap = _cap(D)
    out = {0: identity(D.d, m, ring)}
    for x in b.letters:
        parts = fwd if x > 0 else inv
        step = {k: pad(p, m, abs(x)) for k, p in parts.items()}
        out = _convolve(out, step, cap)
    return out


def _vec_add(into: dict, vec: dict):
    for i, v in vec.items():
        into[i] = into[i] + v if i in into else v


def _act_graded(state: dict, parts: dict, m: int, pos: int, cap) -> dict:
    out: dict = {}
    for dv, vec in state.items():
        for dp, op in parts.items():
            k = dv + dp
            if cap is not None and k > cap:
                continue
            w = act(op, vec, m, pos)
            if w:
                _vec_add(out.setdefault(k, {}), w)
    return {k: {i: v for i, v in vec.items() if v.terms} for k, vec in out.items()}


def _is_identity(parts: dict, d: int, ring: Ring) -> bool:
    return set(parts) == {0} and parts[0] == identity(d, 1, ring)


def raw_trace(b: BraidWord, model) -> dict:
    """{k: tr of the degree-k part of Psi(b) (mu x ... x mu)} before normalization."""
    D = _as_deformed(model)
    m = b.strands
    ring = D.base_ring
    d = D.d
    cap = _cap(D)
    fwd, inv = D.forward(), D.inverse()
    mus = D.mu_graded()
    plain_mu = _is_identity(mus, d, ring)
    one = ring.one()
    totals: dict = {}
    for x in range(d ** m):
        state = {0: {x: one}}
        if not plain_mu:
            for pos in range(1, m + 1):
                state = _act_graded(state, mus, m, pos, cap)
        for letter in reversed(b.letters):
            parts = fwd if letter > 0 else inv
            state = _act_graded(state, parts, m, abs(letter), cap)
        for k, vec in state.items():
            v = vec.get(x)
            if v is not None:
                totals[k] = totals[k] + v if k in totals else v
    return totals


def output_ring(model) -> Ring:
    return _as_deformed(model).deformed_ring()


def _normalizer(b: BraidWord, D: DeformedEybo, ring: Ring) -> RingElement:
    return ring.embed(D.alpha) ** (-b.writhe) * ring.embed(D.beta) ** (-b.strands)


def trace_invariant(b: BraidWord, model) -> RingElement:
    """alpha^-w beta^-m sum_k h^k tr(Psi^k(b) mu^(x m))."""
    D = _as_deformed(model)
    ring = D.deformed_ring()
    total = ring.zero()
    for k, v in raw_trace(b, D).items():
        total = total + (ring.embed(v) * ring.gen(D.hbar, k) if k else ring.embed(v))
    return total * _normalizer(b, D, ring)


def trace_invariant_via_psi(b: BraidWord, model) -> RingElement:
    """Same value as ``trace_invariant`` through full graded operators."""
    D = _as_deformed(model)
    ring = D.deformed_ring()
    cap = _cap(D)
    d, m = D.d, b.strands
    mus = D.mu_graded()
    mu_m = {0: identity(d, m, D.base_ring)}
    for pos in range(1, m + 1):
        mu_m = _convolve(mu_m, {k: pad(p, m, pos) for k, p in mus.items()}, cap)
    full = _convolve(psi(b, D), mu_m, cap)
    total = ring.zero()
    for k, op in full.items():
        tr = D.base_ring.zero()
        for j, col in op.cols.items():
            v = col.get(j)
            if v is not None:
                tr = tr + v
        total = total + (ring.embed(tr) * ring.gen(D.hbar, k) if k else ring.embed(tr))
    return total * _normalizer(b, D, ring)
