"""Jones and Alexander polynomials from Laurent deformations, with independent oracles."""

from __future__ import annotations

from dataclasses import dataclass

from .braid import BraidWord, psi, trace_invariant
from .bracket import Cap, Cross, Cup, MorseWord, bracket_oracle
from .eybo import DeformedEybo, Eybo, Report, verify_eybo
from .ring import QQ, ZZ, Ring, RingElement, exact_divide, laurent
from .tensor import (
    SingularOperatorError,
    TensorOperator,
    compose,
    diagonal,
    from_matrix,
    identity,
    invert,
    kron,
    partial_trace,
)
from .ybcoh import delta2, ybe_defect

HBAR = "h"


class OracleError(ValueError):
    pass


def hbar_ring(base: Ring = QQ) -> Ring:
    return base.with_vars(laurent(HBAR))


@dataclass
class LaurentModel:
    name: str
    deformation: DeformedEybo
    R: TensorOperator
    R_inv: TensorOperator
    mu: TensorOperator

    @property
    def ring(self) -> Ring:
        return self.R.ring

    @property
    def components(self) -> list:
        return self.deformation.phis

    @property
    def inverse_components(self) -> list:
        return self.deformation.phi_hats

    @property
    def mu_components(self) -> list:
        return self.deformation.mus


def _split(op: TensorOperator, sign: int, top: int, base: Ring) -> list:
    """Coefficients of h^(sign*k), k = 0..top, as operators over ``base``."""
    out = []
    for k in range(top + 1):
        out.append(op.map_coeffs(lambda x: _coef(x, sign * k, base), base))
    return out


def _coef(x: RingElement, k: int, base: Ring) -> RingElement:
    j = x.ring.index(HBAR)
    terms = {e[:j] + e[j + 1:]: c for e, c in x.terms.items() if e[j] == k}
    return RingElement(base, terms) if terms else base.zero()


def _check_laurent(model: LaurentModel) -> Report:
    rep = Report(f"{model.name} Laurent model")
    R, R_inv = model.R, model.R_inv
    one = identity(2, 2, model.ring)
    rep.add("ybe", ybe_defect(R))
    rep.add("ybe-inverse", ybe_defect(R_inv))
    rep.add("inverse-right", compose(R, R_inv) - one)
    rep.add("inverse-left", compose(R_inv, R) - one)
    phis = model.components
    rep.add("ybe-degree-0", ybe_defect(phis[0]))
    rep.add("cocycle-degree-1", delta2(phis[0], phis[1]))
    rep.add("decomposition", _assemble(phis, 1) - R)
    rep.add("decomposition-inverse", _assemble(model.inverse_components, -1) - R_inv)
    try:
        invert(phis[0])
        rep.add_flag("degree-0-singular", False, "degree-0 part is invertible")
    except SingularOperatorError:
        rep.add_flag("degree-0-singular", True)
    return rep


def _assemble(parts: list, sign: int) -> TensorOperator:
    ring = hbar_ring(parts[0].ring)
    total = None
    for k, p in enumerate(parts):
        t = p.embed(ring).scale(ring.gen(HBAR, sign * k))
        total = t if total is None else total + t
    return total


def build_jones_model(verify: bool = True) -> LaurentModel:
    """Factored Jones matrix J = h [[1,0,0,0],[0,0,h,0],[0,h,1-h^2,0],[0,0,0,1]] without the leading h."""
    ring = hbar_ring()
    h = ring.gen(HBAR)
    one, zero = ring.one(), ring.zero()
    R = from_matrix(2, 2, ring, [
        [one, zero, zero, zero],
        [zero, zero, h, zero],
        [zero, h, one - h ** 2, zero],
        [zero, zero, zero, one],
    ])
    hi = h ** -1
    R_inv = from_matrix(2, 2, ring, [
        [one, zero, zero, zero],
        [zero, one - hi ** 2, hi, zero],
        [zero, hi, zero, zero],
        [zero, zero, zero, one],
    ])
    # h mu = diag(1, h^2): graded parts diag(1, 0), 0, diag(0, 1)
    mu = diagonal(2, ring, [one, h ** 2])
    mus = [diagonal(2, QQ, [1, 0]), diagonal(2, QQ, [0, 0]), diagonal(2, QQ, [0, 1])]
    D = DeformedEybo(_split(R, 1, 2, QQ), _split(R_inv, -1, 2, QQ), mus, h ** -1, h, mode="laurent")
    model = LaurentModel("jones", D, R, R_inv, mu)
    if verify:
        rep = jones_report(model)
        if not rep.passed:
            raise AssertionError("Jones model failed verification:\n" + rep.serialize())
    return model


def build_alexander_model(verify: bool = True) -> LaurentModel:
    """Factored Alexander matrix with the leading h^-1 removed; mu / h = diag(1, -1)."""
    ring = hbar_ring()
    h = ring.gen(HBAR)
    one, zero = ring.one(), ring.zero()
    R = from_matrix(2, 2, ring, [
        [one, zero, zero, zero],
        [zero, zero, h, zero],
        [zero, h, one - h ** 2, zero],
        [zero, zero, zero, -h ** 2],
    ])
    hi = h ** -1
    R_inv = from_matrix(2, 2, ring, [
        [one, zero, zero, zero],
        [zero, one - hi ** 2, hi, zero],
        [zero, hi, zero, zero],
        [zero, zero, zero, -hi ** 2],
    ])
    mu = diagonal(2, ring, [one, -one])
    mus = [diagonal(2, QQ, [1, -1])]
    D = DeformedEybo(_split(R, 1, 2, QQ), _split(R_inv, -1, 2, QQ), mus, ring.one(), ring.one(), mode="laurent")
    model = LaurentModel("alexander", D, R, R_inv, mu)
    if verify:
        rep = alexander_report(model)
        if not rep.passed:
            raise AssertionError("Alexander model failed verification:\n" + rep.serialize())
    return model


def jones_report(model: LaurentModel | None = None) -> Report:
    """Decomposition, YBE, inverse and enhancement checks (alpha = 1/h, beta = h)."""
    model = model or jones_model()
    h = model.ring.gen(HBAR)
    rep = _check_laurent(model)
    rep.extend(verify_eybo(Eybo(model.R, model.R_inv, h ** -1, h, model.mu)), prefix="enhanced:")
    return rep


def alexander_report(model: LaurentModel | None = None) -> Report:
    """Decomposition, YBE and inverse checks; the partial trace is not a full enhancement."""
    return _check_laurent(model or alexander_model())


_JONES = None
_ALEX = None


def jones_model() -> LaurentModel:
    global _JONES
    if _JONES is None:
        _JONES = build_jones_model()
    return _JONES


def alexander_model() -> LaurentModel:
    global _ALEX
    if _ALEX is None:
        _ALEX = build_alexander_model()
    return _ALEX


# ---------------------------------------------------------------------------
# Invariants


def jones_invariant(b: BraidWord, model: LaurentModel | None = None) -> RingElement:
    """h^(m+ - m- - n) times the trace of Psi(b) (h mu)^(x n); equals (h + 1/h) V."""
    model = model or jones_model()
    return trace_invariant(b, model.deformation)


def jones_invariant_prefactor(b: BraidWord, model: LaurentModel | None = None) -> RingElement:
    """The same value with alpha = beta = 1 and the prefactor applied by hand."""
    model = model or jones_model()
    D = model.deformation
    plain = DeformedEybo(D.phis, D.phi_hats, D.mus, QQ.one(), QQ.one(), mode="laurent")
    ring = D.deformed_ring()
    raw = trace_invariant(b, plain)
    return raw * ring.gen(HBAR, b.positive - b.negative - b.strands)


def alexander_operator(b: BraidWord, model: LaurentModel | None = None) -> TensorOperator:
    """h^(-m+ + m- + m - 1) tr_{2..m}(Psi(b)(1 (x) mu^(x m-1))) as a 2x2 operator."""
    model = model or alexander_model()
    m = b.strands
    if m < 2:
        raise ValueError("the partial trace needs at least two strands")
    D = model.deformation
    ring = D.deformed_ring()
    graded = psi(b, D)
    full = None
    for k, op in graded.items():
        t = op.embed(ring).scale(ring.gen(HBAR, k))
        full = t if full is None else full + t
    weight = identity(2, 1, ring)
    for _ in range(m - 1):
        weight = kron(weight, model.mu)
    traced = partial_trace(compose(full, weight), range(2, m + 1))
    return traced.scale(ring.gen(HBAR, -b.positive + b.negative + m - 1))


def alexander_invariant(b: BraidWord, model: LaurentModel | None = None) -> tuple:
    """(scalar, whether the operator is scalar times the identity)."""
    op = alexander_operator(b, model)
    s = op.entry((0,), (0,))
    is_scalar = op == identity(2, 1, op.ring).scale(s)
    return s, is_scalar


# ---------------------------------------------------------------------------
# Oracles


def braid_closure_morse(b: BraidWord) -> MorseWord:
    """Nested caps over the strands, the braid letters, then nested cups."""
    m = b.strands
    events = [Cap(i) for i in range(1, m + 1)]
    events += [Cross(abs(x), 1 if x > 0 else -1) for x in b.letters]
    events += [Cup(i) for i in range(m, 0, -1)]
    return MorseWord(tuple(events))


def oracle_jones(b: BraidWord, max_crossings: int = 12, root: int = -1) -> RingElement:
    """V(t) from the Kauffman state sum of the braid closure, written in h.

    t = A^-4 = h^2 fixes t^(1/2) only up to sign; ``root`` picks
    t^(1/2) = A^-2 = root*h.  Knots do not depend on the choice, a link with
    c components changes by (-1)^(c-1).  The matrix model matches root = -1.
    """
    if root not in (1, -1):
        raise ValueError("root must be +1 or -1")
    if len(b.letters) > max_crossings:
        raise OracleError(f"state sum limited to {max_crossings} crossings")
    ring = QQ.with_vars(laurent("A"))
    A = ring.gen("A")
    delta = -A ** 2 - A ** -2
    bracket = bracket_oracle(braid_closure_morse(b), ring)
    f = exact_divide(bracket, delta) * (-A ** 3) ** (-b.writhe)
    out_ring = hbar_ring()
    total = out_ring.zero()
    for e, c in f.terms.items():
        if e[0] % 2:
            raise OracleError("odd power of A in a normalized bracket")
        k = -e[0] // 2
        total = total + out_ring.gen(HBAR, k).scale(c * root ** (k % 2))
    return total


def component_count(b: BraidWord) -> int:
    return len(_components(b))


def _components(b: BraidWord) -> list:
    """Permutation cycles of the closure, each listed by top positions."""
    m = b.strands
    perm = list(range(m))
    for x in b.letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    # perm[p] = start position of the strand ending at p; invert to follow strands
    where = {start: end for end, start in enumerate(perm)}
    seen, cycles = set(), []
    for s in range(m):
        if s in seen:
            continue
        cyc, p = [], s
        while p not in seen:
            seen.add(p)
            cyc.append(p)
            p = where[p]
        cycles.append(cyc)
    return cycles


def _first_undercrossing(b: BraidWord):
    """Index of the first crossing met from below in a based traversal, or None."""
    visited = set()
    for cyc in _components(b):
        for start in cyc:
            p = start
            for k, x in enumerate(b.letters):
                i = abs(x) - 1
                if p not in (i, i + 1):
                    continue
                over = (p == i) if x > 0 else (p == i + 1)
                if k not in visited:
                    if not over:
                        return k
                    visited.add(k)
                p = i + 1 if p == i else i
    return None


def _conway(b: BraidWord, ring: Ring, z: RingElement, budget: list) -> RingElement:
    budget[0] -= 1
    if budget[0] < 0:
        raise OracleError("Conway recursion exceeded its step budget")
    k = _first_undercrossing(b)
    if k is None:
        return ring.one() if len(_components(b)) == 1 else ring.zero()
    x = b.letters[k]
    flipped = BraidWord(b.strands, b.letters[:k] + (-x,) + b.letters[k + 1:])
    smoothed = BraidWord(b.strands, b.letters[:k] + b.letters[k + 1:])
    eps = 1 if x > 0 else -1
    return _conway(flipped, ring, z, budget) + z.scale(eps) * _conway(smoothed, ring, z, budget)


def oracle_alexander(b: BraidWord, max_crossings: int = 12) -> RingElement:
    """Conway polynomial by skein recursion, evaluated at z = h - 1/h."""
    if len(b.letters) > max_crossings:
        raise OracleError(f"skein recursion limited to {max_crossings} crossings")
    ring = hbar_ring(ZZ)
    h = ring.gen(HBAR)
    return _conway(b, ring, h - h ** -1, [200000])


def normalize_unit(p: RingElement) -> RingElement:
    """Multiply by the unit +-h^k that makes the lowest term degree 0 with positive coefficient."""
    if p.is_zero():
        return p
    j = p.ring.index(HBAR)
    low = min(e[j] for e in p.terms)
    lead = next(c for e, c in p.terms.items() if e[j] == low)
    q = p * p.ring.gen(HBAR, -low)
    return -q if lead < 0 else q


def equal_up_to_units(a: RingElement, b: RingElement) -> bool:
    ring = a.ring if a.ring.base != "ZZ" else b.ring
    return normalize_unit(ring.embed(a)) == normalize_unit(ring.embed(b))


# Braid words used for the curated comparisons.
CURATED = {
    "unknot": BraidWord(2, (1,)),
    "unknot-1": BraidWord(1, ()),
    "unlink-2": BraidWord(2, ()),
    "hopf": BraidWord(2, (1, 1)),
    "hopf-mirror": BraidWord(2, (-1, -1)),
    "trefoil": BraidWord(2, (1, 1, 1)),
    "trefoil-mirror": BraidWord(2, (-1, -1, -1)),
    "figure-eight": BraidWord(3, (1, -2, 1, -2)),
    "cinquefoil": BraidWord(2, (1, 1, 1, 1, 1)),
}
