"""Enhanced Yang-Baxter operators and their deformations.

An enhanced operator is a quadruple (R, alpha, beta, mu) with mu (x) mu
commuting with R and tr_2(R^{+-1}(mu (x) mu)) = alpha^{+-1} beta mu.

Deformations are stored degree by degree: ``phis[k]`` is the coefficient of
h^k in the deformed operator, ``phi_hats[k]`` the coefficient of h^k in its
inverse (h^-k in Laurent mode) and ``mus[k]`` the coefficient of h^k in the
deformed enhancement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .ring import Ring, RingElement, grade, invert_unit, laurent, truncated
from .tensor import (
    SingularOperatorError,
    TensorOperator,
    compose,
    compose_all,
    from_function,
    identity,
    invert,
    kron,
    pad,
    partial_trace,
    transposition,
    zero,
)
from .ybcoh import delta1, delta2, ybe_defect

HBAR = "h"


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Check:
    name: str
    passed: bool
    residual: Optional[TensorOperator] = None
    note: str = ""
    informational: bool = False

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        zero_flag = "yes" if self.residual is None or self.residual.is_zero() else "no"
        text = f"{self.name}: {status} residual_zero={zero_flag}"
        if self.note:
            text += f" ({self.note})"
        if self.informational:
            text += " [informational]"
        return text


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    result: object = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def add(self, name: str, residual: TensorOperator, note: str = "") -> Check:
        c = Check(name, residual.is_zero(), residual, note)
        self.checks.append(c)
        return c

    def add_flag(self, name: str, ok: bool, note: str = "") -> Check:
        c = Check(name, ok, None, note)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.residual, c.note, c.informational))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def serialize(self) -> str:
        return "\n".join(c.line() for c in self.checks) + "\n"

    def __str__(self):
        return self.serialize()


# ---------------------------------------------------------------------------
# Data


@dataclass(frozen=True)
class Eybo:
    R: TensorOperator
    R_inv: TensorOperator
    alpha: RingElement
    beta: RingElement
    mu: TensorOperator

    @property
    def ring(self) -> Ring:
        return self.R.ring

    @property
    def d(self) -> int:
        return self.R.d

    def inverse_eybo(self) -> "Eybo":
        return Eybo(self.R_inv, self.R, invert_unit(self.alpha), self.beta, self.mu)


@dataclass
class DeformedEybo:
    phis: list
    phi_hats: list
    mus: list
    alpha: RingElement
    beta: RingElement
    mode: str = "truncated"  # or "laurent"
    hbar: str = HBAR

    @property
    def order(self) -> int:
        return len(self.phis) - 1

    @property
    def base_ring(self) -> Ring:
        return self.phis[0].ring

    @property
    def d(self) -> int:
        return self.phis[0].d

    def deformed_ring(self) -> Ring:
        if self.mode == "laurent":
            return self.base_ring.with_vars(laurent(self.hbar))
        if self.order == 0:
            return self.base_ring
        return self.base_ring.with_vars(truncated(self.hbar, self.order))

    def forward(self) -> dict:
        return {k: p for k, p in enumerate(self.phis) if not p.is_zero() or k == 0}

    def inverse(self) -> dict:
        sign = -1 if self.mode == "laurent" else 1
        return {sign * k: p for k, p in enumerate(self.phi_hats) if not p.is_zero() or k == 0}

    def mu_graded(self) -> dict:
        return {k: p for k, p in enumerate(self.mus) if not p.is_zero()}

    def scalar(self, x: RingElement) -> RingElement:
        return self.deformed_ring().embed(x)

    def assemble(self) -> Eybo:
        """Single operators over the deformed ring."""
        ring = self.deformed_ring()
        R = assemble_graded(self.forward(), ring, self.hbar)
        R_inv = assemble_graded(self.inverse(), ring, self.hbar)
        mu = assemble_graded(self.mu_graded(), ring, self.hbar, m=1, d=self.d)
        return Eybo(R, R_inv, self.scalar(self.alpha), self.scalar(self.beta), mu)

    def base(self) -> Eybo:
        if self.mode == "laurent":
            raise ValueError("a Laurent deformation has no undeformed base operator")
        return Eybo(self.phis[0], self.phi_hats[0], self.alpha, self.beta, self.mus[0])


def assemble_graded(parts: dict, ring: Ring, var: str = HBAR, m: int | None = None, d: int | None = None) -> TensorOperator:
    """Sum of var^k * parts[k] as an operator over ``ring``."""
    if not parts:
        if m is None or d is None:
            raise ValueError("empty graded operator needs explicit shape")
        return zero(d, m, ring)
    total = None
    for k, op in parts.items():
        term = op.embed(ring).scale(ring.gen(var, k)) if k else op.embed(ring)
        total = term if total is None else total + term
    return total


def operator_grade(op: TensorOperator, var: str, degree: int) -> TensorOperator:
    """Coefficient of var^degree, entrywise."""
    out_ring = op.ring.without(var)
    return op.map_coeffs(lambda x: grade(x, var, degree), out_ring)


def eybo_from_deformed(D: DeformedEybo) -> Eybo:
    return D.assemble()


# ---------------------------------------------------------------------------
# Verification


def _mumu(mu_a: TensorOperator, mu_b: TensorOperator) -> TensorOperator:
    return kron(mu_a, mu_b)


def verify_eybo(S: Eybo, require_invertible: bool = True) -> Report:
    rep = Report("enhanced Yang-Baxter operator")
    ring = S.ring
    d = S.d
    one2 = identity(d, 2, ring)
    if require_invertible:
        rep.add("inverse-right", compose(S.R, S.R_inv) - one2)
        rep.add("inverse-left", compose(S.R_inv, S.R) - one2)
    rep.add("ybe", ybe_defect(S.R))
    mm = _mumu(S.mu, S.mu)
    rep.add("mu-commute", compose(mm, S.R) - compose(S.R, mm))
    ab = S.alpha * S.beta
    a_inv_b = invert_unit(S.alpha) * S.beta
    rep.add("trace-plus", partial_trace(compose(S.R, mm), [2]) - S.mu.scale(ab))
    rep.add("trace-minus", partial_trace(compose(S.R_inv, mm), [2]) - S.mu.scale(a_inv_b))
    try:
        invert(S.mu)
        mu_invertible = True
    except Exception:
        mu_invertible = False
    if mu_invertible:
        one1 = identity(d, 1, ring)
        im = kron(one1, S.mu)
        rep.add("trace-plus-alt", partial_trace(compose(S.R, im), [2]) - one1.scale(ab))
        rep.add("trace-minus-alt", partial_trace(compose(S.R_inv, im), [2]) - one1.scale(a_inv_b))
    return rep


def _triples(total: int, limit: int, exclude_total: bool = False):
    for i, j in product(range(limit + 1), repeat=2):
        k = total - i - j
        if 0 <= k <= limit:
            if exclude_total and total in (i, j, k):
                continue
            yield i, j, k


def _get(ops: list, k: int, d: int, m: int, ring: Ring) -> TensorOperator:
    return ops[k] if k < len(ops) else zero(d, m, ring)


def degree_checks(phis: list, phi_hats: list, mus: list, alpha, beta, k: int, exclude_top: bool = False) -> dict:
    """Degree-k parts of every defining identity of a truncated deformation."""
    ring = phis[0].ring
    d = phis[0].d
    N = max(len(phis), len(phi_hats), len(mus)) - 1

    def P(i):
        return _get(phis, i, d, 2, ring)

    def H(i):
        return _get(phi_hats, i, d, 2, ring)

    def M(i):
        return _get(mus, i, d, 1, ring)

    out = {}
    inv_r = zero(d, 2, ring)
    inv_l = zero(d, 2, ring)
    for i in range(k + 1):
        inv_r = inv_r + compose(P(i), H(k - i))
        inv_l = inv_l + compose(H(i), P(k - i))
    if k == 0:
        inv_r = inv_r - identity(d, 2, ring)
        inv_l = inv_l - identity(d, 2, ring)
    out["inverse-right"] = inv_r
    out["inverse-left"] = inv_l
    ybe = zero(d, 3, ring)
    comm = zero(d, 2, ring)
    tp = zero(d, 1, ring)
    tm = zero(d, 1, ring)
    for i, j, l in _triples(k, max(k, N), exclude_total=exclude_top):
        ybe = ybe + compose_all(pad(P(i), 3, 1), pad(P(j), 3, 2), pad(P(l), 3, 1))
        ybe = ybe - compose_all(pad(P(i), 3, 2), pad(P(j), 3, 1), pad(P(l), 3, 2))
        comm = comm + compose(kron(M(i), M(j)), P(l)) - compose(P(i), kron(M(j), M(l)))
        tp = tp + partial_trace(compose(P(i), kron(M(j), M(l))), [2])
        tm = tm + partial_trace(compose(H(i), kron(M(j), M(l))), [2])
    out["ybe"] = ybe
    out["mu-commute"] = comm
    out["trace-plus"] = tp
    out["trace-minus"] = tm
    return out


def verify_deformed(D: DeformedEybo) -> Report:
    """Check every defining identity of a deformation degree by degree."""
    if D.mode == "laurent":
        rep = Report("Laurent enhanced deformation")
        S = D.assemble()
        rep.extend(verify_eybo(S))
        rep.add("ybe-inverse", ybe_defect(S.R_inv))
        return rep
    rep = Report(f"order-{D.order} enhanced deformation")
    ab = D.alpha * D.beta
    a_inv_b = invert_unit(D.alpha) * D.beta
    for k in range(D.order + 1):
        parts = degree_checks(D.phis, D.phi_hats, D.mus, D.alpha, D.beta, k)
        Mk = _get(D.mus, k, D.d, 1, D.base_ring)
        rep.add(f"deg{k}:inverse-right", parts["inverse-right"])
        rep.add(f"deg{k}:inverse-left", parts["inverse-left"])
        rep.add(f"deg{k}:ybe", parts["ybe"])
        rep.add(f"deg{k}:mu-commute", parts["mu-commute"])
        rep.add(f"deg{k}:trace-plus", parts["trace-plus"] - Mk.scale(ab))
        rep.add(f"deg{k}:trace-minus", parts["trace-minus"] - Mk.scale(a_inv_b))
    return rep


def verify_enhanced_2cocycle(base: Eybo, phi: TensorOperator, mu1: TensorOperator,
                             phi_hat: TensorOperator | None = None) -> Report:
    """First-order conditions on (phi, mu1); the report's result is the deformation."""
    rep = Report("enhanced 2-cocycle")
    rep.extend(verify_eybo(base), prefix="base:")
    R, R_inv, mu = base.R, base.R_inv, base.mu
    derived_hat = -compose_all(R_inv, phi, R_inv)
    if phi_hat is None:
        phi_hat = derived_hat
    else:
        rep.add("inverse-first-order", phi_hat - derived_hat)
    rep.add("cocycle", delta2(R, phi))
    mixed = kron(mu, mu1) + kron(mu1, mu)
    mm = kron(mu, mu)
    rep.add("mu-commute-first-order", compose(mixed, R) + compose(mm, phi) - compose(phi, mm) - compose(R, mixed))
    ab = base.alpha * base.beta
    a_inv_b = invert_unit(base.alpha) * base.beta
    rep.add("trace-plus-first-order",
            partial_trace(compose(phi, mm) + compose(R, mixed), [2]) - mu1.scale(ab))
    rep.add("trace-minus-first-order",
            partial_trace(compose(phi_hat, mm) + compose(R_inv, mixed), [2]) - mu1.scale(a_inv_b))
    rep.result = DeformedEybo([R, phi], [R_inv, phi_hat], [mu, mu1], base.alpha, base.beta)
    return rep


def coboundary_enhancement(base: Eybo, f: TensorOperator) -> DeformedEybo:
    """Deformation by phi = delta1(R, f) with mu1 = mu f - f mu."""
    phi = delta1(base.R, f)
    mu1 = compose(base.mu, f) - compose(f, base.mu)
    rep = verify_enhanced_2cocycle(base, phi, mu1)
    if not rep.passed:
        raise AssertionError("coboundary deformation failed verification:\n" + rep.serialize())
    return rep.result


def inverse_series(phis: list) -> list:
    """Degree-wise inverse of sum h^k phis[k] modulo h^(N+1)."""
    if not phis:
        raise ValueError("empty series")
    try:
        h0 = invert(phis[0])
    except SingularOperatorError as exc:
        raise SingularOperatorError(f"degree-0 part is singular: {exc}") from exc
    hats = [h0]
    for k in range(1, len(phis)):
        acc = compose(phis[1], hats[k - 1])
        for i in range(2, k + 1):
            acc = acc + compose(phis[i], hats[k - i])
        hats.append(-compose(h0, acc))
    for k in range(1, len(phis)):
        left = zero(phis[0].d, phis[0].m, phis[0].ring)
        for i in range(k + 1):
            left = left + compose(hats[k - i], phis[i])
        if not left.is_zero():
            raise AssertionError(f"left and right inverse series disagree in degree {k}")
    return hats


def theta_obstruction(phis: list, n_plus_1: int) -> TensorOperator:
    """Degree-(n+1) Yang-Baxter residual from terms that avoid phi_{n+1}."""
    ring = phis[0].ring
    d = phis[0].d
    total = zero(d, 3, ring)
    for i, j, k in _triples(n_plus_1, n_plus_1, exclude_total=True):
        if max(i, j, k) >= len(phis):
            continue
        a, b, c = phis[i], phis[j], phis[k]
        total = total + compose_all(pad(a, 3, 1), pad(b, 3, 2), pad(c, 3, 1))
        total = total - compose_all(pad(a, 3, 2), pad(b, 3, 1), pad(c, 3, 2))
    return total


def verify_higher_extension(D: DeformedEybo, phi_next: TensorOperator, mu_next: TensorOperator) -> Report:
    """Whether (phi_{n+1}, mu_{n+1}) extends an order-n deformation to order n+1."""
    n = D.order
    rep = Report(f"extension to order {n + 1}")
    theta = theta_obstruction(D.phis, n + 1)
    rep.add("obstruction", delta2(D.phis[0], phi_next) + theta)
    phis = list(D.phis) + [phi_next]
    mus = list(D.mus) + [mu_next]
    try:
        hats = inverse_series(phis)
    except SingularOperatorError as exc:
        rep.add_flag("inverse", False, str(exc))
        return rep
    parts = degree_checks(phis, hats, mus, D.alpha, D.beta, n + 1)
    ab = D.alpha * D.beta
    a_inv_b = invert_unit(D.alpha) * D.beta
    rep.add("mu-commute", parts["mu-commute"])
    rep.add("trace-plus", parts["trace-plus"] - mu_next.scale(ab))
    rep.add("trace-minus", parts["trace-minus"] - mu_next.scale(a_inv_b))
    rep.result = DeformedEybo(phis, hats, mus, D.alpha, D.beta, D.mode, D.hbar)
    return rep


# ---------------------------------------------------------------------------
# Catalog


def transposition_eybo(d: int, ring: Ring) -> Eybo:
    tau = transposition(d, ring)
    one = ring.one()
    return Eybo(tau, tau, one, one, identity(d, 1, ring))


def tau_cocycle(ring: Ring, q: RingElement | int) -> TensorOperator:
    """The two-parameter-free family on k^2 with cross coefficient q."""
    q = ring.coerce(q)
    one = ring.one()
    table = {
        (0, 1): {(0, 1): one, (1, 0): q, (1, 1): one},
        (1, 0): {(1, 0): -one, (0, 1): q, (1, 1): -one},
    }
    return from_function(2, 2, ring, lambda x: table.get(x, {}))


def trace_correction(phi: TensorOperator) -> TensorOperator:
    """mu_1 with entries mu_i^k = -sum_j phi_{ij}^{kj}, i.e. -tr_2(phi)."""
    return -partial_trace(phi, [2])


def tau_deformation(ring: Ring, q: RingElement | int) -> DeformedEybo:
    base = transposition_eybo(2, ring)
    phi = tau_cocycle(ring, q)
    mu1 = trace_correction(phi)
    rep = verify_enhanced_2cocycle(base, phi, mu1)
    if not rep.passed:
        raise AssertionError("transposition deformation failed:\n" + rep.serialize())
    return rep.result
