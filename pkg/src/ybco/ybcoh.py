"""Yang-Baxter equation and Yang-Baxter cohomology differentials.

Cochains of degree n are endomorphisms of V^(x n).  ``delta1`` and ``delta2``
are the low degree coboundaries.  ``full_diff`` is the general differential
assembled from two families of face maps: in ``left_face`` a new strand
enters on the left of the cochain and is braided through, in ``right_face``
it enters on the right.
"""

from __future__ import annotations

from .linalg import NonFieldError, rank, solve
from .tensor import (
    ShapeError,
    TensorOperator,
    compose,
    compose_all,
    from_function,
    identity,
    kron,
    pad,
    zero,
)


def _check_pair(R: TensorOperator):
    if R.m != 2:
        raise ShapeError("R must act on V (x) V")


def _check_match(R: TensorOperator, phi: TensorOperator):
    if R.d != phi.d:
        raise ShapeError("rank mismatch between R and cochain")
    if R.ring != phi.ring:
        raise ShapeError(f"ring mismatch: {R.ring.ring_id} vs {phi.ring.ring_id}")


def ybe_defect(R: TensorOperator) -> TensorOperator:
    """(R x 1)(1 x R)(R x 1) - (1 x R)(R x 1)(1 x R)."""
    _check_pair(R)
    a = pad(R, 3, 1)
    b = pad(R, 3, 2)
    return compose_all(a, b, a) - compose_all(b, a, b)


def is_pre_ybo(R: TensorOperator) -> bool:
    return ybe_defect(R).is_zero()


def delta1(R: TensorOperator, f: TensorOperator) -> TensorOperator:
    _check_pair(R)
    _check_match(R, f)
    if f.m != 1:
        raise ShapeError("delta1 takes a 1-cochain")
    one = identity(R.d, 1, R.ring)
    f1 = kron(f, one)
    f2 = kron(one, f)
    return compose(R, f1) + compose(R, f2) - compose(f1, R) - compose(f2, R)


def delta2(R: TensorOperator, phi: TensorOperator) -> TensorOperator:
    _check_pair(R)
    _check_match(R, phi)
    if phi.m != 2:
        raise ShapeError("delta2 takes a 2-cochain")
    r1, r2 = pad(R, 3, 1), pad(R, 3, 2)
    p1, p2 = pad(phi, 3, 1), pad(phi, 3, 2)
    plus = compose_all(r1, r2, p1) + compose_all(r1, p2, r1) + compose_all(p1, r2, r1)
    minus = compose_all(r2, r1, p2) + compose_all(r2, p1, r2) + compose_all(p2, r1, r2)
    return plus - minus


def _sigma(R: TensorOperator, n: int, k: int) -> TensorOperator:
    return pad(R, n, k)


def _product(R: TensorOperator, n: int, ks) -> TensorOperator:
    out = identity(R.d, n, R.ring)
    for k in ks:
        out = compose(out, _sigma(R, n, k))
    return out


def left_face(R: TensorOperator, phi: TensorOperator, i: int) -> TensorOperator:
    """sigma_{n+1-i} ... sigma_1 (1 x phi) sigma_1 ... sigma_{i-1} on V^(x n+1)."""
    _check_pair(R)
    _check_match(R, phi)
    n = phi.m
    if not 1 <= i <= n + 1:
        raise ShapeError(f"face index {i} out of range 1..{n + 1}")
    N = n + 1
    before = _product(R, N, range(n + 1 - i, 0, -1))
    after = _product(R, N, range(1, i))
    return compose_all(before, kron(identity(R.d, 1, R.ring), phi), after)


def right_face(R: TensorOperator, phi: TensorOperator, i: int) -> TensorOperator:
    """sigma_i ... sigma_n (phi x 1) sigma_n ... sigma_{n+2-i} on V^(x n+1)."""
    _check_pair(R)
    _check_match(R, phi)
    n = phi.m
    if not 1 <= i <= n + 1:
        raise ShapeError(f"face index {i} out of range 1..{n + 1}")
    N = n + 1
    before = _product(R, N, range(i, n + 1))
    after = _product(R, N, range(n, n + 1 - i, -1))
    return compose_all(before, kron(phi, identity(R.d, 1, R.ring)), after)


def partial_diff(R: TensorOperator, phi: TensorOperator, i: int) -> TensorOperator:
    """The i-th partial differential (-1)^n L_i - R_i of a degree-n cochain."""
    n = phi.m
    left = left_face(R, phi, i)
    right = right_face(R, phi, i)
    return (left if n % 2 == 0 else -left) - right


def full_diff(R: TensorOperator, phi: TensorOperator) -> TensorOperator:
    """Alternating sum of the partial differentials, i = 1..n+1.

    Agrees with ``delta1`` in degree 1 and ``delta2`` in degree 2.
    """
    n = phi.m
    total = zero(R.d, n + 1, R.ring)
    for i in range(1, n + 2):
        term = partial_diff(R, phi, i)
        total = total + (term if i % 2 == 0 else -term)
    return total


def _basis(d: int, n: int, ring):
    size = d ** n
    one = ring.one()
    for j in range(size):
        for i in range(size):
            yield TensorOperator(d, n, n, ring, {j: {i: one}})


def _flatten(op: TensorOperator) -> list:
    return [x for row in op.matrix() for x in row]


def cobound_solve(R: TensorOperator, phi: TensorOperator):
    """Some 1-cochain f with delta1(R, f) == phi, or None if phi is no coboundary."""
    _check_pair(R)
    _check_match(R, phi)
    if not R.ring.is_field:
        raise NonFieldError(f"coboundary solving needs a field, got {R.ring.ring_id}")
    basis = list(_basis(R.d, 1, R.ring))
    columns = [_flatten(delta1(R, e)) for e in basis]
    x = solve(columns, _flatten(phi), R.ring)
    if x is None:
        return None
    f = zero(R.d, 1, R.ring)
    for c, e in zip(x, basis):
        f = f + e.scale(c)
    return f


def differential_rank(R: TensorOperator, n: int) -> int:
    """Rank of the degree-n differential over a field coefficient ring."""
    if not R.ring.is_field:
        raise NonFieldError(f"rank computation needs a field, got {R.ring.ring_id}")
    cols = [_flatten(full_diff(R, e)) for e in _basis(R.d, n, R.ring)]
    return rank(cols, R.ring)


def cohomology_dimension(R: TensorOperator, n: int) -> int:
    """dim Z^n - dim B^n, with B^1 = 0 since there are no 0-cochains."""
    size = (R.d ** n) ** 2
    z = size - differential_rank(R, n)
    b = differential_rank(R, n - 1) if n > 1 else 0
    return z - b


def conjugate(R: TensorOperator, mu: TensorOperator, mu_inv: TensorOperator) -> TensorOperator:
    """(mu x mu) R (mu x mu)^-1."""
    return compose_all(kron(mu, mu), R, kron(mu_inv, mu_inv))


def matrix_unit(d: int, ring, out: int, inp: int) -> TensorOperator:
    return from_function(d, 1, ring, lambda x: {(out,): 1} if x[0] == inp else {})
