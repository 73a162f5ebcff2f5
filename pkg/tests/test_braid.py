import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybco.braid import (
    BraidError,
    BraidWord,
    Conjugate,
    DestabilizeIfPossible,
    MarkovError,
    StabilizeNeg,
    StabilizePos,
    can_destabilize,
    format_braid,
    free_reduce,
    markov_transform,
    parse_braid,
    psi,
    random_braid,
    random_move,
    torus_braid,
    trace_invariant,
    trace_invariant_via_psi,
)
from ybco.eybo import tau_deformation, transposition_eybo
from ybco.ring import QQ, poly

QRING = QQ.with_vars(poly("q"))
TAU_D = tau_deformation(QRING, QRING.gen("q"))


@st.composite
def braids(draw, max_strands=4, max_letters=6):
    m = draw(st.integers(1, max_strands))
    if m == 1:
        return BraidWord(1)
    letters = draw(st.lists(st.integers(1, m - 1).flatmap(lambda g: st.sampled_from([g, -g])),
                            max_size=max_letters))
    return BraidWord(m, tuple(letters))


@given(braids())
def test_parse_format_round_trip(b):
    assert parse_braid(format_braid(b)) == b


@pytest.mark.parametrize("text", ["1 2", "strands=2 1", "strands=x; 1", "strands=2; 2", "strands=2; 0", "strands=0;"])
def test_malformed_braids_rejected(text):
    with pytest.raises(BraidError):
        parse_braid(text)


def test_counts():
    b = BraidWord(3, (1, -2, 1, 2))
    assert (b.positive, b.negative, b.writhe) == (3, 1, 2)
    assert torus_braid(3) == BraidWord(2, (1, 1, 1))
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)


def test_markov_moves():
    b = BraidWord(2, (1, 1, 1))
    assert markov_transform(b, Conjugate(1)) == BraidWord(2, (1, 1, 1))
    assert markov_transform(b, StabilizePos()) == BraidWord(3, (1, 1, 1, 2))
    assert markov_transform(b, StabilizeNeg()) == BraidWord(3, (1, 1, 1, -2))
    s = markov_transform(b, StabilizeNeg())
    assert can_destabilize(s)
    assert markov_transform(s, DestabilizeIfPossible()) == b
    with pytest.raises(MarkovError):
        markov_transform(b, DestabilizeIfPossible())
    with pytest.raises(MarkovError):
        markov_transform(b, Conjugate(2))


@given(braids())
def test_plain_flip_trace_counts_components(b):
    # tr of a permutation operator on (k^2)^(x m) is 2^(number of cycles)
    model = transposition_eybo(2, QQ)
    perm = list(range(b.strands))
    for x in b.letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, cycles = set(), 0
    for s in range(b.strands):
        if s not in seen:
            cycles += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
    assert trace_invariant(b, model) == QQ.const(2 ** cycles)


@given(braids(max_strands=3, max_letters=5))
def test_two_trace_routes_agree(b):
    assert trace_invariant(b, TAU_D) == trace_invariant_via_psi(b, TAU_D)


@given(braids(max_strands=3, max_letters=4))
def test_psi_of_braid_and_inverse_is_identity_mod_h(b):
    inv = BraidWord(b.strands, tuple(-x for x in reversed(b.letters)))
    both = BraidWord(b.strands, b.letters + inv.letters)
    graded = psi(both, TAU_D)
    from ybco.tensor import identity
    assert graded[0] == identity(2, b.strands, QRING)
    assert 1 not in graded or graded[1].is_zero()


@given(st.integers(0, 2 ** 32 - 1))
def test_markov_invariance_tau(seed):
    rng = random.Random(seed)
    b = random_braid(rng, 3, 5)
    move = random_move(rng, b)
    assert trace_invariant(b, TAU_D) == trace_invariant(markov_transform(b, move), TAU_D)


def test_torus_values():
    h = TAU_D.deformed_ring().gen("h")
    q = TAU_D.deformed_ring().gen("q")
    assert trace_invariant(torus_braid(2), TAU_D) == 4 * TAU_D.deformed_ring().one() + 4 * q * h
    assert trace_invariant(torus_braid(3), TAU_D) == 2 * TAU_D.deformed_ring().one()
