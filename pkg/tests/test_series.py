"""Series core: ring laws, truncation coherence, the basic operations."""

import random
from fractions import Fraction

import pytest

from scindex.rings import RingConfig, slot_for_group
from scindex.series import (ConfigMismatch, FugacityMap, RegularityError,
                            TruncatedSeries, compare_to_order, constant_term,
                            geom, invert, one_minus, permute_vars, substitute)


def hl_ring(order, nslots=1):
    slots = tuple(slot_for_group(n, "su2", 1) for n in "zwy"[:nslots])
    return RingConfig(("tau",), order, slots)


def random_series(ring, rng, nterms=4, maxcoef=5):
    s = TruncatedSeries.zero(ring)
    for _ in range(nterms):
        g = (rng.randrange(0, ring.truncation_order + 1),)
        f = tuple(rng.randrange(-2, 3) for _ in range(ring.frank))
        c = rng.randrange(-maxcoef, maxcoef + 1)
        if rng.random() < 0.3:
            c = Fraction(c, rng.randrange(1, 4))
        s = s + TruncatedSeries.monomial(ring, g, f, c)
    return s


# -- spec examples -----------------------------------------------------------


def test_add_scalars_and_identity():
    ring = hl_ring(4)
    one = TruncatedSeries.one(ring)
    assert (one + one).constant_value() == 2
    f = geom(ring, (1,), (1,))
    assert (f + TruncatedSeries.zero(ring)) == f


def test_add_collects_like_degree():
    ring = hl_ring(4)
    a = TruncatedSeries.monomial(ring, (1,), (1,))
    b = TruncatedSeries.monomial(ring, (1,), (-1,))
    assert (a + b).terms == {(1,): {(1,): 1, (-1,): 1}}


def test_mul_identities():
    ring = hl_ring(4)
    f = geom(ring, (1,), (1,))
    assert f * TruncatedSeries.one(ring) == f
    # (1 - tz)(1 + tz) = 1 - t^2 z^2
    lo = one_minus(ring, (1,), (1,))
    hi = TruncatedSeries.one(ring) + TruncatedSeries.monomial(ring, (1,), (1,))
    assert (lo * hi).terms == {(0,): {(0,): 1}, (2,): {(2,): -1}}


def test_mul_expansion_at_order_2():
    ring = hl_ring(2)
    a = TruncatedSeries.one(ring) + TruncatedSeries.monomial(ring, (1,), (1,))
    b = TruncatedSeries.one(ring) + TruncatedSeries.monomial(ring, (1,), (-1,))
    assert (a * b).terms == {(0,): {(0,): 1}, (1,): {(1,): 1, (-1,): 1},
                             (2,): {(0,): 1}}


def test_geom_examples():
    ring = hl_ring(3)
    assert geom(ring, (1,)).terms == {(k,): {(0,): 1} for k in range(4)}
    assert geom(ring, (2,), (2,)).terms == {(0,): {(0,): 1}, (2,): {(2,): 1}}
    assert (one_minus(ring, (1,), (1,)) * geom(ring, (1,), (1,))) == TruncatedSeries.one(ring)
    with pytest.raises(ValueError):
        geom(ring, (0,), (2,))


def test_invert_examples():
    ring = hl_ring(2)
    assert invert(TruncatedSeries.one(ring)) == TruncatedSeries.one(ring)
    two_minus = TruncatedSeries.constant(ring, 2) - TruncatedSeries.monomial(ring, (1,), (0,), 2)
    assert invert(two_minus).terms == {(k,): {(0,): Fraction(1, 2)} for k in range(3)}
    a = TruncatedSeries.one(ring) - TruncatedSeries.from_poly(ring, {(1,): 1, (-1,): 1}, (1,))
    assert invert(a).terms == {(0,): {(0,): 1}, (1,): {(1,): 1, (-1,): 1},
                               (2,): {(2,): 1, (0,): 2, (-2,): 1}}
    with pytest.raises(ValueError):
        invert(TruncatedSeries.from_poly(ring, {(1,): 1}))  # flavor lead


def test_constant_term_examples():
    ring = hl_ring(4)
    s = (TruncatedSeries.from_poly(ring, {(1,): 1, (0,): 3, (-1,): 1})
         + TruncatedSeries.zero(ring))
    assert constant_term(s, "z").constant_value() == 3
    chi = TruncatedSeries.from_poly(ring, {(1,): 1, (-1,): 1}, (1,))
    assert constant_term(chi * chi, "z").terms == {(2,): {(): 2}}


def test_substitute_monomial_relabeling():
    src = hl_ring(4)
    dst = RingConfig(("tau",), 4, (slot_for_group("w", "su2", 1),))
    fmap = FugacityMap.build(src, dst, {"z1": {"tau": 2, "w1": 1}})
    s = TruncatedSeries.monomial(src, (1,), (1,))
    out = substitute(s, fmap)
    assert out.terms == {(3,): {(1,): 1}}
    # identity map is the identity
    ident = FugacityMap.build(src, src, {"z1": {"z1": 1}})
    f = geom(src, (1,), (1,))
    assert substitute(f, ident) == f


def test_substitute_flags_insufficiency():
    src = hl_ring(4)
    dst = RingConfig(("tau",), 4)
    fmap = FugacityMap.build(src, dst, {"z1": {"tau": 2}})
    s = TruncatedSeries.one(src) + TruncatedSeries.monomial(src, (1,), (-1,))
    with pytest.raises(RegularityError):
        substitute(s, fmap)   # image 1 + tau^{-1} is not regular
    out = substitute(s, fmap, allow_laurent=True)
    assert out.order == src.truncation_order - 2   # worst-case drop D = 2
    assert out.min_degree() == -1


def test_config_mismatch_is_an_error():
    with pytest.raises(ConfigMismatch):
        TruncatedSeries.one(hl_ring(4)) * TruncatedSeries.one(hl_ring(5))


# -- randomized laws ---------------------------------------------------------


def test_ring_laws_random():
    rng = random.Random(11)
    for trial in range(120):
        ring = hl_ring(rng.randrange(2, 6), nslots=rng.randrange(1, 3))
        a = random_series(ring, rng)
        b = random_series(ring, rng)
        c = random_series(ring, rng)
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


def test_truncation_coherence_random():
    rng = random.Random(23)
    for trial in range(120):
        big = hl_ring(6, nslots=2)
        small_order = rng.randrange(0, 6)
        a = random_series(big, rng)
        b = random_series(big, rng)
        hi = (a * b).truncated(small_order)
        lo = a.truncated(small_order) * b.truncated(small_order)
        assert hi == lo.truncated(small_order)


def test_geom_invert_consistency_random():
    rng = random.Random(5)
    for trial in range(100):
        ring = hl_ring(rng.randrange(1, 7))
        g = (rng.randrange(1, 3),)
        f = (rng.randrange(-2, 3),)
        assert geom(ring, g, f) == invert(one_minus(ring, g, f))


def test_mul_is_deterministic():
    rng = random.Random(7)
    ring = hl_ring(5, nslots=2)
    a = random_series(ring, rng, nterms=8)
    b = random_series(ring, rng, nterms=8)
    p1 = (a * b).to_json()
    p2 = (a * b).to_json()
    assert p1 == p2


# -- serialization ------------------------------------------------------------


def test_json_round_trip():
    rng = random.Random(3)
    ring = hl_ring(5, nslots=2)
    s = random_series(ring, rng, nterms=10)
    again = TruncatedSeries.loads(s.dumps())
    assert again == s and again.order == s.order


def test_json_rationals_as_strings():
    ring = hl_ring(2)
    s = TruncatedSeries.constant(ring, Fraction(22, 7))
    blob = s.to_json()
    coeff = blob["terms"][0]["coeffs"][0]
    assert coeff["num"] == "22" and coeff["den"] == "7"


def test_permute_vars_round_trip():
    rng = random.Random(9)
    ring = hl_ring(4, nslots=2)
    s = random_series(ring, rng, nterms=6)
    swapped = permute_vars(s, {"z1": "w1", "w1": "z1"})
    assert permute_vars(swapped, {"z1": "w1", "w1": "z1"}) == s


def test_compare_reports_first_difference():
    ring = hl_ring(4)
    a = TruncatedSeries.one(ring)
    b = TruncatedSeries.one(ring) + TruncatedSeries.monomial(ring, (2,), (1,))
    eq, order, diff = compare_to_order(a, b)
    assert not eq and order == 4 and diff == ((2,), (1,), 0, 1)
