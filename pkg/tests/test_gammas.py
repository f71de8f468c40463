"""Gamma products against a deliberately naive independent oracle.

The oracle enumerates double-product factors over the full box
m, n <= order (far more than needed) and multiplies public primitives;
the production code picks factors by degree bounds and working headroom.
"""

import pytest

from scindex.gammas import (cartan_prefactor, elliptic_gamma, gamma_prime_one_inv,
                            gamma_tpow, inv_elliptic_gamma)
from scindex.rings import RingConfig, slot_for_group
from scindex.series import TruncatedSeries, geom, one_minus


def full_ring(order, rank=1):
    return RingConfig(("p", "q", "s"), order, (slot_for_group("z", None, rank),))


def gv(ring, **exps):
    g = [0] * ring.grank
    for k, v in exps.items():
        g[ring.grading_index(k)] = v
    return tuple(g)


def oracle_gamma(ring, gkey, fkey, order, box=None):
    """prod_{m,n in box} (1 - x^{-1} p^{m+1} q^{n+1}) / (1 - x p^m q^n)."""
    box = order if box is None else box
    acc = TruncatedSeries.one(ring, order)
    ng = tuple(-x for x in gkey)
    nf = tuple(-x for x in fkey)
    for m in range(box + 1):
        for n in range(box + 1):
            den = tuple(a + b for a, b in zip(gkey, gv(ring, p=m, q=n)))
            if ring.degree(den) <= order:
                acc = (acc * geom(ring, den, fkey, order)).truncated(order)
            num = tuple(a + b for a, b in zip(ng, gv(ring, p=m + 1, q=n + 1)))
            acc = (acc * one_minus(ring, num, nf, order)).truncated(order)
    return acc


def test_gamma_sz_matches_oracle():
    ring = full_ring(4)
    got = elliptic_gamma(ring, gv(ring, s=1), (1,))
    assert got == oracle_gamma(ring, gv(ring, s=1), (1,), 4)


def test_gamma_sz_order2_value():
    # frozen from the oracle: at order 2 only the geometric (0,0) factor acts
    ring = full_ring(2)
    got = elliptic_gamma(ring, gv(ring, s=1), (1,))
    assert got.terms == {(0, 0, 0): {(0,): 1}, (0, 0, 1): {(1,): 1},
                         (0, 0, 2): {(2,): 1}}


def test_gamma_reflection():
    # Gamma(m) * Gamma(pq/m) = 1 for m = s z, to order 4
    ring = full_ring(4)
    a = elliptic_gamma(ring, gv(ring, s=1), (1,))
    b = elliptic_gamma(ring, gv(ring, p=1, q=1, s=-1), (-1,))
    assert (a * b).truncated(4) == TruncatedSeries.one(ring)


def test_gamma_reflection_t_argument():
    # same for m = t z = s^2 z, whose partner has a degree-0 numerator factor
    ring = full_ring(4)
    a = elliptic_gamma(ring, gv(ring, s=2), (1,))
    b = elliptic_gamma(ring, gv(ring, p=1, q=1, s=-2), (-1,))
    assert (a * b).truncated(4) == TruncatedSeries.one(ring)


def test_gamma_of_t_squared_is_laurent():
    # Gamma(t^2) = Gamma(s^4) starts 1 - pq/t^2 + ...: degree-0 but not
    # exponent-wise regular; it must still be exact against the oracle
    ring = full_ring(6)
    got = elliptic_gamma(ring, gv(ring, s=4), (0,))
    assert got == oracle_gamma(ring, gv(ring, s=4), (0,), 6)
    assert got.terms[(1, 1, -4)] == {(0,): -1}


def test_inv_gamma_root_degree0_part():
    ring = full_ring(4)
    got = inv_elliptic_gamma(ring, None, (2,))
    assert got.truncated(0).terms == {(0, 0, 0): {(0,): 1, (2,): -1}}


def test_inv_gamma_root_matches_oracle():
    ring = full_ring(4)
    got = inv_elliptic_gamma(ring, None, (2,))

    def oracle_inv_root(ring, fkey, order):
        acc = TruncatedSeries.one(ring, order)
        nf = tuple(-x for x in fkey)
        for m in range(order + 1):
            for n in range(order + 1):
                acc = (acc * one_minus(ring, gv(ring, p=m, q=n), fkey, order)).truncated(order)
                acc = (acc * geom(ring, gv(ring, p=m + 1, q=n + 1), nf, order)).truncated(order)
        return acc

    assert got == oracle_inv_root(ring, (2,), 4)


def test_gamma_pole_rejected():
    ring = full_ring(4)
    with pytest.raises(ValueError):
        elliptic_gamma(ring, gv(ring), (2,))       # pure flavor: pole
    with pytest.raises(ValueError):
        inv_elliptic_gamma(ring, gv(ring, s=4))    # degree-0 geometric tail


def test_hl_degenerations():
    ring = RingConfig(("tau",), 4, (slot_for_group("z", None, 1),))
    assert gamma_tpow(ring, 1, (1,)) == geom(ring, (1,), (1,))
    assert gamma_tpow(ring, 2, (1,), inverse=True) == one_minus(ring, (2,), (1,))


def test_macdonald_degenerations():
    ring = RingConfig(("q", "s"), 5, (slot_for_group("z", None, 1),))
    got = gamma_tpow(ring, 1, (1,))
    expect = (geom(ring, (0, 1), (1,)) * geom(ring, (1, 1), (1,)) * geom(ring, (2, 1), (1,))).truncated(5)
    assert got == expect


def test_schur_degenerations():
    ring = RingConfig(("u",), 5, (slot_for_group("z", None, 1),))
    got = gamma_tpow(ring, 1, (1,))
    expect = (geom(ring, (1,), (1,)) * geom(ring, (3,), (1,)) * geom(ring, (5,), (1,))).truncated(5)
    assert got == expect


def test_prefactor_hl_is_one_minus_t():
    ring = RingConfig(("tau",), 6)
    assert cartan_prefactor(ring).terms == {(0,): {(): 1}, (2,): {(): -1}}


def test_prefactor_full_reduces_to_macdonald():
    from scindex.engine import LimitKind, reduce_limit
    full = RingConfig(("p", "q", "s"), 6)
    mac = RingConfig(("q", "s"), 6)
    assert reduce_limit(cartan_prefactor(full), LimitKind.MACDONALD) == cartan_prefactor(mac)


def test_gamma_prime_one_inverse_is_nome_pochhammer():
    ring = full_ring(6)
    got = gamma_prime_one_inv(ring)
    expect = TruncatedSeries.one(ring)
    for var in ("p", "q"):
        for j in (1, 2, 3):
            expect = (expect * one_minus(ring, gv(ring, **{var: j}), None, 6)).truncated(6)
    assert got == expect
