"""Root systems, characters, Hall-Littlewood polynomials and their norms."""

import random

import pytest

from scindex import lie
from scindex.lie import TPoly, build_root_system, hall_littlewood, weyl_dim
from scindex.series import TruncatedSeries, compare_to_order


KNOWN = {
    # label: (positive roots, dim, |W|, exponents)
    "a1": (1, 3, 2, (1,)),
    "a2": (3, 8, 6, (1, 2)),
    "a4": (10, 24, 120, (1, 2, 3, 4)),
    "a8": (36, 80, 362880, (1, 2, 3, 4, 5, 6, 7, 8)),
    "d4": (12, 28, 192, (1, 3, 3, 5)),
    "e6": (36, 78, 51840, (1, 4, 5, 7, 8, 11)),
    "e7": (63, 133, 2903040, (1, 5, 7, 9, 11, 13, 17)),
    "e8": (120, 248, 696729600, (1, 7, 11, 13, 17, 19, 23, 29)),
}


@pytest.mark.parametrize("label", sorted(KNOWN))
def test_root_system_structure(label):
    rs = build_root_system(label)
    npos, dim, worder, exps = KNOWN[label]
    assert rs.n_pos == npos
    assert rs.dim == dim == rs.rank + 2 * rs.n_pos
    assert rs.weyl_order == worder
    assert rs.exponents == exps
    assert sum(rs.exponents) == rs.n_pos
    assert all(rs.cartan[i][i] == 2 for i in range(rs.rank))


def test_unsupported_label():
    with pytest.raises(ValueError):
        build_root_system("a9")
    with pytest.raises(ValueError):
        build_root_system("f4")


def test_weyl_dim_values():
    a1 = build_root_system("a1")
    assert weyl_dim(a1, (1,)) == 2
    d4 = build_root_system("d4")
    assert weyl_dim(d4, d4.highest_root_fw) == 28
    e6 = build_root_system("e6")
    th = e6.highest_root_fw
    assert weyl_dim(e6, th) == 78
    assert weyl_dim(e6, tuple(2 * x for x in th)) == 2430


def test_characters_small():
    a1 = build_root_system("a1")
    assert lie.irrep_character(a1, (1,)) == {(1,): 1, (-1,): 1}
    assert lie.irrep_character(a1, (2,)) == {(2,): 1, (0,): 1, (-2,): 1}


@pytest.mark.parametrize("label,lam", [
    ("a2", (1, 1)), ("a2", (2, 1)), ("a3", (1, 0, 1)), ("d4", (0, 1, 0, 0)),
    ("a4", (1, 0, 0, 1)), ("d4", (2, 0, 0, 0)),
])
def test_character_dimension_matches_weyl_dim(label, lam):
    rs = build_root_system(label)
    ch = lie.irrep_character(rs, lam)
    assert sum(ch.values()) == weyl_dim(rs, lam)


def test_character_weyl_invariance():
    rs = build_root_system("a2")
    ch = lie.irrep_character(rs, (2, 1))
    for i in range(rs.rank):
        reflected = {}
        for w, m in ch.items():
            reflected[rs.reflect(w, i)] = reflected.get(rs.reflect(w, i), 0) + m
        assert reflected == ch


def test_hall_littlewood_a1():
    a1 = build_root_system("a1")
    assert hall_littlewood(a1, (0,)).terms == {(0,): TPoly([1])}
    assert hall_littlewood(a1, (1,)).terms == {(1,): TPoly([1]), (-1,): TPoly([1])}
    assert hall_littlewood(a1, (2,)).terms == {(2,): TPoly([1]), (-2,): TPoly([1]),
                                               (0,): TPoly([1, -1])}


@pytest.mark.parametrize("label,lam", [
    ("a1", (3,)), ("a2", (1, 0)), ("a2", (1, 1)), ("a2", (2, 1)),
    ("a3", (0, 1, 0)), ("d4", (1, 0, 0, 0)),
])
def test_hall_littlewood_t0_is_character(label, lam):
    rs = build_root_system(label)
    hl = hall_littlewood(rs, lam)
    assert hl.at_t0() == lie.irrep_character(rs, lam)


def test_hall_littlewood_monic_and_weyl_invariant():
    rs = build_root_system("a2")
    hl = hall_littlewood(rs, (2, 1))
    assert hl.terms[(2, 1)] == TPoly([1])
    for i in range(rs.rank):
        reflected = {}
        for e, c in hl.terms.items():
            k = rs.reflect(e, i)
            reflected[k] = reflected.get(k, c * 0) + c
        reflected = {k: v for k, v in reflected.items() if v}
        assert reflected == hl.terms


def test_hall_littlewood_tmax_consistent():
    rs = build_root_system("a3")
    full = hall_littlewood(rs, (1, 1, 0))
    cut = hall_littlewood(rs, (1, 1, 0), tmax=2)
    for e, c in cut.terms.items():
        assert c.c == full.terms[e].c[:2][:len(c.c)]


def test_norm_p0_a1_is_frozen_series():
    # oracle: <P0,P0> = 1/(1-tau^4), hand expansion
    a1 = build_root_system("a1")
    n = lie.hl_norm_sq(a1, (0,), 12)
    assert n.terms == {(0,): {(): 1}, (4,): {(): 1}, (8,): {(): 1}, (12,): {(): 1}}


def test_norm_rational_reconstruction():
    a1 = build_root_system("a1")
    num, den = lie.hl_norm_sq_rational(a1, (0,))
    # 1/(1 - x^2) with x = tau^2
    assert [x for x in num] == [1, 0, 0] or list(num) == [1]
    assert list(den)[:3] == [1, 0, -1]


def test_fast_inner_matches_direct_definition():
    for label, lams in (("a1", [(0,), (1,), (2,)]),
                        ("a2", [(0, 0), (1, 0), (1, 1)])):
        rs = build_root_system(label)
        for lam in lams:
            for mu in lams:
                fast = lie.hl_inner(rs, lam, mu, 8)
                direct = lie.hl_inner_direct(rs, lam, mu, 8)
                assert compare_to_order(fast, direct)[0], (label, lam, mu)


def test_orthogonality_grid():
    for label, rank in (("a1", 1), ("a2", 2)):
        rs = build_root_system(label)
        lams = [lam for lam in _levels(rank, 3)]
        for lam in lams:
            for mu in lams:
                inner = lie.hl_inner(rs, lam, mu, 10)
                if lam == mu:
                    assert inner.terms.get((0,), {}).get((), 0) == 1
                else:
                    assert inner.is_zero(), (label, lam, mu)


def _levels(rank, level):
    if rank == 1:
        return [(k,) for k in range(level + 1)]
    return [(a, b) for a in range(level + 1) for b in range(level + 1) if a + b <= level]


def test_principal_specialization():
    from scindex.rings import RingConfig
    a1 = build_root_system("a1")
    ring = RingConfig(("tau",), 6)
    # P_0 at any specialization = 1
    s = lie.principal_specialization(a1, hall_littlewood(a1, (0,)).terms, ring)
    assert s.constant_value() == 1
    # raw character evaluation is exact but Laurent: chi_1 -> tau + tau^{-1}
    chi = lie.irrep_character(a1, (1,))
    s = lie.principal_specialization(a1, chi, ring)
    assert s.terms == {(1,): {(): 1}, (-1,): {(): 1}}
    assert not s.is_regular()


def test_principal_pairing_values():
    # <h_prin, omega_i> = partial sums of the principal h of su(N)
    assert build_root_system("a1").prin_pairing == (1,)
    assert build_root_system("a2").prin_pairing == (2, 2)
    assert build_root_system("a5").prin_pairing == (5, 8, 9, 8, 5)


def test_weyl_resource_bound(monkeypatch):
    monkeypatch.setenv("SCINDEX_MAX_WEYL", "100")
    lie._weyl_elements.cache_clear()
    with pytest.raises(lie.ResourceLimit):
        lie._weyl_elements("d4")
    monkeypatch.delenv("SCINDEX_MAX_WEYL")
    lie._weyl_elements.cache_clear()


def test_random_orbit_sizes_consistent():
    rng = random.Random(1)
    rs = build_root_system("a3")
    for _ in range(25):
        lam = tuple(rng.randrange(0, 3) for _ in range(3))
        assert len(rs.weyl_orbit(lam)) == rs.orbit_size(lam)
