"""Gamma-type infinite products and their limit degenerations.

The full ring (p,q,s) carries the genuine elliptic Gamma

    Gamma(x) = prod_{m,n>=0} (1 - x^{-1} p^{m+1} q^{n+1}) / (1 - x p^m q^n),

while the (q,s), (u) and (tau) rings use its p=0, t=q and p=q=0
degenerations.  Only finitely many factors differ from 1 below a given
weighted degree; poly factors of negative degree (they appear for
arguments like t^2) are handled by computing the product with extra
working headroom, so the returned series is still exact to the requested
order.
"""

from __future__ import annotations

from .rings import RingConfig
from .series import TruncatedSeries, geom, one_minus


def limit_of_ring(ring: RingConfig) -> str:
    sig = ring.grading_vars
    if sig == ("p", "q", "s"):
        return "full"
    if sig == ("q", "s"):
        return "macdonald"
    if sig == ("u",):
        return "schur"
    if sig == ("tau",):
        return "hl"
    raise ValueError(f"ring {ring!r} is not one of the four limit rings")


def _gv(ring: RingConfig, **exps) -> tuple:
    g = [0] * ring.grank
    for name, e in exps.items():
        g[ring.grading_index(name)] += e
    return tuple(g)


def _shift(gkey, delta):
    return tuple(x + y for x, y in zip(gkey, delta))


def _neg(key):
    return tuple(-x for x in key)


def _product(ring: RingConfig, factors, order: int) -> TruncatedSeries:
    """Multiply ('geom'|'poly', gkey, fkey) factors exactly to ``order``."""
    headroom = sum(-ring.degree(g) for kind, g, f in factors
                   if kind == "poly" and ring.degree(g) < 0)
    work = order + headroom
    acc = TruncatedSeries.one(ring, work)
    for kind, g, f in factors:
        factor = geom(ring, g, f, work) if kind == "geom" else one_minus(ring, g, f, work)
        acc = (acc * factor).truncated(work)
    return acc.truncated(order)


def _full_factors(ring: RingConfig, gkey, fkey, inverse: bool, order: int):
    """Factor list for the elliptic Gamma of a general monomial argument.

    Factors come in two families indexed by (m, n) >= 0: the geometric
    denominators on x p^m q^n and the binomial numerators on
    x^{-1} p^{m+1} q^{n+1} (roles swap for the inverse).  Poly factors of
    negative degree enlarge the enumeration bound by the total headroom,
    since their terms can pull high-degree products back below ``order``.
    """
    k = ring.degree(gkey)
    geom_deg = (lambda m, n: k + 2 * m + 2 * n) if not inverse \
        else (lambda m, n: 4 - k + 2 * m + 2 * n)
    poly_deg = (lambda m, n: 4 - k + 2 * m + 2 * n) if not inverse \
        else (lambda m, n: k + 2 * m + 2 * n)
    if not inverse and k < 1:
        raise ValueError("elliptic Gamma needs an argument of degree >= 1 "
                         "(the (0,0) factor has a pole); use the inverse for roots")
    if geom_deg(0, 0) < 1:
        raise ValueError(f"1/Gamma of this degree-{k} argument is not a truncatable "
                         "series in this ring (its geometric tail has degree < 1)")
    head = 0
    m = 0
    while poly_deg(m, 0) < 0:
        n = 0
        while poly_deg(m, n) < 0:
            head += -poly_deg(m, n)
            n += 1
        m += 1
    bound = order + head

    def mono(base_g, base_f, m, n):
        return _shift(base_g, _gv(ring, p=m, q=n)), base_f

    factors = []
    if inverse:
        poly_base, geom_base = (gkey, fkey), (_neg(gkey), _neg(fkey))
        poly_extra, geom_extra = 0, 1
    else:
        poly_base, geom_base = (_neg(gkey), _neg(fkey)), (gkey, fkey)
        poly_extra, geom_extra = 1, 0
    m = 0
    while poly_deg(m, 0) <= bound:
        n = 0
        while poly_deg(m, n) <= bound:
            g, f = mono(*poly_base, m + poly_extra, n + poly_extra)
            factors.append(("poly", g, f))
            n += 1
        m += 1
    m = 0
    while geom_deg(m, 0) <= bound:
        n = 0
        while geom_deg(m, n) <= bound:
            g, f = mono(*geom_base, m + geom_extra, n + geom_extra)
            factors.append(("geom", g, f))
            n += 1
        m += 1
    return factors


def elliptic_gamma(ring: RingConfig, gkey, fkey=None,
                   order: int | None = None) -> TruncatedSeries:
    """Gamma_{p,q} of a monomial argument in the full (p,q,s) ring."""
    if limit_of_ring(ring) != "full":
        raise ValueError("elliptic_gamma lives in the full (p,q,s) ring")
    order = ring.truncation_order if order is None else order
    gkey = tuple(gkey)
    fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
    return _product(ring, _full_factors(ring, gkey, fkey, False, order), order)


def inv_elliptic_gamma(ring: RingConfig, gkey=None, fkey=None,
                       order: int | None = None) -> TruncatedSeries:
    """1/Gamma_{p,q} of a monomial; for a pure flavor root z^alpha this is
    the regularized inverse whose degree-0 part is (1 - z^alpha)."""
    if limit_of_ring(ring) != "full":
        raise ValueError("inv_elliptic_gamma lives in the full (p,q,s) ring")
    order = ring.truncation_order if order is None else order
    gkey = (0,) * ring.grank if gkey is None else tuple(gkey)
    fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
    return _product(ring, _full_factors(ring, gkey, fkey, True, order), order)


def gamma_tpow(ring: RingConfig, k: int, fkey=None, inverse: bool = False,
               order: int | None = None) -> TruncatedSeries:
    """Gamma(t^{k/2} z^w) in the ring's limit (k counts square-root units).

    full:      elliptic Gamma of s^k z^w
    macdonald: prod_n 1/(1 - s^k z^w q^n)
    schur:     prod_n 1/(1 - u^{k+2n} z^w)
    hl:        1/(1 - tau^k z^w)
    """
    order = ring.truncation_order if order is None else order
    fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
    limit = limit_of_ring(ring)
    if limit == "full":
        g = _gv(ring, s=k)
        if inverse:
            return inv_elliptic_gamma(ring, g, fkey, order)
        return elliptic_gamma(ring, g, fkey, order)
    if k < 1 and not inverse:
        raise ValueError("Gamma(t^{k/2} z^w) with k < 1 has a pole at the n=0 factor")
    kind = "poly" if inverse else "geom"
    factors = []
    if limit == "macdonald":
        n = 0
        while k + 2 * n <= order:
            factors.append((kind, _gv(ring, s=k, q=n), fkey))
            n += 1
    elif limit == "schur":
        n = 0
        while k + 2 * n <= order:
            factors.append((kind, _gv(ring, u=k + 2 * n), fkey))
            n += 1
    elif limit == "hl":
        if k <= order:
            factors.append((kind, _gv(ring, tau=k), fkey))
    return _product(ring, factors, order)


def gamma_prime_one_inv(ring: RingConfig, order: int | None = None) -> TruncatedSeries:
    """The regularized 1/Gamma'_{p,q}(1) = (p;p)_inf (q;q)_inf.

    Gamma has a first-order zero structure at x=1 only after removing the
    (0,0) factor; defining Gamma'(1) as lim_{x->1}(1-x)Gamma(x) gives
    1/((p;p)(q;q)), the unique normalization under which the p=0 gauging
    measure matches the Macdonald inner product (acceptance AC-1).
    """
    order = ring.truncation_order if order is None else order
    limit = limit_of_ring(ring)
    factors = []
    if limit == "full":
        for var in ("p", "q"):
            j = 1
            while 2 * j <= order:
                factors.append(("poly", _gv(ring, **{var: j}), None))
                j += 1
    elif limit == "macdonald":
        j = 1
        while 2 * j <= order:
            factors.append(("poly", _gv(ring, q=j), None))
            j += 1
    elif limit == "schur":
        j = 1
        while 2 * j <= order:
            factors.append(("poly", _gv(ring, u=2 * j), None))
            j += 1
    # hl: both nomes are 0, the product is empty
    f0 = (0,) * ring.frank
    factors = [(kind, g, f0) for kind, g, _ in factors]
    return _product(ring, factors, order)


def cartan_prefactor(ring: RingConfig, order: int | None = None) -> TruncatedSeries:
    """Per-Cartan gauging prefactor 1/(Gamma(t) Gamma'(1))."""
    order = ring.truncation_order if order is None else order
    return (gamma_prime_one_inv(ring, order)
            * gamma_tpow(ring, 2, inverse=True, order=order)).truncated(order)
