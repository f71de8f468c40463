"""Root systems, Weyl machinery, characters and Hall-Littlewood polynomials.

Weights are integer tuples of fundamental-weight coordinates, so a weight
w corresponds to the torus monomial prod_i z_i^{w_i}.  Roots are stored in
both simple-root and fundamental-weight coordinates.  All types handled
here (A_n, D_4, E_6, E_7, E_8) are simply laced with (alpha,alpha) = 2, so
coroot pairings are plain integers.

Hall-Littlewood polynomials are computed by exact Weyl symmetrization

    P_lam = W_lam(t)^{-1} sum_w w[ z^lam prod_{a>0} (1 - t z^-a)/(1 - z^-a) ]

carried out as one Laurent polynomial over Z[t] divided exactly by
prod_{a>0}(1 - z^-a); coefficients are :class:`TPoly` values (dense
univariate t-polynomials), optionally truncated mod t^kmax when only low
orders are needed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rings import RingConfig, slot_for_group
from .series import TruncatedSeries, constant_term, geom, invert


class ResourceLimit(RuntimeError):
    """A configured enumeration bound (Weyl group, weight system) was hit."""


def _env_bound(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


# --------------------------------------------------------------------------
# t-polynomials


class TPoly:
    """Dense univariate polynomial in t, exact coefficients, optional mod t^kmax."""

    __slots__ = ("c", "kmax")

    def __init__(self, coeffs, kmax=None):
        c = list(coeffs)
        if kmax is not None:
            c = c[:kmax]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)
        self.kmax = kmax

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"TPoly({list(self.c)})"

    def _k(self, other):
        if self.kmax is None:
            return other.kmax
        if other.kmax is None:
            return self.kmax
        return min(self.kmax, other.kmax)

    def __add__(self, other):
        a, b = self.c, other.c
        n = max(len(a), len(b))
        return TPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)], self._k(other))

    def __neg__(self):
        return TPoly([-x for x in self.c], self.kmax)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly([x * other for x in self.c], self.kmax)
        k = self._k(other)
        n = len(self.c) + len(other.c) - 1
        if k is not None:
            n = min(n, k)
        out = [0] * max(n, 0)
        for i, x in enumerate(self.c):
            if i >= len(out):
                break
            if not x:
                continue
            for j, y in enumerate(other.c):
                if i + j >= len(out):
                    break
                out[i + j] += x * y
        return TPoly(out, k)

    __rmul__ = __mul__

    def divide_exact(self, other: "TPoly") -> "TPoly":
        """Exact division (raises if not divisible up to the truncation)."""
        if not other:
            raise ZeroDivisionError
        a = list(self.c)
        b = other.c
        k = self._k(other)
        if not a:
            return TPoly([], k)
        lead = b[0]
        if not lead:
            raise ValueError("divisor has t | leading coefficient")
        n = len(a) if k is None else max(len(a), k)
        out = []
        for i in range(n):
            cur = a[i] if i < len(a) else 0
            v = Fraction(cur, 1) / lead if lead != 1 else cur
            out.append(v)
            for j in range(1, len(b)):
                if i + j < n:
                    pass
                if i + j >= len(a):
                    a.extend([0] * (i + j + 1 - len(a)))
                a[i + j] -= v * b[j]
        if k is None:
            tail = a[len(out):]
        else:
            out = out[:k]
            tail = a[k:] if False else []
        if any(tail):
            raise ValueError("not exactly divisible")
        out = [x.numerator if isinstance(x, Fraction) and x.denominator == 1 else x
               for x in out]
        return TPoly(out, k)

    @staticmethod
    def const(v, kmax=None):
        return TPoly([v], kmax)

    @staticmethod
    def t_power(k, kmax=None):
        return TPoly([0] * k + [1], kmax)


# --------------------------------------------------------------------------
# Cartan data


def _cartan(label: str):
    label = label.lower()
    if label.startswith("a"):
        n = int(label[1:])
        if not 1 <= n <= 8:
            raise ValueError(f"unsupported root system {label!r} (A1..A8)")
        A = [[0] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 2
            if i + 1 < n:
                A[i][i + 1] = A[i + 1][i] = -1
        return label, A
    if label in ("d4", "so8"):
        A = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
        return "d4", A
    if label in ("e6", "e7", "e8"):
        n = int(label[1])
        # Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to 4
        chain = [1, 3, 4, 5, 6, 7, 8][: n - 1]
        A = [[0] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = 2
        for a, b in zip(chain, chain[1:]):
            A[a - 1][b - 1] = A[b - 1][a - 1] = -1
        A[1][3] = A[3][1] = -1
        return label, A
    raise ValueError(f"unsupported root system {label!r}")


def _invert_matrix(A):
    """Exact inverse of an integer matrix, as Fraction rows."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        d = M[col][col]
        M[col] = [x / d for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


class RootSystem:
    """Cartan data plus derived structure for one simple, simply-laced group."""

    def __init__(self, label: str):
        self.label, cartan = _cartan(label)
        self.rank = len(cartan)
        self.cartan = tuple(tuple(row) for row in cartan)
        self._build_roots()
        self.inv_cartan = tuple(tuple(row) for row in _invert_matrix(cartan))
        self.rho = (1,) * self.rank
        self._build_exponents()
        # pairing of fundamental weights with the principal sl2's h
        # (alpha_i(h) = 2 for every simple root)
        y = _solve_int(self.cartan, [2] * self.rank, transpose=True)
        self.prin_pairing = tuple(y)

    def _build_roots(self):
        rank = self.rank
        simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        roots = {s: None for s in simple}
        layer = list(simple)
        while layer:
            new = []
            for beta in layer:
                fw = self._fw_of_simple_coords(beta)
                for i in range(rank):
                    # root string: beta + alpha_i is a root iff p > 0 where
                    # p = q - <beta, alpha_i^vee>, q = max{k : beta - k alpha_i is a root}
                    q = 0
                    b = list(beta)
                    while True:
                        b[i] -= 1
                        if tuple(b) in roots:
                            q += 1
                        else:
                            break
                    if q - fw[i] > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in roots:
                            roots[up] = None
                            new.append(up)
            layer = new
        pos = sorted(roots, key=lambda r: (sum(r), r))
        self.pos_roots = tuple(pos)
        self.pos_roots_fw = tuple(self._fw_of_simple_coords(r) for r in pos)
        self.n_pos = len(pos)
        self.dim = self.rank + 2 * self.n_pos
        self.highest_root_fw = self.pos_roots_fw[
            max(range(self.n_pos), key=lambda i: sum(self.pos_roots[i]))]
        self._root_sign_index = {}
        for i, fw in enumerate(self.pos_roots_fw):
            self._root_sign_index[fw] = (1, i)
            self._root_sign_index[tuple(-x for x in fw)] = (-1, i)

    def _fw_of_simple_coords(self, r):
        A = self.cartan
        return tuple(sum(A[i][j] * r[j] for j in range(self.rank))
                     for i in range(self.rank))

    def _build_exponents(self):
        heights = {}
        for r in self.pos_roots:
            h = sum(r)
            heights[h] = heights.get(h, 0) + 1
        # conjugate of the height partition
        maxh = max(heights)
        part = [heights.get(h, 0) for h in range(1, maxh + 1)]
        exps = []
        for i in range(len(part)):
            exps.extend([i + 1] * (part[i] - (part[i + 1] if i + 1 < len(part) else 0)))
        self.exponents = tuple(sorted(exps))
        order = 1
        for d in self.exponents:
            order *= d + 1
        self.weyl_order = order

    # -- basic weight operations ------------------------------------------

    def ip(self, x, y) -> Fraction:
        """Inner product of weights (fw coords), (alpha,alpha)=2 normalization."""
        inv = self.inv_cartan
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                total += xi * sum(inv[i][j] * y[j] for j in range(self.rank))
        return total

    def coroot_pairing(self, mu, alpha_simple_coords) -> int:
        """<mu, alpha^vee> for mu in fw coords, alpha in simple-root coords."""
        return sum(r * m for r, m in zip(alpha_simple_coords, mu))

    def reflect(self, x, i):
        """Simple reflection s_i on fw coordinates."""
        c = x[i]
        if not c:
            return tuple(x)
        A = self.cartan
        return tuple(x[j] - c * A[j][i] for j in range(self.rank))

    def dominant_rep(self, x):
        x = tuple(x)
        while True:
            for i in range(self.rank):
                if x[i] < 0:
                    x = self.reflect(x, i)
                    break
            else:
                return x

    def weyl_orbit(self, x):
        x = self.dominant_rep(x)
        seen = {x}
        layer = [x]
        while layer:
            new = []
            for y in layer:
                for i in range(self.rank):
                    z = self.reflect(y, i)
                    if z not in seen:
                        seen.add(z)
                        new.append(z)
            layer = new
        return seen

    def parabolic_order(self, zeros) -> int:
        """|W_J| for J = the given set of simple-root indices."""
        J = sorted(zeros)
        if not J:
            return 1
        sub = [[self.cartan[i][j] for j in J] for i in J]
        return _weyl_order_of_cartan(sub)

    def stabilizer_order(self, mu) -> int:
        return self.parabolic_order([i for i, x in enumerate(mu) if x == 0])

    def orbit_size(self, mu) -> int:
        return self.weyl_order // self.stabilizer_order(self.dominant_rep(mu))


def _weyl_order_of_cartan(sub) -> int:
    """Weyl order of an arbitrary (possibly reducible) simply-laced Cartan matrix."""
    n = len(sub)
    # split into connected components and multiply |W| of each
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if not seen[j] and sub[i][j]:
                    seen[j] = True
                    comp.append(j)
                    stack.append(j)
        comp_matrix = [[sub[i][j] for j in comp] for i in comp]
        order *= _count_weyl(comp_matrix)
    return order


def _count_weyl(cartan) -> int:
    """|W| of a connected simply-laced Cartan matrix via its positive roots."""
    rank = len(cartan)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)

    def fw(r):
        return tuple(sum(cartan[i][j] * r[j] for j in range(rank)) for i in range(rank))

    while layer:
        new = []
        for beta in layer:
            pair = fw(beta)
            for i in range(rank):
                q = 0
                b = list(beta)
                while True:
                    b[i] -= 1
                    if tuple(b) in roots:
                        q += 1
                    else:
                        break
                if q - pair[i] > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        new.append(up)
        layer = new
    heights = {}
    for r in roots:
        h = sum(r)
        heights[h] = heights.get(h, 0) + 1
    maxh = max(heights)
    part = [heights.get(h, 0) for h in range(1, maxh + 1)]
    exps = []
    for i in range(len(part)):
        exps.extend([i + 1] * (part[i] - (part[i + 1] if i + 1 < len(part) else 0)))
    order = 1
    for d in exps:
        order *= d + 1
    return order


def _solve_int(A, rhs, transpose=False):
    """Exact solve of A x = rhs (or A^T x = rhs); asserts an integer solution."""
    n = len(A)
    M = [[Fraction(A[j][i] if transpose else A[i][j]) for j in range(n)]
         + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        d = M[col][col]
        M[col] = [x / d for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    xs = [M[i][n] for i in range(n)]
    assert all(x.denominator == 1 for x in xs), "expected an integral solution"
    return [int(x) for x in xs]


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootSystem:
    return RootSystem(label)


# --------------------------------------------------------------------------
# Weyl group enumeration (for Hall-Littlewood symmetrization)


@lru_cache(maxsize=None)
def _weyl_elements(label: str):
    """All Weyl elements as fw-coordinate matrices, with length and the
    shift sum_{beta in N(w)} beta and the images of all positive roots."""
    rs = build_root_system(label)
    bound = _env_bound("SCINDEX_MAX_WEYL", 50000)
    if rs.weyl_order > bound:
        raise ResourceLimit(
            f"|W({label})| = {rs.weyl_order} exceeds SCINDEX_MAX_WEYL = {bound}")
    rank = rs.rank
    ident = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))

    def refl_matrix(i):
        return tuple(tuple(int(r == c) - (rs.cartan[r][i] if c == i else 0)
                           for c in range(rank)) for r in range(rank))

    gens = [refl_matrix(i) for i in range(rank)]

    def matmul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(rank))
                           for j in range(rank)) for i in range(rank))

    seen = {ident}
    layer = [ident]
    elements = [ident]
    while layer:
        new = []
        for m in layer:
            for g in gens:
                nm = matmul(g, m)
                if nm not in seen:
                    seen.add(nm)
                    new.append(nm)
                    elements.append(nm)
        layer = new
    assert len(elements) == rs.weyl_order
    out = []
    for m in elements:
        images = []
        length = 0
        shift = (0,) * rank
        for fw in rs.pos_roots_fw:
            img = tuple(sum(m[i][j] * fw[j] for j in range(rank)) for i in range(rank))
            sign, _ = rs._root_sign_index[img]
            images.append(img)
            if sign < 0:
                length += 1
                shift = tuple(s - x for s, x in zip(shift, img))
        out.append((m, length, shift, tuple(images)))
    return tuple(out)


def _apply(m, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


# --------------------------------------------------------------------------
# Characters


def weyl_dim(rs: RootSystem, lam) -> int:
    """Weyl dimension formula, exact."""
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError("weight must be dominant")
    num = Fraction(1)
    lam_rho = tuple(x + 1 for x in lam)
    for alpha in rs.pos_roots:
        num *= Fraction(rs.coroot_pairing(lam_rho, alpha),
                        rs.coroot_pairing(rs.rho, alpha))
    assert num.denominator == 1
    return int(num)


def weight_multiplicities(rs: RootSystem, lam) -> dict:
    """Dominant weights of V_lam with Freudenthal multiplicities."""
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError("weight must be dominant")
    dom = {lam}
    frontier = [lam]
    while frontier:
        new = []
        for mu in frontier:
            for fw in rs.pos_roots_fw:
                nu = tuple(a - b for a, b in zip(mu, fw))
                if all(x >= 0 for x in nu) and nu not in dom:
                    dom.add(nu)
                    new.append(nu)
        frontier = new

    def level(mu):
        # height of lam - mu in simple-root coordinates
        diff = tuple(a - b for a, b in zip(lam, mu))
        inv = rs.inv_cartan
        s = sum(sum(inv[i][j] * diff[j] for j in range(rs.rank)) for i in range(rs.rank))
        assert s.denominator == 1
        return int(s)

    ordered = sorted(dom, key=level)
    mults: dict[tuple, int] = {}
    lam_rho = tuple(x + 1 for x in lam)
    c_lam = rs.ip(lam_rho, lam_rho)
    for mu in ordered:
        if mu == lam:
            mults[mu] = 1
            continue
        mu_rho = tuple(x + 1 for x in mu)
        denom = c_lam - rs.ip(mu_rho, mu_rho)
        total = 0
        lev = level(mu)
        for alpha, alpha_fw in zip(rs.pos_roots, rs.pos_roots_fw):
            # weights mu + k alpha lie under lam only while k*ht(alpha) <= level(mu)
            for k in range(1, lev // sum(alpha) + 1):
                nu = tuple(a + k * b for a, b in zip(mu, alpha_fw))
                m = mults.get(rs.dominant_rep(nu), 0)
                if m:
                    total += m * rs.coroot_pairing(nu, alpha)
        val = Fraction(2 * total) / denom
        assert val.denominator == 1 and val >= 0
        if val:
            mults[mu] = int(val)
    mults = {mu: m for mu, m in mults.items() if m}
    total_dim = sum(m * rs.orbit_size(mu) for mu, m in mults.items())
    expected = weyl_dim(rs, lam)
    assert total_dim == expected, f"weight system incomplete: {total_dim} != {expected}"
    return mults


def irrep_character(rs: RootSystem, lam, max_weights: int | None = None) -> dict:
    """Full character as {fw exponent tuple: multiplicity}."""
    bound = max_weights or _env_bound("SCINDEX_MAX_WEIGHTS", 500000)
    if weyl_dim(rs, lam) > bound:
        raise ResourceLimit(f"dim V_{tuple(lam)} = {weyl_dim(rs, lam)} exceeds "
                            f"the weight-system bound {bound}")
    char: dict[tuple, int] = {}
    for mu, m in weight_multiplicities(rs, lam).items():
        for w in rs.weyl_orbit(mu):
            char[w] = char.get(w, 0) + m
    return char


# --------------------------------------------------------------------------
# Hall-Littlewood polynomials


@dataclass
class HLPolynomial:
    """Monic Hall-Littlewood polynomial P_lam(z; t) of the given type."""

    label: str
    lam: tuple
    terms: dict          # fw exponent tuple -> TPoly in t
    tmax: int | None     # None: exact in t; else computed mod t^tmax

    def at_t0(self) -> dict:
        return {e: p.c[0] for e, p in self.terms.items() if p.c and p.c[0]}


def _poincare_stabilizer(label: str, lam) -> TPoly:
    """W_lam(t) = sum over the stabilizer of lam of t^length."""
    rs = build_root_system(label)
    coeffs = {}
    for m, length, _, _ in _weyl_elements(label):
        if _apply(m, lam) == lam:
            coeffs[length] = coeffs.get(length, 0) + 1
    out = [0] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        out[k] = v
    return TPoly(out)


_hl_cache: dict = {}


def hall_littlewood(rs: RootSystem, lam, tmax: int | None = None) -> HLPolynomial:
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError("weight must be dominant")
    key = (rs.label, lam, tmax)
    cached = _hl_cache.get(key)
    if cached is None and tmax is not None:
        exact = _hl_cache.get((rs.label, lam, None))
        if exact is not None:
            cached = HLPolynomial(rs.label, lam,
                                  {e: TPoly(c.c, tmax) for e, c in exact.terms.items()},
                                  tmax)
            cached.terms = {e: c for e, c in cached.terms.items() if c}
            _hl_cache[key] = cached
    if cached is not None:
        return cached
    result = _hall_littlewood_raw(rs, lam, tmax)
    _hl_cache[key] = result
    return result


def _hall_littlewood_raw(rs: RootSystem, lam, tmax: int | None) -> HLPolynomial:
    rank = rs.rank
    elements = _weyl_elements(rs.label)
    minus_t = TPoly([0, -1], tmax)
    num: dict[tuple, TPoly] = {}
    for m, length, shift, images in elements:
        base = tuple(a - b for a, b in zip(_apply(m, lam), shift))
        sign = -1 if length % 2 else 1
        poly = {base: TPoly([sign], tmax)}
        for img in images:
            # multiply by (1 - t z^{-img})
            out = dict(poly)
            for e, c in poly.items():
                e2 = tuple(a - b for a, b in zip(e, img))
                v = out.get(e2)
                ct = c * minus_t
                out[e2] = ct if v is None else v + ct
            poly = {e: c for e, c in out.items() if c}
        for e, c in poly.items():
            v = num.get(e)
            num[e] = c if v is None else v + c
    num = {e: c for e, c in num.items() if c}
    # exact division by prod_{beta>0} (1 - z^{-beta})
    keyvec = _height_key_vector(rs)

    def key(e):
        return (sum(a * b for a, b in zip(keyvec, e)), e)

    for beta_fw in rs.pos_roots_fw:
        num = _divide_one_minus_zneg(num, beta_fw, key)
    wl = _poincare_stabilizer(rs.label, lam)
    if tmax is not None:
        wl = TPoly(wl.c, tmax)
    result = {e: c.divide_exact(wl) for e, c in num.items()}
    result = {e: c for e, c in result.items() if c}
    return HLPolynomial(rs.label, lam, result, tmax)


def _height_key_vector(rs: RootSystem):
    """Integer functional on fw coords, positive on every positive root."""
    inv = rs.inv_cartan
    col = [sum(inv[i][j] for i in range(rs.rank)) for j in range(rs.rank)]
    denom = 1
    for x in col:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    return tuple(int(x * denom) for x in col)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divide_one_minus_zneg(poly: dict, beta_fw, key) -> dict:
    """Exact division of a Laurent polynomial by (1 - z^{-beta})."""
    work = dict(poly)
    out: dict[tuple, TPoly] = {}
    if not work:
        return out
    floor = min(key(e)[0] for e in work) - sum(abs(b) for b in beta_fw) * (len(work) + 1)
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        if not c:
            continue
        out[e] = c
        e2 = tuple(a - b for a, b in zip(e, beta_fw))
        if key(e2)[0] < floor:
            raise ValueError("Laurent polynomial not divisible by 1 - z^-beta")
        v = work.get(e2)
        nv = c if v is None else v + c
        if nv:
            work[e2] = nv
        elif v is not None:
            del work[e2]
    return out


# --------------------------------------------------------------------------
# The Hall-Littlewood inner product


def hl_ring(order: int, slots=()) -> RingConfig:
    return RingConfig(("tau",), order, slots)


def hl_measure(rs: RootSystem, ring: RingConfig, slot: str) -> TruncatedSeries:
    """(1/(1-tau^2))^r prod_alpha (1-z^alpha)/(1-tau^2 z^alpha), as a series."""
    rng = ring.slot_range(slot)
    order = ring.truncation_order

    def fkey(weight_fw, sign=1):
        e = [0] * ring.frank
        for i, w in zip(rng, weight_fw):
            e[i] = sign * w
        return tuple(e)

    acc = geom(ring, (2,), None, order).pow(rs.rank)
    for fw in rs.pos_roots_fw:
        for sign in (1, -1):
            f = fkey(fw, sign)
            numerator = TruncatedSeries.one(ring, order) - TruncatedSeries.monomial(ring, (0,), f)
            acc = (acc * numerator).truncated(order)
            acc = (acc * geom(ring, (2,), f, order)).truncated(order)
    return acc


def hl_poly_to_series(hl_terms: dict, ring: RingConfig, slot: str,
                      invert_z: bool = False) -> TruncatedSeries:
    """Embed a character (int coefficients) or Hall-Littlewood polynomial
    (TPoly coefficients, t = sqrt_var^2) into a series ring."""
    rng = ring.slot_range(slot)
    order = ring.truncation_order
    terms: dict = {}
    for e, tp in hl_terms.items():
        f = [0] * ring.frank
        for i, w in zip(rng, e):
            f[i] = -w if invert_z else w
        f = tuple(f)
        pairs = enumerate(tp.c) if isinstance(tp, TPoly) else [(0, tp)]
        for k, c in pairs:
            if not c or 2 * k > order:
                continue
            g = (2 * k,)
            terms.setdefault(g, {})[f] = terms.get(g, {}).get(f, 0) + c
    s = TruncatedSeries(ring, {}, order)
    for g, p in terms.items():
        p = {e: c for e, c in p.items() if c}
        if p:
            s.terms[g] = p
    return s


def hl_inner_direct(rs: RootSystem, lam, mu, order: int) -> TruncatedSeries:
    """<P_lam, P_mu> straight from the definition: the full Weyl-invariant
    measure against P_lam(z) P_mu(1/z), constant term, 1/|W|.  Exponential
    in rank; kept as the oracle for the fast route below."""
    ring = hl_ring(order, (slot_for_group("z", rs.label, rs.rank),))
    tmax = order // 2 + 1   # t = tau^2: higher t-parts cannot reach the order
    pl = hall_littlewood(rs, lam, tmax)
    pm = pl if mu == lam else hall_littlewood(rs, mu, tmax)
    a = hl_poly_to_series(pl.terms, ring, "z")
    b = hl_poly_to_series(pm.terms, ring, "z", invert_z=True)
    prod = (a * b * hl_measure(rs, ring, "z")).truncated(order)
    ct = constant_term(prod, "z")
    return ct.scaled(Fraction(1, rs.weyl_order))


def hl_inner(rs: RootSystem, lam, mu, order: int) -> TruncatedSeries:
    """<P_lam, P_mu> under the Hall-Littlewood measure, as a tau-series.

    Unfolds the symmetrization of P_lam against the Weyl-invariant rest of
    the integrand, collapsing the |W| images onto one chamber:

        <P_lam, P_mu> = W_lam(t)^{-1} (1-t)^{-r}
                        CT[ z^lam P_mu(1/z) prod_{a>0} (1-z^a)/(1-t z^a) ]
    """
    lam, mu = tuple(lam), tuple(mu)
    ring = hl_ring(order, (slot_for_group("z", rs.label, rs.rank),))
    tmax = order // 2 + 1
    pm = hall_littlewood(rs, mu, tmax)
    acc = TruncatedSeries.monomial(
        ring, (0,), _fkey_for(ring, "z", lam), order=order)
    acc = (acc * geom(ring, (2,), None, order).pow(rs.rank)).truncated(order)
    for fw in rs.pos_roots_fw:
        f = _fkey_for(ring, "z", fw)
        acc = (acc - acc.mul_monomial((0,), f).truncated(order)).truncated(order)
        acc = (acc * geom(ring, (2,), f, order)).truncated(order)
    # contract against P_mu(1/z): pick A[e] * coeff of z^{e} in P_mu
    out: dict = {}
    for g, p in acc.terms.items():
        for e, c in p.items():
            tp = pm.terms.get(_slot_exps(ring, "z", e))
            if tp is None:
                continue
            for k, v in enumerate(tp.c):
                if v and g[0] + 2 * k <= order:
                    key = (g[0] + 2 * k,)
                    out[key] = out.get(key, 0) + c * v
    ct = TruncatedSeries(hl_ring(order), {g: {(): c} for g, c in out.items() if c}, order)
    wl = _poincare_stabilizer(rs.label, lam)
    wl_series = TruncatedSeries(hl_ring(order),
                                {(2 * k,): {(): c} for k, c in enumerate(wl.c)
                                 if c and 2 * k <= order}, order)
    return (ct * invert(wl_series)).truncated(order)


def _fkey_for(ring: RingConfig, slot: str, weight_fw) -> tuple:
    e = [0] * ring.frank
    for i, w in zip(ring.slot_range(slot), weight_fw):
        e[i] = w
    return tuple(e)


def _slot_exps(ring: RingConfig, slot: str, fkey) -> tuple:
    return tuple(fkey[i] for i in ring.slot_range(slot))


def hl_norm_sq(rs: RootSystem, lam, order: int) -> TruncatedSeries:
    """<P_lam, P_lam>; N_lam^2 is the inverse of this series."""
    return hl_inner(rs, lam, lam, order)


def hl_norm_sq_rational(rs: RootSystem, lam, max_deg: int = 12):
    """Reconstruct <P_lam,P_lam> as an exact rational function of x = tau^2.

    Returns (numerator, denominator) coefficient tuples in x, verified
    against the series to 2*(max_deg+2) extra orders.
    """
    for d in range(1, max_deg + 1):
        order = 4 * d + 8
        series = hl_norm_sq(rs, lam, order)
        coeffs = _tau_series_coeffs(series, order)
        if any(coeffs[1::2]):
            raise ValueError("norm series has odd tau powers")
        x_coeffs = coeffs[::2]
        rec = _pade(x_coeffs, d, d)
        if rec is not None:
            num, den = rec
            if _check_pade(x_coeffs, num, den):
                return num, den
    raise ValueError("no small rational reconstruction found")


def _tau_series_coeffs(s: TruncatedSeries, order: int):
    """Coefficient list of a flavor-free single-grading-variable series."""
    assert s.ring.frank == 0 and s.ring.grank == 1
    out = [0] * (order + 1)
    for g, p in s.terms.items():
        out[g[0]] = p.get((), 0)
    return out


def _pade(coeffs, dn, dd):
    """Find A/B with deg A<=dn, deg B<=dd, B(0)=1, A = B*c mod x^{len}."""
    n = len(coeffs)
    if n < dn + dd + 2:
        return None
    # unknowns: a_0..a_dn, b_1..b_dd ; equations: coefficient matching
    rows = []
    rhs = []
    for k in range(n):
        row = [0] * (dn + 1 + dd)
        if k <= dn:
            row[k] = 1
        for j in range(1, dd + 1):
            if k - j >= 0:
                row[dn + j] = -coeffs[k - j]
        rows.append([Fraction(x) for x in row])
        rhs.append(Fraction(coeffs[k]))
    sol = _lstsq_exact(rows, rhs)
    if sol is None:
        return None
    num = tuple(sol[: dn + 1])
    den = (Fraction(1),) + tuple(sol[dn + 1:])
    return num, den


def _check_pade(coeffs, num, den):
    n = len(coeffs)
    for k in range(n):
        lhs = num[k] if k < len(num) else Fraction(0)
        rhs = sum(den[j] * coeffs[k - j] for j in range(min(k + 1, len(den))))
        if lhs != rhs:
            return False
    return True


def _lstsq_exact(rows, rhs):
    """Solve an overdetermined exact linear system; None if inconsistent."""
    m, n = len(rows), len(rows[0])
    aug = [row + [b] for row, b in zip(rows, rhs)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        d = aug[r][c]
        aug[r] = [x / d for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    for i in range(r, m):
        if aug[i][n]:
            return None
    sol = [Fraction(0)] * n
    row_i = 0
    for c in range(n):
        if row_i < r and aug[row_i][c] == 1 and all(
                aug[k][c] == 0 for k in range(m) if k != row_i):
            sol[c] = aug[row_i][n]
            row_i += 1
    return sol


# --------------------------------------------------------------------------
# Principal specialization


def principal_exponent(rs: RootSystem, weight_fw) -> int:
    """<h_principal, w>: the square-root-variable exponent of the slicing
    point substitution z^w -> (t^{1/2})^{<h,w>}."""
    return sum(a * b for a, b in zip(rs.prin_pairing, weight_fw))


def principal_specialization(rs: RootSystem, poly: dict, ring: RingConfig,
                             sqrt_var: str | None = None) -> TruncatedSeries:
    """Evaluate a Weyl-invariant flavor polynomial at the principal point.

    ``poly`` maps fw exponent tuples to int or TPoly coefficients.  The
    result is exact but generally Laurent (negative powers of the grading
    variable); callers combine it with K-factors before inverting.
    """
    if sqrt_var is None:
        sqrt_var = {"full": "s", "macdonald": "s", "schur": "u", "hl": "tau"}[
            _limit_sig(ring)]
    gi = ring.grading_index(sqrt_var)
    f0 = (0,) * ring.frank
    terms: dict = {}
    for e, c in poly.items():
        base = principal_exponent(rs, e)
        # t = sqrt_var^2 in every limit ring
        pairs = ([(base + 2 * k, v) for k, v in enumerate(c.c) if v]
                 if isinstance(c, TPoly) else ([(base, c)] if c else []))
        for expo, v in pairs:
            g = [0] * ring.grank
            g[gi] = expo
            g = tuple(g)
            acc = terms.setdefault(g, {})
            acc[f0] = acc.get(f0, 0) + v
    terms = {g: p for g, p in terms.items() if p[(0,) * ring.frank]}
    s = TruncatedSeries(ring, terms, ring.truncation_order)
    # exact polynomial evaluation: complete everywhere unless the t-parts
    # were truncated, in which case only up to (min degree) + 2 kmax
    tmaxes = [c.kmax for c in poly.values()
              if isinstance(c, TPoly) and c.kmax is not None]
    if not tmaxes:
        s.order = 10 ** 9
    else:
        s.order = min((ring.degree(g) for g in terms), default=0) + 2 * min(tmaxes) - 1
    return s


def _limit_sig(ring: RingConfig) -> str:
    sig = ring.grading_vars
    return {("p", "q", "s"): "full", ("q", "s"): "macdonald",
            ("u",): "schur", ("tau",): "hl"}[sig]
