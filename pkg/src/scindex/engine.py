"""Index functor calculus.

Evaluates theory expressions (free hypermultiplets, products, gauging,
nilpotent slicing, n-punctured-sphere building blocks) to exact truncated
series in one of four limits:

    full       (p, q, s)   s^2 = t        the elliptic superconformal index
    macdonald  (q, s)      p = 0
    schur      (u)         p = 0, t = q   VOA character
    hl         (tau)       p = q = 0, t = tau^2   Higgs-branch character

The n-punctured-sphere sum (hl/schur only) is

    sum_lam  N_lam^2 * prod_i [K_0(z_i) P_lam(z_i)] / [K_prin P_lam(pt)]^{n-2}

with P_lam the Hall-Littlewood polynomial (Weyl character chi_lam in the
schur limit, where N_lam = 1), pt the principal specialization point
z = t^{h/2}|_{h principal}, and sliced punctures replacing their factor by
K_e(z) P_lam(z t^{h_e/2}).  Terms are enumerated by a rigorous lower bound
on their leading degree and the sum is re-checked two orders past the
truncation; a slicing whose bound degenerates (e.g. closing a puncture of
the three-punctured sphere) is reported as non-stabilizing instead of
silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from . import lie
from .gammas import cartan_prefactor, gamma_tpow
from .nilpotent import NilpotentData, commutant_slot, k_factor, nilpotent_data, slice_exponents
from .rings import FlavorSlot, RingConfig, slot_for_group
from .series import (CertifiedOrderError, ConfigMismatch, FugacityMap,
                     RegularityError, TruncatedSeries, constant_term, invert,
                     substitute)


class NonStabilizingSum(RuntimeError):
    """The sphere sum has no positive degree bound; it does not converge."""


class LimitKind(Enum):
    FULL = "full"
    MACDONALD = "macdonald"
    SCHUR = "schur"
    HALL_LITTLEWOOD = "hl"

    @staticmethod
    def parse(text: str) -> "LimitKind":
        key = text.strip().lower()
        aliases = {"full": LimitKind.FULL, "macdonald": LimitKind.MACDONALD,
                   "mac": LimitKind.MACDONALD, "schur": LimitKind.SCHUR,
                   "hl": LimitKind.HALL_LITTLEWOOD,
                   "hall-littlewood": LimitKind.HALL_LITTLEWOOD}
        if key not in aliases:
            raise ValueError(f"unknown limit {text!r}")
        return aliases[key]

    @property
    def grading(self) -> tuple[str, ...]:
        return {LimitKind.FULL: ("p", "q", "s"),
                LimitKind.MACDONALD: ("q", "s"),
                LimitKind.SCHUR: ("u",),
                LimitKind.HALL_LITTLEWOOD: ("tau",)}[self]

    @property
    def sqrt_var(self) -> str:
        return self.grading[-1]

    def ring(self, order: int, slots=()) -> RingConfig:
        return RingConfig(self.grading, order, slots)


# --------------------------------------------------------------------------
# groups


def group_rank(group: str) -> int:
    g = group.lower()
    if g.startswith("su"):
        n = int(g[2:])
        if n < 2:
            raise ValueError(f"bad group {group!r}")
        return n - 1
    if g == "u1":
        return 1
    if g == "so8":
        return 4
    if g in ("e6", "e7", "e8"):
        return int(g[1])
    raise ValueError(f"unknown group {group!r}")


def group_root_system(group: str) -> lie.RootSystem:
    g = group.lower()
    if g.startswith("su"):
        return lie.build_root_system(f"a{int(g[2:]) - 1}")
    if g == "so8":
        return lie.build_root_system("d4")
    if g in ("e6", "e7", "e8"):
        return lie.build_root_system(g)
    raise ValueError(f"group {group!r} has no root system here (u1 is torus-only)")


# --------------------------------------------------------------------------
# theory expressions


@dataclass(frozen=True)
class SlotDecl:
    name: str
    group: str


class TheoryExpr:
    """Base class for theory AST nodes."""

    def free_slots(self) -> dict[str, str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Hyp(TheoryExpr):
    """Free hypermultiplet: quaternionic weight multiset over the slots.

    Weights are integer tuples over the concatenation of the slots'
    fundamental-weight coordinates and must be closed under negation.
    """

    slots: tuple[SlotDecl, ...]
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        width = sum(group_rank(s.group) for s in self.slots)
        for w in self.weights:
            if len(w) != width:
                raise ValueError(f"weight {w} has wrong length (expected {width})")
        bag: dict[tuple[int, ...], int] = {}
        for w in self.weights:
            bag[w] = bag.get(w, 0) + 1
        for w, m in bag.items():
            if bag.get(tuple(-x for x in w), 0) != m:
                raise ValueError("hypermultiplet weights must be closed under "
                                 f"negation; {w} is unmatched")

    def free_slots(self):
        return {s.name: s.group for s in self.slots}


@dataclass(frozen=True)
class Product(TheoryExpr):
    factors: tuple[TheoryExpr, ...]

    def free_slots(self):
        out: dict[str, str] = {}
        for f in self.factors:
            for name, group in f.free_slots().items():
                if out.setdefault(name, group) != group:
                    raise ValueError(f"slot {name!r} used with conflicting groups")
        return out


@dataclass(frozen=True)
class Gauge(TheoryExpr):
    group: str
    slot: str
    child: TheoryExpr

    def free_slots(self):
        fs = self.child.free_slots()
        if self.slot not in fs:
            raise ValueError(f"gauged slot {self.slot!r} is not free in the child")
        if fs[self.slot] != self.group:
            raise ValueError(f"slot {self.slot!r} carries {fs[self.slot]}, "
                             f"cannot gauge {self.group}")
        return {k: v for k, v in fs.items() if k != self.slot}


@dataclass(frozen=True)
class Slice(TheoryExpr):
    child: TheoryExpr
    slot: str
    partition: tuple[int, ...]

    def free_slots(self):
        fs = self.child.free_slots()
        if self.slot not in fs:
            raise ValueError(f"sliced slot {self.slot!r} is not free in the child")
        group = fs[self.slot]
        if not group.startswith("su"):
            raise ValueError("only type-A slots can be sliced")
        n = int(group[2:])
        data = nilpotent_data(n, self.partition)
        out = dict(fs)
        if data.commutant_rank:
            out[self.slot] = f"u1^{data.commutant_rank}"
        else:
            del out[self.slot]
        return out


@dataclass(frozen=True)
class Sphere(TheoryExpr):
    """Genus-0 class-S building block with n >= 3 punctures (hl/schur only);
    T_G is the three-punctured case."""

    group: str
    slots: tuple[str, ...]
    slices: tuple[tuple[str, tuple[int, ...]], ...] = field(default=())

    def __post_init__(self):
        if len(self.slots) < 3:
            raise ValueError("a sphere needs at least three punctures")
        if len(set(self.slots)) != len(self.slots):
            raise ValueError("puncture slots must be distinct")
        for name, _ in self.slices:
            if name not in self.slots:
                raise ValueError(f"sliced slot {name!r} is not a puncture")

    def slice_map(self) -> dict[str, tuple[int, ...]]:
        return dict(self.slices)

    def free_slots(self):
        out = {}
        sl = self.slice_map()
        for name in self.slots:
            if name in sl:
                n = int(self.group[2:])
                data = nilpotent_data(n, sl[name])
                if data.commutant_rank:
                    out[name] = f"u1^{data.commutant_rank}"
            else:
                out[name] = self.group
        return out


def TG(group: str, a: str, b: str, c: str) -> Sphere:
    return Sphere(group, (a, b, c))


# --------------------------------------------------------------------------
# ring helpers


def _slot_rank(name: str, group: str) -> FlavorSlot:
    if group.startswith("u1^"):
        return slot_for_group(name, None, int(group[3:]))
    return slot_for_group(name, group, group_rank(group))


def ring_for(limit: LimitKind, order: int, slot_groups: dict[str, str]) -> RingConfig:
    slots = tuple(_slot_rank(name, slot_groups[name]) for name in sorted(slot_groups))
    return limit.ring(order, slots)


def _fkey(ring: RingConfig, slot: str, weight_fw, sign: int = 1) -> tuple:
    e = [0] * ring.frank
    for i, w in zip(ring.slot_range(slot), weight_fw):
        e[i] = sign * w
    return tuple(e)


# --------------------------------------------------------------------------
# hypermultiplets


def hyper_index(ring: RingConfig, weights, order: int | None = None) -> TruncatedSeries:
    """prod_w Gamma(t^{1/2} z^w) in the ring's limit; weights are exponent
    rows over the ring's full flavor variable list (must be +/- closed)."""
    order = ring.truncation_order if order is None else order
    rows = [tuple(w) for w in weights]
    bag: dict[tuple, int] = {}
    for w in rows:
        bag[w] = bag.get(w, 0) + 1
    for w, m in bag.items():
        if bag.get(tuple(-x for x in w), 0) != m:
            raise ValueError(f"hyper weights not closed under negation at {w}")
    acc = TruncatedSeries.one(ring, order)
    for w in rows:
        acc = (acc * gamma_tpow(ring, 1, w, order=order)).truncated(order)
    return acc


def tensor_weights(*weight_lists):
    """Weight rows of a tensor product: concatenated coordinate tuples."""
    rows = [()]
    for wl in weight_lists:
        rows = [r + tuple(w) for r in rows for w in wl]
    return rows


def rep_weights(group: str, lam=None):
    """Weight rows (with multiplicity) of one irrep; default the defining
    (first fundamental) representation."""
    rs = group_root_system(group)
    lam = (1,) + (0,) * (rs.rank - 1) if lam is None else tuple(lam)
    char = lie.irrep_character(rs, lam)
    out = []
    for w, m in sorted(char.items()):
        out.extend([w] * m)
    return out


# --------------------------------------------------------------------------
# gauging


def gauge_measure(ring: RingConfig, group: str, slot: str) -> tuple[TruncatedSeries, Fraction]:
    """Vector-multiplet measure on the slot (without the constant-term
    projection): prefactor^r * prod_alpha 1/(Gamma(z^a) Gamma(t z^a)),
    and the 1/|W| normalization."""
    rs = group_root_system(group)
    order = ring.truncation_order
    acc = cartan_prefactor(ring, order).pow(rs.rank)
    for fw in rs.pos_roots_fw:
        for sign in (1, -1):
            f = _fkey(ring, slot, fw, sign)
            acc = (acc * gamma_tpow(ring, 0, f, inverse=True, order=order)).truncated(order)
            acc = (acc * gamma_tpow(ring, 2, f, inverse=True, order=order)).truncated(order)
    return acc, Fraction(1, rs.weyl_order)


def gauge_index(child: TruncatedSeries, group: str, slot: str) -> TruncatedSeries:
    """Integrate the slot against the vector-multiplet measure."""
    ring = child.ring
    measure, norm = gauge_measure(ring, group, slot)
    integrand = (child * measure).truncated(min(child.order, ring.truncation_order))
    return constant_term(integrand, slot).scaled(norm)


# --------------------------------------------------------------------------
# K factors


_k_cache: dict = {}


def _order_free_key(ring: RingConfig):
    return (ring.grading_vars, ring.grading_weights, ring.slots)


def _cached_to_order(key, ring, order, builder) -> TruncatedSeries:
    """Order-amortizing cache: keep the deepest series built per key and
    hand out truncations of it."""
    hit = _k_cache.get(key)
    if hit is not None and hit.order >= order:
        return hit.truncated(order).rebound(ring.with_order(order)).rebound(ring)
    series = builder(order)
    _k_cache[key] = series
    return series


def k_zero(ring: RingConfig, group: str, slot: str,
           inverse: bool = False, order: int | None = None) -> TruncatedSeries:
    """K_0(z) = Gamma(t)^r prod_alpha Gamma(t z^alpha) (zero weights included)."""
    rs = group_root_system(group)
    order = ring.truncation_order if order is None else order

    def build(n):
        acc = gamma_tpow(ring, 2, inverse=inverse, order=n).pow(rs.rank).truncated(n)
        for fw in rs.pos_roots_fw:
            for sign in (1, -1):
                f = _fkey(ring, slot, fw, sign)
                acc = (acc * gamma_tpow(ring, 2, f, inverse=inverse, order=n)).truncated(n)
        return acc

    key = ("k0", _order_free_key(ring), group, slot, inverse)
    return _cached_to_order(key, ring, order, build)


def k_principal(ring: RingConfig, group: str, order: int | None = None) -> TruncatedSeries:
    """K_e for the principal orbit: prod_i Gamma(t^{d_i + 1}) over the exponents."""
    rs = group_root_system(group)
    order = ring.truncation_order if order is None else order

    def build(n):
        acc = TruncatedSeries.one(ring, n)
        for d in rs.exponents:
            acc = (acc * gamma_tpow(ring, 2 * d + 2, order=n)).truncated(n)
        return acc

    key = ("kpr", _order_free_key(ring), group)
    return _cached_to_order(key, ring, order, build)


# --------------------------------------------------------------------------
# slicing


def _slice_target(ring: RingConfig, slot: str, data: NilpotentData):
    new_slot = commutant_slot(data, slot)
    if new_slot is None:
        return ring.without_slot(slot), None
    return ring.with_slot_replaced(slot, new_slot), new_slot


def slice_fugacity_map(ring: RingConfig, slot: str, data: NilpotentData):
    """FugacityMap for x -> z t^{h/2} on one slot, and the target ring."""
    target, new_slot = _slice_target(ring, slot, data)
    sqrt = ring.grading_vars[-1]
    exps = slice_exponents(data, ring.slot(slot).rank)
    mapping: dict[str, dict[str, int]] = {}
    for var, (hpair, charge) in zip(ring.slot(slot).vars, exps):
        img: dict[str, int] = {}
        if hpair:
            img[sqrt] = hpair
        if new_slot is not None:
            for v, c in zip(new_slot.vars, charge):
                if c:
                    img[v] = c
        mapping[var] = img
    for other in ring.slots:
        if other.name != slot:
            for v in other.vars:
                mapping[v] = {v: 1}
    return FugacityMap.build(ring, target, mapping), target


def slice_index(child: TruncatedSeries, slot: str, partition,
                group: str | None = None) -> TruncatedSeries:
    """K_e(z) [K_0(x)^{-1} Z(x)]_{x -> z t^{h/2}}.

    The substituted sum is accumulated source-degree by source-degree; the
    certified order of the result is where the coefficients have visibly
    frozen (agreement between source truncations N-2 and N), except for
    degree-nondecreasing maps where the full order is rigorous.  A
    non-regular survivor below the certified order raises RegularityError.
    """
    ring = child.ring
    group = group or ring.slot(slot).group
    if not (group and group.startswith("su")):
        raise ValueError("only type-A (su N) slots can be sliced")
    n = int(group[2:])
    data = nilpotent_data(n, partition)
    inv_k0 = k_zero(ring, group, slot, inverse=True, order=child.order)
    stripped = (child * inv_k0).truncated(child.order)
    fmap, target = slice_fugacity_map(ring, slot, data)

    sdeg = ring.degree
    tdeg = target.degree
    by_degree: dict[int, list] = {}
    drops = False
    for g, p in stripped.terms.items():
        by_degree.setdefault(sdeg(g), []).append((g, p))
    acc: dict = {}
    snapshots: dict[int, dict] = {}
    marks = (child.order - 2, child.order)
    for d in sorted(by_degree):
        for g, p in by_degree[d]:
            for e, c in p.items():
                tg, tf = fmap.image_of(g, e)
                if tdeg(tg) < d:
                    drops = True
                poly = acc.setdefault(tg, {})
                v = poly.get(tf)
                nv = c if v is None else v + c
                if nv:
                    poly[tf] = nv
                elif v is not None:
                    del poly[tf]
        if d in marks:
            snapshots[d] = {g: dict(p) for g, p in acc.items() if p}
    final = snapshots.get(child.order, {g: dict(p) for g, p in acc.items() if p})
    if not drops:
        certified = stripped.order
    else:
        early = snapshots.get(child.order - 2, {})
        certified = stripped.order
        for g in set(early) | set(final):
            if early.get(g, {}) != final.get(g, {}):
                certified = min(certified, tdeg(g) - 1)
    substituted = TruncatedSeries(target, final, certified).truncated(certified)
    ke = k_factor(data, target, commutant_slot(data, slot).name
                  if data.commutant_rank else None)
    result = (substituted * ke).truncated(certified)
    if not result.is_regular():
        raise RegularityError(
            "sliced index has negative-degree terms below the certified order "
            f"({result.min_degree()} < 0); wrong K factors or insufficient order")
    return result


# --------------------------------------------------------------------------
# sphere (TQFT) sums


def _wavefunction(limit: LimitKind, rs: lie.RootSystem, lam, tmax: int | None):
    if limit is LimitKind.HALL_LITTLEWOOD:
        return lie.hall_littlewood(rs, lam, tmax).terms
    if limit is LimitKind.SCHUR:
        return lie.irrep_character(rs, lam)
    raise ValueError("sphere building blocks exist in the hl and schur limits only")


def _sliced_wavefunction_series(ring: RingConfig, data: NilpotentData,
                                slot_vars, terms: dict,
                                conjugate: bool = False) -> TruncatedSeries:
    """Evaluate a wavefunction at x -> z t^{h/2} directly from its weights.

    The result is an exact Laurent polynomial when the wavefunction's
    t-coefficients are exact; when they were computed mod t^k it is
    complete only up to (min degree) + 2k, and the certified order says so.
    """
    sqrt_index = ring.grading_index(ring.grading_vars[-1])
    rs_rank = len(next(iter(terms)))
    exps = slice_exponents(data, rs_rank)
    sign = -1 if conjugate else 1
    out: dict = {}
    for e, c in terms.items():
        hpair = sign * sum(x * h for x, (h, _) in zip(e, exps))
        charge = tuple(sign * sum(x * ch[i] for x, (_, ch) in zip(e, exps))
                       for i in range(data.commutant_rank))
        fkey = [0] * ring.frank
        if slot_vars:
            for v, q in zip(slot_vars, charge):
                fkey[ring.flavor_index(v)] = q
        fkey = tuple(fkey)
        pairs = ([(hpair + 2 * k, v) for k, v in enumerate(c.c) if v]
                 if isinstance(c, lie.TPoly) else [(hpair, c)])
        for expo, v in pairs:
            g = [0] * ring.grank
            g[sqrt_index] = expo
            g = tuple(g)
            poly = out.setdefault(g, {})
            poly[fkey] = poly.get(fkey, 0) + v
    out = {g: {e: c for e, c in p.items() if c} for g, p in out.items()}
    out = {g: p for g, p in out.items() if p}
    s = TruncatedSeries(ring, out, ring.truncation_order)
    s.order = _poly_certified_order(ring, out, terms)
    return s


EXACT_ORDER = 10 ** 9


def _poly_certified_order(ring: RingConfig, series_terms: dict, wave_terms: dict) -> int:
    tmaxes = [c.kmax for c in wave_terms.values()
              if isinstance(c, lie.TPoly) and c.kmax is not None]
    if not tmaxes:
        return EXACT_ORDER
    mindeg = min((ring.degree(g) for g in series_terms), default=0)
    return mindeg + 2 * min(tmaxes) - 1


def dual_weight(rs: lie.RootSystem, lam) -> tuple:
    """Highest weight of the dual representation, -w0(lam)."""
    return rs.dominant_rep(tuple(-x for x in lam))


def _conjugation_classes(n: int) -> tuple[int, ...]:
    """Dual-wavefunction assignment of the n punctures along the trinion
    chain T(1,2,x1) T(x1,3,x2) ... T(x_{n-3},n-1,n): each gluing pairs a
    wavefunction with its dual, so classes alternate trinion by trinion.
    For n = 3 (and for any group with only self-dual representations) all
    classes coincide."""
    if n == 3:
        return (0, 0, 0)
    classes = [0, 0]
    for t in range(2, n - 2):       # middle trinion t carries puncture t+1
        classes.append((t - 1) % 2)
    last = (n - 3) % 2
    classes.extend([last, last])
    return tuple(classes)


def _dominant_weights_under(rs: lie.RootSystem, gvec, bound: int):
    """Dominant lam (fw coords) with sum_i gvec[i] lam_i <= bound."""
    out = []

    def rec(prefix, remaining):
        i = len(prefix)
        if i == rs.rank:
            out.append(tuple(prefix))
            return
        c = 0
        while c * gvec[i] <= remaining:
            rec(prefix + [c], remaining - c * gvec[i])
            c += 1

    rec([], bound)
    return out


def tg_sum(group: str, slots, limit: LimitKind, order: int,
           slices: dict | None = None, stability_margin: int = 2) -> TruncatedSeries:
    """n-punctured genus-0 sphere index via the wavefunction sum."""
    rs = group_root_system(group)
    slots = tuple(slots)
    n = len(slots)
    if n < 3:
        raise ValueError("need at least three punctures")
    slices = dict(slices or {})
    datas = {name: nilpotent_data(int(group[2:]), part)
             for name, part in slices.items()}

    # rigorous lower bound on the leading degree of the lam term:
    # (n-2) <2 rho^vee, lam>  minus the worst drop of each sliced puncture
    # (the dual weight enters for conjugation-class-1 punctures, so take
    # the larger of the two pairings)
    hplus = {}
    for name, data in datas.items():
        hplus[name] = tuple(sorted(data.h_weights, reverse=True))
    prin = rs.prin_pairing

    def h_dominant_pairing(hsorted, lam):
        # max over the Weyl orbit of lam of <h, w> = pairing of dominant reps;
        # convert h (e-basis, su(N)) to the fw pairing via partial sums
        partial = [sum(hsorted[:i + 1]) for i in range(len(hsorted) - 1)]
        return sum(a * b for a, b in zip(partial, lam))

    def worst_drop(name, lam):
        return max(h_dominant_pairing(hplus[name], lam),
                   h_dominant_pairing(hplus[name], dual_weight(rs, lam)))

    def gbound(lam):
        g = (n - 2) * sum(a * b for a, b in zip(prin, lam))
        for name in slices:
            g -= worst_drop(name, lam)
        return g

    unit_ok = all(gbound(tuple(int(i == j) for j in range(rs.rank))) > 0
                  for i in range(rs.rank))
    if not unit_ok:
        raise NonStabilizingSum(
            f"sphere sum for {group} with slices {sorted(slices)} has no positive "
            "degree bound (degenerate slicing, e.g. closing a 3-punctured sphere)")

    gvec = [gbound(tuple(int(i == j) for j in range(rs.rank))) for i in range(rs.rank)]
    lams = _dominant_weights_under(rs, gvec, order + stability_margin)
    bound = lie._env_bound("SCINDEX_MAX_LAMBDA_TERMS", 4000)
    if len(lams) > bound:
        raise lie.ResourceLimit(f"{len(lams)} sphere-sum terms exceed "
                                f"SCINDEX_MAX_LAMBDA_TERMS = {bound}")

    slot_groups = {}
    for name in slots:
        if name in datas:
            if datas[name].commutant_rank:
                slot_groups[name] = f"u1^{datas[name].commutant_rank}"
        else:
            slot_groups[name] = group
    ring = ring_for(limit, order, slot_groups)

    classes = dict(zip(slots, _conjugation_classes(n)))
    result = TruncatedSeries.zero(ring, order)
    for lam in sorted(lams):
        drop = sum(worst_drop(name, lam) for name in slices)
        # the inverted denominator has minimal degree +(n-2)<2rho,lam>,
        # which pays for the sliced factors' Laurent drops: every truncated
        # piece only needs exactness order - gbound(lam); the certified-
        # order arithmetic of the product re-derives and checks this
        work = max(0, order - gbound(lam))
        wring = ring.with_order(work)
        wave = _wavefunction(limit, rs, lam, tmax=work // 2 + 1
                             if limit is LimitKind.HALL_LITTLEWOOD else None)
        # denominator [K_prin * P_lam(pt)]^(n-2), inverted as a Laurent
        # series; the principal point is dual-invariant so lam* shares it
        denom = (k_principal(wring, group, work)
                 * lie.principal_specialization(rs, wave, wring)).truncated(work)
        term = invert(denom, laurent=True).pow(n - 2)
        if limit is LimitKind.HALL_LITTLEWOOD:
            norm = lie.hl_norm_sq(rs, lam, work)
            nl2 = invert(_embed_flavorless(norm, wring))
            term = (term * nl2).truncated(term.order)
        for name in slots:
            conj = bool(classes[name])
            if name in datas:
                data = datas[name]
                svars = (commutant_slot(data, name).vars
                         if data.commutant_rank else ())
                factor = (k_factor(data, wring, name if data.commutant_rank else None)
                          * _sliced_wavefunction_series(wring, data, svars, wave,
                                                        conjugate=conj))
            else:
                factor = (k_zero(wring, group, name, order=work)
                          * lie.hl_poly_to_series(wave, wring, name, invert_z=conj))
            term = (term * factor).truncated(min(term.order, order + drop))
        if term.order < order:
            raise CertifiedOrderError(
                f"sphere term {lam} certified only to {term.order} < {order}")
        lead = term.min_degree()
        if gbound(lam) > order:
            # stability re-check margin: the term must not touch kept orders
            assert lead > order, f"stability re-check failed for lam={lam}"
            continue
        result = result + term.truncated(order).rebound(ring)
    return result


def _embed_flavorless(s: TruncatedSeries, ring: RingConfig) -> TruncatedSeries:
    """Embed a flavor-free series (same grading) into a bigger ring."""
    f0 = (0,) * ring.frank
    terms = {g: {f0: p[()]} for g, p in s.terms.items()}
    return TruncatedSeries(ring, terms, min(s.order, ring.truncation_order))


# --------------------------------------------------------------------------
# independent oracle: minimal nilpotent orbit Hilbert series


def minimal_orbit_hs(group: str, order: int) -> TruncatedSeries:
    """sum_n dim V_{n theta} tau^{2n}: the Hilbert series of the minimal
    nilpotent orbit closure (one-instanton moduli space), exact."""
    rs = group_root_system(group)
    ring = LimitKind.HALL_LITTLEWOOD.ring(order)
    theta = rs.highest_root_fw
    s = TruncatedSeries.zero(ring, order)
    n = 0
    while 2 * n <= order:
        lam = tuple(n * x for x in theta)
        s.terms[(2 * n,)] = {(): lie.weyl_dim(rs, lam)}
        n += 1
    return s


# --------------------------------------------------------------------------
# limit reductions (p -> 0, t = q, q -> 0)


def reduce_limit(s: TruncatedSeries, target: LimitKind) -> TruncatedSeries:
    """Specialize a series to a further limit (full->macdonald->schur/hl)."""
    sig = s.ring.grading_vars
    if sig == ("p", "q", "s") and target is not LimitKind.FULL:
        mac = _drop_grading_var(s, "p")
        return reduce_limit(mac, target) if target is not LimitKind.MACDONALD else mac
    if sig == ("q", "s"):
        if target is LimitKind.MACDONALD:
            return s
        if target is LimitKind.SCHUR:
            return _merge_grading(s, LimitKind.SCHUR, lambda g: (2 * g[0] + g[1],))
        if target is LimitKind.HALL_LITTLEWOOD:
            dropped = _drop_grading_var(s, "q")
            return _merge_grading(dropped, LimitKind.HALL_LITTLEWOOD, lambda g: g)
    if sig == ("u",) and target is LimitKind.SCHUR:
        return s
    if sig == ("tau",) and target is LimitKind.HALL_LITTLEWOOD:
        return s
    raise ValueError(f"cannot reduce {sig} to {target}")


def _drop_grading_var(s: TruncatedSeries, var: str) -> TruncatedSeries:
    i = s.ring.grading_index(var)
    remaining = tuple(v for v in s.ring.grading_vars if v != var)
    ring = RingConfig(remaining, s.ring.truncation_order, s.ring.slots)
    terms = {}
    for g, p in s.terms.items():
        if g[i] == 0:
            terms[g[:i] + g[i + 1:]] = dict(p)
    return TruncatedSeries(ring, terms, s.order)


def _merge_grading(s: TruncatedSeries, limit: LimitKind, keymap) -> TruncatedSeries:
    ring = limit.ring(s.ring.truncation_order, s.ring.slots)
    terms: dict = {}
    for g, p in s.terms.items():
        g2 = keymap(g)
        acc = terms.setdefault(g2, {})
        for e, c in p.items():
            v = acc.get(e)
            acc[e] = c if v is None else v + c
    terms = {g: {e: c for e, c in p.items() if c} for g, p in terms.items()}
    return TruncatedSeries(ring, {g: p for g, p in terms.items() if p}, s.order)


# --------------------------------------------------------------------------
# evaluation


def eval_expr(expr: TheoryExpr, limit: LimitKind, order: int) -> TruncatedSeries:
    """Evaluate a theory expression; raises CertifiedOrderError if the
    result cannot be certified to the requested order."""
    series = _eval(expr, limit, order)
    if series.order < order:
        raise CertifiedOrderError(
            f"result certified only to order {series.order} < requested {order}")
    out = series.truncated(order)
    return out.rebound(out.ring.with_order(order))


def _eval(expr: TheoryExpr, limit: LimitKind, order: int) -> TruncatedSeries:
    if isinstance(expr, Hyp):
        ring = ring_for(limit, order, expr.free_slots())
        rows = []
        offsets = {}
        pos = 0
        for s in expr.slots:
            offsets[s.name] = pos
            pos += group_rank(s.group)
        # expression weight coordinates are ordered by the Hyp's own slot
        # list; the ring sorts slots by name, so permute into ring order
        for w in expr.weights:
            e = [0] * ring.frank
            for s in expr.slots:
                r = group_rank(s.group)
                chunk = w[offsets[s.name]: offsets[s.name] + r]
                for i, x in zip(ring.slot_range(s.name), chunk):
                    e[i] = x
            rows.append(tuple(e))
        return hyper_index(ring, rows, order)
    if isinstance(expr, Product):
        ring = ring_for(limit, order, expr.free_slots())
        acc = TruncatedSeries.one(ring, order)
        for f in expr.factors:
            child = _eval(f, limit, order)
            acc = (acc * child.embedded(ring)).truncated(order)
        return acc
    if isinstance(expr, Gauge):
        child = _eval(expr.child, limit, order)
        return gauge_index(child, expr.group, expr.slot)
    if isinstance(expr, Slice):
        fs = expr.child.free_slots()
        group = fs[expr.slot]
        slack = max(4, order)
        for attempt in range(2):
            child = _eval(expr.child, limit, order + slack)
            result = slice_index(child, expr.slot, expr.partition, group)
            if result.order >= order:
                return result.truncated(order).rebound(
                    result.ring.with_order(order))
            slack = 2 * slack + 4
        raise CertifiedOrderError(
            f"slicing {expr.slot} by {expr.partition} did not stabilize at order {order}")
    if isinstance(expr, Sphere):
        return tg_sum(expr.group, expr.slots, limit, order, expr.slice_map())
    raise TypeError(f"unknown theory expression {expr!r}")
