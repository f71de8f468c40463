"""Truncated multivariate formal series, exact over the rationals.

A series lives in a :class:`~scindex.rings.RingConfig`.  Its terms map a
grading exponent vector (one int per grading variable) to a sparse Laurent
polynomial in the flavor variables, itself a dict from exponent tuples to
int/Fraction coefficients.  No floats anywhere.

Every series carries a *certified order*: all coefficients of weighted
total degree <= ``order`` are exact, and no terms beyond it are stored.
Arithmetic propagates certified orders (for Laurent-leading operands the
usual interval rule ``order = min(Na + min_b, Nb + min_a)`` applies), so
insufficient truncation is detected instead of silently corrupting high
orders.

Grading exponents may go negative in intermediates (substitution tracks
Laurent terms); a series is *regular* when every stored term has
non-negative weighted degree.  Public index results are regular, though in
the full (p,q,s) ring individual s-exponents can be negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .kernel import poly_axpy, poly_canonize, poly_mul_into
from .rings import RingConfig


class ConfigMismatch(ValueError):
    """Operands live in different ring configurations."""


class RegularityError(ValueError):
    """A negative-degree term survived where a regular series was required."""


class CertifiedOrderError(ValueError):
    """A result cannot be certified to the requested truncation order."""


Coeff = int | Fraction
GKey = tuple[int, ...]
FKey = tuple[int, ...]


class TruncatedSeries:
    __slots__ = ("ring", "terms", "order")

    def __init__(self, ring: RingConfig, terms=None, order: int | None = None):
        self.ring = ring
        self.terms: dict[GKey, dict[FKey, Coeff]] = {} if terms is None else terms
        self.order = ring.truncation_order if order is None else order

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ring: RingConfig, order: int | None = None) -> "TruncatedSeries":
        return TruncatedSeries(ring, {}, order)

    @staticmethod
    def constant(ring: RingConfig, value, order: int | None = None) -> "TruncatedSeries":
        s = TruncatedSeries(ring, {}, order)
        value = _norm(Fraction(value) if not isinstance(value, (int, Fraction)) else value)
        if value:
            s.terms[(0,) * ring.grank] = {(0,) * ring.frank: value}
        return s

    @staticmethod
    def one(ring: RingConfig, order: int | None = None) -> "TruncatedSeries":
        return TruncatedSeries.constant(ring, 1, order)

    @staticmethod
    def monomial(ring: RingConfig, gkey=None, fkey=None, coeff=1,
                 order: int | None = None) -> "TruncatedSeries":
        gkey = (0,) * ring.grank if gkey is None else tuple(gkey)
        fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
        s = TruncatedSeries(ring, {}, order)
        coeff = _norm(coeff)
        if coeff and ring.degree(gkey) <= s.order:
            s.terms[gkey] = {fkey: coeff}
        return s

    @staticmethod
    def from_poly(ring: RingConfig, poly: dict, gkey=None,
                  order: int | None = None) -> "TruncatedSeries":
        """Embed a flavor Laurent polynomial at a single grading monomial."""
        gkey = (0,) * ring.grank if gkey is None else tuple(gkey)
        s = TruncatedSeries(ring, {}, order)
        if poly and ring.degree(gkey) <= s.order:
            p = {tuple(e): _norm(c) for e, c in poly.items() if c}
            if p:
                s.terms[gkey] = p
        return s

    # -- inspection ----------------------------------------------------------

    def min_degree(self) -> int:
        """Lower bound on the true minimal degree (order+1 for zero series)."""
        deg = self.ring.degree
        return min((deg(g) for g in self.terms), default=self.order + 1)

    def is_regular(self) -> bool:
        return self.min_degree() >= 0

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, gkey) -> dict:
        """Flavor polynomial at one grading monomial (copy)."""
        return dict(self.terms.get(tuple(gkey), {}))

    def grading_support(self):
        return sorted(self.terms)

    def constant_value(self):
        """The scalar value of a flavor-free, grading-free series."""
        g0 = (0,) * self.ring.grank
        f0 = (0,) * self.ring.frank
        if not self.terms:
            return 0
        if set(self.terms) == {g0} and set(self.terms[g0]) == {f0}:
            return self.terms[g0][f0]
        raise ValueError("series is not a constant")

    # -- ring plumbing --------------------------------------------------------

    def truncated(self, order: int) -> "TruncatedSeries":
        order = min(order, self.order)
        deg = self.ring.degree
        terms = {g: dict(p) for g, p in self.terms.items() if deg(g) <= order}
        return TruncatedSeries(self.ring, terms, order)

    def rebound(self, ring: RingConfig) -> "TruncatedSeries":
        """Reinterpret in a ring differing only in truncation_order."""
        if (ring.grading_vars != self.ring.grading_vars
                or ring.slots != self.ring.slots):
            raise ConfigMismatch("rebound only changes the truncation order")
        s = self.truncated(min(self.order, ring.truncation_order))
        return TruncatedSeries(ring, s.terms, s.order)

    def embedded(self, target: RingConfig) -> "TruncatedSeries":
        """Inject into a ring whose slots are a superset (matched by name)."""
        if target.grading_vars != self.ring.grading_vars:
            raise ConfigMismatch("embedding must preserve grading variables")
        pos = []
        for s in self.ring.slots:
            t = target.slot(s.name)
            if t.vars != s.vars:
                raise ConfigMismatch(f"slot {s.name!r} differs in the target ring")
            pos.extend(target.slot_range(s.name))
        width = target.frank
        out: dict[GKey, dict[FKey, Coeff]] = {}
        order = min(self.order, target.truncation_order)
        deg = target.degree
        for g, p in self.terms.items():
            if deg(g) > order:
                continue
            q = {}
            for e, c in p.items():
                e2 = [0] * width
                for i, x in enumerate(e):
                    e2[pos[i]] = x
                q[tuple(e2)] = c
            out[g] = q
        return TruncatedSeries(target, out, order)

    # -- arithmetic ------------------------------------------------------------

    def _require_same_ring(self, other: "TruncatedSeries"):
        if self.ring != other.ring:
            raise ConfigMismatch(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.ring, other, self.order)
        self._require_same_ring(other)
        order = min(self.order, other.order)
        deg = self.ring.degree
        out = {g: dict(p) for g, p in self.terms.items() if deg(g) <= order}
        for g, p in other.terms.items():
            if deg(g) > order:
                continue
            acc = out.setdefault(g, {})
            poly_axpy(acc, p, 1)
        return TruncatedSeries(self.ring, _sweep(out), order)

    __radd__ = __add__

    def __neg__(self):
        out = {g: {e: -c for e, c in p.items()} for g, p in self.terms.items()}
        return TruncatedSeries(self.ring, out, self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.ring, other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, c) -> "TruncatedSeries":
        c = _norm(c)
        if not c:
            return TruncatedSeries.zero(self.ring, self.order)
        out = {g: poly_canonize({e: c * v for e, v in p.items()})
               for g, p in self.terms.items()}
        return TruncatedSeries(self.ring, out, self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._require_same_ring(other)
        ma, mb = self.min_degree(), other.min_degree()
        order = min(self.order + mb, other.order + ma)
        deg = self.ring.degree
        out: dict[GKey, dict[FKey, Coeff]] = {}
        bitems = [(g, p, deg(g)) for g, p in other.terms.items()]
        for ga, pa in self.terms.items():
            da = deg(ga)
            for gb, pb, db in bitems:
                if da + db > order:
                    continue
                g = tuple(x + y for x, y in zip(ga, gb))
                acc = out.get(g)
                if acc is None:
                    acc = out[g] = {}
                poly_mul_into(acc, pa, pb)
        return TruncatedSeries(self.ring, _sweep(out), order)

    __rmul__ = __mul__

    def mul_monomial(self, gkey=None, fkey=None, coeff=1) -> "TruncatedSeries":
        """Multiply by coeff * (grading monomial) * (flavor monomial)."""
        ring = self.ring
        gkey = (0,) * ring.grank if gkey is None else tuple(gkey)
        fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
        coeff = _norm(coeff)
        if not coeff:
            return TruncatedSeries.zero(ring, self.order)
        shift = ring.degree(gkey)
        order = self.order + shift
        out = {}
        for g, p in self.terms.items():
            g2 = tuple(x + y for x, y in zip(g, gkey))
            q = {tuple(x + y for x, y in zip(e, fkey)): _norm(coeff * c)
                 for e, c in p.items()}
            out[g2] = q
        return TruncatedSeries(ring, out, order)

    def pow(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return invert(self, laurent=True).pow(-n)
        result = TruncatedSeries.one(self.ring, self.order if n else None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparisons -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, _canonical_key(self.terms)))

    def __repr__(self):
        n = sum(len(p) for p in self.terms.values())
        return f"<TruncatedSeries order={self.order} terms={n} ring={self.ring!r}>"

    def __str__(self):
        return format_series(self)

    # -- serialization --------------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for g in sorted(self.terms):
            coeffs = []
            for e in sorted(self.terms[g]):
                c = Fraction(self.terms[g][e])
                coeffs.append({"exps": list(e), "num": str(c.numerator),
                               "den": str(c.denominator)})
            terms.append({"grading": list(g), "coeffs": coeffs})
        return {"ring": self.ring.to_json(), "certified_order": self.order,
                "terms": terms}

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @staticmethod
    def from_json(data: dict) -> "TruncatedSeries":
        ring = RingConfig.from_json(data["ring"])
        terms = {}
        for t in data["terms"]:
            p = {tuple(c["exps"]): _norm(Fraction(int(c["num"]), int(c["den"])))
                 for c in t["coeffs"]}
            if p:
                terms[tuple(t["grading"])] = p
        return TruncatedSeries(ring, terms, data["certified_order"])

    @staticmethod
    def loads(text: str) -> "TruncatedSeries":
        return TruncatedSeries.from_json(json.loads(text))


# -- free functions ---------------------------------------------------------------


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _sweep(terms):
    dead = []
    for g, p in terms.items():
        poly_canonize(p)
        if not p:
            dead.append(g)
    for g in dead:
        del terms[g]
    return terms


def _canonical_key(terms):
    return tuple(sorted((g, tuple(sorted(p.items()))) for g, p in terms.items()))


def geom(ring: RingConfig, gkey, fkey=None, order: int | None = None) -> TruncatedSeries:
    """Sum_{k>=0} m^k for the monomial m; equals invert(1 - m)."""
    gkey = tuple(gkey)
    fkey = (0,) * ring.frank if fkey is None else tuple(fkey)
    d = ring.degree(gkey)
    if d < 1:
        raise ValueError(f"geom needs grading degree >= 1, got degree {d}")
    order = ring.truncation_order if order is None else order
    s = TruncatedSeries(ring, {}, order)
    k = 0
    while k * d <= order:
        s.terms[tuple(k * x for x in gkey)] = {tuple(k * x for x in fkey): 1}
        k += 1
    return s


def one_minus(ring: RingConfig, gkey, fkey=None, order: int | None = None) -> TruncatedSeries:
    """The polynomial 1 - m for a monomial m (kept if within order)."""
    m = TruncatedSeries.monomial(ring, gkey, fkey, order=order)
    return TruncatedSeries.one(ring, m.order) - m


def invert(a: TruncatedSeries, laurent: bool = False) -> TruncatedSeries:
    """Multiplicative inverse up to truncation.

    The default mode requires the degree-0 part to be a nonzero rational
    constant.  With ``laurent=True`` any series whose minimal-degree part
    is a single monomial is accepted (needed for the TQFT denominators);
    the certified order follows the interval rule.
    """
    ring = a.ring
    deg = ring.degree
    if not a.terms:
        raise ZeroDivisionError("cannot invert the zero series")
    dmin = a.min_degree()
    lead = [(g, e, c) for g, p in a.terms.items() if deg(g) == dmin
            for e, c in p.items()]
    if not laurent:
        g0 = (0,) * ring.grank
        f0 = (0,) * ring.frank
        ok = dmin == 0 and len(lead) == 1 and lead[0][0] == g0 and lead[0][1] == f0
        if not ok:
            raise ValueError("degree-0 part is not a nonzero rational constant "
                             "(use laurent=True only for certified internals)")
    if len(lead) != 1:
        raise ValueError("minimal-degree part is not a single monomial")
    g0, f0, c0 = lead[0]
    # a = c0 * m * (1 - h), h of strictly positive degree
    inv_lead_g = tuple(-x for x in g0)
    inv_lead_f = tuple(-x for x in f0)
    order_out = a.order - 2 * dmin
    h = -(a.mul_monomial(inv_lead_g, inv_lead_f, Fraction(1, 1) / c0) - 1)
    h = h.truncated(order_out + dmin)
    if h.terms and h.min_degree() < 1:
        raise ValueError("minimal-degree part is not a single monomial")
    acc = TruncatedSeries.one(ring, order_out + dmin)
    steps = max(0, order_out + dmin)
    if not h.is_zero():
        step = h.min_degree()
        for _ in range(0, steps, step):
            acc = (acc * h + 1).truncated(order_out + dmin)
    return acc.mul_monomial(inv_lead_g, inv_lead_f, Fraction(1, 1) / c0).truncated(order_out)


def constant_term(a: TruncatedSeries, slot: str) -> TruncatedSeries:
    """Project onto flavor-exponent zero in one slot (the contour integral)."""
    rng = a.ring.slot_range(slot)
    keep = [i for i in range(a.ring.frank) if i not in rng]
    target = a.ring.without_slot(slot)
    out: dict[GKey, dict[FKey, Coeff]] = {}
    for g, p in a.terms.items():
        q = None
        for e, c in p.items():
            if any(e[i] for i in rng):
                continue
            if q is None:
                q = out.setdefault(g, {})
            e2 = tuple(e[i] for i in keep)
            v = q.get(e2)
            q[e2] = c if v is None else v + c
    return TruncatedSeries(target, _sweep(out), a.order)


@dataclass(frozen=True)
class FugacityMap:
    """Monomial substitution on the flavor variables of a ring.

    Each source flavor variable maps to a product of target flavor and
    grading variables with integer exponents; grading variables of the
    source pass through by name.
    """

    source: RingConfig
    target: RingConfig
    images: tuple[tuple[GKey, FKey], ...]

    @staticmethod
    def build(source: RingConfig, target: RingConfig,
              mapping: dict[str, dict[str, int]]) -> "FugacityMap":
        missing = [v for v in source.flavor_vars if v not in mapping]
        if missing:
            raise ValueError(f"fugacity map misses source variables {missing}")
        images = []
        for v in source.flavor_vars:
            g = [0] * target.grank
            f = [0] * target.frank
            for name, e in mapping[v].items():
                if name in target.grading_vars:
                    g[target.grading_index(name)] += e
                else:
                    f[target.flavor_index(name)] += e
            images.append((tuple(g), tuple(f)))
        for name in source.grading_vars:
            if name not in target.grading_vars:
                raise ValueError(f"grading variable {name!r} missing in target ring")
        return FugacityMap(source, target, tuple(images))

    def image_of(self, gkey: GKey, fkey: FKey) -> tuple[GKey, FKey]:
        g = [0] * self.target.grank
        for name, e in zip(self.source.grading_vars, gkey):
            g[self.target.grading_index(name)] += e
        f = [0] * self.target.frank
        for x, (ig, iff) in zip(fkey, self.images):
            if not x:
                continue
            for i, e in enumerate(ig):
                g[i] += x * e
            for i, e in enumerate(iff):
                f[i] += x * e
        return tuple(g), tuple(f)


def substitute(a: TruncatedSeries, fmap: FugacityMap,
               allow_laurent: bool = False) -> TruncatedSeries:
    """Apply a fugacity map; certify order N - D for worst-case degree drop D.

    Raises :class:`RegularityError` when a negative-degree term survives at
    or below the certified order (unless ``allow_laurent``).
    """
    if fmap.source != a.ring:
        raise ConfigMismatch("map source ring differs from series ring")
    sdeg = a.ring.degree
    tdeg = fmap.target.degree
    out: dict[GKey, dict[FKey, Coeff]] = {}
    max_drop = 0
    for g, p in a.terms.items():
        d_src = sdeg(g)
        for e, c in p.items():
            tg, tf = fmap.image_of(g, e)
            max_drop = max(max_drop, d_src - tdeg(tg))
            acc = out.setdefault(tg, {})
            v = acc.get(tf)
            acc[tf] = c if v is None else v + c
    order = a.order - max(0, max_drop)
    result = TruncatedSeries(fmap.target, _sweep(out), order).truncated(order)
    if not allow_laurent and not result.is_regular():
        raise RegularityError(
            f"substitution left terms of negative degree (certified order {order}); "
            "raise the source order or use the slicing machinery")
    return result


def permute_vars(a: TruncatedSeries, mapping: dict[str, str]) -> TruncatedSeries:
    """Relabel flavor variables bijectively inside the same ring."""
    ring = a.ring
    perm = list(range(ring.frank))
    for src, dst in mapping.items():
        perm[ring.flavor_index(src)] = ring.flavor_index(dst)
    if sorted(perm) != list(range(ring.frank)):
        raise ValueError("variable mapping is not a bijection")
    out = {}
    for g, p in a.terms.items():
        q = {}
        for e, c in p.items():
            e2 = [0] * len(e)
            for i, x in enumerate(e):
                e2[perm[i]] = x
            q[tuple(e2)] = c
        out[g] = q
    return TruncatedSeries(ring, out, a.order)


def invert_slot(a: TruncatedSeries, slot: str) -> TruncatedSeries:
    """z -> 1/z on one slot (negates its exponents)."""
    rng = a.ring.slot_range(slot)
    out = {}
    for g, p in a.terms.items():
        q = {}
        for e, c in p.items():
            e2 = tuple(-x if i in rng else x for i, x in enumerate(e))
            q[e2] = c
        out[g] = q
    return TruncatedSeries(a.ring, out, a.order)


def compare_to_order(a: TruncatedSeries, b: TruncatedSeries, order: int | None = None):
    """Exact coefficient-wise comparison up to the common certified order.

    Returns (equal, order_used, first_difference) where first_difference is
    None or (gkey, fkey, coeff_a, coeff_b).
    """
    if a.ring != b.ring:
        raise ConfigMismatch("cannot compare series from different rings")
    common = min(a.order, b.order)
    if order is not None:
        if order > common:
            raise CertifiedOrderError(
                f"comparison to order {order} requested but only {common} is certified")
        common = order
    ta = a.truncated(common).terms
    tb = b.truncated(common).terms
    if ta == tb:
        return True, common, None
    for g in sorted(set(ta) | set(tb)):
        pa = ta.get(g, {})
        pb = tb.get(g, {})
        if pa != pb:
            for e in sorted(set(pa) | set(pb)):
                ca, cb = pa.get(e, 0), pb.get(e, 0)
                if ca != cb:
                    return False, common, (g, e, ca, cb)
    raise AssertionError("unreachable")


def format_monomial(names, exps) -> str:
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def format_series(a: TruncatedSeries, max_flavor_terms: int | None = None) -> str:
    """Human-readable rendering, grouped by grading monomial."""
    ring = a.ring
    if not a.terms:
        return f"0  (certified to order {a.order})"
    lines = []
    for g in sorted(a.terms, key=lambda g: (ring.degree(g), g)):
        gname = format_monomial(ring.grading_vars, g) or "1"
        items = sorted(a.terms[g].items())
        if max_flavor_terms is not None and len(items) > max_flavor_terms:
            shown, extra = items[:max_flavor_terms], len(items) - max_flavor_terms
        else:
            shown, extra = items, 0
        chunks = []
        for e, c in shown:
            mono = format_monomial(ring.flavor_vars, e)
            if mono:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                chunks.append(f"{cs}{mono}")
            else:
                chunks.append(str(c))
        body = " + ".join(chunks).replace("+ -", "- ")
        if extra:
            body += f" + ... ({extra} more)"
        lines.append(f"[{gname}] {body}")
    lines.append(f"(certified to order {a.order})")
    return "\n".join(lines)
