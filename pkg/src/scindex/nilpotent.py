"""Type-A nilpotent orbit combinatorics.

A nilpotent element of su(N) is a partition of N.  From it we read off
the sl2 triple's semisimple element h (weights n_i-1, n_i-3, ..., 1-n_i
per part), the commutant torus of S(prod_k U(m_k)), the adjoint
decomposition  g = sum_d V_d (x) R_d  under sl2 x commutant, the K_e
dressing factor  prod_d prod_{w in R_d} Gamma(t^{(d+1)/2} z^w), and the
slicing substitution  x -> z t^{h/2}.

Commutant charges live in Z^{M-1} (M = number of parts): characters of
the commutant torus are Z^M modulo the primitive vector of part sizes,
and we fix the basis once and for all as rows 2..M of a unimodular matrix
U with U.(parts/gcd) = e_1 (frozen by a golden test; physical comparisons
are stable under monomial reparameterization, which cmd_compare supports).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .gammas import gamma_tpow
from .rings import FlavorSlot, RingConfig
from .series import TruncatedSeries


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if not p or any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "[" + ",".join(map(str, self.parts)) + "]"


def _unimodular_completion(w: tuple[int, ...]):
    """Rows 2..M of a unimodular U with U w = e1, for primitive w.

    For w = (1,...,1) (equal parts) the difference rows e_k - e_{k+1} are
    used, which makes slicing by [1^N] literally the identity map; other
    shapes fold 2x2 Bezout blocks left to right, keeping the running gcd
    in position 0.
    """
    m = len(w)
    if all(x == 1 for x in w):
        return tuple(tuple(int(j == k) - int(j == k + 1) for j in range(m))
                     for k in range(m - 1))
    U = [[int(i == j) for j in range(m)] for i in range(m)]  # accumulates U
    vec = list(w)
    for j in range(1, m):
        a, b = vec[0], vec[j]
        if b == 0:
            continue
        g, x, y = _xgcd(a, b)
        # rows 0 and j of U get the 2x2 block [[x, y], [-b/g, a/g]]
        r0 = [x * U[0][k] + y * U[j][k] for k in range(m)]
        rj = [(-b // g) * U[0][k] + (a // g) * U[j][k] for k in range(m)]
        U[0], U[j] = r0, rj
        vec[0], vec[j] = g, 0
    assert vec[0] == 1 and all(v == 0 for v in vec[1:]), "w must be primitive"
    return tuple(tuple(row) for row in U[1:])


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class NilpotentData:
    partition: Partition
    h_weights: tuple[int, ...]            # diag of h, rows grouped by part
    row_part: tuple[int, ...]             # part index of each of the N rows
    commutant_rank: int
    charge_basis: tuple[tuple[int, ...], ...]   # (M-1) x M integer matrix
    decomposition: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]
    # list of (d, weights of R_d as commutant charge tuples)

    @property
    def n(self) -> int:
        return self.partition.n

    def adjoint_dimension_check(self) -> bool:
        total = sum(d * len(ws) for d, ws in self.decomposition)
        return total == self.n * self.n - 1

    def part_charge(self, part_index: int) -> tuple[int, ...]:
        """Commutant charge of the torus character e_{part_index}."""
        return tuple(row[part_index] for row in self.charge_basis)


def nilpotent_data(n: int, parts) -> NilpotentData:
    if isinstance(parts, Partition):
        part = parts
    else:
        part = Partition(tuple(parts))
    if part.n != n:
        raise ValueError(f"{part} is not a partition of {n}")
    ps = part.parts
    m = len(ps)
    h = []
    row_part = []
    for b, p in enumerate(ps):
        h.extend(range(p - 1, -p, -2))
        row_part.extend([b] * p)
    g = 0
    for p in ps:
        g = gcd(g, p)
    w = tuple(p // g for p in ps)
    basis = _unimodular_completion(w) if m > 1 else ()

    def charge(a, b):
        return tuple(row[a] - row[b] for row in basis)

    dec: dict[int, list[tuple[int, ...]]] = {}
    for a in range(m):
        for b in range(m):
            lo, hi = abs(ps[a] - ps[b]) + 1, ps[a] + ps[b] - 1
            for d in range(lo, hi + 1, 2):
                dec.setdefault(d, []).append(charge(a, b))
    # remove the overall U(1) killed by the su(N) trace condition
    zero = (0,) * (m - 1)
    dec[1].remove(zero)
    if not dec[1]:
        del dec[1]
    decomposition = tuple((d, tuple(sorted(dec[d]))) for d in sorted(dec))
    data = NilpotentData(part, tuple(h), tuple(row_part), m - 1, basis, decomposition)
    assert data.adjoint_dimension_check(), "adjoint dimension sum rule failed"
    assert sum(h) == 0
    return data


def commutant_slot(data: NilpotentData, name: str) -> FlavorSlot | None:
    if data.commutant_rank == 0:
        return None
    return FlavorSlot(name, None,
                      tuple(f"{name}{i + 1}" for i in range(data.commutant_rank)))


def k_factor(data: NilpotentData, ring: RingConfig, slot: str | None) -> TruncatedSeries:
    """K_e(z) = prod_d prod_{w in R_d} Gamma(t^{(d+1)/2} z^w) in the ring's limit."""
    order = ring.truncation_order
    acc = TruncatedSeries.one(ring, order)
    rng = ring.slot_range(slot) if slot is not None else None
    for d, weights in data.decomposition:
        for wt in weights:
            fkey = [0] * ring.frank
            if rng is not None:
                for i, c in zip(rng, wt):
                    fkey[i] = c
            elif any(wt):
                raise ValueError("charged weight but no commutant slot in the ring")
            acc = (acc * gamma_tpow(ring, d + 1, tuple(fkey), order=order)).truncated(order)
    return acc


def slice_exponents(data: NilpotentData, rank_source: int):
    """Per fundamental-weight source variable: (h-pairing, commutant charge).

    The source slot carries su(N) fundamental-weight fugacities; omega_i
    lifts to e_1+...+e_i, whose h-pairing and commutant charges are exact
    integers (the fractional trace part cancels against the determinant
    condition).
    """
    n = data.n
    if rank_source != n - 1:
        raise ValueError(f"slot rank {rank_source} does not match su({n})")
    out = []
    for i in range(1, n):
        hpair = sum(data.h_weights[:i])
        counts = [0] * (len(data.partition.parts))
        for r in range(i):
            counts[data.row_part[r]] += 1
        charge = tuple(sum(row[b] * counts[b] for b in range(len(counts)))
                       for row in data.charge_basis)
        out.append((hpair, charge))
    return out
