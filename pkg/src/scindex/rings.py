"""Ring configurations for truncated index series.

A ring fixes an ordered list of *grading* variables (the expansion
fugacities: p, q and a square-root variable s, u or tau), a truncation
order, and an ordered list of *flavor slots*, each carrying the maximal
torus variables of one flavor group.

Degrees are weighted: the nome variables p and q count 2, the square-root
variables s, u, tau count 1, so t = s^2 (or tau^2) counts 2 and the
combination pq/t is a genuine degree-2 monomial.  The truncation order of
a ring bounds the weighted total degree of every stored term.
"""

from __future__ import annotations

from dataclasses import dataclass

# weight of each known grading variable; p,q are the elliptic nomes
GRADING_WEIGHTS = {"p": 2, "q": 2, "s": 1, "u": 1, "tau": 1}


@dataclass(frozen=True)
class FlavorSlot:
    """One flavor torus: a name, an optional group label, and its variables."""

    name: str
    group: str | None
    vars: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.vars)


def slot_for_group(name: str, group: str | None, rank: int) -> FlavorSlot:
    """Slot with canonically named variables name1..name<rank>."""
    return FlavorSlot(name, group, tuple(f"{name}{i + 1}" for i in range(rank)))


class RingConfig:
    """Immutable description of the series ring; value-equality semantics."""

    __slots__ = ("grading_vars", "grading_weights", "truncation_order",
                 "slots", "flavor_vars", "_findex", "_gindex", "_key")

    def __init__(self, grading_vars, truncation_order, slots=(), grading_weights=None):
        grading_vars = tuple(grading_vars)
        if grading_weights is None:
            grading_weights = tuple(GRADING_WEIGHTS[v] for v in grading_vars)
        else:
            grading_weights = tuple(grading_weights)
        if len(grading_weights) != len(grading_vars):
            raise ValueError("one weight per grading variable")
        if truncation_order < 0:
            raise ValueError("truncation_order must be >= 0")
        slots = tuple(slots)
        names = list(grading_vars)
        for s in slots:
            names.extend(s.vars)
        if len(set(names)) != len(names):
            raise ValueError("grading and flavor variable names must be distinct")
        if len({s.name for s in slots}) != len(slots):
            raise ValueError("slot names must be distinct")
        self.grading_vars = grading_vars
        self.grading_weights = grading_weights
        self.truncation_order = truncation_order
        self.slots = slots
        self.flavor_vars = tuple(v for s in slots for v in s.vars)
        self._findex = {v: i for i, v in enumerate(self.flavor_vars)}
        self._gindex = {v: i for i, v in enumerate(grading_vars)}
        self._key = (grading_vars, grading_weights, truncation_order, slots)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, RingConfig) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        slots = ",".join(f"{s.name}:{s.group or '?'}({s.rank})" for s in self.slots)
        return (f"RingConfig({'/'.join(self.grading_vars)}, N={self.truncation_order}"
                + (f", slots=[{slots}]" if slots else "") + ")")

    # -- lookups ----------------------------------------------------------

    @property
    def grank(self) -> int:
        return len(self.grading_vars)

    @property
    def frank(self) -> int:
        return len(self.flavor_vars)

    def degree(self, gkey) -> int:
        """Weighted total degree of a grading exponent vector."""
        w = self.grading_weights
        return sum(w[i] * e for i, e in enumerate(gkey))

    def grading_index(self, name: str) -> int:
        return self._gindex[name]

    def flavor_index(self, name: str) -> int:
        return self._findex[name]

    def slot(self, name: str) -> FlavorSlot:
        for s in self.slots:
            if s.name == name:
                return s
        raise KeyError(f"unknown flavor slot {name!r}")

    def slot_range(self, name: str) -> range:
        """Index range of the slot's variables inside flavor exponent vectors."""
        start = 0
        for s in self.slots:
            if s.name == name:
                return range(start, start + s.rank)
            start += s.rank
        raise KeyError(f"unknown flavor slot {name!r}")

    # -- derived configs ---------------------------------------------------

    def with_order(self, order: int) -> "RingConfig":
        return RingConfig(self.grading_vars, order, self.slots, self.grading_weights)

    def without_slot(self, name: str) -> "RingConfig":
        self.slot(name)
        return RingConfig(self.grading_vars, self.truncation_order,
                          tuple(s for s in self.slots if s.name != name),
                          self.grading_weights)

    def with_slot_replaced(self, name: str, new_slot: FlavorSlot) -> "RingConfig":
        self.slot(name)
        return RingConfig(self.grading_vars, self.truncation_order,
                          tuple(new_slot if s.name == name else s for s in self.slots),
                          self.grading_weights)

    def with_slots(self, slots) -> "RingConfig":
        return RingConfig(self.grading_vars, self.truncation_order, slots,
                          self.grading_weights)

    # -- json ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "grading_vars": list(self.grading_vars),
            "grading_weights": list(self.grading_weights),
            "truncation_order": self.truncation_order,
            "flavor_slots": [
                {"name": s.name, "group": s.group, "vars": list(s.vars)}
                for s in self.slots
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "RingConfig":
        slots = tuple(FlavorSlot(d["name"], d.get("group"), tuple(d["vars"]))
                      for d in data["flavor_slots"])
        return RingConfig(tuple(data["grading_vars"]), data["truncation_order"],
                          slots, tuple(data["grading_weights"]))
