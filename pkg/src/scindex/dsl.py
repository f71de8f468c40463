"""Theory-expression DSL: a small recursive-descent parser.

Grammar:

    expr      := term ('*' term)*
    term      := hyp | gauge | slice | sphere | '(' expr ')'
    hyp       := 'hyp' '[' slotspec ':' weights ']'
    slotspec  := '(' slotdecl (',' slotdecl)* ')'
    slotdecl  := NAME (':' group)?
    weights   := defchain | wtuple (',' wtuple)*
    defchain  := 'def' (('@' | '*') 'def')*
    wtuple    := '(' coords (';' coords)* ')'     -- one coords group per slot
    coords    := INT (',' INT)*
    gauge     := 'gauge' '(' group '@' NAME ';' expr ')'
    slice     := 'slice' '(' expr ';' NAME ';' partition ')'
    sphere    := 'T' '[' group ']' '(' NAME (',' NAME)* ')'
    group     := 'su' INT | 'so8' | 'e6' | 'e7' | 'e8' | 'u1'
    partition := '[' INT (',' INT)* ']'

Unannotated hyp slots get their group inferred from uses elsewhere in the
same expression (a T[...] puncture or a gauge(...) binding).  Errors carry
the source position and what was expected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import (Gauge, Hyp, Product, Slice, SlotDecl, Sphere, TheoryExpr,
                     group_rank, rep_weights, tensor_weights)


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.pos = pos
        self.msg = msg


@dataclass
class _Token:
    kind: str   # name, int, punct, end
    text: str
    pos: int


_PUNCT = ("*", "(", ")", "[", "]", ",", ";", ":", "@")


def _lex(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(_Token("punct", c, i))
            i += 1
            continue
        if c == "⊗":   # tensor-product sign, same as '*' inside weights
            tokens.append(_Token("punct", "*", i))
            i += 1
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        raise ParseError(text, i, f"unexpected character {c!r}")
    tokens.append(_Token("end", "", n))
    return tokens


_GROUPS = ("so8", "e6", "e7", "e8", "u1")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    # -- token plumbing --

    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            raise ParseError(self.text, t.pos, f"expected {want!r}, got {got!r}")
        return self.next()

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    # -- grammar --

    def parse(self):
        expr = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(self.text, t.pos, f"trailing input starting at {t.text!r}")
        return expr

    def expr(self):
        factors = [self.term()]
        while self.at("punct", "*"):
            self.next()
            factors.append(self.term())
        return factors[0] if len(factors) == 1 else _RawProduct(tuple(factors))

    def term(self):
        t = self.peek()
        if t.kind == "punct" and t.text == "(":
            self.next()
            inner = self.expr()
            self.expect("punct", ")")
            return inner
        if t.kind == "name" and t.text == "hyp":
            return self.hyp()
        if t.kind == "name" and t.text == "gauge":
            return self.gauge()
        if t.kind == "name" and t.text == "slice":
            return self.slice_()
        if t.kind == "name" and t.text == "T":
            return self.sphere()
        raise ParseError(self.text, t.pos,
                         "expected 'hyp', 'gauge', 'slice', 'T[...]' or '('")

    def group(self) -> str:
        t = self.expect("name")
        g = t.text.lower()
        if g.startswith("su") and g[2:].isdigit() and int(g[2:]) >= 2:
            return g
        if g in _GROUPS:
            return g
        raise ParseError(self.text, t.pos, f"unknown group {t.text!r}")

    def slot_name(self) -> str:
        return self.expect("name").text

    def partition(self) -> tuple[int, ...]:
        self.expect("punct", "[")
        parts = [int(self.expect("int").text)]
        while self.at("punct", ","):
            self.next()
            parts.append(int(self.expect("int").text))
        self.expect("punct", "]")
        return tuple(parts)

    def hyp(self):
        self.expect("name", "hyp")
        self.expect("punct", "[")
        self.expect("punct", "(")
        decls = [self.slotdecl()]
        while self.at("punct", ","):
            self.next()
            decls.append(self.slotdecl())
        self.expect("punct", ")")
        self.expect("punct", ":")
        weights = self.weights(len(decls))
        self.expect("punct", "]")
        return _RawHyp(tuple(decls), weights)

    def slotdecl(self):
        name = self.slot_name()
        group = None
        if self.at("punct", ":"):
            save = self.i
            self.next()
            if self.at("name"):
                group = self.group()
            else:
                self.i = save
        return (name, group)

    def weights(self, n_slots: int):
        if self.at("name", "def"):
            pos = self.peek().pos
            count = 1
            self.next()
            while self.at("punct", "*") or self.at("punct", "@"):
                self.next()
                self.expect("name", "def")
                count += 1
            if count != n_slots:
                raise ParseError(self.text, pos,
                                 f"{count} 'def' factors for {n_slots} slots")
            return "def"
        rows = [self.wtuple(n_slots)]
        while self.at("punct", ","):
            self.next()
            rows.append(self.wtuple(n_slots))
        return tuple(rows)

    def wtuple(self, n_slots: int):
        pos = self.peek().pos
        self.expect("punct", "(")
        groups = [self.coords()]
        while self.at("punct", ";"):
            self.next()
            groups.append(self.coords())
        self.expect("punct", ")")
        if len(groups) != n_slots:
            raise ParseError(self.text, pos,
                             f"weight tuple has {len(groups)} slot groups, "
                             f"expected {n_slots}")
        return tuple(groups)

    def coords(self):
        vals = [int(self.expect("int").text)]
        while self.at("punct", ","):
            self.next()
            vals.append(int(self.expect("int").text))
        return tuple(vals)

    def gauge(self):
        self.expect("name", "gauge")
        self.expect("punct", "(")
        group = self.group()
        self.expect("punct", "@")
        slot = self.slot_name()
        self.expect("punct", ";")
        child = self.expr()
        self.expect("punct", ")")
        return _RawGauge(group, slot, child)

    def slice_(self):
        self.expect("name", "slice")
        self.expect("punct", "(")
        child = self.expr()
        self.expect("punct", ";")
        slot = self.slot_name()
        self.expect("punct", ";")
        part = self.partition()
        self.expect("punct", ")")
        return _RawSlice(child, slot, part)

    def sphere(self):
        self.expect("name", "T")
        self.expect("punct", "[")
        group = self.group()
        self.expect("punct", "]")
        self.expect("punct", "(")
        slots = [self.slot_name()]
        while self.at("punct", ","):
            self.next()
            slots.append(self.slot_name())
        self.expect("punct", ")")
        return _RawSphere(group, tuple(slots))


# Raw nodes: the surface tree before group inference resolves hyp slots.


@dataclass(frozen=True)
class _RawHyp:
    decls: tuple
    weights: object


@dataclass(frozen=True)
class _RawProduct:
    factors: tuple


@dataclass(frozen=True)
class _RawGauge:
    group: str
    slot: str
    child: object


@dataclass(frozen=True)
class _RawSlice:
    child: object
    slot: str
    partition: tuple


@dataclass(frozen=True)
class _RawSphere:
    group: str
    slots: tuple


def _collect_bindings(node, bound: dict):
    if isinstance(node, _RawHyp):
        for name, group in node.decls:
            if group is not None:
                _bind(bound, name, group)
    elif isinstance(node, _RawProduct):
        for f in node.factors:
            _collect_bindings(f, bound)
    elif isinstance(node, _RawGauge):
        _bind(bound, node.slot, node.group)
        _collect_bindings(node.child, bound)
    elif isinstance(node, _RawSlice):
        _collect_bindings(node.child, bound)
    elif isinstance(node, _RawSphere):
        for s in node.slots:
            _bind(bound, s, node.group)


def _bind(bound: dict, name: str, group: str):
    if bound.setdefault(name, group) != group:
        raise ValueError(f"slot {name!r} bound to both {bound[name]!r} and {group!r}")


def _resolve(node, bound: dict) -> TheoryExpr:
    if isinstance(node, _RawHyp):
        resolved = [group or bound.get(name) for name, group in node.decls]
        known = {g for g in resolved if g is not None}
        # def (x) def (x) ... products live in one group: spread it to any
        # unannotated slots of the same hyp
        fill = known.pop() if len(known) == 1 else None
        decls = []
        for (name, _), group in zip(node.decls, resolved):
            group = group or fill
            if group is None:
                raise ValueError(
                    f"slot {name!r} needs a group annotation (e.g. {name}:su2); "
                    "nothing else in the expression determines it")
            decls.append(SlotDecl(name, group))
        if node.weights == "def":
            rows = tensor_weights(*(rep_weights(d.group) for d in decls))
        else:
            rows = []
            for groups in node.weights:
                for d, g in zip(decls, groups):
                    if len(g) != group_rank(d.group):
                        raise ValueError(
                            f"weight coordinates {g} do not match rank "
                            f"{group_rank(d.group)} of slot {d.name!r}")
                rows.append(tuple(x for g in groups for x in g))
        return Hyp(tuple(decls), tuple(rows))
    if isinstance(node, _RawProduct):
        return Product(tuple(_resolve(f, bound) for f in node.factors))
    if isinstance(node, _RawGauge):
        return Gauge(node.group, node.slot, _resolve(node.child, bound))
    if isinstance(node, _RawSlice):
        return Slice(_resolve(node.child, bound), node.slot, node.partition)
    if isinstance(node, _RawSphere):
        return Sphere(node.group, node.slots)
    raise TypeError(node)


def parse(text: str) -> TheoryExpr:
    """Parse a theory expression; raises ParseError / ValueError with context."""
    raw = _Parser(text).parse()
    bound: dict = {}
    _collect_bindings(raw, bound)
    expr = _resolve(raw, bound)
    expr.free_slots()   # validates slot/rank consistency
    return expr


def unparse(expr: TheoryExpr) -> str:
    """Canonical text form (parse . unparse is the identity on it)."""
    if isinstance(expr, Hyp):
        decls = ",".join(f"{s.name}:{s.group}" for s in expr.slots)
        ranks = [group_rank(s.group) for s in expr.slots]
        rows = []
        for w in expr.weights:
            parts, i = [], 0
            for r in ranks:
                parts.append(",".join(str(x) for x in w[i:i + r]))
                i += r
            rows.append("(" + ";".join(parts) + ")")
        return f"hyp[({decls}):{','.join(rows)}]"
    if isinstance(expr, Product):
        return "*".join(f"({unparse(f)})" if isinstance(f, Product) else unparse(f)
                        for f in expr.factors)
    if isinstance(expr, Gauge):
        return f"gauge({expr.group}@{expr.slot};{unparse(expr.child)})"
    if isinstance(expr, Slice):
        part = ",".join(str(x) for x in expr.partition)
        return f"slice({unparse(expr.child)};{expr.slot};[{part}])"
    if isinstance(expr, Sphere):
        return f"T[{expr.group}](" + ",".join(expr.slots) + ")"
    raise TypeError(expr)
