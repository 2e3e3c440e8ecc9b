"""Weighted timed automata: data model, text format, validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .zones import OPS, conjoin_atom, dbm_unconstrained


@dataclass(frozen=True)
class ClockConstraint:
    """Atomic constraint `clock op value` with op in {<, <=, =, >=, >}."""

    clock: str
    op: str
    value: int

    def __str__(self) -> str:
        return f"{self.clock} {self.op} {self.value}"

    def sat_zero(self) -> bool:
        return _cmp(0, self.op, self.value)

    def sat2(self, value2: int) -> bool:
        """Satisfaction at a doubled-integer clock value."""
        return _cmp(value2, self.op, 2 * self.value)


def _cmp(a, op, b) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == ">=":
        return a >= b
    if op == ">":
        return a > b
    raise ValueError(f"unknown operator {op!r}")


@dataclass(frozen=True)
class Edge:
    source: str
    action: str
    guard: tuple[ClockConstraint, ...]
    resets: frozenset[str]
    target: str
    weight: int


@dataclass(frozen=True)
class Location:
    name: str
    invariant: tuple[ClockConstraint, ...] = ()
    labels: frozenset[str] = frozenset()
    is_goal: bool = False


@dataclass(frozen=True)
class Wta:
    clocks: tuple[str, ...]
    locations: tuple[Location, ...]
    initial: str
    edges: tuple[Edge, ...]

    @property
    def actions(self) -> frozenset[str]:
        return frozenset(e.action for e in self.edges)

    def location(self, name: str) -> Location:
        for loc in self.locations:
            if loc.name == name:
                return loc
        raise KeyError(f"unknown location {name!r}")

    def edges_from(self, name: str) -> list[Edge]:
        """Outgoing edges of a location, in declaration order."""
        self.location(name)
        return [e for e in self.edges if e.source == name]

    def labels_of(self, name: str) -> frozenset[str]:
        loc = self.location(name)
        if loc.is_goal:
            return loc.labels | {"goal"}
        return loc.labels


class ModelError(ValueError):
    """Parse or validation failure with a stable diagnostic code."""

    def __init__(self, code: str, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        self.code = code
        self.line = line
        self.column = column
        where = f" (line {line}" + (f", col {column})" if column else ")") if line else ""
        super().__init__(f"[{code}]{where} {message}")


# diagnostic codes, one malformed fixture each in tests/fixtures/errors
E_HEADER = "header"
E_SYNTAX = "syntax"
E_DUP_CLOCK = "duplicate-clock"
E_DUP_LOCATION = "duplicate-location"
E_UNKNOWN_CLOCK = "unknown-clock"
E_UNKNOWN_LOCATION = "unknown-location"
E_NO_INIT = "no-init"
E_MULTI_INIT = "multiple-init"
E_BAD_INVARIANT_OP = "bad-invariant-op"
E_INIT_INVARIANT = "init-invariant"
E_UNSAT_INVARIANT = "unsat-invariant"
E_BAD_WEIGHT = "bad-weight"


def parse_model(text: str) -> Wta:
    """Parse and validate the line-oriented model format."""
    lines = text.splitlines()
    clocks: list[str] = []
    locations: list[Location] = []
    edges: list[Edge] = []
    initial: Optional[str] = None
    saw_header = False

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        at = _Cursor(raw, lineno)
        if not saw_header:
            if toks != ["wta"]:
                raise ModelError(E_HEADER, "model must start with a 'wta' line", lineno)
            saw_header = True
            continue
        kind = toks[0]
        if kind == "clocks":
            for c in toks[1:]:
                if c in clocks:
                    raise ModelError(E_DUP_CLOCK, f"clock {c!r} declared twice",
                                     lineno, at.col(c))
                _check_ident(c, lineno)
                clocks.append(c)
        elif kind == "location":
            loc, is_init = _parse_location(toks[1:], clocks, at)
            if any(l.name == loc.name for l in locations):
                raise ModelError(E_DUP_LOCATION, f"location {loc.name!r} declared twice", lineno)
            if is_init:
                if initial is not None:
                    raise ModelError(E_MULTI_INIT, "more than one init location", lineno)
                initial = loc.name
            locations.append(loc)
        elif kind == "edge":
            edges.append(_parse_edge(toks[1:], clocks, at))
        else:
            raise ModelError(E_SYNTAX, f"unknown directive {kind!r}", lineno, at.col(kind))

    if not saw_header:
        raise ModelError(E_HEADER, "empty model: missing 'wta' header")
    if initial is None:
        raise ModelError(E_NO_INIT, "no location marked init")
    names = {l.name for l in locations}
    for e in edges:
        for end in (e.source, e.target):
            if end not in names:
                raise ModelError(E_UNKNOWN_LOCATION, f"edge endpoint {end!r} not declared")
    m = Wta(tuple(clocks), tuple(locations), initial, tuple(edges))
    _validate(m)
    return m


class _Cursor:
    """Line context for diagnostics; finds a token's column lazily."""

    def __init__(self, raw: str, lineno: int):
        self.raw = raw
        self.lineno = lineno

    def col(self, token: str) -> Optional[int]:
        pos = self.raw.find(token)
        return pos + 1 if pos >= 0 else None


def _check_ident(tok: str, lineno: int) -> None:
    if not tok or not (tok[0].isalpha() or tok[0] == "_") or not all(
            ch.isalnum() or ch == "_" for ch in tok):
        raise ModelError(E_SYNTAX, f"bad identifier {tok!r}", lineno)


def _parse_atoms(toks: list[str], clocks: list[str], at: "_Cursor") -> tuple[ClockConstraint, ...]:
    """Atoms are `clock op nat` triples joined by '&' tokens."""
    atoms = []
    lineno = at.lineno
    i = 0
    while i < len(toks):
        if len(toks) - i < 3:
            raise ModelError(E_SYNTAX, "truncated clock constraint", lineno)
        clock, op, val = toks[i], toks[i + 1], toks[i + 2]
        if clock not in clocks:
            raise ModelError(E_UNKNOWN_CLOCK, f"constraint on undeclared clock {clock!r}",
                             lineno, at.col(clock))
        if op not in OPS:
            raise ModelError(E_SYNTAX, f"bad comparison operator {op!r}", lineno, at.col(op))
        if not val.isdigit():
            raise ModelError(E_SYNTAX, f"constraint constant must be a natural, got {val!r}",
                             lineno, at.col(val))
        atoms.append(ClockConstraint(clock, op, int(val)))
        i += 3
        if i < len(toks):
            if toks[i] != "&":
                raise ModelError(E_SYNTAX, f"expected '&' between atoms, got {toks[i]!r}",
                                 lineno, at.col(toks[i]))
            i += 1
            if i >= len(toks):
                raise ModelError(E_SYNTAX, "dangling '&' in constraint", lineno)
    return tuple(atoms)


_LOC_KEYWORDS = {"init", "goal", "invariant", "labels"}


def _parse_location(toks: list[str], clocks: list[str], at: "_Cursor"):
    lineno = at.lineno
    if not toks:
        raise ModelError(E_SYNTAX, "location needs a name", lineno)
    name = toks[0]
    _check_ident(name, lineno)
    is_init = False
    is_goal = False
    invariant: tuple[ClockConstraint, ...] = ()
    labels: list[str] = []
    i = 1
    while i < len(toks):
        word = toks[i]
        if word == "init":
            is_init = True
            i += 1
        elif word == "goal":
            is_goal = True
            i += 1
        elif word == "invariant":
            j = i + 1
            while j < len(toks) and toks[j] not in _LOC_KEYWORDS:
                j += 1
            invariant = _parse_atoms(toks[i + 1:j], clocks, at)
            for a in invariant:
                if a.op not in ("<", "<="):
                    raise ModelError(E_BAD_INVARIANT_OP,
                                     f"invariant atom {a} must use < or <=", lineno)
            i = j
        elif word == "labels":
            j = i + 1
            while j < len(toks) and toks[j] not in _LOC_KEYWORDS:
                _check_ident(toks[j], lineno)
                labels.append(toks[j])
                j += 1
            i = j
        else:
            raise ModelError(E_SYNTAX, f"unexpected token {word!r} in location",
                             lineno, at.col(word))
    return Location(name, invariant, frozenset(labels), is_goal), is_init


def _parse_edge(toks: list[str], clocks: list[str], at: "_Cursor") -> Edge:
    # edge <src> -> <dst> action <a> [guard ...] [reset x,y] weight <n>
    lineno = at.lineno
    if len(toks) < 3 or toks[1] != "->":
        raise ModelError(E_SYNTAX, "edge must read '<src> -> <dst> ...'", lineno)
    src, dst = toks[0], toks[2]
    i = 3
    action = None
    guard: tuple[ClockConstraint, ...] = ()
    resets: frozenset[str] = frozenset()
    weight = None
    while i < len(toks):
        word = toks[i]
        if word == "action":
            if i + 1 >= len(toks):
                raise ModelError(E_SYNTAX, "edge action needs a name", lineno)
            action = toks[i + 1]
            i += 2
        elif word == "guard":
            j = i + 1
            while j < len(toks) and toks[j] not in ("reset", "weight", "action"):
                j += 1
            guard = _parse_atoms(toks[i + 1:j], clocks, at)
            i = j
        elif word == "reset":
            if i + 1 >= len(toks):
                raise ModelError(E_SYNTAX, "edge reset needs clocks", lineno)
            rs = [c for c in toks[i + 1].split(",") if c]
            for c in rs:
                if c not in clocks:
                    raise ModelError(E_UNKNOWN_CLOCK, f"reset of undeclared clock {c!r}",
                                     lineno, at.col(c))
            resets = frozenset(rs)
            i += 2
        elif word == "weight":
            if i + 1 >= len(toks) or not toks[i + 1].lstrip("-").isdigit():
                raise ModelError(E_SYNTAX, "edge weight needs a number", lineno)
            weight = int(toks[i + 1])
            if weight < 0:
                raise ModelError(E_BAD_WEIGHT, "edge weight must be a natural", lineno)
            i += 2
        else:
            raise ModelError(E_SYNTAX, f"unexpected token {word!r} in edge",
                             lineno, at.col(word))
    if action is None:
        raise ModelError(E_SYNTAX, "edge is missing its action", lineno)
    if weight is None:
        raise ModelError(E_SYNTAX, "edge is missing its weight", lineno)
    return Edge(src, action, guard, resets, dst, weight)


def _validate(m: Wta) -> None:
    init = m.location(m.initial)
    for a in init.invariant:
        if not a.sat_zero():
            raise ModelError(E_INIT_INVARIANT,
                             f"initial location violates its invariant at the zero valuation ({a})")
    index = {c: i + 1 for i, c in enumerate(m.clocks)}
    for loc in m.locations:
        d = dbm_unconstrained(len(m.clocks) + 1)
        for a in loc.invariant:
            d = conjoin_atom(d, index[a.clock], a.op, a.value)
            if d is None:
                # stricter than the definition requires; see design notes
                raise ModelError(E_UNSAT_INVARIANT,
                                 f"location {loc.name!r} has an unsatisfiable invariant")


def serialize_model(m: Wta) -> str:
    out = ["wta"]
    if m.clocks:
        out.append("clocks " + " ".join(m.clocks))
    for loc in m.locations:
        parts = [f"location {loc.name}"]
        if loc.name == m.initial:
            parts.append("init")
        if loc.is_goal:
            parts.append("goal")
        if loc.invariant:
            parts.append("invariant " + " & ".join(str(a) for a in loc.invariant))
        if loc.labels:
            parts.append("labels " + " ".join(sorted(loc.labels)))
        out.append(" ".join(parts))
    for e in m.edges:
        parts = [f"edge {e.source} -> {e.target} action {e.action}"]
        if e.guard:
            parts.append("guard " + " & ".join(str(a) for a in e.guard))
        if e.resets:
            parts.append("reset " + ",".join(sorted(e.resets)))
        parts.append(f"weight {e.weight}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ClockLayout:
    """Index layout for DBMs: 0 is the reference, then automaton clocks in
    declaration order, then formula clocks in first-binding order."""

    names: tuple[str, ...]
    index: dict = field(compare=False)
    dim: int = 0
    kvec: tuple[int, ...] = ()

    @staticmethod
    def build(m: Wta, formula_clocks: Iterable[str], kmap: dict) -> "ClockLayout":
        names = ("0",) + m.clocks + tuple(formula_clocks)
        index = {c: i for i, c in enumerate(names)}
        kvec = tuple(0 if n == "0" else kmap.get(n, 0) for n in names)
        return ClockLayout(names, index, len(names), kvec)


def max_constants(m: Wta, formula=None) -> dict[str, int]:
    """Per-clock max constant over guards, invariants and formula atoms.

    Clocks never compared map to 0; formula clocks are included when a
    formula is given.
    """
    out: dict[str, int] = {c: 0 for c in m.clocks}
    for loc in m.locations:
        for a in loc.invariant:
            out[a.clock] = max(out[a.clock], a.value)
    for e in m.edges:
        for a in e.guard:
            out[a.clock] = max(out[a.clock], a.value)
    if formula is not None:
        from . import logic

        for j in logic.formula_clocks(formula):
            out.setdefault(j, 0)
        for sub in logic.subformulas_by_size(formula):
            if isinstance(sub, logic.ClockAtom):
                out[sub.clock] = max(out.get(sub.clock, 0), sub.value)
    return out
