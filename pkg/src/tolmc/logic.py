"""Formula ASTs, the surface parser, and the grade-0 TCTL translation.

ASTs are stored desugared: the only node kinds are truth, atomic
propositions, clock atoms, negation, conjunction, graded until/release
and the freeze binder.  F, G, weak-until, disjunction, implication and
`false` are surface sugar expanded at construction time:

    F p  == (true U p)          G p  == (false R p)
    p W q == (q R (p | q))      p | q == !(!p & !q)
    p -> q == !(p & !q)         false == !true
"""

from __future__ import annotations

from dataclasses import dataclass

from .zones import OPS


class TolFormula:
    pass


@dataclass(frozen=True)
class TrueF(TolFormula):
    pass


@dataclass(frozen=True)
class Atom(TolFormula):
    name: str


@dataclass(frozen=True)
class ClockAtom(TolFormula):
    clock: str
    op: str
    value: int


@dataclass(frozen=True)
class Not(TolFormula):
    sub: TolFormula


@dataclass(frozen=True)
class And(TolFormula):
    left: TolFormula
    right: TolFormula


@dataclass(frozen=True)
class Until(TolFormula):
    grade: int
    left: TolFormula
    right: TolFormula


@dataclass(frozen=True)
class Release(TolFormula):
    grade: int
    left: TolFormula
    right: TolFormula


@dataclass(frozen=True)
class Freeze(TolFormula):
    var: str
    sub: TolFormula


TRUE = TrueF()
FALSE = Not(TRUE)


def Or(a: TolFormula, b: TolFormula) -> TolFormula:
    return Not(And(Not(a), Not(b)))


def Implies(a: TolFormula, b: TolFormula) -> TolFormula:
    return Not(And(a, Not(b)))


def Finally(n: int, f: TolFormula) -> TolFormula:
    return Until(n, TRUE, f)


def Globally(n: int, f: TolFormula) -> TolFormula:
    return Release(n, FALSE, f)


def WeakUntil(n: int, a: TolFormula, b: TolFormula) -> TolFormula:
    return Release(n, b, Or(a, b))


class FormulaError(ValueError):
    def __init__(self, message: str, pos: int = -1):
        self.pos = pos
        super().__init__(message if pos < 0 else f"{message} (at char {pos})")


class FragmentError(ValueError):
    """Raised when a translation needs grade 0 but found a higher grade."""


# -- parsing -----------------------------------------------------------------

_KEYWORDS = {"true", "false", "U", "R", "F", "G", "W"}


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("<#", i):
            j = i + 2
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 2 or j >= n or text[j] != ">":
                raise FormulaError("malformed grade annotation, expected <#n>", i)
            toks.append(("grade", int(text[i + 2:j]), i))
            i = j + 1
            continue
        if text.startswith("->", i):
            toks.append(("op", "->", i))
            i += 2
            continue
        if text.startswith("<=", i) or text.startswith(">=", i):
            toks.append(("cmp", text[i:i + 2], i))
            i += 2
            continue
        if ch in "<>=":
            toks.append(("cmp", ch, i))
            i += 1
            continue
        if ch in "!&|().":
            toks.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("nat", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                toks.append(("kw", word, i))
            else:
                toks.append(("ident", word, i))
            i = j
            continue
        raise FormulaError(f"unexpected character {ch!r}", i)
    toks.append(("eof", None, n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            raise FormulaError(f"expected {value or kind}, got {t[1]!r}", t[2])
        return t

    def parse(self) -> TolFormula:
        f = self.implies()
        t = self.peek()
        if t[0] != "eof":
            raise FormulaError(f"trailing input {t[1]!r}", t[2])
        return f

    def implies(self) -> TolFormula:
        left = self.disj()
        if self.peek()[:2] == ("op", "->"):
            self.next()
            return Implies(left, self.implies())
        return left

    def disj(self) -> TolFormula:
        f = self.conj()
        while self.peek()[:2] == ("op", "|"):
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> TolFormula:
        f = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> TolFormula:
        t = self.peek()
        if t[:2] == ("op", "!"):
            self.next()
            return Not(self.unary())
        if t[0] == "grade":
            return self.temporal()
        if t[0] == "ident" and self.toks[self.pos + 1][:2] == ("op", "."):
            var = self.next()[1]
            self.next()
            return Freeze(var, self.unary())
        return self.primary()

    def temporal(self) -> TolFormula:
        n = self.expect("grade")[1]
        t = self.peek()
        if t[:2] == ("kw", "F"):
            self.next()
            return Finally(n, self.unary())
        if t[:2] == ("kw", "G"):
            self.next()
            return Globally(n, self.unary())
        self.expect("op", "(")
        left = self.implies()
        op = self.next()
        if op[0] != "kw" or op[1] not in ("U", "R", "W"):
            raise FormulaError(f"expected U, R or W inside graded operator, got {op[1]!r}", op[2])
        right = self.implies()
        self.expect("op", ")")
        if op[1] == "U":
            return Until(n, left, right)
        if op[1] == "R":
            return Release(n, left, right)
        return WeakUntil(n, left, right)

    def primary(self) -> TolFormula:
        t = self.next()
        if t[:2] == ("kw", "true"):
            return TRUE
        if t[:2] == ("kw", "false"):
            return FALSE
        if t[:2] == ("op", "("):
            f = self.implies()
            self.expect("op", ")")
            return f
        if t[0] == "ident":
            nxt = self.peek()
            if nxt[0] == "cmp":
                op = self.next()[1]
                if op not in OPS:
                    raise FormulaError(f"bad comparison {op!r}", nxt[2])
                v = self.expect("nat")[1]
                return ClockAtom(t[1], op, v)
            return Atom(t[1])
        raise FormulaError(f"unexpected token {t[1]!r}", t[2])


def parse_formula(text: str) -> TolFormula:
    f = _Parser(text).parse()
    _reject_shadowing(f, frozenset())
    return f


def _reject_shadowing(f: TolFormula, bound: frozenset) -> None:
    # rebinding a freeze identifier in a nested scope has no defined meaning
    if isinstance(f, Freeze):
        if f.var in bound:
            raise FormulaError(f"freeze identifier {f.var!r} rebound in nested scope")
        _reject_shadowing(f.sub, bound | {f.var})
    elif isinstance(f, Not):
        _reject_shadowing(f.sub, bound)
    elif isinstance(f, (And, Until, Release)):
        _reject_shadowing(f.left, bound)
        _reject_shadowing(f.right, bound)


def print_formula(f: TolFormula) -> str:
    """Re-parseable text; desugared nodes print in core syntax."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, ClockAtom):
        return f"{f.clock} {f.op} {f.value}"
    if isinstance(f, Not):
        return f"! ({print_formula(f.sub)})"
    if isinstance(f, And):
        return f"({print_formula(f.left)} & {print_formula(f.right)})"
    if isinstance(f, Until):
        return f"<#{f.grade}> ({print_formula(f.left)} U {print_formula(f.right)})"
    if isinstance(f, Release):
        return f"<#{f.grade}> ({print_formula(f.left)} R {print_formula(f.right)})"
    if isinstance(f, Freeze):
        return f"{f.var} . ({print_formula(f.sub)})"
    raise TypeError(f"not a formula node: {f!r}")


# -- structure ---------------------------------------------------------------

def size(f: TolFormula) -> int:
    """Connective count."""
    if isinstance(f, (TrueF, Atom, ClockAtom)):
        return 0
    if isinstance(f, (Not, Freeze)):
        return 1 + size(f.sub)
    return 1 + size(f.left) + size(f.right)


def subformulas_by_size(f: TolFormula) -> list[TolFormula]:
    """Distinct subformulas ordered by connective count (stable ties)."""
    seen: dict[TolFormula, int] = {}

    def walk(g: TolFormula) -> None:
        if isinstance(g, (Not, Freeze)):
            walk(g.sub)
        elif isinstance(g, (And, Until, Release)):
            walk(g.left)
            walk(g.right)
        if g not in seen:
            seen[g] = len(seen)
    walk(f)
    return sorted(seen, key=lambda g: (size(g), seen[g]))


def formula_clocks(f: TolFormula) -> tuple[str, ...]:
    """Freeze-bound identifiers in first-binding order."""
    out: list[str] = []

    def walk(g: TolFormula) -> None:
        if isinstance(g, Freeze):
            if g.var not in out:
                out.append(g.var)
            walk(g.sub)
        elif isinstance(g, (Not,)):
            walk(g.sub)
        elif isinstance(g, (And, Until, Release)):
            walk(g.left)
            walk(g.right)
    walk(f)
    return tuple(out)


# -- TCTL image of the grade-0 fragment --------------------------------------

class TctlFormula:
    pass


@dataclass(frozen=True)
class TTrue(TctlFormula):
    pass


@dataclass(frozen=True)
class TAtom(TctlFormula):
    name: str


@dataclass(frozen=True)
class TClockAtom(TctlFormula):
    clock: str
    op: str
    value: int


@dataclass(frozen=True)
class TNot(TctlFormula):
    sub: TctlFormula


@dataclass(frozen=True)
class TAnd(TctlFormula):
    left: TctlFormula
    right: TctlFormula


@dataclass(frozen=True)
class TAU(TctlFormula):
    left: TctlFormula
    right: TctlFormula


@dataclass(frozen=True)
class TAR(TctlFormula):
    left: TctlFormula
    right: TctlFormula


@dataclass(frozen=True)
class TFreeze(TctlFormula):
    var: str
    sub: TctlFormula


def to_tctl(f: TolFormula) -> TctlFormula:
    """Structure-preserving translation; defined on grade 0 only."""
    if isinstance(f, TrueF):
        return TTrue()
    if isinstance(f, Atom):
        return TAtom(f.name)
    if isinstance(f, ClockAtom):
        return TClockAtom(f.clock, f.op, f.value)
    if isinstance(f, Not):
        return TNot(to_tctl(f.sub))
    if isinstance(f, And):
        return TAnd(to_tctl(f.left), to_tctl(f.right))
    if isinstance(f, Until):
        if f.grade != 0:
            raise FragmentError(f"grade {f.grade} until is outside the grade-0 fragment")
        return TAU(to_tctl(f.left), to_tctl(f.right))
    if isinstance(f, Release):
        if f.grade != 0:
            raise FragmentError(f"grade {f.grade} release is outside the grade-0 fragment")
        return TAR(to_tctl(f.left), to_tctl(f.right))
    if isinstance(f, Freeze):
        return TFreeze(f.var, to_tctl(f.sub))
    raise TypeError(f"not a formula node: {f!r}")


def print_tctl(f: TctlFormula) -> str:
    if isinstance(f, TTrue):
        return "true"
    if isinstance(f, TAtom):
        return f.name
    if isinstance(f, TClockAtom):
        return f"{f.clock} {f.op} {f.value}"
    if isinstance(f, TNot):
        return f"! ({print_tctl(f.sub)})"
    if isinstance(f, TAnd):
        return f"({print_tctl(f.left)} & {print_tctl(f.right)})"
    if isinstance(f, TAU):
        return f"A ({print_tctl(f.left)} U {print_tctl(f.right)})"
    if isinstance(f, TAR):
        return f"A ({print_tctl(f.left)} R {print_tctl(f.right)})"
    if isinstance(f, TFreeze):
        return f"{f.var} . ({print_tctl(f.sub)})"
    raise TypeError(f"not a TCTL node: {f!r}")
