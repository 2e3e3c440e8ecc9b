"""Seeded random models and formulas for differential testing.

Guard, invariant and formula constraints default to the closed
comparisons {<=, =, >=}: the explicit oracle samples time at
half-integer points, and interlocking strict constraints can squeeze
the dense solution set into windows that miss that grid, making an
honest dense-vs-sampled comparison impossible.  Strict comparisons are
covered by the zone-level unit tests instead.
"""

from __future__ import annotations

import random

from . import logic
from .logic import TolFormula
from .model import ClockConstraint, Edge, Location, Wta

CLOSED_OPS = ("<=", "=", ">=")
PROPS = ("p", "q", "r")


def random_wta(rng: random.Random, *, max_locations: int = 4, max_clocks: int = 2,
               max_edges: int = 6, cmax: int = 3, ops=CLOSED_OPS,
               weights=(1, 2, 3)) -> Wta:
    nloc = rng.randint(1, max_locations)
    nclk = rng.randint(0, max_clocks)
    clocks = tuple("xy"[i] for i in range(nclk))
    names = [f"l{i}" for i in range(nloc)]
    locations = []
    for name in names:
        labels = frozenset(p for p in PROPS if rng.random() < 0.4)
        invariant = ()
        if clocks and rng.random() < 0.3:
            invariant = (ClockConstraint(rng.choice(clocks), "<=", rng.randint(0, cmax)),)
        locations.append(Location(name, invariant, labels, is_goal=rng.random() < 0.15))
    nedges = rng.randint(1, max_edges)
    edges = []
    for i in range(nedges):
        guard = tuple(
            ClockConstraint(rng.choice(clocks), rng.choice(ops), rng.randint(0, cmax))
            for _ in range(rng.randint(0, 2)) if clocks)
        resets = frozenset(c for c in clocks if rng.random() < 0.4)
        edges.append(Edge(rng.choice(names), f"a{i}", guard, resets,
                          rng.choice(names), rng.choice(weights)))
    return Wta(clocks, tuple(locations), names[0], tuple(edges))


def random_formula(rng: random.Random, m: Wta, *, grades=(0,), cmax: int = 3,
                   ops=CLOSED_OPS, max_strategic: int = 2,
                   freeze_prob: float = 0.4, max_depth: int = 4) -> TolFormula:
    use_freeze = rng.random() < freeze_prob
    clock_pool = list(m.clocks) + (["j"] if use_freeze else [])
    budget = [max_strategic]

    def atom() -> TolFormula:
        if clock_pool and rng.random() < 0.45:
            return logic.ClockAtom(rng.choice(clock_pool), rng.choice(ops),
                                   rng.randint(0, cmax))
        r = rng.random()
        if r < 0.1:
            return logic.TRUE
        if r < 0.15:
            return logic.FALSE
        return logic.Atom(rng.choice(PROPS + ("goal",)))

    def build(depth: int) -> TolFormula:
        if depth >= max_depth:
            return atom()
        r = rng.random()
        if r < 0.3:
            return atom()
        if r < 0.45:
            return logic.Not(build(depth + 1))
        if r < 0.6:
            return logic.And(build(depth + 1), build(depth + 1))
        if r < 0.7:
            return logic.Or(build(depth + 1), build(depth + 1))
        if budget[0] <= 0:
            return atom()
        budget[0] -= 1
        n = rng.choice(grades)
        kind = rng.random()
        if kind < 0.3:
            return logic.Until(n, build(depth + 1), build(depth + 1))
        if kind < 0.55:
            return logic.Release(n, build(depth + 1), build(depth + 1))
        if kind < 0.75:
            return logic.Finally(n, build(depth + 1))
        if kind < 0.95:
            return logic.Globally(n, build(depth + 1))
        return logic.WeakUntil(n, build(depth + 1), build(depth + 1))

    body = build(0)
    return logic.Freeze("j", body) if use_freeze else body


def random_tol_ast(rng: random.Random, *, max_depth: int = 6, cmax: int = 9,
                   depth: int = 0) -> TolFormula:
    """Arbitrary desugared ASTs (any grades, fresh freeze vars);
    for print/parse round-trips, not for checking."""
    if depth >= max_depth or rng.random() < 0.3:
        r = rng.random()
        if r < 0.2:
            return logic.TRUE
        if r < 0.6:
            return logic.Atom(rng.choice(("p", "q", "r", "s_1")))
        return logic.ClockAtom(rng.choice(("x", "y", "j", "k")),
                               rng.choice(("<", "<=", "=", ">=", ">")),
                               rng.randint(0, cmax))
    r = rng.random()
    nxt = depth + 1
    if r < 0.25:
        return logic.Not(random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt))
    if r < 0.5:
        return logic.And(random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt),
                         random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt))
    if r < 0.7:
        return logic.Until(rng.randint(0, 3),
                           random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt),
                           random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt))
    if r < 0.9:
        return logic.Release(rng.randint(0, 3),
                             random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt),
                             random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt))
    var = f"v{depth}"
    sub = random_tol_ast(rng, max_depth=max_depth, cmax=cmax, depth=nxt)
    return logic.Freeze(var, sub) if var not in logic.formula_clocks(sub) else sub


# -- disagreement shrinking ---------------------------------------------------

def shrink_disagreement(m: Wta, f: TolFormula, still_fails) -> tuple[Wta, TolFormula]:
    """Greedily shrink (model, formula) while still_fails(m, f) holds."""
    changed = True
    while changed:
        changed = False
        for cand_m in _model_shrinks(m):
            if _safe_fails(still_fails, cand_m, f):
                m = cand_m
                changed = True
                break
        if changed:
            continue
        for cand_f in _formula_shrinks(f):
            if _safe_fails(still_fails, m, cand_f):
                f = cand_f
                changed = True
                break
    return m, f


def _safe_fails(fn, m, f) -> bool:
    try:
        return fn(m, f)
    except Exception:
        return False


def _model_shrinks(m: Wta):
    for i in range(len(m.edges)):
        yield Wta(m.clocks, m.locations, m.initial, m.edges[:i] + m.edges[i + 1:])
    for i, loc in enumerate(m.locations):
        if loc.name == m.initial:
            continue
        rest = m.locations[:i] + m.locations[i + 1:]
        edges = tuple(e for e in m.edges
                      if e.source != loc.name and e.target != loc.name)
        yield Wta(m.clocks, rest, m.initial, edges)
    for i, loc in enumerate(m.locations):
        if loc.labels:
            slim = Location(loc.name, loc.invariant, frozenset(), loc.is_goal)
            yield Wta(m.clocks, m.locations[:i] + (slim,) + m.locations[i + 1:],
                      m.initial, m.edges)
        if loc.invariant:
            slim = Location(loc.name, (), loc.labels, loc.is_goal)
            yield Wta(m.clocks, m.locations[:i] + (slim,) + m.locations[i + 1:],
                      m.initial, m.edges)
    for i, e in enumerate(m.edges):
        if e.guard:
            yield Wta(m.clocks, m.locations, m.initial,
                      m.edges[:i] + (Edge(e.source, e.action, (), e.resets,
                                          e.target, e.weight),) + m.edges[i + 1:])
        if e.resets:
            yield Wta(m.clocks, m.locations, m.initial,
                      m.edges[:i] + (Edge(e.source, e.action, e.guard, frozenset(),
                                          e.target, e.weight),) + m.edges[i + 1:])


def _formula_shrinks(f: TolFormula):
    # try any strict subformula in place of the whole formula
    for sub in logic.subformulas_by_size(f)[:-1]:
        yield sub
    # and structural simplifications of the top node
    if isinstance(f, (logic.Not, logic.Freeze)):
        for s in _formula_shrinks(f.sub):
            yield type(f)(*(f.var, s)) if isinstance(f, logic.Freeze) else logic.Not(s)
    if isinstance(f, logic.And):
        for s in _formula_shrinks(f.left):
            yield logic.And(s, f.right)
        for s in _formula_shrinks(f.right):
            yield logic.And(f.left, s)
    if isinstance(f, (logic.Until, logic.Release)):
        node = type(f)
        for s in _formula_shrinks(f.left):
            yield node(f.grade, s, f.right)
        for s in _formula_shrinks(f.right):
            yield node(f.grade, f.left, s)
        yield node(f.grade, logic.TRUE, f.right)
