"""Explicit-state reference checker on a half-integer discretization.

States sample every clock (automaton and formula clocks alike) at
half-integer points capped at max_constant + 1; the cap value stands
for "anything larger", which rectangular constraints cannot
distinguish.  Steps are delay-then-edge composites between grid
states.  Strategic operators are decided as turn-based games with
per-state blocker choices, solved by linear-time counting fixpoints;
grade 0 additionally has a second, independent textbook AU/AR path
used for cross-checks, and small instances support exhaustive
enumeration of location-constant blocker choices for witness
extraction.

Coordinates are stored doubled (1 unit = half a time unit) so all
arithmetic stays integral.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from . import logic
from .model import ClockLayout, Wta, max_constants


class OracleScaleError(RuntimeError):
    """Instance too large for explicit enumeration."""


@dataclass
class ExplicitGraph:
    m: Wta
    layout: ClockLayout
    caps2: tuple[int, ...]          # doubled cap per clock index (index 0 unused)
    states: list                    # (loc_name, coords) with coords doubled
    index: dict                     # state -> position
    steps: list                     # per state: list of (edge_idx, weight, targets tuple)
    preds: dict = field(default_factory=dict)   # built lazily
    at_cap: list = field(default_factory=list)  # pure-delay self-loop marker

    def initial_index(self) -> int:
        coords = (0,) * (self.layout.dim - 1)
        return self.index[(self.m.initial, coords)]

    def point2(self, i: int):
        return (0,) + self.states[i][1]

    def build_preds(self) -> None:
        if self.preds:
            return
        preds: dict[int, list] = {}
        for s, groups in enumerate(self.steps):
            for local, (_, _, targets) in enumerate(groups):
                for t in targets:
                    preds.setdefault(t, []).append((s, local))
        self.preds = preds

    def reachable(self) -> bytearray:
        """States reachable from the initial state by delay-then-edge steps."""
        seen = bytearray(len(self.states))
        work = [self.initial_index()]
        seen[work[0]] = 1
        while work:
            s = work.pop()
            for _, _, targets in self.steps[s]:
                for t in targets:
                    if not seen[t]:
                        seen[t] = 1
                        work.append(t)
        return seen


def discretize(m: Wta, f=None, cap: int = 2_000_000) -> ExplicitGraph:
    """Build the capped half-integer quotient of the model's state space."""
    fclocks = logic.formula_clocks(f) if f is not None else ()
    kmap = max_constants(m, f)
    layout = ClockLayout.build(m, fclocks, kmap)
    caps2 = tuple(0 if i == 0 else 2 * (layout.kvec[i] + 1)
                  for i in range(layout.dim))

    est = len(m.locations)
    for i in range(1, layout.dim):
        est *= caps2[i] + 1
    if est > cap:
        raise OracleScaleError(
            f"discretization needs {est} states, over the cap of {cap}")

    nclocks = layout.dim - 1
    inv_atoms = {loc.name: [(layout.index[a.clock] - 1, a) for a in loc.invariant]
                 for loc in m.locations}

    def inv_ok(loc: str, coords) -> bool:
        return all(a.sat2(coords[ci]) for ci, a in inv_atoms[loc])

    states = []
    index: dict = {}
    ranges = [range(caps2[i] + 1) for i in range(1, layout.dim)]
    for loc in m.locations:
        for coords in itertools.product(*ranges) if nclocks else [()]:
            if inv_ok(loc.name, coords):
                index[(loc.name, coords)] = len(states)
                states.append((loc.name, coords))

    edges_by_loc: dict[str, list] = {loc.name: [] for loc in m.locations}
    for ei, e in enumerate(m.edges):
        edges_by_loc[e.source].append(
            (ei, e, [(layout.index[a.clock] - 1, a) for a in e.guard],
             [layout.index[c] - 1 for c in e.resets]))

    steps: list[list] = []
    at_cap: list[bool] = []
    for loc, coords in states:
        found: dict[int, set] = {}
        max_delay = max((caps2[i + 1] - coords[i] for i in range(nclocks)), default=0)
        for d2 in range(max_delay + 1):
            shifted = tuple(min(coords[i] + d2, caps2[i + 1]) for i in range(nclocks))
            if not inv_ok(loc, shifted):
                break  # upper-bound invariants never recover under delay
            for ei, e, guard, resets in edges_by_loc[loc]:
                if not all(a.sat2(shifted[ci]) for ci, a in guard):
                    continue
                landing = list(shifted)
                for ci in resets:
                    landing[ci] = 0
                key = (e.target, tuple(landing))
                if key in index:
                    found.setdefault(ei, set()).add(index[key])
        groups = [(ei, m.edges[ei].weight, tuple(sorted(ts)))
                  for ei, ts in sorted(found.items())]
        steps.append(groups)
        at_cap.append(all(coords[i] == caps2[i + 1] for i in range(nclocks)))

    return ExplicitGraph(m, layout, caps2, states, index, steps, {}, at_cap)


# -- game fixpoints with per-state blocker choices ---------------------------

def until_game(g: ExplicitGraph, n: int, s1: bytearray, s2: bytearray) -> bytearray:
    """States from which a budget-n blocker forces (s1 U s2) along all plays."""
    g.build_preds()
    nstates = len(g.states)
    y = bytearray(s2)
    out_count = [[0] * len(g.steps[s]) for s in range(nstates)]
    esc_cost = [0] * nstates
    witness = [0] * nstates
    for s in range(nstates):
        for local, (_, w, targets) in enumerate(g.steps[s]):
            cnt = sum(1 for t in targets if not y[t])
            out_count[s][local] = cnt
            if cnt:
                esc_cost[s] += w
            else:
                witness[s] += 1

    def qualifies(s: int) -> bool:
        return bool(s1[s]) and esc_cost[s] <= n and witness[s] > 0

    # counts above already account for the S2 seeds; only enqueue new joins
    work = deque()
    for s in range(nstates):
        if not y[s] and qualifies(s):
            y[s] = 1
            work.append(s)
    while work:
        t = work.popleft()
        for s, local in g.preds.get(t, ()):
            out_count[s][local] -= 1
            if out_count[s][local] == 0:
                esc_cost[s] -= g.steps[s][local][1]
                witness[s] += 1
                if not y[s] and qualifies(s):
                    y[s] = 1
                    work.append(s)
    return y


def release_game(g: ExplicitGraph, n: int, s1: bytearray, s2: bytearray) -> bytearray:
    """States from which a budget-n blocker maintains (s1 R s2) along all plays."""
    g.build_preds()
    nstates = len(g.states)
    y = bytearray([1]) * nstates
    out_count = [[0] * len(g.steps[s]) for s in range(nstates)]
    esc_cost = [0] * nstates
    witness = [len(g.steps[s]) for s in range(nstates)]

    def holds(s: int) -> bool:
        if not s2[s]:
            return False
        if s1[s]:
            return True
        return esc_cost[s] <= n and witness[s] > 0

    work = deque()
    for s in range(nstates):
        if not holds(s):
            y[s] = 0
            work.append(s)
    while work:
        t = work.popleft()
        for s, local in g.preds.get(t, ()):
            if not y[s]:
                continue
            out_count[s][local] += 1
            if out_count[s][local] == 1:
                esc_cost[s] += g.steps[s][local][1]
                witness[s] -= 1
                if not holds(s):
                    y[s] = 0
                    work.append(s)
    return y


# -- independent textbook AU/AR (second code path, grade-0 cross-check) ------

def _succ_sets(g: ExplicitGraph) -> list:
    return [sorted({t for _, _, targets in g.steps[s] for t in targets})
            for s in range(len(g.states))]


def au_tctl(g: ExplicitGraph, s1: bytearray, s2: bytearray) -> bytearray:
    succs = _succ_sets(g)
    y = bytearray(s2)
    changed = True
    while changed:
        changed = False
        for s in range(len(g.states)):
            if y[s] or not s1[s]:
                continue
            if succs[s] and all(y[t] for t in succs[s]):
                y[s] = 1
                changed = True
    return y


def ar_tctl(g: ExplicitGraph, s1: bytearray, s2: bytearray) -> bytearray:
    succs = _succ_sets(g)
    y = bytearray(s2)
    changed = True
    while changed:
        changed = False
        for s in range(len(g.states)):
            if not y[s] or s1[s]:
                continue
            if not succs[s] or not all(y[t] for t in succs[s]):
                y[s] = 0
                changed = True
    return y


# -- bottom-up satisfaction over the explicit graph --------------------------

def _atom_set(g: ExplicitGraph, psi) -> bytearray:
    n = len(g.states)
    if isinstance(psi, (logic.TrueF, logic.TTrue)):
        return bytearray([1]) * n
    if isinstance(psi, (logic.Atom, logic.TAtom)):
        labelled = {loc.name for loc in g.m.locations
                    if psi.name in g.m.labels_of(loc.name)}
        return bytearray(1 if g.states[s][0] in labelled else 0 for s in range(n))
    if isinstance(psi, (logic.ClockAtom, logic.TClockAtom)):
        ci = g.layout.index[psi.clock] - 1
        return bytearray(1 if _cmp2(g.states[s][1][ci], psi.op, psi.value) else 0
                         for s in range(n))
    raise TypeError(f"not atomic: {psi!r}")


def _cmp2(value2: int, op: str, c: int) -> bool:
    c2 = 2 * c
    return {"<": value2 < c2, "<=": value2 <= c2, "=": value2 == c2,
            ">=": value2 >= c2, ">": value2 > c2}[op]


def _freeze_set(g: ExplicitGraph, var: str, inner: bytearray) -> bytearray:
    ci = g.layout.index[var] - 1
    out = bytearray(len(g.states))
    for s, (loc, coords) in enumerate(g.states):
        if coords[ci] == 0:
            out[s] = inner[s]
        else:
            reset_coords = coords[:ci] + (0,) + coords[ci + 1:]
            out[s] = inner[g.index[(loc, reset_coords)]]
    return out


def oracle_sat(g: ExplicitGraph, f: logic.TolFormula) -> dict:
    """Sat sets for every subformula, via the per-state game fixpoints."""
    sat: dict = {}
    n = len(g.states)
    for psi in logic.subformulas_by_size(f):
        if isinstance(psi, (logic.TrueF, logic.Atom, logic.ClockAtom)):
            sat[psi] = _atom_set(g, psi)
        elif isinstance(psi, logic.Not):
            inner = sat[psi.sub]
            sat[psi] = bytearray(1 - inner[s] for s in range(n))
        elif isinstance(psi, logic.And):
            a, b = sat[psi.left], sat[psi.right]
            sat[psi] = bytearray(a[s] & b[s] for s in range(n))
        elif isinstance(psi, logic.Until):
            sat[psi] = until_game(g, psi.grade, sat[psi.left], sat[psi.right])
        elif isinstance(psi, logic.Release):
            sat[psi] = release_game(g, psi.grade, sat[psi.left], sat[psi.right])
        elif isinstance(psi, logic.Freeze):
            sat[psi] = _freeze_set(g, psi.var, sat[psi.sub])
        else:
            raise TypeError(f"not a formula node: {psi!r}")
    return sat


def oracle_check(m: Wta, f: logic.TolFormula, cap: int = 2_000_000,
                 graph: ExplicitGraph | None = None) -> bool:
    g = graph if graph is not None else discretize(m, f, cap)
    sat = oracle_sat(g, f)
    return bool(sat[f][g.initial_index()])


def _tctl_subformulas(f: logic.TctlFormula) -> list:
    seen: dict = {}

    def walk(g) -> None:
        if isinstance(g, (logic.TNot, logic.TFreeze)):
            walk(g.sub)
        elif isinstance(g, (logic.TAnd, logic.TAU, logic.TAR)):
            walk(g.left)
            walk(g.right)
        if g not in seen:
            seen[g] = len(seen)

    walk(f)

    def tsize(g) -> int:
        if isinstance(g, (logic.TTrue, logic.TAtom, logic.TClockAtom)):
            return 0
        if isinstance(g, (logic.TNot, logic.TFreeze)):
            return 1 + tsize(g.sub)
        return 1 + tsize(g.left) + tsize(g.right)

    return sorted(seen, key=lambda g: (tsize(g), seen[g]))


def tctl_check(m: Wta, f: logic.TctlFormula, cap: int = 2_000_000,
               graph: ExplicitGraph | None = None,
               formula_clocks=()) -> bool:
    """Textbook TCTL fixpoint verdict on the discretization (independent
    of the game machinery; used to validate the grade-0 fragment)."""
    g = graph
    if g is None:
        tol = _tctl_to_tol(f)
        g = discretize(m, tol, cap)
    sat: dict = {}
    n = len(g.states)
    for psi in _tctl_subformulas(f):
        if isinstance(psi, (logic.TTrue, logic.TAtom, logic.TClockAtom)):
            sat[psi] = _atom_set(g, psi)
        elif isinstance(psi, logic.TNot):
            inner = sat[psi.sub]
            sat[psi] = bytearray(1 - inner[s] for s in range(n))
        elif isinstance(psi, logic.TAnd):
            a, b = sat[psi.left], sat[psi.right]
            sat[psi] = bytearray(a[s] & b[s] for s in range(n))
        elif isinstance(psi, logic.TAU):
            sat[psi] = au_tctl(g, sat[psi.left], sat[psi.right])
        elif isinstance(psi, logic.TAR):
            sat[psi] = ar_tctl(g, sat[psi.left], sat[psi.right])
        elif isinstance(psi, logic.TFreeze):
            sat[psi] = _freeze_set(g, psi.var, sat[psi.sub])
        else:
            raise TypeError(f"not a TCTL node: {psi!r}")
    return bool(sat[f][g.initial_index()])


def _tctl_to_tol(f: logic.TctlFormula) -> logic.TolFormula:
    """Inverse image of the grade-0 translation (for layout building)."""
    if isinstance(f, logic.TTrue):
        return logic.TRUE
    if isinstance(f, logic.TAtom):
        return logic.Atom(f.name)
    if isinstance(f, logic.TClockAtom):
        return logic.ClockAtom(f.clock, f.op, f.value)
    if isinstance(f, logic.TNot):
        return logic.Not(_tctl_to_tol(f.sub))
    if isinstance(f, logic.TAnd):
        return logic.And(_tctl_to_tol(f.left), _tctl_to_tol(f.right))
    if isinstance(f, logic.TAU):
        return logic.Until(0, _tctl_to_tol(f.left), _tctl_to_tol(f.right))
    if isinstance(f, logic.TAR):
        return logic.Release(0, _tctl_to_tol(f.left), _tctl_to_tol(f.right))
    if isinstance(f, logic.TFreeze):
        return logic.Freeze(f.var, _tctl_to_tol(f.sub))
    raise TypeError(f"not a TCTL node: {f!r}")


# -- differential harness -----------------------------------------------------

@dataclass
class DiffReport:
    agree: bool
    checker_verdict: bool
    oracle_verdict: bool
    mismatched_formula: str | None = None
    mismatched_states: list = field(default_factory=list)
    mismatched_dump: str = ""

    def __str__(self) -> str:
        if self.agree:
            return (f"AGREE verdict={'SAT' if self.checker_verdict else 'UNSAT'}")
        lines = [f"DISAGREE checker={self.checker_verdict} oracle={self.oracle_verdict}"]
        if self.mismatched_formula:
            lines.append(f"smallest mismatched subformula: {self.mismatched_formula}")
            for loc, coords, sym, orc in self.mismatched_states[:20]:
                lines.append(f"  state ({loc}, {coords}): checker={sym} oracle={orc}")
            if self.mismatched_dump:
                lines.append("checker sat set:")
                lines.append(self.mismatched_dump)
        return "\n".join(lines)


def differential(m: Wta, f: logic.TolFormula, cap: int = 2_000_000,
                 pred_opts: dict | None = None, deep: bool = False,
                 compare_all_states: bool = False) -> DiffReport:
    """Run both checkers; agreement means equal verdicts at the initial state.

    On disagreement (or with deep=True) the report also carries the
    smallest subformula whose satisfaction sets differ on the sample
    grid, with the differing states and the checker's set dump.  The
    grid comparison defaults to states reachable from the initial one:
    at mixed half-fraction valuations the half-integer quotient is
    knowingly coarser than dense time (negating a closed atom opens a
    strict window that can fall between sample points), and a freeze
    binder projects onto such valuations, so all-states comparison is
    diagnostics only.
    """
    from .checker import check

    verdict = check(m, f, pred_opts=pred_opts)
    g = discretize(m, f, cap)
    osat = oracle_sat(g, f)
    o_verdict = bool(osat[f][g.initial_index()])
    report = DiffReport(agree=verdict.satisfied == o_verdict,
                        checker_verdict=verdict.satisfied,
                        oracle_verdict=o_verdict)
    if report.agree and not deep:
        return report
    grid_ok = _compare_grids(m, f, g, verdict.sat_sets, osat, report,
                             compare_all_states)
    if deep and not grid_ok:
        report.agree = False
    return report


def _compare_grids(m, f, g, sat_sets, osat, report, compare_all_states) -> bool:
    from .checker import dump_sat

    scope = bytearray([1]) * len(g.states) if compare_all_states else g.reachable()
    for psi in logic.subformulas_by_size(f):
        fed = sat_sets[psi]
        obits = osat[psi]
        bad = []
        for s, (loc, coords) in enumerate(g.states):
            if not scope[s]:
                continue
            sym = fed.contains_point(loc, (0,) + coords)
            if sym != bool(obits[s]):
                bad.append((loc, coords, sym, bool(obits[s])))
        if bad:
            report.mismatched_formula = logic.print_formula(psi)
            report.mismatched_states = bad
            report.mismatched_dump = dump_sat(m, _names(m, f), fed)
            return False
    return True


def _names(m: Wta, f) -> tuple:
    return ("0",) + m.clocks + logic.formula_clocks(f)


# -- exhaustive enumeration of location-constant blocker choices -------------

def location_choice_candidates(m: Wta, loc: str, n: int) -> list[frozenset]:
    """Strict subsets of a location's outgoing edges with weight sum <= n."""
    edge_ids = [i for i, e in enumerate(m.edges) if e.source == loc]
    out = []
    for r in range(len(edge_ids) + 1):
        for combo in itertools.combinations(edge_ids, r):
            if len(combo) == len(edge_ids) and edge_ids:
                continue  # must leave at least one edge active
            if sum(m.edges[i].weight for i in combo) <= n:
                out.append(frozenset(combo))
    return out


def _pruned_holds(g: ExplicitGraph, choice: dict, kind: str,
                  s1: bytearray, s2: bytearray, start: int) -> bool:
    """Textbook AU/AR from start on the graph pruned by a location-constant
    blocker choice."""
    n = len(g.states)
    succs = []
    for s in range(n):
        blocked = choice.get(g.states[s][0], frozenset())
        succs.append(sorted({t for ei, _, targets in g.steps[s] if ei not in blocked
                             for t in targets}))
    if kind == "until":
        y = bytearray(s2)
        changed = True
        while changed:
            changed = False
            for s in range(n):
                if y[s] or not s1[s]:
                    continue
                if succs[s] and all(y[t] for t in succs[s]):
                    y[s] = 1
                    changed = True
    else:
        y = bytearray(s2)
        changed = True
        while changed:
            changed = False
            for s in range(n):
                if not y[s] or s1[s]:
                    continue
                if not succs[s] or not all(y[t] for t in succs[s]):
                    y[s] = 0
                    changed = True
    return bool(y[start])


def location_witnesses(m: Wta, f: logic.TolFormula, cap: int = 2_000_000,
                       combo_cap: int = 1_000_000) -> list[dict]:
    """All location-constant blocker choices witnessing the outermost
    strategic operator of f at the initial state.

    f must be a strategic operator possibly under freeze binders; the
    operands may be arbitrary.  Choices witnessing with a per-state
    strategy but no location-constant one are not found (the game
    fixpoint in until_game/release_game covers those).
    """
    inner = f
    while isinstance(inner, logic.Freeze):
        inner = inner.sub
    if not isinstance(inner, (logic.Until, logic.Release)):
        raise ValueError("witness enumeration needs an outermost strategic operator")
    kind = "until" if isinstance(inner, logic.Until) else "release"
    g = discretize(m, f, cap)
    sat = oracle_sat(g, f)
    s1, s2 = sat[inner.left], sat[inner.right]
    start = g.initial_index()

    locs = [loc.name for loc in m.locations]
    cand = [location_choice_candidates(m, loc, inner.grade) for loc in locs]
    total = 1
    for c in cand:
        total *= max(1, len(c))
    if total > combo_cap:
        raise OracleScaleError(f"{total} choice combinations exceed the cap")
    witnesses = []
    for combo in itertools.product(*[c or [frozenset()] for c in cand]):
        choice = dict(zip(locs, combo))
        if _pruned_holds(g, choice, kind, s1, s2, start):
            witnesses.append(choice)
    return witnesses
