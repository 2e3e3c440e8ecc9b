"""The model-checking engine: bottom-up satisfaction sets and verdicts.

Sat sets live in dimension 1 + |X| + |J| from the start; formula
clocks are unconstrained until frozen.  Until is a least fixpoint
grown from Sat(psi2), release a greatest fixpoint shrunk from the full
invariant-clipped space; both apply per-clock max-constant
extrapolation to every iterate so the chains close in finitely many
steps.  The freeze case is computed from the semantic clause (the
reset preimage j := 0), not by passing the operand set through.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import logic
from .logic import (And, Atom, ClockAtom, Freeze, Not, Release, TolFormula,
                    TrueF, Until)
from .model import ClockLayout, Wta, max_constants
from .predecessor import full_space, obstruction_pred
from .zones import Federation, Zone, conjoin_atom, extrapolate, free


class CheckError(ValueError):
    """Formula does not bind in the model (unknown clock, clock collision)."""


@dataclass
class CheckStats:
    fixpoint_iterations: dict = field(default_factory=dict)
    zones_created: int = 0
    peak_federation_size: int = 0
    wall_ms: float = 0.0
    iteration_bound: int = 0

    def note(self, fed: Federation) -> None:
        n = fed.zone_count()
        self.zones_created += n
        self.peak_federation_size = max(self.peak_federation_size, n)


@dataclass
class Verdict:
    satisfied: bool
    sat_sets: dict
    stats: CheckStats


def _validate_bindings(m: Wta, f: TolFormula) -> None:
    fclocks = logic.formula_clocks(f)
    for j in fclocks:
        if j in m.clocks:
            raise CheckError(f"freeze identifier {j!r} collides with an automaton clock")

    def walk(g: TolFormula, scope: frozenset) -> None:
        if isinstance(g, ClockAtom):
            if g.clock not in m.clocks and g.clock not in scope:
                raise CheckError(f"clock atom on unbound identifier {g.clock!r}")
        elif isinstance(g, (Not,)):
            walk(g.sub, scope)
        elif isinstance(g, Freeze):
            walk(g.sub, scope | {g.var})
        elif isinstance(g, (And, Until, Release)):
            walk(g.left, scope)
            walk(g.right, scope)
    walk(f, frozenset())


def region_count_bound(m: Wta, layout: ClockLayout) -> int:
    """Upper bound on distinct clock regions, hence on strict chains of
    region-closed federations (the termination budget for fixpoints)."""
    d = layout.dim - 1
    per_loc = math.factorial(d) * (2 ** d)
    for k in layout.kvec[1:]:
        per_loc *= 2 * k + 2
    return max(1, per_loc * len(m.locations))


class Checker:
    def __init__(self, m: Wta, f: TolFormula, *, pred_opts: dict | None = None):
        _validate_bindings(m, f)
        self.m = m
        self.f = f
        self.pred_opts = pred_opts or {}
        kmap = max_constants(m, f)
        self.layout = ClockLayout.build(m, logic.formula_clocks(f), kmap)
        self.universe = full_space(m, self.layout)
        self.stats = CheckStats()
        self.stats.iteration_bound = region_count_bound(m, self.layout)
        self.sat: dict[TolFormula, Federation] = {}

    # -- satisfaction sets ---------------------------------------------------

    def run(self) -> Verdict:
        t0 = time.perf_counter()
        for psi in logic.subformulas_by_size(self.f):
            fed = self._sat(psi)
            self.stats.note(fed)
            self.sat[psi] = fed
        initial = (0,) * self.layout.dim
        ok = self.sat[self.f].contains_point(self.m.initial, initial)
        self.stats.wall_ms = (time.perf_counter() - t0) * 1000.0
        return Verdict(ok, self.sat, self.stats)

    def _sat(self, psi: TolFormula) -> Federation:
        if isinstance(psi, (TrueF, Atom, ClockAtom)):
            return self.sat_atoms(psi)
        if isinstance(psi, Not):
            return self.universe.subtract(self.sat[psi.sub])
        if isinstance(psi, And):
            return self.sat[psi.left].intersect(self.sat[psi.right])
        if isinstance(psi, Until):
            return self.sat_until(psi.grade, self.sat[psi.left], self.sat[psi.right],
                                  key=logic.print_formula(psi))
        if isinstance(psi, Release):
            return self.sat_release(psi.grade, self.sat[psi.left], self.sat[psi.right],
                                    key=logic.print_formula(psi))
        if isinstance(psi, Freeze):
            return self.sat_freeze(psi.var, self.sat[psi.sub])
        raise TypeError(f"not a formula node: {psi!r}")

    def sat_atoms(self, psi: TolFormula) -> Federation:
        if isinstance(psi, TrueF):
            return self.universe
        if isinstance(psi, Atom):
            zones = [Zone(loc.name, d) for loc in self.m.locations
                     if psi.name in self.m.labels_of(loc.name)
                     for d in self.universe.at(loc.name)]
            return Federation.of_zones(self.layout.dim, zones)
        if isinstance(psi, ClockAtom):
            i = self.layout.index[psi.clock]
            return self.universe.map_zones(
                lambda loc, d: conjoin_atom(d, i, psi.op, psi.value))
        raise TypeError(f"not an atomic formula: {psi!r}")

    def _extrap(self, fed: Federation) -> Federation:
        k = self.layout.kvec
        return fed.map_zones(lambda loc, d: extrapolate(d, k))

    def _vee(self, n: int, target: Federation) -> Federation:
        return obstruction_pred(self.m, self.layout, n, target, self.universe,
                                **self.pred_opts)

    def sat_until(self, n: int, s1: Federation, s2: Federation, key="until") -> Federation:
        y = self._extrap(s2)
        iterations = 0
        while True:
            iterations += 1
            assert iterations <= self.stats.iteration_bound + 1, \
                "until fixpoint exceeded the symbolic-state bound"
            x = y
            y = self._extrap(s2.union(s1.intersect(self._vee(n, x))))
            self.stats.note(y)
            assert x.subset_of(y), "until iterates must grow"
            if y.subset_of(x):
                break
        self.stats.fixpoint_iterations[key] = iterations
        return y

    def sat_release(self, n: int, s1: Federation, s2: Federation, key="release") -> Federation:
        y = self.universe
        iterations = 0
        while True:
            iterations += 1
            assert iterations <= self.stats.iteration_bound + 1, \
                "release fixpoint exceeded the symbolic-state bound"
            x = y
            y = self._extrap(s2.intersect(s1.union(self._vee(n, x))))
            self.stats.note(y)
            assert y.subset_of(x), "release iterates must shrink"
            if x.subset_of(y):
                break
        self.stats.fixpoint_iterations[key] = iterations
        return y

    def sat_freeze(self, var: str, s_phi: Federation) -> Federation:
        j = self.layout.index[var]
        frozen = s_phi.map_zones(lambda loc, d: conjoin_atom(d, j, "=", 0))
        return frozen.map_zones(lambda loc, d: free(d, j))


def check(m: Wta, f: TolFormula, *, pred_opts: dict | None = None) -> Verdict:
    """Compute Sat sets bottom-up and evaluate at the initial state."""
    return Checker(m, f, pred_opts=pred_opts).run()


def dump_sat(m: Wta, layout_names, fed: Federation) -> str:
    """Golden-test dump: one line per zone, constraints sorted by clock pair."""
    from .zones import constraint_lines

    loc_order = {loc.name: i for i, loc in enumerate(m.locations)}
    lines = []
    for z in fed.zones():
        body = ", ".join(constraint_lines(z.dbm, layout_names))
        lines.append((loc_order.get(z.loc, len(loc_order)), f"{z.loc} | {body}"))
    lines.sort()
    return "\n".join(s for _, s in lines) + ("\n" if lines else "")
