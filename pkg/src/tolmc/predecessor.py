"""Symbolic one-step predecessors, including the obstruction predecessor.

One step of the underlying game is delay-then-edge, so the plain
one-step predecessor of a target set is time_pred(disc_pred(e, T)).
The obstruction predecessor with budget n keeps a state s when

  (a) the total weight of its escaping edges is <= n, where an edge
      escapes iff some delay lets it land outside the target, and
  (b) some non-escaping edge can actually step into the target.

(b) rules out the degenerate play where the blocker deactivates every
usable edge and no discrete step remains; with it, budget 0 on
positive-weight models coincides with the universal one-step
predecessor of TCTL.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ClockLayout, Edge, Wta
from .zones import (Dbm, Federation, Zone, conjoin_atom, dbm_intersect,
                    dbm_subtract, dbm_unconstrained, down, free, reset)


def invariant_dbm(m: Wta, layout: ClockLayout, loc_name: str) -> Dbm:
    d = dbm_unconstrained(layout.dim)
    for a in m.location(loc_name).invariant:
        d = conjoin_atom(d, layout.index[a.clock], a.op, a.value)
        assert d is not None, "validated models have satisfiable invariants"
    return d


def full_space(m: Wta, layout: ClockLayout) -> Federation:
    """The invariant-clipped state space, formula clocks unconstrained."""
    return Federation.of_zones(
        layout.dim, (Zone(loc.name, invariant_dbm(m, layout, loc.name))
                     for loc in m.locations))


def _conjoin_atoms(d, layout, atoms):
    for a in atoms:
        if d is None:
            return None
        d = conjoin_atom(d, layout.index[a.clock], a.op, a.value)
    return d


def disc_pred(m: Wta, layout: ClockLayout, e: Edge, target: Federation) -> Federation:
    """States that can fire e right now and land in the target set."""
    reset_idx = [layout.index[c] for c in e.resets]
    tgt_inv = invariant_dbm(m, layout, e.target)
    src_inv = invariant_dbm(m, layout, e.source)
    out = []
    for d in target.at(e.target):
        z = dbm_intersect(d, tgt_inv)
        if z is None:
            continue
        for y in reset_idx:
            z = conjoin_atom(z, y, "=", 0)
            if z is None:
                break
        if z is None:
            continue
        for y in reset_idx:
            z = free(z, y)
        z = _conjoin_atoms(z, layout, e.guard)
        if z is None:
            continue
        z = dbm_intersect(z, src_inv)
        if z is not None:
            out.append(Zone(e.source, z))
    return Federation.of_zones(layout.dim, out)


def time_pred(m: Wta, layout: ClockLayout, target: Federation) -> Federation:
    """All states that can delay (possibly 0) into the target set.

    Invariants here are pure upper bounds, so holding at the endpoint
    of a delay means holding throughout it; clipping the result is
    enough.
    """
    def shift(loc: str, d: Dbm):
        return dbm_intersect(down(d), invariant_dbm(m, layout, loc))
    return target.map_zones(shift)


def pred(m: Wta, layout: ClockLayout, e: Edge, target: Federation) -> Federation:
    """Delay, then take e into the target."""
    return time_pred(m, layout, disc_pred(m, layout, e, target))


def pred_union(m: Wta, layout: ClockLayout, target: Federation) -> Federation:
    out = Federation.empty(layout.dim)
    for e in m.edges:
        out = out.union(pred(m, layout, e, target))
    return out


@dataclass(frozen=True)
class EscapeProfile:
    """One cell of a location's space with a fixed set of escaping edges."""

    location: str
    cell: Dbm
    escaping_edges: frozenset[int]
    escape_cost: int


def escape_profiles(m: Wta, layout: ClockLayout, loc: str,
                    target: Federation, universe: Federation) -> list[EscapeProfile]:
    """Partition a location's space by which edges escape the target."""
    complement = universe.subtract(target)
    edge_ids = [i for i, e in enumerate(m.edges) if e.source == loc]
    esc = {i: pred(m, layout, m.edges[i], complement) for i in edge_ids}
    cells: list[tuple[list, frozenset]] = [(list(universe.at(loc)), frozenset())]
    for i in edge_ids:
        esc_dbms = esc[i].at(loc)
        nxt = []
        for dbms, pattern in cells:
            inside = [c for d in dbms for ed in esc_dbms
                      if (c := dbm_intersect(d, ed)) is not None]
            outside = list(dbms)
            for ed in esc_dbms:
                outside = [p for d in outside for p in dbm_subtract(d, ed)]
                if not outside:
                    break
            if inside:
                nxt.append((inside, pattern | {i}))
            if outside:
                nxt.append((outside, pattern))
        cells = nxt
    profiles = []
    for dbms, pattern in cells:
        cost = sum(m.edges[i].weight for i in pattern)
        for d in dbms:
            profiles.append(EscapeProfile(loc, d, pattern, cost))
    return profiles


def obstruction_pred(m: Wta, layout: ClockLayout, n: int,
                     target: Federation, universe: Federation, *,
                     cost_strict: bool = False,
                     require_witness: bool = True) -> Federation:
    """The budget-n obstruction predecessor of the target set.

    cost_strict and require_witness exist for mutation testing only;
    the faithful semantics is cost <= n with the witness condition on.
    """
    complement = universe.subtract(target)
    hit_cache: dict[int, Federation] = {}
    out = Federation.empty(layout.dim)
    for loc in m.locations:
        edge_ids = [i for i, e in enumerate(m.edges) if e.source == loc.name]
        if not edge_ids:
            continue
        esc = {i: pred(m, layout, m.edges[i], complement) for i in edge_ids}
        cells: list[tuple[list, frozenset]] = [(list(universe.at(loc.name)), frozenset())]
        for i in edge_ids:
            esc_dbms = esc[i].at(loc.name)
            if not esc_dbms:
                continue
            nxt = []
            for dbms, pattern in cells:
                inside = [c for d in dbms for ed in esc_dbms
                          if (c := dbm_intersect(d, ed)) is not None]
                outside = list(dbms)
                for ed in esc_dbms:
                    outside = [p for d in outside for p in dbm_subtract(d, ed)]
                    if not outside:
                        break
                if inside:
                    nxt.append((inside, pattern | {i}))
                if outside:
                    nxt.append((outside, pattern))
            cells = nxt
        for dbms, pattern in cells:
            cost = sum(m.edges[i].weight for i in pattern)
            if (cost >= n) if cost_strict else (cost > n):
                continue
            witnesses = [i for i in edge_ids if i not in pattern] \
                if require_witness else edge_ids
            if not witnesses:
                continue
            hits = Federation.empty(layout.dim)
            for i in witnesses:
                if i not in hit_cache:
                    hit_cache[i] = pred(m, layout, m.edges[i], target)
                hits = hits.union(hit_cache[i])
            cell_fed = Federation.of_zones(
                layout.dim, (Zone(loc.name, d) for d in dbms))
            out = out.union(cell_fed.intersect(hits))
    return out
