"""Shared test oracles: independent membership predicates on half-integer grids.

All coordinates are doubled ints (1 unit = half a time unit).  The
delay/fiber predicates decide their existential by exact interval
arithmetic over (doubled value, strict) pairs, not via zone algebra,
so they are independent of the code they check.
"""

from __future__ import annotations

import itertools
import random

from tolmc.zones import INF, Dbm, bound_sat

# a one-variable bound: (doubled value, strict flag)
NEG_INF = (-(1 << 50), True)
POS_INF = ((1 << 50), True)


def _tighten_upper(cur, cand):
    return cand if (cand[0], not cand[1]) < (cur[0], not cur[1]) else cur


def _tighten_lower(cur, cand):
    return cand if (cand[0], cand[1]) > (cur[0], cur[1]) else cur


def _interval_nonempty(lo, hi) -> bool:
    if lo[0] < hi[0]:
        return True
    if lo[0] > hi[0]:
        return False
    return not (lo[1] or hi[1])


def _bound2(b):
    """Packed DBM bound -> (doubled value, strict)."""
    if b >= INF:
        return None
    return (b >> 1) * 2, not (b & 1)


def grid_points(nclocks: int, cmax: int):
    """All half-integer valuations up to cmax+1, as doubled-int tuples."""
    rng = range(2 * (cmax + 1) + 1)
    return list(itertools.product(rng, repeat=nclocks))


def in_dbm(d: Dbm, p2) -> bool:
    """p2 excludes the reference coordinate."""
    full = (0,) + tuple(p2)
    n = len(d)
    return all(bound_sat(d[i][j], full[i] - full[j])
               for i in range(n) for j in range(n))


def _delay_feasible(d: Dbm, p2, sign: int) -> bool:
    """Exists t >= 0 with p + sign*t in d (checking t-free constraints too)."""
    full = (0,) + tuple(p2)
    n = len(d)
    lo, hi = (0, False), POS_INF
    for i in range(1, n):
        for j in range(1, n):
            if i != j and not bound_sat(d[i][j], full[i] - full[j]):
                return False
        ub = _bound2(d[i][0])   # x_i + sign*t ~ c
        if ub is not None:
            c2, strict = ub
            if sign > 0:
                hi = _tighten_upper(hi, (c2 - full[i], strict))
            else:
                lo = _tighten_lower(lo, (full[i] - c2, strict))
        lb = _bound2(d[0][i])   # -(x_i + sign*t) ~ c
        if lb is not None:
            c2, strict = lb
            if sign > 0:
                lo = _tighten_lower(lo, (-c2 - full[i], strict))
            else:
                hi = _tighten_upper(hi, (full[i] + c2, strict))
    return _interval_nonempty(lo, hi)


def in_up(d: Dbm, p2) -> bool:
    """Defining predicate of up: exists t >= 0 with p - t in d."""
    return _delay_feasible(d, p2, -1)


def in_down(d: Dbm, p2) -> bool:
    """Defining predicate of down: exists t >= 0 with p + t in d."""
    return _delay_feasible(d, p2, +1)


def fiber_feasible(d: Dbm, p2, y: int) -> bool:
    """Exists v >= 0 such that p with coordinate y replaced by v lies in d."""
    full = [0] + list(p2)
    n = len(d)
    lo, hi = (0, False), POS_INF
    for i in range(n):
        for j in range(n):
            if i == j or i == y or j == y:
                continue
            if not bound_sat(d[i][j], full[i] - full[j]):
                return False
    for j in range(n):
        if j == y:
            continue
        ub = _bound2(d[y][j])   # v - x_j ~ c
        if ub is not None:
            c2, strict = ub
            hi = _tighten_upper(hi, (c2 + full[j], strict))
        lb = _bound2(d[j][y])   # x_j - v ~ c
        if lb is not None:
            c2, strict = lb
            lo = _tighten_lower(lo, (full[j] - c2, strict))
    return _interval_nonempty(lo, hi)


def in_free(d: Dbm, p2, y: int) -> bool:
    return fiber_feasible(d, p2, y)


def in_reset(d: Dbm, p2, y: int) -> bool:
    return p2[y - 1] == 0 and fiber_feasible(d, p2, y)


def random_dbm(rng: random.Random, dim: int, cmax: int = 5, tries: int = 50):
    """A random non-empty canonical DBM built from random tightenings."""
    from tolmc.zones import (canonicalize, conjoin_bound, dbm_unconstrained,
                             le, lt)

    for _ in range(tries):
        d = dbm_unconstrained(dim)
        ok = True
        for _ in range(rng.randint(0, 2 * dim)):
            i = rng.randrange(dim)
            j = rng.randrange(dim)
            if i == j:
                continue
            c = rng.randint(-cmax, cmax) if (i and j) else (
                rng.randint(0, cmax) if j == 0 else -rng.randint(0, cmax))
            b = le(c) if rng.random() < 0.5 else lt(c)
            nd = conjoin_bound(d, i, j, b)
            if nd is None:
                ok = False
                break
            d = nd
        if ok:
            out = canonicalize(d)
            if out is not None:
                return out
    return dbm_unconstrained(dim)


def fed_points(fed, m, cmax: int):
    """All (loc, point2) grid pairs of a model up to cmax+1 per clock."""
    pts = grid_points(fed.dim - 1, cmax)
    return [(loc.name, p) for loc in m.locations for p in pts]
