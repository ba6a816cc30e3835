"""Exact forcing numbers f(G, M), f(G) and F(G).

A subset S of M is forcing exactly when it meets every M-alternating cycle,
so f(G, M) is a minimum hitting set problem over the (possibly exponentially
many) alternating cycles. :func:`forcing_number` solves it by lazy constraint
generation: solve the hitting set over the cycles found so far, ask the exact
cycle search for a cycle the current optimum misses, repeat.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from math import gcd

from .errors import BudgetExceeded, NoPerfectMatching, OddOrder
from .matching import (
    AlternatingCycle,
    AlternatingSearch,
    PerfectMatching,
    canonical_cycle,
    enumerate_matchings,
)
from .torus import ParityClass, as_params, classify

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 36


@dataclass(frozen=True)
class ForcingWitness:
    matching: PerfectMatching
    value: int
    witness_set: tuple[tuple[int, int], ...]
    lower_bound_cert: tuple[AlternatingCycle, ...] = ()
    rounds: int = 0


@dataclass
class SpectrumResult:
    min_value: int
    max_value: int
    pm_count: int
    histogram: dict[int, int]
    max_witness: ForcingWitness
    min_witness: ForcingWitness
    max_index: int = 0
    min_index: int = 0
    values: list[int] = field(default_factory=list, repr=False)


def alternating_squares(graph, matching: PerfectMatching) -> list[AlternatingCycle]:
    """All M-alternating 4-cycles, in canonical order."""
    mate = matching.mate
    adj = graph.adjacency
    found = set()
    for a in range(graph.num_vertices):
        b = mate[a]
        for c in adj[b]:
            if c == a:
                continue
            d = mate[c]
            if d != b and d in adj[a]:
                found.add(canonical_cycle((a, b, c, d)).vertices)
    return [AlternatingCycle(vs) for vs in sorted(found)]


def disjoint_cycle_lower_bound(graph, matching: PerfectMatching) -> list[AlternatingCycle]:
    """A family of pairwise vertex-disjoint M-alternating cycles.

    Alternating 4-cycles (the band quadrilaterals on a torus) are taken
    greedily in canonical order, then the exact search adds further cycles
    avoiding everything used so far. Its size is a lower bound on f(G, M).
    """
    used: set[int] = set()
    family: list[AlternatingCycle] = []
    for sq in alternating_squares(graph, matching):
        if used.isdisjoint(sq.vertices):
            family.append(sq)
            used.update(sq.vertices)
    search = AlternatingSearch(graph, matching)
    while True:
        raw = search.find(used)
        if raw is None:
            return family
        cyc = canonical_cycle(raw)
        family.append(cyc)
        used.update(cyc.vertices)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def min_hitting_set(cycles: list[int], at_least: int = 0) -> int:
    """Smallest mask meeting every mask in ``cycles`` (branch and bound).

    Branches on the unhit constraint with the fewest admissible elements;
    an element skipped in one branch is banned in the later ones. A greedy
    packing of pairwise disjoint unhit constraints bounds each node.
    """

    def search(chosen: int, banned: int, budget: int) -> int | None:
        best = 0
        best_count = 1 << 30
        unhit = []
        for c in cycles:
            if c & chosen:
                continue
            avail = c & ~banned
            if not avail:
                return None
            cnt = avail.bit_count()
            if cnt < best_count:
                best, best_count = avail, cnt
            unhit.append(avail)
        if not unhit:
            return chosen
        if budget == 0:
            return None
        packed = 0
        covered = 0
        for avail in unhit:
            if not avail & covered:
                covered |= avail
                packed += 1
                if packed > budget:
                    return None
        for bit in _bits(best):
            res = search(chosen | bit, banned, budget - 1)
            if res is not None:
                return res
            banned |= bit
        return None

    k = at_least
    while True:
        res = search(0, 0, k)
        if res is not None:
            return res
        k += 1


def forcing_number(graph, matching, seed: bool = True) -> ForcingWitness:
    """Exact f(G, M) with a minimum forcing set and a disjoint-cycle lower bound."""
    if not isinstance(matching, PerfectMatching):
        matching = PerfectMatching.from_edges(graph, matching)
    else:
        matching.check(graph)
    pairs = matching.edges
    index = {}
    for k, (u, v) in enumerate(pairs):
        index[u] = index[v] = k

    def mask_of(vertices) -> int:
        out = 0
        for v in vertices:
            out |= 1 << index[v]
        return out

    packing = disjoint_cycle_lower_bound(graph, matching)
    cycles: list[int] = []
    if seed:
        cycles.extend(mask_of(c.vertices) for c in packing)
        seen = set(cycles)
        for sq in alternating_squares(graph, matching):
            m = mask_of(sq.vertices)
            if m not in seen:
                seen.add(m)
                cycles.append(m)
    search = AlternatingSearch(graph, matching)
    hitter = min_hitting_set(cycles, len(packing)) if cycles else 0
    rounds = 0
    while True:
        rounds += 1
        blocked = [pairs[b.bit_length() - 1][0] for b in _bits(hitter)]
        raw = search.find(blocked)
        if raw is None:
            break
        cycles.append(mask_of(raw))
        hitter = min_hitting_set(cycles, hitter.bit_count())
    witness = tuple(pairs[b.bit_length() - 1] for b in _bits(hitter))
    return ForcingWitness(matching, hitter.bit_count(), tuple(sorted(witness)), tuple(packing), rounds)


def _values_for(graph, mates) -> list[int]:
    return [forcing_number(graph, PerfectMatching(m)).value for m in mates]


def _chunks(iterable, size):
    it = iter(iterable)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def max_forcing_number(graph, budget: int = DEFAULT_BUDGET, workers: int = 1,
                       chunk_size: int = 256) -> SpectrumResult:
    """F(G) and f(G) by exhausting all perfect matchings.

    The extremal witnesses are the first matchings in enumeration order that
    attain the extremes, so the result does not depend on ``workers``.
    """
    if graph.num_vertices > budget:
        raise BudgetExceeded(f"{graph.num_vertices} vertices exceeds the budget of {budget}")
    values: list[int] = []
    matchings: list[PerfectMatching] = []
    if workers <= 1:
        for pm in enumerate_matchings(graph):
            matchings.append(pm)
            values.append(forcing_number(graph, pm).value)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = []
            for block in _chunks(enumerate_matchings(graph), chunk_size):
                matchings.extend(block)
                futures.append(pool.submit(_values_for, graph, [pm.mate for pm in block]))
            for fut in futures:
                values.extend(fut.result())
    if not values:
        raise NoPerfectMatching(f"{getattr(graph, 'params', 'graph')} has no perfect matching")
    hi, lo = max(values), min(values)
    i_hi, i_lo = values.index(hi), values.index(lo)
    return SpectrumResult(
        min_value=lo,
        max_value=hi,
        pm_count=len(values),
        histogram=dict(sorted(Counter(values).items())),
        max_witness=forcing_number(graph, matchings[i_hi]),
        min_witness=forcing_number(graph, matchings[i_lo]),
        max_index=i_hi,
        min_index=i_lo,
        values=values,
    )


def predicted_max_forcing(params) -> int | None:
    """Closed-form F(T(n, m, r)) for the five solved parity classes.

    Returns None for T(2n+1, 2m, 2r-1), whose maximum forcing number is open.
    Raises OddOrder when nm is odd.
    """
    p = as_params(params)
    tag = classify(p)
    n, m, r = tag.n, tag.m, tag.r
    if tag.cls in (ParityClass.EO_EVEN, ParityClass.EO_ODD):
        return (m + 1) * n
    if tag.cls is ParityClass.EE_EVEN:
        return m * n + 1 if gcd(r, m) == 1 else m * n
    if tag.cls is ParityClass.EE_ODD:
        return m * n
    if tag.cls is ParityClass.OE_EVEN:
        g = gcd(r, m)
        if (m // g) % 2:
            return (m * (2 * n + 1) + g) // 2
        return m * (2 * n + 1) // 2
    if tag.cls is ParityClass.OE_ODD:
        return None
    raise OddOrder(str(p))  # pragma: no cover
