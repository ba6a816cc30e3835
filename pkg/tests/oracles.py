"""Slow, definition-level oracles that share no code with the solver.

Perfect matchings are counted by a memoized bitmask recursion over vertex
sets, and a set S of matched edges is forcing exactly when G - V(S) has a
unique perfect matching. Nothing here looks at alternating cycles.
"""

from functools import lru_cache
from itertools import combinations


class Oracle:
    def __init__(self, num_vertices, edges):
        self.num_vertices = num_vertices
        self.nbr = [0] * num_vertices
        for u, v in edges:
            self.nbr[u] |= 1 << v
            self.nbr[v] |= 1 << u
        self.count = lru_cache(maxsize=None)(self._count)

    @classmethod
    def of(cls, graph):
        return cls(graph.num_vertices, graph.edge_pairs)

    def _count(self, mask):
        if mask == 0:
            return 1
        low = mask & -mask
        u = low.bit_length() - 1
        rest = mask ^ low
        options = self.nbr[u] & rest
        total = 0
        while options:
            b = options & -options
            options ^= b
            total += self.count(rest ^ b)
        return total

    @property
    def full(self):
        return (1 << self.num_vertices) - 1

    def pm_count(self):
        return self.count(self.full)

    def matchings(self):
        """All perfect matchings as frozensets of (u, v) pairs with u < v."""
        out = []

        def rec(mask, acc):
            if mask == 0:
                out.append(frozenset(acc))
                return
            low = mask & -mask
            u = low.bit_length() - 1
            rest = mask ^ low
            options = self.nbr[u] & rest
            while options:
                b = options & -options
                options ^= b
                v = b.bit_length() - 1
                rec(rest ^ b, acc + [(min(u, v), max(u, v))])

        rec(self.full, [])
        return out

    def is_forcing(self, subset):
        mask = self.full
        for u, v in subset:
            mask &= ~((1 << u) | (1 << v))
        return self.count(mask) == 1

    def forcing_number(self, matching_edges):
        edges = sorted(matching_edges)
        for k in range(len(edges) + 1):
            for S in combinations(edges, k):
                if self.is_forcing(S):
                    return k
        raise AssertionError("the whole matching is always forcing")


def pairs_of(pm):
    """Sorted (u, v) pairs of a PerfectMatching, for comparing with the oracle."""
    return frozenset(pm.edges)
