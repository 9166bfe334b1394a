"""Nearest neighbors over categorical attributes under Hamming distance."""

from dataclasses import dataclass

import numpy as np

from .errors import ComparabilityError, InsufficientPoolError, ParameterError


def hamming(e1, e2):
    """Number of attributes on which two individuals disagree."""
    if e1.values.keys() != e2.values.keys():
        raise ComparabilityError("individuals do not share the same attributes")
    return sum(1 for a, v in e1.values.items() if e2.values[a] != v)


@dataclass(frozen=True)
class Neighbor:
    index: int
    individual: object
    distance: int


@dataclass(frozen=True)
class NeighborSet:
    """The k most similar pool members for one queried individual.

    Neighbors are ordered by ascending distance; equal distances keep
    ascending pool row index, which is what makes audits reproducible.
    """

    queried: object
    neighbors: tuple
    k: int

    def individuals(self):
        return tuple(n.individual for n in self.neighbors)


class NeighborIndex:
    """Brute-force scan over an integer-encoded pool.

    Encoding each attribute's values once makes the per-query work a single
    vectorized mismatch count, which is exact (no approximation) and fast
    enough for tens of thousands of queries.
    """

    def __init__(self, pool):
        self.pool = pool
        schema = pool.schema
        self.attributes = schema.attributes
        self._codes = {}
        for attr in self.attributes:
            domain = schema.domains.get(attr)
            seen = sorted(domain) if domain is not None else sorted(
                {row.values[attr] for row in pool.rows}
            )
            self._codes[attr] = {v: i for i, v in enumerate(seen)}
        n, p = len(pool), len(self.attributes)
        self._matrix = np.empty((n, p), dtype=np.int32)
        for j, attr in enumerate(self.attributes):
            codes = self._codes[attr]
            col = [codes.setdefault(row.values[attr], len(codes)) for row in pool.rows]
            self._matrix[:, j] = col

    def _encode(self, individual):
        if set(individual.values.keys()) != set(self.attributes):
            raise ComparabilityError("queried individual does not match the pool schema")
        # unseen values get a fresh code, mismatching every pool row
        return np.array(
            [self._codes[a].get(individual.values[a], -1) for a in self.attributes],
            dtype=np.int32,
        )

    def distances(self, individual):
        return (self._matrix != self._encode(individual)).sum(axis=1)

    def query(self, individual, k, exclude_index=None):
        if k < 1:
            raise ParameterError(f"k must be >= 1, got {k}")
        n = len(self.pool)
        candidates = n - (1 if exclude_index is not None else 0)
        if candidates < k:
            raise InsufficientPoolError(
                f"pool holds {candidates} candidates, need at least {k}"
            )
        dist = self.distances(individual)
        if exclude_index is not None:
            dist[exclude_index] = np.iinfo(np.int32).max
        # stable sort = ties at the cut-off resolve to the smallest row index
        order = np.argsort(dist, kind="stable")[:k]
        neighbors = tuple(
            Neighbor(index=int(i), individual=self.pool.rows[int(i)], distance=int(dist[i]))
            for i in order
        )
        return NeighborSet(queried=individual, neighbors=neighbors, k=k)


def k_nearest(e0, pool, k, exclude_index=None):
    """The k pool members most similar to ``e0``, minimising total Hamming
    distance; cut-off ties break by ascending pool row index.

    ``exclude_index`` removes the queried individual's own row when it is a
    member of the pool. Equal-valued duplicates of ``e0`` stay eligible.
    """
    return NeighborIndex(pool).query(e0, k, exclude_index=exclude_index)
