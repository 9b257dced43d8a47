"""Tabular decomposable scores, exact argmax inference and pair restrictions.

Inputs are opaque hashable identifiers; every table is indexed by the input
point, so a scoring function is fully described by finitely many numbers.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._config import MAX_LABELS, CapacityError
from .graph import FactorGraph, labelings, pair_set

LOCAL_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


@dataclass(frozen=True)
class InputDomain:
    """Ordered collection of distinct input identifiers."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise DomainError("input domain must contain at least one point")
        if len(set(pts)) != len(pts):
            raise DomainError(f"input domain has duplicate points: {pts}")
        object.__setattr__(self, "points", pts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return x in self.points

    def index(self, x):
        return self.points.index(x)


def as_domain(points):
    return points if isinstance(points, InputDomain) else InputDomain(tuple(points))


@dataclass(frozen=True, eq=False)
class TabularScoring:
    """Score tables for every factor of ``graph`` and every input point.

    ``unary[u][x]`` is a length-2 sequence ``[s0, s1]`` and
    ``pairwise[(u, v)][x]`` a 2x2 nested sequence indexed ``[y_u][y_v]``.
    Calling the object predicts: ``f(x) == f.predict(x)``.
    """

    graph: FactorGraph
    domain: InputDomain
    unary: Mapping
    pairwise: Mapping
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", as_domain(self.domain))
        unary = {}
        for u in self.graph.unary:
            table = self.unary.get(u)
            if table is None:
                raise DomainError(f"missing unary table for node {u}")
            unary[u] = {x: _row(table, x, u) for x in self.domain}
        pairwise = {}
        for uv in self.graph.pairwise:
            table = self.pairwise.get(uv)
            if table is None:
                raise DomainError(f"missing pairwise table for {uv}")
            pairwise[uv] = {x: _square(table, x, uv) for x in self.domain}
        object.__setattr__(self, "unary", unary)
        object.__setattr__(self, "pairwise", pairwise)

    @classmethod
    def zeros(cls, graph, domain):
        domain = as_domain(domain)
        return cls(graph, domain,
                   {u: {x: (0, 0) for x in domain} for u in graph.unary},
                   {uv: {x: ((0, 0), (0, 0)) for x in domain} for uv in graph.pairwise})

    def score(self, x, y):
        if x not in self.domain:
            raise DomainError(f"unknown input point {x!r}")
        if len(y) != self.graph.l:
            raise DomainError(f"labeling has length {len(y)}, graph has l={self.graph.l}")
        total = 0
        for u, table in self.unary.items():
            total += table[x][y[u - 1]]
        for (u, v), table in self.pairwise.items():
            total += table[x][y[u - 1]][y[v - 1]]
        return total

    def predict(self, x):
        """Highest-scoring labeling at ``x``; ties go to the lexicographically smallest."""
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        if self.graph.l > MAX_LABELS:
            raise CapacityError(f"l={self.graph.l} exceeds the enumeration limit {MAX_LABELS}")
        best, best_score = None, None
        for y in labelings(self.graph.l):
            s = self.score(x, y)
            if best_score is None or s > best_score:
                best, best_score = y, s
        self._cache[x] = best
        return best

    __call__ = predict

    def restrict_pair(self, u, v):
        """Map each input to the best ``(y_u, y_v)`` with every other label pinned to 0."""
        if (u, v) not in pair_set(self.graph):
            raise DomainError(f"({u}, {v}) is not the scope of a pairwise factor")
        out = {}
        for x in self.domain:
            best, best_score = None, None
            for a, b in LOCAL_PAIRS:
                y = [0] * self.graph.l
                y[u - 1], y[v - 1] = a, b
                s = self.score(x, y)
                if best_score is None or s > best_score:
                    best, best_score = (a, b), s
            out[x] = best
        return out

    def shifted(self, factor, constant):
        """Copy with ``constant`` added to every entry of one factor's table."""
        unary = {u: dict(t) for u, t in self.unary.items()}
        pairwise = {uv: dict(t) for uv, t in self.pairwise.items()}
        if isinstance(factor, int) or len(factor) == 1:
            u = factor if isinstance(factor, int) else factor[0]
            unary[u] = {x: tuple(s + constant for s in r) for x, r in unary[u].items()}
        else:
            uv = tuple(sorted(factor))
            pairwise[uv] = {x: tuple(tuple(s + constant for s in row) for row in sq)
                            for x, sq in pairwise[uv].items()}
        return TabularScoring(self.graph, self.domain, unary, pairwise)

    def to_dict(self):
        return {
            "graph": self.graph.to_dict(),
            "unary": {str(u): {str(x): list(t[x]) for x in self.domain}
                      for u, t in self.unary.items()},
            "pairwise": {f"{u}-{v}": {str(x): [list(r) for r in t[x]] for x in self.domain}
                         for (u, v), t in self.pairwise.items()},
        }

    @classmethod
    def from_dict(cls, doc, domain=None):
        graph = FactorGraph.from_dict(doc["graph"])
        unary = {int(u): t for u, t in doc.get("unary", {}).items()}
        pairwise = {}
        for key, t in doc.get("pairwise", {}).items():
            u, v = (int(s) for s in key.split("-"))
            pairwise[(min(u, v), max(u, v))] = t
        if domain is None:
            keys = []
            for t in list(unary.values()) + list(pairwise.values()):
                keys.extend(k for k in t if k not in keys)
            if not keys:
                raise DomainError("cannot infer the input domain from an empty scoring")
            domain = keys
        return cls(graph, as_domain(domain), unary, pairwise)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _lookup(table, x):
    if x in table:
        return table[x]
    if str(x) in table:
        return table[str(x)]
    raise DomainError(f"table has no entry for input {x!r}")


def _finite(s):
    if isinstance(s, np.generic):
        s = s.item()
    try:
        ok = math.isfinite(s)
    except TypeError:
        raise DomainError(f"score entries must be real numbers, got {s!r}") from None
    if not ok:
        raise DomainError(f"score entries must be finite, got {s!r}")
    return s


def _row(table, x, u):
    r = _lookup(table, x)
    if len(r) != 2:
        raise DomainError(f"unary table for node {u} at {x!r} needs 2 entries")
    return tuple(_finite(s) for s in r)


def _square(table, x, uv):
    sq = _lookup(table, x)
    if len(sq) != 2 or any(len(r) != 2 for r in sq):
        raise DomainError(f"pairwise table for {uv} at {x!r} must be 2x2")
    return tuple(tuple(_finite(s) for s in r) for r in sq)


# --------------------------------------------------------------------------
# hypothesis classes


@dataclass(frozen=True)
class ScoringClass:
    """An explicit, ordered, finite list of scoring functions."""

    graph: FactorGraph
    domain: InputDomain
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", as_domain(self.domain))
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise DomainError("hypothesis class must be nonempty")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class TabularProductClass:
    """Every tabular scoring whose entries are drawn from ``value_set``.

    The class has ``len(value_set) ** n_entries`` members and is only
    enumerated lazily; code that needs its pair restrictions should use
    :func:`minimax_lab.dimension.restricted_class`, which exploits the
    per-input product structure instead of iterating.
    """

    graph: FactorGraph
    domain: InputDomain
    value_set: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", as_domain(self.domain))
        values = tuple(dict.fromkeys(self.value_set))
        if not values:
            raise DomainError("value_set must be nonempty")
        object.__setattr__(self, "value_set", values)

    @property
    def entries_per_point(self):
        return 2 * len(self.graph.unary) + 4 * len(self.graph.pairwise)

    def __len__(self):
        return len(self.value_set) ** (self.entries_per_point * len(self.domain))

    def __iter__(self):
        k = self.entries_per_point
        pts = self.domain.points
        for flat in itertools.product(self.value_set, repeat=k * len(pts)):
            unary, pairwise = {}, {}
            for i, x in enumerate(pts):
                vals = iter(flat[i * k:(i + 1) * k])
                for u in self.graph.unary:
                    unary.setdefault(u, {})[x] = (next(vals), next(vals))
                for uv in self.graph.pairwise:
                    a, b, c, d = next(vals), next(vals), next(vals), next(vals)
                    pairwise.setdefault(uv, {})[x] = ((a, b), (c, d))
            yield TabularScoring(self.graph, self.domain, unary, pairwise)


def all_tabular_classes(domain, graph, value_set):
    return TabularProductClass(graph, as_domain(domain), tuple(value_set))


def random_scoring(domain, graph, rng, value_set=None):
    domain = as_domain(domain)

    def draw(shape):
        if value_set is None:
            return rng.standard_normal(shape).tolist()
        vals = list(value_set)
        return np.asarray(vals, dtype=object)[rng.integers(0, len(vals), size=shape)].tolist()

    unary = {u: {x: tuple(draw(2)) for x in domain} for u in graph.unary}
    pairwise = {uv: {x: tuple(tuple(r) for r in draw((2, 2))) for x in domain}
                for uv in graph.pairwise}
    return TabularScoring(graph, domain, unary, pairwise)


def random_class(domain, graph, size, seed, value_set=None):
    """``size`` seeded random scorings; Gaussian entries unless ``value_set`` is given."""
    if size < 1:
        raise DomainError("class size must be at least 1")
    if value_set is not None and not list(value_set):
        raise DomainError("value_set must be nonempty")
    rng = np.random.default_rng(seed)
    domain = as_domain(domain)
    return ScoringClass(graph, domain,
                        tuple(random_scoring(domain, graph, rng, value_set) for _ in range(size)))
