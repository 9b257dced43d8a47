"""Shattering, {0,1}^2-dimension, VC-dimension and their relation.

All computations are exact subset searches over finite classes, so domain
sizes are capped at ``MAX_DOMAIN`` points.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from ._config import MAX_DOMAIN, CapacityError
from .graph import pair_set
from .scoring import (LOCAL_PAIRS, DomainError, InputDomain, ScoringClass,
                      TabularProductClass, TabularScoring, as_domain)

MAX_MATERIALIZED = 2 ** 20


def _normalize_member(member, domain, width):
    if isinstance(member, dict):
        values = []
        for x in domain:
            if x in member:
                values.append(member[x])
            elif str(x) in member:
                values.append(member[str(x)])
            else:
                raise DomainError(f"class member is undefined at {x!r}")
    else:
        values = list(member)
        if len(values) != len(domain):
            raise DomainError("class member length does not match the domain")
    if width is None:
        out = tuple(int(v) for v in values)
        if any(b not in (0, 1) for b in out):
            raise DomainError(f"binary member has non-binary value: {out}")
    else:
        out = tuple(tuple(int(b) for b in v) for v in values)
        if any(len(v) != 2 or any(b not in (0, 1) for b in v) for v in out):
            raise DomainError(f"pair member must map into {{0,1}}^2: {out}")
    return out


class _FiniteClass:
    _width = None

    def __init__(self, domain, members):
        self.domain = as_domain(domain)
        seen = dict.fromkeys(_normalize_member(m, self.domain, self._width) for m in members)
        if not seen:
            raise DomainError("function class must be nonempty")
        # members are tuples aligned with domain order
        self.members = tuple(seen)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return type(self) is type(other) and self.domain == other.domain \
            and set(self.members) == set(other.members)

    def __repr__(self):
        return f"{type(self).__name__}(|domain|={len(self.domain)}, |members|={len(self)})"

    def mapping(self, k):
        return dict(zip(self.domain, self.members[k]))

    def _indices(self, S):
        S = list(S)
        if len(set(S)) != len(S):
            raise DomainError(f"duplicate points in {S}")
        try:
            return [self.domain.index(x) for x in S]
        except ValueError:
            raise DomainError(f"point outside the domain in {S}") from None

    def patterns(self, S):
        idx = self._indices(S)
        return {tuple(m[i] for i in idx) for m in self.members}


class PairFunctionClass(_FiniteClass):
    """Finite class of maps ``domain -> {0,1}^2``, deduplicated extensionally."""

    _width = 2
    outcomes = 4

    def to_dict(self):
        return {"domain": list(self.domain),
                "members": [{str(x): list(v) for x, v in zip(self.domain, m)}
                            for m in self.members]}

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls(doc["domain"], doc["members"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed class document: {exc}") from exc

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class BinaryFunctionClass(_FiniteClass):
    """Finite class of maps ``domain -> {0,1}``."""

    outcomes = 2


def shatters_pairs(G, S):
    """True iff ``G`` realizes all ``4**len(S)`` binary matrices on ``S``."""
    return len(G.patterns(S)) == 4 ** len(list(S))


def shatters(H, S):
    return len(H.patterns(S)) == 2 ** len(list(S))


def _largest_shattered(C):
    n = len(C.domain)
    if n > MAX_DOMAIN:
        raise CapacityError(f"domain of {n} points exceeds the limit of {MAX_DOMAIN}")
    witness = ()
    for k in range(1, n + 1):
        if C.outcomes ** k > len(C):
            break
        found = None
        for idx in itertools.combinations(range(n), k):
            if len({tuple(m[i] for i in idx) for m in C.members}) == C.outcomes ** k:
                found = idx
                break
        if found is None:
            # every subset of a shattered set is shattered, so no larger set can be
            break
        witness = tuple(C.domain.points[i] for i in found)
    return len(witness), witness


def dim_pairs(G):
    return _largest_shattered(G)[0]


def dim_pairs_witness(G):
    """``(dimension, shattered set)`` for a pair class."""
    return _largest_shattered(G)


def vc_dim(H):
    return _largest_shattered(H)[0]


def vc_dim_witness(H):
    return _largest_shattered(H)


def derive_h_classes(G):
    """The four indicator classes ``(H11, H10, H01, H00)`` of a pair class.

    ``H_ab`` contains ``x -> [g(x) == (a, b)]`` for each ``g`` in ``G``.
    """
    out = []
    for a, b in ((1, 1), (1, 0), (0, 1), (0, 0)):
        members = [tuple(int(g1 == a and g2 == b) for g1, g2 in m) for m in G.members]
        out.append(BinaryFunctionClass(G.domain, members))
    return tuple(out)


H_NAMES = ("H11", "H10", "H01", "H00")


@dataclass
class Theorem2Report:
    dim_pairs: int
    witness: tuple
    vc_dims: dict = field(default_factory=dict)

    @property
    def min_vc(self):
        return min(self.vc_dims.values())

    @property
    def equal(self):
        return self.dim_pairs == self.min_vc

    def to_dict(self):
        return {"dim_pairs": self.dim_pairs, "witness": list(self.witness),
                **self.vc_dims, "min_vc": self.min_vc, "equal": self.equal}

    csv_columns = ("dim_pairs", *H_NAMES, "min_vc", "equal")

    def csv_row(self):
        d = self.to_dict()
        return [d[c] for c in self.csv_columns]


def theorem2_check(G):
    """Compare the {0,1}^2-dimension of ``G`` with the least VC-dimension of its H classes."""
    dim, witness = dim_pairs_witness(G)
    vcs = {name: vc_dim(H) for name, H in zip(H_NAMES, derive_h_classes(G))}
    return Theorem2Report(dim, witness, vcs)


# --------------------------------------------------------------------------
# restriction of scoring classes to a pair of labels


def _local_outputs(graph, value_set, u, v):
    """All pair outputs reachable at one input by tables with entries in ``value_set``."""
    keys = []
    for a, b in LOCAL_PAIRS:
        y = [0] * graph.l
        y[u - 1], y[v - 1] = a, b
        ks = [("u", w, y[w - 1]) for w in graph.unary]
        ks += [("p", s, t, y[s - 1], y[t - 1]) for s, t in graph.pairwise]
        keys.append(ks)
    shared = set(keys[0]).intersection(*map(set, keys[1:]))
    free = sorted({k for ks in keys for k in ks} - shared)
    pos = {k: i for i, k in enumerate(free)}
    terms = [[pos[k] for k in ks if k not in shared] for ks in keys]
    reached = set()
    for assignment in itertools.product(value_set, repeat=len(free)):
        best, best_score = None, None
        for out, term in zip(LOCAL_PAIRS, terms):
            s = sum(assignment[i] for i in term)
            if best_score is None or s > best_score:
                best, best_score = out, s
        reached.add(best)
        if len(reached) == 4:
            break
    return sorted(reached)


def restricted_class(F, u, v):
    """Deduplicated class of pair restrictions ``x -> argmax (y_u, y_v)`` of members of ``F``.

    ``F`` may be a :class:`ScoringClass`, a :class:`TabularProductClass` or a
    plain sequence of :class:`TabularScoring`.
    """
    if isinstance(F, TabularProductClass):
        if (u, v) not in pair_set(F.graph):
            raise DomainError(f"({u}, {v}) is not the scope of a pairwise factor")
        local = _local_outputs(F.graph, F.value_set, u, v)
        count = len(local) ** len(F.domain)
        if count > MAX_MATERIALIZED:
            raise CapacityError(f"restricted class would have {count} members")
        # tables at different inputs are independent, so the class is a product
        return PairFunctionClass(F.domain, itertools.product(local, repeat=len(F.domain)))
    members = list(F)
    if not members:
        raise DomainError("hypothesis class must be nonempty")
    domain = F.domain if isinstance(F, ScoringClass) else members[0].domain
    if (u, v) not in pair_set(members[0].graph):
        raise DomainError(f"({u}, {v}) is not the scope of a pairwise factor")
    return PairFunctionClass(domain, [f.restrict_pair(u, v) for f in members])


def _graph_of(F):
    if isinstance(F, (ScoringClass, TabularProductClass)):
        return F.graph
    return next(iter(F)).graph


def pair_dims(F):
    """``{(u, v): (dimension, witness)}`` over every pairwise scope of the graph."""
    T = pair_set(_graph_of(F))
    if not T:
        raise DomainError("graph has no pairwise factors")
    return {uv: dim_pairs_witness(restricted_class(F, *uv)) for uv in T}


def max_dim_pairs(F):
    return max(d for d, _ in pair_dims(F).values())


__all__ = [
    "PairFunctionClass", "BinaryFunctionClass", "InputDomain", "TabularScoring",
    "shatters_pairs", "shatters", "dim_pairs", "dim_pairs_witness", "vc_dim",
    "vc_dim_witness", "derive_h_classes", "theorem2_check", "Theorem2Report",
    "restricted_class", "pair_dims", "max_dim_pairs", "random_pair_class",
]


def random_pair_class(seed, max_domain=4, max_members=50):
    """Seeded class with a random domain size and member count, uniform random outputs."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    n = int(rng.integers(1, max_domain + 1))
    k = int(rng.integers(1, max_members + 1))
    bits = rng.integers(0, 2, size=(k, n, 2))
    return PairFunctionClass([f"x{i}" for i in range(n)],
                             [[tuple(int(b) for b in pt) for pt in mem] for mem in bits])
