"""Factor graphs with unary and pairwise factors over binary labels."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._config import MAX_LABELS, CapacityError


class GraphError(ValueError):
    """Invalid factor-graph construction."""


@dataclass(frozen=True, order=True)
class Factor:
    """A factor node; ``scope`` holds one or two 1-based node ids in ascending order."""

    scope: tuple

    def __post_init__(self):
        scope = tuple(int(i) for i in self.scope)
        if len(scope) == 2 and scope[0] != scope[1]:
            scope = tuple(sorted(scope))
        object.__setattr__(self, "scope", scope)

    @property
    def arity(self):
        return len(self.scope)

    @property
    def is_pairwise(self):
        return len(self.scope) == 2

    def __str__(self):
        return "phi_" + "-".join(str(i) for i in self.scope)


@dataclass(frozen=True)
class FactorGraph:
    """Variable nodes ``1..l`` plus a list of unary/pairwise factors.

    Construction does not validate; call :func:`validate` (or use the
    builders, which do) to check the structural invariants.
    """

    l: int
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "factors", tuple(
            f if isinstance(f, Factor) else Factor(tuple(f)) for f in self.factors))

    @property
    def nodes(self):
        return range(1, self.l + 1)

    @property
    def unary(self):
        return tuple(f.scope[0] for f in self.factors if f.arity == 1)

    @property
    def pairwise(self):
        return tuple(f.scope for f in self.factors if f.arity == 2)

    @property
    def pair_set(self):
        return pair_set(self)

    def neighbors(self, node):
        out = set()
        for u, v in self.pairwise:
            if u == node:
                out.add(v)
            elif v == node:
                out.add(u)
        return sorted(out)

    def to_dict(self):
        return {"l": self.l, "unary": list(self.unary),
                "pairwise": [list(s) for s in self.pairwise]}

    @classmethod
    def from_dict(cls, doc):
        try:
            l = doc["l"]
            unary = doc.get("unary", [])
            pairwise = doc.get("pairwise", [])
        except (TypeError, AttributeError, KeyError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc
        return from_edges(l, [tuple(e) for e in pairwise], list(unary))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def validate(g):
    """Return a list of human-readable violations; an empty list means valid."""
    problems = []
    if g.l < 1:
        problems.append(f"graph must have at least one node (l={g.l})")
        return problems
    seen = set()
    for f in g.factors:
        if f.arity not in (1, 2):
            problems.append(f"{f}: scope must have 1 or 2 nodes, got {len(f.scope)}")
            continue
        for node in f.scope:
            if not 1 <= node <= g.l:
                problems.append(f"{f}: node {node} outside 1..{g.l}")
        if f.arity == 2 and f.scope[0] == f.scope[1]:
            problems.append(f"{f}: non-distinct scope {f.scope}")
        if f.scope in seen:
            problems.append(f"{f}: duplicate factor with scope {f.scope}")
        seen.add(f.scope)
    if problems:
        return problems

    # connectivity of the variable nodes through pairwise factors
    parent = list(range(g.l + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in g.pairwise:
        parent[find(u)] = find(v)
    roots = {find(i) for i in g.nodes}
    if len(roots) > 1:
        comps = {}
        for i in g.nodes:
            comps.setdefault(find(i), []).append(i)
        parts = ", ".join(str(c) for c in sorted(comps.values()))
        problems.append(f"graph is not connected: components {parts}")
    return problems


def is_valid(g):
    return not validate(g)


def pair_set(g):
    """Canonical ``(u, v)`` pairs with ``u < v``, one per pairwise factor, sorted."""
    return tuple(sorted(f.scope for f in g.factors if f.is_pairwise))


def _checked(g):
    problems = validate(g)
    if problems:
        raise GraphError("; ".join(problems))
    if g.l > MAX_LABELS:
        raise GraphError(f"l={g.l} exceeds the enumeration limit of {MAX_LABELS} labels")
    return g


def from_edges(l, edges: Iterable[Sequence[int]] = (), unary: Iterable[int] = ()):
    factors = [Factor((int(u),)) for u in unary]
    factors += [Factor(tuple(int(i) for i in e)) for e in edges]
    return _checked(FactorGraph(int(l), tuple(factors)))


def new_chain(l):
    if l < 1:
        raise GraphError("chain needs l >= 1")
    return from_edges(l, [(i, i + 1) for i in range(1, l)], range(1, l + 1))


def new_grid(rows, cols, unary=False):
    """Grid with row-major node ids; pairwise factors only unless ``unary``."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive dimensions")
    node = lambda r, c: r * cols + c + 1
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                edges.append((node(r, c), node(r + 1, c)))
    l = rows * cols
    return from_edges(l, edges, range(1, l + 1) if unary else ())


def labelings(l):
    """All binary labelings of length ``l`` in lexicographic order (y_1 most significant)."""
    if l > MAX_LABELS:
        raise CapacityError(f"cannot enumerate 2^{l} labelings (limit l <= {MAX_LABELS})")
    for k in range(2 ** l):
        yield tuple((k >> (l - 1 - i)) & 1 for i in range(l))
