"""Hypercube-indexed family of hard distributions for a pairwise factor.

A family fixes a pair ``(u, v)`` of labels, ``d`` support points, a margin
``gamma`` and a per-point mass ``p``. Each binary matrix ``B`` of shape
``(d - 1, 2)`` selects one distribution whose Bayes predictor outputs ``B`` on
the first ``d - 1`` points and zero everywhere else.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from ._config import MAX_HYPERCUBE_D, CapacityError
from .graph import FactorGraph, new_chain, pair_set
from .risk import FiniteDistribution, TablePredictor, as_predictor, sample
from .scoring import LOCAL_PAIRS, DomainError

__all__ = [
    "AdversarialFamily", "hypercube", "B_to_bits", "bits_to_B", "marginal_x",
    "build_distribution", "eta", "bayes_of_B", "l11_distance",
    "nearest_hypercube_point", "hellinger_sq", "hellinger_closed_form",
    "default_p", "intermediate_bound", "assouad_bound", "assouad_branches", "sample",
    "parse_number",
]


def parse_number(value):
    """Accept ints, floats, or strings such as ``"1/3"`` (parsed exactly)."""
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise DomainError(f"not a number: {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise DomainError(f"not a number: {value!r}")
    return value


def _sqrt(q):
    """Square root that stays exact for perfect-square fractions."""
    if isinstance(q, (int, Fraction)) and q >= 0:
        q = Fraction(q)
        n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if n * n == q.numerator and d * d == q.denominator:
            return Fraction(n, d)
    if -1e-15 < q < 0:
        q = 0.0
    return math.sqrt(q)


@dataclass(frozen=True)
class AdversarialFamily:
    graph: FactorGraph
    u: int
    v: int
    points: tuple
    gamma: object
    p: object

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if (self.u, self.v) not in pair_set(self.graph):
            raise DomainError(f"({self.u}, {self.v}) is not the scope of a pairwise factor")
        if len(set(self.points)) != len(self.points):
            raise DomainError("family support points must be distinct")
        d = len(self.points)
        if d < 2:
            raise DomainError("family requires d >= 2")
        if d > MAX_HYPERCUBE_D:
            raise CapacityError(f"d={d} exceeds the hypercube limit {MAX_HYPERCUBE_D}")
        if not 0 < self.gamma <= Fraction(1, 3):
            raise DomainError(f"family requires 0 < gamma <= 1/3, got {self.gamma}")
        if not self.p > 0:
            raise DomainError(f"family requires p > 0, got {self.p}")
        if (d - 1) * self.p > 1:
            raise DomainError(f"family requires p <= 1/(d-1) = 1/{d - 1}, got {self.p}")

    @classmethod
    def create(cls, d, gamma, p, graph=None, u=1, v=2, points=None, m=None):
        """Build a family; ``p="default"`` needs ``m`` and uses :func:`default_p`."""
        gamma = parse_number(gamma)
        if isinstance(p, str) and p.strip() == "default":
            if m is None:
                raise DomainError("p='default' requires the sample size m")
            p = default_p(gamma, m)
        else:
            p = parse_number(p)
        graph = graph if graph is not None else new_chain(max(2, v))
        points = tuple(points) if points is not None else tuple(f"x{i}" for i in range(1, d + 1))
        if len(points) != d:
            raise DomainError(f"expected {d} support points, got {len(points)}")
        return cls(graph, u, v, points, gamma, p)

    @property
    def d(self):
        return len(self.points)

    @property
    def l(self):
        return self.graph.l

    def to_dict(self):
        num = lambda q: str(q) if isinstance(q, Fraction) else q
        return {"d": self.d, "gamma": num(self.gamma), "p": num(self.p), "u": self.u,
                "v": self.v, "graph": self.graph.to_dict(), "points": list(self.points)}


def hypercube(d):
    """All ``(d - 1) x 2`` binary matrices in row-major lexicographic order."""
    if d > MAX_HYPERCUBE_D:
        raise CapacityError(f"d={d} exceeds the hypercube limit {MAX_HYPERCUBE_D}")
    for bits in itertools.product((0, 1), repeat=2 * (d - 1)):
        yield tuple(zip(bits[0::2], bits[1::2]))


def B_to_bits(B):
    return "".join(f"{a}{b}" for a, b in B)


def bits_to_B(bits, d=None):
    bits = bits.strip()
    if len(bits) % 2 or any(c not in "01" for c in bits):
        raise DomainError(f"not a row-major bit string of a (d-1)x2 matrix: {bits!r}")
    if d is not None and len(bits) != 2 * (d - 1):
        raise DomainError(f"expected {2 * (d - 1)} bits for d={d}, got {len(bits)}")
    return tuple((int(bits[i]), int(bits[i + 1])) for i in range(0, len(bits), 2))


def _check_B(fam, B):
    B = tuple(tuple(int(b) for b in row) for row in B)
    if len(B) != fam.d - 1 or any(len(r) != 2 for r in B):
        raise DomainError(f"B must have shape ({fam.d - 1}, 2), got {B}")
    if any(b not in (0, 1) for r in B for b in r):
        raise DomainError(f"B must be binary, got {B}")
    return B


def _pair_labeling(fam, a, b):
    y = [0] * fam.l
    y[fam.u - 1], y[fam.v - 1] = a, b
    return tuple(y)


def marginal_x(fam):
    """Input marginal: mass ``p`` on each of the first ``d - 1`` points, the rest on the last."""
    table = {x: fam.p for x in fam.points[:-1]}
    table[fam.points[-1]] = 1 - (fam.d - 1) * fam.p
    return table


def conditional(fam, B, i):
    """Conditional masses over the four pair labelings at support point ``i < d - 1``."""
    low = (1 - 3 * fam.gamma) / 4
    high = (1 + fam.gamma) / 4
    flipped = (1 - B[i][0], 1 - B[i][1])
    return {ab: (low if ab == flipped else high) for ab in LOCAL_PAIRS}


def build_distribution(fam, B):
    B = _check_B(fam, B)
    px = marginal_x(fam)
    atoms = []
    for i, x in enumerate(fam.points[:-1]):
        for ab, q in conditional(fam, B, i).items():
            if q < 0:
                raise DomainError(f"negative conditional mass {q}")
            if q > 0:
                atoms.append((x, _pair_labeling(fam, *ab), px[x] * q))
    last = fam.points[-1]
    if px[last] > 0:
        atoms.append((last, (0,) * fam.l, px[last]))
    return FiniteDistribution(atoms)


def eta(fam, B):
    """Closed-form conditional marginals ``{x: (eta_1(x), ..., eta_l(x))}`` on every support point."""
    B = _check_B(fam, B)
    out = {}
    lo, hi = (1 - fam.gamma) / 2, (1 + fam.gamma) / 2
    for i, x in enumerate(fam.points[:-1]):
        e = [0] * fam.l
        e[fam.u - 1] = hi if B[i][0] else lo
        e[fam.v - 1] = hi if B[i][1] else lo
        out[x] = tuple(e)
    out[fam.points[-1]] = (0,) * fam.l
    return out


def bayes_of_B(fam, B):
    """Bayes predictor of ``build_distribution(fam, B)`` read straight off ``B``."""
    B = _check_B(fam, B)
    table = {x: _pair_labeling(fam, *B[i]) for i, x in enumerate(fam.points[:-1])}
    table[fam.points[-1]] = (0,) * fam.l
    return TablePredictor(table, l=fam.l, default=(0,) * fam.l)


def l11_distance(pred1, pred2, fam):
    """Input-weighted count of coordinatewise disagreements on the support points."""
    f, g = as_predictor(pred1), as_predictor(pred2)
    total = 0
    for x, w in marginal_x(fam).items():
        total += w * sum(1 for a, b in zip(f(x), g(x)) if a != b)
    return total


def nearest_hypercube_point(pred, fam):
    """Index ``B`` whose Bayes predictor is closest to ``pred`` in weighted L1,1 distance.

    The distance separates over the bits of ``B`` (each weighted by ``p > 0``),
    so copying ``pred``'s bits at ``(u, v)`` is the unique minimizer.
    """
    f = as_predictor(pred)
    return tuple((int(f(x)[fam.u - 1]), int(f(x)[fam.v - 1])) for x in fam.points[:-1])


def hellinger_sq(D, D_prime):
    """Squared Hellinger distance ``sum (sqrt P - sqrt P')^2`` over the union of atoms."""
    P = {(x, y): p for x, y, p in D.atoms}
    Q = {(x, y): p for x, y, p in D_prime.atoms}
    return sum((math.sqrt(P.get(k, 0)) - math.sqrt(Q.get(k, 0))) ** 2 for k in P.keys() | Q.keys())


def hellinger_closed_form(fam):
    """Squared Hellinger distance between members whose indices differ in one bit."""
    g = fam.gamma
    return fam.p * (1 - g - _sqrt(1 - 2 * g - 3 * g * g))


def _check_bound_args(d, m, gamma, allow_zero_gamma=True):
    if d < 2:
        raise DomainError(f"requires d >= 2 (got d={d})")
    if m < d:
        raise DomainError(f"requires m >= d (got m={m}, d={d})")
    lo_ok = gamma >= 0 if allow_zero_gamma else gamma > 0
    if not lo_ok or gamma > Fraction(1, 3):
        rng = "0 <= gamma" if allow_zero_gamma else "0 < gamma"
        raise DomainError(f"requires {rng} <= 1/3 (got gamma={gamma})")


def default_p(gamma, m):
    """Per-point mass ``2 / (27 gamma^2 m)`` that balances the Hellinger term."""
    if m < 1:
        raise DomainError(f"requires m >= 1 (got m={m})")
    if not gamma > 0:
        raise DomainError(f"requires gamma > 0 (got gamma={gamma})")
    if isinstance(gamma, (int, Fraction)):
        return Fraction(2) / (27 * Fraction(gamma) ** 2 * m)
    return 2 / (27 * gamma * gamma * m)


def intermediate_bound(d, m, gamma, p):
    """``p gamma (d - 1) / 2 * (1 - sqrt(6 p gamma^2 m))`` from the hypercube reduction."""
    _check_bound_args(d, m, gamma)
    if not 0 < p <= Fraction(1, d - 1):
        raise DomainError(f"requires 0 < p <= 1/(d-1) (got p={p}, d={d})")
    return p * gamma * (d - 1) / 2 * (1 - _sqrt(6 * p * gamma * gamma * m))


def assouad_branches(d, m, gamma):
    """``(rate branch, root branch)`` inside the ``min`` of the final bound, both scaled by 1/81.

    At ``gamma == 0`` the rate branch is infinite.
    """
    _check_bound_args(d, m, gamma)
    root = _sqrt(Fraction(d - 1, m)) / 81
    if gamma == 0:
        return math.inf, root
    if isinstance(gamma, (int, Fraction)):
        return Fraction(d - 1) / (81 * gamma * m), root
    return (d - 1) / (81 * gamma * m), root


def assouad_bound(d, m, gamma):
    """``(1/81) * min((d-1)/(gamma m), sqrt((d-1)/m))``."""
    return min(assouad_branches(d, m, gamma))
