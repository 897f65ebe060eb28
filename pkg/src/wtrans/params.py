"""Parameter vectors for W-type states and their local-unitary invariants.

A p-party state of the family is fixed, up to local unitaries, by a point
x = (x_1, ..., x_p) of the simplex {x_k >= 0, sum x_k <= 1}.  The derived
weight x_0 = 1 - sum(x) belongs to the all-zero component and is never
stored.  Party indices are 1-based throughout the public interface.

The pairwise products x_k * x_l are local-unitary invariants and can be
recovered from single-party and two-party concurrences alone, which is what
makes the vector reconstructible from a bare state vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionMismatchError, InvalidParamVectorError
from .tolerances import EQUIV_TOL, SUM_TOL, ZERO_TOL

PRODUCT = "product"
BIPARTITE = "bipartite"
TRULY_MULTIPARTITE = "truly_multipartite"


@dataclass(frozen=True)
class EntClass:
    """Entanglement class of a parameter vector.

    kind is one of "product", "bipartite", "truly_multipartite"; pair holds
    the two 1-based party indices carrying the weight in the bipartite case
    and is None otherwise.
    """

    kind: str
    pair: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.pair is not None:
            d["pair"] = list(self.pair)
        return d


@dataclass(frozen=True)
class ParamVector:
    """Point of the parameter simplex for p >= 3 parties.

    Immutable.  Components are clamped at -1e-12: tiny negative noise from
    upstream arithmetic is zeroed, anything worse raises.
    """

    components: tuple[float, ...]

    def __post_init__(self):
        comps = tuple(float(c) for c in self.components)
        if len(comps) < 3:
            raise InvalidParamVectorError(f"need at least 3 parties, got {len(comps)}")
        cleaned = []
        for i, c in enumerate(comps):
            if c < -SUM_TOL:
                raise InvalidParamVectorError(f"component {i + 1} negative: {c}")
            cleaned.append(max(c, 0.0))
        total = sum(cleaned)
        if total > 1.0 + SUM_TOL:
            raise InvalidParamVectorError(f"components sum to {total} > 1")
        object.__setattr__(self, "components", tuple(cleaned))

    @property
    def p(self) -> int:
        return len(self.components)

    def component(self, k: int) -> float:
        """Weight of party k (1-based)."""
        if not 1 <= k <= self.p:
            raise InvalidParamVectorError(f"party index {k} out of range 1..{self.p}")
        return self.components[k - 1]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return self.p

    def __getitem__(self, i):
        return self.components[i]

    def to_dict(self) -> dict:
        return {"p": self.p, "x": list(self.components)}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamVector":
        try:
            p = int(d["p"])
            x = [float(v) for v in d["x"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParamVectorError(f"malformed parameter vector: {exc}") from exc
        if len(x) != p:
            raise InvalidParamVectorError(f"declared p={p} but {len(x)} components given")
        return cls(tuple(x))


def w_vector(p: int) -> ParamVector:
    """The symmetric vector (1/p, ..., 1/p)."""
    return ParamVector((1.0 / p,) * p)


def x0(x: ParamVector) -> float:
    """Derived zero-component weight 1 - sum(x), clamped into [0, 1]."""
    s = 1.0 - sum(x.components)
    if s < 0.0:
        return 0.0
    if s > 1.0:
        return 1.0
    return s


def classify(x: ParamVector) -> EntClass:
    """Entanglement class by support count at the 1e-10 zero threshold."""
    support = [k + 1 for k, c in enumerate(x.components) if c > ZERO_TOL]
    if len(support) >= 3:
        return EntClass(TRULY_MULTIPARTITE)
    if len(support) == 2:
        return EntClass(BIPARTITE, (support[0], support[1]))
    return EntClass(PRODUCT)


def concurrence_party(x: ParamVector, k: int) -> float:
    """Concurrence between party k and the rest: 2 sqrt(x_k (1 - x_0 - x_k))."""
    xk = x.component(k)
    rest = sum(x.components) - xk
    return 2.0 * math.sqrt(max(xk * rest, 0.0))


def concurrence_subset(x: ParamVector, parties: Iterable[int]) -> float:
    """Concurrence between a party subset and its complement.

    The subset behaves as a single party with aggregated weight
    x_R = sum over the subset, so C_R = 2 sqrt(x_R (1 - x_0 - x_R)).
    """
    R = set(parties)
    if not R or len(R) >= x.p:
        raise InvalidParamVectorError("subset must be nonempty and proper")
    xr = sum(x.component(k) for k in R)
    rest = sum(x.components) - xr
    return 2.0 * math.sqrt(max(xr * rest, 0.0))


def pair_product(x: ParamVector, k: int, l: int) -> float:
    """Invariant product x_k * x_l."""
    if k == l:
        raise InvalidParamVectorError("pair indices must differ")
    return x.component(k) * x.component(l)


def pair_product_from_concurrences(x: ParamVector, k: int, l: int) -> float:
    """Same invariant recovered as (C_k^2 + C_l^2 - C_kl^2) / 8.

    Kept separate so the direct product and the concurrence combination can
    be cross-checked against each other.
    """
    ck = concurrence_party(x, k)
    cl = concurrence_party(x, l)
    ckl = concurrence_subset(x, [k, l])
    return (ck * ck + cl * cl - ckl * ckl) / 8.0


def equivalent(x: ParamVector, y: ParamVector, tol: float = EQUIV_TOL) -> bool:
    """Whether x and y label the same state up to local unitaries.

    Truly multipartite vectors are unique, so equivalence is componentwise
    equality.  Bipartite vectors with weight on the same pair match iff the
    pair products agree.  All product vectors are mutually equivalent.
    """
    if x.p != y.p:
        raise DimensionMismatchError(f"p mismatch: {x.p} vs {y.p}")
    cx = classify(x)
    cy = classify(y)
    if cx.kind != cy.kind:
        return False
    if cx.kind == PRODUCT:
        return True
    if cx.kind == BIPARTITE:
        if cx.pair != cy.pair:
            return False
        r, s = cx.pair
        return abs(pair_product(x, r, s) - pair_product(y, r, s)) <= tol
    return all(abs(a - b) <= tol for a, b in zip(x.components, y.components))


def canonical(x: ParamVector) -> ParamVector:
    """Canonical class representative.

    Truly multipartite vectors are their own representative.  A bipartite
    vector maps to the balanced one with both components at sqrt(x_r x_s).
    Product vectors map to the zero vector.
    """
    c = classify(x)
    if c.kind == TRULY_MULTIPARTITE:
        return x
    comps = [0.0] * x.p
    if c.kind == BIPARTITE:
        r, s = c.pair
        m = math.sqrt(pair_product(x, r, s))
        comps[r - 1] = m
        comps[s - 1] = m
    return ParamVector(tuple(comps))
