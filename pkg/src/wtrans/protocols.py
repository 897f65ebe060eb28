"""Deterministic conversion and distillation of W-type states.

A deterministic conversion x -> y exists iff some vector equivalent to y is
dominated componentwise by x; the compiled protocol lowers one component
per step through a two-branch operation whose outcomes are both equivalent
to the intermediate target.

For targets that cannot be reached deterministically the success
probability of any conversion protocol is bounded by
min(x_1/y_1, ..., x_p/y_p, 1), and on the face where the weights of both
vectors sum to one the bound is attained by a chain of two-outcome
gambles, one per party whose weight ratio sits above the minimum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasibleError,
    MalformedProtocolError,
)
from .localops import KrausOp, OutcomeEnsemble, OutcomeSpec, synthesize_kraus
from .params import (
    BIPARTITE,
    PRODUCT,
    TRULY_MULTIPARTITE,
    ParamVector,
    classify,
    pair_product,
    x0,
)
from .tolerances import COMPLETENESS_TOL, SUM_TOL, ZERO_TOL

CONTINUE = "continue"
SUCCESS = "success"
FAIL = "fail"

_DISPOSITIONS = (CONTINUE, SUCCESS, FAIL)


@dataclass(frozen=True)
class ProtocolStep:
    """One round: the acting party, its operators, and what each outcome
    means for the run (continue to the next step, stop as success, stop as
    failure)."""

    party: int
    ops: tuple[KrausOp, ...]
    dispositions: tuple[str, ...]

    def __post_init__(self):
        if len(self.ops) != len(self.dispositions):
            raise MalformedProtocolError("one disposition per operator required")
        for d in self.dispositions:
            if d not in _DISPOSITIONS:
                raise MalformedProtocolError(f"unknown disposition {d!r}")

    def to_dict(self) -> dict:
        return {
            "party": self.party,
            "ops": [op.to_dict() for op in self.ops],
            "disp": list(self.dispositions),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProtocolStep":
        try:
            party = int(d["party"])
            ops = tuple(KrausOp.from_dict(o) for o in d["ops"])
            disp = tuple(str(s) for s in d["disp"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedProtocolError(f"malformed step: {exc}") from exc
        return cls(party, ops, disp)


@dataclass(frozen=True)
class Protocol:
    """Ordered steps plus the success probability the compiler declared."""

    steps: tuple[ProtocolStep, ...]
    declared_success_probability: float

    def __post_init__(self):
        if not 0.0 <= self.declared_success_probability <= 1.0 + SUM_TOL:
            raise MalformedProtocolError(
                f"declared probability {self.declared_success_probability} outside [0, 1]")

    def check(self, p: int | None = None) -> None:
        """Structural validity: completeness per step and a reachable
        success leaf (an empty protocol counts as trivially successful)."""
        for i, step in enumerate(self.steps):
            total = sum(op.matrix.conj().T @ op.matrix for op in step.ops)
            if np.max(np.abs(total - np.eye(2))) > COMPLETENESS_TOL:
                raise MalformedProtocolError(f"step {i} operators are not complete")
            if p is not None and not 1 <= step.party <= p:
                raise MalformedProtocolError(
                    f"step {i} party {step.party} out of range 1..{p}")
        if self.steps and not any(
                SUCCESS in step.dispositions for step in self.steps):
            raise MalformedProtocolError("no step labels a success leaf")

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "p_success": self.declared_success_probability,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Protocol":
        try:
            steps = tuple(ProtocolStep.from_dict(s) for s in d["steps"])
            ps = float(d["p_success"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedProtocolError(f"malformed protocol: {exc}") from exc
        return cls(steps, ps)


@dataclass(frozen=True)
class ConversionWitness:
    """Dominated equivalent target and the componentwise slack x - y'."""

    target_equivalent: ParamVector
    slack: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "target_equivalent": self.target_equivalent.to_dict(),
            "slack": list(self.slack),
        }


class ProductTargetWarning(UserWarning):
    """Distillation toward a product state is trivially certain."""


def can_convert(x: ParamVector, y: ParamVector) -> ConversionWitness | None:
    """Witness for a deterministic conversion x -> y, or None.

    Truly multipartite targets admit exactly one candidate witness, y
    itself.  For a bipartite target the witness weight may slide along the
    hyperbola of constant pair product; taking the full source weight at
    the first pair party always respects both caps once the product
    inequality holds.  Product targets are always reachable.
    """
    if x.p != y.p:
        raise DimensionMismatchError(f"p mismatch: {x.p} vs {y.p}")
    cls_y = classify(y)
    if cls_y.kind == TRULY_MULTIPARTITE:
        cand = y
    elif cls_y.kind == BIPARTITE:
        r, s = cls_y.pair
        xr = x.component(r)
        xs = x.component(s)
        c = pair_product(y, r, s)
        if xr * xs < c - SUM_TOL:
            return None
        comps = [0.0] * x.p
        comps[r - 1] = xr
        comps[s - 1] = c / xr if xr > 0 else 0.0
        cand = ParamVector(tuple(comps))
    else:
        cand = ParamVector((0.0,) * x.p)
    slack = tuple(xc - yc for xc, yc in zip(x.components, cand.components))
    if any(s < -SUM_TOL for s in slack):
        return None
    return ConversionWitness(cand, slack)


def compile_deterministic_protocol(x: ParamVector, y: ParamVector) -> Protocol:
    """Stepwise protocol realizing a deterministic conversion.

    One step per party whose weight must drop, in ascending party order;
    each step is a single-outcome ensemble whose synthesis splits into two
    equal-probability branches with conjugate phases, both landing on the
    intermediate target.  Raises when no witness exists.
    """
    witness = can_convert(x, y)
    if witness is None:
        raise InfeasibleError("target is not reachable deterministically")
    current = list(x.components)
    goal = witness.target_equivalent.components
    parties = [k for k in range(1, x.p + 1)
               if current[k - 1] - goal[k - 1] > SUM_TOL]
    steps = []
    for pos, k in enumerate(parties):
        nxt = list(current)
        nxt[k - 1] = goal[k - 1]
        source = ParamVector(tuple(current))
        target = ParamVector(tuple(nxt))
        ensemble = OutcomeEnsemble(k, (OutcomeSpec(1.0, target),))
        ops = tuple(op for _, op in synthesize_kraus(source, ensemble))
        disp = SUCCESS if pos == len(parties) - 1 else CONTINUE
        steps.append(ProtocolStep(k, ops, (disp,) * len(ops)))
        current = nxt
    return Protocol(tuple(steps), 1.0)


def distill_bound(x: ParamVector, y: ParamVector) -> float:
    """Upper bound on the success probability of any distillation x -> y.

    Truly multipartite target: min over parties of x_k / y_k, capped at 1.
    Bipartite target: the concurrence ratio 2 sqrt(x_r x_s) / C with
    C = 2 sqrt(y_r y_s), capped at 1.  A product target is reachable with
    certainty; the bound 1 is returned under a warning.
    """
    if x.p != y.p:
        raise DimensionMismatchError(f"p mismatch: {x.p} vs {y.p}")
    cls_y = classify(y)
    if cls_y.kind == PRODUCT:
        warnings.warn("product target: any state reaches it with certainty",
                      ProductTargetWarning, stacklevel=2)
        return 1.0
    if cls_y.kind == BIPARTITE:
        r, s = cls_y.pair
        c_target = 2.0 * math.sqrt(pair_product(y, r, s))
        c_source = 2.0 * math.sqrt(pair_product(x, r, s))
        return min(c_source / c_target, 1.0)
    bound = 1.0
    for k in range(1, x.p + 1):
        yk = y.component(k)
        if yk > ZERO_TOL:
            bound = min(bound, x.component(k) / yk)
    return bound


def compile_distillation_protocol(x: ParamVector, y: ParamVector):
    """Bound-attaining protocol on the zero-weight face.

    Both vectors must have components summing to one (all weight on the
    parties) and strictly positive everywhere.  Parties at the minimal
    ratio x_k / y_k never operate; every other party performs, in
    ascending index order, a two-outcome gamble whose success branch
    rescales the state so that its own ratio joins the minimum, and whose
    failure branch drops to a product state and ends the run.

    Returns (protocol, achieved_probability), the probability being the
    minimal ratio, which meets the distillation bound.
    """
    if x.p != y.p:
        raise DimensionMismatchError(f"p mismatch: {x.p} vs {y.p}")
    face_tol = 1e-10
    if x0(x) > face_tol or x0(y) > face_tol:
        raise InfeasibleError("distillation protocol requires both vectors "
                              "on the zero-weight face")
    if any(c <= ZERO_TOL for c in x.components) or \
            any(c <= ZERO_TOL for c in y.components):
        raise InfeasibleError("face distillation requires strictly positive "
                              "weights on every party")
    p = x.p
    # renormalize onto the exact face so derived zero weights vanish
    sx = sum(x.components)
    sy = sum(y.components)
    xs = [c / sx for c in x.components]
    ys = [c / sy for c in y.components]
    ratios = [a / b for a, b in zip(xs, ys)]
    r_min = min(ratios)
    idle = [i for i in range(p) if ratios[i] <= r_min + SUM_TOL]
    operating = [i for i in range(p) if i not in idle]
    if not operating:
        return Protocol((), 1.0), 1.0

    perm = idle + operating
    xt = [xs[i] for i in perm]
    yt = [ys[i] for i in perm]
    m = len(idle)

    steps = []
    current = list(xs)
    scale_acc = 1.0
    for pos in range(m, p):
        prefix_y = sum(yt[: pos + 1])
        tail_x = sum(xt[pos + 1:])
        s_succ = ((r_min * sum(yt[:pos]) + sum(xt[pos:]))
                  / (r_min * prefix_y + tail_x))
        scale_acc *= s_succ
        p_succ = 1.0 / s_succ
        party = perm[pos] + 1

        nxt = [0.0] * p
        for j in range(p):
            pj = perm[j]
            nxt[pj] = (r_min * yt[j] if j <= pos else xt[j]) * scale_acc
        source = ParamVector(tuple(current))
        succ_target = ParamVector(tuple(nxt))
        fail_target = ParamVector((0.0,) * p)
        ensemble = OutcomeEnsemble(party, (
            OutcomeSpec(p_succ, succ_target, witness_scale=s_succ),
            OutcomeSpec(1.0 - p_succ, fail_target, witness_scale=0.0,
                        witness_target=fail_target),
        ))
        pairs = synthesize_kraus(source, ensemble)
        ops = tuple(op for _, op in pairs)
        last = pos == p - 1
        disp = tuple((SUCCESS if last else CONTINUE) if oi == 0 else FAIL
                     for oi, _ in pairs)
        steps.append(ProtocolStep(party, ops, disp))
        current = nxt

    return Protocol(tuple(steps), r_min), r_min
