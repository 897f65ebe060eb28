"""Single-party operations on W-type states.

An operation by party k that produces outcome lambda with probability
P_lambda and post-state x_lambda is realizable iff each outcome admits an
equivalent witness x'_lambda and a scale s_lambda >= 0 with

    (i)   x'_{lambda,l} = s_lambda * x_l   for every l != k, 0
    (ii)  sum_lambda P_lambda s_lambda = 1
    (iii) sum_lambda P_lambda sqrt(s_lambda x'_{lambda,0}) >= sqrt(x_0)

Measurement operators realizing a valid ensemble are upper triangular in
the local basis,

    M_lambda = [[A_lambda, B_lambda], [0, C_lambda]],

with A = sqrt(P s), C = sqrt(P x'_k / x_k) and B carrying a phase chosen so
that the weighted phased moduli close on sqrt(x_0) exactly; completeness of
the operator set is then an algebraic identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasibleError,
    InvalidEnsembleError,
    NumericError,
    UnreachableTargetError,
)
from .params import (
    BIPARTITE,
    PRODUCT,
    TRULY_MULTIPARTITE,
    ParamVector,
    classify,
    equivalent,
    pair_product,
    x0,
)
from .tolerances import (
    COMPLETENESS_TOL,
    PROB_EPS,
    SUM_TOL,
    VALIDATION_TOL,
    ZERO_TOL,
)

_TRIANGULAR_EPS = 1e-14


def _snap(v: float) -> float:
    """Zero out derived weights below the component threshold."""
    return v if v > ZERO_TOL else 0.0


@dataclass(frozen=True)
class KrausOp:
    """2x2 measurement operator, row-major."""

    rows: tuple[tuple[complex, complex], tuple[complex, complex]]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=complex)

    @classmethod
    def from_matrix(cls, m) -> "KrausOp":
        a = np.asarray(m, dtype=complex)
        if a.shape != (2, 2):
            raise InvalidEnsembleError(f"operator must be 2x2, got {a.shape}")
        return cls(((complex(a[0, 0]), complex(a[0, 1])),
                    (complex(a[1, 0]), complex(a[1, 1]))))

    @classmethod
    def identity(cls) -> "KrausOp":
        return cls(((1.0 + 0j, 0j), (0j, 1.0 + 0j)))

    def is_upper_triangular(self) -> bool:
        return abs(self.rows[1][0]) <= _TRIANGULAR_EPS

    def to_dict(self) -> dict:
        m = self.matrix
        return {"re": m.real.tolist(), "im": m.imag.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "KrausOp":
        try:
            re = np.array(d["re"], dtype=float)
            im = np.array(d["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidEnsembleError(f"malformed operator: {exc}") from exc
        if re.shape != (2, 2) or im.shape != (2, 2):
            raise InvalidEnsembleError("operator blocks must be 2x2")
        return cls.from_matrix(re + 1j * im)


@dataclass(frozen=True)
class OutcomeSpec:
    """One outcome of an ensemble: probability, target class member, and
    optionally an explicit witness (scale and/or equivalent target)."""

    probability: float
    target: ParamVector
    witness_scale: float | None = None
    witness_target: ParamVector | None = None


@dataclass(frozen=True)
class OutcomeEnsemble:
    """Outcomes of a single-party operation, acting_party 1-based."""

    acting_party: int
    outcomes: tuple[OutcomeSpec, ...]

    def to_dict(self) -> dict:
        outs = []
        for o in self.outcomes:
            rec: dict = {"probability": o.probability, "target": o.target.to_dict()}
            if o.witness_scale is not None:
                rec["witness_scale"] = o.witness_scale
            if o.witness_target is not None:
                rec["witness_target"] = o.witness_target.to_dict()
            outs.append(rec)
        return {"acting_party": self.acting_party, "outcomes": outs}

    @classmethod
    def from_dict(cls, d: dict) -> "OutcomeEnsemble":
        try:
            party = int(d["acting_party"])
            raw = d["outcomes"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidEnsembleError(f"malformed ensemble: {exc}") from exc
        outs = []
        for rec in raw:
            ws = rec.get("witness_scale")
            wt = rec.get("witness_target")
            outs.append(OutcomeSpec(
                probability=float(rec["probability"]),
                target=ParamVector.from_dict(rec["target"]),
                witness_scale=None if ws is None else float(ws),
                witness_target=None if wt is None else ParamVector.from_dict(wt),
            ))
        return cls(party, tuple(outs))


@dataclass(frozen=True)
class ResolvedWitness:
    scale: float
    vector: ParamVector


@dataclass
class ValidationReport:
    ok: bool
    condition: str | None = None
    detail: str = ""
    witnesses: list[ResolvedWitness] = field(default_factory=list)
    lhs_iii: float = 0.0
    rhs_iii: float = 0.0

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "condition": self.condition,
            "detail": self.detail,
            "witnesses": [
                {"scale": w.scale, "vector": w.vector.to_dict()} for w in self.witnesses
            ],
            "lhs_iii": self.lhs_iii,
            "rhs_iii": self.rhs_iii,
        }


# internal slot records used during witness resolution
@dataclass
class _Fixed:
    scale: float
    comps: list[float]


@dataclass
class _Free:
    # kind "fixedvec": vector already fixed, scale only enters (ii)/(iii)
    # kind "pair": bipartite target containing the acting party; the scale
    # sweeps the one-parameter witness family
    kind: str
    comps: list[float]
    v0: float = 1.0
    cprod: float = 0.0
    xj: float = 0.0
    j0: int = -1
    k0: int = -1


def _outcome_slot(x: ParamVector, k: int, spec: OutcomeSpec, tol: float):
    """Resolve one outcome to a fixed witness or a free family.

    Returns (_Fixed | _Free | None, invalid_detail).  None with a detail
    signals that no witness can satisfy condition (i) for this outcome.
    """
    p = x.p
    k0 = k - 1
    xc = x.components
    target = spec.target
    tclass = classify(target)

    if spec.witness_target is not None:
        if not equivalent(spec.witness_target, target):
            raise InvalidEnsembleError(
                "witness_target is not equivalent to the outcome target")
        comps = list(spec.witness_target.components)
        if spec.witness_scale is not None:
            return _Fixed(float(spec.witness_scale), comps), None
        ratios = [(comps[l], xc[l]) for l in range(p)
                  if l != k0 and xc[l] > ZERO_TOL]
        if ratios:
            num, den = max(ratios, key=lambda t: t[1])
            return _Fixed(num / den, comps), None
        # condition (i) is vacuous; scale is a free degree of freedom
        return _Free("fixedvec", comps, v0=_snap(x0(spec.witness_target))), None

    if spec.witness_scale is not None:
        s = float(spec.witness_scale)
        comps = [s * xc[l] for l in range(p)]
        if tclass.kind == TRULY_MULTIPARTITE:
            comps[k0] = target.components[k0]
        elif tclass.kind == BIPARTITE and (k0 + 1) in tclass.pair:
            j0 = (tclass.pair[0] if tclass.pair[1] == k0 + 1 else tclass.pair[1]) - 1
            c = pair_product(target, *tclass.pair)
            if s * xc[j0] <= ZERO_TOL:
                return None, "scale kills the partner weight of a bipartite target"
            comps[k0] = c / (s * xc[j0])
        else:
            comps[k0] = 0.0
        if sum(comps) > 1.0 + tol:
            return None, "witness for the given scale leaves the simplex"
        vec = ParamVector(tuple(comps))
        if not equivalent(vec, target):
            return None, "witness for the given scale is not equivalent to the target"
        return _Fixed(s, comps), None

    if tclass.kind == TRULY_MULTIPARTITE:
        ratios = []
        for l in range(p):
            if l == k0:
                continue
            if xc[l] <= ZERO_TOL:
                if target.components[l] > ZERO_TOL:
                    raise UnreachableTargetError(
                        f"target weight at party {l + 1} but source weight is zero")
                continue
            ratios.append((target.components[l] / xc[l], xc[l]))
        if not ratios:
            raise UnreachableTargetError(
                "truly multipartite target from a source confined to the acting party")
        vals = [r for r, _ in ratios]
        if max(vals) - min(vals) > tol:
            return None, (
                f"scaled-copy ratios spread {max(vals) - min(vals):.3e} across parties")
        s = max(ratios, key=lambda t: t[1])[0]
        return _Fixed(s, list(target.components)), None

    if tclass.kind == BIPARTITE:
        r, sp = tclass.pair
        c = pair_product(target, r, sp)
        if (k0 + 1) in tclass.pair:
            j0 = (r if sp == k0 + 1 else sp) - 1
            if xc[j0] <= ZERO_TOL:
                raise UnreachableTargetError(
                    f"target weight at party {j0 + 1} but source weight is zero")
            stray = [l for l in range(p)
                     if l not in (k0, j0) and xc[l] > ZERO_TOL]
            if stray:
                return None, (
                    f"source weight at party {stray[0] + 1} cannot be scaled away "
                    "for a bipartite target")
            comps = [0.0] * p
            return _Free("pair", comps, cprod=c, xj=xc[j0], j0=j0), None
        if xc[r - 1] <= ZERO_TOL or xc[sp - 1] <= ZERO_TOL:
            raise UnreachableTargetError(
                "bipartite target on a pair where the source has no weight")
        stray = [l for l in range(p)
                 if l not in (k0, r - 1, sp - 1) and xc[l] > ZERO_TOL]
        if stray:
            return None, (
                f"source weight at party {stray[0] + 1} cannot be scaled away "
                "for a bipartite target")
        s = math.sqrt(c / (xc[r - 1] * xc[sp - 1]))
        comps = [0.0] * p
        comps[r - 1] = s * xc[r - 1]
        comps[sp - 1] = s * xc[sp - 1]
        if sum(comps) > 1.0 + tol:
            return None, "scaled bipartite witness leaves the simplex"
        return _Fixed(s, comps), None

    # product target
    if any(xc[l] > ZERO_TOL for l in range(p) if l != k0):
        return _Fixed(0.0, [0.0] * p), None
    return _Free("fixedvec", [0.0] * p, v0=1.0), None


def _free_bounds(slot: _Free, prob: float, mass_cap: float):
    """Feasible mass range for a free slot."""
    if slot.kind == "fixedvec":
        return 0.0, mass_cap
    disc = max(1.0 - 4.0 * slot.cprod, 0.0)
    u_lo = (1.0 - math.sqrt(disc)) / 2.0
    u_hi = (1.0 + math.sqrt(disc)) / 2.0
    return prob * u_lo / slot.xj, prob * u_hi / slot.xj


def _free_term(slot: _Free, prob: float, mass: float) -> float:
    """Condition-(iii) contribution P*sqrt(s*x'_0) for a free slot."""
    if mass <= 0.0:
        return 0.0
    s = mass / prob
    if slot.kind == "fixedvec":
        return prob * math.sqrt(s * slot.v0)
    u = s * slot.xj
    v0 = 1.0 - u - slot.cprod / u if u > 0 else 0.0
    return prob * math.sqrt(s * max(v0, 0.0))


def _scan_split(slot_a, pa, slot_b, pb, total, lo_a, hi_a):
    """1-D maximization of the joint (iii) contribution of two free slots.

    Dense 1024-point grid over the feasible split followed by a golden
    section refinement around the best grid cell.
    """
    if hi_a <= lo_a:
        return lo_a
    n = 1024
    grid = [lo_a + (hi_a - lo_a) * i / (n - 1) for i in range(n)]

    def val(ma):
        return _free_term(slot_a, pa, ma) + _free_term(slot_b, pb, total - ma)

    best_i = max(range(n), key=lambda i: val(grid[i]))
    left = grid[max(best_i - 1, 0)]
    right = grid[min(best_i + 1, n - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = left, right
    c1 = b - phi * (b - a)
    c2 = a + phi * (b - a)
    f1, f2 = val(c1), val(c2)
    for _ in range(80):
        if b - a < 1e-15:
            break
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + phi * (b - a)
            f2 = val(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - phi * (b - a)
            f1 = val(c1)
    mid = (a + b) / 2.0
    return mid if val(mid) >= val(grid[best_i]) else grid[best_i]


def _allocate_free(slots, probs, mass, tol):
    """Distribute scale mass over free slots maximizing the (iii) sum.

    Returns the list of masses, or None when the feasible region is empty.
    """
    n = len(slots)
    bounds = [_free_bounds(s, p, mass) for s, p in zip(slots, probs)]
    lo_sum = sum(b[0] for b in bounds)
    hi_sum = sum(min(b[1], mass) for b in bounds)
    if lo_sum > mass + tol or hi_sum < mass - tol:
        return None
    if n == 1:
        return [mass]
    # start from the proportional interior point, then sweep pairs
    span = [min(b[1], mass) - b[0] for b in bounds]
    extra = mass - lo_sum
    tot_span = sum(span)
    masses = [b[0] + (extra * sp / tot_span if tot_span > 0 else 0.0)
              for b, sp in zip(bounds, span)]
    for _ in range(50):
        improved = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                total = masses[i] + masses[j]
                lo_i = max(bounds[i][0], total - min(bounds[j][1], total))
                hi_i = min(min(bounds[i][1], total), total - bounds[j][0])
                if hi_i < lo_i:
                    continue
                before = (_free_term(slots[i], probs[i], masses[i])
                          + _free_term(slots[j], probs[j], masses[j]))
                mi = _scan_split(slots[i], probs[i], slots[j], probs[j],
                                 total, lo_i, hi_i)
                after = (_free_term(slots[i], probs[i], mi)
                         + _free_term(slots[j], probs[j], total - mi))
                if after > before + 1e-15:
                    improved += after - before
                    masses[i] = mi
                    masses[j] = total - mi
        if improved < 1e-13:
            break
    return masses


def _free_witness(slot: _Free, prob: float, mass: float) -> ResolvedWitness:
    s = mass / prob
    comps = list(slot.comps)
    if slot.kind == "pair":
        u = s * slot.xj
        comps[slot.j0] = u
        comps[slot.k0] = slot.cprod / u if u > ZERO_TOL else 0.0
    return ResolvedWitness(s, ParamVector(tuple(min(max(c, 0.0), 1.0) for c in comps)))


def validate_ensemble(x: ParamVector, ensemble: OutcomeEnsemble,
                      tol: float = VALIDATION_TOL) -> ValidationReport:
    """Decide realizability of an outcome ensemble by the acting party.

    Witness resolution per outcome: a truly multipartite target is its own
    witness and pins the scale through the scaled-copy condition; a
    bipartite target away from the acting party pins the scale through its
    pair product; a product target forces scale zero whenever any other
    party keeps weight; a bipartite target containing the acting party
    leaves a one-parameter family that is searched to maximize the
    condition-(iii) left side subject to condition (ii).
    """
    p = x.p
    k = ensemble.acting_party
    if not 1 <= k <= p:
        raise InvalidEnsembleError(f"acting party {k} out of range 1..{p}")
    outcomes = [o for o in ensemble.outcomes if o.probability > 0.0]
    if not outcomes:
        raise InvalidEnsembleError("ensemble has no outcome with positive probability")
    for o in outcomes:
        if o.target.p != p:
            raise DimensionMismatchError(
                f"target p={o.target.p} does not match source p={p}")
        if o.probability > 1.0 + SUM_TOL:
            raise InvalidEnsembleError(f"outcome probability {o.probability} > 1")
    psum = sum(o.probability for o in outcomes)
    if abs(psum - 1.0) > SUM_TOL:
        raise InvalidEnsembleError(f"outcome probabilities sum to {psum}")

    slots: list[_Fixed | _Free] = []
    for o in outcomes:
        slot, bad = _outcome_slot(x, k, o, tol)
        if slot is None:
            return ValidationReport(False, "i", bad)
        if isinstance(slot, _Free):
            slot.k0 = k - 1
        slots.append(slot)

    probs = [o.probability for o in outcomes]
    fixed_mass = sum(pr * sl.scale for pr, sl in zip(probs, slots)
                     if isinstance(sl, _Fixed))
    free_ix = [i for i, sl in enumerate(slots) if isinstance(sl, _Free)]

    witnesses: list[ResolvedWitness | None] = [None] * len(slots)
    if free_ix:
        mass = 1.0 - fixed_mass
        if mass < -tol:
            return ValidationReport(
                False, "ii",
                f"fixed scales already average to {fixed_mass:.12f} > 1")
        mass = max(mass, 0.0)
        fslots = [slots[i] for i in free_ix]
        fprobs = [probs[i] for i in free_ix]
        masses = _allocate_free(fslots, fprobs, mass, tol)
        if masses is None:
            return ValidationReport(
                False, "i",
                "no witness in the free families can absorb the remaining scale")
        for i, m in zip(free_ix, masses):
            witnesses[i] = _free_witness(slots[i], probs[i], m)
    else:
        if abs(fixed_mass - 1.0) > tol:
            return ValidationReport(
                False, "ii", f"scales average to {fixed_mass:.12f}, need 1")

    for i, sl in enumerate(slots):
        if isinstance(sl, _Fixed):
            comps = [min(max(c, 0.0), 1.0) for c in sl.comps]
            witnesses[i] = ResolvedWitness(sl.scale, ParamVector(tuple(comps)))

    # condition (i) holds by construction for resolved witnesses; recheck
    # uniformly so caller-provided witnesses are covered too
    xc = x.components
    for i, w in enumerate(witnesses):
        for l in range(p):
            if l == k - 1:
                continue
            if abs(w.vector.components[l] - w.scale * xc[l]) > tol:
                return ValidationReport(
                    False, "i",
                    f"outcome {i}: component {l + 1} is not a scaled copy")

    avg_scale = sum(pr * w.scale for pr, w in zip(probs, witnesses))
    if abs(avg_scale - 1.0) > tol:
        return ValidationReport(
            False, "ii", f"scales average to {avg_scale:.12f}, need 1",
            witnesses=list(witnesses))

    lhs = sum(pr * math.sqrt(w.scale * _snap(x0(w.vector)))
              for pr, w in zip(probs, witnesses))
    rhs = math.sqrt(_snap(x0(x)))
    if lhs < rhs - tol:
        return ValidationReport(
            False, "iii",
            f"zero-weight budget {lhs:.12f} falls short of {rhs:.12f}",
            witnesses=list(witnesses), lhs_iii=lhs, rhs_iii=rhs)
    return ValidationReport(True, None, "", list(witnesses), lhs, rhs)


def solve_phase_closure(moduli, target: float,
                        tol: float = VALIDATION_TOL):
    """Find phases with sum(m_i * exp(i phi_i)) = target (real, >= 0).

    Any modulus exceeding target plus the sum of the others is halved into
    two fragments first; the polygon then closes.  Fragments are placed in
    descending modulus order (ties broken by original index): at each step
    the next distance to the target is the smallest value that keeps every
    remaining edge placeable, and the edge angle follows from the law of
    cosines.  Returns (phases, split_map) over the fragment list, where
    split_map[i] is the index of the originating modulus.
    """
    ms = [float(m) for m in moduli]
    if any(m < 0 for m in ms):
        raise InfeasibleError("moduli must be nonnegative")
    t = float(target)
    if t < 0:
        raise InfeasibleError("closure target must be nonnegative")
    if t > sum(ms) + tol:
        raise InfeasibleError(
            f"closure target {t} exceeds total modulus {sum(ms)}")

    frags: list[tuple[float, int]] = [(m, i) for i, m in enumerate(ms)]
    for _ in range(64):
        total = sum(m for m, _ in frags)
        j = max(range(len(frags)), key=lambda i: frags[i][0])
        m_max, oi = frags[j]
        if m_max <= t + (total - m_max):
            break
        frags[j: j + 1] = [(m_max / 2.0, oi), (m_max / 2.0, oi)]
    else:
        raise NumericError("modulus splitting failed to stabilize")

    order = sorted(range(len(frags)), key=lambda i: (-frags[i][0], frags[i][1]))
    n = len(order)
    suffix = [0.0] * (n + 2)
    for pos in range(n - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + frags[order[pos]][0]

    phases = [0.0] * len(frags)
    z = 0.0 + 0.0j
    for pos, idx in enumerate(order):
        m = frags[idx][0]
        if m <= 0.0:
            continue
        delta = t - z.real - 1j * z.imag
        d = abs(delta)
        direction = delta / d if d > 1e-300 else 1.0 + 0.0j
        if pos == n - 1:
            edge = m * direction if d > 1e-300 else complex(m)
        else:
            m_next = frags[order[pos + 1]][0]
            d_next = max(abs(d - m), m_next - suffix[pos + 2], 0.0)
            d_next = min(d_next, d + m)
            denom = 2.0 * d * m
            cos_th = ((d * d + m * m - d_next * d_next) / denom
                      if denom > 0 else 1.0)
            cos_th = min(1.0, max(-1.0, cos_th))
            edge = m * direction * cmath.exp(1j * math.acos(cos_th))
        z += edge
        phases[idx] = cmath.phase(edge)

    if abs(z - t) > tol:
        raise NumericError(f"phase chain missed the target by {abs(z - t):.3e}")
    return phases, [oi for _, oi in frags]


def synthesize_kraus(x: ParamVector, ensemble: OutcomeEnsemble,
                     tol: float = VALIDATION_TOL):
    """Build measurement operators realizing a valid ensemble.

    Returns a list of (outcome_index, KrausOp).  An outcome may appear
    twice when phase closure had to split it; the two fragments carry half
    its probability each.  Completeness of the returned set is checked to
    1e-12.
    """
    report = validate_ensemble(x, ensemble, tol)
    if not report.ok:
        raise InfeasibleError(
            f"ensemble not realizable (condition {report.condition}): {report.detail}")
    k = ensemble.acting_party
    outcomes = [o for o in ensemble.outcomes if o.probability > 0.0]
    probs = [o.probability for o in outcomes]
    xk = x.component(k)
    x0v = _snap(x0(x))

    if xk <= ZERO_TOL:
        if all(equivalent(o.target, x) for o in outcomes):
            return [(i, KrausOp.from_matrix(math.sqrt(pr) * np.eye(2)))
                    for i, pr in enumerate(probs)]
        raise InfeasibleError(
            "acting party carries no weight; only trivial ensembles are realizable")

    moduli = [pr * math.sqrt(w.scale * _snap(x0(w.vector)))
              for pr, w in zip(probs, report.witnesses)]
    phases, split_map = solve_phase_closure(moduli, math.sqrt(x0v), tol)

    frag_count = [split_map.count(i) for i in range(len(outcomes))]
    ops: list[tuple[int, KrausOp]] = []
    for phi, oi in zip(phases, split_map):
        w = report.witnesses[oi]
        pf = probs[oi] / frag_count[oi]
        a = math.sqrt(pf * w.scale)
        wz = _snap(x0(w.vector))
        b = math.sqrt(pf / xk) * (math.sqrt(wz) * cmath.exp(1j * phi)
                                  - math.sqrt(w.scale * x0v))
        c = math.sqrt(pf * w.vector.components[k - 1] / xk)
        ops.append((oi, KrausOp(((a, b), (0.0 + 0.0j, c)))))

    total = sum(op.matrix.conj().T @ op.matrix for _, op in ops)
    if np.max(np.abs(total - np.eye(2))) > COMPLETENESS_TOL:
        raise NumericError("synthesized operators violate completeness")
    return ops


def apply_kraus_symbolic(x: ParamVector, k: int, op: KrausOp):
    """Outcome probability and post-operation vector, by algebra alone.

    A lower-triangular entry is rotated away first (the discarded factor is
    a local unitary on the acting party, which cannot change the class).
    Returns (probability, vector); the vector is None when the branch is
    empty at 1e-15.
    """
    m = op.matrix
    if abs(m[1, 0]) > _TRIANGULAR_EPS:
        _, r = np.linalg.qr(m)
        fix = np.ones(2, dtype=complex)
        for i in range(2):
            d = r[i, i]
            if abs(d) > 0:
                fix[i] = d.conjugate() / abs(d)
        m = np.diag(fix) @ r
    a = m[0, 0].real
    b = m[0, 1]
    c = m[1, 1].real
    xk = x.component(k)
    x0v = x0(x)
    rest = sum(x.components) - xk
    z0 = a * math.sqrt(x0v) + b * math.sqrt(xk)
    prob = abs(z0) ** 2 + a * a * rest + c * c * xk
    if prob <= PROB_EPS:
        return max(prob, 0.0), None
    comps = [a * a * xl / prob for xl in x.components]
    comps[k - 1] = c * c * xk / prob
    return prob, ParamVector(tuple(min(max(v, 0.0), 1.0) for v in comps))
