"""Single-party operations: validation, phase closure, operator synthesis."""

import cmath
import json
import math

import numpy as np
import pytest

from wtrans import (
    KrausOp,
    OutcomeEnsemble,
    OutcomeSpec,
    ParamVector,
    apply_kraus_symbolic,
    solve_phase_closure,
    synthesize_kraus,
    validate_ensemble,
    w_vector,
    x0,
)
from wtrans.errors import (
    DimensionMismatchError,
    InfeasibleError,
    InvalidEnsembleError,
    UnreachableTargetError,
)
from conftest import make_valid_ensemble, random_interior

X531 = ParamVector((0.5, 0.3, 0.1))
X521 = ParamVector((0.5, 0.2, 0.1))


def _single(k, target, prob=1.0):
    return OutcomeEnsemble(k, (OutcomeSpec(prob, target),))


def test_kraus_op_basics():
    op = KrausOp.identity()
    assert op.is_upper_triangular()
    assert np.allclose(op.matrix, np.eye(2))
    m = np.array([[0.3, 0.1 + 0.2j], [0.0, 0.5]])
    op2 = KrausOp.from_matrix(m)
    blob = json.dumps(op2.to_dict())
    back = KrausOp.from_dict(json.loads(blob))
    assert np.allclose(back.matrix, m)
    lower = KrausOp.from_matrix([[0.3, 0.0], [0.2, 0.5]])
    assert not lower.is_upper_triangular()
    with pytest.raises(InvalidEnsembleError):
        KrausOp.from_matrix(np.eye(3))


def test_validate_identity_ensemble():
    rep = validate_ensemble(w_vector(3), _single(1, w_vector(3)))
    assert rep.ok
    assert len(rep.witnesses) == 1
    assert rep.witnesses[0].scale == pytest.approx(1.0, abs=1e-12)


def test_validate_two_outcome_frozen():
    # acting party 1 of (0.5, 0.3, 0.1); scales resolve to 1.6 and 0.4
    ens = OutcomeEnsemble(1, (
        OutcomeSpec(0.5, ParamVector((0.2, 0.48, 0.16))),
        OutcomeSpec(0.5, ParamVector((0.5, 0.12, 0.04))),
    ))
    rep = validate_ensemble(X531, ens)
    assert rep.ok
    scales = [w.scale for w in rep.witnesses]
    assert scales == pytest.approx([1.6, 0.4], abs=1e-12)
    assert rep.lhs_iii == pytest.approx(0.4373731019593281, abs=1e-12)
    assert rep.rhs_iii == pytest.approx(math.sqrt(0.1), abs=1e-12)


def test_validate_condition_i_fails():
    # ratios 1.0 at party 2, 2.0 at party 3: no scaled copy
    rep = validate_ensemble(X531, _single(1, ParamVector((0.4, 0.3, 0.2))))
    assert not rep.ok
    assert rep.condition == "i"


def test_validate_condition_ii_fails():
    # single outcome at scale 0.9: probabilities cannot average it to 1
    rep = validate_ensemble(X531, _single(1, ParamVector((0.3, 0.27, 0.09))))
    assert not rep.ok
    assert rep.condition == "ii"


def test_validate_condition_iii_fails():
    # both targets saturate the simplex, so no zero weight survives
    ens = OutcomeEnsemble(1, (
        OutcomeSpec(0.5, ParamVector((0.55, 0.3, 0.15))),
        OutcomeSpec(0.5, ParamVector((0.85, 0.1, 0.05))),
    ))
    rep = validate_ensemble(X521, ens)
    assert not rep.ok
    assert rep.condition == "iii"
    assert rep.lhs_iii == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs_iii == pytest.approx(math.sqrt(0.2), abs=1e-12)


def test_validate_errors():
    with pytest.raises(InvalidEnsembleError):
        validate_ensemble(X531, _single(5, X531))
    with pytest.raises(DimensionMismatchError):
        validate_ensemble(X531, _single(1, ParamVector((0.2, 0.2, 0.2, 0.2))))
    with pytest.raises(InvalidEnsembleError):
        validate_ensemble(X531, _single(1, X531, prob=0.7))
    with pytest.raises(UnreachableTargetError):
        # target puts weight where the source has none
        validate_ensemble(ParamVector((0.5, 0.3, 0.0)),
                          _single(1, ParamVector((0.2, 0.3, 0.2))))


def test_validate_drops_zero_probability_outcomes():
    ens = OutcomeEnsemble(1, (
        OutcomeSpec(0.0, ParamVector((0.9, 0.03, 0.01))),
        OutcomeSpec(1.0, X531),
    ))
    rep = validate_ensemble(X531, ens)
    assert rep.ok
    assert len(rep.witnesses) == 1


def test_closure_frozen_pairs():
    phases, origins = solve_phase_closure([0.5, 0.5], 0.6)
    assert origins == [0, 1]
    th = math.acos(0.6)
    assert sorted(phases) == pytest.approx([-th, th], abs=1e-12)

    phases, origins = solve_phase_closure([0.7], 0.7)
    assert origins == [0]
    assert phases == pytest.approx([0.0], abs=1e-12)


def test_closure_splits_dominant_modulus():
    phases, origins = solve_phase_closure([1.0], 0.5)
    assert origins == [0, 0]
    assert sorted(phases) == pytest.approx([-math.pi / 3, math.pi / 3], abs=1e-12)


def test_closure_infeasible():
    with pytest.raises(InfeasibleError):
        solve_phase_closure([0.3, 0.2], 0.6)
    with pytest.raises(InfeasibleError):
        solve_phase_closure([0.3], -0.1)
    with pytest.raises(InfeasibleError):
        solve_phase_closure([-0.3], 0.1)


def test_closure_random_instances():
    rng = np.random.default_rng(21)
    for _ in range(500):
        n = int(rng.integers(1, 6))
        ms = rng.uniform(0.0, 1.0, size=n)
        t = float(rng.uniform(0.0, float(np.sum(ms))))
        phases, origins = solve_phase_closure(list(ms), t)
        counts = [origins.count(i) for i in range(n)]
        z = sum((ms[oi] / counts[oi]) * cmath.exp(1j * ph)
                for ph, oi in zip(phases, origins))
        assert abs(z - t) <= 1e-10


def test_synthesize_deterministic_drop_frozen():
    # one-outcome decrease of the acting party's weight forces a split
    y = ParamVector((0.4, 0.2, 0.1))
    ops = synthesize_kraus(X521, _single(1, y))
    assert len(ops) == 2
    assert [oi for oi, _ in ops] == [0, 0]
    for _, op in ops:
        m = op.matrix
        assert m[0, 0] == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert abs(m[0, 1]) == pytest.approx(math.sqrt(0.1), abs=1e-12)
        assert m[1, 0] == 0.0
        assert m[1, 1] == pytest.approx(math.sqrt(0.4), abs=1e-12)
    b0 = ops[0][1].matrix[0, 1]
    b1 = ops[1][1].matrix[0, 1]
    assert b0 == pytest.approx(np.conj(b1), abs=1e-12)
    for _, op in ops:
        prob, post = apply_kraus_symbolic(X521, 1, op)
        assert prob == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(tuple(post), tuple(y), atol=1e-12)


def test_synthesize_identity():
    ops = synthesize_kraus(X531, _single(2, X531))
    assert len(ops) == 1
    assert np.allclose(ops[0][1].matrix, np.eye(2), atol=1e-12)


def test_synthesize_zero_weight_party():
    x = ParamVector((0.0, 0.5, 0.3))
    flipped = ParamVector((0.0, 0.3, 0.5))  # same pair product
    ops = synthesize_kraus(x, OutcomeEnsemble(1, (
        OutcomeSpec(0.6, x), OutcomeSpec(0.4, flipped))))
    assert len(ops) == 2
    assert np.allclose(ops[0][1].matrix, math.sqrt(0.6) * np.eye(2), atol=1e-12)
    with pytest.raises(InfeasibleError):
        synthesize_kraus(x, _single(1, ParamVector((0.0, 0.5, 0.2))))


def test_synthesize_rejects_invalid():
    with pytest.raises(InfeasibleError):
        synthesize_kraus(X531, _single(1, ParamVector((0.4, 0.3, 0.2))))


def test_apply_identity():
    prob, post = apply_kraus_symbolic(X521, 1, KrausOp.identity())
    assert prob == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(tuple(post), tuple(X521), atol=1e-12)


def test_apply_projection_frozen():
    op = KrausOp.from_matrix([[1.0, 0.0], [0.0, 0.0]])
    prob, post = apply_kraus_symbolic(X521, 1, op)
    assert prob == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(tuple(post), (0.0, 0.4, 0.2), atol=1e-12)


def test_apply_empty_branch():
    x = ParamVector((0.0, 0.5, 0.3))
    op = KrausOp.from_matrix([[0.0, 0.0], [0.0, 1.0]])
    prob, post = apply_kraus_symbolic(x, 1, op)
    assert prob == 0.0
    assert post is None


def test_apply_lower_triangular_reduction():
    # a lower entry is removed by a discardable local unitary, so the
    # branch probability and class data must match the QR-reduced form
    rng = np.random.default_rng(22)
    for _ in range(50):
        x = random_interior(3, rng)
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m *= 0.5 / np.linalg.norm(m, 2)
        k = int(rng.integers(1, 4))
        prob, post = apply_kraus_symbolic(x, k, KrausOp.from_matrix(m))
        _, r = np.linalg.qr(m)
        fix = np.diag([d.conjugate() / abs(d) if abs(d) > 0 else 1.0
                       for d in np.diag(r)])
        prob_r, post_r = apply_kraus_symbolic(x, k, KrausOp.from_matrix(fix @ r))
        assert prob == pytest.approx(prob_r, abs=1e-12)
        assert np.allclose(tuple(post), tuple(post_r), atol=1e-12)


def test_synthesis_reproduces_witnesses():
    # merged fragments give back each outcome's probability and witness
    rng = np.random.default_rng(23)
    for _ in range(60):
        p = int(rng.integers(3, 6))
        x = random_interior(p, rng)
        k = int(rng.integers(1, p + 1))
        ens = make_valid_ensemble(rng, x, k)
        rep = validate_ensemble(x, ens)
        assert rep.ok
        ops = synthesize_kraus(x, ens)
        total = sum(op.matrix.conj().T @ op.matrix for _, op in ops)
        assert np.max(np.abs(total - np.eye(2))) <= 1e-12
        merged = {}
        for oi, op in ops:
            prob, post = apply_kraus_symbolic(x, k, op)
            merged.setdefault(oi, []).append((prob, post))
        for oi, branches in merged.items():
            spec = ens.outcomes[oi]
            w = rep.witnesses[oi].vector
            assert sum(pr for pr, _ in branches) == pytest.approx(
                spec.probability, abs=1e-10)
            for _, post in branches:
                assert np.allclose(tuple(post), tuple(w), atol=1e-10)
