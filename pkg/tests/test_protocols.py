"""Deterministic conversion decisions, protocol compilation, distillation."""

import json
import math

import numpy as np
import pytest

from wtrans import (
    CONTINUE,
    FAIL,
    SUCCESS,
    KrausOp,
    ParamVector,
    ProductTargetWarning,
    Protocol,
    ProtocolStep,
    apply_kraus_symbolic,
    can_convert,
    compile_deterministic_protocol,
    compile_distillation_protocol,
    distill_bound,
    equivalent,
    w_vector,
)
from wtrans.errors import (
    DimensionMismatchError,
    InfeasibleError,
    MalformedProtocolError,
)
from conftest import random_interior, random_on_face
from wtrans.sampling import random_dominated

X521 = ParamVector((0.5, 0.2, 0.1))


def test_can_convert_dominated_multipartite():
    w = can_convert(X521, ParamVector((0.4, 0.2, 0.1)))
    assert w is not None
    assert tuple(w.target_equivalent) == (0.4, 0.2, 0.1)
    assert w.slack == pytest.approx((0.1, 0.0, 0.0), abs=1e-12)


def test_can_convert_bipartite_witness_frozen():
    w = can_convert(X521, ParamVector((0.3, 0.3, 0.0)))
    assert w is not None
    assert np.allclose(tuple(w.target_equivalent), (0.5, 0.18, 0.0), atol=1e-12)
    assert equivalent(w.target_equivalent, ParamVector((0.3, 0.3, 0.0)))


def test_can_convert_bipartite_lopsided_source():
    # sliding all pair weight onto the heavy party is what makes this work
    x = ParamVector((0.8, 0.02, 0.05))
    y = ParamVector((0.1, 0.1, 0.0))
    w = can_convert(x, y)
    assert w is not None
    assert np.allclose(tuple(w.target_equivalent), (0.8, 0.0125, 0.0), atol=1e-12)


def test_can_convert_refusals():
    assert can_convert(w_vector(3), ParamVector((0.4, 0.3, 0.3))) is None
    # pair product above anything the source can offer
    assert can_convert(ParamVector((0.1, 0.1, 0.5)),
                       ParamVector((0.45, 0.45, 0.0))) is None
    with pytest.raises(DimensionMismatchError):
        can_convert(w_vector(3), w_vector(4))


def test_can_convert_product_target():
    w = can_convert(X521, ParamVector((0.0, 0.0, 0.0)))
    assert w is not None
    assert tuple(w.target_equivalent) == (0.0, 0.0, 0.0)


def test_can_convert_reflexive_and_transitive():
    rng = np.random.default_rng(31)
    for _ in range(100):
        p = int(rng.integers(3, 6))
        x = random_interior(p, rng)
        assert can_convert(x, x) is not None
        y = random_dominated(x, rng)
        z = random_dominated(y, rng)
        assert can_convert(x, y) is not None
        assert can_convert(y, z) is not None
        assert can_convert(x, z) is not None


def test_compile_identity_is_empty():
    proto = compile_deterministic_protocol(X521, X521)
    assert proto.steps == ()
    assert proto.declared_success_probability == 1.0
    proto.check(3)


def test_compile_single_drop():
    y = ParamVector((0.4, 0.2, 0.1))
    proto = compile_deterministic_protocol(X521, y)
    assert len(proto.steps) == 1
    step = proto.steps[0]
    assert step.party == 1
    assert step.dispositions == (SUCCESS, SUCCESS)
    total = 0.0
    for op in step.ops:
        prob, post = apply_kraus_symbolic(X521, 1, op)
        total += prob
        assert np.allclose(tuple(post), tuple(y), atol=1e-10)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_compile_bipartite_target_step_parties():
    proto = compile_deterministic_protocol(X521, ParamVector((0.3, 0.3, 0.0)))
    assert [s.party for s in proto.steps] == [2, 3]
    assert proto.declared_success_probability == 1.0
    proto.check(3)


def test_compile_bipartite_to_bipartite():
    x = ParamVector((0.5, 0.2, 0.0))
    y = ParamVector((0.5, 0.1, 0.0))
    proto = compile_deterministic_protocol(x, y)
    assert [s.party for s in proto.steps] == [2]
    total = 0.0
    for op in proto.steps[0].ops:
        prob, post = apply_kraus_symbolic(x, 2, op)
        total += prob
        if prob > 0:
            assert equivalent(post, y, tol=1e-9)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_compile_unreachable_raises():
    with pytest.raises(InfeasibleError):
        compile_deterministic_protocol(w_vector(3), ParamVector((0.4, 0.3, 0.3)))


def test_compile_random_chains():
    rng = np.random.default_rng(32)
    for _ in range(40):
        p = int(rng.integers(3, 6))
        x = random_interior(p, rng)
        y = random_dominated(x, rng)
        proto = compile_deterministic_protocol(x, y)
        proto.check(p)
        assert proto.declared_success_probability == 1.0
        # replay the branch that keeps taking the first operator; every
        # branch of every step lands on the same intermediate
        current = x
        for step in proto.steps:
            posts = []
            total = 0.0
            for op in step.ops:
                prob, post = apply_kraus_symbolic(current, step.party, op)
                total += prob
                posts.append(post)
            assert total == pytest.approx(1.0, abs=1e-10)
            for post in posts[1:]:
                assert np.allclose(tuple(post), tuple(posts[0]), atol=1e-9)
            current = posts[0]
        assert np.allclose(tuple(current), tuple(y), atol=1e-8)


def test_distill_bound_frozen():
    assert distill_bound(ParamVector((0.4, 0.35, 0.25)), w_vector(3)) == \
        pytest.approx(0.75, abs=1e-12)
    assert distill_bound(X521, X521) == 1.0
    y = ParamVector((0.45, 0.45, 0.0))
    assert distill_bound(X521, y) == pytest.approx(
        math.sqrt(0.1) / 0.45, abs=1e-12)


def test_distill_bound_scaled_family():
    rng = np.random.default_rng(33)
    for _ in range(50):
        p = int(rng.integers(3, 6))
        y = random_on_face(p, rng)
        t = float(rng.uniform(0.2, 0.95))
        x = ParamVector(tuple(t * c for c in y))
        assert distill_bound(x, y) == pytest.approx(t, abs=1e-12)


def test_distill_bound_product_target_warns():
    with pytest.warns(ProductTargetWarning):
        b = distill_bound(X521, ParamVector((0.0, 0.0, 0.0)))
    assert b == 1.0


def test_distill_bound_matches_convertibility():
    rng = np.random.default_rng(34)
    for _ in range(150):
        p = int(rng.integers(3, 6))
        x = random_interior(p, rng)
        y = random_interior(p, rng)
        ratios = [a / b for a, b in zip(x, y)]
        if abs(min(ratios) - 1.0) < 1e-6:
            continue
        convertible = can_convert(x, y) is not None
        bound = distill_bound(x, y)
        assert convertible == (bound >= 1.0)


def test_compile_distillation_frozen():
    x = ParamVector((0.4, 0.35, 0.25))
    proto, achieved = compile_distillation_protocol(x, w_vector(3))
    assert achieved == pytest.approx(0.75, abs=1e-14)
    assert proto.declared_success_probability == pytest.approx(0.75, abs=1e-14)
    assert [s.party for s in proto.steps] == [1, 2]
    proto.check(3)
    assert SUCCESS in proto.steps[-1].dispositions
    assert all(FAIL in s.dispositions for s in proto.steps)


def test_compile_distillation_second_frozen():
    proto, achieved = compile_distillation_protocol(
        ParamVector((0.5, 0.3, 0.2)), ParamVector((0.4, 0.4, 0.2)))
    assert achieved == pytest.approx(0.75, abs=1e-14)
    assert [s.party for s in proto.steps] == [1, 3]


def test_compile_distillation_identity():
    x = ParamVector((0.4, 0.35, 0.25))
    proto, achieved = compile_distillation_protocol(x, x)
    assert proto.steps == ()
    assert achieved == 1.0


def test_compile_distillation_requires_face():
    with pytest.raises(InfeasibleError):
        compile_distillation_protocol(X521, w_vector(3))
    with pytest.raises(InfeasibleError):
        compile_distillation_protocol(ParamVector((0.5, 0.5, 0.0)), w_vector(3))


def test_compile_distillation_meets_bound():
    rng = np.random.default_rng(35)
    for _ in range(40):
        p = int(rng.integers(3, 6))
        x = random_on_face(p, rng)
        y = random_on_face(p, rng)
        bound = distill_bound(x, y)
        proto, achieved = compile_distillation_protocol(x, y)
        assert achieved == pytest.approx(bound, abs=1e-12)
        proto.check(p)


def test_protocol_check_errors():
    half = KrausOp.from_matrix(0.5 * np.eye(2))
    with pytest.raises(MalformedProtocolError):
        Protocol((ProtocolStep(1, (half,), (SUCCESS,)),), 1.0).check(3)
    with pytest.raises(MalformedProtocolError):
        ProtocolStep(1, (KrausOp.identity(),), (SUCCESS, FAIL))
    with pytest.raises(MalformedProtocolError):
        ProtocolStep(1, (KrausOp.identity(),), ("maybe",))
    with pytest.raises(MalformedProtocolError):
        Protocol((), 1.5)
    with pytest.raises(MalformedProtocolError):
        Protocol((ProtocolStep(1, (KrausOp.identity(),), (CONTINUE,)),),
                 1.0).check(3)
    with pytest.raises(MalformedProtocolError):
        Protocol((ProtocolStep(7, (KrausOp.identity(),), (SUCCESS,)),),
                 1.0).check(3)


def test_protocol_json_round_trip():
    proto = compile_deterministic_protocol(X521, ParamVector((0.4, 0.2, 0.1)))
    blob = json.dumps(proto.to_dict())
    back = Protocol.from_dict(json.loads(blob))
    assert back.declared_success_probability == proto.declared_success_probability
    assert len(back.steps) == len(proto.steps)
    for a, b in zip(back.steps, proto.steps):
        assert a.party == b.party
        assert a.dispositions == b.dispositions
        for opa, opb in zip(a.ops, b.ops):
            assert np.allclose(opa.matrix, opb.matrix, atol=1e-15)
