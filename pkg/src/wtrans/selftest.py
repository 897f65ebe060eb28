"""Condensed end-to-end verification pass.

Runs a bounded batch of randomized checks across every layer and reports
one pass/fail line per area.  This is what the selftest CLI subcommand
and service route execute; the full test suite covers the same ground
with far larger budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import localops, params, protocols, sampling, statevec


@dataclass
class AreaResult:
    name: str
    ok: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


def _area(name):
    def wrap(fn):
        fn._area_name = name
        return fn
    return wrap


@_area("parametrization")
def _check_params(rng) -> str:
    n = 40
    for _ in range(n):
        p = int(rng.integers(3, 7))
        x = sampling.random_interior(p, rng)
        assert params.classify(x).kind == params.TRULY_MULTIPARTITE
        assert params.equivalent(x, params.canonical(x))
        ck = params.concurrence_party(x, 1)
        expect = 2.0 * math.sqrt(x.component(1) * (1.0 - params.x0(x) - x.component(1)))
        assert abs(ck - expect) < 1e-12
        for k in range(1, p):
            d = params.pair_product(x, k, k + 1)
            d2 = params.pair_product_from_concurrences(x, k, k + 1)
            assert abs(d - d2) < 1e-10
    return f"{n} random vectors: class, canonical, concurrence identities"


@_area("validation-synthesis")
def _check_synth(rng) -> str:
    n = 25
    for _ in range(n):
        p = int(rng.integers(3, 6))
        x = sampling.random_interior(p, rng)
        y = sampling.random_dominated(x, rng)
        proto = protocols.compile_deterministic_protocol(x, y)
        cur = x
        for step in proto.steps:
            probs = []
            nxt = cur
            for op in step.ops:
                pr, post = localops.apply_kraus_symbolic(cur, step.party, op)
                probs.append(pr)
                if post is not None and pr > 1e-12:
                    nxt = post
            assert abs(sum(probs) - 1.0) < 1e-9
            cur = nxt
        assert params.equivalent(cur, y, tol=1e-8)
    return f"{n} deterministic conversions replayed symbolically"


@_area("phase-closure")
def _check_closure(rng) -> str:
    n = 200
    for _ in range(n):
        m = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 6)))
        hi = float(m.sum())
        t = float(rng.uniform(0.0, hi))
        phases, origins = localops.solve_phase_closure([float(v) for v in m], t)
        counts = [origins.count(i) for i in range(len(m))]
        vals = [float(m[oi]) / counts[oi] for oi in origins]
        z = sum(v * np.exp(1j * ph) for v, ph in zip(vals, phases))
        assert abs(z - t) < 1e-9
    return f"{n} random closure instances land on the target"


@_area("oracle-agreement")
def _check_oracle(rng) -> str:
    n = 20
    for _ in range(n):
        p = int(rng.integers(3, 6))
        x = sampling.random_interior(p, rng)
        y = sampling.random_dominated(x, rng)
        k = int(rng.integers(1, p + 1))
        comps = list(x)
        comps[k - 1] = y.component(k)
        target = params.ParamVector(tuple(comps))
        spec = localops.OutcomeSpec(1.0, target)
        ens = localops.OutcomeEnsemble(k, (spec,))
        ops = localops.synthesize_kraus(x, ens)
        state = statevec.build_state(x)
        for idx, op in ops:
            pr_sym, post_sym = localops.apply_kraus_symbolic(x, k, op)
            pr_vec, post_vec = statevec.apply_local(state, k, op)
            assert abs(pr_sym - pr_vec) < 1e-10
            if post_sym is not None and post_vec is not None:
                got, _ = statevec.extract_params(post_vec)
                assert params.equivalent(got, post_sym, tol=1e-8)
    return f"{n} synthesized ensembles agree with the state-vector oracle"


@_area("extraction")
def _check_extraction(rng) -> str:
    n = 15
    for _ in range(n):
        p = int(rng.integers(3, 7))
        x = sampling.random_interior(p, rng)
        state = statevec.build_state(x)
        rotated, _ = sampling.scramble(state, rng)
        got, basis = statevec.extract_params(rotated)
        assert params.equivalent(got, x, tol=1e-7)
        rebuilt = statevec.apply_basis(got, basis.vectors)
        overlap = abs(np.vdot(rotated.amplitudes, rebuilt))
        assert overlap > 1.0 - 1e-8
    return f"{n} scrambled states recovered by extraction"


@_area("distillation")
def _check_distill(rng) -> str:
    n = 10
    for _ in range(n):
        p = int(rng.integers(3, 5))
        x = sampling.random_on_face(p, rng)
        y = sampling.random_on_face(p, rng)
        bound = protocols.distill_bound(x, y)
        proto, achieved = protocols.compile_distillation_protocol(x, y)
        assert achieved <= bound + 1e-12
        report = statevec.run_protocol(statevec.build_state(x), proto)
        assert abs(report.success_probability - achieved) < 1e-9
        for leaf in report.leaves:
            if leaf.disposition == protocols.SUCCESS and leaf.probability:
                assert params.equivalent(leaf.vector, y, tol=1e-7)
    return f"{n} on-face distillations hit the declared probability"


_CHECKS = [_check_params, _check_synth, _check_closure, _check_oracle,
           _check_extraction, _check_distill]


def run_selftest(seed: int = 0) -> dict:
    """Run every area with a seeded generator; returns a summary dict."""
    areas = []
    all_ok = True
    for idx, fn in enumerate(_CHECKS):
        rng = np.random.default_rng(np.random.SeedSequence((seed, idx)))
        try:
            detail = fn(rng)
            areas.append(AreaResult(fn._area_name, True, detail))
        except Exception as exc:  # any failure is a red area, not a crash
            areas.append(AreaResult(fn._area_name, False, f"{type(exc).__name__}: {exc}"))
            all_ok = False
    return {"ok": all_ok, "areas": [a.to_dict() for a in areas]}
