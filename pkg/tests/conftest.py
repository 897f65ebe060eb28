"""Shared generators for the property suites.

Ensembles are built the way the sufficiency argument constructs them:
sample probabilities and scales with the scale average pinned to one,
then pick each target's free component and keep the draw only if the
zeroth-weight inequality holds.  A scale-one component-decrease ensemble
is the always-valid fallback.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from wtrans import OutcomeEnsemble, OutcomeSpec, ParamVector, x0
from wtrans.errors import InvalidParamVectorError
from wtrans.sampling import random_interior, random_on_face


def make_valid_ensemble(rng: np.random.Generator, x: ParamVector, k: int,
                        max_tries: int = 60) -> OutcomeEnsemble:
    p = x.p
    rest = sum(x) - x.component(k)
    for _ in range(max_tries):
        n = int(rng.integers(1, 4))
        probs = rng.dirichlet(np.ones(n))
        raw = rng.uniform(0.3, 1.8, size=n)
        scales = raw / float(np.sum(probs * raw))
        outs = []
        lhs = 0.0
        feasible = True
        for pr, s in zip(probs, scales):
            cap = 1.0 - s * rest
            if cap <= 1e-6:
                feasible = False
                break
            xk = float(rng.uniform(0.05, 0.85)) * cap
            comps = [s * v for v in x]
            comps[k - 1] = xk
            try:
                target = ParamVector(tuple(comps))
            except InvalidParamVectorError:
                feasible = False
                break
            outs.append(OutcomeSpec(float(pr), target))
            lhs += pr * math.sqrt(s * x0(target))
        if feasible and lhs >= math.sqrt(x0(x)) + 1e-9:
            return OutcomeEnsemble(k, tuple(outs))
    comps = list(x)
    comps[k - 1] = 0.5 * comps[k - 1]
    return OutcomeEnsemble(k, (OutcomeSpec(1.0, ParamVector(tuple(comps))),))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


__all__ = ["make_valid_ensemble", "random_interior", "random_on_face"]
