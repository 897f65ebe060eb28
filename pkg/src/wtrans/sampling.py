"""Random instance generators for self-checks and property tests.

Everything takes an explicit numpy Generator so callers control
reproducibility.
"""

from __future__ import annotations

import numpy as np

from .params import ParamVector
from .statevec import PureState, apply_local


def random_interior(p: int, rng: np.random.Generator,
                    floor: float = 0.02) -> ParamVector:
    """Weight vector with every component and the zeroth weight at least
    floor; the bulk is Dirichlet-distributed."""
    if (p + 1) * floor >= 1.0:
        raise ValueError("floor too large for this many parties")
    raw = rng.dirichlet(np.ones(p + 1))
    scaled = floor + raw * (1.0 - (p + 1) * floor)
    return ParamVector(tuple(float(v) for v in scaled[1:]))


def random_on_face(p: int, rng: np.random.Generator,
                   floor: float = 0.02) -> ParamVector:
    """Weight vector with zero zeroth weight and all components at least
    floor."""
    if p * floor >= 1.0:
        raise ValueError("floor too large for this many parties")
    raw = rng.dirichlet(np.ones(p))
    scaled = floor + raw * (1.0 - p * floor)
    return ParamVector(tuple(float(v) for v in scaled))


def random_dominated(x: ParamVector, rng: np.random.Generator,
                     low: float = 0.3) -> ParamVector:
    """Componentwise-dominated vector y <= x with ratios drawn from
    [low, 1]."""
    factors = rng.uniform(low, 1.0, size=x.p)
    return ParamVector(tuple(float(v * f) for v, f in zip(x, factors)))


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def scramble(state: PureState, rng: np.random.Generator
             ) -> tuple[PureState, list[np.ndarray]]:
    """Apply an independent random unitary to every party.

    Returns the rotated state and the unitaries used.
    """
    out = state
    used = []
    for k in range(1, state.p + 1):
        u = random_unitary(rng)
        used.append(u)
        prob, nxt = apply_local(out, k, u)
        assert nxt is not None and abs(prob - 1.0) < 1e-9
        out = nxt
    return out, used
