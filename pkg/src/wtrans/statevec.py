"""Exact state-vector oracle for the parameter-level calculus.

States live in the full 2^p amplitude space with party 1 on the most
significant bit.  Everything the symbolic layer claims (outcome
probabilities, post-operation vectors, protocol success mass) can be
recomputed here from nothing but linear algebra, which is what the tests
lean on.

Extraction recovers the parameter vector of an arbitrary state of the
family from local-unitary invariants: single-party and two-party
concurrences give the pair products D_kl = x_k x_l, a reference pair with
the largest product anchors the square-root reconstruction, and the local
bases are read off product vectors in the kernels of two-party reduced
densities.  A final overlap check certifies the result or rejects the
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NotWTypeError
from .localops import KrausOp
from .params import ParamVector, x0
from .protocols import CONTINUE, FAIL, SUCCESS, Protocol
from .tolerances import (
    FIDELITY_TOL,
    PROB_EPS,
    RANK_TOL,
    SUM_TOL,
    VALIDATION_TOL,
    ZERO_TOL,
)

MAX_PARTIES = 14

# reconstruction thresholds: a pair product below this is treated as
# absent when choosing reference pairs
_D_FLOOR = 1e-14
_PRODUCT_SV_RATIO = 1e-7


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state of p qubits, amplitudes indexed with party 1
    on the most significant bit."""

    amplitudes: np.ndarray
    p: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.p < 3:
            raise InvalidStateError(f"need at least 3 parties, got {self.p}")
        if self.p > MAX_PARTIES:
            raise InvalidStateError(f"p={self.p} exceeds the {MAX_PARTIES}-party cap")
        if amps.size != 2 ** self.p:
            raise InvalidStateError(
                f"expected {2 ** self.p} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > SUM_TOL:
            raise InvalidStateError(f"state norm^2 is {norm}, not 1")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "amps": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PureState":
        try:
            p = int(d["p"])
            amps = np.array([complex(re, im) for re, im in d["amps"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidStateError(f"malformed state: {exc}") from exc
        return cls(amps, p)


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """Per-party orthonormal pairs (alpha_k, beta_k).

    vectors has shape (p, 2, 2): vectors[k-1, 0] is alpha_k, vectors[k-1, 1]
    is beta_k.  unitary(k) returns the change-of-basis matrix with alpha
    and beta as columns.
    """

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 3 or v.shape[1:] != (2, 2):
            raise InvalidStateError("basis array must have shape (p, 2, 2)")
        for k in range(v.shape[0]):
            g = v[k] @ v[k].conj().T
            if np.max(np.abs(g - np.eye(2))) > 1e-10:
                raise InvalidStateError(f"party {k + 1} basis is not orthonormal")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def p(self) -> int:
        return self.vectors.shape[0]

    def alpha(self, k: int) -> np.ndarray:
        return self.vectors[k - 1, 0]

    def beta(self, k: int) -> np.ndarray:
        return self.vectors[k - 1, 1]

    def unitary(self, k: int) -> np.ndarray:
        return self.vectors[k - 1].T.copy()

    def to_dict(self) -> dict:
        out = []
        for k in range(self.p):
            out.append({
                "alpha": [[float(c.real), float(c.imag)] for c in self.vectors[k, 0]],
                "beta": [[float(c.real), float(c.imag)] for c in self.vectors[k, 1]],
            })
        return {"parties": out}


def one_hot_index(p: int, k: int) -> int:
    """Amplitude index of the basis state with party k excited (1-based)."""
    return 1 << (p - k)


def build_state(x: ParamVector) -> PureState:
    """State with amplitude sqrt(x_0) on all-zero and sqrt(x_k) on the
    k-th one-hot basis state."""
    p = x.p
    amps = np.zeros(2 ** p, dtype=complex)
    amps[0] = math.sqrt(x0(x))
    for k in range(1, p + 1):
        amps[one_hot_index(p, k)] = math.sqrt(x.component(k))
    nrm = float(np.vdot(amps, amps).real)
    amps /= math.sqrt(nrm)
    return PureState(amps, p)


def apply_local(state: PureState, k: int, op) -> tuple[float, PureState | None]:
    """Apply a 2x2 operator to party k.

    Returns (probability, normalized post-state); the state is None when
    the branch is empty at 1e-15.
    """
    if not 1 <= k <= state.p:
        raise InvalidStateError(f"party {k} out of range 1..{state.p}")
    m = op.matrix if isinstance(op, KrausOp) else np.asarray(op, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidStateError(f"operator must be 2x2, got {m.shape}")
    psi = state.amplitudes.reshape([2] * state.p)
    out = np.tensordot(m, psi, axes=([1], [k - 1]))
    out = np.moveaxis(out, 0, k - 1).reshape(-1)
    prob = float(np.vdot(out, out).real)
    if prob <= PROB_EPS:
        return max(prob, 0.0), None
    return prob, PureState(out / math.sqrt(prob), state.p)


def reduced_density(state: PureState, parties) -> np.ndarray:
    """Density matrix of a party subset, complement traced out.

    Row and column indices run over the kept parties in ascending order.
    """
    keep = sorted({k - 1 for k in parties})
    if not keep or len(keep) >= state.p:
        raise InvalidStateError("subset must be nonempty and proper")
    if keep[0] < 0 or keep[-1] >= state.p:
        raise InvalidStateError("party index out of range")
    drop = [a for a in range(state.p) if a not in keep]
    psi = state.amplitudes.reshape([2] * state.p)
    rho = np.tensordot(psi, psi.conj(), axes=(drop, drop))
    dim = 2 ** len(keep)
    return rho.reshape(dim, dim)


def _rank2_eigs(rho: np.ndarray, context: str) -> tuple[float, float]:
    """Two leading eigenvalues, rejecting matrices of rank above two."""
    evals = np.linalg.eigvalsh(rho)[::-1]
    trace = float(np.sum(evals).real)
    if len(evals) > 2 and evals[2] > RANK_TOL * trace:
        raise NotWTypeError(
            f"{context}: reduced density has rank above two "
            f"(third eigenvalue {evals[2]:.3e})")
    return float(max(evals[0], 0.0)), float(max(evals[1], 0.0))


def concurrence_from_state(state: PureState, parties) -> float:
    """Concurrence 2 sqrt(l1 l2) of a subset, from the reduced spectrum."""
    rho = reduced_density(state, parties)
    l1, l2 = _rank2_eigs(rho, f"subset {sorted(parties)}")
    return 2.0 * math.sqrt(l1 * l2)


def find_product_in_kernel(rho: np.ndarray) -> tuple[np.ndarray, bool]:
    """Product vector in the two-dimensional kernel of a 4x4 density.

    A kernel vector v1 + mu v2, reshaped to 2x2, is a product iff its
    determinant vanishes; the determinant is quadratic in mu, so the roots
    (plus mu = infinity when v2 itself is singular) enumerate every
    candidate.  Returns (vector, degenerate) where degenerate reports that
    more than one direction qualified; the one with the larger Schmidt gap
    wins.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError("kernel search expects a 4x4 matrix")
    evals, evecs = np.linalg.eigh(rho)
    trace = float(np.sum(evals).real)
    kernel = [evecs[:, i] for i in range(4) if evals[i] < RANK_TOL * max(trace, 1e-300)]
    if len(kernel) != 2:
        raise NotWTypeError(
            f"kernel dimension {len(kernel)} instead of 2")
    v1, v2 = kernel
    m1 = v1.reshape(2, 2)
    m2 = v2.reshape(2, 2)
    a = m2[0, 0] * m2[1, 1] - m2[0, 1] * m2[1, 0]
    c = m1[0, 0] * m1[1, 1] - m1[0, 1] * m1[1, 0]
    b = (m1[0, 0] * m2[1, 1] + m2[0, 0] * m1[1, 1]
         - m1[0, 1] * m2[1, 0] - m2[0, 1] * m1[1, 0])
    eps = 1e-14
    candidates: list[np.ndarray] = []
    if abs(a) > eps:
        disc = np.sqrt(complex(b * b - 4.0 * a * c))
        for root in ((-b + disc) / (2 * a), (-b - disc) / (2 * a)):
            candidates.append(v1 + root * v2)
    elif abs(b) > eps:
        candidates.append(v1 + (-c / b) * v2)
        candidates.append(v2)
    elif abs(c) > eps:
        candidates.append(v2)
    else:
        # the whole kernel is product directions
        return v1 / np.linalg.norm(v1), True

    products = []
    for w in candidates:
        nrm = np.linalg.norm(w)
        if nrm < 1e-12:
            continue
        w = w / nrm
        sv = np.linalg.svd(w.reshape(2, 2), compute_uv=False)
        if sv[1] <= _PRODUCT_SV_RATIO * sv[0]:
            products.append((sv[0] - sv[1], w))
    if not products:
        raise NotWTypeError("no product vector found in the kernel")
    products.sort(key=lambda t: -t[0])
    best = products[0][1]
    degenerate = False
    for _, w in products[1:]:
        if abs(np.vdot(best, w)) < 1.0 - 1e-8:
            degenerate = True
            break
    return best, degenerate


def _principal_vector(rho2: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(rho2)
    return evecs[:, int(np.argmax(evals))]


def _orth(v: np.ndarray) -> np.ndarray:
    return np.array([v[1].conjugate(), -v[0].conjugate()])


def _to_basis(state: PureState, basis: np.ndarray) -> np.ndarray:
    """Amplitudes of the state in the candidate product basis.

    basis has shape (p, 2, 2) with rows alpha, beta per party; entry j of
    the result is the overlap with the tensor product selecting beta where
    bit j is set.
    """
    psi = state.amplitudes.reshape([2] * state.p)
    out = psi
    for k in range(state.p):
        u = basis[k]  # rows alpha, beta
        out = np.tensordot(u.conj(), out, axes=([1], [k]))
        out = np.moveaxis(out, 0, k)
    return out.reshape(-1)


def apply_basis(x: ParamVector, basis: np.ndarray) -> np.ndarray:
    """Amplitudes of (U_1 x ... x U_p) |Phi(x)> with U_k = [alpha_k beta_k]."""
    p = x.p
    phi = build_state(x).amplitudes.reshape([2] * p)
    out = phi
    for k in range(p):
        u = basis[k].T  # columns alpha, beta
        out = np.tensordot(u, out, axes=([1], [k]))
        out = np.moveaxis(out, 0, k)
    return out.reshape(-1)


def extract_params(state: PureState,
                   fidelity_tol: float = FIDELITY_TOL
                   ) -> tuple[ParamVector, LocalBasis]:
    """Parameter vector and aligning local bases of a W-type state.

    Raises NotWTypeError when any reduced density exceeds rank two, the
    reconstructed weights leave the simplex, or the final overlap with the
    rebuilt standard form falls short of one by more than fidelity_tol.
    A state whose weight sits on exactly two parties is reported through
    the balanced class representative.
    """
    p = state.p
    rho1 = [reduced_density(state, [k]) for k in range(1, p + 1)]
    conc1 = []
    for k, rho in enumerate(rho1, start=1):
        det = float(np.linalg.det(rho).real)
        conc1.append(2.0 * math.sqrt(max(det, 0.0)))

    D = np.zeros((p, p))
    for i in range(p):
        for j in range(i + 1, p):
            ckl = concurrence_from_state(state, [i + 1, j + 1])
            val = (conc1[i] ** 2 + conc1[j] ** 2 - ckl ** 2) / 8.0
            D[i, j] = D[j, i] = max(val, 0.0)

    flat = int(np.argmax(D))
    r0, s0 = sorted(divmod(flat, p))
    if D[r0, s0] <= _D_FLOOR:
        comps = [0.0] * p
        xvec = ParamVector(tuple(comps))
        basis = _product_basis(state, rho1)
        return _certify(state, xvec, basis, fidelity_tol)

    comps = [0.0] * p
    for k in range(p):
        if k in (r0, s0):
            continue
        comps[k] = math.sqrt(D[k, r0] * D[k, s0] / D[r0, s0])
    third = [(min(D[r0, t], D[s0, t]), t) for t in range(p) if t not in (r0, s0)]
    gap, t_ref = max(third) if third else (0.0, -1)
    if gap > _D_FLOOR:
        comps[r0] = math.sqrt(D[r0, s0] * D[r0, t_ref] / D[s0, t_ref])
        comps[s0] = math.sqrt(D[r0, s0] * D[s0, t_ref] / D[r0, t_ref])
    else:
        balanced = math.sqrt(D[r0, s0])
        comps[r0] = comps[s0] = balanced

    total = sum(comps)
    if total > 1.0 + 1e-8:
        raise NotWTypeError(
            f"reconstructed weights sum to {total:.12f}, outside the simplex")
    if total > 1.0:
        comps = [c / total for c in comps]
    xvec = ParamVector(tuple(comps))

    support = [k for k in range(p) if comps[k] > ZERO_TOL]
    if len(support) >= 3:
        basis = _multipartite_basis(state, rho1, comps, support, r0, s0)
    elif len(support) == 2:
        basis = _bipartite_basis(state, rho1, comps, support)
    else:
        basis = _product_basis(state, rho1)
    return _certify(state, xvec, basis, fidelity_tol)


def _product_basis(state: PureState, rho1) -> np.ndarray:
    p = state.p
    basis = np.zeros((p, 2, 2), dtype=complex)
    for k in range(p):
        al = _principal_vector(rho1[k])
        basis[k, 0] = al
        basis[k, 1] = _orth(al)
    z = np.vdot(apply_basis(ParamVector((0.0,) * p), basis), state.amplitudes)
    if abs(z) > 1e-12:
        basis[0, 0] = basis[0, 0] * (z / abs(z))
    return basis


def _multipartite_basis(state, rho1, comps, support, r0, s0) -> np.ndarray:
    p = state.p
    basis = np.zeros((p, 2, 2), dtype=complex)
    for k in range(p):
        if k in support:
            partner = (s0 if k == r0 else r0)
            if partner not in support:
                partner = next(m for m in support if m != k)
            pair = sorted((k, partner))
            rho_pair = reduced_density(state, [pair[0] + 1, pair[1] + 1])
            w, _ = find_product_in_kernel(rho_pair)
            u, _sv, vh = np.linalg.svd(w.reshape(2, 2))
            beta = u[:, 0] if k == pair[0] else vh[0, :]
            basis[k, 1] = beta
            basis[k, 0] = _orth(beta)
        else:
            al = _principal_vector(rho1[k])
            basis[k, 0] = al
            basis[k, 1] = _orth(al)
    return _fix_phases(state, basis)


def _fix_phases(state: PureState, basis: np.ndarray) -> np.ndarray:
    p = state.p
    coords = _to_basis(state, basis)
    z0 = coords[0]
    if abs(z0) > 1e-12:
        basis = basis.copy()
        basis[0, 0] = basis[0, 0] * (z0 / abs(z0))
        coords = _to_basis(state, basis)
    out = basis.copy()
    for k in range(p):
        zk = coords[one_hot_index(p, k + 1)]
        if abs(zk) > 1e-12:
            out[k, 1] = out[k, 1] * (zk / abs(zk))
    return out


def _bipartite_basis(state, rho1, comps, support) -> np.ndarray:
    p = state.p
    r, s = support
    basis = np.zeros((p, 2, 2), dtype=complex)
    for k in range(p):
        if k in support:
            continue
        al = _principal_vector(rho1[k])
        basis[k, 0] = al
        basis[k, 1] = _orth(al)
    # project the spectators away to get the two-qubit factor
    psi = state.amplitudes.reshape([2] * p)
    for k in range(p):
        if k in support:
            continue
        psi = np.tensordot(basis[k, 0].conj(), psi, axes=([0], [k]))
        psi = np.expand_dims(psi, k)
    axes_order = [r, s] + [k for k in range(p) if k not in support]
    chi = np.transpose(psi, axes_order).reshape(4, -1)[:, 0]
    nrm = np.linalg.norm(chi)
    if nrm < 1e-8:
        raise NotWTypeError("two-party factor has vanishing norm")
    chi = chi / nrm

    c = comps[r]
    tau = np.array([[math.sqrt(max(1.0 - 2.0 * c, 0.0)), math.sqrt(c)],
                    [math.sqrt(c), 0.0]])
    ux, sx, vhx = np.linalg.svd(chi.reshape(2, 2))
    ut, st, vht = np.linalg.svd(tau)
    if np.max(np.abs(sx - st)) > 1e-6:
        raise NotWTypeError("two-party factor spectrum does not match the "
                            "balanced representative")
    u_r = ux @ ut.conj().T
    u_s = vhx.T @ vht.conj()
    basis[r, 0] = u_r[:, 0]
    basis[r, 1] = u_r[:, 1]
    basis[s, 0] = u_s[:, 0]
    basis[s, 1] = u_s[:, 1]
    return basis


def _certify(state: PureState, xvec: ParamVector, basis: np.ndarray,
             fidelity_tol: float) -> tuple[ParamVector, LocalBasis]:
    rebuilt = apply_basis(xvec, basis)
    overlap = abs(np.vdot(state.amplitudes, rebuilt))
    if overlap < 1.0 - fidelity_tol:
        raise NotWTypeError(
            f"overlap with the rebuilt standard form is {overlap:.12f}")
    return xvec, LocalBasis(basis)


# ---------------------------------------------------------------------------
# protocol execution


@dataclass
class LeafRecord:
    path: tuple[int, ...]
    disposition: str
    probability: float | None = None
    frequency: float | None = None
    stderr: float | None = None
    count: int | None = None
    vector: ParamVector | None = None

    def to_dict(self) -> dict:
        d: dict = {"path": list(self.path), "disposition": self.disposition}
        if self.probability is not None:
            d["probability"] = self.probability
        if self.frequency is not None:
            d["frequency"] = self.frequency
            d["stderr"] = self.stderr
            d["count"] = self.count
        d["x"] = self.vector.to_dict() if self.vector is not None else None
        return d


@dataclass
class ExecutionReport:
    mode: str
    leaves: list[LeafRecord]
    success_probability: float
    declared_success_probability: float
    total_probability: float | None = None
    trials: int | None = None
    seed: int | None = None
    average_vector: list[float] | None = None
    monotone_ok: bool | None = None
    monotone_max_violation: float | None = None

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "leaves": [leaf.to_dict() for leaf in self.leaves],
            "success_probability": self.success_probability,
            "declared_success_probability": self.declared_success_probability,
            "total_probability": self.total_probability,
            "trials": self.trials,
            "seed": self.seed,
            "average_vector": self.average_vector,
            "monotone_ok": self.monotone_ok,
            "monotone_max_violation": self.monotone_max_violation,
        }


def _realign(state: PureState) -> tuple[PureState, ParamVector]:
    """Standard-form state and raw parameter vector of a branch state.

    Post-operation states of upper-triangular operators keep their support
    on the all-zero and one-hot indices, so realignment is a per-party
    phase correction: take moduli.  Anything else goes through full
    extraction and is rebuilt from its vector.
    """
    p = state.p
    amps = state.amplitudes
    pattern = [0] + [one_hot_index(p, k) for k in range(1, p + 1)]
    mask = np.ones(amps.size, dtype=bool)
    mask[pattern] = False
    off_mass = float(np.sum(np.abs(amps[mask]) ** 2))
    if off_mass <= 1e-18:
        comps = [float(abs(amps[one_hot_index(p, k)]) ** 2) for k in range(1, p + 1)]
        total = sum(comps)
        if total > 1.0:
            comps = [c / total for c in comps]
        xvec = ParamVector(tuple(comps))
        flat = np.zeros_like(amps)
        for idx in pattern:
            flat[idx] = abs(amps[idx])
        nrm = np.linalg.norm(flat)
        return PureState(flat / nrm, p), xvec
    xvec, _basis = extract_params(state)
    return build_state(xvec), xvec


def run_protocol(state: PureState, protocol: Protocol, mode: str = "exhaustive",
                 trials: int = 10000, seed: int = 0) -> ExecutionReport:
    """Execute a protocol against the oracle.

    Exhaustive mode enumerates every branch, reports exact leaf
    probabilities, and audits the averaged leaf vectors against the source
    (no component may grow).  Sampled mode draws per-trial trajectories
    with a generator seeded from (seed, trial) and reports frequencies
    with standard errors.  Between steps each continuing branch is
    realigned to standard form, which stands in for the local corrections
    a real run would apply after classical communication.
    """
    if mode not in ("exhaustive", "sampled"):
        raise InvalidStateError(f"unknown mode {mode!r}")
    protocol.check(state.p)
    root, root_vec = _realign(state)

    leaves: list[LeafRecord] = []
    tree: dict[tuple[int, ...], list[float]] = {}
    leaf_info: dict[tuple[int, ...], tuple[str, ParamVector | None]] = {}

    def descend(cur: PureState | None, vec: ParamVector, step_idx: int,
                prob: float, path: tuple[int, ...]):
        if step_idx == len(protocol.steps):
            disp = SUCCESS if not protocol.steps else CONTINUE
            leaves.append(LeafRecord(path, disp, probability=prob, vector=vec))
            leaf_info[path] = (disp, vec)
            return
        step = protocol.steps[step_idx]
        locals_: list[float] = []
        posts: list[tuple[float, PureState | None]] = []
        for op in step.ops:
            pr, post = apply_local(cur, step.party, op)
            locals_.append(pr)
            posts.append((pr, post))
        tree[path] = locals_
        for i, ((pr, post), disp) in enumerate(zip(posts, step.dispositions)):
            branch = prob * pr
            child_path = path + (i,)
            if post is None or branch <= PROB_EPS:
                leaves.append(LeafRecord(child_path, disp, probability=0.0))
                leaf_info[child_path] = (disp, None)
                continue
            aligned, avec = _realign(post)
            if disp == CONTINUE:
                descend(aligned, avec, step_idx + 1, branch, child_path)
            else:
                leaves.append(LeafRecord(child_path, disp, probability=branch,
                                         vector=avec))
                leaf_info[child_path] = (disp, avec)

    descend(root, root_vec, 0, 1.0, ())

    if mode == "exhaustive":
        total = sum(leaf.probability for leaf in leaves)
        success = sum(leaf.probability for leaf in leaves
                      if leaf.disposition == SUCCESS)
        avg = np.zeros(state.p)
        for leaf in leaves:
            if leaf.vector is not None and leaf.probability:
                avg += leaf.probability * np.asarray(leaf.vector.components)
        violation = float(np.max(avg - np.asarray(root_vec.components)))
        return ExecutionReport(
            mode="exhaustive",
            leaves=leaves,
            success_probability=success,
            declared_success_probability=protocol.declared_success_probability,
            total_probability=total,
            average_vector=avg.tolist(),
            monotone_ok=bool(violation <= VALIDATION_TOL),
            monotone_max_violation=violation,
        )

    # sampled: walk the precomputed branch tree per trial
    counts: dict[tuple[int, ...], int] = {}
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, trial)))
        path: tuple[int, ...] = ()
        while path in tree:
            locals_ = tree[path]
            u = rng.random() * sum(locals_)
            acc = 0.0
            pick = len(locals_) - 1
            for i, pr in enumerate(locals_):
                acc += pr
                if u <= acc:
                    pick = i
                    break
            step = protocol.steps[len(path)]
            path = path + (pick,)
            if step.dispositions[pick] != CONTINUE:
                break
        counts[path] = counts.get(path, 0) + 1

    sampled_leaves: list[LeafRecord] = []
    success_freq = 0.0
    avg = np.zeros(state.p)
    for path, (disp, vec) in sorted(leaf_info.items()):
        cnt = counts.get(path, 0)
        freq = cnt / trials
        err = math.sqrt(freq * (1.0 - freq) / trials) if trials else 0.0
        sampled_leaves.append(LeafRecord(
            path, disp, frequency=freq, stderr=err, count=cnt, vector=vec))
        if disp == SUCCESS:
            success_freq += freq
        if vec is not None:
            avg += freq * np.asarray(vec.components)
    return ExecutionReport(
        mode="sampled",
        leaves=sampled_leaves,
        success_probability=success_freq,
        declared_success_probability=protocol.declared_success_probability,
        trials=trials,
        seed=seed,
        average_vector=avg.tolist(),
    )
