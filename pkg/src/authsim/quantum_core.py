"""Dense linear algebra for small multipartite quantum systems.

States are complex amplitude vectors tagged with a tuple of subsystem
dimensions; operators are dense square matrices with the same tagging.
Validation happens at construction time (normalization, unitarity,
hermiticity), so downstream code can assume well-formed objects. Everything
is sized for desk-scale work: total dimension is capped at 4096 and the
symmetric projector at 8 copies.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .errors import InvariantViolation, ParameterError

# Tolerance tiers: construction-time checks, algebraic identities, eigen residuals.
NORM_ATOL = 1e-10
ALGEBRA_ATOL = 1e-9
EIGEN_ATOL = 1e-8

MAX_TOTAL_DIMENSION = 4096
MAX_COPIES = 8


def _frozen_complex(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ParameterError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _resolve_dims(dims, total: int) -> tuple[int, ...]:
    if dims is None:
        return (total,)
    dims = tuple(int(x) for x in dims)
    if not dims or any(x < 1 for x in dims):
        raise ParameterError(f"subsystem dimensions must be positive, got {dims}")
    if math.prod(dims) != total:
        raise ParameterError(f"dims {dims} do not multiply to total dimension {total}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over subsystems of the given dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        amps = _frozen_complex(self.amplitudes, 1, "amplitudes")
        if amps.size < 1:
            raise ParameterError("state must have dimension >= 1")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", _resolve_dims(self.dims, amps.size))
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ParameterError(f"state norm {norm!r} is not 1 within {NORM_ATOL}")

    @property
    def d(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Square matrix with U†U = I within construction tolerance."""

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, 2, "matrix")
        if mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ParameterError(f"operator must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", _resolve_dims(self.dims, mat.shape[0]))
        defect = np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])).max()
        if defect > NORM_ATOL:
            raise ParameterError(f"matrix is not unitary: max |U†U - I| = {defect:.3e}")

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def apply(self, state: PureState) -> PureState:
        if state.d != self.d:
            raise ParameterError(f"dimension mismatch: operator {self.d}, state {state.d}")
        return PureState(self.matrix @ state.amplitudes, state.dims)

    def dagger(self) -> "UnitaryOperator":
        return UnitaryOperator(self.matrix.conj().T, self.dims)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Square matrix with A = A† within construction tolerance."""

    matrix: np.ndarray
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, 2, "matrix")
        if mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ParameterError(f"operator must be square, got shape {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", _resolve_dims(self.dims, mat.shape[0]))
        defect = np.abs(mat - mat.conj().T).max()
        if defect > NORM_ATOL:
            raise ParameterError(f"matrix is not Hermitian: max |A - A†| = {defect:.3e}")

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, state: PureState) -> float:
        """Real quadratic form <psi|A|psi>."""
        if state.d != self.d:
            raise ParameterError(f"dimension mismatch: operator {self.d}, state {state.d}")
        return float(np.vdot(state.amplitudes, self.matrix @ state.amplitudes).real)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def basis_state(index: int, dims) -> PureState:
    """Computational basis vector |index> on subsystems of the given dims."""
    dims = tuple(int(x) for x in dims) if not isinstance(dims, int) else (dims,)
    total = math.prod(dims)
    if not 0 <= index < total:
        raise ParameterError(f"basis index {index} out of range for dimension {total}")
    amps = np.zeros(total, dtype=complex)
    amps[index] = 1.0
    return PureState(amps, dims)


def density_operator(state: PureState) -> HermitianOperator:
    """Rank-one projector |psi><psi|."""
    return HermitianOperator(np.outer(state.amplitudes, state.amplitudes.conj()), state.dims)


def tensor(factors: Sequence):
    """Kronecker product of states or of operators (one kind per call).

    Subsystem dims concatenate; the result type matches the input type.
    """
    factors = list(factors)
    if not factors:
        raise ParameterError("tensor requires at least one factor")
    kind = type(factors[0])
    if kind not in (PureState, UnitaryOperator, HermitianOperator):
        raise ParameterError(f"cannot tensor objects of type {kind.__name__}")
    if any(type(f) is not kind for f in factors):
        raise ParameterError("tensor factors must all be the same kind")
    total = math.prod(f.d for f in factors)
    if total > MAX_TOTAL_DIMENSION:
        raise ParameterError(f"total dimension {total} exceeds cap {MAX_TOTAL_DIMENSION}")
    dims = tuple(itertools.chain.from_iterable(f.dims for f in factors))
    if kind is PureState:
        amps = reduce(np.kron, (f.amplitudes for f in factors))
        return PureState(amps, dims)
    mat = reduce(np.kron, (f.matrix for f in factors))
    return kind(mat, dims)


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>."""
    if a.d != b.d:
        raise ParameterError(f"dimension mismatch: {a.d} vs {b.d}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def partial_trace(obj, keep) -> HermitianOperator:
    """Reduced operator on the kept subsystems (original order preserved).

    Accepts a PureState (traced as |psi><psi|) or a HermitianOperator.
    """
    if not isinstance(obj, (PureState, HermitianOperator)):
        raise ParameterError("partial_trace expects a PureState or HermitianOperator")
    dims = obj.dims
    n = len(dims)
    keep = tuple(sorted({int(i) for i in keep}))
    if not keep:
        raise ParameterError("keep set must name at least one subsystem")
    if any(i < 0 or i >= n for i in keep):
        raise ParameterError(f"keep indices {keep} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    kept_dims = tuple(dims[i] for i in keep)
    d_kept = math.prod(kept_dims)

    if isinstance(obj, PureState):
        psi = obj.amplitudes.reshape(dims)
        rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    else:
        mat = obj.matrix.reshape(dims + dims)
        # ket axis i gets index i; bra axis i shares it when traced out
        in_sub = list(range(n)) + [i if i in traced else n + i for i in range(n)]
        out_sub = list(keep) + [n + i for i in keep]
        rho = np.einsum(mat, in_sub, out_sub)
    return HermitianOperator(rho.reshape(d_kept, d_kept), kept_dims)


def measure_projective(rho: HermitianOperator, basis: Sequence[PureState]) -> np.ndarray:
    """Outcome probabilities <phi_j|rho|phi_j> for a complete orthonormal basis."""
    d = rho.d
    if abs(rho.trace - 1.0) > ALGEBRA_ATOL:
        raise ParameterError(f"density operator trace {rho.trace!r} is not 1")
    if np.linalg.eigvalsh(rho.matrix).min() < -ALGEBRA_ATOL:
        raise ParameterError("density operator is not positive semidefinite")
    if len(basis) != d or any(s.d != d for s in basis):
        raise ParameterError(f"basis must contain {d} states of dimension {d}")
    stack = np.array([s.amplitudes for s in basis])
    gram_defect = np.abs(stack.conj() @ stack.T - np.eye(d)).max()
    if gram_defect > ALGEBRA_ATOL:
        raise ParameterError(f"basis is not orthonormal: max Gram defect {gram_defect:.3e}")
    probs = np.einsum("ji,jk,ki->i", stack.conj().T, rho.matrix, stack.T).real
    if probs.min() < -1e-12:
        raise InvariantViolation(f"negative outcome probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    if abs(probs.sum() - 1.0) > ALGEBRA_ATOL:
        raise InvariantViolation(f"outcome probabilities sum to {probs.sum()!r}")
    return probs


def max_eigenpair(a: HermitianOperator) -> tuple[float, PureState]:
    """Largest eigenvalue and a deterministic unit eigenvector.

    The matrix is symmetrized before diagonalization. In a degenerate top
    eigenspace the returned vector is the normalized projection of the
    lowest-index computational basis vector with nonzero projection, with
    its first nonzero component made real positive.
    """
    h = (a.matrix + a.matrix.conj().T) / 2.0
    eigenvalues, vectors = np.linalg.eigh(h)
    top = eigenvalues[-1]
    degenerate_tol = 1e-10 * max(1.0, abs(top))
    block = vectors[:, eigenvalues >= top - degenerate_tol]
    vec = None
    for j in range(a.d):
        candidate = block @ block[j, :].conj()
        norm = np.linalg.norm(candidate)
        if norm > 1e-8:
            vec = candidate / norm
            break
    if vec is None:  # cannot happen: block has at least one unit column
        raise InvariantViolation("empty dominant eigenspace")
    k = int(np.argmax(np.abs(vec) > 1e-12))
    vec = vec * np.exp(-1j * np.angle(vec[k]))
    return float(top), PureState(vec, a.dims)


@lru_cache(maxsize=64)
def _symmetric_projector_cached(d: int, n: int) -> HermitianOperator:
    total = d**n
    powers = d ** np.arange(n - 1, -1, -1)
    idx = np.arange(total)
    digits = (idx[:, None] // powers) % d
    proj = np.zeros((total, total))
    for perm in itertools.permutations(range(n)):
        targets = (digits[:, perm] * powers).sum(axis=1)
        proj[targets, idx] += 1.0
    proj /= math.factorial(n)
    return HermitianOperator(proj.astype(complex), (d,) * n)


def symmetric_projector(d: int, n: int) -> HermitianOperator:
    """Orthogonal projector onto the symmetric subspace of n d-level systems."""
    if not (isinstance(d, int) and d >= 1):
        raise ParameterError(f"dimension must be a positive integer, got {d!r}")
    if not (isinstance(n, int) and 1 <= n <= MAX_COPIES):
        raise ParameterError(f"copy count must be an integer in [1, {MAX_COPIES}], got {n!r}")
    if d**n > MAX_TOTAL_DIMENSION:
        raise ParameterError(f"d**n = {d**n} exceeds cap {MAX_TOTAL_DIMENSION}")
    return _symmetric_projector_cached(d, n)


def random_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    dims = tuple(int(x) for x in dims) if not isinstance(dims, int) else (dims,)
    total = math.prod(dims)
    vec = rng.standard_normal(total) + 1j * rng.standard_normal(total)
    return PureState(vec / np.linalg.norm(vec), dims)


def random_unitary(dims, rng: np.random.Generator) -> UnitaryOperator:
    """Haar-random unitary via QR with the phase convention diag(R) > 0."""
    dims = tuple(int(x) for x in dims) if not isinstance(dims, int) else (dims,)
    total = math.prod(dims)
    z = (rng.standard_normal((total, total)) + 1j * rng.standard_normal((total, total))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return UnitaryOperator(q * phases, dims)


def state_to_json_dict(state: PureState) -> dict:
    return {
        "dims": list(state.dims),
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes],
    }


def state_from_json_dict(doc: dict) -> PureState:
    try:
        amps = [complex(re, im) for re, im in doc["amplitudes"]]
        dims = tuple(doc["dims"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed state document: {exc}") from exc
    return PureState(amps, dims)


def _matrix_to_json(matrix: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def _matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[complex(re, im) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"malformed matrix document: {exc}") from exc


def operator_to_json_dict(op) -> dict:
    return {"dims": list(op.dims), "matrix": _matrix_to_json(op.matrix)}


def unitary_from_json_dict(doc: dict) -> UnitaryOperator:
    if "matrix" not in doc:
        raise ParameterError("operator document missing 'matrix'")
    return UnitaryOperator(_matrix_from_json(doc["matrix"]), tuple(doc.get("dims") or ()) or None)


def hermitian_from_json_dict(doc: dict) -> HermitianOperator:
    if "matrix" not in doc:
        raise ParameterError("operator document missing 'matrix'")
    return HermitianOperator(_matrix_from_json(doc["matrix"]), tuple(doc.get("dims") or ()) or None)
