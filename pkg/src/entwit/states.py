"""Construction and validation of pure and mixed states on qudit registers."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import ShapeError, StateValidationError
from .linalg import DimSpec, as_dimspec, kron_all

NORM_TOL = 1e-10
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over subsystems of dimensions ``dims``.

    Basis ordering is row-major over subsystem indices: the composite
    index of |i1 i2 ... iN> is i1*D2*...*DN + ... + iN (leftmost
    subsystem most significant).
    """

    dims: DimSpec
    vector: np.ndarray

    def __post_init__(self):
        dims = as_dimspec(self.dims)
        vec = np.asarray(self.vector, dtype=complex).reshape(-1)
        if vec.size != dims.total:
            raise StateValidationError(
                f"vector length {vec.size} does not match dims total {dims.total}"
            )
        if not np.all(np.isfinite(vec)):
            raise StateValidationError("state vector contains NaN or Inf")
        if abs(np.linalg.norm(vec) - 1.0) > NORM_TOL:
            raise StateValidationError(
                f"state vector norm {np.linalg.norm(vec):.12f} is not 1"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "vector", _frozen(vec))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix over subsystems of dimensions ``dims``."""

    dims: DimSpec
    matrix: np.ndarray

    def __post_init__(self):
        dims = as_dimspec(self.dims)
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (dims.total, dims.total):
            raise StateValidationError(
                f"matrix shape {mat.shape} does not match dims total {dims.total}"
            )
        if not np.all(np.isfinite(mat)):
            raise StateValidationError("density matrix contains NaN or Inf")
        if np.linalg.norm(mat - mat.conj().T) > HERM_TOL:
            raise StateValidationError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_TOL or abs(np.trace(mat).imag) > TRACE_TOL:
            raise StateValidationError(
                f"density matrix trace {np.trace(mat):.12f} is not 1"
            )
        w = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
        if w[0] < -EIG_TOL:
            raise StateValidationError(
                f"density matrix has eigenvalue {w[0]:.3e} below -{EIG_TOL:g}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(mat))


def pure_from_coeffs(dims, coeffs) -> PureState:
    """Normalize a nonzero coefficient vector into a PureState."""
    dims = as_dimspec(dims)
    vec = np.asarray(coeffs, dtype=complex).reshape(-1)
    if vec.size != dims.total:
        raise ValueError(
            f"coefficient vector length {vec.size}, expected {dims.total}"
        )
    norm = np.linalg.norm(vec)
    if norm < 1e-14:
        raise ValueError("coefficient vector is (numerically) zero")
    return PureState(dims, vec / norm)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    return DensityMatrix(psi.dims, np.outer(psi.vector, psi.vector.conj()))


def ghz_state(n: int, d: int = 2) -> PureState:
    """(1/sqrt(d)) sum_i |i i ... i> on n qudits of dimension d."""
    if n < 2 or d < 2:
        raise ValueError("ghz_state needs n >= 2 subsystems of dimension >= 2")
    dims = DimSpec((d,) * n)
    vec = np.zeros(dims.total, dtype=complex)
    for i in range(d):
        vec[sum(i * d**k for k in range(n))] = 1.0
    return PureState(dims, vec / np.sqrt(d))


def w_state(n: int) -> PureState:
    """(1/sqrt(n)) (|10...0> + |01...0> + ... + |0...01>) on n qubits."""
    if n < 2:
        raise ValueError("w_state needs n >= 2 qubits")
    dims = DimSpec((2,) * n)
    vec = np.zeros(dims.total, dtype=complex)
    for k in range(n):
        vec[2 ** (n - 1 - k)] = 1.0
    return PureState(dims, vec / np.sqrt(n))


def bell_state() -> PureState:
    """(|00> + |11>)/sqrt(2)."""
    return ghz_state(2, 2)


def werner_2qubit(p: float) -> DensityMatrix:
    """p |Psi-><Psi-| + (1-p) I/4 with the singlet |Psi-> = (|01>-|10>)/sqrt(2)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    singlet = np.zeros(4, dtype=complex)
    singlet[1] = 1.0 / np.sqrt(2)
    singlet[2] = -1.0 / np.sqrt(2)
    mat = p * np.outer(singlet, singlet.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(DimSpec((2, 2)), mat)


def isotropic_state(d: int, p: float) -> DensityMatrix:
    """p |Phi_d><Phi_d| + (1-p) I/d^2 with |Phi_d> the maximally entangled pair.

    Entangled exactly for p > 1/(d+1).
    """
    if d < 2:
        raise ValueError("isotropic_state needs local dimension >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    phi = ghz_state(2, d).vector
    mat = p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(d * d) / (d * d)
    return DensityMatrix(DimSpec((d, d)), mat)


def random_pure(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state (normalized Ginibre vector)."""
    dims = as_dimspec(dims)
    vec = rng.standard_normal(dims.total) + 1j * rng.standard_normal(dims.total)
    return pure_from_coeffs(dims, vec)


def random_product_pure(dims, rng: np.random.Generator) -> PureState:
    """Tensor product of independent Haar-random subsystem states."""
    dims = as_dimspec(dims)
    factors = []
    for d in dims:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        factors.append((v / np.linalg.norm(v)).reshape(d, 1))
    vec = kron_all(factors).reshape(-1)
    return PureState(dims, vec / np.linalg.norm(vec))


def random_mixed(dims, rank: int | None = None, *, rng: np.random.Generator) -> DensityMatrix:
    """Random density matrix G G^dag / tr(G G^dag) with G Ginibre of width ``rank``."""
    dims = as_dimspec(dims)
    if rank is None:
        rank = dims.total
    if rank < 1:
        raise ValueError("rank must be >= 1")
    g = rng.standard_normal((dims.total, rank)) + 1j * rng.standard_normal(
        (dims.total, rank)
    )
    mat = g @ g.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(dims, mat / np.trace(mat).real)


def random_separable_mixture(dims, terms: int = 4, *, rng: np.random.Generator) -> DensityMatrix:
    """Mixture of product projectors with Dirichlet-uniform weights.

    Draws ``terms`` random pure states per subsystem and mixes every
    combination |psi_1^{i_1}>...<| x ... x |psi_N^{i_N}><...| with a flat
    Dirichlet weight vector over the terms^N grid.
    """
    dims = as_dimspec(dims)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if terms**dims.n > 4096:
        raise ValueError("terms^N grid too large")
    locals_ = []
    for d in dims:
        vs = rng.standard_normal((terms, d)) + 1j * rng.standard_normal((terms, d))
        vs /= np.linalg.norm(vs, axis=1, keepdims=True)
        locals_.append(vs)
    weights = rng.dirichlet(np.ones(terms**dims.n))
    mat = np.zeros((dims.total, dims.total), dtype=complex)
    for flat, w in enumerate(weights):
        idx = np.unravel_index(flat, (terms,) * dims.n)
        vec = locals_[0][idx[0]]
        for k in range(1, dims.n):
            vec = np.kron(vec, locals_[k][idx[k]])
        mat += w * np.outer(vec, vec.conj())
    mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(dims, mat / np.trace(mat).real)


def apply_local_unitary(state, unitaries):
    """Apply U_1 x ... x U_N to a PureState or DensityMatrix."""
    dims = state.dims
    unitaries = [np.asarray(u, dtype=complex) for u in unitaries]
    if len(unitaries) != dims.n:
        raise ShapeError(
            f"got {len(unitaries)} unitaries for {dims.n} subsystems"
        )
    for k, (u, d) in enumerate(zip(unitaries, dims), start=1):
        if u.shape != (d, d):
            raise ShapeError(
                f"unitary for subsystem {k} has shape {u.shape}, expected {(d, d)}"
            )
    big = kron_all(unitaries)
    if isinstance(state, PureState):
        return PureState(dims, big @ state.vector)
    if isinstance(state, DensityMatrix):
        mat = big @ state.matrix @ big.conj().T
        return DensityMatrix(dims, 0.5 * (mat + mat.conj().T))
    raise TypeError(f"unsupported state type {type(state).__name__}")


def cut_coefficient_matrix(psi: PureState, k: int) -> np.ndarray:
    """Coefficient matrix of the cut k | rest: a D_k x (total/D_k) reshape
    of the state vector with subsystem k (1-based) moved in front."""
    dims = psi.dims
    if not 1 <= k <= dims.n:
        raise ValueError(f"subsystem index {k} outside 1..{dims.n}")
    t = psi.vector.reshape(dims.dims)
    axes = [k - 1] + [i for i in range(dims.n) if i != k - 1]
    return t.transpose(axes).reshape(dims[k - 1], -1)


def marginal_purity(psi: PureState, k: int) -> float:
    """tr(rho_k^2) of the reduced state of subsystem k (1-based)."""
    a = cut_coefficient_matrix(psi, k)
    rho_k = a @ a.conj().T
    return float(np.sum(np.abs(rho_k) ** 2))
