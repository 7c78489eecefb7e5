"""Dense complex linear-algebra kernels.

Everything operates on plain ``numpy.ndarray`` with dtype complex128 and
row-major storage.  Subsystems of a composite space are numbered from 1,
with the leftmost (first) subsystem most significant in the composite
basis ordering, matching the Kronecker-product convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np
import scipy.linalg

from .errors import ShapeError, SizeCapError, StateValidationError

# Hard cap on composite dimensions produced by kron and friends.
DIM_CAP = 4096

# Default structural tolerances (Frobenius norm).
HERM_TOL = 1e-10
SYM_TOL = 1e-10
PSD_TOL = 1e-10


@dataclass(frozen=True)
class DimSpec:
    """Ordered subsystem dimensions of a composite space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) == 0:
            raise ValueError("need at least one subsystem dimension")
        if any(d < 1 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return prod(self.dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, k):
        return self.dims[k]


def as_dimspec(dims) -> DimSpec:
    """Coerce a DimSpec, list, or tuple of ints into a DimSpec."""
    if isinstance(dims, DimSpec):
        return dims
    return DimSpec(tuple(dims))


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d array, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ShapeError("matrix contains NaN or Inf entries")
    return a


def _check_square(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{what} must be square, got shape {a.shape}")
    return a


def kron(a, b, cap: int = DIM_CAP) -> np.ndarray:
    """Kronecker product with a guard against runaway composite sizes."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise SizeCapError(
            f"kron result {rows}x{cols} exceeds the dimension cap {cap}"
        )
    return np.kron(a, b)


def kron_all(mats, cap: int = DIM_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one matrix")
    out = _as_matrix(mats[0])
    for m in mats[1:]:
        out = kron(out, m, cap=cap)
    return out


def _subsystem_axes(dims: DimSpec, subsystems, what: str) -> list[int]:
    """Validate 1-based subsystem indices and return 0-based axes."""
    subs = sorted(set(int(k) for k in subsystems))
    if not subs:
        raise ValueError(f"{what}: empty subsystem set")
    if subs[0] < 1 or subs[-1] > dims.n:
        raise ValueError(
            f"{what}: subsystem indices must lie in 1..{dims.n}, got {subs}"
        )
    return [k - 1 for k in subs]


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep`` (1-based indices).

    The reduced matrix keeps the original relative ordering of the
    retained subsystems.
    """
    dims = as_dimspec(dims)
    rho = _check_square(_as_matrix(rho), "density-like matrix")
    if rho.shape[0] != dims.total:
        raise ShapeError(
            f"matrix side {rho.shape[0]} does not match dims total {dims.total}"
        )
    keep_axes = _subsystem_axes(dims, keep, "partial_trace")
    n = dims.n
    t = rho.reshape(dims.dims + dims.dims)
    # einsum subscripts: traced subsystems share a row/col label.
    row = list(range(n))
    col = [i + n if i in keep_axes else i for i in range(n)]
    out_labels = keep_axes + [i + n for i in keep_axes]
    reduced = np.einsum(t, row + col, out_labels)
    d_keep = prod(dims.dims[i] for i in keep_axes)
    return reduced.reshape(d_keep, d_keep)


def partial_transpose(rho, dims, subsystem: int) -> np.ndarray:
    """Transpose the tensor indices of one subsystem (1-based index)."""
    dims = as_dimspec(dims)
    rho = _check_square(_as_matrix(rho), "density-like matrix")
    if rho.shape[0] != dims.total:
        raise ShapeError(
            f"matrix side {rho.shape[0]} does not match dims total {dims.total}"
        )
    (axis,) = _subsystem_axes(dims, [subsystem], "partial_transpose")
    n = dims.n
    t = rho.reshape(dims.dims + dims.dims)
    perm = list(range(2 * n))
    perm[axis], perm[axis + n] = perm[axis + n], perm[axis]
    return t.transpose(perm).reshape(dims.total, dims.total)


def hermitian_eig(h, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``h = v @ diag(w) @ v.conj().T`` and the
    columns of ``v`` orthonormal.
    """
    h = _check_square(_as_matrix(h), "hermitian matrix")
    if np.linalg.norm(h - h.conj().T) > tol:
        raise ShapeError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def matrix_sqrt_psd(rho, eps_psd: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-eps_psd, 0) are clamped to zero; anything below
    -eps_psd is rejected.
    """
    w, v = hermitian_eig(rho)
    if w[-1] < -eps_psd:
        raise StateValidationError(
            f"matrix has eigenvalue {w[-1]:.3e} below -{eps_psd:g}; "
            "not positive semidefinite"
        )
    w = np.clip(w, 0.0, None)
    root = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (root + root.conj().T)


def singular_values(m) -> np.ndarray:
    """Singular values in decreasing order."""
    return np.linalg.svd(_as_matrix(m), compute_uv=False)


def takagi_decompose(s, tol: float = SYM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``s = v @ diag(lam) @ v.T`` of a complex
    symmetric matrix, with ``v`` unitary and ``lam`` the singular values
    in decreasing order.

    Built on the SVD: groups of (numerically) equal singular values get a
    phase correction through the matrix square root of the symmetric
    unitary coupling block.  Near-degenerate values are grouped together,
    which keeps the reconstruction error bounded by the cluster gap.
    """
    s = _check_square(_as_matrix(s), "symmetric matrix")
    if np.linalg.norm(s - s.T) > tol:
        raise ShapeError("matrix is not complex symmetric within tolerance")
    u, sv, vh = np.linalg.svd(s)
    w = vh.conj().T
    m = s.shape[0]
    gap = 1e-8 * max(1.0, float(sv[0]) if m else 1.0)
    blocks = []
    start = 0
    for i in range(1, m + 1):
        if i == m or sv[i - 1] - sv[i] > gap:
            idx = slice(start, i)
            z = u[:, idx].T @ w[:, idx]
            blocks.append(scipy.linalg.sqrtm(z))
            start = i
    q = scipy.linalg.block_diag(*blocks) if blocks else np.eye(0)
    v = u @ q.conj()
    return sv, v


def random_ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. standard complex Gaussians (unit total variance)."""
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with phase correction."""
    q, r = np.linalg.qr(random_ginibre(n, n, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))
