"""Symmetric witness operators built from antisymmetrized matrix units.

Every operator produced here is complex symmetric (W^T = W).  For a
product pure state |psi> the bilinear overlap psi^T W psi vanishes, so a
nonzero overlap witnesses entanglement.  Matrix-element and subsystem
indices in this module are 1-based, matching the usual physics notation;
labels record the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import ShapeError
from .linalg import DimSpec, as_dimspec, kron_all, random_ginibre
from .states import PureState

SYM_TOL = 1e-12


@dataclass(frozen=True)
class WitnessStructure:
    """Target structure of a witness: subsystem dimensions plus, for
    N >= 3, the cut subsystem k that carries the antisymmetrized factor.
    ``cut=None`` marks the plain bipartite construction."""

    dims: DimSpec
    cut: int | None = None

    def __post_init__(self):
        dims = as_dimspec(self.dims)
        if dims.n < 2:
            raise ValueError("witness structures need at least two subsystems")
        if any(d < 2 for d in dims):
            raise ValueError(
                "subsystem dimension 1 admits no antisymmetric part; "
                f"got dims {dims.dims}"
            )
        if self.cut is None:
            if dims.n != 2:
                raise ValueError("cut=None is only valid for bipartite dims")
        elif not 1 <= self.cut <= dims.n:
            raise ValueError(f"cut index {self.cut} outside 1..{dims.n}")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class WitnessOperator:
    """Symmetric witness with provenance.

    ``coeffs`` and ``scale`` are set for combined witnesses: the stored
    matrix equals sum(c_m O_m) / (scale * phase) with unit Frobenius norm
    and |phase| = 1, so singular values of the unnormalized combination
    are recovered by multiplying with ``scale``.
    """

    structure: WitnessStructure
    matrix: np.ndarray
    label: str
    coeffs: tuple[complex, ...] | None = None
    scale: float | None = None

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        total = self.structure.dims.total
        if mat.shape != (total, total):
            raise ShapeError(
                f"witness matrix shape {mat.shape}, expected {(total, total)}"
            )
        if np.linalg.norm(mat - mat.T) > SYM_TOL:
            raise ShapeError("witness matrix is not complex symmetric")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def matrix_unit(d: int, r: int, c: int) -> np.ndarray:
    """d x d matrix with a single 1 at row r, column c (1-based)."""
    if not (1 <= r <= d and 1 <= c <= d):
        raise ValueError(f"indices ({r},{c}) outside 1..{d}")
    m = np.zeros((d, d), dtype=complex)
    m[r - 1, c - 1] = 1.0
    return m


def antisymmetrize(m) -> np.ndarray:
    """m - m^T."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"antisymmetrize needs a square matrix, got {m.shape}")
    return m - m.T


def bipartite_basis_witness(dims, i: int, i2: int, j: int, j2: int) -> WitnessOperator:
    """[E(i,i') - E(i',i)] x [E(j,j') - E(j',j)] with i < i', j < j'.

    Exactly four entries, all +-1; symmetric because both factors are
    antisymmetric.
    """
    dims = as_dimspec(dims)
    structure = WitnessStructure(dims)
    d1, d2 = dims.dims
    if not (1 <= i < i2 <= d1):
        raise ValueError(f"need 1 <= i < i' <= {d1}, got ({i},{i2})")
    if not (1 <= j < j2 <= d2):
        raise ValueError(f"need 1 <= j < j' <= {d2}, got ({j},{j2})")
    a1 = antisymmetrize(matrix_unit(d1, i, i2))
    a2 = antisymmetrize(matrix_unit(d2, j, j2))
    return WitnessOperator(
        structure, np.kron(a1, a2), label=f"basis({i},{i2}|{j},{j2})"
    )


def bipartite_basis(dims) -> list[WitnessOperator]:
    """All (D1 choose 2)(D2 choose 2) basis witnesses, lexicographic in
    (i, i', j, j')."""
    dims = as_dimspec(dims)
    if dims.n != 2:
        raise ValueError("bipartite_basis needs exactly two subsystems")
    d1, d2 = dims.dims
    out = []
    for i, i2 in combinations(range(1, d1 + 1), 2):
        for j, j2 in combinations(range(1, d2 + 1), 2):
            out.append(bipartite_basis_witness(dims, i, i2, j, j2))
    return out


def _unit_norm(mat: np.ndarray, what: str) -> tuple[np.ndarray, float]:
    norm = float(np.linalg.norm(mat))
    if norm < 1e-14:
        raise ValueError(f"{what} collapsed to the zero operator")
    return mat / norm, norm


def random_bipartite_witness(dims, rng: np.random.Generator) -> WitnessOperator:
    """Unit-norm witness [G1 - G1^T] x [G2 - G2^T] from Ginibre draws."""
    dims = as_dimspec(dims)
    structure = WitnessStructure(dims)
    d1, d2 = dims.dims
    a1 = antisymmetrize(random_ginibre(d1, d1, rng))
    a2 = antisymmetrize(random_ginibre(d2, d2, rng))
    mat, _ = _unit_norm(np.kron(a1, a2), "random bipartite witness")
    return WitnessOperator(structure, mat, label="random(bipartite)")


def cut_basis_witness(dims, k: int, pairs) -> WitnessOperator:
    """Elementary cut witness for subsystem k against the rest.

    ``pairs`` lists one (row, col) 1-based index pair per subsystem; the
    k-th factor is antisymmetrized, the others are plain matrix units,
    and the transpose of the whole product is added to symmetrize.
    """
    dims = as_dimspec(dims)
    structure = WitnessStructure(dims, cut=k) if dims.n > 2 else WitnessStructure(dims)
    if not 1 <= k <= dims.n:
        raise ValueError(f"cut index {k} outside 1..{dims.n}")
    pairs = [tuple(int(x) for x in p) for p in pairs]
    if len(pairs) != dims.n:
        raise ValueError(f"got {len(pairs)} index pairs for {dims.n} subsystems")
    factors = []
    for pos, ((r, c), d) in enumerate(zip(pairs, dims), start=1):
        unit = matrix_unit(d, r, c)
        factors.append(antisymmetrize(unit) if pos == k else unit)
    mat = kron_all(factors)
    mat = mat + mat.T
    tag = ":".join(f"{r},{c}" for r, c in pairs)
    return WitnessOperator(structure, mat, label=f"cut{k}({tag})")


def random_cut_witness(dims, k: int, rng: np.random.Generator) -> WitnessOperator:
    """Unit-norm random cut witness: Ginibre factors everywhere, the k-th
    antisymmetrized, plus the transpose of the product."""
    dims = as_dimspec(dims)
    structure = WitnessStructure(dims, cut=k) if dims.n > 2 else WitnessStructure(dims)
    if not 1 <= k <= dims.n:
        raise ValueError(f"cut index {k} outside 1..{dims.n}")
    while True:
        factors = []
        for pos, d in enumerate(dims, start=1):
            g = random_ginibre(d, d, rng)
            factors.append(antisymmetrize(g) if pos == k else g)
        mat = kron_all(factors)
        mat = mat + mat.T
        norm = float(np.linalg.norm(mat))
        if norm > 1e-12:
            break
    return WitnessOperator(structure, mat / norm, label=f"random(cut={k})")


def compose_witness(ops, coeffs) -> WitnessOperator:
    """Unit-norm linear combination sum(c_m O_m) of same-structure witnesses.

    The global phase is fixed so that the max-modulus coefficient acts as
    a positive real, which makes the output invariant under scaling all
    coefficients by a common nonzero scalar.  Coefficients and the
    normalization scale are retained for downstream bounds.
    """
    ops = list(ops)
    coeffs = [complex(c) for c in coeffs]
    if not ops or len(ops) != len(coeffs):
        raise ValueError("need equally many witnesses and coefficients")
    structure = ops[0].structure
    for op in ops[1:]:
        if op.structure != structure:
            raise ValueError("witnesses have mismatched structures")
    if max(abs(c) for c in coeffs) < 1e-14:
        raise ValueError("all coefficients are (numerically) zero")
    mat = sum(c * op.matrix for c, op in zip(coeffs, ops))
    mat, scale = _unit_norm(mat, "witness combination")
    k_max = max(range(len(coeffs)), key=lambda m: abs(coeffs[m]))
    phase = coeffs[k_max] / abs(coeffs[k_max])
    mat = mat / phase
    return WitnessOperator(
        structure,
        mat,
        label=f"combo({len(ops)} terms, |c|max={abs(coeffs[k_max]):.6g})",
        coeffs=tuple(coeffs),
        scale=scale,
    )


def witness_overlap(psi: PureState, op) -> complex:
    """Bilinear overlap psi^T W psi between a state's complex conjugate
    and the state itself; zero for product states when W is a witness."""
    w = op.matrix if isinstance(op, WitnessOperator) else np.asarray(op, dtype=complex)
    v = psi.vector
    return complex(v @ (w @ v))


def cut_index_tuples(dims, k: int, restricted: bool = False):
    """Iterate 1-based index-pair tuples for cut witnesses at subsystem k.

    Unrestricted mode yields every combination (each subsystem pair runs
    over all ordered index pairs).  Restricted mode yields the
    non-redundant family: an ordered pair r < c at the cut subsystem and
    a merged-index pair I < I' over the remaining subsystems.
    """
    dims = as_dimspec(dims)
    rest = [i for i in range(dims.n) if i != k - 1]
    d_cut = dims[k - 1]
    if not restricted:
        per_subsystem = []
        for i, d in enumerate(dims):
            per_subsystem.append(list(product(range(1, d + 1), repeat=2)))
        for combo in product(*per_subsystem):
            yield tuple(combo)
        return
    rest_dims = [dims[i] for i in rest]
    d_rest = int(np.prod(rest_dims)) if rest_dims else 1
    for r, c in combinations(range(1, d_cut + 1), 2):
        for merged_i, merged_j in combinations(range(d_rest), 2):
            idx_i = np.unravel_index(merged_i, rest_dims) if rest_dims else ()
            idx_j = np.unravel_index(merged_j, rest_dims) if rest_dims else ()
            pairs: list[tuple[int, int]] = [None] * dims.n  # type: ignore[list-item]
            pairs[k - 1] = (r, c)
            for pos, a, b in zip(rest, idx_i, idx_j):
                pairs[pos] = (int(a) + 1, int(b) + 1)
            yield tuple(pairs)
