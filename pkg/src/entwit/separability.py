"""Mixed-state entanglement machinery.

The central object is the symmetric overlap matrix sqrt(rho)^T W sqrt(rho)
of a state against a witness W.  If its largest singular value exceeds the
sum of the rest, the state is entangled; separable states can never
violate that bound, for any witness of the antisymmetrized-product form.
Sampling random witnesses therefore yields a one-sided entanglement test:
a violation certifies entanglement, absence of violations is inconclusive
for mixed states (only pure states admit the complete basis check).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import NumericalConsistencyError, ShapeError
from .linalg import (
    DIM_CAP,
    matrix_sqrt_psd,
    partial_transpose,
    singular_values,
    takagi_decompose,
)
from .states import DensityMatrix, PureState
from .witnesses import (
    WitnessOperator,
    WitnessStructure,
    bipartite_basis,
    cut_basis_witness,
    cut_index_tuples,
    random_bipartite_witness,
    random_cut_witness,
    witness_overlap,
)
from .concurrence import PURE_SEPARABLE_TOL

# Violation tolerance: relative to the top singular value, with an
# absolute floor guarding the near-zero regime.
TOL_REL = 1e-8
TOL_ABS = 1e-12

NPT_TOL = 1e-10


@dataclass(frozen=True)
class WitnessTestResult:
    """Outcome of the singular-value test for one witness."""

    label: str
    singular_values: np.ndarray
    lhs: float
    rhs: float
    margin: float
    violated: bool
    tol: float

    def __post_init__(self):
        sv = np.asarray(self.singular_values, dtype=float)
        sv.setflags(write=False)
        object.__setattr__(self, "singular_values", sv)


@dataclass(frozen=True)
class DetectionReport:
    """Aggregate of a seeded random-witness sampling campaign."""

    state_id: str
    trials: int
    evaluated_trials: int
    violations: int
    first_violation_trial: int | None
    max_margin: float
    verdict: str  # "Entangled" | "Inconclusive"
    master_seed: int
    tolerances: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DecompositionCertificate:
    """Result of the search for a unitary making u^T S u hollow."""

    unitary: np.ndarray
    max_abs_diagonal: float
    converged: bool
    iterations: int

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)


@dataclass(frozen=True)
class PureCheckResult:
    """Complete pure-state separability verdict."""

    verdict: str  # "Separable" | "Entangled"
    max_overlap: float
    worst_label: str
    threshold: float


def _witness_matrix(op) -> np.ndarray:
    if isinstance(op, WitnessOperator):
        return op.matrix
    return np.asarray(op, dtype=complex)


def _witness_label(op) -> str:
    return op.label if isinstance(op, WitnessOperator) else "raw"


def overlap_matrix(rho: DensityMatrix, op, sqrt_rho: np.ndarray | None = None) -> np.ndarray:
    """Symmetric matrix sqrt(rho)^T W sqrt(rho)."""
    w = _witness_matrix(op)
    if w.shape != rho.matrix.shape:
        raise ShapeError(
            f"witness shape {w.shape} does not match state shape {rho.matrix.shape}"
        )
    if sqrt_rho is None:
        sqrt_rho = matrix_sqrt_psd(rho.matrix)
    s = sqrt_rho.T @ w @ sqrt_rho
    return 0.5 * (s + s.T)


def witness_test(
    rho: DensityMatrix,
    op,
    tol_rel: float = TOL_REL,
    tol_abs: float = TOL_ABS,
    sqrt_rho: np.ndarray | None = None,
) -> WitnessTestResult:
    """Singular-value test: violated when the top singular value of the
    overlap matrix exceeds the sum of the others beyond tolerance."""
    s = overlap_matrix(rho, op, sqrt_rho=sqrt_rho)
    sv = singular_values(s)
    lhs = float(sv[0]) if sv.size else 0.0
    rhs = float(sv[1:].sum())
    margin = lhs - rhs
    tol = max(tol_rel * lhs, tol_abs)
    return WitnessTestResult(
        label=_witness_label(op),
        singular_values=sv,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        violated=bool(margin > tol),
        tol=tol,
    )


def overlap_spectrum_direct(rho: DensityMatrix, op) -> np.ndarray:
    """Same singular values as the overlap matrix, computed without the
    matrix square root: square roots of the eigenvalues of
    rho W^dag rho^* W, clamped in [-1e-10, 0) and sorted descending."""
    w = _witness_matrix(op)
    if w.shape != rho.matrix.shape:
        raise ShapeError(
            f"witness shape {w.shape} does not match state shape {rho.matrix.shape}"
        )
    m = rho.matrix @ w.conj().T @ rho.matrix.conj() @ w
    vals = np.linalg.eigvals(m).real
    if vals.min() < -NPT_TOL:
        raise NumericalConsistencyError(
            f"spectrum route produced eigenvalue {vals.min():.3e} below -{NPT_TOL:g}"
        )
    vals = np.sqrt(np.clip(vals, 0.0, None))
    return np.sort(vals)[::-1]


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """RNG stream for one trial: PCG64 seeded by
    SeedSequence(master_seed, spawn_key=(trial,)).  The split is the
    determinism contract; reports are identical for any execution order."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def _trial_witness(dims, n_parts: int, cut: int | None, trial: int, rng) -> WitnessOperator:
    if n_parts == 2 and cut is None:
        return random_bipartite_witness(dims, rng)
    k = cut if cut is not None else ((trial - 1) % n_parts) + 1
    return random_cut_witness(dims, k, rng)


def sample_detection(
    rho: DensityMatrix,
    trials: int,
    master_seed: int,
    structure: WitnessStructure | None = None,
    tol_rel: float = TOL_REL,
    tol_abs: float = TOL_ABS,
    full_stats: bool = False,
    workers: int = 1,
    state_id: str = "",
) -> DetectionReport:
    """Random-witness sampling campaign over ``trials`` seeded trials.

    Trial t draws its witness from ``trial_rng(master_seed, t)``; for
    three or more subsystems the cut cycles round-robin over trials
    unless ``structure`` pins one.  By default the scan stops at the
    first violation and all statistics cover trials 1..first_violation;
    with ``full_stats`` every trial is evaluated.  The report is
    bit-identical for any ``workers`` count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dims = rho.dims
    cut = None
    if structure is not None:
        if structure.dims != dims:
            raise ShapeError("structure dims do not match the state")
        cut = structure.cut
    sqrt_rho = matrix_sqrt_psd(rho.matrix)

    def run_trial(t: int) -> tuple[float, bool]:
        rng = trial_rng(master_seed, t)
        op = _trial_witness(dims, dims.n, cut, t, rng)
        res = witness_test(rho, op, tol_rel, tol_abs, sqrt_rho=sqrt_rho)
        return res.margin, res.violated

    results: dict[int, tuple[float, bool]] = {}
    chunk = max(workers * 8, 32)
    t0 = 1
    first: int | None = None
    while t0 <= trials:
        batch = list(range(t0, min(t0 + chunk - 1, trials) + 1))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for t, r in zip(batch, pool.map(run_trial, batch)):
                    results[t] = r
        else:
            for t in batch:
                results[t] = run_trial(t)
        hits = [t for t in batch if results[t][1]]
        if hits and first is None:
            first = min(hits)
            if not full_stats:
                break
        t0 = batch[-1] + 1

    horizon = trials if full_stats or first is None else first
    used = {t: r for t, r in results.items() if t <= horizon}
    n_viol = sum(1 for _, v in used.values() if v)
    return DetectionReport(
        state_id=state_id,
        trials=trials,
        evaluated_trials=len(used),
        violations=n_viol,
        first_violation_trial=first,
        max_margin=max(m for m, _ in used.values()),
        verdict="Entangled" if n_viol >= 1 else "Inconclusive",
        master_seed=master_seed,
        tolerances={"tol_rel": tol_rel, "tol_abs": tol_abs},
    )


def pure_state_check(psi: PureState) -> PureCheckResult:
    """Complete separability check for a pure state: scans the full
    elementary witness family (every cut for three or more subsystems)
    and compares the worst bilinear overlap against the threshold."""
    dims = psi.dims
    if dims.total > DIM_CAP:
        raise ShapeError(f"total dimension {dims.total} exceeds cap {DIM_CAP}")
    worst = 0.0
    worst_label = ""
    if dims.n == 2:
        ops = bipartite_basis(dims)
        for op in ops:
            val = abs(witness_overlap(psi, op))
            if val > worst:
                worst, worst_label = val, op.label
    else:
        for k in range(1, dims.n + 1):
            for pairs in cut_index_tuples(dims, k, restricted=True):
                op = cut_basis_witness(dims, k, pairs)
                val = abs(witness_overlap(psi, op))
                if val > worst:
                    worst, worst_label = val, op.label
    verdict = "Separable" if worst < PURE_SEPARABLE_TOL else "Entangled"
    return PureCheckResult(
        verdict=verdict,
        max_overlap=worst,
        worst_label=worst_label,
        threshold=PURE_SEPARABLE_TOL,
    )


# ---------------------------------------------------------------------------
# Hollowization: search for a unitary u with diag(u^T S u) ~ 0.
# ---------------------------------------------------------------------------


def _closure_phases(lam: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """Phases theta with sum(lam * exp(2i theta)) = 0 when the polygon
    inequality lam[0] <= sum(lam[1:]) holds; otherwise the antipodal
    best-effort assignment minimizing |sum|."""
    m = lam.size
    theta = np.zeros(m)
    if m == 1:
        return theta
    a = float(lam[0])
    rest = list(range(1, m))
    if rng is not None:
        rng.shuffle(rest)
    group_b: list[int] = []
    group_c: list[int] = []
    sum_b = sum_c = 0.0
    order = sorted(rest, key=lambda i: -lam[i])
    for i in order:
        if sum_b <= sum_c:
            group_b.append(i)
            sum_b += float(lam[i])
        else:
            group_c.append(i)
            sum_c += float(lam[i])
    if rng is not None and len(rest) > 1:
        # randomized split for restarts: reassign a random member
        i = rest[0]
        if i in group_b and len(group_b) > 1:
            group_b.remove(i)
            group_c.append(i)
            sum_b -= float(lam[i])
            sum_c += float(lam[i])
        elif i in group_c and len(group_c) > 1:
            group_c.remove(i)
            group_b.append(i)
            sum_c -= float(lam[i])
            sum_b += float(lam[i])
    b, c = sum_b, sum_c
    if a > b + c or a < abs(b - c):
        # no closed triangle: point everything against the top value
        theta[1:] = np.pi / 2
        return theta
    if b < 1e-300 and c < 1e-300:
        return theta  # a must be ~0 as well
    if c < 1e-300:
        theta[group_b] = np.pi / 2
        return theta
    x = (c * c - b * b - a * a) / (2.0 * a) if a > 0 else -b
    x = min(max(x, -b), b)
    y = np.sqrt(max(b * b - x * x, 0.0))
    phase_b = np.angle(complex(x, y))
    zc = complex(-a - x, -y)
    phase_c = np.angle(zc)
    theta[group_b] = phase_b / 2.0
    theta[group_c] = phase_c / 2.0
    return theta


def _sylvester_hadamard(m: int) -> np.ndarray | None:
    if m < 1 or m & (m - 1):
        return None
    h = np.ones((1, 1))
    while h.shape[0] < m:
        h = np.block([[h, h], [h, -h]])
    return h / np.sqrt(m)


_PHASE_HADAMARD = np.array([[1.0, 1.0], [1.0j, -1.0j]]) / np.sqrt(2.0)


def _takagi2(alpha: complex, beta: complex, gamma: complex) -> np.ndarray | None:
    """Takagi vectors of the symmetric block B = [[alpha, beta], [beta, gamma]].

    Returns a unitary W with B = W diag(s1, s2) W^T (s1 >= s2 >= 0), or
    None in the near-degenerate corner where the closed form is unstable.
    Uses the Hermitian product B conj(B) = W diag(s^2) W^dag and fixes the
    con-eigenvector phases.
    """
    m11 = abs(alpha) ** 2 + abs(beta) ** 2
    m22 = abs(beta) ** 2 + abs(gamma) ** 2
    m12 = alpha * np.conj(beta) + beta * np.conj(gamma)
    half = 0.5 * (m11 + m22)
    disc = np.sqrt(0.25 * (m11 - m22) ** 2 + abs(m12) ** 2)
    s1sq, s2sq = half + disc, max(half - disc, 0.0)
    if disc < 1e-12 * max(1.0, half):
        return None  # nearly equal singular values
    # eigenvector of the Hermitian product for the top eigenvalue
    v1 = np.array([m12, s1sq - m11])
    if np.linalg.norm(v1) < 1e-14 * max(1.0, np.sqrt(s1sq)):
        v1 = np.array([s1sq - m22, np.conj(m12)])
    if np.linalg.norm(v1) < 1e-300:
        return None
    v1 = v1 / np.linalg.norm(v1)
    v2 = np.array([-np.conj(v1[1]), np.conj(v1[0])])
    b = np.array([[alpha, beta], [beta, gamma]])
    w_cols = []
    for v, ssq in ((v1, s1sq), (v2, s2sq)):
        y = b @ np.conj(v)
        zeta = np.vdot(v, y)
        if abs(zeta) < 1e-14 * max(1.0, np.sqrt(s1sq)):
            w_cols.append(v)
        else:
            w_cols.append(v * np.exp(0.5j * np.angle(zeta)))
    return np.column_stack(w_cols)


def _pair_moves(alpha: complex, beta: complex, gamma: complex):
    """Candidate 2x2 unitaries acting on one two-plane.

    The equalization move (block Takagi, then phases and a 2x2 Hadamard)
    achieves the congruence optimum max|diag| = (s1 - s2)/2 on the block;
    the quadratic-root moves zero one of the two diagonal entries.
    """
    cands = []
    w = _takagi2(alpha, beta, gamma)
    if w is not None:
        cands.append(np.conj(w) @ _PHASE_HADAMARD)
    else:
        # equal singular values: generic fallback through the module Takagi
        try:
            _, w = takagi_decompose(
                np.array([[alpha, beta], [beta, gamma]]), tol=np.inf
            )
            cands.append(np.conj(w) @ _PHASE_HADAMARD)
        except Exception:
            pass

    def from_first_column(x: complex, y: complex):
        r = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
        x, y = x / r, y / r
        cands.append(np.array([[x, -np.conj(y)], [y, np.conj(x)]]))

    disc = np.sqrt(beta * beta - alpha * gamma)
    if abs(gamma) > 1e-300:
        # zero the first diagonal entry: gamma w^2 + 2 beta w + alpha = 0
        from_first_column(1.0, (-beta + disc) / gamma)
        from_first_column(1.0, (-beta - disc) / gamma)
        # zero the second: gamma v^2 - 2 beta v + alpha = 0, x = conj(v) y
        for v in ((beta + disc) / gamma, (beta - disc) / gamma):
            from_first_column(np.conj(v), 1.0)
    elif abs(beta) > 1e-300:
        from_first_column(1.0, -alpha / (2.0 * beta))
    return cands


def hollowizing_unitary(
    s,
    hollow_tol: float = 1e-6,
    max_iter: int = 10_000,
    seed: int = 0,
    pad_to: int | None = None,
) -> DecompositionCertificate:
    """Search for a unitary u minimizing max |diag(u^T s u)|.

    Stage 1 factorizes s (Takagi), closes the singular-value polygon with
    a phase vector, and, when the side is a power of two, finishes
    exactly with a real Hadamard spreading.  Stage 2 sweeps seeded random
    two-plane updates, each solving the local 2x2 congruence subproblem
    and accepted only on improvement, with seeded restarts.  Convergence
    requires both the polygon condition and max |diagonal| < hollow_tol;
    non-convergence is reported, never raised.
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError(f"expected a square matrix, got {s.shape}")
    if pad_to is not None:
        if pad_to < s.shape[0]:
            raise ValueError("pad_to must be at least the matrix side")
        padded = np.zeros((pad_to, pad_to), dtype=complex)
        padded[: s.shape[0], : s.shape[0]] = s
        s = padded
    m = s.shape[0]
    if m > DIM_CAP:
        raise ShapeError(f"side {m} exceeds cap {DIM_CAP}")
    lam, v = takagi_decompose(s)
    scale = float(lam[0]) if m else 0.0
    margin = float(lam[0] - lam[1:].sum()) if m else 0.0
    feasible = margin <= 1e-10 * max(1.0, scale)

    identity = np.eye(m, dtype=complex)
    diag_now = float(np.max(np.abs(np.diag(s)))) if m else 0.0
    if diag_now < hollow_tol:
        return DecompositionCertificate(identity, diag_now, feasible, 0)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    best_u = identity
    best_val = diag_now
    iterations = 0
    target = 0.25 * hollow_tol
    max_restarts = 12
    pairs_all = [(a, b) for a in range(m) for b in range(a + 1, m)]

    for restart in range(max_restarts):
        if iterations >= max_iter or best_val < target:
            break
        theta = _closure_phases(lam, rng if restart else None)
        u = v.conj() @ np.diag(np.exp(1j * theta))
        had = _sylvester_hadamard(m)
        if had is not None:
            u = u @ had
        if restart >= max_restarts // 2:
            # occasional fully random restart to escape recurring stalls
            q, r = np.linalg.qr(
                rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            )
            u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        t = u.T @ s @ u
        val = float(np.max(np.abs(np.diag(t))))
        if val < best_val:
            best_val, best_u = val, u.copy()
        stall = 0
        while iterations < max_iter and best_val >= target and stall < 2:
            progress = 0.0
            order = rng.permutation(len(pairs_all))
            for idx in order:
                if iterations >= max_iter:
                    break
                a, b = pairs_all[idx]
                iterations += 1
                alpha, beta, gamma = t[a, a], t[a, b], t[b, b]
                cur = abs(alpha) ** 2 + abs(gamma) ** 2
                if cur < 1e-32:
                    continue
                best_obj = cur * (1.0 - 1e-14)
                best_g = None
                for g in _pair_moves(alpha, beta, gamma):
                    d = np.diag(g.T @ np.array([[alpha, beta], [beta, gamma]]) @ g)
                    obj = abs(d[0]) ** 2 + abs(d[1]) ** 2
                    if obj < best_obj:
                        best_obj = obj
                        best_g = g
                if best_g is None:
                    continue
                t[:, [a, b]] = t[:, [a, b]] @ best_g
                t[[a, b], :] = best_g.T @ t[[a, b], :]
                u[:, [a, b]] = u[:, [a, b]] @ best_g
                progress += cur - best_obj
            val = float(np.max(np.abs(np.diag(t))))
            if val < best_val:
                best_val, best_u = val, u.copy()
            if val < target:
                break
            scale_sq = max(scale * scale, 1e-300)
            stall = 0 if progress > 1e-14 * scale_sq else stall + 1
        if best_val < target:
            break

    # honest final report from the tracked unitary
    final = best_u.T @ s @ best_u
    max_diag = float(np.max(np.abs(np.diag(final)))) if m else 0.0
    converged = bool(feasible and max_diag < hollow_tol)
    return DecompositionCertificate(best_u, max_diag, converged, iterations)


# ---------------------------------------------------------------------------
# Bounds and independent oracles
# ---------------------------------------------------------------------------


def average_concurrence_bound(rho: DensityMatrix, op: WitnessOperator) -> float:
    """Lower bound on the average decomposition concurrence from a
    combined witness: max(0, (l1 - sum l_j) / sqrt(|c_max|)) with the
    singular values taken for the unnormalized combination sum(c_m O_m)
    (the stored unit-norm matrix rescaled by its recorded scale) and
    c_max the max-modulus coefficient."""
    if not isinstance(op, WitnessOperator) or op.coeffs is None or op.scale is None:
        raise ValueError(
            "witness carries no coefficient provenance; build it with compose_witness"
        )
    sv = witness_test(rho, op).singular_values * op.scale
    c_max = max(abs(c) for c in op.coeffs)
    margin = float(sv[0] - sv[1:].sum())
    return max(0.0, margin / np.sqrt(c_max))


def ppt_check(rho: DensityMatrix, subsystem: int = 2) -> tuple[str, float]:
    """Partial-transpose criterion for bipartite states.

    Returns ("NPT", min eigenvalue) when the partial transpose has an
    eigenvalue below -1e-10 (which certifies entanglement), otherwise
    ("PPT", min eigenvalue).  PPT is conclusive for separability only in
    2x2 and 2x3.
    """
    if rho.dims.n != 2:
        raise ValueError("ppt_check needs a bipartite state")
    pt = partial_transpose(rho.matrix, rho.dims, subsystem)
    w = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    min_eig = float(w[0])
    return ("NPT" if min_eig < -NPT_TOL else "PPT", min_eig)


def negativity(rho: DensityMatrix, subsystem: int = 2) -> float:
    """Sum of the absolute negative eigenvalues of the partial transpose."""
    if rho.dims.n != 2:
        raise ValueError("negativity needs a bipartite state")
    pt = partial_transpose(rho.matrix, rho.dims, subsystem)
    w = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    return float(-w[w < 0.0].sum())


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence max(0, mu1 - mu2 - mu3 - mu4) with mu the
    decreasing square roots of the eigenvalues of
    rho (sy x sy) rho^* (sy x sy)."""
    if rho.dims.dims != (2, 2):
        raise ValueError("wootters_concurrence needs a 2x2 qubit pair")
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sy, sy)
    m = rho.matrix @ yy @ rho.matrix.conj() @ yy
    mu = np.sqrt(np.abs(np.linalg.eigvals(m).real))
    mu = np.sort(mu)[::-1]
    return float(max(0.0, mu[0] - mu[1:].sum()))
