"""Trials-to-detection benchmark over parameterized state families.

For each grid point the state is fixed and the detection campaign is
repeated with independent master seeds; the row records how many random
witness trials the first violation took (censored at trials + 1 when no
violation occurred) next to an independent entanglement oracle for the
same state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concurrence import bipartite_concurrence_purity
from .separability import negativity, sample_detection, wootters_concurrence
from .states import (
    DensityMatrix,
    DimSpec,
    PureState,
    density_from_pure,
    isotropic_state,
    werner_2qubit,
)

FAMILIES = ("werner", "isotropic", "pure")


@dataclass(frozen=True)
class BenchRow:
    param: float
    oracle: float
    median_first_violation: float
    mean_first_violation: float
    violation_rate: float


def schmidt_interpolated_pure(d: int, t: float) -> PureState:
    """Pure d x d state (|00> + t|11> + ... + t|d-1,d-1>)/norm: product at
    t = 0, maximally entangled at t = 1."""
    if d < 2:
        raise ValueError("need local dimension >= 2")
    if t < 0:
        raise ValueError("interpolation parameter must be >= 0")
    vec = np.zeros(d * d, dtype=complex)
    vec[0] = 1.0
    for i in range(1, d):
        vec[i * d + i] = t
    return PureState(DimSpec((d, d)), vec / np.linalg.norm(vec))


def bench_state(family: str, param: float, d: int = 3) -> tuple[DensityMatrix, float]:
    """State and oracle entanglement value for one grid point."""
    if family == "werner":
        rho = werner_2qubit(param)
        return rho, wootters_concurrence(rho)
    if family == "isotropic":
        rho = isotropic_state(d, param)
        return rho, negativity(rho)
    if family == "pure":
        psi = schmidt_interpolated_pure(d, param)
        return density_from_pure(psi), bipartite_concurrence_purity(psi)
    raise ValueError(f"unknown bench family {family!r}; choose from {FAMILIES}")


def rep_master_seed(seed: int, param_index: int, rep: int) -> int:
    """Deterministic per-repetition master seed."""
    ss = np.random.SeedSequence(seed, spawn_key=(param_index, rep))
    return int(ss.generate_state(1, np.uint64)[0])


def run_bench(
    family: str,
    grid,
    trials: int,
    reps: int,
    seed: int,
    d: int = 3,
    workers: int = 1,
) -> list[BenchRow]:
    rows = []
    for pi, param in enumerate(grid):
        rho, oracle = bench_state(family, float(param), d)
        firsts = []
        hits = 0
        for rep in range(reps):
            report = sample_detection(
                rho,
                trials=trials,
                master_seed=rep_master_seed(seed, pi, rep),
                workers=workers,
                state_id=f"{family}({param})",
            )
            if report.first_violation_trial is None:
                firsts.append(trials + 1)
            else:
                firsts.append(report.first_violation_trial)
                hits += 1
        rows.append(
            BenchRow(
                param=float(param),
                oracle=float(oracle),
                median_first_violation=float(np.median(firsts)),
                mean_first_violation=float(np.mean(firsts)),
                violation_rate=hits / reps,
            )
        )
    return rows
