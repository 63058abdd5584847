"""Brute-force verification in a truncated multimode number basis.

States are complex amplitude vectors over occupation levels 0..d-1 per mode,
flattened row-major with the source mode slowest, so amplitude dumps are
bit-reproducible for a given level count.  Operators are built from ladder
matrices and exponentiated directly; nothing here assumes the parameter-level
algebra of ``phase_space``, which is exactly what makes
:func:`verify_disentanglement` an independent end-to-end oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply
from scipy.stats import poisson

from .phase_space import CloneNetworkConfig, CoherentParams, apply_transfer, build_transfer

__all__ = [
    "DEFAULT_DIM_BUDGET",
    "TruncationError",
    "DimensionBudgetError",
    "FockVector",
    "ladder_matrices",
    "poisson_tail",
    "required_levels",
    "coherent_state_vector",
    "displacement_matrix",
    "coupling_unitary",
    "product_coherent_state",
    "overlap",
    "evolve_product_state",
    "verify_disentanglement",
    "mode_occupations",
    "interior_mask",
    "total_number_diagonal",
]

DEFAULT_DIM_BUDGET = 20000
NORM_SLACK = 1e-9


class TruncationError(ValueError):
    """Requested truncation cannot meet the tail bound."""

    def __init__(self, message, required: int):
        super().__init__(message)
        self.required_levels = required


class DimensionBudgetError(ValueError):
    """Total Hilbert-space dimension exceeds the configured budget."""


@dataclass(frozen=True)
class FockVector:
    """Amplitudes over the truncated number basis of ``mode_count`` modes.

    Truncation can only lose weight, so the norm never exceeds 1 (up to
    rounding slack).
    """

    mode_count: int
    levels: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.mode_count < 1 or self.levels < 2:
            raise ValueError("need at least one mode and two levels")
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        if amps.shape != (self.levels**self.mode_count,):
            raise ValueError("amplitude count must equal levels**mode_count")
        norm = np.linalg.norm(amps)
        if norm > 1.0 + NORM_SLACK:
            raise ValueError(f"norm {norm} exceeds 1; truncation can only lose weight")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def ladder_matrices(levels: int):
    """Lowering and raising matrices on a single truncated mode.

    lower|n> = sqrt(n)|n-1>, raise|n> = sqrt(n+1)|n+1> with the top
    transition dropped.  Their commutator is the identity except the last
    diagonal entry, which is 1 - levels (truncation artifact).
    """
    if levels < 2:
        raise ValueError("need at least two levels")
    lower = np.diag(np.sqrt(np.arange(1.0, levels)), k=1)
    return lower, np.ascontiguousarray(lower.T)


def poisson_tail(mean_occupation: float, levels: int) -> float:
    """Probability weight a coherent state carries above the top retained level."""
    if mean_occupation == 0:
        return 0.0
    return float(poisson.sf(levels - 1, mean_occupation))


def required_levels(mean_occupation: float, tail_bound: float) -> int:
    """Smallest level count whose Poisson tail is within ``tail_bound``."""
    levels = 2
    while poisson_tail(mean_occupation, levels) > tail_bound:
        levels += 1
    return levels


def coherent_state_vector(alpha: complex, levels: int, tail_bound: float | None = None) -> FockVector:
    """Truncated coherent state with amplitudes e^{-|a|^2/2} a^n / sqrt(n!).

    The squared norm equals 1 minus the Poisson tail beyond the top level.
    With ``tail_bound`` set, raises :class:`TruncationError` (carrying the
    smallest adequate level count) when the discarded weight is too large.
    """
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    if tail_bound is not None:
        tail = poisson_tail(mean, levels)
        if tail > tail_bound:
            needed = required_levels(mean, tail_bound)
            raise TruncationError(
                f"truncation tail {tail:.3e} exceeds bound {tail_bound:.3e}; "
                f"need at least {needed} levels",
                required=needed,
            )
    amps = np.empty(levels, dtype=complex)
    amps[0] = math.exp(-0.5 * mean)
    for n in range(1, levels):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return FockVector(1, levels, amps)


def displacement_matrix(alpha: complex, levels: int) -> np.ndarray:
    """Matrix exponential of alpha*raise - conj(alpha)*lower on one mode.

    Applied to the vacuum it reproduces :func:`coherent_state_vector` up to
    truncation effects.
    """
    alpha = complex(alpha)
    lower, lift = ladder_matrices(levels)
    return expm(alpha * lift - np.conj(alpha) * lower)


def _mode_operator(op: sparse.spmatrix, mode: int, mode_count: int) -> sparse.spmatrix:
    """Kronecker-embed a single-mode operator; mode 0 (the source) is slowest."""
    eye = sparse.identity(op.shape[0], format="csr", dtype=complex)
    result = None
    for m in range(mode_count):
        factor = op if m == mode else eye
        result = factor if result is None else sparse.kron(result, factor, format="csr")
    return result


def _coupling_generator(config: CloneNetworkConfig, levels: int) -> sparse.spmatrix:
    """Sparse anti-Hermitian generator of the coupling network.

    The configured phase enters as coupling kappa_j = r_j * exp(-1j*delta_j),
    the convention under which ``build_transfer`` is the exact parameter map
    of the exponentiated generator.
    """
    modes = config.n_targets + 1
    lower, lift = ladder_matrices(levels)
    lower = sparse.csr_matrix(lower.astype(complex))
    lift = sparse.csr_matrix(lift.astype(complex))
    source_up = _mode_operator(lift, 0, modes)
    source_down = _mode_operator(lower, 0, modes)
    kappa = config.magnitudes * np.exp(-1j * config.phases)
    dim = levels**modes
    generator = sparse.csr_matrix((dim, dim), dtype=complex)
    for j, coupling in enumerate(kappa):
        target_down = _mode_operator(lower, j + 1, modes)
        target_up = _mode_operator(lift, j + 1, modes)
        generator = generator + coupling * (source_up @ target_down) \
            - np.conj(coupling) * (source_down @ target_up)
    return config.time * generator


def _check_budget(config: CloneNetworkConfig, levels: int, dim_budget: int) -> int:
    dim = levels ** (config.n_targets + 1)
    if dim > dim_budget:
        raise DimensionBudgetError(
            f"total dimension {dim} exceeds the budget {dim_budget}"
        )
    return dim


def coupling_unitary(config: CloneNetworkConfig, levels: int,
                     dim_budget: int = DEFAULT_DIM_BUDGET) -> np.ndarray:
    """Dense matrix exponential of the coupling generator on all modes."""
    _check_budget(config, levels, dim_budget)
    return expm(_coupling_generator(config, levels).toarray())


def product_coherent_state(params: CoherentParams, levels: int,
                           tail_bound: float | None = None) -> FockVector:
    """Tensor product of truncated coherent states, source mode slowest."""
    amps = None
    for entry in params.entries:
        mode = coherent_state_vector(entry, levels, tail_bound=tail_bound)
        amps = mode.amplitudes if amps is None else np.kron(amps, mode.amplitudes)
    return FockVector(len(params), levels, amps)


def overlap(x: FockVector, y: FockVector) -> complex:
    """Inner product <x|y> of two vectors on the same truncated space."""
    if (x.mode_count, x.levels) != (y.mode_count, y.levels):
        raise ValueError("vectors live on different truncated spaces")
    return complex(np.vdot(x.amplitudes, y.amplitudes))


def evolve_product_state(params: CoherentParams, config: CloneNetworkConfig, levels: int,
                         dim_budget: int = DEFAULT_DIM_BUDGET) -> FockVector:
    """Evolve a product coherent state by the coupling network.

    Uses the sparse action of the generator's exponential on the state, so it
    scales to dimensions where the dense unitary is out of budget.
    """
    if len(params) != config.n_targets + 1:
        raise ValueError("parameter count must match the network size")
    _check_budget(config, levels, dim_budget)
    initial = product_coherent_state(params, levels)
    if config.time == 0:
        return initial
    evolved = expm_multiply(_coupling_generator(config, levels), initial.amplitudes)
    return FockVector(len(params), levels, evolved)


def verify_disentanglement(params: CoherentParams, config: CloneNetworkConfig, levels: int,
                           dim_budget: int = DEFAULT_DIM_BUDGET) -> float:
    """Infidelity between brute-force evolution and the parameter-map prediction.

    The input product state is evolved numerically and compared against the
    product coherent state built from ``apply_transfer(build_transfer(config))``;
    returns 1 - |<expected|evolved>|^2.  This is the end-to-end check that the
    network output stays a disentangled set of coherent states with exactly
    the predicted parameters.
    """
    evolved = evolve_product_state(params, config, levels, dim_budget)
    predicted = apply_transfer(build_transfer(config), params)
    expected = product_coherent_state(predicted, levels)
    return float(1.0 - abs(overlap(expected, evolved)) ** 2)


def mode_occupations(mode_count: int, levels: int) -> np.ndarray:
    """Occupation numbers of every flattened basis index, shape (dim, modes)."""
    grids = np.indices((levels,) * mode_count)
    return grids.reshape(mode_count, -1).T


def interior_mask(mode_count: int, levels: int) -> np.ndarray:
    """Basis states whose occupations all stay below the truncation edge.

    Unitarity and commutator identities necessarily break on the boundary
    states, so checks restrict to this interior.
    """
    return np.all(mode_occupations(mode_count, levels) <= levels - 2, axis=1)


def total_number_diagonal(mode_count: int, levels: int) -> np.ndarray:
    """Diagonal of the total occupation-number operator."""
    return mode_occupations(mode_count, levels).sum(axis=1).astype(float)
