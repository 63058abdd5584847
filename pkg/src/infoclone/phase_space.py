"""Coherency-parameter transport through a source-target coupling network.

A single source mode is coupled to ``n`` target modes.  Coherent inputs stay
coherent under the coupling, so the whole evolution is an (n+1) x (n+1)
unitary acting on the vector of coherency parameters (source first).  This
module builds that matrix, applies it, checks the quadratic invariants it
must preserve, and provides the symmetric configuration that empties the
source into ``n`` equal copies carrying ``alpha / sqrt(n)``.

Phase convention: a coupling with magnitude ``r`` and phase ``delta``
contributes ``r * exp(-1j*delta)`` to the source-raising/target-lowering
term of the interaction, which makes the matrices below the exact parameter
maps of the exponentiated coupling (``fock_oracle`` checks this directly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "UNITARITY_TOL",
    "DegenerateCouplingError",
    "CoherentParams",
    "CloneNetworkConfig",
    "build_tilde_transfer",
    "build_transfer",
    "apply_transfer",
    "unitarity_deviation",
    "check_invariants",
    "symmetric_clone_config",
    "information_clone",
    "remove_phases",
    "info_overlap_fidelity",
]

UNITARITY_TOL = 1e-12


class DegenerateCouplingError(ValueError):
    """Raised when every coupling magnitude is zero."""


@dataclass(frozen=True)
class CoherentParams:
    """Coherency parameters of the source mode followed by the target modes.

    ``entries[0]`` is the source parameter, ``entries[1:]`` the targets.
    Instances are immutable and safe to share between workers.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex).copy()
        if entries.ndim != 1 or entries.size < 2:
            raise ValueError("need a source and at least one target parameter")
        if not np.all(np.isfinite(entries)):
            raise ValueError("coherency parameters must be finite")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return self.entries.size

    @property
    def source(self) -> complex:
        return complex(self.entries[0])

    @property
    def targets(self) -> np.ndarray:
        return self.entries[1:]


@dataclass(frozen=True)
class CloneNetworkConfig:
    """Coupling magnitudes/phases and the interaction time of the network."""

    magnitudes: np.ndarray
    phases: np.ndarray
    time: float

    def __post_init__(self):
        mags = np.atleast_1d(np.asarray(self.magnitudes, dtype=float)).copy()
        phases = np.atleast_1d(np.asarray(self.phases, dtype=float)).copy()
        if mags.ndim != 1 or mags.size == 0:
            raise ValueError("need at least one coupling")
        if phases.shape != mags.shape:
            raise ValueError("phases and magnitudes must have matching length")
        if not np.all(np.isfinite(mags)) or np.any(mags < 0):
            raise ValueError("coupling magnitudes must be finite and nonnegative")
        if not np.all(np.isfinite(phases)):
            raise ValueError("coupling phases must be finite")
        if not np.any(mags > 0):
            raise DegenerateCouplingError(
                "all coupling magnitudes are zero; the total coupling rate "
                "appears in denominators and must be positive"
            )
        mags.flags.writeable = False
        phases.flags.writeable = False
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "time", float(self.time))

    @property
    def n_targets(self) -> int:
        return self.magnitudes.size

    @property
    def total_coupling(self) -> float:
        """Root-sum-square of the coupling magnitudes."""
        return float(math.sqrt(np.sum(self.magnitudes**2)))

    @property
    def rotation_angle(self) -> float:
        """Total coupling times interaction time; the network is 2*pi periodic in it."""
        return self.total_coupling * self.time


def build_tilde_transfer(config: CloneNetworkConfig) -> np.ndarray:
    """Real transfer matrix of a phase-free network.

    Row 0 is (cos rt, (r_1/r) sin rt, ..., (r_n/r) sin rt); below, the first
    column carries -(r_j/r) sin rt and the target block is the identity minus
    the rank-one correction (r_j r_k / r^2)(1 - cos rt).  The result is
    orthogonal.  Requires every coupling phase to be zero.
    """
    if np.any(config.phases != 0):
        raise ValueError("the real transfer matrix requires all coupling phases zero")
    total = config.total_coupling
    angle = config.rotation_angle
    s, c = math.sin(angle), math.cos(angle)
    weights = config.magnitudes / total
    n = config.n_targets
    matrix = np.empty((n + 1, n + 1))
    matrix[0, 0] = c
    matrix[0, 1:] = weights * s
    matrix[1:, 0] = -weights * s
    matrix[1:, 1:] = np.eye(n) - np.outer(weights, weights) * (1.0 - c)
    return matrix


def build_transfer(config: CloneNetworkConfig) -> np.ndarray:
    """Complex transfer matrix for arbitrary coupling phases.

    The first row carries e^{-i delta_j} (r_j/r) sin rt off the diagonal, the
    first column -e^{+i delta_j} (r_j/r) sin rt, and the target block is
    delta_jk - e^{i(delta_j - delta_k)} (r_j r_k / r^2)(1 - cos rt).  Reduces
    exactly to :func:`build_tilde_transfer` when all phases vanish.
    """
    total = config.total_coupling
    angle = config.rotation_angle
    s, c = math.sin(angle), math.cos(angle)
    weights = config.magnitudes / total
    phase = np.exp(1j * config.phases)
    n = config.n_targets
    matrix = np.empty((n + 1, n + 1), dtype=complex)
    matrix[0, 0] = c
    matrix[0, 1:] = weights * s / phase
    matrix[1:, 0] = -weights * s * phase
    matrix[1:, 1:] = np.eye(n) - (phase[:, None] / phase[None, :]) * np.outer(weights, weights) * (1.0 - c)
    return matrix


def apply_transfer(matrix: np.ndarray, params: CoherentParams) -> CoherentParams:
    """Apply a transfer matrix to a parameter vector: out_a = sum_b M_ab in_b."""
    matrix = np.asarray(matrix)
    if matrix.shape != (len(params), len(params)):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match {len(params)} parameters"
        )
    return CoherentParams(matrix @ params.entries)


def unitarity_deviation(matrix: np.ndarray) -> float:
    """Largest entrywise deviation of M^dagger M from the identity."""
    matrix = np.asarray(matrix)
    gram = matrix.conj().T @ matrix
    return float(np.abs(gram - np.eye(matrix.shape[0])).max())


def check_invariants(before, after, second_pair=None, phases=None) -> float:
    """Largest violation among the quadratic forms the network preserves.

    Always checks the modulus-square sum and the phase-weighted plain-square
    sum (targets weighted by e^{-2i delta_k}; pass ``phases=None`` for a
    phase-free network).  When ``second_pair`` holds another (before, after)
    parameter pair transported by the same network, also checks the weighted
    bilinear and the plain sesquilinear pairings.

    Args:
        before: CoherentParams at the input.
        after: CoherentParams at the output.
        second_pair: optional (before2, after2) tuple for the two-vector forms.
        phases: coupling phases delta_k, one per target mode.

    Returns:
        Maximum absolute deviation over all checked forms.
    """
    if len(before) != len(after):
        raise ValueError("before/after parameter counts differ")
    weights = np.ones(len(before), dtype=complex)
    if phases is not None:
        phases = np.asarray(phases, dtype=float)
        if phases.shape != (len(before) - 1,):
            raise ValueError("need one coupling phase per target mode")
        weights[1:] = np.exp(-2j * phases)

    deviations = [
        abs(np.sum(np.abs(after.entries) ** 2) - np.sum(np.abs(before.entries) ** 2)),
        abs(np.sum(weights * after.entries**2) - np.sum(weights * before.entries**2)),
    ]
    if second_pair is not None:
        before2, after2 = second_pair
        if len(before2) != len(before) or len(after2) != len(before):
            raise ValueError("second parameter pair has mismatched length")
        deviations.append(
            abs(
                np.sum(weights * after.entries * after2.entries)
                - np.sum(weights * before.entries * before2.entries)
            )
        )
        deviations.append(
            abs(
                np.sum(np.conj(after.entries) * after2.entries)
                - np.sum(np.conj(before.entries) * before2.entries)
            )
        )
    return float(max(deviations))


def symmetric_clone_config(n_copies: int) -> CloneNetworkConfig:
    """Equal unit couplings driven to rotation angle 3*pi/2.

    There sin rt = -1 and cos rt = 0, so the source empties completely and
    every target picks up the same 1/sqrt(n) share of the source parameter.
    """
    if n_copies < 1:
        raise ValueError("need at least one copy")
    n = int(n_copies)
    return CloneNetworkConfig(np.ones(n), np.zeros(n), 1.5 * math.pi / math.sqrt(n))


def information_clone(alpha: complex, n_copies: int) -> CoherentParams:
    """Split a source parameter into ``n`` equal information-carrying copies.

    Exact algebraic evaluation of the symmetric network at rotation angle
    3*pi/2 (sin rt = -1, cos rt = 0) followed by removal of the known output
    phases: the source entry is exactly 0 and every target is exactly
    ``alpha / sqrt(n)``.  ``n_copies == 1`` degenerates to a swap, returning
    (0, alpha).
    """
    if n_copies < 1:
        raise ValueError("need at least one copy")
    entries = np.full(int(n_copies) + 1, complex(alpha) / math.sqrt(n_copies), dtype=complex)
    entries[0] = 0.0
    return CoherentParams(entries)


def remove_phases(params: CoherentParams, gammas) -> CoherentParams:
    """Rotate each parameter by e^{i gamma_a}; moduli are unchanged."""
    gammas = np.asarray(gammas, dtype=float)
    if gammas.shape != (len(params),):
        raise ValueError("need one rotation angle per mode")
    return CoherentParams(np.exp(1j * gammas) * params.entries)


def info_overlap_fidelity(alpha: complex, n_copies: int) -> float:
    """Squared overlap between the source state and one 1/sqrt(n) copy:
    exp(-|alpha|^2 (1 - 1/sqrt(n))^2)."""
    if n_copies < 1:
        raise ValueError("need at least one copy")
    return math.exp(-abs(complex(alpha)) ** 2 * (1.0 - 1.0 / math.sqrt(n_copies)) ** 2)
