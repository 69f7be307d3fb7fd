"""Entanglement quantifiers and the fringe-contrast figure used on count data.

All log-based quantities are in ebits (log base 2).  Spectra are clamped at
1e-12 before any logarithm so that numerically-zero eigenvalues coming out of
eigh never poison an entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import ATOL, EIG_FLOOR, DensityMatrix, NormalizationError, PhysicalityError, PureState

# physicality floor for measures that require a valid two-qubit state: small
# negative eigenvalues from reconstruction noise are tolerated down to -1e-6
PHYSICALITY_FLOOR = -1e-6

_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_Y, _Y)


class UndefinedVisibilityError(ValueError):
    """Visibility of an all-zero scan is undefined."""


@dataclass(frozen=True)
class EntanglementValue:
    """A number of ebits."""

    ebits: float

    def __float__(self) -> float:
        return self.ebits


@dataclass(frozen=True)
class VisibilityValue:
    """Fringe contrast (c_max - c_min) / (c_max + c_min) of a scan."""

    value: float
    c_max: float
    c_min: float

    def __float__(self) -> float:
        return self.value


def binary_entropy(x: float) -> float:
    """Shannon entropy of {x, 1-x} in bits; arguments at or below 1e-12 count as 0."""
    if x <= EIG_FLOOR or x >= 1.0 - EIG_FLOOR:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _spectrum_entropy(evals: np.ndarray) -> float:
    lam = evals[evals > EIG_FLOOR]
    return float(-(lam * np.log2(lam)).sum())


def entropy_of_entanglement(psi: PureState, partition) -> EntanglementValue:
    """von Neumann entropy of the reduced state on the partition labels.

    partition must be a nonempty proper subset of the register; psi must be
    normalized (a null state is rejected).
    """
    if psi.is_null:
        raise NormalizationError("entropy of a null state is undefined")
    nrm2 = float(np.vdot(psi.amplitudes, psi.amplitudes).real)
    if abs(nrm2 - 1.0) > ATOL:
        raise NormalizationError(f"state norm^2 is {nrm2:.12g}, expected 1")
    part = tuple(partition)
    positions = sorted(psi.register.index_of(q) for q in part)
    if len(set(positions)) != len(part):
        raise ValueError("partition labels must be distinct")
    n = psi.register.size
    if not positions or len(positions) == n:
        raise ValueError("partition must be a nonempty proper subset of the register")
    rest = [q for q in range(n) if q not in positions]
    m = psi.amplitudes.reshape([2] * n).transpose(positions + rest)
    m = m.reshape(1 << len(positions), 1 << len(rest))
    rho = m @ m.conj().T
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    return EntanglementValue(_spectrum_entropy(np.clip(evals, 0.0, None)))


def _two_qubit_matrix(rho) -> np.ndarray:
    if isinstance(rho, PureState):
        rho = rho.to_density()
    if not isinstance(rho, DensityMatrix):
        raise TypeError(f"expected DensityMatrix or PureState, got {type(rho).__name__}")
    if rho.dim != 4:
        raise ValueError(f"two-qubit measure needs dimension 4, got {rho.dim}")
    m = rho.matrix
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    if float(evals.min()) < PHYSICALITY_FLOOR:
        raise PhysicalityError(f"eigenvalue {evals.min():.3e} below the {PHYSICALITY_FLOOR} floor")
    return m


def concurrence(rho) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the decreasing square roots of the eigenvalues of
    rho (Y x Y) rho* (Y x Y); they are computed here as singular values of
    sqrt(rho) (Y x Y) sqrt(rho)^T, which is the same spectrum evaluated
    without a non-Hermitian eigensolve.
    """
    m = _two_qubit_matrix(rho)
    evals, vecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    root = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
    lam = np.linalg.svd(root @ _YY @ root.T, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def tangle(rho) -> float:
    """Squared concurrence."""
    c = concurrence(rho)
    return c * c


def entanglement_of_formation(rho) -> EntanglementValue:
    """Two-qubit entanglement of formation h((1 + sqrt(1 - C^2)) / 2)."""
    c = concurrence(rho)
    return EntanglementValue(binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0))


def fidelity_to_pure(rho, target: PureState) -> float:
    """<target| rho |target>, with the registers aligned first."""
    if target.is_null:
        raise NormalizationError("fidelity to a null target is undefined")
    if isinstance(rho, PureState):
        if rho.register.labels != target.register.labels:
            target = target.reorder(rho.register)
        amp = np.vdot(target.amplitudes, rho.amplitudes)
        return float(min(1.0, abs(amp) ** 2))
    if isinstance(rho, DensityMatrix):
        if rho.register.labels != target.register.labels:
            target = target.reorder(rho.register)
        t = target.amplitudes
        val = float(np.real(np.vdot(t, rho.matrix @ t)))
        return float(min(1.0, max(0.0, val)))
    raise TypeError(f"expected DensityMatrix or PureState, got {type(rho).__name__}")


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    if isinstance(rho, PureState):
        return 1.0
    return rho.purity()


def _rate(point) -> float:
    mean = getattr(point, "mean_rate", None)
    if mean is not None:
        return float(mean)
    return float(point)


def visibility(scan) -> VisibilityValue:
    """Contrast (c_max - c_min)/(c_max + c_min) over the scan's mean rates.

    Accepts raw numbers or any objects exposing a mean_rate attribute (count
    records).  An all-zero scan has no defined contrast and raises.
    """
    rates = [_rate(p) for p in scan]
    if len(rates) < 2:
        raise ValueError(f"a scan needs at least two points, got {len(rates)}")
    c_max, c_min = max(rates), min(rates)
    if c_max <= 0.0:
        raise UndefinedVisibilityError("all scan rates are zero")
    return VisibilityValue((c_max - c_min) / (c_max + c_min), c_max, c_min)
