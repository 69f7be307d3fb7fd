"""Distillation by projection onto equal-coefficient subspaces.

n shared pairs cos(t)|00> + sin(t)|11> expand into n+1 groups of terms whose
amplitudes share the value cos^(n-k)(t) sin^k(t); the group with Alice-side
Hamming weight k spans a C(n,k)-dimensional subspace on each side.  Projecting
into group k leaves a maximally entangled state of log2 C(n,k) ebits whatever
the input angle was, with success probability C(n,k) cos^(2(n-k)) sin^(2k).
The weight-k projector is diagonal in the computational basis, acts on one
party's qubits only, and is mirrored on the other side.

run_photonic_sp is the two-pair photonic realization on one photon pair
carrying polarization and path qubits: flip polarization in the R paths, keep
the H component of each photon, flip back in the L paths, then let the
polarization-controlled path gate merge the paths.  The surviving component is
the equal-coefficient polarization pair; both photons exit in the D port.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .measures import binary_entropy
from .registers import abstract_pair_register, mom, photon_register, pol, polarization_register, QubitLabel, QubitRegister
from .states import DensityMatrix, PureState, partial_trace
from .optics import (
    NoiseChannel,
    apply_element,
    apply_noise,
    m_cnot,
    p_cnot,
    pbs_transmit_projector,
)

EXPERIMENTAL_ANGLES = (35.9, 39.3, 41.9, 44.0)

MAX_PAIRS = 6


@dataclass(frozen=True)
class GateConfig:
    """Imperfections of the path-merging stage.

    gate_coherence is the residual off-diagonal coherence of the output
    polarization pair (1 = perfect).  It is realized as equal single-photon
    dephasing of strength sqrt(gate_coherence) on each photon, so the pair
    coherence product equals the configured value.
    """

    gate_coherence: float = 1.0
    compensated: bool = True
    uncompensated_phase: float = math.pi / 2

    def __post_init__(self):
        if not (0.0 <= self.gate_coherence <= 1.0):
            raise ValueError(f"gate_coherence must be in [0, 1], got {self.gate_coherence}")


@dataclass(frozen=True, eq=False)
class SchmidtSubspace:
    """One equal-coefficient group: Alice-side weight-k span (Bob mirrored).

    projector is the diagonal 2^n x 2^n weight-k projector on one party's n
    qubits; the same matrix acts as the mirror on the other party's qubits.
    """

    n: int
    k: int
    dimension: int
    projector: np.ndarray
    basis_indices: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class DistillationOutcome:
    """Result of one projection round."""

    success_probability: float
    output: Union[PureState, DensityMatrix]
    k: int
    extracted_ebits: float
    n: int
    note: str = ""
    full_output: Union[PureState, DensityMatrix, None] = None


def _check_n(n: int):
    if not isinstance(n, (int, np.integer)) or not (1 <= n <= MAX_PAIRS):
        raise ValueError(f"pair count must be an integer in [1, {MAX_PAIRS}], got {n!r}")


def _weights(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    w = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        w += (idx >> j) & 1
    return w


def schmidt_projectors(n: int) -> list[SchmidtSubspace]:
    """All n+1 weight subspaces, k = 0..n, including the two trivial ones."""
    _check_n(n)
    w = _weights(n)
    out = []
    for k in range(n + 1):
        mask = (w == k).astype(float)
        indices = tuple(int(i) for i in np.flatnonzero(mask))
        out.append(
            SchmidtSubspace(
                n=n, k=k, dimension=len(indices),
                projector=np.diag(mask), basis_indices=indices,
            )
        )
    return out


def pair_state(theta_deg: float, index: int) -> PureState:
    """cos(t)|00> + sin(t)|11> on the abstract pair (A,index),(B,index)."""
    t = math.radians(theta_deg)
    reg = QubitRegister((QubitLabel("A", index), QubitLabel("B", index)))
    return PureState(reg, [math.cos(t), 0.0, 0.0, math.sin(t)])


def n_pair_state(theta_deg: float, n: int) -> PureState:
    """n identical pairs on the canonical register A1..An, B1..Bn."""
    _check_n(n)
    t = math.radians(theta_deg)
    single = np.array([math.cos(t), math.sin(t)])
    # amplitude at (a_bits, b_bits) is prod_i single[a_i] delta(a_i, b_i)
    diag = np.array([1.0])
    for _ in range(n):
        diag = np.kron(diag, single)
    m = np.zeros(((1 << n), (1 << n)))
    np.fill_diagonal(m, diag)
    return PureState(abstract_pair_register(n), m.reshape(-1))


def subspace_probabilities(theta_deg: float, n: int) -> np.ndarray:
    """Probability of landing in each weight subspace, k = 0..n."""
    _check_n(n)
    st = n_pair_state(theta_deg, n)
    m = np.abs(st.amplitudes.reshape(1 << n, 1 << n)) ** 2
    w = _weights(n)
    # joint projection: Alice rows of weight k and Bob columns of weight k
    probs = np.zeros(n + 1)
    for k in range(n + 1):
        rows = w == k
        probs[k] = m[np.ix_(rows, rows)].sum()
    return probs


def project_n_pairs(theta_deg: float, n: int, k: int) -> DistillationOutcome:
    """Distill n identical pairs by projecting both sides into weight group k.

    The output keeps the full 2n-qubit register.  k = 0 and k = n are valid
    but trivial: the post-projection state is a product state carrying zero
    ebits, flagged in the note field.
    """
    _check_n(n)
    if not (0 <= k <= n):
        raise ValueError(f"subspace index k must be in [0, {n}], got {k}")
    st = n_pair_state(theta_deg, n)
    m = st.amplitudes.reshape(1 << n, 1 << n).copy()
    w = _weights(n)
    keep = w == k
    m[~keep, :] = 0.0
    m[:, ~keep] = 0.0
    prob = float((np.abs(m) ** 2).sum())
    prob = min(prob, 1.0)
    note = "product state, 0 ebits" if k in (0, n) else ""
    ebits = 0.0 if k in (0, n) else math.log2(math.comb(n, k))
    if prob < 1e-24:
        return DistillationOutcome(
            success_probability=0.0, output=PureState.null(st.register),
            k=k, extracted_ebits=ebits, n=n, note=note or "zero-probability subspace",
        )
    out = PureState(st.register, m.reshape(-1) / math.sqrt(prob))
    return DistillationOutcome(
        success_probability=prob, output=out, k=k, extracted_ebits=ebits, n=n, note=note,
    )


def expected_yield_finite(theta_deg: float, n: int) -> float:
    """Mean ebits per n-pair block from the nontrivial subspaces, 0 < k < n."""
    _check_n(n)
    t = math.radians(theta_deg)
    c2, s2 = math.cos(t) ** 2, math.sin(t) ** 2
    total = 0.0
    for k in range(1, n):
        total += math.comb(n, k) * c2 ** (n - k) * s2**k * math.log2(math.comb(n, k))
    return total


def expected_yield_asymptotic(theta_deg: float, n: int) -> float:
    """n times the per-pair entropy: the large-block distillation bound."""
    _check_n(n)
    t = math.radians(theta_deg)
    return n * binary_entropy(math.sin(t) ** 2)


def theta_grid() -> tuple[float, ...]:
    """0..90 degrees in 1-degree steps, plus the four experimental angles."""
    vals = set(float(v) for v in range(91))
    vals.update(EXPERIMENTAL_ANGLES)
    return tuple(sorted(vals))


def run_photonic_sp(
    state: PureState, gate: Optional[GateConfig] = None
) -> DistillationOutcome:
    """Run the two-pair photonic distillation circuit on a hyperentangled input.

    Sequence: polarization flip in the R path of each photon, transmission
    of the H component of each photon, polarization flip in the L path, then
    the polarization-controlled path gate on each photon.  Returns the
    polarization pair as the outcome output (the path qubits always leave in
    the D ports and carry no information); the full four-qubit state is kept
    in full_output.  With gate_coherence < 1 the output is a density matrix.
    """
    gate = gate or GateConfig()
    if not isinstance(state, PureState):
        raise TypeError("run_photonic_sp expects a pure four-qubit input")
    if set(state.register.labels) != set(photon_register().labels):
        raise ValueError("input must live on the (A,pol),(A,mom),(B,pol),(B,mom) register")
    st = state.reorder(photon_register())

    prob = 1.0
    for photon in ("A", "B"):
        st, _ = apply_element(st, m_cnot("R", photon))
    for photon in ("A", "B"):
        st, p = apply_element(st, pbs_transmit_projector(photon))
        prob *= p
        if st.is_null:
            return DistillationOutcome(
                success_probability=0.0, output=PureState.null(polarization_register()),
                k=1, extracted_ebits=1.0, n=2, note="no equal-coefficient component",
                full_output=st,
            )
    for photon in ("A", "B"):
        st, _ = apply_element(st, m_cnot("L", photon))
    for photon in ("A", "B"):
        st, _ = apply_element(st, p_cnot(photon, compensated=gate.compensated,
                                         uncompensated_phase=gate.uncompensated_phase))

    # both paths are now deterministic D ports; peel them off
    grid = st.amplitudes.reshape(2, 2, 2, 2)
    residual = float(np.abs(grid).sum() - np.abs(grid[:, 1, :, 1]).sum())
    if residual > 1e-9:
        raise ValueError(f"path qubits failed to merge: residual {residual:.3e}")
    pol_pair = PureState(polarization_register(), grid[:, 1, :, 1].reshape(-1))

    if gate.gate_coherence < 1.0:
        single = math.sqrt(gate.gate_coherence)
        rho4 = st.to_density()
        for photon in ("A", "B"):
            rho4 = apply_noise(rho4, NoiseChannel(coherence=single), pol(photon))
        rho_pol = partial_trace(rho4, (pol("A"), pol("B")))
        return DistillationOutcome(
            success_probability=prob, output=rho_pol, k=1, extracted_ebits=1.0, n=2,
            full_output=rho4,
        )
    return DistillationOutcome(
        success_probability=prob, output=pol_pair, k=1, extracted_ebits=1.0, n=2,
        full_output=st,
    )
