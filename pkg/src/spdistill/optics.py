"""Photonic model: source states, waveplates, path-coupling gates, dephasing.

Single-photon two-qubit logic: each photon carries a polarization qubit
(H = 0, V = 1) and a path qubit (L = 0, R = 1 before the final gate; the
output ports are relabeled U = 0, D = 1).  A half-wave plate inserted in one
path flips the polarization conditioned on the path (the path-controlled NOT
written m_cnot here); a polarization-splitting beam displacer routes the path
conditioned on polarization (p_cnot).  Jones-matrix conventions:

    hwp(a) = R(a) diag(1, -1) R(-a)      qwp(a) = R(a) diag(1, i) R(-a)

with a the fast-axis angle from horizontal, in degrees.  hwp(22.5) therefore
takes H to (H+V)/sqrt(2) and hwp(45) exchanges H and V.  The composite
qwp(45) hwp(d) qwp(45) is a pure polarization phase, linear in d; at d = 22.5
it imparts exactly -pi/2 on V relative to H, which is what the compensator
uses to cancel the raw path-gate phase (+pi/2 on V by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .registers import MOM, POL, QubitLabel, QubitRegister, mom, photon_register, pol, polarization_register
from .states import ATOL, DensityMatrix, PureState, apply, project


@dataclass(frozen=True)
class SourceSetting:
    """Pump/crystal configuration of the two-photon source.

    theta_p and theta_m are the polarization and path balance angles in
    degrees (45 means maximally entangled in that degree of freedom); phi is
    the pump phase in radians and rides on the |HH> polarization component.
    """

    theta_p: float
    theta_m: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("theta_p", "theta_m"):
            v = getattr(self, name)
            if not (0.0 <= v <= 90.0):
                raise ValueError(f"{name} must be in [0, 90] degrees, got {v}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")


@dataclass(frozen=True)
class NoiseChannel:
    """Single-qubit phase damping: off-diagonal elements scale by coherence."""

    coherence: float
    kind: str = "dephasing"

    def __post_init__(self):
        if not (0.0 <= self.coherence <= 1.0):
            raise ValueError(f"coherence must be in [0, 1], got {self.coherence}")
        if self.kind != "dephasing":
            raise ValueError(f"unsupported noise kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class OpticalElement:
    """A named unitary or projector bound to specific register qubits."""

    name: str
    targets: tuple[QubitLabel, ...]
    kind: str  # "unitary" | "projector"
    matrix: np.ndarray
    noise: NoiseChannel | None = field(default=None)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = 1 << len(self.targets)
        if m.shape != (d, d):
            raise ValueError(f"{self.name}: matrix shape {m.shape} does not fit targets")
        if self.kind == "unitary":
            dev = float(np.abs(m.conj().T @ m - np.eye(d)).max())
            if dev > ATOL:
                raise ValueError(f"{self.name}: not unitary, deviation {dev:.3e}")
        elif self.kind == "projector":
            dev = max(
                float(np.abs(m - m.conj().T).max()),
                float(np.abs(m @ m - m).max()),
            )
            if dev > ATOL:
                raise ValueError(f"{self.name}: not a projector, deviation {dev:.3e}")
        else:
            raise ValueError(f"{self.name}: kind must be 'unitary' or 'projector'")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", tuple(self.targets))


def _rot(angle_rad: float) -> np.ndarray:
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return np.array([[c, -s], [s, c]])


def hwp_matrix(angle_deg: float) -> np.ndarray:
    a = math.radians(angle_deg)
    return _rot(a) @ np.diag([1.0, -1.0]).astype(complex) @ _rot(-a)


def qwp_matrix(angle_deg: float) -> np.ndarray:
    a = math.radians(angle_deg)
    return _rot(a) @ np.diag([1.0, 1.0j]) @ _rot(-a)


def hwp(angle_deg: float, photon: str) -> OpticalElement:
    """Half-wave plate on one photon's polarization qubit."""
    return OpticalElement(f"hwp({angle_deg:g})@{photon}", (pol(photon),), "unitary", hwp_matrix(angle_deg))


def qwp(angle_deg: float, photon: str) -> OpticalElement:
    """Quarter-wave plate on one photon's polarization qubit."""
    return OpticalElement(f"qwp({angle_deg:g})@{photon}", (pol(photon),), "unitary", qwp_matrix(angle_deg))


def phase_compensator(photon: str, hwp_angle_deg: float = 22.5) -> OpticalElement:
    """qwp(45) hwp(d) qwp(45) stack: a pure relative phase of 4d - pi on V."""
    m = qwp_matrix(45.0) @ hwp_matrix(hwp_angle_deg) @ qwp_matrix(45.0)
    return OpticalElement(f"compensator({hwp_angle_deg:g})@{photon}", (pol(photon),), "unitary", m)


def m_cnot(control_value: str, photon: str) -> OpticalElement:
    """Half-wave plate at 45 deg inserted in one path: flips the polarization
    of this photon if its path qubit equals control_value ("L" or "R")."""
    if control_value not in ("L", "R"):
        raise ValueError(f"control_value must be 'L' or 'R', got {control_value!r}")
    ctrl = 0 if control_value == "L" else 1
    m = np.zeros((4, 4), dtype=complex)
    for p in (0, 1):
        for q in (0, 1):
            src = (p << 1) | q
            dst = ((p ^ 1) << 1) | q if q == ctrl else src
            m[dst, src] = 1.0
    return OpticalElement(
        f"m_cnot({control_value})@{photon}", (pol(photon), mom(photon)), "unitary", m
    )


def p_cnot(
    photon: str, compensated: bool = True, uncompensated_phase: float = math.pi / 2,
    noise: NoiseChannel | None = None,
) -> OpticalElement:
    """Beam displacer: routes the path conditioned on polarization.

    Basis map (path outputs re-identified U = 0, D = 1):
        HL -> HU    HR -> HD    VL -> VD    VR -> VU
    i.e. a NOT on the path qubit controlled on V polarization.  With
    compensated=False the element additionally imparts uncompensated_phase
    on every V-polarized input, the raw birefringent phase the compensator
    stack is there to remove.
    """
    m = np.zeros((4, 4), dtype=complex)
    for p in (0, 1):
        for q in (0, 1):
            src = (p << 1) | q
            dst = (p << 1) | (q ^ p)
            m[dst, src] = 1.0
    if not compensated:
        m = m @ np.diag([1.0, 1.0, np.exp(1j * uncompensated_phase), np.exp(1j * uncompensated_phase)])
    tag = "" if compensated else ",raw"
    return OpticalElement(
        f"p_cnot@{photon}{tag}", (pol(photon), mom(photon)), "unitary", m, noise=noise
    )


def pbs_transmit_projector(photon: str) -> OpticalElement:
    """Transmission port of a polarizing beam splitter spanning both paths:
    keeps the H component of this photon regardless of path."""
    m = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
    return OpticalElement(f"pbs_transmit@{photon}", (pol(photon), mom(photon)), "projector", m)


def apply_element(state, element: OpticalElement):
    """Apply one element; returns (state, probability), probability 1 for unitaries."""
    if element.kind == "unitary":
        return apply(state, element.matrix, element.targets), 1.0
    return project(state, element.matrix, element.targets)


# ---------------------------------------------------------------------------
# source states

def make_hyperentangled(s: SourceSetting) -> PureState:
    """Two-photon state partially entangled in polarization and in path:

        (cos tp |VV> + e^{i phi} sin tp |HH>) x (cos tm |LL> + sin tm |RR>)

    on the canonical register (A,pol),(A,mom),(B,pol),(B,mom).  The 90-degree
    polarization rotation on photon A that turns the raw interferometer output
    into this V/V-paired form is considered part of the source.
    """
    tp, tm = math.radians(s.theta_p), math.radians(s.theta_m)
    pol_amp = np.zeros(4, dtype=complex)
    pol_amp[0b11] = math.cos(tp)
    pol_amp[0b00] = math.sin(tp) * np.exp(1j * s.phi)
    mom_amp = np.zeros(4, dtype=complex)
    mom_amp[0b00] = math.cos(tm)
    mom_amp[0b11] = math.sin(tm)
    amps = np.einsum("ik,jl->ijkl", pol_amp.reshape(2, 2), mom_amp.reshape(2, 2)).reshape(-1)
    return PureState(photon_register(), amps)


def psi_output_modes(s: SourceSetting) -> tuple[PureState, PureState]:
    """Raw interferometer outputs before photon A's polarization rotation.

    Returns (collinear, noncollinear): the collinear state occupies the RR
    path modes and the non-collinear one the LL modes, each carrying the
    polarization state cos tp |H V> + e^{i phi} sin tp |V H>.  Superposing
    them with weights (sin tm, cos tm) and flipping A's polarization
    reproduces make_hyperentangled(s).
    """
    tp = math.radians(s.theta_p)
    pol_amp = np.zeros(4, dtype=complex)
    pol_amp[0b01] = math.cos(tp)
    pol_amp[0b10] = math.sin(tp) * np.exp(1j * s.phi)

    def with_path(path_bit: int) -> PureState:
        mom_amp = np.zeros(4, dtype=complex)
        mom_amp[(path_bit << 1) | path_bit] = 1.0
        amps = np.einsum("ik,jl->ijkl", pol_amp.reshape(2, 2), mom_amp.reshape(2, 2)).reshape(-1)
        return PureState(photon_register(), amps, normalize=True)

    return with_path(1), with_path(0)


def polarization_triplet() -> PureState:
    """(|HH> + |VV>)/sqrt(2) on the polarization pair register."""
    return PureState(
        polarization_register(), np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
    )


def apply_noise(rho: DensityMatrix, ch: NoiseChannel, target: QubitLabel) -> DensityMatrix:
    """Phase-damp one qubit: elements whose target bit differs between row and
    column scale by the coherence factor.  Trace and populations are exact."""
    if not isinstance(rho, DensityMatrix):
        raise TypeError("apply_noise operates on density matrices")
    n = rho.register.size
    t = rho.register.index_of(target)
    idx = np.arange(rho.dim)
    bits = (idx >> (n - 1 - t)) & 1
    differs = bits[:, None] != bits[None, :]
    m = np.where(differs, ch.coherence * rho.matrix, rho.matrix)
    return DensityMatrix(rho.register, m, validate=False)
