"""Dense pure states and density matrices over labeled qubit registers.

Everything is small enough (at most 12 qubits, dimension 4096) that plain
numpy vectors and matrices are the right representation.  Unitaries and
projectors act on pure states through tensor contractions so the full-register
operator never has to be materialized; density-matrix evolution embeds the
operator densely, which is fine at the register sizes where mixed states
actually occur here (two photons, dimension at most 16).
"""

from __future__ import annotations

import numpy as np

from .registers import LabelCollisionError, QubitRegister

ATOL = 1e-9            # default tolerance for unitarity / normalization checks
EIG_FLOOR = 1e-12      # spectra below this are treated as exact zeros
_NULL_CUTOFF = 1e-24   # squared norm below which a projection result is null
_EMBED_DIM_LIMIT = 2048  # dense operator embedding guard

__all__ = [
    "ATOL",
    "EIG_FLOOR",
    "DensityMatrix",
    "NormalizationError",
    "ProjectorError",
    "PureState",
    "PhysicalityError",
    "RegisterMismatchError",
    "UnitarityError",
    "apply",
    "apply_linear",
    "embedded_operator",
    "overlap",
    "partial_trace",
    "project",
    "states_equal",
    "tensor",
]


class NormalizationError(ValueError):
    """State vector does not have unit norm where one is required."""


class UnitarityError(ValueError):
    """Matrix fails the unitarity check."""


class ProjectorError(ValueError):
    """Matrix is not Hermitian idempotent."""


class RegisterMismatchError(ValueError):
    """Array shape or label set does not match the register."""


class PhysicalityError(ValueError):
    """Matrix is not a valid density matrix."""


class PureState:
    """Normalized complex amplitude vector over a labeled register.

    Amplitudes are indexed MSB-first in register label order.  Construction
    verifies the squared-amplitude sum is 1 within 1e-9 unless normalize=True
    is passed.  A null state (all-zero vector) only arises as the result of a
    zero-probability projection and is flagged by is_null.
    """

    __slots__ = ("register", "amplitudes", "_null")

    def __init__(self, register: QubitRegister, amplitudes, *, normalize: bool = False):
        amps = np.array(amplitudes, dtype=complex)
        if amps.shape != (register.dim,):
            raise RegisterMismatchError(
                f"amplitude vector has shape {amps.shape}, register needs ({register.dim},)"
            )
        nrm2 = float(np.vdot(amps, amps).real)
        if normalize:
            if nrm2 < _NULL_CUTOFF:
                raise NormalizationError("cannot normalize a zero vector")
            amps = amps / np.sqrt(nrm2)
        elif abs(nrm2 - 1.0) > ATOL:
            raise NormalizationError(f"squared amplitudes sum to {nrm2:.12g}, expected 1")
        amps.setflags(write=False)
        self.register = register
        self.amplitudes = amps
        self._null = False

    @classmethod
    def null(cls, register: QubitRegister) -> "PureState":
        """The flagged zero vector returned by zero-probability projections."""
        st = cls.__new__(cls)
        amps = np.zeros(register.dim, dtype=complex)
        amps.setflags(write=False)
        st.register = register
        st.amplitudes = amps
        st._null = True
        return st

    @classmethod
    def basis(cls, register: QubitRegister, bits) -> "PureState":
        amps = np.zeros(register.dim, dtype=complex)
        amps[register.index_for(bits)] = 1.0
        return cls(register, amps)

    @property
    def is_null(self) -> bool:
        return self._null

    @property
    def n_qubits(self) -> int:
        return self.register.size

    @property
    def dim(self) -> int:
        return self.register.dim

    def reorder(self, new_register: QubitRegister) -> "PureState":
        """Express the same state with the register labels permuted."""
        if set(new_register.labels) != set(self.register.labels):
            raise RegisterMismatchError("reorder requires the same label set")
        if new_register.labels == self.register.labels:
            return self
        n = self.n_qubits
        perm = [self.register.index_of(q) for q in new_register.labels]
        amps = self.amplitudes.reshape([2] * n).transpose(perm).reshape(-1)
        out = PureState.__new__(PureState)
        amps = np.ascontiguousarray(amps)
        amps.setflags(write=False)
        out.register = new_register
        out.amplitudes = amps
        out._null = self._null
        return out

    def to_density(self) -> "DensityMatrix":
        if self._null:
            raise NormalizationError("null state has no density matrix")
        return DensityMatrix(
            self.register, np.outer(self.amplitudes, self.amplitudes.conj()), validate=False
        )

    def __repr__(self) -> str:
        tag = "null " if self._null else ""
        return f"<{tag}PureState on {list(self.register.labels)}>"


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix over a register.

    Validation tolerances: Hermiticity and trace within 1e-9, eigenvalues
    above -1e-9.
    """

    __slots__ = ("register", "matrix")

    def __init__(self, register: QubitRegister, matrix, *, validate: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.shape != (register.dim, register.dim):
            raise RegisterMismatchError(
                f"matrix has shape {m.shape}, register needs {(register.dim, register.dim)}"
            )
        if validate:
            herm_dev = float(np.abs(m - m.conj().T).max())
            if herm_dev > ATOL:
                raise PhysicalityError(f"not Hermitian: max deviation {herm_dev:.3e}")
            tr_dev = abs(np.trace(m) - 1.0)
            if tr_dev > ATOL:
                raise PhysicalityError(f"trace deviates from 1 by {tr_dev:.3e}")
            lo = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0).min())
            if lo < -ATOL:
                raise PhysicalityError(f"negative eigenvalue {lo:.3e}")
        m.setflags(write=False)
        self.register = register
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.register.dim

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    def reorder(self, new_register: QubitRegister) -> "DensityMatrix":
        if set(new_register.labels) != set(self.register.labels):
            raise RegisterMismatchError("reorder requires the same label set")
        if new_register.labels == self.register.labels:
            return self
        n = self.register.size
        perm = [self.register.index_of(q) for q in new_register.labels]
        axes = perm + [p + n for p in perm]
        m = self.matrix.reshape([2] * (2 * n)).transpose(axes).reshape(self.dim, self.dim)
        return DensityMatrix(new_register, m, validate=False)

    def __repr__(self) -> str:
        return f"<DensityMatrix on {list(self.register.labels)}>"


# ---------------------------------------------------------------------------
# operator plumbing

def _resolve_targets(register: QubitRegister, targets) -> tuple[int, ...]:
    positions = tuple(register.index_of(q) for q in targets)
    if len(set(positions)) != len(positions):
        raise LabelCollisionError(f"repeated target label in {tuple(targets)}")
    return positions


def _check_operator_shape(matrix: np.ndarray, n_targets: int):
    d = 1 << n_targets
    if matrix.shape != (d, d):
        raise RegisterMismatchError(
            f"operator shape {matrix.shape} does not fit {n_targets} target qubit(s)"
        )


def _contract(amps: np.ndarray, n: int, matrix: np.ndarray, positions: tuple[int, ...]) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the target axes of an n-qubit amplitude vector."""
    k = len(positions)
    tens = matrix.reshape([2] * (2 * k))
    psi = amps.reshape([2] * n)
    psi = np.tensordot(tens, psi, axes=(list(range(k, 2 * k)), list(positions)))
    # tensordot leaves target axes in front; restore register axis order
    rest = [q for q in range(n) if q not in positions]
    current = list(positions) + rest
    inverse = np.argsort(current)
    return psi.transpose(inverse).reshape(-1)


def apply_linear(state: PureState, matrix, targets) -> np.ndarray:
    """Raw (not necessarily unitary) operator action; returns the bare vector."""
    m = np.asarray(matrix, dtype=complex)
    positions = _resolve_targets(state.register, targets)
    _check_operator_shape(m, len(positions))
    return _contract(state.amplitudes, state.n_qubits, m, positions)


def embedded_operator(matrix, targets, register: QubitRegister) -> np.ndarray:
    """Dense full-register embedding of an operator acting on the target qubits."""
    if register.dim > _EMBED_DIM_LIMIT:
        raise RegisterMismatchError(
            f"dense embedding at dimension {register.dim} exceeds the {_EMBED_DIM_LIMIT} guard"
        )
    m = np.asarray(matrix, dtype=complex)
    positions = _resolve_targets(register, targets)
    _check_operator_shape(m, len(positions))
    n = register.size
    rest = [q for q in range(n) if q not in positions]
    big = np.kron(m, np.eye(1 << len(rest), dtype=complex))
    # permuted order (targets..., rest...) -> register order
    order = list(positions) + rest
    to_reg = np.zeros(register.dim, dtype=np.intp)
    for p in range(register.dim):
        bits = [(p >> (n - 1 - j)) & 1 for j in range(n)]
        i = 0
        for axis, b in zip(order, bits):
            i |= b << (n - 1 - axis)
        to_reg[p] = i
    out = np.zeros_like(big)
    out[np.ix_(to_reg, to_reg)] = big
    return out


def _check_unitary(matrix: np.ndarray):
    dev = float(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])).max())
    if dev > ATOL:
        raise UnitarityError(f"matrix is not unitary: max deviation {dev:.3e}")


def _check_projector(matrix: np.ndarray):
    herm = float(np.abs(matrix - matrix.conj().T).max())
    idem = float(np.abs(matrix @ matrix - matrix).max())
    if herm > ATOL or idem > ATOL:
        raise ProjectorError(
            f"matrix is not a projector: hermiticity deviation {herm:.3e}, "
            f"idempotency deviation {idem:.3e}"
        )


def apply(state, matrix, targets):
    """Apply a unitary to the target qubits of a pure state or density matrix."""
    m = np.asarray(matrix, dtype=complex)
    _check_unitary(m)
    if isinstance(state, PureState):
        amps = apply_linear(state, m, targets)
        out = PureState.__new__(PureState)
        amps.setflags(write=False)
        out.register = state.register
        out.amplitudes = amps
        out._null = state.is_null
        return out
    if isinstance(state, DensityMatrix):
        u = embedded_operator(m, targets, state.register)
        return DensityMatrix(state.register, u @ state.matrix @ u.conj().T, validate=False)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def project(state, matrix, targets=None):
    """Measure the projector; returns (renormalized post state, probability).

    A zero-probability outcome returns a flagged null state rather than
    raising.  targets defaults to the whole register.
    """
    m = np.asarray(matrix, dtype=complex)
    _check_projector(m)
    if isinstance(state, PureState):
        tgt = state.register.labels if targets is None else tuple(targets)
        raw = apply_linear(state, m, tgt)
        prob = float(np.vdot(raw, raw).real)
        prob = min(max(prob, 0.0), 1.0)
        if prob < _NULL_CUTOFF:
            return PureState.null(state.register), 0.0
        post = PureState.__new__(PureState)
        amps = raw / np.sqrt(prob)
        amps.setflags(write=False)
        post.register = state.register
        post.amplitudes = amps
        post._null = False
        return post, prob
    if isinstance(state, DensityMatrix):
        tgt = state.register.labels if targets is None else tuple(targets)
        p_full = embedded_operator(m, tgt, state.register)
        kept = p_full @ state.matrix @ p_full
        prob = float(np.trace(kept).real)
        prob = min(max(prob, 0.0), 1.0)
        if prob < _NULL_CUTOFF:
            zero = np.zeros_like(state.matrix)
            return DensityMatrix(state.register, zero, validate=False), 0.0
        return DensityMatrix(state.register, kept / prob, validate=False), prob
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product, re-sorted into canonical label order and normalized."""
    common = set(a.register.labels) & set(b.register.labels)
    if common:
        names = ", ".join(repr(q) for q in sorted(common, key=lambda q: q.sort_key))
        raise LabelCollisionError(f"labels present on both factors: {names}")
    joint = QubitRegister(a.register.labels + b.register.labels)
    amps = np.kron(a.amplitudes, b.amplitudes)
    return PureState(joint, amps, normalize=True).reorder(joint.canonical())


def partial_trace(state, keep) -> DensityMatrix:
    """Trace out every qubit not in keep; keep must be a nonempty proper subset."""
    register = state.register
    keep = tuple(keep)
    positions = sorted(_resolve_targets(register, keep))
    n = register.size
    if not positions or len(positions) == n:
        raise ValueError("keep must be a nonempty proper subset of the register")
    kept_labels = tuple(register.labels[p] for p in positions)
    out_register = QubitRegister(kept_labels)
    rest = [q for q in range(n) if q not in positions]
    if isinstance(state, PureState):
        psi = state.amplitudes.reshape([2] * n).transpose(positions + rest)
        m = psi.reshape(1 << len(positions), 1 << len(rest))
        rho = m @ m.conj().T
    elif isinstance(state, DensityMatrix):
        axes = positions + rest
        full = state.matrix.reshape([2] * (2 * n))
        full = full.transpose(axes + [a + n for a in axes])
        dk, dr = 1 << len(positions), 1 << len(rest)
        rho = np.trace(full.reshape(dk, dr, dk, dr), axis1=1, axis2=3)
    else:
        raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(out_register, rho, validate=False)


def overlap(a: PureState, b: PureState) -> complex:
    """Inner product <a|b> after aligning the registers."""
    if a.register.labels != b.register.labels:
        b = b.reorder(a.register)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def states_equal(a: PureState, b: PureState, tol: float = ATOL) -> bool:
    """Equality up to global phase: |<a|b>|^2 >= 1 - tol."""
    return abs(overlap(a, b)) ** 2 >= 1.0 - tol
