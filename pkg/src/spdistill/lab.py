"""Simulated coincidence counting, polarization tomography, and fringe scans.

Detection is modeled as Poissonian coincidence counting: each analyzer
setting sees a rate (pair rate times quantum probability) and every trial
draws from an independent, reproducible substream keyed by
(seed, operation id, setting index).
"""

from dataclasses import dataclass, field

import csv

import numpy as np

from .registers import PARTIES, polarization_register
from .states import (
    DensityMatrix,
    PureState,
    RegisterMismatchError,
    partial_trace,
)
from .optics import hwp_matrix, qwp_matrix
from .measures import VisibilityValue, fidelity_to_pure, visibility

# substream ids so different acquisition kinds never share random numbers
OP_SAMPLE = 0
OP_DISTILL = 1
OP_TOMOGRAPHY = 2
OP_VISIBILITY = 3
OP_CHARACTERIZE = 4

CANONICAL_SETTINGS = ("H", "V", "D", "R")

COUNTS_CSV_HEADER = ("setting_a", "setting_b", "trial_index", "counts", "duration_s", "seed")

_SQ2 = np.sqrt(2.0)

_CANONICAL_VECTORS = {
    "H": (1.0, 0.0),
    "V": (0.0, 1.0),
    "D": (1.0 / _SQ2, 1.0 / _SQ2),
    "R": (1.0 / _SQ2, -1.0j / _SQ2),
}

_SETTING_PAIRS = tuple((a, b) for a in CANONICAL_SETTINGS for b in CANONICAL_SETTINGS)


@dataclass(frozen=True, eq=False)
class AnalyzerSetting:
    """A single-photon polarization analyzer: waveplates into a polarizer.

    The stored vector is the polarization state that reaches the detector
    with unit probability.
    """

    photon: str
    name: str
    vector: np.ndarray

    def __post_init__(self):
        if self.photon not in PARTIES:
            raise ValueError(f"photon must be one of {PARTIES}, got {self.photon!r}")
        v = np.asarray(self.vector, dtype=complex).reshape(2)
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            raise ValueError("analyzer vector must be nonzero")
        object.__setattr__(self, "vector", v / norm)

    @classmethod
    def canonical(cls, photon: str, name: str) -> "AnalyzerSetting":
        try:
            vec = _CANONICAL_VECTORS[name]
        except KeyError:
            raise ValueError(
                f"unknown analyzer setting {name!r}, expected one of {CANONICAL_SETTINGS}"
            ) from None
        return cls(photon, name, np.array(vec))

    @classmethod
    def from_waveplates(cls, photon: str, hwp_deg: float, qwp_deg=None) -> "AnalyzerSetting":
        """Analyzer realized as HWP, optional QWP, then a polarizer passing H."""
        m = hwp_matrix(hwp_deg)
        name = f"hwp{hwp_deg:g}"
        if qwp_deg is not None:
            m = qwp_matrix(qwp_deg) @ m
            name += f"_qwp{qwp_deg:g}"
        vec = m.conj().T @ np.array([1.0, 0.0])
        return cls(photon, name, vec)

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())


@dataclass(frozen=True)
class CountRecord:
    """Coincidence counts for one analyzer pair.

    trials is empty for ideal (noise-free) records, in which case mean_rate
    falls back to the exact expected rate.
    """

    setting_a: str
    setting_b: str
    expected_rate: float
    trials: tuple
    duration_s: float
    seed: int

    @property
    def total(self) -> int:
        return int(sum(self.trials))

    @property
    def mean_rate(self) -> float:
        if not self.trials:
            return float(self.expected_rate)
        return self.total / (len(self.trials) * self.duration_s)


@dataclass(frozen=True, eq=False)
class TomographyResult:
    raw_linear: np.ndarray
    physical: DensityMatrix
    fidelity_to_target: object
    method: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class VisibilityScan:
    basis: str
    hwp_b_deg: tuple
    records: tuple
    visibility: VisibilityValue


def _clip_probability(p: float) -> float:
    return min(1.0, max(0.0, p))


def _polarization_density(state) -> np.ndarray:
    """4x4 polarization density matrix, tracing out any extra qubits."""
    pair = polarization_register()
    labels = set(state.register.labels)
    if labels == set(pair.labels):
        aligned = state.reorder(pair)
        if isinstance(aligned, PureState):
            amp = aligned.amplitudes
            return np.outer(amp, amp.conj())
        return aligned.matrix
    if set(pair.labels) <= labels:
        return partial_trace(state, pair.labels).matrix
    raise RegisterMismatchError(
        f"state must carry both polarization qubits, register has {state.register.labels}"
    )


def coincidence_probability(state, a: AnalyzerSetting, b: AnalyzerSetting) -> float:
    """Probability that both analyzers fire on the same pair."""
    if {a.photon, b.photon} != set(PARTIES):
        raise ValueError(
            f"need one analyzer per photon, got {a.photon!r} and {b.photon!r}"
        )
    if a.photon == "B":
        a, b = b, a
    rho = _polarization_density(state)
    proj = np.kron(a.projector, b.projector)
    return float(np.real(np.trace(proj @ rho)))


def sample_counts(
    p: float,
    pair_rate: float,
    trials: int = 60,
    duration_s: float = 1.0,
    seed: int = 0,
    op_id: int = OP_SAMPLE,
    setting_index: int = 0,
    setting_a: str = "",
    setting_b: str = "",
) -> CountRecord:
    """Draw Poissonian coincidence counts for one analyzer pair.

    The stream key (seed, op_id, setting_index) makes every record
    reproducible on its own, independent of acquisition order.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    if pair_rate < 0.0:
        raise ValueError(f"pair rate must be nonnegative, got {pair_rate}")
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if duration_s <= 0.0:
        raise ValueError(f"trial duration must be positive, got {duration_s}")
    mu = p * pair_rate * duration_s
    rng = np.random.default_rng((seed, op_id, setting_index))
    counts = tuple(int(c) for c in rng.poisson(mu, size=trials))
    return CountRecord(
        setting_a=setting_a,
        setting_b=setting_b,
        expected_rate=p * pair_rate,
        trials=counts,
        duration_s=duration_s,
        seed=seed,
    )


def tomography_acquire(
    state,
    pair_rate: float,
    seed: int = 0,
    trials: int = 60,
    duration_s: float = 1.0,
    ideal: bool = False,
) -> list:
    """Collect the 16 coincidence records (A-major over H, V, D, R)."""
    records = []
    for idx, (name_a, name_b) in enumerate(_SETTING_PAIRS):
        sa = AnalyzerSetting.canonical("A", name_a)
        sb = AnalyzerSetting.canonical("B", name_b)
        p = _clip_probability(coincidence_probability(state, sa, sb))
        if ideal:
            rec = CountRecord(
                setting_a=name_a,
                setting_b=name_b,
                expected_rate=p * pair_rate,
                trials=(),
                duration_s=duration_s,
                seed=seed,
            )
        else:
            rec = sample_counts(
                p,
                pair_rate,
                trials=trials,
                duration_s=duration_s,
                seed=seed,
                op_id=OP_TOMOGRAPHY,
                setting_index=idx,
                setting_a=name_a,
                setting_b=name_b,
            )
        records.append(rec)
    return records


def _records_by_pair(records) -> dict:
    by_pair = {}
    for rec in records:
        key = (rec.setting_a, rec.setting_b)
        if key in by_pair:
            raise ValueError(f"duplicate record for analyzer pair {key}")
        by_pair[key] = rec
    missing = [pair for pair in _SETTING_PAIRS if pair not in by_pair]
    if missing:
        raise ValueError(f"tomography needs all 16 analyzer pairs, missing {missing}")
    return by_pair


def _project_to_simplex(evals: np.ndarray) -> np.ndarray:
    # euclidean projection of the spectrum onto the probability simplex;
    # this gives the frobenius-closest unit-trace positive matrix
    u = np.sort(evals)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, evals.size + 1)
    k = idx[u + (1.0 - css) / idx > 0][-1]
    tau = (css[k - 1] - 1.0) / k
    return np.maximum(evals - tau, 0.0)


def _ml_iterate(rho, projectors, freqs, max_iters, tol):
    # iterative maximum-likelihood polish: rho <- G^-1 R rho R G^-1 with
    # R = sum_j (f_j / p_j) Pi_j and G = sum_j Pi_j, so exact data is a
    # fixed point even though the 16 projectors do not form a resolution
    # of the identity
    g_inv = np.linalg.inv(np.sum(projectors, axis=0))
    iters = 0
    for iters in range(1, max_iters + 1):
        probs = np.array([float(np.real(np.trace(pj @ rho))) for pj in projectors])
        ratio = freqs / np.maximum(probs, 1e-12)
        r = np.tensordot(ratio, projectors, axes=1)
        m = g_inv @ r
        new = m @ rho @ m.conj().T
        new = (new + new.conj().T) / 2.0
        new /= np.trace(new).real
        delta = float(np.linalg.norm(new - rho))
        rho = new
        if delta < tol:
            break
    return rho, iters


def tomography_reconstruct(
    records,
    target=None,
    ml_refine: bool = False,
    max_iters: int = 1000,
    tol: float = 1e-10,
) -> TomographyResult:
    """Reconstruct the polarization density matrix from 16 count records.

    Linear inversion of the mean rates (normalized by the summed H/V-basis
    rates), then projection of the spectrum onto the probability simplex to
    enforce physicality.  ml_refine polishes the result with an iterative
    maximum-likelihood pass.
    """
    by_pair = _records_by_pair(records)
    rates = np.array([by_pair[pair].mean_rate for pair in _SETTING_PAIRS])
    total = sum(by_pair[(a, b)].mean_rate for a in ("H", "V") for b in ("H", "V"))
    if total <= 0.0:
        raise ValueError("cannot normalize: the four H/V-basis records sum to zero")
    freqs = rates / total

    projectors = [
        np.kron(
            AnalyzerSetting.canonical("A", a).projector,
            AnalyzerSetting.canonical("B", b).projector,
        )
        for a, b in _SETTING_PAIRS
    ]
    # tr(Pi rho) = vec(Pi^T) . vec(rho) with row-major flattening
    design = np.array([pj.T.reshape(-1) for pj in projectors])
    solution, *_ = np.linalg.lstsq(design, freqs.astype(complex), rcond=None)
    raw = solution.reshape(4, 4)

    herm = (raw + raw.conj().T) / 2.0
    evals, evecs = np.linalg.eigh(herm)
    weights = _project_to_simplex(evals)
    phys = (evecs * weights) @ evecs.conj().T
    phys = (phys + phys.conj().T) / 2.0

    method = {
        "inversion": "linear",
        "normalization": "hv_rate_sum",
        "projection": "eigenvalue simplex projection",
        "ml_refined": False,
        "ml_iterations": 0,
    }
    if ml_refine:
        phys, iters = _ml_iterate(phys, projectors, freqs, max_iters, tol)
        method["ml_refined"] = True
        method["ml_iterations"] = iters

    physical = DensityMatrix(polarization_register(), phys)
    fid = None
    if target is not None:
        fid = fidelity_to_pure(physical, target)
    return TomographyResult(
        raw_linear=raw, physical=physical, fidelity_to_target=fid, method=method
    )


def trace_distance(a, b) -> float:
    """Half the sum of singular values of the difference."""
    ma = a.matrix if hasattr(a, "matrix") else np.asarray(a)
    mb = b.matrix if hasattr(b, "matrix") else np.asarray(b)
    return 0.5 * float(np.sum(np.linalg.svd(ma - mb, compute_uv=False)))


def visibility_scan(
    state,
    basis: str = "diagonal",
    points: int = 16,
    pair_rate: float = 1000.0,
    trials: int = 60,
    duration_s: float = 1.0,
    seed: int = 0,
    ideal: bool = False,
) -> VisibilityScan:
    """Sweep analyzer B's half-wave plate over [0, 90) and fit the contrast.

    Analyzer A sits at +45 degrees (diagonal basis) or at H (hv basis).
    """
    if basis == "diagonal":
        fixed_hwp = 22.5
    elif basis == "hv":
        fixed_hwp = 0.0
    else:
        raise ValueError(f"basis must be 'diagonal' or 'hv', got {basis!r}")
    if points < 4:
        raise ValueError(f"a fringe scan needs at least 4 points, got {points}")
    analyzer_a = AnalyzerSetting.from_waveplates("A", fixed_hwp)
    angles = []
    records = []
    for i in range(points):
        h = 90.0 * i / points
        analyzer_b = AnalyzerSetting.from_waveplates("B", h)
        p = _clip_probability(coincidence_probability(state, analyzer_a, analyzer_b))
        if ideal:
            rec = CountRecord(
                setting_a=analyzer_a.name,
                setting_b=analyzer_b.name,
                expected_rate=p * pair_rate,
                trials=(),
                duration_s=duration_s,
                seed=seed,
            )
        else:
            rec = sample_counts(
                p,
                pair_rate,
                trials=trials,
                duration_s=duration_s,
                seed=seed,
                op_id=OP_VISIBILITY,
                setting_index=i,
                setting_a=analyzer_a.name,
                setting_b=analyzer_b.name,
            )
        angles.append(h)
        records.append(rec)
    return VisibilityScan(
        basis=basis,
        hwp_b_deg=tuple(angles),
        records=tuple(records),
        visibility=visibility(records),
    )


def write_counts_csv(path, records) -> None:
    """One row per trial, stable header, plain integers."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COUNTS_CSV_HEADER)
        for rec in records:
            for t, c in enumerate(rec.trials):
                writer.writerow([rec.setting_a, rec.setting_b, t, c, rec.duration_s, rec.seed])


def tomography_to_json_dict(result: TomographyResult) -> dict:
    """JSON-ready document: real part, imaginary part, fidelity, method."""
    m = result.physical.matrix
    return {
        "real": [[float(v) for v in row] for row in m.real],
        "imag": [[float(v) for v in row] for row in m.imag],
        "fidelity": result.fidelity_to_target,
        "method": dict(result.method),
    }
