"""Command-line front end: JSON configs in, CSV/JSON result files out.

Two subcommands.  `run` executes one scenario and writes a report plus
plot-ready data files into the output directory; `validate` checks a config
and lists every violated constraint without running anything.  Exit codes:
0 success, 2 invalid config, 3 runtime failure.

All outputs are byte-deterministic for a fixed config: floats are written
with their shortest round-trip representation, JSON keys are sorted, and no
timestamps or absolute paths appear in any file.
"""

import argparse
import csv
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .measures import fidelity_to_pure
from .optics import SourceSetting, make_hyperentangled, polarization_triplet
from .distill import (
    EXPERIMENTAL_ANGLES,
    MAX_PAIRS,
    GateConfig,
    expected_yield_asymptotic,
    expected_yield_finite,
    run_photonic_sp,
    schmidt_projectors,
    subspace_probabilities,
    theta_grid,
)
from .lab import (
    OP_CHARACTERIZE,
    OP_DISTILL,
    AnalyzerSetting,
    coincidence_probability,
    sample_counts,
    tomography_acquire,
    tomography_reconstruct,
    tomography_to_json_dict,
    visibility_scan,
    write_counts_csv,
)

SCENARIOS = (
    "characterize-input",
    "distill",
    "tomography",
    "visibility",
    "efficiency-curve",
    "n-pair",
)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    theta_p: float = 45.0
    theta_m: float = 45.0
    phi: float = 0.0
    gate_coherence: float = 1.0
    pair_rate: float = 1000.0
    trials: int = 60
    duration_s: float = 1.0
    seed: int = 0
    n: int = 2
    output_dir: str = "."


# everything echoed into the report; output_dir is deliberately left out so
# identical configs byte-reproduce no matter where the files land
_ECHO_FIELDS = (
    "scenario", "theta_p", "theta_m", "phi", "gate_coherence",
    "pair_rate", "trials", "duration_s", "seed", "n",
)

_KNOWN_KEYS = tuple(f.name for f in dataclasses.fields(ExperimentConfig))


def _as_number(raw, key, problems):
    """Pull a finite number out of the raw dict, or record why not."""
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{key} must be a number, got {value!r}")
        return None
    if not math.isfinite(value):
        problems.append(f"{key} must be finite, got {value!r}")
        return None
    return float(value)


def _as_int(raw, key, problems):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{key} must be an integer, got {value!r}")
        return None
    return value


def validate_config(raw: dict) -> list:
    """Every violated constraint as one message; an empty list means valid.

    Never raises, whatever the input types are.
    """
    problems = []
    if not isinstance(raw, dict):
        return ["config must be a JSON object"]
    for key in raw:
        if key not in _KNOWN_KEYS:
            msg = f"unknown config key {key!r}"
            if isinstance(key, str) and key.lower().startswith("temp"):
                msg += "; angles are set directly, use theta_m (degrees)"
            problems.append(msg)
    scenario = raw.get("scenario")
    if scenario is None:
        problems.append(f"scenario is required; one of {', '.join(SCENARIOS)}")
    elif scenario not in SCENARIOS:
        problems.append(f"unknown scenario {scenario!r}; one of {', '.join(SCENARIOS)}")
    for key in ("theta_p", "theta_m"):
        if key in raw:
            v = _as_number(raw, key, problems)
            if v is not None and not 0.0 <= v <= 90.0:
                problems.append(f"{key} must lie in [0, 90] degrees, got {v}")
    if "phi" in raw:
        _as_number(raw, "phi", problems)
    if "gate_coherence" in raw:
        v = _as_number(raw, "gate_coherence", problems)
        if v is not None and not 0.0 <= v <= 1.0:
            problems.append(f"gate_coherence must lie in [0, 1], got {v}")
    if "pair_rate" in raw:
        v = _as_number(raw, "pair_rate", problems)
        if v is not None and v < 0.0:
            problems.append(f"pair_rate must be nonnegative, got {v}")
    if "trials" in raw:
        v = _as_int(raw, "trials", problems)
        if v is not None and v < 1:
            problems.append(f"trials must be at least 1, got {v}")
    if "duration_s" in raw:
        v = _as_number(raw, "duration_s", problems)
        if v is not None and v <= 0.0:
            problems.append(f"duration_s must be positive, got {v}")
    if "seed" in raw:
        v = _as_int(raw, "seed", problems)
        if v is not None and v < 0:
            problems.append(f"seed must be nonnegative, got {v}")
    if "n" in raw:
        v = _as_int(raw, "n", problems)
        if v is not None and not 1 <= v <= MAX_PAIRS:
            problems.append(f"n must lie in 1..{MAX_PAIRS}, got {v}")
    if "output_dir" in raw and not isinstance(raw["output_dir"], str):
        problems.append(f"output_dir must be a string path, got {raw['output_dir']!r}")
    return problems


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a config from a validated dict, filling defaults."""
    kwargs = {k: raw[k] for k in _KNOWN_KEYS if k in raw}
    return ExperimentConfig(**kwargs)


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _clip(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


def _run_circuit(cfg: ExperimentConfig, ideal: bool):
    source = SourceSetting(float(cfg.theta_p), float(cfg.theta_m), float(cfg.phi))
    coherence = 1.0 if ideal else float(cfg.gate_coherence)
    outcome = run_photonic_sp(make_hyperentangled(source), GateConfig(gate_coherence=coherence))
    if outcome.success_probability <= 0.0:
        raise ArithmeticError(
            f"distillation succeeds with probability zero at "
            f"theta_p={cfg.theta_p}, theta_m={cfg.theta_m}"
        )
    return outcome


def _scenario_distill(cfg, ideal, out):
    outcome = _run_circuit(cfg, ideal)
    rate_scale = float(cfg.pair_rate) * outcome.success_probability
    names = ("H", "V")
    rates = {}
    records = []
    prob_rows = []
    for idx, (na, nb) in enumerate((a, b) for a in names for b in names):
        a = AnalyzerSetting.canonical("A", na)
        b = AnalyzerSetting.canonical("B", nb)
        p = _clip(coincidence_probability(outcome.output, a, b))
        if ideal:
            rates[(na, nb)] = p * rate_scale
            prob_rows.append([na, nb, p, p * rate_scale])
        else:
            rec = sample_counts(
                p * outcome.success_probability, float(cfg.pair_rate),
                trials=cfg.trials, duration_s=float(cfg.duration_s), seed=cfg.seed,
                op_id=OP_DISTILL, setting_index=idx, setting_a=na, setting_b=nb,
            )
            records.append(rec)
            rates[(na, nb)] = rec.mean_rate
    if ideal:
        _write_csv(out / "coincidence_probabilities.csv",
                   ("setting_a", "setting_b", "probability", "expected_rate"), prob_rows)
    else:
        write_counts_csv(out / "counts.csv", records)
    if rates[("V", "V")] <= 0.0:
        raise ArithmeticError("no V,V coincidences, the H,H/V,V ratio is undefined")
    return {
        "success_probability": outcome.success_probability,
        "extracted_ebits": outcome.extracted_ebits,
        "rate_hh": rates[("H", "H")],
        "rate_hv": rates[("H", "V")],
        "rate_vh": rates[("V", "H")],
        "rate_vv": rates[("V", "V")],
        "ratio_hh_vv": rates[("H", "H")] / rates[("V", "V")],
        "fidelity_to_triplet": fidelity_to_pure(outcome.output, polarization_triplet()),
    }


def _scenario_tomography(cfg, ideal, out):
    outcome = _run_circuit(cfg, ideal)
    out_rate = float(cfg.pair_rate) * outcome.success_probability
    records = tomography_acquire(
        outcome.output, pair_rate=out_rate, seed=cfg.seed, trials=cfg.trials,
        duration_s=float(cfg.duration_s), ideal=ideal,
    )
    result = tomography_reconstruct(records, target=polarization_triplet())
    doc = tomography_to_json_dict(result)
    (out / "tomography.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if ideal:
        rows = [[r.setting_a, r.setting_b,
                 r.expected_rate / out_rate if out_rate > 0 else 0.0,
                 r.expected_rate] for r in records]
        _write_csv(out / "coincidence_probabilities.csv",
                   ("setting_a", "setting_b", "probability", "expected_rate"), rows)
    else:
        write_counts_csv(out / "counts.csv", records)
    return {
        "success_probability": outcome.success_probability,
        "fidelity_to_triplet": result.fidelity_to_target,
        "method": result.method,
    }


def _scenario_visibility(cfg, ideal, out):
    outcome = _run_circuit(cfg, ideal)
    scan = visibility_scan(
        outcome.output, basis="diagonal", points=16,
        pair_rate=float(cfg.pair_rate) * outcome.success_probability,
        trials=cfg.trials, duration_s=float(cfg.duration_s), seed=cfg.seed, ideal=ideal,
    )
    rows = [[h, rec.expected_rate, rec.mean_rate]
            for h, rec in zip(scan.hwp_b_deg, scan.records)]
    _write_csv(out / "visibility_curve.csv", ("hwp_b_deg", "expected_rate", "mean_rate"), rows)
    if not ideal:
        write_counts_csv(out / "counts.csv", scan.records)
    return {
        "success_probability": outcome.success_probability,
        "visibility": float(scan.visibility.value),
        "c_max": float(scan.visibility.c_max),
        "c_min": float(scan.visibility.c_min),
    }


def _scenario_efficiency(cfg, ideal, out):
    rows = []
    for theta in theta_grid():
        rows.append([
            theta,
            expected_yield_asymptotic(theta, 1),
            expected_yield_finite(theta, cfg.n),
            expected_yield_asymptotic(theta, cfg.n),
        ])
    _write_csv(out / "efficiency_curve.csv",
               ("theta_deg", "entanglement_ebits", "yield_finite_ebits",
                "yield_asymptotic_ebits"), rows)
    return {"n": cfg.n, "rows": len(rows)}


def _scenario_n_pair(cfg, ideal, out):
    theta = float(cfg.theta_p)
    probs = subspace_probabilities(theta, cfg.n)
    rows = [[s.k, s.dimension, float(probs[s.k]), math.log2(s.dimension)]
            for s in schmidt_projectors(cfg.n)]
    _write_csv(out / "subspaces.csv", ("k", "dimension", "probability", "ebits"), rows)
    return {
        "n": cfg.n,
        "theta_deg": theta,
        "yield_finite_ebits": expected_yield_finite(theta, cfg.n),
        "yield_asymptotic_ebits": expected_yield_asymptotic(theta, cfg.n),
    }


def _probe_counts(theta_p, theta_m, cfg, ideal, probe_index):
    """H,H and V,V counts of the circuit output for one probe setting."""
    probe = replace(cfg, theta_p=theta_p, theta_m=theta_m)
    outcome = _run_circuit(probe, ideal)
    counts = []
    for s_idx, name in enumerate(("H", "V")):
        a = AnalyzerSetting.canonical("A", name)
        b = AnalyzerSetting.canonical("B", name)
        p = _clip(coincidence_probability(outcome.output, a, b))
        if ideal:
            counts.append(p * outcome.success_probability * float(cfg.pair_rate))
        else:
            rec = sample_counts(
                p * outcome.success_probability, float(cfg.pair_rate),
                trials=cfg.trials, duration_s=float(cfg.duration_s), seed=cfg.seed,
                op_id=OP_CHARACTERIZE, setting_index=probe_index * 2 + s_idx,
                setting_a=name, setting_b=name,
            )
            counts.append(rec.total)
    return counts


def _scenario_characterize(cfg, ideal, out):
    angles = sorted(set(EXPERIMENTAL_ANGLES) | {float(cfg.theta_m), float(cfg.theta_p)})
    rows = []
    worst = 0.0
    for idx, theta in enumerate(angles):
        if theta >= 90.0 - 1e-12:
            raise ArithmeticError(
                f"tan^2 is undefined at theta={theta} degrees, characterization "
                "needs theta below 90"
            )
        m_hh, m_vv = _probe_counts(45.0, theta, cfg, ideal, probe_index=2 * idx)
        p_hh, p_vv = _probe_counts(theta, 45.0, cfg, ideal, probe_index=2 * idx + 1)
        if m_vv <= 0 or p_hh <= 0:
            raise ArithmeticError(
                f"coincidence ratio undefined at theta={theta}: zero reference counts"
            )
        tan2_m = m_hh / m_vv
        tan2_p = p_vv / p_hh
        exact = math.tan(math.radians(theta)) ** 2
        rows.append([theta, exact, tan2_m, m_hh, m_vv, tan2_p, p_hh, p_vv])
        worst = max(worst, abs(tan2_m - exact), abs(tan2_p - exact))
    _write_csv(out / "input_characterization.csv",
               ("theta_deg", "tan2_theta", "tan2_theta_m", "m_counts_hh", "m_counts_vv",
                "tan2_theta_p", "p_counts_hh", "p_counts_vv"), rows)
    return {"angles": [float(a) for a in angles], "max_abs_tan2_error": worst}


_SCENARIO_RUNNERS = {
    "characterize-input": _scenario_characterize,
    "distill": _scenario_distill,
    "tomography": _scenario_tomography,
    "visibility": _scenario_visibility,
    "efficiency-curve": _scenario_efficiency,
    "n-pair": _scenario_n_pair,
}


def run(cfg: ExperimentConfig, ideal: bool = False, out_dir=None) -> dict:
    """Execute one scenario; returns the report dict after writing all files."""
    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = _SCENARIO_RUNNERS[cfg.scenario](cfg, ideal, out)
    report = {
        "scenario": cfg.scenario,
        "config": {k: getattr(cfg, k) for k in _ECHO_FIELDS},
        "provenance": {"seed": cfg.seed, "version": __version__, "ideal": bool(ideal)},
        "results": results,
    }
    (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return report


def _load_raw_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        return None, [f"cannot read config file: {exc}"]
    except json.JSONDecodeError as exc:
        return None, [f"config is not valid JSON: {exc}"]
    if not isinstance(raw, dict):
        return None, ["config must be a JSON object"]
    return raw, []


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="spdistill",
        description="Photonic entanglement distillation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario described by a JSON config")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--out", default=None, help="output directory override")
    p_run.add_argument("--seed", type=int, default=None, help="seed override")
    p_run.add_argument("--ideal", action="store_true",
                       help="noise-free probability-level outputs (gate_coherence forced to 1)")
    p_val = sub.add_parser("validate", help="check a JSON config without running it")
    p_val.add_argument("config", help="path to the JSON config")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    raw, problems = _load_raw_config(args.config)
    if not problems:
        problems = validate_config(raw)
    if args.command == "validate":
        if problems:
            for p in problems:
                print(f"invalid: {p}")
            return 2
        print("config valid")
        return 0
    if getattr(args, "seed", None) is not None and args.seed < 0:
        problems.append(f"seed must be nonnegative, got {args.seed}")
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return 2
    cfg = config_from_dict(raw)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    try:
        report = run(cfg, ideal=args.ideal, out_dir=args.out)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out = Path(args.out if args.out is not None else cfg.output_dir)
    print(f"scenario {cfg.scenario}: report written to {out / 'report.json'}")
    for key, value in sorted(report["results"].items()):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            print(f"  {key} = {value}")
    return 0
