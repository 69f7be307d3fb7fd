"""One pass through the single-photon distillation circuit.

Each photon carries a polarization qubit and a momentum qubit, and the
source entangles both degrees of freedom with the same angle.  Local
two-qubit gates inside each photon, plus a polarizing beam splitter,
project the four-qubit state onto its equal-coefficient component.  When
the projection succeeds the surviving polarization pair is maximally
entangled no matter how weakly entangled the input was; the price is a
success probability 2 cos^2 t sin^2 t that drops as the input weakens.
"""

import math

from spdistill import (
    EXPERIMENTAL_ANGLES,
    GateConfig,
    SourceSetting,
    concurrence,
    entanglement_of_formation,
    entropy_of_entanglement,
    fidelity_to_pure,
    make_hyperentangled,
    polarization_triplet,
    run_photonic_sp,
)
from spdistill.registers import pol


def main():
    target = polarization_triplet()
    print("ideal gates")
    print(f"{'theta':>7} {'p(success)':>12} {'fidelity':>10} {'entropy out':>12}")
    for theta in EXPERIMENTAL_ANGLES + (45.0,):
        source = SourceSetting(theta_p=theta, theta_m=theta)
        outcome = run_photonic_sp(make_hyperentangled(source))
        f = float(fidelity_to_pure(outcome.output, target))
        e = float(entropy_of_entanglement(outcome.output, (pol("A"),)))
        t = math.radians(theta)
        expect = 2.0 * math.cos(t) ** 2 * math.sin(t) ** 2
        assert abs(outcome.success_probability - expect) < 1e-12
        print(f"{theta:7.1f} {outcome.success_probability:12.6f} {f:10.6f} {e:12.6f}")

    # a lossy polarization gate shows up as reduced coherence of the output
    print("\ngate coherence swept at theta = 41.9")
    print(f"{'coherence':>10} {'fidelity':>10} {'concurrence':>12} {'EOF (ebits)':>12}")
    for v in (1.0, 0.93, 0.90, 0.5, 0.0):
        source = SourceSetting(41.9, 41.9)
        outcome = run_photonic_sp(make_hyperentangled(source), GateConfig(gate_coherence=v))
        f = float(fidelity_to_pure(outcome.output, target))
        c = float(concurrence(outcome.output))
        eof = float(entanglement_of_formation(outcome.output))
        print(f"{v:10.2f} {f:10.6f} {c:12.6f} {eof:12.6f}")
        assert abs(f - (1.0 + v) / 2.0) < 1e-12
        assert abs(c - v) < 1e-12


if __name__ == "__main__":
    main()
