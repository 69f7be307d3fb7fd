"""Qubit labels and register bookkeeping.

A register is an ordered tuple of distinct qubit labels.  Basis index i of an
n-qubit register is read MSB-first: bit j of i is the computational value of
labels[j].  The computational basis is tied to the physical carriers as

    0  =  H (horizontal pol.)  =  L (left path)   =  U (up path)
    1  =  V (vertical pol.)    =  R (right path)  =  D (down path)

Two register families are used.  The photonic experiment works on the four
qubits (A,pol), (A,mom), (B,pol), (B,mom), in that canonical order.  Abstract
n-pair protocols label qubits (party, pair_index) and order them
A1..An, B1..Bn.
"""

from __future__ import annotations

from dataclasses import dataclass

PARTIES = ("A", "B")
POL = "pol"
MOM = "mom"

CHAR_TO_BIT = {"H": 0, "V": 1, "L": 0, "R": 1, "U": 0, "D": 1}
POL_CHARS = "HV"
MOM_CHARS = "LR"


class LabelCollisionError(ValueError):
    """Raised when the same (party, dof) qubit would appear twice."""


def _dof_rank(dof):
    if dof == POL:
        return 0
    if dof == MOM:
        return 1
    return int(dof) + 1


@dataclass(frozen=True)
class QubitLabel:
    """One qubit: the party holding it and the degree of freedom carrying it.

    party is "A" or "B".  dof is "pol" or "mom" for photonic registers, or a
    positive integer pair index for abstract n-pair registers.
    """

    party: str
    dof: str | int

    def __post_init__(self):
        if self.party not in PARTIES:
            raise ValueError(f"party must be one of {PARTIES}, got {self.party!r}")
        if self.dof not in (POL, MOM) and not (isinstance(self.dof, int) and self.dof >= 1):
            raise ValueError(
                f"dof must be 'pol', 'mom' or a positive pair index, got {self.dof!r}"
            )

    @property
    def sort_key(self) -> tuple[str, int]:
        return (self.party, _dof_rank(self.dof))

    def __repr__(self) -> str:
        return f"{self.party}:{self.dof}"


@dataclass(frozen=True)
class QubitRegister:
    """Ordered collection of distinct qubit labels."""

    labels: tuple[QubitLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        seen = set()
        for q in self.labels:
            if q in seen:
                raise LabelCollisionError(f"duplicate qubit label {q!r}")
            seen.add(q)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 1 << len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def index_of(self, label: QubitLabel) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"label {label!r} not in register {self.labels}") from None

    def canonical(self) -> "QubitRegister":
        """Same labels sorted party-major: A before B, pol before mom, pairs by index."""
        return QubitRegister(tuple(sorted(self.labels, key=lambda q: q.sort_key)))

    def bits_of(self, index: int) -> tuple[int, ...]:
        n = self.size
        return tuple((index >> (n - 1 - j)) & 1 for j in range(n))

    def index_for(self, bits) -> int:
        idx = 0
        for b in bits:
            idx = (idx << 1) | int(b)
        return idx


def pol(party: str) -> QubitLabel:
    return QubitLabel(party, POL)


def mom(party: str) -> QubitLabel:
    return QubitLabel(party, MOM)


def photon_register() -> QubitRegister:
    """The four-qubit experimental register (A,pol),(A,mom),(B,pol),(B,mom)."""
    return QubitRegister((pol("A"), mom("A"), pol("B"), mom("B")))


def polarization_register() -> QubitRegister:
    """Two-qubit register holding only the polarization pair (A,pol),(B,pol)."""
    return QubitRegister((pol("A"), pol("B")))


def abstract_pair_register(n: int) -> QubitRegister:
    """2n-qubit register A1..An, B1..Bn for abstract n-pair protocols."""
    if n < 1:
        raise ValueError(f"need at least one pair, got n={n}")
    a = tuple(QubitLabel("A", i) for i in range(1, n + 1))
    b = tuple(QubitLabel("B", i) for i in range(1, n + 1))
    return QubitRegister(a + b)


def photonic_index(photon_a: str, photon_b: str) -> int:
    """Basis index of |pol,mom>_A |pol,mom>_B given two-character labels.

    Example: photonic_index("VR", "VR") is the |VR>_A |VR>_B component.  The
    momentum character may use the post-gate aliases U (for 0) and D (for 1).
    """
    chars = photon_a + photon_b
    if len(chars) != 4:
        raise ValueError(f"expected two characters per photon, got {photon_a!r}, {photon_b!r}")
    idx = 0
    for c in chars:
        if c not in CHAR_TO_BIT:
            raise ValueError(f"unknown basis character {c!r}")
        idx = (idx << 1) | CHAR_TO_BIT[c]
    return idx
