"""Lower sign matrices to schedules of single-qubit Pauli conjugations
interleaved with free evolution, and merge adjacent gate layers.

A schedule is a sequence of steps: a gate layer is a string over I/X/Y/Z
(one character per qubit), a free-evolution interval is None.  Raw compiled
schedules carry the conjugating layer before and after every interval;
simplification multiplies adjacent layers (Pauli product with global phase
discarded, which is safe because the gates act purely by conjugation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

from .schemes import SignMatrix, SignTriple

Step = str | None

# phaseless single-qubit Pauli products
_PAULIS = "IXYZ"
_PRODUCT: dict[tuple[str, str], str] = {}
for _a in _PAULIS:
    for _b in _PAULIS:
        if _a == "I":
            _PRODUCT[(_a, _b)] = _b
        elif _b == "I":
            _PRODUCT[(_a, _b)] = _a
        elif _a == _b:
            _PRODUCT[(_a, _b)] = "I"
        else:
            _PRODUCT[(_a, _b)] = next(c for c in "XYZ" if c not in (_a, _b))

# gate realizing a sign column (s_x, s_y, s_z)
_GATE_FOR_SIGNS = {
    (1, 1, 1): "I",
    (1, -1, -1): "X",
    (-1, 1, -1): "Y",
    (-1, -1, 1): "Z",
}


@dataclass(frozen=True)
class PulseSchedule:
    qubits: int
    tau: float
    steps: tuple[Step, ...]

    def __post_init__(self):
        for s in self.steps:
            if s is not None and (len(s) != self.qubits or set(s) - set(_PAULIS)):
                raise ValueError(f"bad gate layer {s!r}")

    @property
    def total_intervals(self) -> int:
        return sum(1 for s in self.steps if s is None)

    @property
    def layers(self) -> list[str]:
        return [s for s in self.steps if s is not None]


def _merge_layers(a: str, b: str) -> str:
    return "".join(_PRODUCT[(x, y)] for x, y in zip(a, b))


def compile_zz(s: SignMatrix, tau: float = 1.0, merged: bool = True) -> PulseSchedule:
    """A '-' entry at (i, a) puts X on qubit i before and after interval a."""
    n, m = s.qubits, s.intervals
    layers = ["".join("X" if s.entries[q, a] == -1 else "I" for q in range(n))
              for a in range(m)]
    steps: list[Step] = []
    for a in range(m):
        steps.append(layers[a])
        steps.append(None)
        steps.append(layers[a])
    raw = PulseSchedule(n, tau, tuple(steps))
    return simplify(raw) if merged else raw


def compile_general(t: SignTriple, tau: float = 1.0, merged: bool = True) -> PulseSchedule:
    """Sign column (+,+,+)/(+,-,-)/(-,+,-)/(-,-,+) maps to I/X/Y/Z conjugation."""
    n, m = t.qubits, t.intervals
    layers = []
    for a in range(m):
        chars = []
        for q in range(n):
            signs = (int(t.sx.entries[q, a]), int(t.sy.entries[q, a]),
                     int(t.sz.entries[q, a]))
            gate = _GATE_FOR_SIGNS.get(signs)
            if gate is None:
                raise ValueError(f"sign column {signs} at qubit {q}, interval {a} "
                                 "is not realizable (corrupted input)")
            chars.append(gate)
        layers.append("".join(chars))
    steps: list[Step] = []
    for a in range(m):
        steps.append(layers[a])
        steps.append(None)
        steps.append(layers[a])
    raw = PulseSchedule(n, tau, tuple(steps))
    return simplify(raw) if merged else raw


def simplify(p: PulseSchedule) -> PulseSchedule:
    """Merge adjacent gate layers; keep explicit (possibly identity) boundary
    layers and exactly one layer between consecutive intervals."""
    idle = "I" * p.qubits
    steps: list[Step] = []
    pending = idle
    for s in p.steps:
        if s is None:
            steps.append(pending)
            steps.append(None)
            pending = idle
        else:
            pending = _merge_layers(pending, s)
    steps.append(pending)
    return PulseSchedule(p.qubits, p.tau, tuple(steps))


def gate_count(p: PulseSchedule) -> int:
    """Non-identity gate entries across all layers (at most n*(m+1))."""
    return sum(c != "I" for layer in p.layers for c in layer)


# ---------------------------------------------------------------------------
# Schedule text format: header "pulses n=<n> m=<m> tau=<tau>", then lines
# "G <layer>" and "F <tau>".

def write_schedule(p: PulseSchedule, stream: IO[str]) -> None:
    stream.write(f"pulses n={p.qubits} m={p.total_intervals} tau={p.tau!r}\n")
    for s in p.steps:
        if s is None:
            stream.write(f"F {p.tau!r}\n")
        else:
            stream.write(f"G {s}\n")


def read_schedule(stream: IO[str]) -> PulseSchedule:
    header = stream.readline().split()
    if not header or header[0] != "pulses":
        raise ValueError("schedule file must start with 'pulses ...'")
    fields = dict(part.split("=", 1) for part in header[1:])
    n = int(fields["n"])
    tau = float(fields["tau"])
    steps: list[Step] = []
    for line in stream:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "G" and len(parts) == 2:
            steps.append(parts[1])
        elif parts[0] == "G" and len(parts) == 1:
            steps.append("")
        elif parts[0] == "F":
            steps.append(None)
        else:
            raise ValueError(f"bad schedule line {line!r}")
    p = PulseSchedule(n, tau, tuple(steps))
    if p.total_intervals != int(fields["m"]):
        raise ValueError("schedule header interval count mismatch")
    return p
