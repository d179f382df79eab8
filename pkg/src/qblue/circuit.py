"""Gate-list circuits with a global-phase accumulator.

Supported gates: h, s, sdg, cx, rx, ry, rz (half-angle rotation convention,
e.g. rz(t) = diag(e^{-it/2}, e^{it/2})).  Circuits convert to dense
unitaries for verification and serialize to a line-oriented text format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionCapError

WIDTH_CAP = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_SDG = np.diag([1, -1j]).astype(complex)


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)]).astype(complex)


GATE_NAMES = ("h", "s", "sdg", "cx", "rx", "ry", "rz")
_ROTATIONS = ("rx", "ry", "rz")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple          # (q,) or (control, target)
    angle: float | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        if self.name == "cx":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"cx needs two distinct qubits, got {self.qubits}")
        elif len(self.qubits) != 1:
            raise ValueError(f"{self.name} acts on one qubit, got {self.qubits}")
        if (self.angle is None) == (self.name in _ROTATIONS):
            raise ValueError(f"gate {self.name} angle mismatch")


def h(q):
    return Gate("h", (q,))


def s(q):
    return Gate("s", (q,))


def sdg(q):
    return Gate("sdg", (q,))


def cx(control, target):
    return Gate("cx", (control, target))


def rx(angle, q):
    return Gate("rx", (q,), float(angle))


def ry(angle, q):
    return Gate("ry", (q,), float(angle))


def rz(angle, q):
    return Gate("rz", (q,), float(angle))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple = ()
    global_phase: float = 0.0

    def __post_init__(self):
        for g in self.gates:
            if any(not 0 <= q < self.width for q in g.qubits):
                raise ValueError(f"gate {g} out of range for width {self.width}")

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.width != other.width:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.width, self.gates + other.gates,
                       self.global_phase + other.global_phase)

    def __len__(self):
        return len(self.gates)


def _embed_single(mat, q, width):
    out = np.ones((1, 1), dtype=complex)
    for i in range(width):
        out = np.kron(out, mat if i == q else np.eye(2))
    return out


def _cx_matrix(control, target, width):
    dim = 2 ** width
    m = np.zeros((dim, dim), dtype=complex)
    cbit = width - 1 - control
    tbit = width - 1 - target
    for i in range(dim):
        j = i ^ (1 << tbit) if (i >> cbit) & 1 else i
        m[j, i] = 1
    return m


def gate_matrix(g: Gate, width: int) -> np.ndarray:
    if g.name == "cx":
        return _cx_matrix(g.qubits[0], g.qubits[1], width)
    single = {"h": _H, "s": _S, "sdg": _SDG}.get(g.name)
    if single is None:
        single = {"rx": _rx, "ry": _ry, "rz": _rz}[g.name](g.angle)
    return _embed_single(single, g.qubits[0], width)


def circuit_to_matrix(c: Circuit) -> np.ndarray:
    """Product of the gate matrices in application order, times the phase."""
    if c.width > WIDTH_CAP:
        raise DimensionCapError(f"width {c.width} exceeds cap {WIDTH_CAP}")
    u = np.eye(2 ** c.width, dtype=complex)
    for g in c.gates:
        u = gate_matrix(g, c.width) @ u
    return np.exp(1j * c.global_phase) * u


# ---------------------------------------------------------------------------
# Text format:
#   qubits 3; phase 0.0;
#   cx 0 1
#   rz 0.125 1
# ---------------------------------------------------------------------------

def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.width}; phase {c.global_phase!r};"]
    for g in c.gates:
        if g.angle is not None:
            lines.append(f"{g.name} {g.angle!r} {g.qubits[0]}")
        else:
            lines.append(f"{g.name} " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits"):
        raise ValueError("circuit text must start with a 'qubits N; phase P;' header")
    head = lines[0].replace(";", " ").split()
    width = int(head[1])
    phase = float(head[3]) if len(head) > 3 else 0.0
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        name = parts[0]
        if name in _ROTATIONS:
            gates.append(Gate(name, (int(parts[2]),), float(parts[1])))
        elif name == "cx":
            gates.append(Gate(name, (int(parts[1]), int(parts[2]))))
        else:
            gates.append(Gate(name, (int(parts[1]),)))
    return Circuit(width, tuple(gates), phase)
