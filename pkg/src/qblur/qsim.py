"""Dense statevector simulation for small qubit counts.

States are 1-D numpy arrays of 2^n complex128 amplitudes; the amplitude at
index i belongs to the basis bit string format(i, '0nb'), so qubit q is the
bit of value 2^q.  Gate kernels update strided amplitude pairs in place,
O(2^n) per single-qubit gate.

A state is exclusively owned while gates are applied to it; finished states
should be treated as immutable.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_MAX_QUBITS = 22
MAX_QUBITS_ENV = "QBLUR_MAX_QUBITS"
PROBABILITY_PRUNE = 1e-15

_run_count = 0


class CapacityError(Exception):
    """A requested state would exceed the configured qubit cap."""


def max_qubits() -> int:
    """Current qubit capacity cap (default 22, overridable via QBLUR_MAX_QUBITS)."""
    raw = os.environ.get(MAX_QUBITS_ENV)
    if raw:
        return int(raw)
    return DEFAULT_MAX_QUBITS


@dataclass(frozen=True)
class Gate:
    """One circuit operation: kind in {'rx','ry','cx','swap','fswap'}.

    `param` is the rotation angle in radians for rx/ry and the swap fraction
    for fswap; for cx, qubits are (control, target).
    """

    kind: str
    qubits: tuple[int, ...]
    param: float = 0.0


def _check_qubits(qubits: tuple[int, ...]) -> None:
    if any(q < 0 for q in qubits):
        raise ValueError(f"qubit indices must be non-negative, got {qubits}")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices within a gate must be distinct, got {qubits}")


def rx(theta: float, qubit: int) -> Gate:
    _check_qubits((qubit,))
    return Gate("rx", (qubit,), float(theta))


def ry(theta: float, qubit: int) -> Gate:
    _check_qubits((qubit,))
    return Gate("ry", (qubit,), float(theta))


def cx(control: int, target: int) -> Gate:
    _check_qubits((control, target))
    return Gate("cx", (control, target))


def swap(a: int, b: int) -> Gate:
    _check_qubits((a, b))
    return Gate("swap", (a, b))


def fswap(fraction: float, a: int, b: int) -> Gate:
    """Fractional SWAP: identity at fraction 0, full SWAP at fraction 1.

    Any real fraction is accepted; fswap(f) followed by fswap(-f) (or
    fswap(2 - f)) is the identity.
    """
    _check_qubits((a, b))
    return Gate("fswap", (a, b), float(fraction))


@dataclass
class Circuit:
    """An ordered gate list over `qubit_count` qubits, with an optional initial state."""

    qubit_count: int
    initial_state: np.ndarray | None = None
    gates: list[Gate] = field(default_factory=list)

    def initialize(self, amplitudes) -> "Circuit":
        """Set the starting state; must have 2^n entries of unit norm (within 1e-9)."""
        state = np.asarray(amplitudes, dtype=np.complex128).copy()
        if state.shape != (1 << self.qubit_count,):
            raise ValueError(
                f"initial state needs {1 << self.qubit_count} amplitudes, got {state.shape}"
            )
        norm = np.linalg.norm(state)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"initial state norm is {norm}, expected 1")
        self.initial_state = state
        return self

    def append(self, gate: Gate) -> "Circuit":
        self.gates.append(gate)
        return self

    def rx(self, theta: float, qubit: int) -> "Circuit":
        return self.append(rx(theta, qubit))

    def ry(self, theta: float, qubit: int) -> "Circuit":
        return self.append(ry(theta, qubit))

    def cx(self, control: int, target: int) -> "Circuit":
        return self.append(cx(control, target))

    def swap(self, a: int, b: int) -> "Circuit":
        return self.append(swap(a, b))

    def fswap(self, fraction: float, a: int, b: int) -> "Circuit":
        return self.append(fswap(fraction, a, b))


def zero_state(n: int) -> np.ndarray:
    """The |00...0> state on n qubits: amplitude 1 at index 0."""
    cap = max_qubits()
    if n < 1:
        raise CapacityError(f"qubit count must be at least 1, got {n}")
    if n > cap:
        raise CapacityError(f"{n} qubits exceeds the capacity cap of {cap}")
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    return state


def _qubit_count(state: np.ndarray) -> int:
    return int(state.size).bit_length() - 1


def _rx_matrix(theta: float) -> np.ndarray:
    # Carries a global phase i relative to the exp(-i theta X / 2) convention.
    c, s = 1j * math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [s, c]], dtype=np.complex128)


def _ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _apply_single(state: np.ndarray, u: np.ndarray, qubit: int) -> None:
    n = _qubit_count(state)
    view = state.reshape(1 << (n - 1 - qubit), 2, 1 << qubit)
    a0 = view[:, 0, :].copy()
    view[:, 0, :] = u[0, 0] * a0 + u[0, 1] * view[:, 1, :]
    view[:, 1, :] = u[1, 0] * a0 + u[1, 1] * view[:, 1, :]


def _pair_view(state: np.ndarray, hi: int, lo: int) -> np.ndarray:
    # view[block, bit_hi, mid, bit_lo, low] spans the whole state
    n = _qubit_count(state)
    return state.reshape(
        1 << (n - 1 - hi), 2, 1 << (hi - lo - 1), 2, 1 << lo
    )


def _apply_cx(state: np.ndarray, control: int, target: int) -> None:
    hi, lo = max(control, target), min(control, target)
    view = _pair_view(state, hi, lo)
    if control == hi:
        a, b = view[:, 1, :, 0, :], view[:, 1, :, 1, :]
    else:
        a, b = view[:, 0, :, 1, :], view[:, 1, :, 1, :]
    tmp = a.copy()
    a[...] = b
    b[...] = tmp


def _apply_swap(state: np.ndarray, qa: int, qb: int) -> None:
    view = _pair_view(state, max(qa, qb), min(qa, qb))
    tmp = view[:, 0, :, 1, :].copy()
    view[:, 0, :, 1, :] = view[:, 1, :, 0, :]
    view[:, 1, :, 0, :] = tmp


def _apply_fswap(state: np.ndarray, fraction: float, qa: int, qb: int) -> None:
    # Identity on the symmetric pair states; on the {01, 10} subspace the
    # antisymmetric component picks up a phase of exp(i*pi*fraction).
    phase = cmath.exp(1j * math.pi * fraction)
    diag = (1 + phase) / 2
    off = (1 - phase) / 2
    view = _pair_view(state, max(qa, qb), min(qa, qb))
    s01 = view[:, 0, :, 1, :].copy()
    s10 = view[:, 1, :, 0, :]
    view[:, 0, :, 1, :] = diag * s01 + off * s10
    view[:, 1, :, 0, :] = off * s01 + diag * s10


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply one gate to `state` in place and return it."""
    n = _qubit_count(state)
    if any(q >= n for q in gate.qubits):
        raise ValueError(f"gate {gate.kind} on {gate.qubits} exceeds {n} qubits")
    if gate.kind == "rx":
        _apply_single(state, _rx_matrix(gate.param), gate.qubits[0])
    elif gate.kind == "ry":
        _apply_single(state, _ry_matrix(gate.param), gate.qubits[0])
    elif gate.kind == "cx":
        _apply_cx(state, *gate.qubits)
    elif gate.kind == "swap":
        _apply_swap(state, *gate.qubits)
    elif gate.kind == "fswap":
        _apply_fswap(state, gate.param, *gate.qubits)
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return state


def run(circuit: Circuit) -> np.ndarray:
    """Evolve the circuit's initial state (default |0...0>) through all gates."""
    global _run_count
    _run_count += 1
    if circuit.initial_state is not None:
        cap = max_qubits()
        if circuit.qubit_count > cap:
            raise CapacityError(
                f"{circuit.qubit_count} qubits exceeds the capacity cap of {cap}"
            )
        state = circuit.initial_state.astype(np.complex128, copy=True)
    else:
        state = zero_state(circuit.qubit_count)
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def run_count() -> int:
    """Total number of run() invocations in this process (simulation counter)."""
    return _run_count


def probabilities(state: np.ndarray, *, prune: float = PROBABILITY_PRUNE) -> dict[str, float]:
    """Measurement distribution as {bit string: probability}, omitting values <= prune."""
    n = _qubit_count(state)
    p = state.real**2 + state.imag**2
    return {format(i, f"0{n}b"): float(p[i]) for i in np.flatnonzero(p > prune)}


def sample_counts(state: np.ndarray, shots: int, seed=None) -> dict[str, int]:
    """Histogram of `shots` measurement samples; deterministic for a fixed seed."""
    if shots < 1:
        raise ValueError(f"shots must be at least 1, got {shots}")
    n = _qubit_count(state)
    p = state.real**2 + state.imag**2
    p /= p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    return {format(i, f"0{n}b"): int(counts[i]) for i in np.flatnonzero(counts)}
