"""Encoding height maps as statevectors and decoding them back, plus the
blur, transition, and colour-channel effects built on top.

A height map is a sparse dict {coordinate: value} with values in (0, 1];
absent coordinates mean 0.  Encoding puts amplitude sqrt(value / total) on
the bit string of each coordinate, so measurement probabilities are
proportional to the values.  Decoding keeps only bit strings present in the
mapping and rescales by the maximum kept value, so the result's maximum is
exactly 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qsim
from .bitmapping import Coordinate, GridMapping

HeightMap = dict[Coordinate, float]

DEFAULT_LOG_DECADES = 5.0


class DegenerateOutputError(Exception):
    """Decoding produced no in-box probability mass."""


@dataclass(frozen=True)
class EncodingContext:
    """What a decode needs to know about the matching encode."""

    mapping: GridMapping
    total: float
    qubit_count: int


@dataclass(frozen=True)
class DecodeOptions:
    """How to turn a circuit back into a height map.

    mode 'exact' reads probabilities from the statevector; 'sampled' draws
    `shots` measurement samples (default 4^n) and uses the raw counts, which
    rescale to the same image.  display_transform 'logarithmic' compresses
    `log_decades` decades of value into [0, 1] after rescaling.
    """

    mode: str = "exact"
    shots: int | None = None
    seed: object = None
    display_transform: str = "linear"
    log_decades: float = DEFAULT_LOG_DECADES

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be at least 1, got {self.shots}")
        if self.display_transform not in ("linear", "logarithmic"):
            raise ValueError(
                f"display_transform must be 'linear' or 'logarithmic',"
                f" got {self.display_transform!r}"
            )
        if self.log_decades <= 0:
            raise ValueError(f"log_decades must be positive, got {self.log_decades}")


@dataclass(frozen=True)
class ColorImage:
    """Three height-map channels over the same coordinate box."""

    red: HeightMap
    green: HeightMap
    blue: HeightMap

    def channels(self) -> tuple[HeightMap, HeightMap, HeightMap]:
        return (self.red, self.green, self.blue)


def _encode_amplitudes(height: HeightMap, mapping: GridMapping) -> tuple[np.ndarray, float]:
    if not height:
        raise ValueError("height map is empty")
    n = mapping.qubit_count
    cap = qsim.max_qubits()
    if n > cap:
        raise qsim.CapacityError(f"{n} qubits exceeds the capacity cap of {cap}")
    amplitudes = np.zeros(1 << n, dtype=np.complex128)
    total = 0.0
    for coord, value in height.items():
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"height at {coord} must be finite and non-negative, got {value}")
        if value == 0:
            continue
        bits = mapping.inverse.get(tuple(coord))
        if bits is None:
            raise ValueError(f"coordinate {coord} lies outside the box {mapping.side_lengths}")
        amplitudes[int(bits, 2)] = math.sqrt(value)
        total += value
    if total == 0:
        raise ValueError("height map has no positive values")
    amplitudes /= math.sqrt(total)
    return amplitudes, total


def height_to_circuit(height: HeightMap, mapping: GridMapping) -> tuple[qsim.Circuit, EncodingContext]:
    """Encode a height map as a circuit whose initial state carries it."""
    amplitudes, total = _encode_amplitudes(height, mapping)
    circuit = qsim.Circuit(mapping.qubit_count).initialize(amplitudes)
    return circuit, EncodingContext(mapping, total, mapping.qubit_count)


def apply_log_display(height: HeightMap, decades: float = DEFAULT_LOG_DECADES) -> HeightMap:
    """Compress `decades` decades of value into [0, 1]: v -> 1 + log10(v)/decades.

    Values at or below 10^-decades drop out of the map.
    """
    if decades <= 0:
        raise ValueError(f"decades must be positive, got {decades}")
    out = {}
    for coord, value in height.items():
        shifted = 1.0 + math.log10(value) / decades
        if shifted > 0:
            out[coord] = shifted
    return out


def decode_distribution(
    values: dict[str, float],
    mapping: GridMapping,
    *,
    display_transform: str = "linear",
    log_decades: float = DEFAULT_LOG_DECADES,
) -> HeightMap:
    """Turn a {bit string: weight} map into a height map over the mapping's box.

    Bit strings absent from the mapping are discarded (not renormalised into
    the image); the kept weights are divided by their maximum.
    """
    kept = {}
    forward = mapping.forward
    for bits, value in values.items():
        if value > 0 and bits in forward:
            kept[forward[bits]] = value
    if not kept:
        raise DegenerateOutputError("no probability mass landed inside the coordinate box")
    peak = max(kept.values())
    height = {coord: value / peak for coord, value in kept.items()}
    if display_transform == "logarithmic":
        height = apply_log_display(height, log_decades)
    return height


def _distribution(state: np.ndarray, options: DecodeOptions, qubit_count: int) -> dict[str, float]:
    if options.mode == "exact":
        return qsim.probabilities(state)
    shots = options.shots if options.shots is not None else 4**qubit_count
    return qsim.sample_counts(state, shots, options.seed)


def circuit_to_height(
    circuit: qsim.Circuit,
    context: EncodingContext,
    options: DecodeOptions | None = None,
) -> HeightMap:
    """Run the circuit and decode the output distribution into a height map."""
    if circuit.qubit_count != context.qubit_count:
        raise ValueError(
            f"circuit has {circuit.qubit_count} qubits but the context expects"
            f" {context.qubit_count}"
        )
    options = options or DecodeOptions()
    state = qsim.run(circuit)
    values = _distribution(state, options, context.qubit_count)
    return decode_distribution(
        values,
        context.mapping,
        display_transform=options.display_transform,
        log_decades=options.log_decades,
    )


def blur(
    height: HeightMap,
    theta: float,
    mapping: GridMapping,
    options: DecodeOptions | None = None,
) -> HeightMap:
    """Encode, rotate every qubit by `theta` around Y, and decode."""
    circuit, context = height_to_circuit(height, mapping)
    for qubit in range(context.qubit_count):
        circuit.ry(theta, qubit)
    return circuit_to_height(circuit, context, options)


def blur_color(
    image: ColorImage,
    theta: float,
    mapping: GridMapping,
    options: DecodeOptions | None = None,
) -> ColorImage:
    """Blur each colour channel independently; empty channels pass through."""
    blurred = [
        blur(channel, theta, mapping, options) if channel else {}
        for channel in image.channels()
    ]
    return ColorImage(*blurred)


def _transition_state(
    a: HeightMap, b: HeightMap, fraction: float, mapping: GridMapping
) -> np.ndarray:
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    n = mapping.qubit_count
    cap = qsim.max_qubits()
    if 2 * n > cap:
        raise qsim.CapacityError(
            f"transition needs {2 * n} qubits, exceeding the capacity cap of {cap}"
        )
    amps_a, _ = _encode_amplitudes(a, mapping)
    amps_b, _ = _encode_amplitudes(b, mapping)
    # register A on qubits 0..n-1 (low bits), register B on n..2n-1
    circuit = qsim.Circuit(2 * n).initialize(np.kron(amps_b, amps_a))
    for i in range(n):
        circuit.fswap(fraction, i, n + i)
    return qsim.run(circuit)


def transition_marginals(
    a: HeightMap, b: HeightMap, fraction: float, mapping: GridMapping
) -> tuple[dict[str, float], dict[str, float]]:
    """Exact per-register measurement distributions after a partial swap.

    Both images are encoded into disjoint registers of one circuit, each
    qubit pair is partially swapped by `fraction`, and the joint distribution
    is summed over the other register's bits.
    """
    state = _transition_state(a, b, fraction, mapping)
    n = mapping.qubit_count
    joint = (state.real**2 + state.imag**2).reshape(1 << n, 1 << n)
    marg_a = joint.sum(axis=0)
    marg_b = joint.sum(axis=1)
    fmt = f"0{n}b"
    prune = qsim.PROBABILITY_PRUNE
    dict_a = {format(i, fmt): float(marg_a[i]) for i in np.flatnonzero(marg_a > prune)}
    dict_b = {format(i, fmt): float(marg_b[i]) for i in np.flatnonzero(marg_b > prune)}
    return dict_a, dict_b


def transition(
    a: HeightMap,
    b: HeightMap,
    fraction: float,
    mapping: GridMapping,
    options: DecodeOptions | None = None,
) -> tuple[HeightMap, HeightMap]:
    """Partially swap two encoded images and decode each register separately.

    fraction 0 returns (a, b); fraction 1 returns (b, a); intermediate values
    show the teleportation-like interference between them.
    """
    options = options or DecodeOptions()
    n = mapping.qubit_count
    if options.mode == "exact":
        values_a, values_b = transition_marginals(a, b, fraction, mapping)
    else:
        state = _transition_state(a, b, fraction, mapping)
        shots = options.shots if options.shots is not None else 4 ** (2 * n)
        joint = qsim.sample_counts(state, shots, options.seed)
        values_a: dict[str, float] = {}
        values_b: dict[str, float] = {}
        for bits, count in joint.items():
            values_a[bits[n:]] = values_a.get(bits[n:], 0) + count
            values_b[bits[:n]] = values_b.get(bits[:n], 0) + count
    def decode(values):
        return decode_distribution(
            values,
            mapping,
            display_transform=options.display_transform,
            log_decades=options.log_decades,
        )

    return decode(values_a), decode(values_b)
