"""Gray-code mappings between lattice coordinates and bit strings.

Bit strings are plain ``str`` objects of '0'/'1' characters; the leftmost
character is the most significant bit of the integer index (``int(s, 2)``).
Coordinates are tuples of non-negative ints.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Coordinate = tuple[int, ...]


def hamming_distance(a: str, b: str) -> int:
    """Number of differing positions between two equal-width bit strings."""
    if len(a) != len(b):
        raise ValueError("bit strings must have equal width")
    return sum(x != y for x, y in zip(a, b))


def make_line(length: int) -> list[str]:
    """Return a Gray-code ordering of bit strings covering at least `length` entries.

    The result has width ceil(log2(length)) and 2^width entries; consecutive
    entries differ in exactly one bit, and the first entry is all zeros.
    Built by repeated doubling: the previous list with '0' appended to each
    string, followed by the reversed list with '1' appended.
    """
    if length < 2:
        raise ValueError(f"length must be at least 2, got {length}")
    line = ["0", "1"]
    while len(line) < length:
        line = [s + "0" for s in line] + [s + "1" for s in reversed(line)]
    return line


@dataclass(frozen=True)
class GridMapping:
    """Bijection between bit strings and the coordinates of a lattice box.

    `forward` maps each in-box bit string to its coordinate; `inverse` is the
    reverse lookup.  When a side length is not a power of two, bit strings
    with no coordinate are simply absent from `forward`.  Instances are
    immutable after construction and safe to share between threads.
    """

    side_lengths: tuple[int, ...]
    axis_widths: tuple[int, ...]
    forward: dict[str, Coordinate]
    inverse: dict[Coordinate, str] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "inverse", {coord: bits for bits, coord in self.forward.items()}
        )

    @property
    def qubit_count(self) -> int:
        return sum(self.axis_widths)

    def __len__(self) -> int:
        return len(self.forward)


def make_lattice(side_lengths: Sequence[int]) -> GridMapping:
    """Build the Gray mapping for a d-dimensional box of the given side lengths.

    The bit string for (x_1, ..., x_d) is the concatenation of each axis's
    Gray-line entry, first axis leftmost.  Coordinates at Manhattan distance 1
    always map to bit strings at Hamming distance 1.
    """
    sides = tuple(int(s) for s in side_lengths)
    if not sides:
        raise ValueError("at least one side length is required")
    if any(s < 2 for s in sides):
        raise ValueError(f"every side length must be at least 2, got {sides}")
    lines = [make_line(s) for s in sides]
    widths = tuple(len(line[0]) for line in lines)
    forward = {}
    for coord in itertools.product(*(range(s) for s in sides)):
        bits = "".join(line[c] for line, c in zip(lines, coord))
        forward[bits] = coord
    return GridMapping(sides, widths, forward)


def make_grid(side: int) -> GridMapping:
    """Build the 2D mapping for a `side` x `side` image grid.

    The bit string for (x, y) is line[x] + line[y]; the mapping has exactly
    side^2 entries over 2 * ceil(log2(side)) qubits.
    """
    if side < 2:
        raise ValueError(f"side must be at least 2, got {side}")
    return make_lattice((side, side))


def shuffle_mapping(
    mapping: GridMapping,
    seed=None,
    *,
    permutation: Sequence[int] | None = None,
    mask: Iterable[int] | None = None,
) -> GridMapping:
    """Re-key a mapping through a random hypercube automorphism.

    Each coordinate is reassigned the transformed key of its original bit
    string: a permutation of bit positions followed by an XOR mask.  Both are
    drawn from `seed` unless given explicitly (the explicit arguments are the
    reproducibility hook: identity permutation and zero mask return an equal
    mapping).  Hamming distances between keys are preserved, so the
    neighbour property of the input survives.
    """
    n = mapping.qubit_count
    rng = np.random.default_rng(seed)
    if permutation is None:
        permutation = rng.permutation(n)
    if mask is None:
        mask = rng.integers(0, 2, size=n)
    perm = [int(p) for p in permutation]
    flip = [bool(m) for m in mask]
    if sorted(perm) != list(range(n)) or len(flip) != n:
        raise ValueError("permutation/mask do not match the mapping width")
    forward = {}
    for bits, coord in mapping.forward.items():
        forward["".join("01"[(bits[p] == "1") ^ f] for p, f in zip(perm, flip))] = coord
    return GridMapping(mapping.side_lengths, mapping.axis_widths, forward)
