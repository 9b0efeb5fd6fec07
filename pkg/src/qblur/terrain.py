"""Island and texture generation: blurred seed images re-keyed through
shuffled mappings, probabilistic stamp placement over a coarse layout,
height banding with residual extraction, and palette colouring.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qsim
from .bitmapping import GridMapping, make_grid, shuffle_mapping
from .blurcore import (
    ColorImage,
    DEFAULT_LOG_DECADES,
    HeightMap,
    decode_distribution,
    height_to_circuit,
)

# band colours for water, sand, grass, rock, snow (RGB in [0, 1])
DEFAULT_PALETTE = [
    (0.16, 0.35, 0.65),
    (0.93, 0.85, 0.56),
    (0.27, 0.60, 0.25),
    (0.52, 0.47, 0.42),
    (0.97, 0.97, 0.97),
]

TREE_RESIDUAL_THRESHOLD = 0.03
TREE_LEVELS = (2, 3)  # grass and rock bands of the default palette


@dataclass(frozen=True)
class SeedSpec:
    """A random sparse seed image: `point_count` ones on a size x size grid."""

    size: int = 16
    point_count: int = 8
    seed: object = None


@dataclass(frozen=True)
class LayoutSpec:
    """A coarse placement-probability layout and the resolution to stretch it to."""

    layout: HeightMap
    size: int
    target_size: int


@dataclass(frozen=True)
class PlacementSpec:
    """Random stamping policy: number of attempts, RNG seed, and overlap rule."""

    attempts: int
    seed: object = None
    combine: str = "max"

    def __post_init__(self):
        if self.attempts < 1:
            raise ValueError(f"attempts must be at least 1, got {self.attempts}")
        if self.combine not in ("max", "clamped-add"):
            raise ValueError(
                f"combine must be 'max' or 'clamped-add', got {self.combine!r}"
            )


@dataclass(frozen=True)
class TerrainCell:
    """A banded height: integer level, fractional residual in [0, 1), optional marker."""

    level: int
    residual: float
    marker: str | None = None


def random_seed_image(spec: SeedSpec) -> HeightMap:
    """Distinct uniformly random coordinates with value 1; deterministic per seed."""
    cells = spec.size * spec.size
    if not 1 <= spec.point_count <= cells:
        raise ValueError(
            f"point_count must lie in [1, {cells}] for size {spec.size},"
            f" got {spec.point_count}"
        )
    rng = np.random.default_rng(spec.seed)
    picks = rng.choice(cells, size=spec.point_count, replace=False)
    return {(int(i % spec.size), int(i // spec.size)): 1.0 for i in picks}


def _extent(height: HeightMap) -> tuple[int, int]:
    xs = [c[0] for c in height]
    ys = [c[1] for c in height]
    return max(xs) + 1, max(ys) + 1


def texture_variants(
    seed_image: HeightMap,
    theta: float,
    count: int,
    seed=None,
    *,
    size: int | None = None,
    display_transform: str = "linear",
    log_decades: float = DEFAULT_LOG_DECADES,
    mappings: list[GridMapping] | None = None,
) -> list[HeightMap]:
    """Blur once, decode many: `count` re-keyed variants of one quantum run.

    The statevector simulation executes exactly once; each variant decodes
    the same output distribution through its own shuffled mapping.  Explicit
    `mappings` override the seeded shuffles (reproducibility hook).
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if size is None:
        size = max(_extent(seed_image))
    base = make_grid(size)
    circuit, context = height_to_circuit(seed_image, base)
    for qubit in range(context.qubit_count):
        circuit.ry(theta, qubit)
    values = qsim.probabilities(qsim.run(circuit))
    if mappings is None:
        if not isinstance(seed, np.random.SeedSequence):
            seed = np.random.SeedSequence(seed)
        mappings = [shuffle_mapping(base, child) for child in seed.spawn(count)]
    elif len(mappings) != count:
        raise ValueError(f"expected {count} mappings, got {len(mappings)}")
    return [
        decode_distribution(
            values, m, display_transform=display_transform, log_decades=log_decades
        )
        for m in mappings
    ]


def upscale_layout(spec: LayoutSpec) -> HeightMap:
    """Nearest-neighbour stretch of the coarse layout to target_size x target_size."""
    if spec.size < 1 or spec.target_size < spec.size:
        raise ValueError(
            f"target_size {spec.target_size} must be at least the layout size {spec.size}"
        )
    out = {}
    for x in range(spec.target_size):
        sx = x * spec.size // spec.target_size
        for y in range(spec.target_size):
            value = spec.layout.get((sx, y * spec.size // spec.target_size), 0.0)
            if value > 0:
                out[(x, y)] = value
    return out


def sample_placements(
    layout: LayoutSpec,
    placement: PlacementSpec,
    texture_count: int,
    *,
    anchors=None,
) -> list[tuple[int, int, int]]:
    """Draw stamp placements: accepted (x, y, texture index) triples.

    Each attempt draws a uniform anchor and accepts it with probability equal
    to the stretched layout height there.  `anchors` replaces the random
    anchor stream (exhaustive-coverage hook); acceptance rolls still use the
    seeded RNG.
    """
    if texture_count < 1:
        raise ValueError(f"texture_count must be at least 1, got {texture_count}")
    stretched = upscale_layout(layout)
    rng = np.random.default_rng(placement.seed)
    target = layout.target_size
    if anchors is None:
        anchors = (
            (int(rng.integers(target)), int(rng.integers(target)))
            for _ in range(placement.attempts)
        )
    accepted = []
    for x, y in anchors:
        if rng.random() >= stretched.get((x, y), 0.0):
            continue
        index = int(rng.integers(texture_count)) if texture_count > 1 else 0
        accepted.append((x, y, index))
    return accepted


def generate_island(
    layout: LayoutSpec,
    textures: list[HeightMap],
    placement: PlacementSpec,
    *,
    anchors=None,
) -> HeightMap:
    """Stamp random texture variants over the layout; values stay in [0, 1]."""
    if not textures:
        raise ValueError("at least one texture is required")
    extents = [_extent(t) for t in textures]
    target = layout.target_size
    for width, height in extents:
        if width > target or height > target:
            raise ValueError(
                f"texture of extent {(width, height)} does not fit in {target}x{target}"
            )
    out: HeightMap = {}
    for x, y, index in sample_placements(layout, placement, len(textures), anchors=anchors):
        texture = textures[index]
        width, height = extents[index]
        ox, oy = x - width // 2, y - height // 2
        for (dx, dy), value in texture.items():
            px, py = ox + dx, oy + dy
            if not (0 <= px < target and 0 <= py < target):
                continue
            if placement.combine == "max":
                if value > out.get((px, py), 0.0):
                    out[(px, py)] = value
            else:
                out[(px, py)] = min(1.0, out.get((px, py), 0.0) + value)
    return out


def band_of(value: float, bands: int) -> int:
    """Band index of a height in [0, 1]: floor(value * bands), top band clamped."""
    return min(int(value * bands), bands - 1)


def voxelize(
    height: HeightMap,
    bands: int,
    *,
    marker_threshold: float = TREE_RESIDUAL_THRESHOLD,
    marker_levels: tuple[int, ...] = TREE_LEVELS,
    marker: str = "tree",
) -> dict[tuple[int, int], TerrainCell]:
    """Round heights down into `bands` levels, keeping the fractional residual.

    The residual always lies in [0, 1) (a height of exactly 1 clamps to just
    under 1).  Cells whose residual falls below `marker_threshold` on one of
    the `marker_levels` get the object marker.
    """
    if bands < 1:
        raise ValueError(f"bands must be at least 1, got {bands}")
    cells = {}
    for coord, value in height.items():
        scaled = value * bands
        level = min(int(scaled), bands - 1)
        residual = min(scaled - level, math.nextafter(1.0, 0.0))
        placed = marker if residual < marker_threshold and level in marker_levels else None
        cells[coord] = TerrainCell(level, residual, placed)
    return cells


def colorize(
    height: HeightMap,
    palette: list[tuple[float, float, float]] | None = None,
    *,
    size: int,
) -> ColorImage:
    """Paint every cell of the size x size box by its height band's colour."""
    if palette is None:
        palette = DEFAULT_PALETTE
    if not palette:
        raise ValueError("palette must not be empty")
    bands = len(palette)
    red: HeightMap = {}
    green: HeightMap = {}
    blue: HeightMap = {}
    for x in range(size):
        for y in range(size):
            r, g, b = palette[band_of(height.get((x, y), 0.0), bands)]
            if r > 0:
                red[(x, y)] = r
            if g > 0:
                green[(x, y)] = g
            if b > 0:
                blue[(x, y)] = b
    return ColorImage(red, green, blue)
