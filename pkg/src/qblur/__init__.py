"""Interference-based blur for images and height maps.

Images are encoded as multi-qubit statevectors through a Gray-code
coordinate mapping, manipulated with rotation and swap gates on a dense
simulator, and decoded back into images; shuffled variants of one run feed
a procedural terrain pipeline.
"""
from .bitmapping import (
    GridMapping,
    hamming_distance,
    make_grid,
    make_lattice,
    make_line,
    shuffle_mapping,
)
from .blurcore import (
    ColorImage,
    DecodeOptions,
    DegenerateOutputError,
    EncodingContext,
    HeightMap,
    apply_log_display,
    blur,
    blur_color,
    circuit_to_height,
    decode_distribution,
    height_to_circuit,
    transition,
    transition_marginals,
)
from .qsim import (
    CapacityError,
    Circuit,
    Gate,
    apply_gate,
    cx,
    fswap,
    max_qubits,
    probabilities,
    run,
    rx,
    ry,
    sample_counts,
    swap,
    zero_state,
)
from .terrain import (
    LayoutSpec,
    PlacementSpec,
    SeedSpec,
    TerrainCell,
    colorize,
    generate_island,
    random_seed_image,
    sample_placements,
    texture_variants,
    upscale_layout,
    voxelize,
)

__version__ = "0.1.0"
