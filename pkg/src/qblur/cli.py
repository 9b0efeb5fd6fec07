"""Command-line interface: blur and transition effects on graymap files,
the island terrain pipeline, and the rotated two-point interference demo.

Exit codes: 0 success, 2 input or validation error, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .bitmapping import make_grid
from .blurcore import (
    DecodeOptions,
    DegenerateOutputError,
    HeightMap,
    blur,
    transition,
)
from .imageio import FormatError, load_pgm, save_pgm, save_ppm
from .qsim import CapacityError
from .terrain import (
    LayoutSpec,
    PlacementSpec,
    SeedSpec,
    generate_island,
    colorize,
    random_seed_image,
    texture_variants,
    voxelize,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPACITY = 3

DEFAULT_GHZ_THETAS = [k * 0.1 * math.pi for k in range(6)]


def _load_square(path: str) -> tuple[HeightMap, int]:
    """Load a graymap, padding non-square inputs with zeros to a square box."""
    height, (width, rows) = load_pgm(path)
    side = max(width, rows, 2)
    if width != rows:
        print(
            f"warning: {path} is {width}x{rows}; padding with zeros to {side}x{side}",
            file=sys.stderr,
        )
    return height, side


def _decode_options(args, *, seed=None) -> DecodeOptions:
    sampled = getattr(args, "shots", None) is not None
    return DecodeOptions(
        mode="sampled" if sampled else "exact",
        shots=(args.shots or None) if sampled else None,
        seed=seed if seed is not None else getattr(args, "seed", None),
        display_transform="logarithmic" if getattr(args, "log", False) else "linear",
        log_decades=getattr(args, "log_decades", 5.0),
    )


def _frame_path(pattern: str, index: int) -> str:
    if "{" in pattern:
        return pattern.format(index)
    stem, ext = os.path.splitext(pattern)
    return f"{stem}_{index:03d}{ext}"


def _add_sampling_flags(parser: argparse.ArgumentParser) -> None:
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact", action="store_true",
        help="decode from exact probabilities (default)",
    )
    mode.add_argument(
        "--shots", nargs="?", const=0, type=int, metavar="N",
        help="decode from N measurement samples (bare --shots picks 4^qubits)",
    )
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")


def _add_display_flags(parser: argparse.ArgumentParser) -> None:
    style = parser.add_mutually_exclusive_group()
    style.add_argument("--log", action="store_true", help="logarithmic value display")
    style.add_argument("--linear", action="store_true", help="linear value display (default)")
    parser.add_argument(
        "--log-decades", type=float, default=5.0, metavar="D",
        help="decades of range compressed by --log (default 5)",
    )


def cmd_blur(args) -> int:
    height, side = _load_square(args.input)
    mapping = make_grid(side)
    result = blur(height, args.theta, mapping, _decode_options(args))
    save_pgm(args.output, result, side, binary=not args.ascii)
    return EXIT_OK


def cmd_transition(args) -> int:
    height_a, (wa, ha) = load_pgm(args.input_a)
    height_b, (wb, hb) = load_pgm(args.input_b)
    if (wa, ha) != (wb, hb):
        raise ValueError(
            f"input sizes differ: {args.input_a} is {wa}x{ha},"
            f" {args.input_b} is {wb}x{hb}"
        )
    side = max(wa, ha, 2)
    if wa != ha:
        print(
            f"warning: inputs are {wa}x{ha}; padding with zeros to {side}x{side}",
            file=sys.stderr,
        )
    if args.frames < 2:
        raise ValueError(f"--frames must be at least 2, got {args.frames}")
    mapping = make_grid(side)
    options = _decode_options(args)
    for k in range(args.frames):
        fraction = k / (args.frames - 1)
        frame_a, frame_b = transition(height_a, height_b, fraction, mapping, options)
        save_pgm(_frame_path(args.output_pattern, k), frame_a, side, binary=not args.ascii)
        if args.output_pattern_b:
            save_pgm(_frame_path(args.output_pattern_b, k), frame_b, side, binary=not args.ascii)
    return EXIT_OK


def cmd_terrain(args) -> int:
    layout, (width, rows) = load_pgm(args.layout)
    layout_side = max(width, rows)
    root = np.random.SeedSequence(args.seed)
    seed_child, texture_child, placement_child = root.spawn(3)
    seed_image = random_seed_image(SeedSpec(args.texture_size, args.points, seed_child))
    textures = texture_variants(
        seed_image,
        args.theta,
        args.variants,
        texture_child,
        size=args.texture_size,
        display_transform="logarithmic",
        log_decades=args.log_decades,
    )
    spec = LayoutSpec(layout, layout_side, args.size)
    island = generate_island(
        spec, textures, PlacementSpec(args.attempts, placement_child)
    )
    save_ppm(args.output, colorize(island, size=args.size), args.size, binary=not args.ascii)
    if args.cells:
        cells = voxelize(island, args.bands)
        lines = []
        for (x, y) in sorted(cells):
            cell = cells[(x, y)]
            # truncate, not round, so a residual just under 1 stays below it
            residual = int(cell.residual * 10**6) / 10**6
            lines.append(f"{x} {y} {cell.level} {residual:.6f} {cell.marker or '-'}")
        with open(args.cells, "w") as handle:
            handle.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_demo_ghz(args) -> int:
    mapping = make_grid(args.size)
    n = mapping.qubit_count
    ones = "1" * n
    if ones not in mapping.forward:
        raise ValueError(
            f"size {args.size} leaves the all-ones string outside the box;"
            " use a power of two"
        )
    image = {mapping.forward["0" * n]: 1.0, mapping.forward[ones]: 1.0}
    thetas = list(args.thetas)
    if args.include_pi:
        thetas.append(math.pi)
    options = DecodeOptions(
        display_transform="logarithmic", log_decades=args.log_decades
    )
    for k, theta in enumerate(thetas):
        frame = blur(image, theta, mapping, options)
        save_pgm(_frame_path(args.output_pattern, k), frame, args.size, binary=not args.ascii)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qblur",
        description="Interference-based blur effects and terrain generation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_blur = sub.add_parser("blur", help="blur a graymap by rotating every qubit")
    p_blur.add_argument("input", help="input graymap (P2/P5)")
    p_blur.add_argument("output", help="output graymap")
    p_blur.add_argument("--theta", type=float, required=True, help="rotation angle in radians")
    p_blur.add_argument("--ascii", action="store_true", help="write ASCII (P2) output")
    _add_display_flags(p_blur)
    _add_sampling_flags(p_blur)
    p_blur.set_defaults(func=cmd_blur)

    p_tr = sub.add_parser("transition", help="partial-swap animation between two graymaps")
    p_tr.add_argument("input_a", help="first graymap")
    p_tr.add_argument("input_b", help="second graymap")
    p_tr.add_argument("--frames", type=int, default=8, metavar="K",
                      help="number of frames at fractions k/(K-1) (default 8)")
    p_tr.add_argument("--output-pattern", required=True,
                      help="frame path pattern, e.g. frame_{:02d}.pgm")
    p_tr.add_argument("--output-pattern-b", default=None,
                      help="also write the second register's frames here")
    p_tr.add_argument("--ascii", action="store_true", help="write ASCII (P2) output")
    _add_display_flags(p_tr)
    _add_sampling_flags(p_tr)
    p_tr.set_defaults(func=cmd_transition)

    p_te = sub.add_parser("terrain", help="generate an island from a coarse layout")
    p_te.add_argument("output", help="output pixmap (P6)")
    p_te.add_argument("--layout", required=True, help="coarse layout graymap")
    p_te.add_argument("--size", type=int, default=200, help="output resolution (default 200)")
    p_te.add_argument("--seed", type=int, default=None, help="pipeline RNG seed")
    p_te.add_argument("--theta", type=float, default=0.15 * math.pi,
                      help="texture blur angle in radians (default 0.15*pi)")
    p_te.add_argument("--variants", type=int, default=100,
                      help="shuffled texture variants from one run (default 100)")
    p_te.add_argument("--attempts", type=int, default=2000,
                      help="random placement attempts (default 2000)")
    p_te.add_argument("--points", type=int, default=8,
                      help="points in the random seed image (default 8)")
    p_te.add_argument("--texture-size", type=int, default=16,
                      help="seed texture side length (default 16)")
    p_te.add_argument("--bands", type=int, default=5,
                      help="height bands for the cell dump (default 5)")
    p_te.add_argument("--cells", default=None,
                      help="also write 'x y level residual marker' lines here")
    p_te.add_argument("--log-decades", type=float, default=5.0, metavar="D",
                      help="decades of texture range kept (default 5)")
    p_te.add_argument("--ascii", action="store_true", help="write ASCII (P3) output")
    p_te.set_defaults(func=cmd_terrain)

    p_demo = sub.add_parser("demo-ghz", help="rotate a two-point interference pattern")
    p_demo.add_argument("--size", type=int, default=4, help="grid side (default 4)")
    p_demo.add_argument("--thetas", type=float, nargs="*", default=DEFAULT_GHZ_THETAS,
                        help="rotation angles in radians (default 0..0.5*pi)")
    p_demo.add_argument("--include-pi", action="store_true",
                        help="append an extra frame at theta = pi")
    p_demo.add_argument("--output-pattern", required=True,
                        help="frame path pattern, e.g. ghz_{}.pgm")
    p_demo.add_argument("--log-decades", type=float, default=5.0, metavar="D",
                        help="decades of range in the log display (default 5)")
    p_demo.add_argument("--ascii", action="store_true", help="write ASCII (P2) output")
    p_demo.set_defaults(func=cmd_demo_ghz)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, DegenerateOutputError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
