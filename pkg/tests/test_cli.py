import math
import os
import subprocess
import sys

import pytest

from qblur.cli import main
from qblur.imageio import load_pgm, load_ppm, save_pgm

DATA = os.path.join(os.path.dirname(__file__), "data")

FACE = {
    (2, 5): 1.0, (2, 6): 1.0, (5, 6): 1.0, (5, 5): 1.0, (2, 1): 1.0,
    (3, 1): 1.0, (4, 1): 1.0, (5, 1): 1.0, (1, 2): 1.0, (6, 2): 1.0,
}


@pytest.fixture
def face_path(tmp_path):
    path = tmp_path / "face.pgm"
    save_pgm(path, FACE, 8)
    return path


def test_blur_zero_angle_round_trips(tmp_path, face_path):
    out = tmp_path / "out.pgm"
    assert main(["blur", str(face_path), str(out), "--theta", "0"]) == 0
    original, _ = load_pgm(face_path)
    blurred, size = load_pgm(out)
    assert size == (8, 8)
    assert set(blurred) == set(original)
    for coord, value in original.items():
        assert abs(blurred[coord] - value) <= 1 / 255


def test_blur_matches_pinned_golden(tmp_path, face_path):
    out = tmp_path / "blurred.pgm"
    assert main([
        "blur", str(face_path), str(out), "--theta", str(math.pi / 10), "--log",
    ]) == 0
    with open(os.path.join(DATA, "golden_face_blur.pgm"), "rb") as handle:
        golden = handle.read()
    assert out.read_bytes() == golden


def test_blur_repeated_runs_are_byte_identical(tmp_path, face_path):
    first = tmp_path / "a.pgm"
    second = tmp_path / "b.pgm"
    args = ["--theta", "0.4", "--shots", "--seed", "5"]
    assert main(["blur", str(face_path), str(first)] + args) == 0
    assert main(["blur", str(face_path), str(second)] + args) == 0
    assert first.read_bytes() == second.read_bytes()


def test_blur_default_shots_reproduce_exact_support(tmp_path, face_path):
    exact = tmp_path / "exact.pgm"
    sampled = tmp_path / "sampled.pgm"
    assert main(["blur", str(face_path), str(exact), "--theta", "0", "--exact"]) == 0
    assert main([
        "blur", str(face_path), str(sampled), "--theta", "0", "--shots", "--seed", "3",
    ]) == 0
    exact_map, _ = load_pgm(exact)
    sampled_map, _ = load_pgm(sampled)
    assert set(sampled_map) == set(exact_map)


def test_blur_pads_non_square_inputs(tmp_path, capsys):
    source = tmp_path / "wide.pgm"
    save_pgm(source, {(0, 0): 1.0, (3, 1): 0.5}, (4, 2))
    out = tmp_path / "out.pgm"
    assert main(["blur", str(source), str(out), "--theta", "0"]) == 0
    assert "padding" in capsys.readouterr().err
    _, size = load_pgm(out)
    assert size == (4, 4)


def test_blur_unreadable_input_exits_2(tmp_path):
    assert main(["blur", str(tmp_path / "missing.pgm"), str(tmp_path / "o.pgm"),
                 "--theta", "0"]) == 2


def test_blur_capacity_exceeded_exits_3(tmp_path, face_path, monkeypatch):
    monkeypatch.setenv("QBLUR_MAX_QUBITS", "4")
    assert main(["blur", str(face_path), str(tmp_path / "o.pgm"), "--theta", "0"]) == 3


def test_transition_two_frames_are_the_endpoints(tmp_path):
    a_path = tmp_path / "a.pgm"
    b_path = tmp_path / "b.pgm"
    save_pgm(a_path, {(0, 0): 1.0}, 4)
    save_pgm(b_path, {(3, 3): 1.0}, 4)
    pattern = str(tmp_path / "frame_{}.pgm")
    pattern_b = str(tmp_path / "back_{}.pgm")
    assert main([
        "transition", str(a_path), str(b_path), "--frames", "2",
        "--output-pattern", pattern, "--output-pattern-b", pattern_b,
    ]) == 0
    frame0, _ = load_pgm(tmp_path / "frame_0.pgm")
    frame1, _ = load_pgm(tmp_path / "frame_1.pgm")
    assert frame0 == {(0, 0): 1.0}
    assert frame1 == {(3, 3): 1.0}
    back0, _ = load_pgm(tmp_path / "back_0.pgm")
    back1, _ = load_pgm(tmp_path / "back_1.pgm")
    assert back0 == {(3, 3): 1.0}
    assert back1 == {(0, 0): 1.0}


def test_transition_middle_frames_span_both_pixels(tmp_path):
    a_path = tmp_path / "a.pgm"
    b_path = tmp_path / "b.pgm"
    save_pgm(a_path, {(0, 0): 1.0}, 4)
    save_pgm(b_path, {(2, 2): 1.0}, 4)
    pattern = str(tmp_path / "f_{}.pgm")
    assert main([
        "transition", str(a_path), str(b_path), "--frames", "8",
        "--output-pattern", pattern,
    ]) == 0
    assert len(list(tmp_path.glob("f_*.pgm"))) == 8
    # halfway frames show both source pixels even after 8-bit quantization
    for k in (3, 4):
        frame, _ = load_pgm(tmp_path / f"f_{k}.pgm")
        assert (0, 0) in frame and (2, 2) in frame


def test_transition_mismatched_sizes_exit_2(tmp_path):
    a_path = tmp_path / "a.pgm"
    b_path = tmp_path / "b.pgm"
    save_pgm(a_path, {(0, 0): 1.0}, 4)
    save_pgm(b_path, {(0, 0): 1.0}, 8)
    assert main([
        "transition", str(a_path), str(b_path),
        "--output-pattern", str(tmp_path / "f_{}.pgm"),
    ]) == 2


def test_demo_ghz_frames(tmp_path):
    pattern = str(tmp_path / "ghz_{}.pgm")
    assert main(["demo-ghz", "--output-pattern", pattern, "--include-pi"]) == 0
    frames = sorted(tmp_path.glob("ghz_*.pgm"))
    assert len(frames) == 7

    start, _ = load_pgm(tmp_path / "ghz_0.pgm")
    assert start == {(0, 0): 1.0, (2, 2): 1.0}

    checker, _ = load_pgm(tmp_path / "ghz_5.pgm")
    assert set(checker) == {
        (x, y) for x in range(4) for y in range(4) if (x + y) % 2 == 0
    }

    full_turn = (tmp_path / "ghz_6.pgm").read_bytes()
    assert full_turn == (tmp_path / "ghz_0.pgm").read_bytes()


def test_demo_ghz_rejects_incompatible_size(tmp_path):
    assert main([
        "demo-ghz", "--size", "5", "--output-pattern", str(tmp_path / "g_{}.pgm"),
    ]) == 2


@pytest.fixture
def layout_path(tmp_path):
    layout = {
        (x, y): 0.9 for x in range(2, 8) for y in range(2, 8)
    }
    path = tmp_path / "layout.pgm"
    save_pgm(path, layout, 10)
    return path


def test_terrain_is_deterministic_per_seed(tmp_path, layout_path):
    args = [
        "--layout", str(layout_path), "--size", "40", "--seed", "11",
        "--variants", "8", "--attempts", "120", "--texture-size", "8",
    ]
    first = tmp_path / "a.ppm"
    second = tmp_path / "b.ppm"
    cells_a = tmp_path / "a.txt"
    cells_b = tmp_path / "b.txt"
    assert main(["terrain", str(first), "--cells", str(cells_a)] + args) == 0
    assert main(["terrain", str(second), "--cells", str(cells_b)] + args) == 0
    assert first.read_bytes() == second.read_bytes()
    assert cells_a.read_bytes() == cells_b.read_bytes()


def test_terrain_cell_dump_format(tmp_path, layout_path):
    out = tmp_path / "island.ppm"
    cells = tmp_path / "cells.txt"
    assert main([
        "terrain", str(out), "--layout", str(layout_path), "--size", "30",
        "--seed", "2", "--variants", "4", "--attempts", "60",
        "--texture-size", "8", "--cells", str(cells),
    ]) == 0
    lines = cells.read_text().strip().splitlines()
    assert lines
    for line in lines:
        x, y, level, residual, marker = line.split()
        assert 0 <= int(x) < 30 and 0 <= int(y) < 30
        assert 0 <= int(level) < 5
        assert 0 <= float(residual) < 1
        assert marker == "-" or marker == "tree"


def test_terrain_zero_layout_gives_water_only(tmp_path):
    layout = tmp_path / "zero.pgm"
    save_pgm(layout, {}, 10)
    out = tmp_path / "island.ppm"
    assert main([
        "terrain", str(out), "--layout", str(layout), "--size", "20",
        "--seed", "0", "--variants", "2", "--attempts", "10",
        "--texture-size", "8",
    ]) == 0
    image, size = load_ppm(out)
    assert size == (20, 20)
    assert len(set(image.red.values())) == 1
    assert len(set(image.blue.values())) == 1
    assert max(image.blue.values()) > max(image.red.values())  # water is blue


def test_console_entry_point_smoke(tmp_path, face_path):
    out = tmp_path / "out.pgm"
    result = subprocess.run(
        [sys.executable, "-m", "qblur.cli", "blur", str(face_path), str(out),
         "--theta", "0"],
        capture_output=True,
    )
    assert result.returncode == 0
    assert out.exists()
    result = subprocess.run(
        [sys.executable, "-m", "qblur.cli", "blur", "nope.pgm", str(out),
         "--theta", "0"],
        capture_output=True,
    )
    assert result.returncode == 2
