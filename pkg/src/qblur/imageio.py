"""Reading and writing portable graymap (P2/P5) and pixmap (P3/P6) files.

Pixel values map linearly between [0, 1] heights and 0..255 integers; a
height map's coordinate (x, y) is column x of row y, rows stored top to
bottom.  Zero pixels load as absent coordinates.  Writes go through a
temporary file and an atomic rename.
"""
from __future__ import annotations

import os
import tempfile

from .blurcore import ColorImage, HeightMap

MAX_PIXEL = 255


def _quantize(value: float) -> int:
    return min(MAX_PIXEL, max(0, int(round(value * MAX_PIXEL))))


def _atomic_write(path: str, payload: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".part")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _normalize_size(size) -> tuple[int, int]:
    if isinstance(size, int):
        width = height = size
    else:
        width, height = size
    if width < 1 or height < 1:
        raise ValueError(f"image size must be positive, got {(width, height)}")
    return width, height


class FormatError(ValueError):
    """The file is not a well-formed portable graymap/pixmap."""


def _tokenize_header(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read `count` whitespace-separated tokens, honouring '#' comments.

    Returns the tokens and the offset of the byte right after the single
    whitespace character that terminates the last one.
    """
    tokens: list[bytes] = []
    i = 0
    while len(tokens) < count:
        if i >= len(data):
            raise FormatError("truncated header")
        byte = data[i : i + 1]
        if byte == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
        elif byte.isspace():
            i += 1
        else:
            start = i
            while i < len(data) and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
                i += 1
            tokens.append(data[start:i])
            if len(tokens) == count:
                if i >= len(data):
                    raise FormatError("truncated header")
                i += 1  # exactly one whitespace byte before the raster
    return tokens, i


def _parse(data: bytes, magics: tuple[bytes, ...], samples_per_pixel: int):
    tokens, offset = _tokenize_header(data, 4)
    magic = tokens[0]
    if magic not in magics:
        raise FormatError(f"unsupported magic {magic!r}, expected one of {magics}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError as exc:
        raise FormatError(f"non-numeric header field: {exc}") from exc
    if width < 1 or height < 1:
        raise FormatError(f"invalid dimensions {width}x{height}")
    if not 1 <= maxval <= MAX_PIXEL:
        raise FormatError(f"maxval {maxval} outside 1..{MAX_PIXEL}")
    needed = width * height * samples_per_pixel
    if magic in (b"P5", b"P6"):
        raster = data[offset : offset + needed]
        if len(raster) < needed:
            raise FormatError("raster shorter than header promises")
        samples = list(raster)
    else:
        fields = data[offset:].split()
        if len(fields) < needed:
            raise FormatError("raster shorter than header promises")
        try:
            samples = [int(f) for f in fields[:needed]]
        except ValueError as exc:
            raise FormatError(f"non-numeric sample: {exc}") from exc
    if any(s > maxval for s in samples):
        raise FormatError(f"sample exceeds maxval {maxval}")
    return width, height, maxval, samples


def save_pgm(path: str, height: HeightMap, size, *, binary: bool = True) -> None:
    """Write a height map as an 8-bit graymap; absent coordinates write 0."""
    width, rows = _normalize_size(size)
    pixels = [
        _quantize(height.get((x, y), 0.0)) for y in range(rows) for x in range(width)
    ]
    header = f"{'P5' if binary else 'P2'}\n{width} {rows}\n{MAX_PIXEL}\n"
    if binary:
        payload = header.encode("ascii") + bytes(pixels)
    else:
        body = "\n".join(" ".join(str(p) for p in pixels[r * width : (r + 1) * width])
                         for r in range(rows))
        payload = (header + body + "\n").encode("ascii")
    _atomic_write(path, payload)


def load_pgm(path: str) -> tuple[HeightMap, tuple[int, int]]:
    """Read a graymap into a sparse height map plus its (width, height)."""
    with open(path, "rb") as handle:
        data = handle.read()
    width, rows, maxval, samples = _parse(data, (b"P5", b"P2"), 1)
    height: HeightMap = {}
    for y in range(rows):
        base = y * width
        for x in range(width):
            sample = samples[base + x]
            if sample:
                height[(x, y)] = sample / maxval
    return height, (width, rows)


def save_ppm(path: str, image: ColorImage, size, *, binary: bool = True) -> None:
    """Write a colour image as an 8-bit pixmap; absent coordinates write 0."""
    width, rows = _normalize_size(size)
    pixels = []
    for y in range(rows):
        for x in range(width):
            for channel in image.channels():
                pixels.append(_quantize(channel.get((x, y), 0.0)))
    header = f"{'P6' if binary else 'P3'}\n{width} {rows}\n{MAX_PIXEL}\n"
    if binary:
        payload = header.encode("ascii") + bytes(pixels)
    else:
        per_row = width * 3
        body = "\n".join(" ".join(str(p) for p in pixels[r * per_row : (r + 1) * per_row])
                         for r in range(rows))
        payload = (header + body + "\n").encode("ascii")
    _atomic_write(path, payload)


def load_ppm(path: str) -> tuple[ColorImage, tuple[int, int]]:
    """Read a pixmap into three sparse channels plus its (width, height)."""
    with open(path, "rb") as handle:
        data = handle.read()
    width, rows, maxval, samples = _parse(data, (b"P6", b"P3"), 3)
    red: HeightMap = {}
    green: HeightMap = {}
    blue: HeightMap = {}
    for y in range(rows):
        base = y * width * 3
        for x in range(width):
            r, g, b = samples[base + 3 * x : base + 3 * x + 3]
            if r:
                red[(x, y)] = r / maxval
            if g:
                green[(x, y)] = g / maxval
            if b:
                blue[(x, y)] = b / maxval
    return ColorImage(red, green, blue), (width, rows)
