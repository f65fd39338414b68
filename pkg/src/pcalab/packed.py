"""Word-parallel bit-plane kernels.

Cells pack 64 per uint64 word, least significant bit first: cell ``c``
lives in word ``c >> 6`` at bit ``c & 63``.  Kernels act on the last axis
of a word array and broadcast over leading axes, so the same code steps a
single window (shape ``(K,)``) or a whole batch of Monte Carlo trials
(shape ``(T, K)``).

Information flows rightward only (cell ``i`` reads ``i-1`` and ``i``), so
the garbage that accumulates below the shrinking valid window never
contaminates it.  Line boundary only; cycle runs use the scalar kernels.
"""

from __future__ import annotations

import numpy as np

from . import stream as _stream
from .lattice import BLUE, EMPTY, GREEN, Configuration, Model
from .stream import UpdateRow, UpdateStream

_ONE = np.uint64(1)
_S63 = np.uint64(63)


def words_for(width: int) -> int:
    return (width + 63) >> 6


def pack_bits(bits) -> np.ndarray:
    """Pack 0/1 cells (last axis) into uint64 words, LSB-first."""
    b = np.asarray(bits, dtype=np.uint8)
    packed = np.packbits(b, axis=-1, bitorder="little")
    pad = (-packed.shape[-1]) % 8
    if pad:
        packed = np.concatenate(
            [packed, np.zeros(packed.shape[:-1] + (pad,), dtype=np.uint8)],
            axis=-1)
    return packed.view("<u8")


def unpack_bits(words: np.ndarray, width: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns uint8 cells of length ``width``."""
    raw = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(raw, axis=-1, bitorder="little")
    return bits[..., :width]


def from_left(words: np.ndarray) -> np.ndarray:
    """Plane whose cell ``c`` holds input cell ``c - 1`` (zero shifted in)."""
    out = words << _ONE
    out[..., 1:] |= words[..., :-1] >> _S63
    return out


# Arrow planes use bit 1 = RIGHT, matching the arrow codes in pcalab.stream.

def kernel_a(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    left = from_left(x)
    diff = left ^ x
    return (diff & left) | (~diff & ~(x ^ u))


def kernel_b(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    return from_left(x & u) ^ (x & ~u)


def kernel_c(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    return from_left(x & u) | (x & ~u)


def kernel_d(occ: np.ndarray, blue: np.ndarray,
             u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Occupancy coalesces; the color plane obeys the annihilation rule,
    # because a merged particle is blue iff exactly one parent was blue.
    return kernel_c(occ, u), kernel_b(blue, u)


def config_to_planes(cfg: Configuration, model: Model) -> tuple[np.ndarray, ...]:
    cells = np.asarray(cfg.cells, dtype=np.uint8)
    if model is Model.D:
        return (pack_bits(cells != EMPTY), pack_bits(cells == BLUE))
    return (pack_bits(cells),)


def planes_to_config(planes: tuple[np.ndarray, ...], model: Model,
                     offset: int, width: int, skip: int = 0) -> Configuration:
    """Rebuild symbols from planes, dropping ``skip`` stale cells on the left."""
    if model is Model.D:
        occ = unpack_bits(planes[0], width)[skip:]
        blue = unpack_bits(planes[1], width)[skip:]
        cells = np.where(occ == 0, EMPTY, np.where(blue != 0, BLUE, GREEN))
    else:
        cells = unpack_bits(planes[0], width)[skip:]
    return Configuration(offset + skip, tuple(int(c) for c in cells))


def row_words(row: UpdateRow, offset: int, width: int) -> np.ndarray:
    """Pack an explicit update row into a plane aligned with a window."""
    if not row.covers(offset, width):
        raise ValueError("update row does not cover the requested window")
    start = offset - row.offset
    return pack_bits(np.asarray(row.arrows[start:start + width], dtype=np.uint8))


def arrow_words(stream: UpdateStream, step: int, offset: int,
                width: int) -> np.ndarray:
    bits = _stream.bits_range(stream.seed, stream.trial, step, offset, width)
    return pack_bits(bits)


def step_planes(model: Model, planes: tuple[np.ndarray, ...],
                u: np.ndarray) -> tuple[np.ndarray, ...]:
    if model is Model.A:
        return (kernel_a(planes[0], u),)
    if model is Model.B:
        return (kernel_b(planes[0], u),)
    if model is Model.C:
        return (kernel_c(planes[0], u),)
    return kernel_d(planes[0], planes[1], u)


def evolve_packed(model: Model, init: Configuration, stream: UpdateStream,
                  steps: int) -> Configuration:
    """Line-boundary evolution on bit planes; returns the final window.

    Agrees cell-for-cell with the scalar :func:`pcalab.lattice.evolve`.
    """
    model = Model(model)
    width = len(init)
    if width < steps + 1:
        raise ValueError(f"window of width {width} is exhausted "
                         f"before {steps} steps")
    planes = config_to_planes(init, model)
    for n in range(steps):
        u = arrow_words(stream, n, init.offset, width)
        planes = step_planes(model, planes, u)
    return planes_to_config(planes, model, init.offset, width, skip=steps)


def batch_arrow_words(seed: int, trials: np.ndarray, step: int,
                      n_words: int) -> np.ndarray:
    """Arrow planes for a batch of trials, window anchored at site 0.

    Returns shape ``(len(trials), n_words)``; bit ``c`` of word ``k`` is
    the arrow at site ``64k + c``, identical to per-site scalar queries.
    """
    cols = [_stream.block_bits_vec(seed, trials, step, k) for k in range(n_words)]
    return np.stack(cols, axis=-1)


def batch_cell_words(seed: int, trials: np.ndarray, n_words: int,
                     domain: int = _stream.DOMAIN_CELL) -> np.ndarray:
    """Initialization planes for a batch of trials (window at site 0)."""
    cols = [_stream.block_bits_vec(seed, trials, 0, k, domain)
            for k in range(n_words)]
    return np.stack(cols, axis=-1)
