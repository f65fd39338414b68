"""Bit-plane kernels against the scalar reference, bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcalab import packed
from pcalab.density import _run_batch
from pcalab.lattice import (Configuration, Model, evolve, step_a, step_b,
                            step_c, step_d)
from pcalab.packed import (arrow_words, config_to_planes, evolve_packed,
                           pack_bits, planes_to_config, row_words,
                           step_planes, unpack_bits, words_for)
from pcalab.stream import UpdateRow, UpdateStream

_SCALAR = {Model.A: step_a, Model.B: step_b, Model.C: step_c, Model.D: step_d}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_pack_roundtrip(bits):
    words = pack_bits(np.array(bits, dtype=np.uint8))
    assert words.shape == (words_for(len(bits)),)
    assert list(unpack_bits(words, len(bits))) == bits


@pytest.mark.parametrize("width", [1, 2, 63, 64, 65, 127, 128, 129])
def test_config_roundtrip_at_word_boundaries(width):
    rng = np.random.default_rng(width)
    for model in Model:
        hi = 3 if model is Model.D else 2
        cfg = Configuration(-7, tuple(int(c) for c in rng.integers(0, hi, width)))
        planes = config_to_planes(cfg, model)
        assert planes_to_config(planes, model, cfg.offset, width) == cfg


def _packed_one_step(model, cfg, row):
    planes = config_to_planes(cfg, model)
    u = row_words(row, cfg.offset, len(cfg))
    out = step_planes(model, planes, u)
    return planes_to_config(out, model, cfg.offset, len(cfg), skip=1)


@pytest.mark.parametrize("model", list(Model))
def test_kernels_match_scalar_on_random_windows(model):
    rng = np.random.default_rng(hash(model.value) & 0xFFFF)
    hi = 3 if model is Model.D else 2
    for _ in range(2000):
        width = int(rng.integers(2, 90))
        offset = int(rng.integers(-64, 64))
        cfg = Configuration(offset,
                            tuple(int(c) for c in rng.integers(0, hi, width)))
        row = UpdateRow(offset, tuple(int(a) for a in rng.integers(0, 2, width)))
        assert _packed_one_step(model, cfg, row) == _SCALAR[model](cfg, row)


def test_color_plane_stays_inside_occupancy():
    rng = np.random.default_rng(8)
    stream = UpdateStream(8)
    cells = tuple(int(c) for c in rng.integers(0, 3, 120))
    planes = config_to_planes(Configuration(0, cells), Model.D)
    for step in range(12):
        u = arrow_words(stream, step, 0, 120)
        planes = step_planes(Model.D, planes, u)
        occ, blue = (unpack_bits(pl, 120) for pl in planes)
        assert np.all(blue <= occ)


@pytest.mark.parametrize("model", list(Model))
def test_packed_evolution_matches_scalar_evolution(model):
    rng = np.random.default_rng(hash(model.value) & 0xFF)
    hi = 3 if model is Model.D else 2
    for case in range(40):
        width = int(rng.integers(6, 150))
        steps = int(rng.integers(0, min(width - 1, 12)))
        offset = int(rng.integers(-80, 80))
        cfg = Configuration(offset,
                            tuple(int(c) for c in rng.integers(0, hi, width)))
        stream = UpdateStream(int(rng.integers(0, 2 ** 40)), case)
        assert evolve_packed(model, cfg, stream, steps) == \
            evolve(model, cfg, stream, steps).final


@pytest.mark.parametrize("model", list(Model))
def test_light_cone_determinism_under_widening(model):
    rng = np.random.default_rng(77 + ord(model.value))
    hi = 3 if model is Model.D else 2
    for case in range(120):
        width = int(rng.integers(10, 80))
        grow_l = int(rng.integers(0, 40))
        grow_r = int(rng.integers(0, 40))
        steps = int(rng.integers(1, min(width - 1, 14)))
        offset = int(rng.integers(-50, 50))
        stream = UpdateStream(int(rng.integers(0, 2 ** 40)), case)
        wide_cells = rng.integers(0, hi, width + grow_l + grow_r)
        wide = Configuration(offset - grow_l,
                             tuple(int(c) for c in wide_cells))
        narrow = wide.window(offset, offset + width)
        wide_final = evolve_packed(model, wide, stream, steps)
        narrow_final = evolve_packed(model, narrow, stream, steps)
        assert wide_final.window(narrow_final.offset, narrow_final.end) == \
            narrow_final


def test_batched_trials_match_per_trial_scalar_runs():
    seed, trials, width, steps = 424, 6, 70, 9
    plane = packed.batch_cell_words(seed, np.arange(trials), words_for(width))
    bits = _run_batch(Model.C, seed, trials, width, steps, (plane,))[0]
    for trial in range(trials):
        stream = UpdateStream(seed, trial)
        init_bits = stream.cell_bits(0, width)
        init = Configuration(0, tuple(int(b) for b in init_bits))
        final = evolve(Model.C, init, stream, steps).final
        assert tuple(int(b) for b in bits[trial]) == final.cells
