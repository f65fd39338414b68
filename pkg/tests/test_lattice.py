"""Scalar kernels: local case tables, windows, boundaries, couplings."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcalab.lattice import (BLUE, EMPTY, GREEN, PARTICLE, Configuration,
                            Model, a_local, b_local, c_local, d_local,
                            evolve, evolve_with_rows, particle_count, phi,
                            pi_b, pi_c, step_a, step_b, step_c, step_d)
from pcalab.stream import RIGHT, UP, UpdateRow, UpdateStream

ARROWS = (UP, RIGHT)


def row_for(cfg, arrows):
    return UpdateRow(cfg.offset, tuple(arrows))


class TestLocalRules:
    def test_keep_switch_table(self):
        assert a_local(1, 0, UP) == 1 and a_local(1, 0, RIGHT) == 1
        assert a_local(0, 1, UP) == 0 and a_local(0, 1, RIGHT) == 0
        assert a_local(0, 0, UP) == 1 and a_local(0, 0, RIGHT) == 0
        assert a_local(1, 1, UP) == 0 and a_local(1, 1, RIGHT) == 1

    def test_annihilation_table(self):
        assert b_local(1, 0, RIGHT, UP) == 1 and b_local(1, 0, RIGHT, RIGHT) == 1
        assert b_local(0, 1, UP, UP) == 1 and b_local(0, 1, RIGHT, UP) == 1
        assert b_local(1, 1, UP, UP) == 1 and b_local(1, 1, RIGHT, RIGHT) == 1
        assert b_local(1, 1, RIGHT, UP) == 0  # collision annihilates
        assert b_local(1, 1, UP, RIGHT) == 0
        assert all(b_local(0, 0, ul, u) == 0 for ul in ARROWS for u in ARROWS)

    def test_coalescence_table(self):
        assert c_local(1, 1, RIGHT, UP) == 1   # collision merges
        assert c_local(1, 1, UP, RIGHT) == 0   # left stays behind, right leaves
        assert c_local(1, 0, RIGHT, UP) == 1 and c_local(1, 0, RIGHT, RIGHT) == 1

    def test_color_merge_table(self):
        assert d_local(BLUE, BLUE, RIGHT, UP) == GREEN
        assert d_local(BLUE, GREEN, RIGHT, UP) == BLUE
        assert d_local(GREEN, BLUE, RIGHT, UP) == BLUE
        assert d_local(GREEN, GREEN, RIGHT, UP) == GREEN
        assert d_local(GREEN, EMPTY, UP, UP) == EMPTY
        assert d_local(GREEN, EMPTY, RIGHT, UP) == GREEN  # lone hop keeps color


class TestSteps:
    def test_step_a_propagates_the_left_cell(self):
        x = Configuration(0, (1, 0))
        for u0, u1 in itertools.product(ARROWS, repeat=2):
            out = step_a(x, row_for(x, (u0, u1)))
            assert out.offset == 1 and out.cells == (1,)

    def test_step_a_shifts_alternating_words(self):
        # Each cell copies its left neighbor, so the alternating pattern
        # flips parity: sites even/odd swap their values; arrows are unread.
        x = Configuration(0, (0, 1, 0, 1, 0, 1))
        for arrows in ((UP,) * 6, (RIGHT,) * 6, (UP, RIGHT) * 3):
            out = step_a(x, UpdateRow(0, arrows))
            assert out.offset == 1
            assert all(out.cell_at(s) == (s + 1) % 2 for s in range(1, 6))
        two = step_a(out, UpdateRow(1, (UP,) * 5))
        assert all(two.cell_at(s) == s % 2 for s in range(2, 6))

    def test_step_b_collisions(self):
        y = Configuration(0, (1, 1))
        assert step_b(y, row_for(y, (RIGHT, RIGHT))).cells == (1,)
        assert step_b(y, row_for(y, (RIGHT, UP))).cells == (0,)
        empty = Configuration(0, (0, 0))
        for u in itertools.product(ARROWS, repeat=2):
            assert step_b(empty, row_for(empty, u)).cells == (0,)

    def test_step_c_collisions(self):
        z = Configuration(0, (1, 1))
        assert step_c(z, row_for(z, (RIGHT, UP))).cells == (1,)
        assert step_c(z, row_for(z, (UP, RIGHT))).cells == (0,)
        lone = Configuration(0, (1, 0))
        assert step_c(lone, row_for(lone, (RIGHT, UP))).cells == (1,)

    def test_step_d_merges(self):
        d = Configuration(0, (BLUE, BLUE))
        assert step_d(d, row_for(d, (RIGHT, UP))).cells == (GREEN,)
        d = Configuration(0, (BLUE, GREEN))
        assert step_d(d, row_for(d, (RIGHT, UP))).cells == (BLUE,)
        d = Configuration(0, (GREEN, EMPTY))
        assert step_d(d, row_for(d, (UP, UP))).cells == (EMPTY,)

    def test_window_and_alignment_errors(self):
        short = Configuration(0, (1,))
        with pytest.raises(ValueError):
            step_a(short, UpdateRow(0, (UP,)))
        x = Configuration(0, (1, 0, 1))
        with pytest.raises(ValueError):
            step_a(x, UpdateRow(1, (UP, UP)))  # does not cover the window
        with pytest.raises(ValueError):
            step_b(Configuration(0, (0, 2)), UpdateRow(0, (UP, UP)))

    def test_annihilation_step_reads_arrow_agreement(self):
        # From the full line, a site stays occupied iff its two driving
        # arrows agree; checked exactly against the row.
        st_ = UpdateStream(31)
        y = Configuration.filled(PARTICLE, 40)
        row = st_.row(0, 0, 40)
        out = step_b(y, row)
        for site in range(1, 40):
            want = PARTICLE if row.arrow(site - 1) == row.arrow(site) else EMPTY
            assert out.cell_at(site) == want


class TestMaps:
    def test_pair_map_examples(self):
        assert phi(Configuration(0, (0, 1, 1, 0))).cells == (0, 1, 0)
        assert phi(Configuration(0, (0, 1, 0, 1))).cells == (0, 0, 0)
        assert phi(Configuration(0, (0, 0, 0))).cells == (1, 1)
        assert phi(Configuration(5, (0, 0))).offset == 5
        with pytest.raises(ValueError):
            phi(Configuration(0, (1,)))

    def test_color_projections(self):
        d = Configuration(0, (BLUE, GREEN, EMPTY))
        assert pi_b(d).cells == (1, 0, 0)
        assert pi_c(d).cells == (1, 1, 0)
        empty = Configuration(0, (EMPTY,) * 4)
        assert pi_b(empty).cells == (0, 0, 0, 0)
        assert pi_c(empty).cells == (0, 0, 0, 0)


class TestEvolve:
    def test_alternating_orbit_closes_after_two_steps(self):
        init = Configuration.alternating(10)
        traj = evolve(Model.A, init, UpdateStream(3), 2, boundary="cycle")
        assert traj.final == init
        assert traj.configs[1].cells == Configuration.alternating(10, first=1).cells

    def test_line_run_keeps_a_valid_window(self):
        n = 7
        init = Configuration.filled(PARTICLE, n + 2)
        traj = evolve(Model.C, init, UpdateStream(9), n)
        assert len(traj.final) == 2
        assert traj.final.offset == n
        assert all(c in (0, 1) for c in traj.final.cells)

    def test_window_exhaustion_raises(self):
        with pytest.raises(ValueError):
            evolve(Model.C, Configuration.filled(1, 5), UpdateStream(0), 5)
        with pytest.raises(ValueError):
            evolve(Model.B, Configuration.filled(1, 1), UpdateStream(0), 0,
                   boundary="cycle")
        with pytest.raises(ValueError):
            evolve(Model.A, Configuration.alternating(6), UpdateStream(0), 1,
                   boundary="torus")

    def test_pair_map_commutes_along_trajectories(self):
        # Running the binary rule then applying the pair map equals running
        # the annihilation rule on the mapped start, with each update row
        # re-anchored one site to the left.
        stream = UpdateStream(123)
        init = Configuration.random_bits(stream, 40)
        rows = [stream.row(n, init.offset + n, 40 - n) for n in range(12)]
        a_traj = evolve_with_rows(Model.A, init, rows)
        b_traj = evolve_with_rows(Model.B, phi(init),
                                  [r.shifted(-1) for r in rows])
        for a_cfg, b_cfg in zip(a_traj.configs, b_traj.configs):
            assert phi(a_cfg) == b_cfg

    def test_domination_along_trajectories(self):
        stream = UpdateStream(77)
        init = Configuration.random_bits(stream, 36)
        rows = [stream.row(n, n, 36 - n) for n in range(10)]
        b_traj = evolve_with_rows(Model.B, init, rows)
        c_traj = evolve_with_rows(Model.C, init, rows)
        for b_cfg, c_cfg in zip(b_traj.configs, c_traj.configs):
            assert all(x <= y for x, y in zip(b_cfg.cells, c_cfg.cells))


@st.composite
def ordered_pair(draw):
    width = draw(st.integers(8, 56))
    hi = draw(st.lists(st.integers(0, 1), min_size=width, max_size=width))
    mask = draw(st.lists(st.integers(0, 1), min_size=width, max_size=width))
    lo = [h & m for h, m in zip(hi, mask)]
    seed = draw(st.integers(0, 2 ** 32))
    return Configuration(0, tuple(lo)), Configuration(0, tuple(hi)), seed


@settings(max_examples=40, deadline=None)
@given(ordered_pair())
def test_monotone_coupling_holds_for_fifty_steps(pair):
    lo, hi, seed = pair
    steps = min(len(lo) - 1, 50)
    stream = UpdateStream(seed)
    lo_traj = evolve(Model.C, lo, stream, steps)
    hi_traj = evolve(Model.C, hi, stream, steps)
    for a, b in zip(lo_traj.configs, hi_traj.configs):
        assert all(x <= y for x, y in zip(a.cells, b.cells))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(4, 40), st.integers(1, 25))
def test_particle_counts_shrink(seed, width, steps):
    stream = UpdateStream(seed)
    init = Configuration.random_bits(stream, width)
    for model in (Model.B, Model.C):
        traj = evolve(model, init, stream, steps, boundary="cycle")
        counts = [particle_count(c) for c in traj.configs]
        assert all(a >= b for a, b in zip(counts, counts[1:]))
        if model is Model.B:
            assert all((a - b) % 2 == 0 for a, b in zip(counts, counts[1:]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(2, 30), st.integers(1, 12))
def test_cycle_conserves_lone_particles(seed, width, steps):
    cells = [EMPTY] * width
    cells[0] = PARTICLE
    traj = evolve(Model.C, Configuration(0, tuple(cells)), UpdateStream(seed),
                  steps, boundary="cycle")
    assert all(particle_count(c) == 1 for c in traj.configs)
