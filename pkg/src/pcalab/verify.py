"""Machine-checked certificates for the structural claims.

Each suite enumerates a finite case space exhaustively (no tolerance) or,
for the two statistical suites, checks a four-standard-error band at a
documented trial count.  Suites regenerate their case tables from the
kernels themselves rather than from transcribed data, and accept kernel
substitutes so that mutation tests can demonstrate sensitivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import density
from .lattice import (BLUE, EMPTY, GREEN, PARTICLE, Configuration, a_local,
                      b_local, c_local, d_local)
from .stream import RIGHT, UP, bits_range

ARROWS = (UP, RIGHT)


@dataclass
class CaseReport:
    suite: str
    cases_total: int = 0
    cases_passed: int = 0
    failures: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.cases_passed == self.cases_total

    def record(self, case: str, expected, got) -> None:
        self.cases_total += 1
        if expected == got:
            self.cases_passed += 1
        else:
            self.failures.append((case, repr(expected), repr(got)))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "cases_total": self.cases_total,
                "cases_passed": self.cases_passed, "passed": self.passed,
                "failures": [list(f) for f in self.failures]}


def _pair(a: int, b: int) -> int:
    return PARTICLE if a == b else EMPTY


def verify_commutation(a_rule: Callable = a_local,
                       b_rule: Callable = b_local) -> CaseReport:
    """Binary triples commute with the pair map: applying the keep/switch
    rule then marking equal neighbors equals marking first and running the
    annihilation rule.  All 32 (triple, arrow pair) cases."""
    report = CaseReport("commutation")
    for x2, x1, x0 in itertools.product((0, 1), repeat=3):
        for u1, u0 in itertools.product(ARROWS, repeat=2):
            upper = _pair(a_rule(x2, x1, u1), a_rule(x1, x0, u0))
            lower = b_rule(_pair(x2, x1), _pair(x1, x0), u1, u0)
            report.record(f"x={x2}{x1}{x0} u={u1}{u0}", upper, lower)
    return report


def verify_domination(b_rule: Callable = b_local,
                      c_rule: Callable = c_local) -> CaseReport:
    """Annihilation output never exceeds coalescence output; 16 cases."""
    report = CaseReport("domination")
    for left, cell in itertools.product((EMPTY, PARTICLE), repeat=2):
        for ul, u in itertools.product(ARROWS, repeat=2):
            b_out = b_rule(left, cell, ul, u)
            c_out = c_rule(left, cell, ul, u)
            report.record(f"y={left}{cell} u={ul}{u}",
                          True, b_out <= c_out)
    return report


def verify_monotonicity(rule: Callable = c_local) -> CaseReport:
    """Coalescence is monotone: ordered inputs give ordered outputs for
    every shared arrow pair; 9 ordered window pairs x 4 arrow pairs."""
    report = CaseReport("monotonicity")
    windows = list(itertools.product((EMPTY, PARTICLE), repeat=2))
    for lo, hi in itertools.product(windows, repeat=2):
        if not all(a <= b for a, b in zip(lo, hi)):
            continue
        for ul, u in itertools.product(ARROWS, repeat=2):
            out_lo = rule(lo[0], lo[1], ul, u)
            out_hi = rule(hi[0], hi[1], ul, u)
            report.record(f"z={lo[0]}{lo[1]}<={hi[0]}{hi[1]} u={ul}{u}",
                          True, out_lo <= out_hi)
    return report


_PROJ_B = {EMPTY: EMPTY, BLUE: PARTICLE, GREEN: EMPTY}
_PROJ_C = {EMPTY: EMPTY, BLUE: PARTICLE, GREEN: PARTICLE}


def verify_projection(d_rule: Callable = d_local,
                      b_rule: Callable = b_local,
                      c_rule: Callable = c_local) -> CaseReport:
    """Dropping color information from the two-color model reproduces the
    annihilation model (blue only) and the coalescing model (any color);
    9 color windows x 4 arrow pairs, both projections per case."""
    report = CaseReport("projection")
    for left, cell in itertools.product((EMPTY, BLUE, GREEN), repeat=2):
        for ul, u in itertools.product(ARROWS, repeat=2):
            d_out = d_rule(left, cell, ul, u)
            want_b = b_rule(_PROJ_B[left], _PROJ_B[cell], ul, u)
            want_c = c_rule(_PROJ_C[left], _PROJ_C[cell], ul, u)
            report.record(f"d={left}{cell} u={ul}{u}",
                          (want_b, want_c), (_PROJ_B[d_out], _PROJ_C[d_out]))
    return report


def verify_periodic_orbit(width: int = 6, samples: int = 256, seed: int = 0,
                          a_rule: Callable = a_local) -> CaseReport:
    """On an even cycle, one update maps each alternating word to the other
    regardless of the arrows: the orbit has period 2.  Rows are exhaustive
    for width <= 8, randomly sampled otherwise."""
    if width % 2 != 0 or width < 4:
        raise ValueError("the alternating orbit needs an even width >= 4")
    alt0 = Configuration.alternating(width, first=0)
    alt1 = Configuration.alternating(width, first=1)
    report = CaseReport("periodic-orbit")
    if width <= 8:
        rows = itertools.product(ARROWS, repeat=width)
    else:
        rows = (tuple(int(b) for b in
                      bits_range(seed, trial, 0, 0, width))
                for trial in range(samples))

    def one_step(cfg: Configuration, arrows) -> tuple[int, ...]:
        return tuple(a_rule(cfg.cells[(j - 1) % width], cfg.cells[j],
                            arrows[j]) for j in range(width))

    for arrows in rows:
        report.record(f"u={''.join(str(a) for a in arrows)}",
                      (alt1.cells, alt0.cells),
                      (one_step(alt0, arrows), one_step(alt1, arrows)))
    return report


def verify_color_uniformity(n: int = 3, trials: int = 100_000,
                            seed: int = 0, sites_per_trial: int = 64,
                            batch_fn: Callable = None) -> CaseReport:
    """From full occupancy with i.i.d. fair colors, surviving particles
    stay fair: the blue fraction among occupied sites is 1/2 and the blue
    density is half the occupancy density, both within 4 standard errors.

    ``batch_fn`` substitutes the trial runner (mutation checks)."""
    runner = batch_fn or density.color_density_batch
    occ, blue = runner(n, trials, seed, sites_per_trial)
    cells = occ.shape[1]
    occ_counts = occ.sum(axis=1)
    blue_counts = blue.sum(axis=1)
    live = occ_counts > 0
    cond = blue_counts[live] / occ_counts[live]
    report = CaseReport("color-uniformity")

    def band_check(name: str, values: np.ndarray, target: float) -> None:
        est = float(values.mean())
        se = float(values.std(ddof=1)) / np.sqrt(values.size)
        ok = abs(est - target) <= 4.0 * se
        report.record(f"{name}: {est:.5f} vs {target:.5f} (se {se:.2e})",
                      True, bool(ok))

    band_check("blue fraction among occupied", cond, 0.5)
    band_check("blue density", blue_counts / cells,
               float(density.exact_density(n)) / 2.0)
    return report


SUITES = {
    "commutation": verify_commutation,
    "domination": verify_domination,
    "monotonicity": verify_monotonicity,
    "projection": verify_projection,
    "periodic-orbit": verify_periodic_orbit,
}


def run_all() -> list[CaseReport]:
    """Run the five deterministic suites."""
    return [fn() for fn in SUITES.values()]
