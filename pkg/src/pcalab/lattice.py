"""Configurations and reference step kernels for the four lattice models.

All four models read the pair ``(cell i-1, cell i)`` to produce the new
cell ``i``, so one site of validity is lost on the left per step in line
mode.  The models:

* model ``a`` — binary cells; an unequal pair copies its left cell, an
  equal pair keeps or switches according to the arrow at its own site.
* model ``b`` — particles hold (UP) or hop right (RIGHT); two particles
  landing on the same site annihilate.
* model ``c`` — same motion, but colliding particles merge into one.
* model ``d`` — model ``c`` occupancy with a blue/green color attached;
  a merged particle is blue iff exactly one of its parents was blue.

Everything here is scalar and pure, and serves as the auditable reference
for the word-parallel kernels in :mod:`pcalab.packed`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .stream import RIGHT, UP, UpdateRow, UpdateStream

EMPTY = 0
PARTICLE = 1
BLUE = 1
GREEN = 2


class Model(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"

    @property
    def alphabet(self) -> tuple[int, ...]:
        return (EMPTY, PARTICLE, GREEN) if self is Model.D else (0, 1)

    @property
    def tracks_merges(self) -> bool:
        return self in (Model.C, Model.D)


@dataclass(frozen=True)
class Configuration:
    """A finite window of lattice symbols with an absolute site offset.

    ``cells[j]`` is the symbol at site ``offset + j``.  Symbols are small
    ints; which values are legal depends on the model consuming them.
    """

    offset: int
    cells: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) < 1:
            raise ValueError("configuration must contain at least one cell")

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def end(self) -> int:
        return self.offset + len(self.cells)

    def cell_at(self, site: int) -> int:
        if not self.offset <= site < self.end:
            raise ValueError(f"site {site} outside window "
                             f"[{self.offset}, {self.end})")
        return self.cells[site - self.offset]

    def window(self, start: int, stop: int) -> "Configuration":
        """Restriction to the absolute site range ``[start, stop)``."""
        if not (self.offset <= start < stop <= self.end):
            raise ValueError("window not contained in configuration")
        return Configuration(start, self.cells[start - self.offset:
                                               stop - self.offset])

    @staticmethod
    def filled(symbol: int, width: int, offset: int = 0) -> "Configuration":
        return Configuration(offset, (symbol,) * width)

    @staticmethod
    def alternating(width: int, offset: int = 0, first: int = 0) -> "Configuration":
        return Configuration(offset, tuple((first + j) % 2 for j in range(width)))

    @staticmethod
    def random_bits(stream: UpdateStream, width: int, offset: int = 0,
                    domain: int | None = None) -> "Configuration":
        """I.i.d. fair binary cells drawn from the stream's cell domain."""
        kwargs = {} if domain is None else {"domain": domain}
        bits = stream.cell_bits(offset, width, **kwargs)
        return Configuration(offset, tuple(int(b) for b in bits))


def _check_alphabet(cfg: Configuration, model: Model) -> None:
    limit = 3 if model is Model.D else 2
    if any(not 0 <= c < limit for c in cfg.cells):
        raise ValueError(f"configuration contains symbols outside the "
                         f"alphabet of model {model.value}")


# Local rules.  Each returns the new cell at the right site of the pair.

def a_local(left: int, cell: int, arrow: int) -> int:
    if left != cell:
        return left
    return cell if arrow == RIGHT else 1 - cell


def b_local(left: int, cell: int, left_arrow: int, arrow: int) -> int:
    arrive = left == PARTICLE and left_arrow == RIGHT
    stay = cell == PARTICLE and arrow == UP
    return PARTICLE if arrive != stay else EMPTY


def c_local(left: int, cell: int, left_arrow: int, arrow: int) -> int:
    arrive = left == PARTICLE and left_arrow == RIGHT
    stay = cell == PARTICLE and arrow == UP
    return PARTICLE if arrive or stay else EMPTY


def d_local(left: int, cell: int, left_arrow: int, arrow: int) -> int:
    arrive = left != EMPTY and left_arrow == RIGHT
    stay = cell != EMPTY and arrow == UP
    if arrive and stay:
        return BLUE if (left == BLUE) != (cell == BLUE) else GREEN
    if arrive:
        return left
    if stay:
        return cell
    return EMPTY


def _require_step_inputs(cfg: Configuration, row: UpdateRow, model: Model) -> None:
    _check_alphabet(cfg, model)
    if len(cfg) < 2:
        raise ValueError("stepping needs a window of at least 2 cells")
    if not row.covers(cfg.offset, len(cfg)):
        raise ValueError("update row does not cover the configuration window")


def step_a(x: Configuration, row: UpdateRow) -> Configuration:
    """One update of model ``a``; the output window loses its left site."""
    _require_step_inputs(x, row, Model.A)
    cells = tuple(a_local(x.cells[j - 1], x.cells[j], row.arrow(x.offset + j))
                  for j in range(1, len(x)))
    return Configuration(x.offset + 1, cells)


def _step_pair(model: Model, cfg: Configuration, row: UpdateRow,
               local) -> Configuration:
    _require_step_inputs(cfg, row, model)
    o = cfg.offset
    cells = tuple(local(cfg.cells[j - 1], cfg.cells[j],
                        row.arrow(o + j - 1), row.arrow(o + j))
                  for j in range(1, len(cfg)))
    return Configuration(o + 1, cells)


def step_b(y: Configuration, row: UpdateRow) -> Configuration:
    return _step_pair(Model.B, y, row, b_local)


def step_c(z: Configuration, row: UpdateRow) -> Configuration:
    return _step_pair(Model.C, z, row, c_local)


def step_d(d: Configuration, row: UpdateRow) -> Configuration:
    return _step_pair(Model.D, d, row, d_local)


_STEPPERS = {Model.A: step_a, Model.B: step_b, Model.C: step_c, Model.D: step_d}
_LOCALS = {Model.B: b_local, Model.C: c_local, Model.D: d_local}


def step_cycle(model: Model, cfg: Configuration, row: UpdateRow) -> Configuration:
    """One update with periodic boundary; the window stays put."""
    _check_alphabet(cfg, model)
    w = len(cfg)
    if w < 2:
        raise ValueError("cycle boundary needs width >= 2")
    if not row.covers(cfg.offset, w):
        raise ValueError("update row does not cover the configuration window")
    o, cells = cfg.offset, cfg.cells
    if model is Model.A:
        new = tuple(a_local(cells[(j - 1) % w], cells[j], row.arrow(o + j))
                    for j in range(w))
    else:
        local = _LOCALS[model]
        new = tuple(local(cells[(j - 1) % w], cells[j],
                          row.arrow(o + (j - 1) % w), row.arrow(o + j))
                    for j in range(w))
    return Configuration(o, new)


def phi(x: Configuration) -> Configuration:
    """Pair map onto particles: site ``i`` is occupied iff cells ``i`` and
    ``i+1`` agree.  Output keeps the offset and is one cell shorter."""
    _check_alphabet(x, Model.A)
    if len(x) < 2:
        raise ValueError("pair map needs a window of at least 2 cells")
    cells = tuple(PARTICLE if a == b else EMPTY
                  for a, b in zip(x.cells, x.cells[1:]))
    return Configuration(x.offset, cells)


def pi_b(d: Configuration) -> Configuration:
    """Keep only blue particles."""
    _check_alphabet(d, Model.D)
    return Configuration(d.offset,
                         tuple(PARTICLE if c == BLUE else EMPTY for c in d.cells))


def pi_c(d: Configuration) -> Configuration:
    """Keep particles of either color."""
    _check_alphabet(d, Model.D)
    return Configuration(d.offset,
                         tuple(PARTICLE if c != EMPTY else EMPTY for c in d.cells))


@dataclass(frozen=True)
class MergeEvent:
    """A collision: ``left_parent`` hopped onto ``right_parent`` at
    (step, site), producing particle ``child``."""

    step: int
    site: int
    left_parent: int
    right_parent: int
    child: int


@dataclass
class Trajectory:
    model: Model
    boundary: str
    configs: list[Configuration]
    rows: list[UpdateRow] = field(default_factory=list)
    id_rows: list[tuple[int, ...]] | None = None
    events: list[MergeEvent] = field(default_factory=list)
    leaf_count: int = 0

    @property
    def steps(self) -> int:
        return len(self.configs) - 1

    @property
    def final(self) -> Configuration:
        return self.configs[-1]


def _initial_ids(cfg: Configuration) -> tuple[tuple[int, ...], int]:
    ids, nxt = [], 0
    for c in cfg.cells:
        if c != EMPTY:
            ids.append(nxt)
            nxt += 1
        else:
            ids.append(-1)
    return tuple(ids), nxt


def _advance_ids(model: Model, cfg: Configuration, ids: tuple[int, ...],
                 row: UpdateRow, step_index: int, next_id: int,
                 events: list[MergeEvent], cycle: bool):
    o, w = cfg.offset, len(cfg)
    out = []
    indices = range(w) if cycle else range(1, w)
    for j in indices:
        left = (j - 1) % w if cycle else j - 1
        arrive = cfg.cells[left] != EMPTY and row.arrow(o + left) == RIGHT
        stay = cfg.cells[j] != EMPTY and row.arrow(o + j) == UP
        if arrive and stay:
            ev = MergeEvent(step_index, o + j, ids[left], ids[j], next_id)
            events.append(ev)
            out.append(next_id)
            next_id += 1
        elif arrive:
            out.append(ids[left])
        elif stay:
            out.append(ids[j])
        else:
            out.append(-1)
    return tuple(out), next_id


def evolve_with_rows(model: Model, init: Configuration, rows, *,
                     boundary: str = "line") -> Trajectory:
    """Iterate a model with explicitly supplied update rows."""
    model = Model(model)
    _check_alphabet(init, model)
    rows = list(rows)
    steps = len(rows)
    if boundary == "line":
        if len(init) < steps + 1:
            raise ValueError(f"window of width {len(init)} is exhausted "
                             f"before {steps} steps")
    elif boundary == "cycle":
        if len(init) < 2:
            raise ValueError("cycle boundary needs width >= 2")
    else:
        raise ValueError(f"unknown boundary {boundary!r}")

    track = model.tracks_merges
    traj = Trajectory(model, boundary, [init], rows)
    if track:
        ids, next_id = _initial_ids(init)
        traj.id_rows = [ids]
        traj.leaf_count = next_id
    cur = init
    for n, row in enumerate(rows):
        if boundary == "cycle":
            new = step_cycle(model, cur, row)
        else:
            new = _STEPPERS[model](cur, row)
        if track:
            ids, next_id = _advance_ids(model, cur, ids, row, n + 1, next_id,
                                        traj.events, boundary == "cycle")
            traj.id_rows.append(ids)
        traj.configs.append(new)
        cur = new
    return traj


def evolve(model: Model, init: Configuration, stream: UpdateStream,
           steps: int, *, boundary: str = "line") -> Trajectory:
    """Iterate a model ``steps`` times with rows drawn from the stream.

    Line boundary sheds one site on the left per step; cycle boundary wraps
    index arithmetic modulo the width.  Merge genealogy is recorded for
    models ``c`` and ``d``.
    """
    model = Model(model)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    width = len(init)
    if boundary == "line" and width < steps + 1:
        raise ValueError(f"window of width {width} is exhausted "
                         f"before {steps} steps")
    rows = []
    for n in range(steps):
        if boundary == "cycle":
            rows.append(stream.row(n, init.offset, width))
        else:
            rows.append(stream.row(n, init.offset + n, width - n))
    return evolve_with_rows(model, init, rows, boundary=boundary)


@dataclass(frozen=True)
class MergeForest:
    """Genealogy of particle merges.

    Initial particles are leaves; every collision adds one internal node,
    so ``len(leaves) - len(merges)`` counts the lines of descent still
    alive (on a cycle, exactly the surviving particles).
    """

    leaves: tuple[int, ...]
    merges: tuple[MergeEvent, ...]
    survivors: tuple[int, ...]

    @property
    def parents_of(self) -> dict[int, tuple[int, int]]:
        return {ev.child: (ev.left_parent, ev.right_parent) for ev in self.merges}

    def ancestors(self, particle: int) -> set[int]:
        """The particle itself plus every particle that merged into it."""
        parents = self.parents_of
        out, stack = set(), [particle]
        while stack:
            p = stack.pop()
            if p in out:
                continue
            out.add(p)
            stack.extend(parents.get(p, ()))
        return out


def trace_merges(traj: Trajectory) -> MergeForest:
    """Extract the merge forest of a model ``c`` or ``d`` trajectory."""
    if traj.id_rows is None:
        raise ValueError(f"model {traj.model.value} trajectories carry no "
                         "merge log; use model c or d")
    merged = set()
    for ev in traj.events:
        for parent in (ev.left_parent, ev.right_parent):
            if parent in merged:
                raise ValueError(f"particle {parent} merges twice")
            merged.add(parent)
    survivors = tuple(sorted(p for p in traj.id_rows[-1] if p >= 0))
    return MergeForest(tuple(range(traj.leaf_count)), tuple(traj.events),
                       survivors)


def particle_count(cfg: Configuration) -> int:
    return sum(1 for c in cfg.cells if c != EMPTY)
