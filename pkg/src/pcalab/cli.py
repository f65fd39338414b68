"""Command-line entry point.

Subcommands: simulate, density, oracle, verify, render, evolve-cylinder.
The whole pipeline is a pure function of (argv, PCALAB_SEED): repeated
invocations produce byte-identical output.  Exit status: 0 on success,
1 when a verification suite fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import cylinder, density, reports, verify
from .lattice import (BLUE, EMPTY, GREEN, PARTICLE, Configuration, Model,
                      evolve, particle_count)
from .render import render, style_for
from .stream import DOMAIN_COLOR, UpdateStream

_GLYPH_SYMBOLS = {
    Model.A: {"0": 0, "1": 1},
    Model.B: {".": EMPTY, "#": PARTICLE},
    Model.C: {".": EMPTY, "#": PARTICLE},
    Model.D: {".": EMPTY, "B": BLUE, "G": GREEN},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: one subcommand plus its parsed options."""

    subcommand: str
    model: str | None = None
    init: str | None = None
    width: int | None = None
    steps: int = 0
    trials: int = 10_000
    seed: int = 0
    boundary: str = "line"
    fmt: str = "text"
    out: str | None = None
    extras: dict = field(default_factory=dict)


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("PCALAB_SEED", "0"))


def _build_init(model: Model, init: str, width: int,
                stream: UpdateStream) -> Configuration:
    if width < 1:
        raise ValueError("width must be >= 1")
    if init == "full":
        if model is Model.D:
            colors = stream.cell_bits(0, width, DOMAIN_COLOR)
            return Configuration(0, tuple(BLUE if b else GREEN for b in colors))
        return Configuration.filled(1, width)
    if init == "ones":
        return Configuration.filled(1, width)
    if init == "zeros":
        return Configuration.filled(0, width)
    if init == "alternating":
        return Configuration.alternating(width)
    if init == "uniform":
        bits = stream.cell_bits(0, width)
        if model is Model.D:
            colors = stream.cell_bits(0, width, DOMAIN_COLOR)
            return Configuration(0, tuple(
                (BLUE if c else GREEN) if b else EMPTY
                for b, c in zip(bits, colors)))
        return Configuration(0, tuple(int(b) for b in bits))
    if init == "blue" and model is Model.D:
        return Configuration.filled(BLUE, width)
    if init.startswith("word:"):
        glyphs = _GLYPH_SYMBOLS[model]
        word = init[5:]
        if not word or any(ch not in glyphs for ch in word):
            raise ValueError(f"custom word {word!r} uses glyphs outside "
                             f"model {model.value}'s alphabet")
        return Configuration(0, tuple(glyphs[word[j % len(word)]]
                                      for j in range(width)))
    raise ValueError(f"unknown init {init!r} for model {model.value}")


def _simulate_traj(cfg: RunConfig):
    model = Model(cfg.model)
    stream = UpdateStream(cfg.seed, cfg.extras.get("trial", 0))
    width = cfg.width if cfg.width is not None else cfg.steps + 65
    init = _build_init(model, cfg.init, width, stream)
    return evolve(model, init, stream, cfg.steps, boundary=cfg.boundary)


def _cmd_simulate(cfg: RunConfig) -> tuple[str, int]:
    traj = _simulate_traj(cfg)
    final = traj.final
    style = style_for(traj.model)
    if cfg.fmt == "json":
        payload = {
            "model": traj.model.value,
            "boundary": cfg.boundary,
            "steps": cfg.steps,
            "seed": cfg.seed,
            "offset": final.offset,
            "cells": "".join(style.glyph(c) for c in final.cells),
            "particles": particle_count(final),
        }
        return json.dumps(payload, indent=2) + "\n", 0
    text = "".join(style.glyph(c) for c in final.cells)
    return (f"{text}\n# model={traj.model.value} steps={cfg.steps} "
            f"offset={final.offset} particles={particle_count(final)}\n"), 0


def _cmd_render(cfg: RunConfig) -> tuple[str, int]:
    traj = _simulate_traj(cfg)
    style = style_for(traj.model, show_arrows=cfg.extras.get("arrows", False))
    highlight = cfg.extras.get("highlight_particle")
    site = cfg.extras.get("highlight_site")
    if site is not None:
        final = traj.final
        ids = traj.id_rows[-1] if traj.id_rows else None
        if ids is None:
            raise ValueError("genealogy overlay requires a model with a "
                             "merge log (c or d)")
        pid = ids[site - final.offset] if final.offset <= site < final.end else -1
        if pid < 0:
            raise ValueError(f"no surviving particle at site {site}")
        highlight = pid
    return render(traj, style, fmt=cfg.fmt, highlight_particle=highlight), 0


def _cmd_density(cfg: RunConfig) -> tuple[str, int]:
    model = Model(cfg.model)
    n = cfg.extras["n"]
    sites = cfg.extras["sites"]
    if model is Model.A:
        init = {"full": "ones", "alternating": "01"}.get(cfg.init, cfg.init)
        if init.startswith("word:"):
            init = init[5:]
        rep = density.mc_pair_statistic_A(init, n, cfg.trials, cfg.seed, sites)
    elif model in (Model.B, Model.C):
        rep = density.mc_density(model, cfg.init, n, cfg.trials, cfg.seed,
                                 sites, p=cfg.extras.get("p", 0.5))
    else:
        raise ValueError("density applies to models a, b, c")
    if cfg.fmt in ("csv", "json"):
        return reports.write_report([rep], cfg.fmt), 0
    exact = "?" if rep.exact is None else str(rep.exact)
    return (f"model={rep.model} init={rep.init} n={rep.n} exact={exact} "
            f"estimate={rep.mc_estimate!r} halfwidth={rep.mc_halfwidth!r} "
            f"trials={rep.trials} seed={rep.seed}\n"), 0


def _cmd_oracle(cfg: RunConfig) -> tuple[str, int]:
    which = cfg.extras["which"]
    n = cfg.extras["n"]
    if which == "closed-form":
        return f"{density.exact_density(n)}\n", 0
    if which == "hitting-time":
        return f"{density.hitting_time_oracle(n)}\n", 0
    if which == "interface-walk":
        return f"{density.interface_walk_oracle(n)}\n", 0
    if which == "log-density":
        return f"{density.density_log(n)!r}\n", 0
    if which == "asymptotic-ratio":
        return f"{density.asymptotic_ratio(n)!r}\n", 0
    raise ValueError(f"unknown oracle {which!r}")


def _cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    suite = cfg.extras["suite"]
    if suite == "all":
        results = verify.run_all()
    elif suite == "color-uniformity":
        results = [verify.verify_color_uniformity(
            cfg.extras["n"], cfg.trials, cfg.seed, cfg.extras["sites"])]
    elif suite == "periodic-orbit":
        results = [verify.verify_periodic_orbit(
            cfg.extras["width"] or 6, seed=cfg.seed)]
    elif suite in verify.SUITES:
        results = [verify.SUITES[suite]()]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    ok = all(r.passed for r in results)
    if cfg.fmt == "json":
        text = json.dumps([r.to_dict() for r in results], indent=2) + "\n"
    else:
        lines = [f"{r.suite}: {'pass' if r.passed else 'FAIL'} "
                 f"({r.cases_passed}/{r.cases_total})" for r in results]
        text = "\n".join(lines) + "\n"
    return text, 0 if ok else 1


def _parse_cylinder_init(args, table: cylinder.TransitionFunction):
    start = args.start
    if args.init == "uniform":
        return cylinder.CylinderMeasure.uniform(table.alphabet, start,
                                                args.length)
    if args.init == "alternating-mix":
        if table.alphabet != ("0", "1"):
            raise ValueError("alternating-mix needs the binary alphabet")
        return cylinder.alternating_pair_measure(start, args.length)
    if args.init.startswith("word:"):
        word = args.init[5:]
        if all(len(s) == 1 for s in table.alphabet):
            return cylinder.CylinderMeasure.delta(table.alphabet, start,
                                                  tuple(word))
        # symbol-arrow alphabets: fix the occupancy word, arrows uniform
        half = Fraction(1, 2)
        dists = []
        for ch in word:
            dists.append(tuple(half if s[0] == ch else Fraction(0)
                               for s in table.alphabet))
        return cylinder.CylinderMeasure.product(table.alphabet, start, dists)
    raise ValueError(f"unknown cylinder init {args.init!r}")


def _cmd_evolve_cylinder(args) -> tuple[str, int]:
    if args.rule_file:
        table = cylinder.load_rule_file(args.rule_file)
    elif args.lift:
        table = cylinder.lift_model(args.lift)
    else:
        table = cylinder.model_a_rule()
    mu = _parse_cylinder_init(args, table)
    residual = None
    if args.residual:
        residual = cylinder.invariance_residual(mu, table)
    for _ in range(args.steps):
        mu = cylinder.evolve_measure(mu, table)
    if args.marginal:
        start, length = (int(t) for t in args.marginal.split(":"))
        mu = cylinder.marginal(mu, start, length)
    if args.format == "json":
        payload = {
            "start": mu.start,
            "length": mu.length,
            "weights": {"".join(w): str(p) for w, p in mu.items()},
        }
        if residual is not None:
            payload["residual"] = str(residual)
        return json.dumps(payload, indent=2) + "\n", 0
    lines = [f"window start={mu.start} length={mu.length}"]
    lines.extend(f"{''.join(w)} {p}" for w, p in mu.items())
    if residual is not None:
        lines.append(f"residual {residual}")
    return "\n".join(lines) + "\n", 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcalab",
        description="Simulate and exactly verify the four lattice models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmts, default_fmt):
        p.add_argument("--seed", type=int, default=None,
                       help="default taken from PCALAB_SEED, else 0")
        p.add_argument("--format", choices=fmts, default=default_fmt)
        p.add_argument("--out", default=None, help="write output to a file")

    for name in ("simulate", "render"):
        p = sub.add_parser(name)
        p.add_argument("--model", required=True,
                       choices=[m.value for m in Model])
        p.add_argument("--init", default="full")
        p.add_argument("--width", type=int, default=None,
                       help="default steps + 65")
        p.add_argument("--steps", type=int, default=16)
        p.add_argument("--trial", type=int, default=0)
        p.add_argument("--boundary", choices=("line", "cycle"),
                       default="line")
        if name == "render":
            p.add_argument("--arrows", action="store_true")
            p.add_argument("--highlight-particle", type=int, default=None)
            p.add_argument("--highlight-site", type=int, default=None)
            add_common(p, ("text", "svg"), "text")
        else:
            add_common(p, ("text", "json"), "text")

    p = sub.add_parser("density")
    p.add_argument("--model", required=True, choices=("a", "b", "c"))
    p.add_argument("--init", default="full")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--sites", type=int, default=64)
    p.add_argument("--p", type=float, default=0.5,
                   help="occupancy probability for --init iid")
    add_common(p, ("text", "csv", "json"), "text")

    p = sub.add_parser("oracle")
    p.add_argument("--which", required=True,
                   choices=("closed-form", "hitting-time", "interface-walk",
                            "log-density", "asymptotic-ratio"))
    p.add_argument("--n", type=int, required=True)
    add_common(p, ("text",), "text")

    p = sub.add_parser("verify")
    p.add_argument("--suite", default="all",
                   choices=("all", *verify.SUITES.keys(), "color-uniformity"))
    p.add_argument("--width", type=int, default=None,
                   help="cycle width for periodic-orbit")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--sites", type=int, default=64)
    add_common(p, ("json", "text"), "json")

    p = sub.add_parser("evolve-cylinder")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--model", choices=("a",), default="a")
    group.add_argument("--lift", choices=("b", "c"))
    group.add_argument("--rule-file", default=None)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--length", type=int, default=4)
    p.add_argument("--init", default="uniform")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--residual", action="store_true",
                   help="also report the invariance residual of the init")
    p.add_argument("--marginal", default=None, metavar="START:LENGTH")
    add_common(p, ("text", "json"), "text")
    return parser


def _to_config(args) -> RunConfig:
    extras = {}
    for key in ("trial", "n", "sites", "p", "which", "suite", "width",
                "arrows", "highlight_particle", "highlight_site"):
        if hasattr(args, key):
            extras[key] = getattr(args, key)
    return RunConfig(
        subcommand=args.command,
        model=getattr(args, "model", None),
        init=getattr(args, "init", None),
        width=getattr(args, "width", None),
        steps=getattr(args, "steps", 0),
        trials=getattr(args, "trials", 10_000),
        seed=_resolve_seed(getattr(args, "seed", None)),
        boundary=getattr(args, "boundary", "line"),
        fmt=getattr(args, "format", "text"),
        out=getattr(args, "out", None),
        extras=extras,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evolve-cylinder":
            args.seed = _resolve_seed(args.seed)
            text, status = _cmd_evolve_cylinder(args)
            out = args.out
        else:
            cfg = _to_config(args)
            handler = {
                "simulate": _cmd_simulate,
                "render": _cmd_render,
                "density": _cmd_density,
                "oracle": _cmd_oracle,
                "verify": _cmd_verify,
            }[cfg.subcommand]
            text, status = handler(cfg)
            out = cfg.out
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if out is not None:
            Path(out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    return status


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
