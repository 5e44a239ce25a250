"""Command-line entry point.

One experiment per invocation.  ``--model ising`` evolves one binary
parameter read from the matrix on the interaction graph; ``--model entail``
runs a bundled two-parameter scenario; ``--model oracle`` verifies the
sampler against exact enumeration (Ising by default, entailment when
--scenario is given).

Temperatures are given as T (converted to beta = 1/T internally); the
literal "zero" selects the exact quench.  Identical flags, inputs and seed
produce byte-identical output files.

Exit codes: 0 success, 1 input or validation error, 2 state space exceeds
the enumeration cap.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import ingest, oracle, report
from .dynamics import EntailModel, IsingModel, SamplerConfig, run_chain
from .errors import LangspinError, TooLarge
from .graph import ParameterSpec, build_graph
from .ingest import load_scenario

__all__ = ["main", "build_parser", "ExperimentConfig"]

_DEFAULT_EDGES = "interaction_edges.csv"
_DEFAULT_MATRIX = "subject_verb.csv"


@dataclass
class ExperimentConfig:
    """Resolved experiment parameters (temperature already mapped to beta)."""

    model: str
    parameter: Optional[str]
    scenario: Optional[str]
    beta: float
    entail_energy: float
    steps: int
    burn_in: Optional[int]
    seed: int
    record_every: int
    weight_scale: float
    unknown_policy: str
    edges: Optional[str]
    matrix: Optional[str]
    aliases: Optional[str]
    out: Path


def _parse_temperature(text: str) -> float:
    """Map T to beta; "zero" means the exact zero-temperature quench."""
    if text.strip().lower() == "zero":
        return math.inf
    try:
        t = float(text)
    except ValueError:
        raise ValueError(f"temperature must be a positive number or 'zero', got {text!r}") from None
    if not t > 0 or math.isnan(t):
        raise ValueError(f"temperature must be positive, got {text!r}")
    return 1.0 / t


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="langspin",
        description="Simulate syntactic parameters as interacting spins on a "
        "weighted language graph.",
    )
    p.add_argument("--model", choices=["ising", "entail", "oracle"],
                   help="experiment type (oracle verifies the sampler against "
                   "exact enumeration; with --scenario it verifies the "
                   "entailment sampler)")
    p.add_argument("--parameter", default=None,
                   help="matrix column to simulate (default: first column)")
    p.add_argument("--scenario", default=None, choices=list(ingest.SCENARIO_NAMES),
                   help="bundled entailment case study (default for --model "
                   "entail: definiteness3)")
    p.add_argument("--temperature", default="1.0",
                   help="temperature T, or 'zero' for an exact quench (default 1.0)")
    p.add_argument("--entail-energy", type=float, default=1.0,
                   help="scale applied to every vertex coupling (default 1.0)")
    p.add_argument("--steps", type=int, default=100000,
                   help="proposal budget (default 100000)")
    p.add_argument("--burn-in", type=int, default=None,
                   help="steps discarded before averaging (default steps//10)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--record-every", type=int, default=100,
                   help="stride of the average-spin series (default 100)")
    p.add_argument("--weight-scale", type=float, default=1.0,
                   help="multiply all edge weights at load (default 1.0)")
    p.add_argument("--unknown-policy", default="set_minus_one",
                   choices=["fail", "set_minus_one", "set_random"],
                   help="how to impute '?' matrix cells (default set_minus_one)")
    p.add_argument("--edges", default=None, metavar="PATH",
                   help="edge list CSV (default: bundled interaction fixture; "
                   "for scenarios: override the scenario weights)")
    p.add_argument("--matrix", default=None, metavar="PATH",
                   help="parameter matrix CSV (default: bundled Subject-Verb fixture)")
    p.add_argument("--aliases", default=None, metavar="PATH",
                   help="alias map CSV reconciling language names (default: none)")
    p.add_argument("--out", default="langspin-out", metavar="DIR",
                   help="output directory (default ./langspin-out)")
    return p


def _read(path_text: str) -> str:
    path = Path(path_text)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LangspinError(f"cannot read {path}: {exc}") from exc


def _load_graph(cfg: ExperimentConfig):
    text = _read(cfg.edges) if cfg.edges else ingest.fixture_text(_DEFAULT_EDGES)
    records = ingest.parse_edge_list(text)
    amap = ingest.parse_alias_map(_read(cfg.aliases)) if cfg.aliases else None
    if amap is not None:
        records = [(amap.resolve(s), amap.resolve(d), w) for s, d, w in records]
    if cfg.weight_scale <= 0 or math.isnan(cfg.weight_scale):
        raise LangspinError(f"--weight-scale must be positive, got {cfg.weight_scale}")
    records = [(s, d, w * cfg.weight_scale) for s, d, w in records]
    return build_graph(records), amap


def _sampler_config(cfg: ExperimentConfig) -> SamplerConfig:
    return SamplerConfig(
        beta=cfg.beta,
        steps=cfg.steps,
        burn_in=cfg.burn_in,
        seed=cfg.seed,
        record_every=cfg.record_every,
    )


def cmd_run_ising(cfg: ExperimentConfig) -> int:
    g, amap = _load_graph(cfg)
    text = _read(cfg.matrix) if cfg.matrix else ingest.fixture_text(_DEFAULT_MATRIX)
    matrix = ingest.parse_parameter_matrix(text)
    if amap is not None:
        matrix.languages = [amap.resolve(x) for x in matrix.languages]
        matrix.cells = {(amap.resolve(l), p): v for (l, p), v in matrix.cells.items()}
    pid = cfg.parameter or matrix.parameters[0]
    if pid not in matrix.parameters:
        raise LangspinError(f"parameter {pid!r} not in matrix columns {matrix.parameters}")
    initial, imputed = ingest.resolve_initial_config(
        matrix, policy=cfg.unknown_policy, seed=cfg.seed, languages=g.names()
    )
    if imputed:
        print(f"imputed {imputed} unknown cells with policy {cfg.unknown_policy}")
    scfg = _sampler_config(cfg)
    rep = run_chain(g, initial, IsingModel(ParameterSpec(id=pid, arity=2)), scfg)
    out = cfg.out
    report.write_dot(g, {v.name: initial.get(v.name, pid) for v in g.vertices},
                     out / "initial.dot")
    report.write_dot(g, rep.local_magnetization, out / "final.dot")
    ts, mag = report.write_csv(rep, out / "ising")
    print(f"parameter {pid!r}: {cfg.steps} steps, acceptance rate "
          f"{rep.accepted / cfg.steps:.4f}")
    s = rep.summary
    print(f"local magnetization: mean {s['mean']:.6f} median {s['median']:.6f} "
          f"min {s['min']:.6f} max {s['max']:.6f}")
    print(f"wrote {ts}, {mag}, {out / 'initial.dot'}, {out / 'final.dot'}")
    return 0


def _load_scenario(cfg: ExperimentConfig):
    scenario = load_scenario(cfg.scenario or "definiteness3")
    g = scenario.graph
    if cfg.edges:
        records = ingest.parse_edge_list(_read(cfg.edges))
        records = [(s, d, w * cfg.weight_scale) for s, d, w in records]
        g = build_graph(records)
        missing = [n for n in scenario.graph.names() if n not in g]
        if missing:
            raise LangspinError(f"custom edge list misses scenario languages: {missing}")
    elif cfg.weight_scale != 1.0:
        g = build_graph([(e.src.name, e.dst.name, e.weight * cfg.weight_scale)
                         for e in g.edges])
    if math.isnan(cfg.entail_energy) or cfg.entail_energy < 0:
        raise LangspinError(f"--entail-energy must be >= 0, got {cfg.entail_energy}")
    pair = scenario.pair.scaled(cfg.entail_energy)
    return g, pair, scenario.config


def cmd_run_entail(cfg: ExperimentConfig) -> int:
    g, pair, initial = _load_scenario(cfg)
    scfg = _sampler_config(cfg)
    rep = run_chain(g, initial, EntailModel(pair), scfg)
    out = cfg.out
    files = []
    files.extend(report.write_csv(rep.p1, out / "p1"))
    files.extend(report.write_csv(rep.p2, out / "p2"))
    files.append(report.write_final_table_csv(rep, g, out / "final_table.csv"))
    print(f"scenario {cfg.scenario or 'definiteness3'}: {cfg.steps} steps, "
          f"entailment satisfied fraction {rep.entail_fraction:.4f}")
    for v in g.vertices:
        print(f"  {v.name}: ({rep.final_config.get(v.name, pair.p1.id)}, "
              f"{rep.final_config.get(v.name, pair.p2.id)})")
    print("wrote " + ", ".join(str(f) for f in files))
    return 0


def cmd_oracle(cfg: ExperimentConfig) -> int:
    if math.isinf(cfg.beta):
        raise LangspinError("oracle verification needs a finite temperature")
    if cfg.scenario:
        g, pair, initial = _load_scenario(cfg)
        model = EntailModel(pair)
    else:
        g, amap = _load_graph(cfg)
        text = _read(cfg.matrix) if cfg.matrix else ingest.fixture_text(_DEFAULT_MATRIX)
        matrix = ingest.parse_parameter_matrix(text)
        if amap is not None:
            matrix.languages = [amap.resolve(x) for x in matrix.languages]
            matrix.cells = {(amap.resolve(l), p): v for (l, p), v in matrix.cells.items()}
        pid = cfg.parameter or matrix.parameters[0]
        initial, _ = ingest.resolve_initial_config(
            matrix, policy=cfg.unknown_policy, seed=cfg.seed, languages=g.names()
        )
        model = IsingModel(ParameterSpec(id=pid, arity=2))

    dist = oracle.enumerate_states(g, model, cfg.beta)
    print(f"states: {dist.n_states}   log partition: {dist.log_partition:.12g}")

    scfg = _sampler_config(cfg)
    rep = run_chain(g, initial, model, scfg, track_occupancy=True)
    occ = rep.occupancy
    window = scfg.steps - scfg.burn_in
    freq = occ / window

    print("exact vs sampled local magnetization:")
    base = rep.p1 if isinstance(model, EntailModel) else rep
    pid = model.pair.p1.id if isinstance(model, EntailModel) else model.parameter.id
    for v in g.vertices:
        exact = oracle.exact_expectation(dist, lambda s, name=v.name: s.get(name, pid))
        sampled = base.local_magnetization[v.name]
        print(f"  {v.name}: exact {exact:+.6f} sampled {sampled:+.6f} "
              f"|diff| {abs(exact - sampled):.6f}")
    if g.edges:
        e = g.edges[0]
        a, b = e.src.name, e.dst.name
        exact_corr = oracle.exact_expectation(dist, lambda s: s.get(a, pid) * s.get(b, pid))
        sampled_corr = float(sum(
            freq[i] * dist.state(i).get(a, pid) * dist.state(i).get(b, pid)
            for i in range(dist.n_states)
        ))
        print(f"pair correlation <S_{a} S_{b}>: exact {exact_corr:+.6f} "
              f"sampled {sampled_corr:+.6f} |diff| {abs(exact_corr - sampled_corr):.6f}")
    tv = 0.5 * float(sum(abs(freq[i] - dist.probabilities[i]) for i in range(dist.n_states)))
    print(f"occupancy total-variation distance: {tv:.6f}")

    balance = oracle.detailed_balance_check(g, model, cfg.beta)
    print(f"detailed balance max violation: {balance.max_violation:.3e} "
          f"over {balance.transitions} transitions")
    print(f"reachability (strong connectivity): {oracle.reachability_check(g, model, cfg.beta)}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    if not argv:
        parser.print_help()
        return 0
    args = parser.parse_args(argv)
    if args.model is None:
        parser.print_help()
        return 0
    try:
        cfg = ExperimentConfig(
            model=args.model,
            parameter=args.parameter,
            scenario=args.scenario,
            beta=_parse_temperature(args.temperature),
            entail_energy=args.entail_energy,
            steps=args.steps,
            burn_in=args.burn_in,
            seed=args.seed,
            record_every=args.record_every,
            weight_scale=args.weight_scale,
            unknown_policy=args.unknown_policy,
            edges=args.edges,
            matrix=args.matrix,
            aliases=args.aliases,
            out=Path(args.out),
        )
        if cfg.model == "ising":
            return cmd_run_ising(cfg)
        if cfg.model == "entail":
            return cmd_run_entail(cfg)
        return cmd_oracle(cfg)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LangspinError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
