"""Shared builders for the test suite."""

import pytest

from langspin.graph import LanguageGraph, LanguageId, ParameterSpec, SpinConfiguration, build_graph
from langspin.hamiltonians import EntailmentPair

MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """splitmix64 output function; deterministic weights for generated graphs."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def unit_from(x: int) -> float:
    return (mix64(x) >> 11) * 2.0 ** -53


def two_vertex_graph(j_ab=1.0, j_ba=1.0):
    return build_graph([("A", "B", j_ab), ("B", "A", j_ba)])


def binary_param(pid="p"):
    return ParameterSpec(id=pid, arity=2)


def ternary_param(pid="q"):
    return ParameterSpec(id=pid, arity=3)


def config_for(graph, param, values):
    cfg = SpinConfiguration.create([param])
    for v, s in zip(graph.vertices, values):
        cfg.set(v.name, param.id, s)
    return cfg


def pair_config(graph, pair, p1_values, p2_values):
    cfg = SpinConfiguration.create([pair.p1, pair.p2])
    for v, s in zip(graph.vertices, p1_values):
        cfg.set(v.name, pair.p1.id, s)
    for v, s in zip(graph.vertices, p2_values):
        cfg.set(v.name, pair.p2.id, s)
    return cfg


def single_vertex_graph(name="L"):
    """Edgeless one-vertex graph (build_graph needs edges, so build directly)."""
    return LanguageGraph([LanguageId(name=name, index=0)], [])


def single_language_pair(j=1.0):
    """One isolated language with an entailment pair: the 6-state instance."""
    g = single_vertex_graph("L")
    p1 = binary_param("p1")
    p2 = ternary_param("p2")
    pair = EntailmentPair(p1=p1, p2=p2, couplings={"L": j})
    return g, pair


def all_digraphs(n):
    """Every self-loop-free digraph topology on n vertices, with deterministic
    pseudo-random weights; yields (graph_id, edge_records)."""
    names = [f"v{i}" for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for mask in range(1 << len(pairs)):
        records = []
        for k, (a, b) in enumerate(pairs):
            if (mask >> k) & 1:
                w = 0.2 + 1.3 * unit_from(mask * 64 + k)
                records.append((names[a], names[b], round(w, 6)))
        yield mask, records


def complete_graph(n, j=0.5):
    names = [f"v{i}" for i in range(n)]
    return build_graph([(a, b, j) for a in names for b in names if a != b])


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile the numba kernels once so timed tests measure steps, not JIT."""
    from langspin import IsingModel, SamplerConfig, run_chain
    from langspin.dynamics import EntailModel

    g = two_vertex_graph()
    p = binary_param()
    cfg = config_for(g, p, [1, 1])
    run_chain(g, cfg, IsingModel(p), SamplerConfig(beta=1.0, steps=64, seed=0))
    gl, pairl = single_language_pair()
    pc = pair_config(gl, pairl, [1], [1])
    run_chain(gl, pc, EntailModel(pairl), SamplerConfig(beta=1.0, steps=64, seed=0))
    return True
