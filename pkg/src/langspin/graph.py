"""Language interaction graph, parameter space and spin configurations.

Languages are vertices of a weighted digraph.  Influence of language A on
language B is a directed edge with a non-negative weight; the two
orientations of a pair may carry different weights.  A spin configuration
assigns a value to every (language, parameter) pair: binary parameters take
values in {-1, +1}, ternary ones in {-1, 0, +1} with 0 meaning "undefined".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import DuplicateEdge, InvalidSpin, InvalidWeight, SelfLoop

__all__ = [
    "LanguageId",
    "Edge",
    "LanguageGraph",
    "ParameterSpec",
    "SpinConfiguration",
    "build_graph",
    "symmetrized_weight",
]


@dataclass(frozen=True)
class LanguageId:
    """A vertex: unique name plus a dense index used for array addressing."""

    name: str
    index: int


@dataclass(frozen=True)
class Edge:
    src: LanguageId
    dst: LanguageId
    weight: float


@dataclass(frozen=True)
class ParameterSpec:
    """A syntactic parameter: binary (arity 2) or ternary (arity 3).

    Ternary parameters exist to model an entailed parameter that may be
    undefined (value 0); they only make sense as the second member of an
    entailment pair.
    """

    id: str
    arity: int = 2

    def __post_init__(self):
        if self.arity not in (2, 3):
            raise ValueError(f"arity must be 2 or 3, got {self.arity}")

    @property
    def allowed(self) -> tuple[int, ...]:
        return (-1, 0, 1) if self.arity == 3 else (-1, 1)


class LanguageGraph:
    """Immutable weighted digraph of languages.

    At most one directed edge per ordered pair, no self-loops, all weights
    finite and >= 0.  Vertex indices follow first appearance in the input
    records, which keeps runs reproducible without sorting assumptions.
    """

    def __init__(self, vertices: Iterable[LanguageId], edges: Iterable[Edge]):
        self.vertices: tuple[LanguageId, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        self._by_name = {v.name: v for v in self.vertices}
        self._weights = {(e.src.index, e.dst.index): e.weight for e in self.edges}
        self._sym_csr = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    def language(self, name: str) -> LanguageId:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> list[str]:
        return [v.name for v in self.vertices]

    def weight(self, src: LanguageId, dst: LanguageId) -> float:
        """Directed weight J_{src,dst}; 0.0 when the edge is absent."""
        return self._weights.get((src.index, dst.index), 0.0)

    def mean_weight(self) -> float:
        """Mean weight over stored directed edges (0.0 for an edgeless graph)."""
        if not self.edges:
            return 0.0
        return sum(e.weight for e in self.edges) / len(self.edges)

    def symmetrized_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Neighbor structure (indptr, neighbor index, summed weight).

        For every unordered pair {u, v} with at least one directed edge, the
        entry holds J_uv + J_vu.  Neighbors are sorted by index so that the
        samplers iterate in a deterministic order.
        """
        if self._sym_csr is None:
            sym: dict[int, dict[int, float]] = {v.index: {} for v in self.vertices}
            for e in self.edges:
                i, j = e.src.index, e.dst.index
                sym[i][j] = sym[i].get(j, 0.0) + e.weight
                sym[j][i] = sym[j].get(i, 0.0) + e.weight
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            idx: list[int] = []
            wts: list[float] = []
            for v in range(self.n):
                nbrs = sorted(sym[v].items())
                indptr[v + 1] = indptr[v] + len(nbrs)
                idx.extend(u for u, _ in nbrs)
                wts.extend(w for _, w in nbrs)
            self._sym_csr = (
                indptr,
                np.asarray(idx, dtype=np.int64),
                np.asarray(wts, dtype=np.float64),
            )
        return self._sym_csr


def build_graph(edge_records: Iterable[tuple[str, str, float]]) -> LanguageGraph:
    """Build a LanguageGraph from (src name, dst name, weight) records.

    Vertices are the union of all endpoint names, indexed in order of first
    appearance.  Raises SelfLoop, DuplicateEdge or InvalidWeight on bad
    records.
    """
    names: dict[str, LanguageId] = {}
    edges: list[Edge] = []
    seen: set[tuple[str, str]] = set()

    def vertex(name: str) -> LanguageId:
        if name not in names:
            names[name] = LanguageId(name=name, index=len(names))
        return names[name]

    for src, dst, weight in edge_records:
        if src == dst:
            raise SelfLoop(f"self-loop on {src!r}")
        w = float(weight)
        if math.isnan(w) or math.isinf(w) or w < 0.0:
            raise InvalidWeight(f"weight for ({src!r}, {dst!r}) must be finite and >= 0, got {weight!r}")
        if (src, dst) in seen:
            raise DuplicateEdge(f"duplicate directed edge ({src!r}, {dst!r})")
        seen.add((src, dst))
        edges.append(Edge(src=vertex(src), dst=vertex(dst), weight=w))
    return LanguageGraph(names.values(), edges)


def symmetrized_weight(g: LanguageGraph, u: LanguageId, v: LanguageId) -> float:
    """J_uv + J_vu: the undirected coupling felt by the spin pair {u, v}.

    Missing directed edges contribute 0.  Raises SelfLoop when u == v.
    """
    if u.index == v.index:
        raise SelfLoop(f"symmetrized weight undefined for {u.name!r} with itself")
    return g.weight(u, v) + g.weight(v, u)


@dataclass
class SpinConfiguration:
    """Total assignment of a spin value to every (language, parameter) pair.

    Mutable and confined to a single chain at a time; copy before sharing.
    """

    params: dict[str, ParameterSpec]
    values: dict[tuple[str, str], int] = field(default_factory=dict)

    @classmethod
    def create(cls, params: Iterable[ParameterSpec]) -> "SpinConfiguration":
        return cls(params={p.id: p for p in params})

    def spec(self, param: str) -> ParameterSpec:
        return self.params[param]

    def set(self, language: str, param: str, value: int) -> None:
        spec = self.params[param]
        if value not in spec.allowed:
            raise InvalidSpin(
                f"value {value!r} not allowed for parameter {param!r} (allowed {spec.allowed})"
            )
        self.values[(language, param)] = int(value)

    def get(self, language: str, param: str) -> int:
        return self.values[(language, param)]

    def pair(self, language: str, p1: str, p2: str) -> tuple[int, int]:
        return self.get(language, p1), self.get(language, p2)

    def copy(self) -> "SpinConfiguration":
        return SpinConfiguration(params=dict(self.params), values=dict(self.values))

    def is_total(self, g: LanguageGraph) -> bool:
        """True when every (vertex, parameter) pair has a value."""
        return all(
            (v.name, p) in self.values for v in g.vertices for p in self.params
        )

    def to_vector(self, g: LanguageGraph, param: str) -> np.ndarray:
        """Values for one parameter as an int8 array ordered by vertex index."""
        out = np.empty(g.n, dtype=np.int8)
        for v in g.vertices:
            out[v.index] = self.values[(v.name, param)]
        return out

    def set_vector(self, g: LanguageGraph, param: str, vec: np.ndarray) -> None:
        for v in g.vertices:
            self.set(v.name, param, int(vec[v.index]))

    def items(self) -> Iterator[tuple[tuple[str, str], int]]:
        return iter(self.values.items())


def configuration_from(
    g: LanguageGraph,
    assignments: Mapping[str, Mapping[str, int]],
    params: Iterable[ParameterSpec],
) -> SpinConfiguration:
    """Build a configuration from {param id: {language name: value}} maps."""
    cfg = SpinConfiguration.create(params)
    for pid, by_lang in assignments.items():
        for v in g.vertices:
            cfg.set(v.name, pid, by_lang[v.name])
    return cfg
