"""Energy functions for the spin models.

Two model families share the graph:

* independent binary parameters, with the product-form energy
  ``H_p = - sum_edges J * S_u * S_v`` summed over directed edges, and
* a coupled pair (binary p1, ternary p2), whose energy is a Kronecker-delta
  edge term over both parameters plus a per-language vertex term that makes
  the combinations (p1=+1, p2=+-1) and (p1=-1, p2=0) the preferred states.

Each directed edge contributes one term, so a symmetric pair of edges
contributes J_uv + J_vu, consistent with ``symmetrized_weight``.  All
functions are pure; the incremental deltas must agree with full
recomputation to float accuracy (the test suite enforces this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ArityMismatch, InvalidSpin, InvalidWeight
from .graph import LanguageGraph, LanguageId, ParameterSpec, SpinConfiguration

__all__ = [
    "EntailmentPair",
    "ising_energy",
    "ising_delta",
    "potts_edge_energy",
    "entail_vertex_energy",
    "entail_total_energy",
]


@dataclass(frozen=True)
class EntailmentPair:
    """A coupled (binary p1, ternary p2) parameter pair.

    ``couplings`` maps each language name to the vertex coupling strength
    J_l >= 0 that penalizes states violating the entailment relation.
    """

    p1: ParameterSpec
    p2: ParameterSpec
    couplings: Mapping[str, float]

    def __post_init__(self):
        if self.p1.arity != 2:
            raise ArityMismatch(f"p1 must be binary, got arity {self.p1.arity}")
        if self.p2.arity != 3:
            raise ArityMismatch(f"p2 must be ternary, got arity {self.p2.arity}")
        for lang, j in self.couplings.items():
            if math.isnan(j) or math.isinf(j) or j < 0.0:
                raise InvalidWeight(f"coupling for {lang!r} must be finite and >= 0, got {j!r}")

    def coupling(self, language: str) -> float:
        return self.couplings[language]

    def scaled(self, factor: float) -> "EntailmentPair":
        """Copy with every vertex coupling multiplied by ``factor``."""
        return EntailmentPair(
            p1=self.p1,
            p2=self.p2,
            couplings={k: v * factor for k, v in self.couplings.items()},
        )


def _check_value(value: int, p: ParameterSpec) -> int:
    if value not in p.allowed:
        raise InvalidSpin(f"value {value!r} outside allowed set of {p.id!r}")
    return value


def ising_energy(g: LanguageGraph, s: SpinConfiguration, p: ParameterSpec) -> float:
    """Product-form energy of a binary parameter: -sum J_uv * S_u * S_v.

    Each directed edge is counted once; a symmetric pair therefore couples
    with J_uv + J_vu.
    """
    if p.arity != 2:
        raise ArityMismatch(f"ising_energy needs a binary parameter, got arity {p.arity}")
    total = 0.0
    for e in g.edges:
        su = _check_value(s.get(e.src.name, p.id), p)
        sv = _check_value(s.get(e.dst.name, p.id), p)
        total -= e.weight * su * sv
    return total


def ising_delta(
    g: LanguageGraph, s: SpinConfiguration, p: ParameterSpec, v: LanguageId
) -> float:
    """Energy change from flipping S_{v,p}: 2 * S_v * sum_u (J_vu + J_uv) * S_u."""
    if p.arity != 2:
        raise ArityMismatch(f"ising_delta needs a binary parameter, got arity {p.arity}")
    indptr, nbr, wts = g.symmetrized_csr()
    sv = _check_value(s.get(v.name, p.id), p)
    local = 0.0
    for k in range(indptr[v.index], indptr[v.index + 1]):
        u = g.vertices[int(nbr[k])]
        local += wts[k] * s.get(u.name, p.id)
    return 2.0 * sv * local


def potts_edge_energy(
    g: LanguageGraph, s: SpinConfiguration, params: Iterable[ParameterSpec]
) -> float:
    """Kronecker-delta edge energy: -sum over directed edges and parameters
    of J_uv * [S_u == S_v].  Works for any arity."""
    total = 0.0
    for p in params:
        for e in g.edges:
            su = _check_value(s.get(e.src.name, p.id), p)
            sv = _check_value(s.get(e.dst.name, p.id), p)
            if su == sv:
                total -= e.weight
    return total


def entail_vertex_energy(
    pair: EntailmentPair, s: SpinConfiguration, language: LanguageId | str
) -> float:
    """Vertex coupling at one language: J_l when the entailment is violated.

    With X = 0 for S_p1 = +1 and X = 1 for S_p1 = -1, and Y = |S_p2|, the
    energy is J_l * [X == Y]; the ground combinations are exactly
    (+1, +-1) and (-1, 0).
    """
    name = language.name if isinstance(language, LanguageId) else language
    s1 = _check_value(s.get(name, pair.p1.id), pair.p1)
    s2 = _check_value(s.get(name, pair.p2.id), pair.p2)
    x = 0 if s1 == 1 else 1
    y = abs(s2)
    return pair.coupling(name) if x == y else 0.0


def entail_total_energy(
    g: LanguageGraph, pair: EntailmentPair, s: SpinConfiguration
) -> float:
    """Edge term over {p1, p2} plus the vertex coupling summed over languages."""
    total = potts_edge_energy(g, s, (pair.p1, pair.p2))
    for v in g.vertices:
        total += entail_vertex_energy(pair, s, v)
    return total
