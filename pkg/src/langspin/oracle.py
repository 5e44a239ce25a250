"""Exact brute-force reference for small instances.

Enumerates the full state space, computes the partition function by
log-sum-exp (large beta would overflow a direct sum of exp(-beta*H)), and
checks detailed balance and reachability of the samplers' transition
kernels against the exact Gibbs probabilities.

State indexing is mixed-radix and matches the samplers' occupancy encoding:
binary digits (spin +1 -> 1) ordered by vertex index; for the coupled model
the ternary digits (value + 1) follow, scaled by 2^N * 3^v.  Energies are
computed with the same functions the samplers are tested against, plus the
test suite keeps an independent hand-written energy for tiny fixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .dynamics import (
    EntailModel,
    IsingModel,
    Model,
    entail_candidate_split,
    entail_probability,
    metropolis_probability,
)
from .errors import TooLarge
from .graph import LanguageGraph, SpinConfiguration
from .hamiltonians import entail_total_energy, ising_energy

__all__ = [
    "DEFAULT_CAP",
    "ExactDistribution",
    "BalanceReport",
    "state_count",
    "enumerate_states",
    "exact_expectation",
    "transition_probabilities",
    "detailed_balance_check",
    "reachability_check",
]

DEFAULT_CAP = 2 ** 20


def state_count(g: LanguageGraph, model: Model) -> int:
    if isinstance(model, IsingModel):
        return 2 ** g.n
    return 6 ** g.n


def _decode_ising(g: LanguageGraph, model: IsingModel, idx: int) -> SpinConfiguration:
    cfg = SpinConfiguration.create([model.parameter])
    pid = model.parameter.id
    for v in g.vertices:
        cfg.set(v.name, pid, 1 if (idx >> v.index) & 1 else -1)
    return cfg


def _decode_entail(g: LanguageGraph, model: EntailModel, idx: int) -> SpinConfiguration:
    n = g.n
    cfg = SpinConfiguration.create([model.pair.p1, model.pair.p2])
    lo = idx & ((1 << n) - 1)
    hi = idx >> n
    for v in g.vertices:
        cfg.set(v.name, model.pair.p1.id, 1 if (lo >> v.index) & 1 else -1)
        cfg.set(v.name, model.pair.p2.id, (hi // 3 ** v.index) % 3 - 1)
    return cfg


@dataclass
class ExactDistribution:
    """Exact energies and Gibbs probabilities over the enumerated states."""

    graph: LanguageGraph
    model: Model
    beta: float
    energies: np.ndarray
    probabilities: np.ndarray
    log_partition: float

    @property
    def n_states(self) -> int:
        return self.energies.size

    def state(self, idx: int) -> SpinConfiguration:
        if isinstance(self.model, IsingModel):
            return _decode_ising(self.graph, self.model, idx)
        return _decode_entail(self.graph, self.model, idx)

    def states(self) -> Iterator[SpinConfiguration]:
        return (self.state(i) for i in range(self.n_states))


def enumerate_states(
    g: LanguageGraph, model: Model, beta: float, cap: int = DEFAULT_CAP
) -> ExactDistribution:
    """Exact distribution over all states; raises TooLarge above ``cap``."""
    if math.isinf(beta) or math.isnan(beta):
        raise ValueError(f"enumeration needs finite beta, got {beta}")
    count = state_count(g, model)
    if count > cap:
        raise TooLarge(count, cap)
    energies = np.empty(count, dtype=np.float64)
    if isinstance(model, IsingModel):
        for i in range(count):
            energies[i] = ising_energy(g, _decode_ising(g, model, i), model.parameter)
    else:
        for i in range(count):
            energies[i] = entail_total_energy(g, model.pair, _decode_entail(g, model, i))
    logw = -beta * energies
    m = float(np.max(logw))
    shifted = np.exp(logw - m)
    z_shifted = float(np.sum(shifted))
    return ExactDistribution(
        graph=g,
        model=model,
        beta=beta,
        energies=energies,
        probabilities=shifted / z_shifted,
        log_partition=m + math.log(z_shifted),
    )


def exact_expectation(
    d: ExactDistribution, observable: Callable[[SpinConfiguration], float]
) -> float:
    """Exact expectation: sum over states of P(s) * observable(s)."""
    total = 0.0
    for i in range(d.n_states):
        total += float(d.probabilities[i]) * float(observable(d.state(i)))
    return total


def _ising_flip(g: LanguageGraph, idx: int, v: int) -> int:
    return idx ^ (1 << v)


def transition_probabilities(
    g: LanguageGraph, model: Model, beta: float, d: ExactDistribution
) -> dict[tuple[int, int], float]:
    """Off-diagonal transition probabilities of the sampler's kernel.

    Uses the samplers' acceptance functions composed with the uniform
    proposal.  For ternary sites only the lower-energy candidate (or both,
    halved, on a tie) receives probability, exactly as the chain moves.
    """
    n = g.n
    probs: dict[tuple[int, int], float] = {}
    if isinstance(model, IsingModel):
        sel = 1.0 / n
        for i in range(d.n_states):
            for v in range(n):
                j = _ising_flip(g, i, v)
                a = metropolis_probability(float(d.energies[j] - d.energies[i]), beta)
                if a > 0.0:
                    probs[(i, j)] = probs.get((i, j), 0.0) + sel * a
        return probs
    sel = 1.0 / (2 * n)
    pow3 = [3 ** v for v in range(n)]
    for i in range(d.n_states):
        lo = i & ((1 << n) - 1)
        hi = i >> n
        for v in range(n):
            # binary site
            j = (lo ^ (1 << v)) | (hi << n)
            a = metropolis_probability(float(d.energies[j] - d.energies[i]), beta)
            if a > 0.0:
                probs[(i, j)] = probs.get((i, j), 0.0) + sel * a
            # ternary site: cyclic moves to the two other values
            digit = (hi // pow3[v]) % 3
            jp = i + ((digit + 1) % 3 - digit) * pow3[v] * (1 << n)
            jm = i + ((digit + 2) % 3 - digit) * pow3[v] * (1 << n)
            dh_p = float(d.energies[jp] - d.energies[i])
            dh_m = float(d.energies[jm] - d.energies[i])
            a = entail_probability(0.0, dh_p, dh_m, beta)
            if a > 0.0:
                w_p, w_m = entail_candidate_split(dh_p, dh_m)
                if w_p > 0.0:
                    probs[(i, jp)] = probs.get((i, jp), 0.0) + sel * a * w_p
                if w_m > 0.0:
                    probs[(i, jm)] = probs.get((i, jm), 0.0) + sel * a * w_m
    return probs


@dataclass
class BalanceReport:
    """Worst detailed-balance violation over all ordered state pairs."""

    max_violation: float
    worst_pair: tuple[int, int]
    transitions: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def detailed_balance_check(
    g: LanguageGraph,
    model: Model,
    beta: float,
    tolerance: float = 1e-12,
    cap: int = DEFAULT_CAP,
) -> BalanceReport:
    """Scan every adjacent state pair for |P(s)K(s,s') - P(s')K(s',s)|."""
    d = enumerate_states(g, model, beta, cap=cap)
    kernel = transition_probabilities(g, model, beta, d)
    worst = 0.0
    worst_pair = (0, 0)
    seen = set()
    for (i, j), pij in kernel.items():
        if (j, i) in seen:
            continue
        seen.add((i, j))
        pji = kernel.get((j, i), 0.0)
        v = abs(float(d.probabilities[i]) * pij - float(d.probabilities[j]) * pji)
        if v > worst:
            worst = v
            worst_pair = (i, j)
    return BalanceReport(
        max_violation=worst,
        worst_pair=worst_pair,
        transitions=len(kernel),
        tolerance=tolerance,
    )


def reachability_check(
    g: LanguageGraph, model: Model, beta: float = 1.0, cap: int = DEFAULT_CAP
) -> bool:
    """True iff the positive-probability transition graph is strongly
    connected.  Defined only for finite beta (at beta = inf ground states
    absorb)."""
    if math.isinf(beta):
        raise ValueError("reachability is defined only for finite beta")
    d = enumerate_states(g, model, beta, cap=cap)
    kernel = transition_probabilities(g, model, beta, d)
    n = d.n_states
    fwd: list[list[int]] = [[] for _ in range(n)]
    bwd: list[list[int]] = [[] for _ in range(n)]
    for (i, j), p in kernel.items():
        if p > 0.0:
            fwd[i].append(j)
            bwd[j].append(i)

    def full_reach(adj: list[list[int]]) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n

    return full_reach(fwd) and full_reach(bwd)
