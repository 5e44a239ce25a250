"""Markov-chain samplers.

Independent binary parameters evolve by single-spin-flip Metropolis moves:
pick a vertex uniformly, flip it with probability 1 if the energy change is
<= 0 and exp(-beta * dH) otherwise.  The coupled-pair model picks one of the
2N (language, parameter) sites uniformly; binary sites use the same rule,
while ternary sites evaluate both cyclic neighbors of the current value
(-1 -> 0 -> +1 -> -1), accept with the Metropolis rule applied to
min(dH_plus, dH_minus), and land on the lower-energy candidate (uniform
tie-break).

beta = inf is an exact zero-temperature quench: only non-increasing moves
are ever taken.  All chains are deterministic functions of (seed, inputs).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels
from .errors import ArityMismatch, InvalidEnergy
from .graph import LanguageGraph, ParameterSpec, SpinConfiguration
from .hamiltonians import EntailmentPair, entail_total_energy, ising_energy
from .report import EntailReport, RunReport, summarize

__all__ = [
    "SamplerConfig",
    "IsingModel",
    "EntailModel",
    "IsingChain",
    "EntailChain",
    "metropolis_probability",
    "metropolis_accept",
    "entail_probability",
    "entail_accept",
    "entail_candidate_split",
    "noise_probability",
    "make_chain",
    "step_ising",
    "step_entail",
    "run_chain",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    """Chain parameters: inverse temperature, budget, burn-in, seed, stride.

    ``burn_in`` defaults to 10% of ``steps``.  ``beta`` may be ``math.inf``
    for the zero-temperature quench.
    """

    beta: float
    steps: int
    burn_in: Optional[int] = None
    seed: int = 0
    record_every: int = 1

    def __post_init__(self):
        if math.isnan(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.steps < 1:
            raise ValueError(f"steps must be positive, got {self.steps}")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.steps // 10)
        if not 0 <= self.burn_in < self.steps:
            raise ValueError(f"need 0 <= burn_in < steps, got burn_in={self.burn_in}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be positive, got {self.record_every}")

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)

    @property
    def kernel_beta(self) -> float:
        return 0.0 if self.zero_temperature else float(self.beta)


@dataclass(frozen=True)
class IsingModel:
    """Single independent binary parameter evolving on the graph."""

    parameter: ParameterSpec

    def __post_init__(self):
        if self.parameter.arity != 2:
            raise ArityMismatch(f"Ising model needs arity 2, got {self.parameter.arity}")


@dataclass(frozen=True)
class EntailModel:
    """Coupled (binary, ternary) parameter pair with vertex couplings."""

    pair: EntailmentPair


Model = Union[IsingModel, EntailModel]


def metropolis_probability(delta_h: float, beta: float) -> float:
    """pi_A for a proposed move: 1 if dH <= 0, else exp(-beta * dH)."""
    if math.isnan(delta_h):
        raise InvalidEnergy("delta_h is NaN")
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    return float(_kernels.accept_prob(delta_h, 0.0 if math.isinf(beta) else beta, math.isinf(beta)))


def metropolis_accept(delta_h: float, beta: float, u: float) -> bool:
    """Accept iff u < pi_A(delta_h); at beta = inf accepts iff delta_h <= 0."""
    return u < metropolis_probability(delta_h, beta)


def entail_probability(h_current: float, h_plus: float, h_minus: float, beta: float) -> float:
    """Acceptance probability of the ternary move: Metropolis on
    min(h_plus, h_minus) - h_current."""
    for name, h in (("h_current", h_current), ("h_plus", h_plus), ("h_minus", h_minus)):
        if math.isnan(h):
            raise InvalidEnergy(f"{name} is NaN")
    return metropolis_probability(min(h_plus, h_minus) - h_current, beta)


def entail_accept(h_current: float, h_plus: float, h_minus: float, beta: float, u: float) -> bool:
    return u < entail_probability(h_current, h_plus, h_minus, beta)


def entail_candidate_split(dh_plus: float, dh_minus: float) -> tuple[float, float]:
    """Probability that an accepted ternary move lands on (plus, minus):
    the lower-energy candidate, split evenly on an exact tie."""
    if dh_plus < dh_minus:
        return 1.0, 0.0
    if dh_minus < dh_plus:
        return 0.0, 1.0
    return 0.5, 0.5


def noise_probability(beta: float, gamma: float = 1.0) -> float:
    """Probability that a parameter sits in its preferred value at inverse
    temperature beta: 1 - exp(-beta*gamma)/2, from 1/2 (beta=0) to 1.

    Diagnostic view of the temperature semantics; it does not feed the
    acceptance rule.
    """
    if math.isnan(beta) or beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return 1.0 - math.exp(-beta * gamma) / 2.0


def _seed_state(seed: int) -> np.ndarray:
    st = np.zeros(1, dtype=np.uint64)
    st[0] = np.uint64(seed & _MASK64)
    return st


@dataclass
class IsingChain:
    """Mutable chain state for one binary parameter.

    The cached energy tracks ``ising_energy`` of the current spins; tests
    spot-check the two against each other.
    """

    graph: LanguageGraph
    parameter: ParameterSpec
    spins: np.ndarray
    energy: float
    step: int
    rng: np.ndarray
    accepted: int = 0

    @property
    def config(self) -> SpinConfiguration:
        cfg = SpinConfiguration.create([self.parameter])
        cfg.set_vector(self.graph, self.parameter.id, self.spins)
        return cfg


@dataclass
class EntailChain:
    """Mutable chain state for a coupled parameter pair."""

    graph: LanguageGraph
    pair: EntailmentPair
    s1: np.ndarray
    s2: np.ndarray
    jv: np.ndarray
    energy: float
    step: int
    rng: np.ndarray
    accepted: int = 0

    @property
    def config(self) -> SpinConfiguration:
        cfg = SpinConfiguration.create([self.pair.p1, self.pair.p2])
        cfg.set_vector(self.graph, self.pair.p1.id, self.s1)
        cfg.set_vector(self.graph, self.pair.p2.id, self.s2)
        return cfg


def make_chain(
    g: LanguageGraph, initial: SpinConfiguration, model: Model, cfg: SamplerConfig
):
    """Seeded chain whose cached energy is computed from the energy module."""
    if g.n == 0:
        raise ValueError("chains need a graph with at least one language")
    if isinstance(model, IsingModel):
        p = model.parameter
        spins = initial.to_vector(g, p.id)
        energy = ising_energy(g, initial, p)
        return IsingChain(
            graph=g, parameter=p, spins=spins, energy=energy, step=0,
            rng=_seed_state(cfg.seed),
        )
    pair = model.pair
    s1 = initial.to_vector(g, pair.p1.id)
    s2 = initial.to_vector(g, pair.p2.id)
    jv = np.asarray([pair.coupling(v.name) for v in g.vertices], dtype=np.float64)
    energy = entail_total_energy(g, pair, initial)
    return EntailChain(
        graph=g, pair=pair, s1=s1, s2=s2, jv=jv, energy=energy, step=0,
        rng=_seed_state(cfg.seed),
    )


_DUMMY_OCC = np.zeros(1, dtype=np.int64)


def _dummy_pow(n: int) -> np.ndarray:
    return np.zeros(n, dtype=np.int64)


def step_ising(
    g: LanguageGraph, chain: IsingChain, p: ParameterSpec, cfg: SamplerConfig
) -> IsingChain:
    """Advance the chain by exactly one proposal (accepted or not)."""
    if p.id != chain.parameter.id:
        raise ArityMismatch(f"chain runs parameter {chain.parameter.id!r}, not {p.id!r}")
    indptr, nbr, w = g.symmetrized_csr()
    series_step = np.zeros(1, dtype=np.int64)
    series_avg = np.zeros(1, dtype=np.float64)
    scratch = np.zeros(g.n, dtype=np.float64)
    last = np.zeros(g.n, dtype=np.int64)
    energy, accepted, _, _ = _kernels.ising_run(
        chain.spins, indptr, nbr, w,
        cfg.kernel_beta, cfg.zero_temperature,
        1, 0, 1,
        chain.rng, chain.energy,
        series_step, series_avg,
        scratch, last,
        _DUMMY_OCC, False, 0, _dummy_pow(g.n),
    )
    chain.energy = float(energy)
    chain.accepted += int(accepted)
    chain.step += 1
    return chain


def step_entail(
    g: LanguageGraph, chain: EntailChain, pair: EntailmentPair, cfg: SamplerConfig
) -> EntailChain:
    """Advance the coupled chain by exactly one proposal."""
    if pair.p1.id != chain.pair.p1.id or pair.p2.id != chain.pair.p2.id:
        raise ArityMismatch("chain was built for a different parameter pair")
    indptr, nbr, w = g.symmetrized_csr()
    series_step = np.zeros(1, dtype=np.int64)
    series1 = np.zeros(1, dtype=np.float64)
    series2 = np.zeros(1, dtype=np.float64)
    acc1 = np.zeros(g.n, dtype=np.float64)
    acc2 = np.zeros(g.n, dtype=np.float64)
    last1 = np.zeros(g.n, dtype=np.int64)
    last2 = np.zeros(g.n, dtype=np.int64)
    energy, accepted, _, _, _ = _kernels.entail_run(
        chain.s1, chain.s2, indptr, nbr, w, chain.jv,
        cfg.kernel_beta, cfg.zero_temperature,
        1, 0, 1,
        chain.rng, chain.energy,
        series_step, series1, series2,
        acc1, last1, acc2, last2,
        _DUMMY_OCC, False, 0, _dummy_pow(g.n), _dummy_pow(g.n),
    )
    chain.energy = float(energy)
    chain.accepted += int(accepted)
    chain.step += 1
    return chain


def _n_records(cfg: SamplerConfig) -> int:
    return -(-cfg.steps // cfg.record_every)


def _encode_ising(spins: np.ndarray) -> tuple[int, np.ndarray]:
    n = spins.size
    pow2 = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    idx = int(np.sum(pow2[spins == 1]))
    return idx, pow2


def _encode_entail(s1: np.ndarray, s2: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
    n = s1.size
    pow2 = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    pow3 = (np.int64(1) << np.int64(n)) * (3 ** np.arange(n, dtype=np.int64))
    idx = int(np.sum(pow2[s1 == 1])) + int(np.sum((s2.astype(np.int64) + 1) * pow3))
    return idx, pow2, pow3


def run_chain(
    g: LanguageGraph,
    initial: SpinConfiguration,
    model: Model,
    cfg: SamplerConfig,
    track_occupancy: bool = False,
):
    """Run a full chain and return its report(s).

    Records the vertex-averaged spin every ``record_every`` steps (plus the
    final step) and the per-vertex time-averaged spin over post-burn-in
    steps.  With ``track_occupancy`` the visit count of every encoded state
    is accumulated post-burn-in (small systems only).

    Returns a RunReport for an Ising model and an EntailReport (one
    RunReport per parameter) for the entailment model.
    """
    t0 = time.perf_counter()
    chain = make_chain(g, initial, model, cfg)
    indptr, nbr, w = g.symmetrized_csr()
    nrec = _n_records(cfg)
    series_step = np.zeros(nrec, dtype=np.int64)
    window = cfg.steps - cfg.burn_in

    if isinstance(model, IsingModel):
        if track_occupancy:
            if g.n > 20:
                raise ValueError("occupancy tracking needs n <= 20 vertices")
            idx, pow2 = _encode_ising(chain.spins)
            occ = np.zeros(2 ** g.n, dtype=np.int64)
        else:
            idx, pow2, occ = 0, _dummy_pow(g.n), _DUMMY_OCC
        series_avg = np.zeros(nrec, dtype=np.float64)
        mag_acc = np.zeros(g.n, dtype=np.float64)
        last = np.zeros(g.n, dtype=np.int64)
        energy, accepted, rec, _ = _kernels.ising_run(
            chain.spins, indptr, nbr, w,
            cfg.kernel_beta, cfg.zero_temperature,
            cfg.steps, cfg.burn_in, cfg.record_every,
            chain.rng, chain.energy,
            series_step, series_avg,
            mag_acc, last,
            occ, track_occupancy, idx, pow2,
        )
        chain.energy = float(energy)
        chain.step = cfg.steps
        chain.accepted = int(accepted)
        mags = {v.name: float(mag_acc[v.index] / window) for v in g.vertices}
        return RunReport(
            parameter=model.parameter.id,
            avg_spin_series=[(int(series_step[i]), float(series_avg[i])) for i in range(rec)],
            local_magnetization=mags,
            final_config=chain.config,
            summary=summarize(mags),
            config=cfg,
            accepted=int(accepted),
            wall_time=time.perf_counter() - t0,
            occupancy=occ if track_occupancy else None,
        )

    if track_occupancy:
        if 6 ** g.n > 2 ** 40:
            raise ValueError("occupancy tracking needs a small entailment instance")
        idx, pow2, pow3 = _encode_entail(chain.s1, chain.s2)
        occ = np.zeros(6 ** g.n, dtype=np.int64)
    else:
        idx, pow2, pow3, occ = 0, _dummy_pow(g.n), _dummy_pow(g.n), _DUMMY_OCC
    series1 = np.zeros(nrec, dtype=np.float64)
    series2 = np.zeros(nrec, dtype=np.float64)
    acc1 = np.zeros(g.n, dtype=np.float64)
    acc2 = np.zeros(g.n, dtype=np.float64)
    last1 = np.zeros(g.n, dtype=np.int64)
    last2 = np.zeros(g.n, dtype=np.int64)
    energy, accepted, rec, _, sat_acc = _kernels.entail_run(
        chain.s1, chain.s2, indptr, nbr, w, chain.jv,
        cfg.kernel_beta, cfg.zero_temperature,
        cfg.steps, cfg.burn_in, cfg.record_every,
        chain.rng, chain.energy,
        series_step, series1, series2,
        acc1, last1, acc2, last2,
        occ, track_occupancy, idx, pow2, pow3,
    )
    chain.energy = float(energy)
    chain.step = cfg.steps
    chain.accepted = int(accepted)
    wall = time.perf_counter() - t0
    final = chain.config
    mags1 = {v.name: float(acc1[v.index] / window) for v in g.vertices}
    mags2 = {v.name: float(acc2[v.index] / window) for v in g.vertices}
    steps_list = [int(series_step[i]) for i in range(rec)]
    pair = model.pair
    rep1 = RunReport(
        parameter=pair.p1.id,
        avg_spin_series=[(s, float(series1[i])) for i, s in enumerate(steps_list)],
        local_magnetization=mags1,
        final_config=final,
        summary=summarize(mags1),
        config=cfg,
        accepted=int(accepted),
        wall_time=wall,
    )
    rep2 = RunReport(
        parameter=pair.p2.id,
        avg_spin_series=[(s, float(series2[i])) for i, s in enumerate(steps_list)],
        local_magnetization=mags2,
        final_config=final,
        summary=summarize(mags2),
        config=cfg,
        accepted=int(accepted),
        wall_time=wall,
    )
    return EntailReport(
        p1=rep1,
        p2=rep2,
        final_config=final,
        entail_fraction=float(sat_acc) / (g.n * window),
        config=cfg,
        accepted=int(accepted),
        wall_time=wall,
        occupancy=occ if track_occupancy else None,
    )
