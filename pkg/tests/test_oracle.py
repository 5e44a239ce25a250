"""Exact enumeration oracle: frozen small-instance values, balance checks,
and agreement between the sampler and the exact Gibbs measure."""

import math

import numpy as np
import pytest

from langspin.dynamics import EntailModel, IsingModel, SamplerConfig, run_chain
from langspin.errors import TooLarge
from langspin.graph import build_graph
from langspin.oracle import (
    detailed_balance_check,
    enumerate_states,
    exact_expectation,
    reachability_check,
    state_count,
    transition_probabilities,
)

from conftest import (
    binary_param,
    complete_graph,
    config_for,
    single_language_pair,
    single_vertex_graph,
    two_vertex_graph,
)


def hand_two_vertex_energy(s_a, s_b, j_ab, j_ba):
    """Independent hand-written energy for the 2-vertex fixture (guards
    against a bug shared between the oracle and the energy module)."""
    return -(j_ab + j_ba) * s_a * s_b


class TestEnumerate:
    def test_single_free_spin(self):
        g = single_vertex_graph("A")
        p = binary_param()
        d = enumerate_states(g, IsingModel(p), beta=3.0)
        assert d.n_states == 2
        assert np.allclose(d.probabilities, 0.5)

    def test_two_vertex_partition_function(self):
        g = two_vertex_graph()
        p = binary_param()
        d = enumerate_states(g, IsingModel(p), beta=1.0)
        z = math.exp(d.log_partition)
        assert z == pytest.approx(2 * math.e ** 2 + 2 * math.e ** -2, rel=1e-12)
        # aligned states are 00 and 11 in the bit encoding
        aligned = d.probabilities[0b00] + d.probabilities[0b11]
        assert aligned == pytest.approx(
            2 * math.e ** 2 / (2 * math.e ** 2 + 2 * math.e ** -2), rel=1e-12
        )

    def test_two_vertex_against_hand_energy(self):
        g = build_graph([("A", "B", 0.8), ("B", "A", 0.5)])
        p = binary_param()
        d = enumerate_states(g, IsingModel(p), beta=0.9)
        for i in range(4):
            s = d.state(i)
            expected = hand_two_vertex_energy(s.get("A", "p"), s.get("B", "p"), 0.8, 0.5)
            assert d.energies[i] == pytest.approx(expected, abs=1e-12)

    def test_single_language_entailment_distribution(self):
        """6 states; the three ground states each carry 1/(3 + 3e^-1)."""
        g, pair = single_language_pair(j=1.0)
        d = enumerate_states(g, EntailModel(pair), beta=1.0)
        assert d.n_states == 6
        by_state = {}
        for i in range(6):
            s = d.state(i)
            by_state[(s.get("L", "p1"), s.get("L", "p2"))] = d.probabilities[i]
        ground = 1 / (3 + 3 * math.e ** -1)
        for key in [(1, 1), (1, -1), (-1, 0)]:
            assert by_state[key] == pytest.approx(ground, rel=1e-12)
        for key in [(1, 0), (-1, 1), (-1, -1)]:
            assert by_state[key] == pytest.approx(ground * math.e ** -1, rel=1e-12)

    def test_probabilities_normalized(self):
        g = complete_graph(3, j=0.7)
        d = enumerate_states(g, IsingModel(binary_param()), beta=2.0)
        assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
        assert d.n_states == state_count(g, IsingModel(binary_param()))
        assert math.isfinite(d.log_partition)

    def test_large_beta_logsumexp(self):
        g = complete_graph(4, j=3.0)
        d = enumerate_states(g, IsingModel(binary_param()), beta=200.0)
        assert math.isfinite(d.log_partition)
        assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-12)

    def test_cap_enforced(self):
        g = complete_graph(4)
        with pytest.raises(TooLarge) as exc:
            enumerate_states(g, IsingModel(binary_param()), beta=1.0, cap=8)
        assert exc.value.state_count == 16

    def test_shift_invariance(self):
        """Adding a constant to every energy leaves probabilities unchanged."""
        g = complete_graph(3, j=0.4)
        d = enumerate_states(g, IsingModel(binary_param()), beta=1.3)
        shifted = d.energies + 7.5
        logw = -1.3 * shifted
        m = logw.max()
        probs = np.exp(logw - m) / np.exp(logw - m).sum()
        assert np.allclose(probs, d.probabilities, atol=1e-14)


class TestExactExpectation:
    def test_normalization(self):
        g = two_vertex_graph()
        d = enumerate_states(g, IsingModel(binary_param()), beta=1.0)
        assert exact_expectation(d, lambda s: 1.0) == pytest.approx(1.0)

    def test_symmetry_forces_zero_magnetization(self):
        g = two_vertex_graph()
        d = enumerate_states(g, IsingModel(binary_param()), beta=1.0)
        assert exact_expectation(d, lambda s: s.get("A", "p")) == pytest.approx(0.0, abs=1e-15)

    def test_pair_correlation_is_tanh(self):
        g = two_vertex_graph()
        d = enumerate_states(g, IsingModel(binary_param()), beta=1.0)
        corr = exact_expectation(d, lambda s: s.get("A", "p") * s.get("B", "p"))
        assert corr == pytest.approx(math.tanh(2.0), rel=1e-12)


class TestDetailedBalance:
    def test_ising_satisfies_balance(self):
        g = build_graph([
            ("A", "B", 0.9), ("B", "A", 0.2), ("B", "C", 0.5), ("C", "A", 1.3),
        ])
        rep = detailed_balance_check(g, IsingModel(binary_param()), beta=1.0)
        assert rep.max_violation <= 1e-12

    def test_infinite_temperature(self):
        g = complete_graph(3)
        rep = detailed_balance_check(g, IsingModel(binary_param()), beta=0.0)
        assert rep.max_violation <= 1e-15

    def test_entail_kernel_violation_is_reported(self):
        """The coupled-pair kernel is not exactly balanced; the check reports
        the deviation instead of asserting it away."""
        g, pair = single_language_pair(j=1.0)
        rep = detailed_balance_check(g, EntailModel(pair), beta=1.0)
        assert math.isfinite(rep.max_violation)
        assert rep.max_violation >= 0.0
        # from (p1=+1, p2=-1) the move to (p1=+1, p2=0) has zero probability
        # but its reverse does not, so the violation is strictly positive
        assert rep.max_violation > 1e-6


class TestReachability:
    def test_ising_strongly_connected(self):
        g = build_graph([("A", "B", 0.9), ("B", "C", 0.5)])
        assert reachability_check(g, IsingModel(binary_param()), beta=1.0)

    def test_zero_temperature_rejected(self):
        g = two_vertex_graph()
        with pytest.raises(ValueError):
            reachability_check(g, IsingModel(binary_param()), beta=math.inf)

    def test_entailment_six_states_connected(self):
        g, pair = single_language_pair(j=1.0)
        assert reachability_check(g, EntailModel(pair), beta=1.0)

    def test_entail_kernel_has_forbidden_moves(self):
        """Sanity: connectivity holds even though some single-site moves have
        zero probability under the lower-candidate rule."""
        g, pair = single_language_pair(j=1.0)
        d = enumerate_states(g, EntailModel(pair), beta=1.0)
        kernel = transition_probabilities(g, EntailModel(pair), 1.0, d)
        n_possible = sum(1 for p in kernel.values() if p > 0)
        # 6 states, each with a p1 flip and up to 2 ternary targets; the
        # lower-candidate rule forbids some of the ternary moves
        assert 0 < n_possible < 6 * 3


class TestSamplerAgainstOracle:
    def test_occupancy_matches_gibbs(self, warm_kernels):
        """Total-variation distance between the empirical occupancy and the
        exact Gibbs measure on well-mixing small instances."""
        cases = [
            (two_vertex_graph(), 1.0, [1, 1]),
            (build_graph([("A", "B", 0.6), ("B", "C", 0.4), ("C", "A", 0.5)]),
             0.8, [1, -1, 1]),
            (complete_graph(4, j=0.15), 1.0, [1, 1, -1, -1]),
        ]
        p = binary_param()
        for g, beta, init_values in cases:
            d = enumerate_states(g, IsingModel(p), beta=beta)
            cfg = SamplerConfig(beta=beta, steps=10 ** 6, burn_in=10 ** 5,
                                seed=1, record_every=10 ** 4)
            rep = run_chain(g, config_for(g, p, init_values), IsingModel(p), cfg,
                            track_occupancy=True)
            freq = rep.occupancy / (cfg.steps - cfg.burn_in)
            tv = 0.5 * np.abs(freq - d.probabilities).sum()
            assert tv <= 0.02

    def test_magnetization_matches_exact(self, warm_kernels):
        g = two_vertex_graph()
        p = binary_param()
        d = enumerate_states(g, IsingModel(p), beta=1.0)
        cfg = SamplerConfig(beta=1.0, steps=10 ** 6, burn_in=10 ** 5, seed=1,
                            record_every=10 ** 4)
        rep = run_chain(g, config_for(g, p, [1, -1]), IsingModel(p), cfg)
        for v in g.vertices:
            exact = exact_expectation(d, lambda s, n=v.name: s.get(n, "p"))
            assert rep.local_magnetization[v.name] == pytest.approx(exact, abs=0.02)
