"""Numba hot loops for the samplers.

Everything here is deterministic given the RNG seed.  The generator is
splitmix64 (64-bit Weyl counter + mixing hash); per-chain streams are derived
by hashing (master seed, chain index), see ``derive_seed``.

Random draws per proposal, in order:
  1. site selection,
  2. acceptance uniform,
  3. tie-break uniform (ternary sites only, drawn only when the move was
     accepted and the two candidates have exactly equal energy).

Per-vertex magnetization sums are accumulated lazily: a vertex's
contribution is added only when its value changes and once more when the
run ends, so the per-step cost stays O(degree).
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.1102230246251565e-16  # 2**-53


@njit(inline="always")
def _next_u64(state):
    state[0] = state[0] + _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(inline="always")
def _next_unit(state):
    """Uniform double in [0, 1) with 53 random bits."""
    return (_next_u64(state) >> np.uint64(11)) * _INV53


@njit(cache=True)
def rng_uniform(state):
    """Python-visible wrapper around the kernel RNG (testing, imputation)."""
    return _next_unit(state)


@njit(cache=True)
def _derive(master, index):
    st = np.empty(1, dtype=np.uint64)
    st[0] = np.uint64(master)
    for _ in range(np.int64(index) + 1):
        out = _next_u64(st)
    return out


def derive_seed(master: int, index: int) -> int:
    """Deterministic per-chain seed: the (index+1)-th splitmix output of master."""
    return int(_derive(np.uint64(master & 0xFFFFFFFFFFFFFFFF), index))


@njit(inline="always")
def _accept_prob(dh, beta, zero_t):
    # pi_A: 1 for downhill/flat moves, exp(-beta*dh) uphill, 0 uphill at T=0.
    if dh <= 0.0:
        return 1.0
    if zero_t:
        return 0.0
    return np.exp(-beta * dh)


@njit(cache=True)
def accept_prob(dh, beta, zero_t):
    """Python-visible acceptance probability (same code path as the kernels)."""
    return _accept_prob(dh, beta, zero_t)


@njit(cache=True)
def ising_run(
    spins,          # int8[n], mutated in place
    indptr, nbr, w,  # symmetrized CSR adjacency
    beta, zero_t,
    steps, burn_in, record_every,
    rng,            # uint64[1], mutated
    energy,         # cached energy of `spins`
    series_step, series_avg,   # int64[R], float64[R]; R = ceil(steps/record_every)
    mag_acc, last_change,      # float64[n], int64[n] (zeroed by caller)
    occupancy, track_occ, state_idx, pow2,
):
    n = spins.size
    ssum = np.int64(0)
    for i in range(n):
        ssum += spins[i]
    accepted = np.int64(0)
    rec = 0
    for t in range(steps):
        v = int(_next_unit(rng) * n)
        local = 0.0
        for k in range(indptr[v], indptr[v + 1]):
            local += w[k] * spins[nbr[k]]
        dh = 2.0 * spins[v] * local
        u = _next_unit(rng)
        if u < _accept_prob(dh, beta, zero_t):
            t1 = t + 1
            old = spins[v]
            if t1 > burn_in:
                span = t1 - max(last_change[v], burn_in + 1)
                if span > 0:
                    mag_acc[v] += old * span
            last_change[v] = t1
            spins[v] = -old
            ssum -= 2 * old
            energy += dh
            accepted += 1
            if track_occ:
                if spins[v] == 1:
                    state_idx += pow2[v]
                else:
                    state_idx -= pow2[v]
        t1 = t + 1
        if track_occ and t1 > burn_in:
            occupancy[state_idx] += 1
        if t1 % record_every == 0 or t1 == steps:
            series_step[rec] = t1
            series_avg[rec] = ssum / n
            rec += 1
    # flush lazy accumulators
    for i in range(n):
        span = steps - max(last_change[i], burn_in + 1) + 1
        if span > 0:
            mag_acc[i] += spins[i] * span
    return energy, accepted, rec, state_idx


@njit(cache=True)
def entail_run(
    s1, s2,          # int8[n] each: p1 in {-1,+1}, p2 in {-1,0,+1}
    indptr, nbr, w,
    jv,              # float64[n] vertex couplings
    beta, zero_t,
    steps, burn_in, record_every,
    rng,
    energy,
    series_step, series1, series2,
    acc1, last1, acc2, last2,
    occupancy, track_occ, state_idx, pow2, pow3,
):
    n = s1.size
    s1sum = np.int64(0)
    s2sum = np.int64(0)
    n_sat = np.int64(0)
    for i in range(n):
        s1sum += s1[i]
        s2sum += s2[i]
        x = 0 if s1[i] == 1 else 1
        y = 0 if s2[i] == 0 else 1
        if x != y:
            n_sat += 1
    sat_acc = np.int64(0)
    accepted = np.int64(0)
    rec = 0
    for t in range(steps):
        site = int(_next_unit(rng) * (2 * n))
        t1 = t + 1
        if site < n:
            # binary site: ordinary single-flip Metropolis move
            v = site
            old = s1[v]
            m_old = 0.0
            m_new = 0.0
            for k in range(indptr[v], indptr[v + 1]):
                if s1[nbr[k]] == old:
                    m_old += w[k]
                else:
                    m_new += w[k]
            x_old = 0 if old == 1 else 1
            x_new = 1 - x_old
            y = 0 if s2[v] == 0 else 1
            dh = (m_old - m_new) + jv[v] * (
                (1.0 if x_new == y else 0.0) - (1.0 if x_old == y else 0.0)
            )
            u = _next_unit(rng)
            if u < _accept_prob(dh, beta, zero_t):
                if t1 > burn_in:
                    span = t1 - max(last1[v], burn_in + 1)
                    if span > 0:
                        acc1[v] += old * span
                last1[v] = t1
                s1[v] = -old
                s1sum -= 2 * old
                energy += dh
                accepted += 1
                if x_old != y:
                    n_sat -= 1
                else:
                    n_sat += 1
                if track_occ:
                    if s1[v] == 1:
                        state_idx += pow2[v]
                    else:
                        state_idx -= pow2[v]
        else:
            # ternary site: both mod-3 neighbors of the current value are
            # evaluated; acceptance uses the lower energy change, and the
            # accepted move lands on the lower-energy candidate.
            v = site - n
            cur = s2[v]
            kc = cur + 1
            plus = ((kc + 1) % 3) - 1
            minus = ((kc + 2) % 3) - 1
            m_cur = 0.0
            m_plus = 0.0
            m_minus = 0.0
            for k in range(indptr[v], indptr[v + 1]):
                su = s2[nbr[k]]
                if su == cur:
                    m_cur += w[k]
                if su == plus:
                    m_plus += w[k]
                if su == minus:
                    m_minus += w[k]
            x = 0 if s1[v] == 1 else 1
            y_cur = 0 if cur == 0 else 1
            y_plus = 0 if plus == 0 else 1
            y_minus = 0 if minus == 0 else 1
            base = (1.0 if x == y_cur else 0.0)
            dh_plus = (m_cur - m_plus) + jv[v] * ((1.0 if x == y_plus else 0.0) - base)
            dh_minus = (m_cur - m_minus) + jv[v] * ((1.0 if x == y_minus else 0.0) - base)
            d_lo = min(dh_plus, dh_minus)
            u = _next_unit(rng)
            if u < _accept_prob(d_lo, beta, zero_t):
                if dh_plus < dh_minus:
                    target = plus
                    dh = dh_plus
                elif dh_minus < dh_plus:
                    target = minus
                    dh = dh_minus
                else:
                    target = plus if _next_unit(rng) < 0.5 else minus
                    dh = dh_plus
                if t1 > burn_in:
                    span = t1 - max(last2[v], burn_in + 1)
                    if span > 0:
                        acc2[v] += cur * span
                last2[v] = t1
                s2[v] = target
                s2sum += target - cur
                energy += dh
                accepted += 1
                y_new = 0 if target == 0 else 1
                if (x != y_cur) and (x == y_new):
                    n_sat -= 1
                elif (x == y_cur) and (x != y_new):
                    n_sat += 1
                if track_occ:
                    state_idx += (np.int64(target) - np.int64(cur)) * pow3[v]
        if t1 > burn_in:
            sat_acc += n_sat
            if track_occ:
                occupancy[state_idx] += 1
        if t1 % record_every == 0 or t1 == steps:
            series_step[rec] = t1
            series1[rec] = s1sum / n
            series2[rec] = s2sum / n
            rec += 1
    for i in range(n):
        span = steps - max(last1[i], burn_in + 1) + 1
        if span > 0:
            acc1[i] += s1[i] * span
        span = steps - max(last2[i], burn_in + 1) + 1
        if span > 0:
            acc2[i] += s2[i] * span
    return energy, accepted, rec, state_idx, sat_acc
