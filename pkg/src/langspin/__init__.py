"""langspin: syntactic parameters of world languages as interacting spins.

Languages are vertices of a weighted digraph; each binary syntactic
parameter is an Ising spin that prefers to align with strongly interacting
neighbors, and an entailed parameter pair couples a binary spin to a
ternary one.  The package bundles Metropolis samplers, an exact
enumeration oracle for validating them on small instances, file ingestion,
reporting, and a CLI (``langspin``).
"""

from .dynamics import (
    EntailModel,
    IsingModel,
    SamplerConfig,
    entail_accept,
    entail_probability,
    make_chain,
    metropolis_accept,
    metropolis_probability,
    noise_probability,
    run_chain,
    step_entail,
    step_ising,
)
from .graph import (
    LanguageGraph,
    LanguageId,
    ParameterSpec,
    SpinConfiguration,
    build_graph,
    symmetrized_weight,
)
from .hamiltonians import (
    EntailmentPair,
    entail_total_energy,
    entail_vertex_energy,
    ising_delta,
    ising_energy,
    potts_edge_energy,
)
from .ingest import (
    load_scenario,
    parse_alias_map,
    parse_edge_list,
    parse_parameter_matrix,
    resolve_initial_config,
)
from .oracle import (
    detailed_balance_check,
    enumerate_states,
    exact_expectation,
    reachability_check,
)
from .report import EntailReport, RunReport, local_magnetization, write_csv, write_dot

__version__ = "0.1.0"
