"""Exact-rational analysis of the measurements performed by distributed
stochastic systems: stochastic maps and their Bayes duals, occasion graphs,
subsystem gluing, the quale, effective information and entanglement."""

from .entangle import (
    EntanglementReport,
    Partition,
    entanglement,
    enumerate_partitions,
    gamma_closed_form_two_source,
    is_rectangular,
    partition_of,
    product_decomposition,
)
from .lattice import (
    Quale,
    Section,
    Subsystem,
    bottom,
    build_quale,
    descent_counterexample,
    enumerate_subsystems,
    glue_mechanism,
    glue_sections,
    occasion_submechanism,
    restrict,
    section,
    source_space,
    subsystem,
    target_space,
    top,
)
from .measure import (
    ExtendedMechanism,
    MeasurementResult,
    effective_information,
    extend,
    measure,
    measurement_report,
    null_mechanism,
    system_input_space,
    system_output_space,
)
from .oracle import (
    ExactBits,
    FunctionTable,
    crosscheck,
    ei_classical,
    ei_partial,
    ei_relative,
    gamma_counts,
    preimage_count,
    slice_count,
)
from .stoch import (
    BINARY,
    SCALAR,
    Alphabet,
    Distribution,
    ProductSpace,
    StochasticMatrix,
    alphabet,
    apply,
    canonical_space,
    compose,
    diagonal,
    dirac,
    distribution,
    dual,
    from_matrix,
    identity,
    kl_divergence,
    lift_function,
    make_matrix,
    marginal,
    matrix_from_columns,
    projection,
    space,
    tensor,
    terminal,
    uniform,
    with_spaces,
)
from .system import (
    AutomatonSpec,
    Occasion,
    SystemSpec,
    Violation,
    automaton,
    hopfield_rule,
    hopfield_weights,
    life_rule,
    system,
    unroll,
    validate,
)

__version__ = "0.1.0"
