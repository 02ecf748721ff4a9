"""Measurements and effective information.

A subsystem's mechanism is extended to the whole system so that mechanisms of
different subsystems share domain and codomain (missing inputs are ignored,
missing outputs are emitted uniformly). A measurement composes the dual of an
extended mechanism with an output distribution; effective information is the
relative entropy of a measurement against the measurement in a coarser
context, with the empty subsystem's uniform measurement as the null context.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContextNotContained, SpaceMismatch, UnsupportedOutput
from .lattice import (
    Subsystem,
    bottom,
    glue_mechanism,
    source_space,
    target_space,
    top,
)
from .stoch import (
    ZERO,
    Distribution,
    ProductSpace,
    StochasticMatrix,
    compose,
    dual,
    kl_divergence,
    projection,
    support_violations,
    terminal,
    uniform,
)
from .system import SystemSpec


def system_input_space(spec: SystemSpec) -> ProductSpace:
    return source_space(spec, top(spec))


def system_output_space(spec: SystemSpec) -> ProductSpace:
    return target_space(spec, top(spec))


@dataclass(frozen=True)
class ExtendedMechanism:
    """A subsystem's glued mechanism, extended to map all system inputs to a
    distribution over all system outputs."""

    subsystem: Subsystem
    matrix: StochasticMatrix


def null_mechanism(spec: SystemSpec) -> ExtendedMechanism:
    """Mechanism of the empty subsystem: every column is uniform outputs."""
    in_space = system_input_space(spec)
    out_space = system_output_space(spec)
    m = compose(uniform(out_space).as_matrix(), terminal(in_space))
    return ExtendedMechanism(bottom(spec), m)


def extend(spec: SystemSpec, sub: Subsystem,
           glued: StochasticMatrix | None = None) -> ExtendedMechanism:
    """Extend a subsystem's glued mechanism to the whole system."""
    if sub.is_null:
        return ExtendedMechanism(sub, null_mechanism(spec).matrix)
    if glued is None:
        glued = glue_mechanism(spec, sub)
    in_space = system_input_space(spec)
    out_space = system_output_space(spec)
    if glued.domain != source_space(spec, sub) or glued.codomain != target_space(spec, sub):
        raise SpaceMismatch("glued mechanism does not match the subsystem's spaces")
    drop_inputs = projection(in_space, sub.source_ids())
    insert_outputs = dual(projection(out_space, sub.target_ids()))
    return ExtendedMechanism(sub, compose(insert_outputs, compose(glued, drop_inputs)))


def measure(mech: ExtendedMechanism, d_out: Distribution) -> Distribution:
    """Bayes-invert the mechanism at the observed output distribution.

    Each output in d_out's support selects a row of the mechanism, normalized
    to a posterior over system inputs; rows that are identically zero cannot
    be observed and raise UnsupportedOutput.
    """
    m = mech.matrix
    if d_out.space != m.codomain:
        raise SpaceMismatch("output distribution is not over the system's outputs")
    acc = [ZERO] * m.domain.dim
    for i, w in enumerate(d_out.weights):
        if w == 0:
            continue
        row = m.row(i)
        total = sum(row, ZERO)
        if total == 0:
            raise UnsupportedOutput(
                f"output {m.codomain.symbols_at(i)} is never produced by the mechanism")
        for j, v in enumerate(row):
            if v != 0:
                acc[j] += w * v / total
    return Distribution(m.domain, tuple(acc))


@dataclass(frozen=True)
class MeasurementResult:
    """A fine measurement compared against a coarser context."""

    subsystem: Subsystem
    context: Subsystem | None
    output: Distribution
    fine: Distribution
    coarse: Distribution
    ei_bits: float
    infinite_states: tuple[tuple[str, ...], ...] = ()


def measurement_report(spec: SystemSpec, sub: Subsystem,
                       context: Subsystem | None,
                       d_out: Distribution) -> MeasurementResult:
    """Measurements of subsystem and context at d_out plus their divergence."""
    if context is not None and not context.is_null:
        if not context.effective <= sub.effective:
            raise ContextNotContained(
                f"context {sorted(context.effective)} is not contained in "
                f"{sorted(sub.effective)}")
    fine = measure(extend(spec, sub), d_out)
    if context is None or context.is_null:
        coarse = uniform(system_input_space(spec))
    else:
        coarse = measure(extend(spec, context), d_out)
    ei = kl_divergence(fine, coarse)
    offenders = support_violations(fine, coarse) if ei == float("inf") else ()
    return MeasurementResult(sub, context, d_out, fine, coarse, ei, offenders)


def effective_information(spec: SystemSpec, sub: Subsystem,
                          context: Subsystem | None,
                          d_out: Distribution) -> float:
    """Bits of precision the subsystem's measurement adds over the context's."""
    return measurement_report(spec, sub, context, d_out).ei_bits
