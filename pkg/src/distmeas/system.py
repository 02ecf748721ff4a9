"""Distributed dynamical systems: directed graphs of occasions with
per-occasion stochastic mechanisms, plus constructors that unroll cellular
automata (deterministic tables, life rule, Hopfield units) into occasion
graphs over a finite time window.

Conventions: an occasion's mechanism has domain equal to the canonical
(id-sorted) product of its source alphabets and codomain equal to its own
one-factor space. Occasions without sources carry a Distribution instead
(initial condition or noise source). Unrolled occasions are named "cell@t".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    EmptyWindow,
    InvalidAutomaton,
    LengthMismatch,
    NonpositiveTemperature,
    UnknownOccasion,
)
from .stoch import (
    BINARY,
    Alphabet,
    Distribution,
    ProductSpace,
    StochasticMatrix,
    canonical_space,
    dirac,
    matrix_from_columns,
    rational,
)


@dataclass(frozen=True)
class Occasion:
    id: str
    alphabet: Alphabet


@dataclass(frozen=True)
class SystemSpec:
    """D1-D3 data: occasions, edges, mechanisms and source distributions."""

    occasions: tuple[Occasion, ...]
    edges: frozenset[tuple[str, str]]
    mechanisms: Mapping[str, StochasticMatrix]
    sources: Mapping[str, Distribution] = field(default_factory=dict)

    def occasion(self, occ_id: str) -> Occasion:
        for o in self.occasions:
            if o.id == occ_id:
                return o
        raise UnknownOccasion(f"no occasion {occ_id!r}")

    def alphabet_of(self, occ_id: str) -> Alphabet:
        return self.occasion(occ_id).alphabet

    def occasion_ids(self) -> tuple[str, ...]:
        return tuple(o.id for o in self.occasions)

    def sources_of(self, occ_id: str) -> tuple[str, ...]:
        return tuple(sorted(k for (k, l) in self.edges if l == occ_id))

    def input_space(self, occ_id: str) -> ProductSpace:
        return canonical_space(
            {k: self.alphabet_of(k) for k in self.sources_of(occ_id)})

    def output_space(self, occ_id: str) -> ProductSpace:
        return canonical_space({occ_id: self.alphabet_of(occ_id)})


def system(occasions: Sequence[Occasion], edges, mechanisms=None, sources=None) -> SystemSpec:
    return SystemSpec(
        tuple(occasions),
        frozenset((str(a), str(b)) for a, b in edges),
        dict(mechanisms or {}),
        dict(sources or {}),
    )


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate(spec: SystemSpec) -> list[Violation]:
    """Structural diagnostics; an empty list means every invariant holds."""
    out: list[Violation] = []
    ids = [o.id for o in spec.occasions]
    known = set(ids)
    for i in sorted({x for x in ids if ids.count(x) > 1}):
        out.append(Violation("DuplicateOccasion", f"occasion id {i!r} repeats"))
    for (a, b) in sorted(spec.edges):
        for end in (a, b):
            if end not in known:
                out.append(Violation("UnknownOccasion", f"edge ({a},{b}) references {end!r}"))
    for occ_id in sorted(spec.mechanisms):
        if occ_id not in known:
            out.append(Violation("UnknownOccasion", f"mechanism for unknown occasion {occ_id!r}"))
    for occ_id in sorted(spec.sources):
        if occ_id not in known:
            out.append(Violation("UnknownOccasion", f"source distribution for unknown occasion {occ_id!r}"))

    for occ in spec.occasions:
        srcs = tuple(k for k in spec.sources_of(occ.id) if k in known)
        if srcs:
            m = spec.mechanisms.get(occ.id)
            if m is None:
                out.append(Violation("MissingMechanism", f"occasion {occ.id!r} has sources {srcs} but no mechanism"))
                continue
            want = canonical_space({k: spec.alphabet_of(k) for k in srcs})
            if m.domain != want:
                if set(m.domain.factor_ids) == set(want.factor_ids) and all(
                        m.domain.alphabet_of(f) == want.alphabet_of(f) for f in want.factor_ids):
                    out.append(Violation(
                        "DomainOrderMismatch",
                        f"mechanism of {occ.id!r} orders sources {m.domain.factor_ids}, canonical is {want.factor_ids}"))
                else:
                    out.append(Violation(
                        "DomainMismatch",
                        f"mechanism of {occ.id!r} has domain {m.domain.factor_ids}, expected {want.factor_ids}"))
            if m.codomain != spec.output_space(occ.id):
                out.append(Violation(
                    "CodomainMismatch",
                    f"mechanism of {occ.id!r} must output over its own alphabet"))
            if occ.id in spec.sources:
                out.append(Violation(
                    "UnexpectedSource",
                    f"occasion {occ.id!r} has sources but also a source distribution"))
        else:
            if occ.id in spec.mechanisms:
                out.append(Violation(
                    "UnexpectedMechanism",
                    f"sourceless occasion {occ.id!r} carries a mechanism"))
            d = spec.sources.get(occ.id)
            if d is None:
                out.append(Violation(
                    "MissingSource",
                    f"sourceless occasion {occ.id!r} needs a distribution"))
            elif d.space != spec.output_space(occ.id):
                out.append(Violation(
                    "SourceSpaceMismatch",
                    f"distribution of {occ.id!r} is over the wrong space"))
    return out


# -- automata ---------------------------------------------------------------

RuleTable = Mapping[tuple, str]
Rule = "RuleTable | StochasticMatrix | Mapping[int, RuleTable | StochasticMatrix]"


@dataclass(frozen=True)
class AutomatonSpec:
    """A cellular automaton to be unrolled over a finite window.

    neighborhoods list the inputs of each cell in rule order; entries are
    cell ids (lag 1) or (cell id, lag) pairs. Rules are deterministic tables
    keyed by neighborhood-ordered symbol tuples, stochastic matrices whose
    columns follow the same positional order, or {time: rule} mappings for
    mechanisms that change over time. initial gives each cell's state at the
    window start as a symbol or a Distribution.
    """

    cells: tuple[str, ...]
    neighborhoods: Mapping[str, tuple[tuple[str, int], ...]]
    rules: Mapping[str, object]
    window: tuple[int, int]
    initial: Mapping[str, object]
    alphabets: Mapping[str, Alphabet] = field(default_factory=dict)

    def alphabet_of(self, cell: str) -> Alphabet:
        return self.alphabets.get(cell, BINARY)


def automaton(cells, neighborhoods, rules, window, initial, alphabets=None) -> AutomatonSpec:
    cells = tuple(str(c) for c in cells)
    norm = {}
    for cell, nbrs in neighborhoods.items():
        entries = []
        for n in nbrs:
            if isinstance(n, (tuple, list)):
                entries.append((str(n[0]), int(n[1])))
            else:
                entries.append((str(n), 1))
        norm[str(cell)] = tuple(entries)
    spec = AutomatonSpec(cells, norm, dict(rules), (int(window[0]), int(window[1])),
                         dict(initial), dict(alphabets or {}))
    for cell in cells:
        if cell not in spec.neighborhoods:
            raise InvalidAutomaton(f"cell {cell!r} has no neighborhood")
        for k, lag in spec.neighborhoods[cell]:
            if k not in cells:
                raise InvalidAutomaton(f"neighborhood of {cell!r} references unknown cell {k!r}")
            if lag < 1:
                raise InvalidAutomaton(f"lag must be >= 1, got {lag} for {cell!r}")
        if cell not in spec.rules:
            raise InvalidAutomaton(f"cell {cell!r} has no rule")
        if cell not in spec.initial:
            raise InvalidAutomaton(f"cell {cell!r} has no initial condition")
    return spec


def _rule_at(auto: AutomatonSpec, cell: str, t: int):
    rule = auto.rules[cell]
    if isinstance(rule, Mapping) and rule and all(isinstance(k, int) for k in rule):
        try:
            return rule[t]
        except KeyError:
            raise InvalidAutomaton(f"cell {cell!r} has no rule for time {t}") from None
    return rule


def _rule_arity(rule, nbrs) -> int:
    if isinstance(rule, StochasticMatrix):
        return len(rule.domain.factors)
    if not rule:
        raise InvalidAutomaton("empty rule table")
    return len(next(iter(rule.keys())))


def _mechanism_from_rule(auto: AutomatonSpec, cell: str, t: int) -> tuple[tuple[str, ...], object]:
    """Build (present source ids, mechanism or distribution) for cell@t.

    Neighborhood entries pointing before the window start are averaged out
    uniformly (extrinsic noise); if nothing remains the result is the rule's
    uniform average, a Distribution.
    """
    t_alpha = auto.window[0]
    nbrs = auto.neighborhoods[cell]
    rule = _rule_at(auto, cell, t)
    if _rule_arity(rule, nbrs) != len(nbrs):
        raise InvalidAutomaton(
            f"rule arity of {cell!r} does not match neighborhood size {len(nbrs)}")
    out_alpha = auto.alphabet_of(cell)
    out_space = canonical_space({f"{cell}@{t}": out_alpha})

    slots = []  # (neighbor alphabet, present occasion id or None)
    for k, lag in nbrs:
        src_t = t - lag
        occ = f"{k}@{src_t}" if src_t >= t_alpha else None
        slots.append((auto.alphabet_of(k), occ))
    present = sorted({occ for _, occ in slots if occ is not None})
    domain = canonical_space(
        {occ: a for a, occ in slots if occ is not None})

    absent = [(i, a) for i, (a, occ) in enumerate(slots) if occ is None]
    n_absent = 1
    for _, a in absent:
        n_absent *= len(a)

    def column(joint: tuple[str, ...]) -> list[Fraction]:
        by_occ = dict(zip(domain.factor_ids, joint))
        acc = [Fraction(0)] * len(out_alpha)
        fills = [[None] * len(slots)]
        for i, (a, occ) in enumerate(slots):
            if occ is None:
                fills = [f[:i] + [s] + f[i + 1:] for f in fills for s in a.symbols]
            else:
                for f in fills:
                    f[i] = by_occ[occ]
        share = Fraction(1, n_absent)
        for f in fills:
            key = tuple(f)
            if isinstance(rule, StochasticMatrix):
                col = rule.cols[rule.domain.index_of(key)]
                for i, v in enumerate(col):
                    acc[i] += share * v
            else:
                if key not in rule:
                    raise InvalidAutomaton(f"rule of {cell!r} undefined on {key}")
                acc[out_alpha.index(str(rule[key]))] += share
        return acc

    cols = [column(joint) for joint in domain.iter_symbols()]
    if not present:
        return (), Distribution(out_space, tuple(cols[0]))
    return tuple(present), matrix_from_columns(domain, out_space, cols)


def unroll(auto: AutomatonSpec) -> SystemSpec:
    """Unroll an automaton into one occasion per (cell, time point)."""
    t_alpha, t_omega = auto.window
    if t_omega < t_alpha:
        raise EmptyWindow(f"window [{t_alpha}, {t_omega}] is empty")
    occasions = []
    edges = set()
    mechanisms = {}
    sources = {}
    for t in range(t_alpha, t_omega + 1):
        for cell in auto.cells:
            occ_id = f"{cell}@{t}"
            occasions.append(Occasion(occ_id, auto.alphabet_of(cell)))
            if t == t_alpha:
                init = auto.initial[cell]
                out_space = canonical_space({occ_id: auto.alphabet_of(cell)})
                if isinstance(init, Distribution):
                    sources[occ_id] = Distribution(out_space, init.weights)
                else:
                    sources[occ_id] = dirac(out_space, str(init))
                continue
            present, mech = _mechanism_from_rule(auto, cell, t)
            if not present:
                sources[occ_id] = mech
                continue
            for src in present:
                edges.add((src, occ_id))
            mechanisms[occ_id] = mech
    return SystemSpec(tuple(occasions), frozenset(edges), mechanisms, sources)


def life_rule(neighborhood_size: int, self_index: int = 0) -> dict[tuple[str, ...], str]:
    """Game-of-life table over a neighborhood that includes the cell itself.

    Output is "1" iff exactly three non-self neighbors were "1", or the cell
    was "1" and exactly two non-self neighbors were.
    """
    if not 0 <= self_index < neighborhood_size:
        raise InvalidAutomaton(
            f"self_index {self_index} outside neighborhood of size {neighborhood_size}")
    table = {}
    for idx in range(2 ** neighborhood_size):
        bits = tuple((idx >> (neighborhood_size - 1 - i)) & 1 for i in range(neighborhood_size))
        self_on = bits[self_index] == 1
        others = sum(bits) - bits[self_index]
        alive = others == 3 or (self_on and others == 2)
        table[tuple(str(b) for b in bits)] = "1" if alive else "0"
    return table


def hopfield_rule(weights: Sequence, temperature,
                  snap_denominator: int = 10 ** 12) -> StochasticMatrix:
    """Stochastic unit: p(1|n) = e^(h/T) / (e^(h/T) + 1) with h = sum_j w_j n_j.

    The domain uses positional placeholder ids n0, n1, ...; unroll() reindexes
    them to actual occasion ids. Entries are evaluated in floating point and
    snapped to rationals with the given denominator, so columns sum to exactly 1.
    """
    temperature = rational(temperature)
    if temperature <= 0:
        raise NonpositiveTemperature(f"temperature {temperature} must be > 0")
    w = [rational(v) for v in weights]
    domain = ProductSpace(tuple((f"n{i}", BINARY) for i in range(len(w))))
    out_space = canonical_space({"out": BINARY})
    cols = []
    for joint in domain.iter_symbols():
        h = sum((wj for wj, s in zip(w, joint) if s == "1"), Fraction(0))
        x = float(h / temperature)
        if x >= 0:
            p1 = 1.0 / (1.0 + math.exp(-x))
        else:
            e = math.exp(x)
            p1 = e / (1.0 + e)
        snapped = Fraction(round(p1 * snap_denominator), snap_denominator)
        cols.append((1 - snapped, snapped))
    return matrix_from_columns(domain, out_space, cols)


def hopfield_weights(attractors: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Connectivity embedding the given binary patterns: sum of (2x-1)(2x-1)."""
    if not attractors:
        return []
    n = len(attractors[0])
    for xi in attractors:
        if len(xi) != n:
            raise LengthMismatch("attractor patterns must have equal length")
    out = [[Fraction(0)] * n for _ in range(n)]
    for xi in attractors:
        signed = [2 * int(b) - 1 for b in xi]
        for j in range(n):
            for k in range(n):
                out[j][k] += signed[j] * signed[k]
    return out
