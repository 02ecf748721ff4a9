"""The Boolean lattice of subsystems, mechanism gluing, the structure
presheaf's restriction and gluing maps, and the quale.

A subsystem is a set of ordered occasion pairs. Pairs that are real edges of
the host are effective; the rest are ineffective and contribute nothing, so
every construction here reads only the effective part. The input space S_C of
a subsystem is the canonical (id-sorted) product over sources of effective
pairs, the output space A_C the product over targets. A section over C is a
stochastic map from A_C back to S_C; the quale assigns to each subsystem the
dual of its glued mechanism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd
from typing import Iterable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    EmptySubsystem,
    Incompatible,
    NotASubsystem,
    NotATarget,
    NotStochastic,
    NotSurjective,
    UnknownOccasion,
)
from .stoch import (
    BINARY,
    ONE,
    ZERO,
    ProductSpace,
    StochasticMatrix,
    _trusted_matrix,
    canonical_space,
    compose,
    dual,
    lift_function,
    projection,
    uniform,
)
from .system import Occasion, SystemSpec

PairSet = frozenset[tuple[str, str]]


@dataclass(frozen=True)
class Subsystem:
    """Ordered occasion pairs, split into effective (host edges) and not."""

    pairs: PairSet
    effective: PairSet

    @property
    def ineffective(self) -> PairSet:
        return self.pairs - self.effective

    @property
    def is_null(self) -> bool:
        return not self.effective

    def source_ids(self) -> tuple[str, ...]:
        return tuple(sorted({k for (k, _) in self.effective}))

    def target_ids(self) -> tuple[str, ...]:
        return tuple(sorted({l for (_, l) in self.effective}))

    def sorted_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(self.pairs))

    def __le__(self, other: "Subsystem") -> bool:
        return self.pairs <= other.pairs


def subsystem(spec: SystemSpec, pairs: Iterable[tuple[str, str]]) -> Subsystem:
    pset = frozenset((str(a), str(b)) for a, b in pairs)
    known = set(spec.occasion_ids())
    for (a, b) in pset:
        for v in (a, b):
            if v not in known:
                raise UnknownOccasion(f"pair ({a},{b}) references unknown occasion {v!r}")
    return Subsystem(pset, pset & spec.edges)


def top(spec: SystemSpec) -> Subsystem:
    return Subsystem(frozenset(spec.edges), frozenset(spec.edges))


def bottom(spec: SystemSpec) -> Subsystem:
    return Subsystem(frozenset(), frozenset())


def source_space(spec: SystemSpec, sub: Subsystem) -> ProductSpace:
    return canonical_space({k: spec.alphabet_of(k) for k in sub.source_ids()})


def target_space(spec: SystemSpec, sub: Subsystem) -> ProductSpace:
    return canonical_space({l: spec.alphabet_of(l) for l in sub.target_ids()})


def enumerate_subsystems(spec: SystemSpec, max_pairs: int = 16) -> Iterator[Subsystem]:
    """All subsets of the effective edge set, in binary counting order."""
    edges = sorted(spec.edges)
    if len(edges) > max_pairs:
        raise BudgetExceeded(
            f"{len(edges)} edges exceed the budget of {max_pairs} "
            f"(2^{len(edges)} subsystems)")
    for mask in range(2 ** len(edges)):
        chosen = frozenset(e for i, e in enumerate(edges) if mask >> i & 1)
        yield Subsystem(chosen, chosen)


def occasion_submechanism(spec: SystemSpec, sub: Subsystem, target: str) -> StochasticMatrix:
    """The target's mechanism with inputs on edges outside the subsystem
    averaged out uniformly."""
    if target not in sub.target_ids():
        raise NotATarget(f"{target!r} is not a target of the subsystem")
    mech = spec.mechanisms[target]
    inside = tuple(sorted(k for (k, l) in sub.effective if l == target))
    if inside == spec.sources_of(target):
        return mech
    return compose(mech, dual(projection(mech.domain, inside)))


def _glue_columns(sub_mechs: Sequence[StochasticMatrix],
                  domain: ProductSpace, codomain: ProductSpace) -> StochasticMatrix:
    """Evaluate (tensor of per-target mechanisms) . diagonal column by column.

    Column s of the composite is the Kronecker product of each target
    mechanism's column at s's restriction, which avoids materialising the
    diagonal's exponentially wide codomain.
    """
    positions = []  # for each target mechanism, its domain factors' slots in S_C
    for m in sub_mechs:
        positions.append(tuple(domain.position(fid) for fid in m.domain.factor_ids))
    cols = []
    for s in domain.iter_symbols():
        acc = [ONE]
        for m, pos in zip(sub_mechs, positions):
            col = m.cols[m.domain.index_of(tuple(s[p] for p in pos))]
            acc = [v * w for v in acc for w in col]
        cols.append(tuple(acc))
    return StochasticMatrix(domain, codomain, tuple(cols))


def glue_mechanism(spec: SystemSpec, sub: Subsystem, _cache: dict | None = None) -> StochasticMatrix:
    """Joint mechanism of a subsystem: marginalize each target's extrinsic
    inputs, tensor the results and pull back along the diagonal."""
    if sub.is_null:
        raise EmptySubsystem("the empty subsystem has no glued mechanism; use the null mechanism")
    targets = sub.target_ids()
    sub_mechs = []
    for l in targets:
        if _cache is None:
            sub_mechs.append(occasion_submechanism(spec, sub, l))
        else:
            key = (l, frozenset(k for (k, t) in sub.effective if t == l))
            m = _cache.get(key)
            if m is None:
                m = occasion_submechanism(spec, sub, l)
                _cache[key] = m
            sub_mechs.append(m)
    domain = source_space(spec, sub)
    codomain = target_space(spec, sub)
    return _glue_columns(sub_mechs, domain, codomain)


@dataclass(frozen=True)
class Section:
    """An element of the structure presheaf at a subsystem: a stochastic map
    from the subsystem's output space back to its input space."""

    subsystem: Subsystem
    matrix: StochasticMatrix


def section(spec: SystemSpec, sub: Subsystem, matrix: StochasticMatrix) -> Section:
    if matrix.domain != target_space(spec, sub) or matrix.codomain != source_space(spec, sub):
        raise NotASubsystem(
            f"section matrix must map {sub.target_ids()} outputs to {sub.source_ids()} inputs")
    return Section(sub, matrix)


@dataclass(frozen=True)
class Quale:
    """One section per subsystem: the dual of each glued mechanism."""

    host: SystemSpec
    sections: tuple[Section, ...]

    def section(self, sub: Subsystem) -> Section:
        for s in self.sections:
            if s.subsystem == sub:
                return s
        raise NotASubsystem(f"no section for pairs {sorted(sub.pairs)}")

    def __len__(self) -> int:
        return len(self.sections)


def build_quale(spec: SystemSpec, max_pairs: int = 16) -> Quale:
    """Dualize the glued mechanism of every subsystem of the host.

    Equivalent to dual(glue_mechanism(...)) per subsystem but computed on
    integer numerators: the glued column entries are products of scaled
    submechanism entries, and the dual's row normalization cancels every
    denominator. Tests pin equality with the operator pipeline.
    """
    edges = sorted(spec.edges)
    if len(edges) > max_pairs:
        raise BudgetExceeded(
            f"{len(edges)} edges exceed the budget of {max_pairs} "
            f"(2^{len(edges)} subsystems)")
    int_cache: dict = {}

    def int_submech(target: str, inside: frozenset[str]):
        """(sorted inside ids, integer numerator columns) of the submechanism."""
        key = (target, inside)
        hit = int_cache.get(key)
        if hit is None:
            sub = Subsystem(
                frozenset((k, target) for k in inside),
                frozenset((k, target) for k in inside))
            m = occasion_submechanism(spec, sub, target)
            scale = 1
            for col in m.cols:
                for v in col:
                    d = v.denominator
                    scale = scale // _gcd(scale, d) * d
            nums = tuple(
                tuple(int(v * scale) for v in col) for col in m.cols)
            hit = (m.domain.factor_ids, nums)
            int_cache[key] = hit
        return hit

    sections = []
    scalar = canonical_space({})
    scalar_section_cols = ((ONE,),)
    for mask in range(2 ** len(edges)):
        chosen = frozenset(e for i, e in enumerate(edges) if mask >> i & 1)
        sub = Subsystem(chosen, chosen)
        if not chosen:
            sections.append(Section(sub, StochasticMatrix(scalar, scalar, scalar_section_cols)))
            continue
        domain = source_space(spec, sub)
        codomain = target_space(spec, sub)
        blocks = []
        for l in sub.target_ids():
            inside = frozenset(k for (k, t) in chosen if t == l)
            ids, nums = int_submech(l, inside)
            blocks.append((tuple(domain.position(f) for f in ids),
                           tuple(len(domain.factors[domain.position(f)][1]) for f in ids),
                           nums))
        glue_cols = []
        radii = [range(len(a)) for _, a in domain.factors]
        for digits in itertools.product(*radii):
            acc = [1]
            for positions, radices, nums in blocks:
                idx = 0
                for p, r in zip(positions, radices):
                    idx = idx * r + digits[p]
                col = nums[idx]
                acc = [a * b for a in acc for b in col]
            glue_cols.append(acc)
        n_rows = codomain.dim
        row_sums = [0] * n_rows
        for col in glue_cols:
            for i, v in enumerate(col):
                row_sums[i] += v
        zero = [codomain.symbols_at(i) for i, t in enumerate(row_sums) if t == 0]
        if zero:
            raise NotSurjective(
                f"subsystem {sub.sorted_pairs()} has a non-surjective glued "
                f"mechanism (outputs {zero} are never produced)")
        section_cols = tuple(
            tuple(Fraction(col[i], row_sums[i]) for col in glue_cols)
            for i in range(n_rows))
        sections.append(Section(sub, _trusted_matrix(codomain, domain, section_cols)))
    return Quale(spec, tuple(sections))


def restrict(spec: SystemSpec, sec: Section, sub: Subsystem) -> Section:
    """Presheaf restriction: marginalize a section onto a sub-subsystem.

    Inserts the uniform distribution on the outputs the smaller subsystem
    lacks and projects away the inputs it lacks.
    """
    if not sub.pairs <= sec.subsystem.pairs:
        raise NotASubsystem(
            f"{sorted(sub.pairs)} is not contained in {sorted(sec.subsystem.pairs)}")
    big = sec.subsystem
    m = sec.matrix
    out_proj = projection(target_space(spec, big), sub.target_ids())
    in_proj = projection(source_space(spec, big), sub.source_ids())
    return Section(sub, compose(in_proj, compose(m, dual(out_proj))))


def _coordinate_restriction(spec: SystemSpec, sec: Section,
                            src_ids: Sequence[str], trg_ids: Sequence[str]) -> StochasticMatrix:
    """Marginal of a section onto given source/target occasion sets."""
    m = sec.matrix
    out_proj = projection(target_space(spec, sec.subsystem), trg_ids)
    in_proj = projection(source_space(spec, sec.subsystem), src_ids)
    return compose(in_proj, compose(m, dual(out_proj)))


def glue_sections(spec: SystemSpec, a: Section, b: Section,
                  renormalize: bool = False) -> Section:
    """Glue two compatible sections over the union of their subsystems.

    The glued conditional is p(a-part) * p(b-part) / p(shared part), with the
    shared-coordinate marginal computed by uniform averaging; 0/0 counts as 0.
    Columns of the result are checked to sum to 1 and NotStochastic is raised
    otherwise (set renormalize to divide them out instead).
    """
    sub_a, sub_b = a.subsystem, b.subsystem
    shared_src = tuple(sorted(set(sub_a.source_ids()) & set(sub_b.source_ids())))
    shared_trg = tuple(sorted(set(sub_a.target_ids()) & set(sub_b.target_ids())))
    ra = _coordinate_restriction(spec, a, shared_src, shared_trg)
    rb = _coordinate_restriction(spec, b, shared_src, shared_trg)
    if ra != rb:
        raise Incompatible(
            "sections disagree on their shared coordinates "
            f"(sources {shared_src}, targets {shared_trg})")

    union = Subsystem(sub_a.pairs | sub_b.pairs, sub_a.effective | sub_b.effective)
    domain = target_space(spec, union)
    codomain = source_space(spec, union)
    sa, sb = source_space(spec, sub_a), source_space(spec, sub_b)
    ta, tb = target_space(spec, sub_a), target_space(spec, sub_b)

    def restrict_to(space: ProductSpace, ids: Sequence[str]):
        pos = [space.position(i) for i in ids]
        return lambda syms: tuple(syms[p] for p in pos)

    s_to_a = restrict_to(codomain, sa.factor_ids)
    s_to_b = restrict_to(codomain, sb.factor_ids)
    s_to_shared = restrict_to(codomain, shared_src)
    t_to_a = restrict_to(domain, ta.factor_ids)
    t_to_b = restrict_to(domain, tb.factor_ids)
    t_to_shared = restrict_to(domain, shared_trg)

    cols = []
    bad: list[tuple[tuple[str, ...], Fraction]] = []
    for o in domain.iter_symbols():
        col_a = a.matrix.cols[ta.index_of(t_to_a(o))]
        col_b = b.matrix.cols[tb.index_of(t_to_b(o))]
        col_r = ra.cols[ra.domain.index_of(t_to_shared(o))]
        col = []
        for s in codomain.iter_symbols():
            va = col_a[sa.index_of(s_to_a(s))]
            if va == 0:
                col.append(ZERO)
                continue
            vb = col_b[sb.index_of(s_to_b(s))]
            if vb == 0:
                col.append(ZERO)
                continue
            denom = col_r[ra.codomain.index_of(s_to_shared(s))]
            col.append(ZERO if denom == 0 else va * vb / denom)
        total = sum(col, ZERO)
        if total != 1:
            if renormalize and total > 0:
                col = [v / total for v in col]
            else:
                bad.append((o, total))
        cols.append(tuple(col))
    if bad:
        detail = ", ".join(f"{o}: {t}" for o, t in bad[:4])
        raise NotStochastic(
            f"glued section has {len(bad)} non-stochastic columns ({detail})")
    return Section(union, StochasticMatrix(domain, codomain, tuple(cols)))


def descent_counterexample() -> tuple[Section, Section]:
    """Two unequal sections over one two-source subsystem whose restrictions
    to both single-pair subsystems coincide (perfectly correlated versus
    independent joint over two bits, both with uniform marginals)."""
    z_space = canonical_space({"vZ": BINARY})
    xy_space = canonical_space({"vX": BINARY, "vY": BINARY})
    xor = lift_function(xy_space, z_space,
                        {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"})
    host = SystemSpec(
        (Occasion("vX", BINARY), Occasion("vY", BINARY), Occasion("vZ", BINARY)),
        frozenset({("vX", "vZ"), ("vY", "vZ")}),
        {"vZ": xor},
        {"vX": uniform(canonical_space({"vX": BINARY})),
         "vY": uniform(canonical_space({"vY": BINARY}))},
    )
    both = top(host)
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    correlated = StochasticMatrix(
        z_space, xy_space,
        ((half, ZERO, ZERO, half), (half, ZERO, ZERO, half)))
    product = StochasticMatrix(
        z_space, xy_space,
        ((quarter,) * 4, (quarter,) * 4))
    return Section(both, correlated), Section(both, product)
