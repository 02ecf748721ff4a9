"""Brute-force oracles: every closed-form information quantity evaluated by
preimage and slice counting on deterministic function tables, with no
stochastic-matrix machinery involved. crosscheck() is the only function here
that touches the matrix pipeline, and only to compare against it.

Quantities are returned as ExactBits, a formal log2(K)/N with rational K, so
identities between them can be checked exactly before any float conversion.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import log2

from .errors import NotInImage, UnknownSymbol
from .stoch import Alphabet, alphabet


@dataclass(frozen=True)
class ExactBits:
    """The number log2(radicand) / root, kept exact."""

    radicand: Fraction
    root: int = 1

    def __post_init__(self):
        if self.radicand <= 0 or self.root <= 0:
            raise ValueError("radicand and root must be positive")

    def __float__(self) -> float:
        k = self.radicand
        return (log2(k.numerator) - log2(k.denominator)) / self.root

    @property
    def bits(self) -> float:
        return float(self)

    def __add__(self, other: "ExactBits") -> "ExactBits":
        return ExactBits(
            self.radicand ** other.root * other.radicand ** self.root,
            self.root * other.root)

    def __sub__(self, other: "ExactBits") -> "ExactBits":
        return self + ExactBits(1 / other.radicand, other.root)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactBits):
            return NotImplemented
        return self.radicand ** other.root == other.radicand ** self.root

    def is_zero(self) -> bool:
        return self.radicand == 1


@dataclass(frozen=True)
class FunctionTable:
    """Dense deterministic function from a product of alphabets.

    outputs[i] is the value at the i-th joint input under mixed-radix order,
    first factor most significant.
    """

    factors: tuple[Alphabet, ...]
    codomain: Alphabet
    outputs: tuple[str, ...]

    def __post_init__(self):
        if len(self.outputs) != self.total_inputs:
            raise UnknownSymbol(
                f"table has {len(self.outputs)} outputs, expected {self.total_inputs}")
        for v in self.outputs:
            if v not in self.codomain.symbols:
                raise UnknownSymbol(f"output {v!r} not in codomain")

    @property
    def total_inputs(self) -> int:
        n = 1
        for a in self.factors:
            n *= len(a)
        return n

    def inputs(self):
        return itertools.product(*(a.symbols for a in self.factors))

    def value(self, symbols) -> str:
        idx = 0
        for a, s in zip(self.factors, symbols):
            idx = idx * len(a) + a.index(s)
        return self.outputs[idx]

    def as_mapping(self) -> dict[tuple[str, ...], str]:
        return {tuple(i): self.value(i) for i in self.inputs()}

    def attained(self) -> tuple[str, ...]:
        seen = set(self.outputs)
        return tuple(s for s in self.codomain.symbols if s in seen)


def table(factors, codomain, outputs) -> FunctionTable:
    return FunctionTable(
        tuple(factors), codomain, tuple(str(o) for o in outputs))


def preimage_count(f: FunctionTable, y: str) -> int:
    if y not in f.codomain.symbols:
        raise UnknownSymbol(f"{y!r} not in codomain")
    return sum(1 for v in f.outputs if v == y)


def slice_count(g: FunctionTable, axis: int, symbol: str, z: str) -> int:
    """Size of the preimage slice with the given axis held at symbol."""
    if z not in g.codomain.symbols:
        raise UnknownSymbol(f"{z!r} not in codomain")
    if symbol not in g.factors[axis].symbols:
        raise UnknownSymbol(f"{symbol!r} not in factor {axis}")
    return sum(
        1 for inp in g.inputs() if inp[axis] == symbol and g.value(inp) == z)


def _preimage(g: FunctionTable, z: str):
    pre = [inp for inp in g.inputs() if g.value(inp) == z]
    if not pre:
        raise NotInImage(f"{z!r} is never output")
    return pre


def ei_classical(f: FunctionTable, y: str) -> ExactBits:
    """Precision of a deterministic reading: log2(|inputs| / |preimage|)."""
    return ExactBits(Fraction(f.total_inputs, len(_preimage(f, y))))


def ei_partial(g: FunctionTable, z: str, axis: int = 0) -> ExactBits:
    """Precision about one input axis when the other is unobserved noise."""
    pre = _preimage(g, z)
    n = len(pre)
    kept = len(g.factors[axis])
    radicand = Fraction(kept ** n, n ** n)
    for s in g.factors[axis].symbols:
        c = sum(1 for inp in pre if inp[axis] == s)
        if c:
            radicand *= c ** c
    return ExactBits(radicand, n)


def ei_relative(g: FunctionTable, z: str, axis: int = 0) -> ExactBits:
    """Precision of the joint reading in the context of the partial one."""
    pre = _preimage(g, z)
    n = len(pre)
    other = 1 - axis
    radicand = Fraction(len(g.factors[other]) ** n)
    for s in g.factors[axis].symbols:
        c = sum(1 for inp in pre if inp[axis] == s)
        if c:
            radicand /= Fraction(c ** c)
    return ExactBits(radicand, n)


def gamma_counts(g: FunctionTable, z: str) -> ExactBits:
    """Indecomposability from counts: how far the preimage size exceeds the
    product of its row and column slice sizes, averaged over the preimage."""
    pre = _preimage(g, z)
    n = len(pre)
    radicand = Fraction(n ** n)
    for axis in (0, 1):
        for s in g.factors[axis].symbols:
            c = sum(1 for inp in pre if inp[axis] == s)
            if c:
                radicand /= Fraction(c ** c)
    return ExactBits(radicand, n)


# -- families of test functions ---------------------------------------------


def _symbols(n: int) -> Alphabet:
    return alphabet(range(n))


def exhaustive_tables(nx: int, ny: int, nz: int):
    """All deterministic functions from an nx x ny grid onto nz symbols."""
    x, y, z = _symbols(nx), _symbols(ny), _symbols(nz)
    for outputs in itertools.product(z.symbols, repeat=nx * ny):
        yield FunctionTable((x, y), z, outputs)


def random_tables(nx: int, ny: int, nz: int, count: int, seed: int):
    rng = random.Random(seed)
    x, y, z = _symbols(nx), _symbols(ny), _symbols(nz)
    for _ in range(count):
        yield FunctionTable(
            (x, y), z,
            tuple(rng.choice(z.symbols) for _ in range(nx * ny)))


def single_function_tables(nx: int, ny: int):
    """All deterministic single-input functions from nx to ny symbols."""
    x, y = _symbols(nx), _symbols(ny)
    for outputs in itertools.product(y.symbols, repeat=nx):
        yield FunctionTable((x,), y, outputs)


# -- pipeline comparison -----------------------------------------------------


@dataclass
class CrosscheckReport:
    label: str
    functions: int = 0
    checks: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        status = "0 mismatches" if self.ok else f"{len(self.mismatches)} MISMATCHES"
        return (f"{self.label}: {self.functions} functions, "
                f"{self.checks} checks, {status}")


def crosscheck(tables, label: str = "crosscheck", tol: float = 1e-9) -> CrosscheckReport:
    """Run the matrix pipeline on each two-input table and compare every
    closed-form quantity against the counting oracles above."""
    from .entangle import Partition, entanglement, is_rectangular
    from .fixtures import two_input_system
    from .lattice import subsystem, top
    from .measure import effective_information
    from .stoch import dirac

    report = CrosscheckReport(label)
    for g in tables:
        report.functions += 1
        spec = two_input_system(g)
        whole = top(spec)
        x_edge = subsystem(spec, [("vX", "vZ")])
        y_edge = subsystem(spec, [("vY", "vZ")])
        out_space = spec.output_space("vZ")
        part = Partition((("vX",), ("vY",)))

        def check(desc: str, got: float, want: float):
            report.checks += 1
            if abs(got - want) > tol:
                report.mismatches.append(f"{desc}: pipeline {got!r} vs oracle {want!r}")

        for z in g.attained():
            d_out = dirac(out_space, z)
            ei_top = effective_information(spec, whole, None, d_out)
            ei_x = effective_information(spec, x_edge, None, d_out)
            ei_y = effective_information(spec, y_edge, None, d_out)
            rel_x = effective_information(spec, whole, x_edge, d_out)
            rel_y = effective_information(spec, whole, y_edge, d_out)
            gamma = entanglement(spec, whole, part, d_out).gamma_bits
            tag = f"{g.outputs}@z={z}"

            check(f"{tag} ei(top)", ei_top, ei_classical(g, z).bits)
            check(f"{tag} ei(X.)", ei_x, ei_partial(g, z, 0).bits)
            check(f"{tag} ei(.Y)", ei_y, ei_partial(g, z, 1).bits)
            check(f"{tag} ei(X.->top)", rel_x, ei_relative(g, z, 0).bits)
            check(f"{tag} ei(.Y->top)", rel_y, ei_relative(g, z, 1).bits)
            check(f"{tag} gamma", gamma, gamma_counts(g, z).bits)

            # comparing-measurements identity, oracle-internal and pipeline
            report.checks += 1
            if ei_relative(g, z, 0) != ei_classical(g, z) - ei_partial(g, z, 0):
                report.mismatches.append(f"{tag} exact relative-ei identity broke")
            check(f"{tag} rel == top - partial", rel_x, ei_top - ei_x)

            # rectangular preimage iff zero entanglement
            report.checks += 1
            rect, _ = is_rectangular(g, z)
            if rect != gamma_counts(g, z).is_zero() or rect != (gamma < tol):
                report.mismatches.append(f"{tag} rectangularity/entanglement disagree")
    return report
