"""Exact linear algebra over labeled product spaces.

Everything is a column-stochastic matrix of ``fractions.Fraction`` entries
between product spaces whose factors carry string ids and finite alphabets.
Joint indices are mixed-radix with the FIRST factor most significant, and the
empty product is the one-dimensional scalar space. Probabilities stay exact
rationals end to end; floating point appears only inside kl_divergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    FactorCollision,
    NonStochastic,
    NotSurjective,
    SpaceMismatch,
    UnknownFactor,
    UnknownSymbol,
)

ZERO = Fraction(0)
ONE = Fraction(1)

Rational = Fraction | int | str


def rational(value: Rational) -> Fraction:
    """Coerce ints, Fractions and strings like "1/2" or "0.25" to Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of symbol labels; order fixes basis indices."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols}")

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} not in alphabet {self.symbols}") from None


def alphabet(symbols: Iterable[str | int]) -> Alphabet:
    return Alphabet(tuple(str(s) for s in symbols))


BINARY = alphabet(["0", "1"])


@dataclass(frozen=True)
class ProductSpace:
    """Ordered list of (factor id, alphabet) pairs with unique ids."""

    factors: tuple[tuple[str, Alphabet], ...]

    def __post_init__(self):
        ids = [fid for fid, _ in self.factors]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate factor ids in {ids}")

    @property
    def dim(self) -> int:
        d = 1
        for _, a in self.factors:
            d *= len(a)
        return d

    @property
    def factor_ids(self) -> tuple[str, ...]:
        return tuple(fid for fid, _ in self.factors)

    def alphabet_of(self, factor_id: str) -> Alphabet:
        for fid, a in self.factors:
            if fid == factor_id:
                return a
        raise UnknownFactor(f"factor {factor_id!r} not in space {self.factor_ids}")

    def index_of(self, symbols: Sequence[str]) -> int:
        """Mixed-radix joint index, first factor most significant."""
        if len(symbols) != len(self.factors):
            raise UnknownSymbol(
                f"expected {len(self.factors)} symbols, got {len(symbols)}")
        idx = 0
        for (fid, a), s in zip(self.factors, symbols):
            idx = idx * len(a) + a.index(s)
        return idx

    def symbols_at(self, index: int) -> tuple[str, ...]:
        out: list[str] = []
        for fid, a in reversed(self.factors):
            index, r = divmod(index, len(a))
            out.append(a.symbols[r])
        return tuple(reversed(out))

    def iter_symbols(self):
        for i in range(self.dim):
            yield self.symbols_at(i)

    def position(self, factor_id: str) -> int:
        for k, (fid, _) in enumerate(self.factors):
            if fid == factor_id:
                return k
        raise UnknownFactor(f"factor {factor_id!r} not in space {self.factor_ids}")

    def subspace(self, kept_ids: Iterable[str]) -> "ProductSpace":
        """Subspace of the kept factors, in this space's factor order."""
        kept = set(kept_ids)
        missing = kept - set(self.factor_ids)
        if missing:
            raise UnknownFactor(f"factors {sorted(missing)} not in space {self.factor_ids}")
        return ProductSpace(tuple(f for f in self.factors if f[0] in kept))


SCALAR = ProductSpace(())


def space(*factors: tuple[str, Alphabet]) -> ProductSpace:
    return ProductSpace(tuple(factors))


def canonical_space(factors: Mapping[str, Alphabet] | Iterable[tuple[str, Alphabet]]) -> ProductSpace:
    """Product space with factors sorted by id (the canonical convention)."""
    items = factors.items() if isinstance(factors, Mapping) else factors
    return ProductSpace(tuple(sorted(items, key=lambda f: f[0])))


def _restriction_indexer(src: ProductSpace, dst: ProductSpace) -> Callable[[int], int]:
    """Map a joint index of src to the joint index of its restriction to dst.

    dst's factors must all occur in src (same alphabets); dst's own order wins.
    """
    positions = []
    for fid, a in dst.factors:
        p = src.position(fid)
        if src.factors[p][1] != a:
            raise SpaceMismatch(f"factor {fid!r} has different alphabets")
        positions.append(p)
    radices = [len(a) for _, a in src.factors]

    def restrict(index: int) -> int:
        digits = []
        for r in reversed(radices):
            index, d = divmod(index, r)
            digits.append(d)
        digits.reverse()
        out = 0
        for p, (_, a) in zip(positions, dst.factors):
            out = out * len(a) + digits[p]
        return out

    return restrict


@dataclass(frozen=True)
class StochasticMatrix:
    """Column-stochastic map between product spaces.

    Stored column-major: cols[j][i] = p(codomain symbol i | domain symbol j).
    """

    domain: ProductSpace
    codomain: ProductSpace
    cols: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.cols) != self.domain.dim:
            raise NonStochastic(
                f"expected {self.domain.dim} columns, got {len(self.cols)}")
        for j, col in enumerate(self.cols):
            if len(col) != self.codomain.dim:
                raise NonStochastic(
                    f"column {j} has {len(col)} rows, expected {self.codomain.dim}")
            total = ZERO
            for v in col:
                if v < 0:
                    raise NonStochastic(f"negative entry {v} in column {j}")
                total += v
            if total != 1:
                raise NonStochastic(f"column {j} sums to {total}, not 1")

    def entry(self, row: int, col: int) -> Fraction:
        return self.cols[col][row]

    def p(self, out_symbols: Sequence[str], in_symbols: Sequence[str]) -> Fraction:
        """p(out | in) by symbol tuples."""
        return self.cols[self.domain.index_of(in_symbols)][self.codomain.index_of(out_symbols)]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(col[i] for col in self.cols)


@dataclass(frozen=True)
class Distribution:
    """Exact probability vector over a product space."""

    space: ProductSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.space.dim:
            raise NonStochastic(
                f"expected {self.space.dim} weights, got {len(self.weights)}")
        total = ZERO
        for w in self.weights:
            if w < 0:
                raise NonStochastic(f"negative weight {w}")
            total += w
        if total != 1:
            raise NonStochastic(f"weights sum to {total}, not 1")

    def weight(self, symbols: Sequence[str]) -> Fraction:
        return self.weights[self.space.index_of(symbols)]

    def support(self) -> tuple[tuple[str, ...], ...]:
        return tuple(self.space.symbols_at(i) for i, w in enumerate(self.weights) if w > 0)

    def as_matrix(self) -> StochasticMatrix:
        return StochasticMatrix(SCALAR, self.space, (self.weights,))


def distribution(space_: ProductSpace, weights: Iterable[Rational]) -> Distribution:
    return Distribution(space_, tuple(rational(w) for w in weights))


def from_matrix(m: StochasticMatrix) -> Distribution:
    if m.domain != SCALAR:
        raise SpaceMismatch("only scalar-domain matrices are distributions")
    return Distribution(m.codomain, m.cols[0])


def uniform(space_: ProductSpace) -> Distribution:
    n = space_.dim
    w = Fraction(1, n)
    return Distribution(space_, (w,) * n)


def dirac(space_: ProductSpace, symbols: Sequence[str] | str) -> Distribution:
    if isinstance(symbols, str):
        symbols = (symbols,)
    idx = space_.index_of(symbols)
    return Distribution(
        space_, tuple(ONE if i == idx else ZERO for i in range(space_.dim)))


def make_matrix(domain: ProductSpace, codomain: ProductSpace,
                entries: Sequence[Sequence[Rational]]) -> StochasticMatrix:
    """Build a matrix from a row-major table (codomain rows x domain columns)."""
    if len(entries) != codomain.dim or any(len(r) != domain.dim for r in entries):
        raise NonStochastic(
            f"table is {len(entries)}x{len(entries[0]) if entries else 0}, "
            f"expected {codomain.dim}x{domain.dim}")
    cols = tuple(
        tuple(rational(entries[i][j]) for i in range(codomain.dim))
        for j in range(domain.dim))
    return StochasticMatrix(domain, codomain, cols)


def matrix_from_columns(domain: ProductSpace, codomain: ProductSpace,
                        cols: Sequence[Sequence[Rational]]) -> StochasticMatrix:
    return StochasticMatrix(
        domain, codomain,
        tuple(tuple(rational(v) for v in col) for col in cols))


def _trusted_matrix(domain: ProductSpace, codomain: ProductSpace,
                    cols: tuple[tuple[Fraction, ...], ...]) -> StochasticMatrix:
    """Construct without re-validating. Only for internal hot paths whose
    columns are stochastic by construction (normalized integer rows)."""
    m = object.__new__(StochasticMatrix)
    object.__setattr__(m, "domain", domain)
    object.__setattr__(m, "codomain", codomain)
    object.__setattr__(m, "cols", cols)
    return m


def _as_symbol_tuple(value) -> tuple[str, ...]:
    if isinstance(value, tuple):
        return tuple(str(v) for v in value)
    return (str(value),)


def lift_function(domain: ProductSpace, codomain: ProductSpace,
                  mapping: Mapping) -> StochasticMatrix:
    """Lift a deterministic function to its 0/1 column-Dirac matrix.

    mapping's keys are domain joint-symbol tuples (bare symbols are accepted
    for one-factor spaces) and values are codomain joint-symbol tuples.
    """
    table: dict[int, int] = {}
    for key, val in mapping.items():
        table[domain.index_of(_as_symbol_tuple(key))] = codomain.index_of(_as_symbol_tuple(val))
    cols = []
    for j in range(domain.dim):
        if j not in table:
            raise UnknownSymbol(
                f"function undefined on {domain.symbols_at(j)}")
        target = table[j]
        cols.append(tuple(ONE if i == target else ZERO for i in range(codomain.dim)))
    return StochasticMatrix(domain, codomain, tuple(cols))


def identity(space_: ProductSpace) -> StochasticMatrix:
    n = space_.dim
    return StochasticMatrix(
        space_, space_,
        tuple(tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)))


def terminal(space_: ProductSpace) -> StochasticMatrix:
    """The map onto the scalar space (every column is the single entry 1)."""
    return StochasticMatrix(space_, SCALAR, ((ONE,),) * space_.dim)


def compose(second: StochasticMatrix, first: StochasticMatrix) -> StochasticMatrix:
    """Exact matrix product second . first (apply first, then second)."""
    if first.codomain != second.domain:
        raise SpaceMismatch(
            f"cannot compose: {first.codomain.factor_ids} != {second.domain.factor_ids}")
    nrows = second.codomain.dim
    cols = []
    for col in first.cols:
        acc = [ZERO] * nrows
        for k, w in enumerate(col):
            if w == 0:
                continue
            mid = second.cols[k]
            for i in range(nrows):
                v = mid[i]
                if v != 0:
                    acc[i] += w * v
        cols.append(tuple(acc))
    return StochasticMatrix(first.domain, second.codomain, tuple(cols))


def apply(m: StochasticMatrix, d: Distribution) -> Distribution:
    return from_matrix(compose(m, d.as_matrix()))


def _concat_spaces(a: ProductSpace, b: ProductSpace, what: str) -> ProductSpace:
    overlap = set(a.factor_ids) & set(b.factor_ids)
    if overlap:
        raise FactorCollision(f"{what} share factor ids {sorted(overlap)}")
    return ProductSpace(a.factors + b.factors)


def tensor(m1: StochasticMatrix, m2: StochasticMatrix) -> StochasticMatrix:
    """Kronecker product under the mixed-radix index convention."""
    domain = _concat_spaces(m1.domain, m2.domain, "domains")
    codomain = _concat_spaces(m1.codomain, m2.codomain, "codomains")
    cols = []
    for c1 in m1.cols:
        for c2 in m2.cols:
            cols.append(tuple(v1 * v2 for v1 in c1 for v2 in c2))
    return StochasticMatrix(domain, codomain, tuple(cols))


def dual(m: StochasticMatrix) -> StochasticMatrix:
    """Transpose with columns renormalized: Bayes posterior over a uniform prior.

    Partial: a zero row makes the renormalization undefined (NotSurjective).
    """
    row_sums = [ZERO] * m.codomain.dim
    for col in m.cols:
        for i, v in enumerate(col):
            if v != 0:
                row_sums[i] += v
    zero_rows = [m.codomain.symbols_at(i) for i, s in enumerate(row_sums) if s == 0]
    if zero_rows:
        raise NotSurjective(f"zero rows at {zero_rows}; dual is undefined")
    cols = tuple(
        tuple(col[i] / row_sums[i] for col in m.cols)
        for i in range(m.codomain.dim))
    return StochasticMatrix(m.codomain, m.domain, cols)


def projection(space_: ProductSpace, kept_ids: Iterable[str]) -> StochasticMatrix:
    """Deterministic map sending each joint Dirac to its kept sub-Dirac."""
    sub = space_.subspace(kept_ids)
    restrict = _restriction_indexer(space_, sub)
    n = sub.dim
    cols = tuple(
        tuple(ONE if i == restrict(j) else ZERO for i in range(n))
        for j in range(space_.dim))
    return StochasticMatrix(space_, sub, cols)


def diagonal(source: ProductSpace, targets: Sequence[ProductSpace]) -> StochasticMatrix:
    """Generalized diagonal: copy a joint Dirac into one block per target.

    Every factor of every target must occur in the source with the same
    alphabet. If the concatenated blocks would repeat a factor id, every
    block's ids are qualified with the block position ("0.x", "1.x", ...).
    """
    restricts = [_restriction_indexer(source, t) for t in targets]
    all_ids = [fid for t in targets for fid in t.factor_ids]
    if len(set(all_ids)) != len(all_ids):
        blocks = [
            ProductSpace(tuple((f"{k}.{fid}", a) for fid, a in t.factors))
            for k, t in enumerate(targets)]
    else:
        blocks = list(targets)
    codomain = ProductSpace(tuple(f for b in blocks for f in b.factors))
    dims = [t.dim for t in targets]
    n = codomain.dim
    cols = []
    for j in range(source.dim):
        idx = 0
        for restrict, d in zip(restricts, dims):
            idx = idx * d + restrict(j)
        cols.append(tuple(ONE if i == idx else ZERO for i in range(n)))
    return StochasticMatrix(source, codomain, tuple(cols))


def with_spaces(m: StochasticMatrix, domain: ProductSpace | None = None,
                codomain: ProductSpace | None = None) -> StochasticMatrix:
    """Relabel factor ids without touching entries (alphabets must agree)."""
    domain = domain if domain is not None else m.domain
    codomain = codomain if codomain is not None else m.codomain
    for old, new in ((m.domain, domain), (m.codomain, codomain)):
        if tuple(a for _, a in old.factors) != tuple(a for _, a in new.factors):
            raise SpaceMismatch("relabeling must preserve alphabet sequence")
    return StochasticMatrix(domain, codomain, m.cols)


def marginal(d: Distribution, kept_ids: Iterable[str]) -> Distribution:
    sub = d.space.subspace(kept_ids)
    restrict = _restriction_indexer(d.space, sub)
    acc = [ZERO] * sub.dim
    for i, w in enumerate(d.weights):
        if w != 0:
            acc[restrict(i)] += w
    return Distribution(sub, tuple(acc))


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """Relative entropy in bits; +inf when p has weight where q has none."""
    if p.space != q.space:
        raise SpaceMismatch("kl_divergence needs a common space")
    total = 0.0
    for pw, qw in zip(p.weights, q.weights):
        if pw == 0:
            continue
        if qw == 0:
            return math.inf
        if pw == qw:
            continue
        total += float(pw) * (
            math.log2(pw.numerator * qw.denominator)
            - math.log2(pw.denominator * qw.numerator))
    return total


def support_violations(p: Distribution, q: Distribution) -> tuple[tuple[str, ...], ...]:
    """States where p is supported but q is not (the sources of infinite KL)."""
    return tuple(
        p.space.symbols_at(i)
        for i, (pw, qw) in enumerate(zip(p.weights, q.weights))
        if pw > 0 and qw == 0)
