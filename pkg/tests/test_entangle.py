import math

import pytest

from distmeas.entangle import (
    Partition,
    entanglement,
    enumerate_partitions,
    gamma_closed_form_two_source,
    is_rectangular,
    partition_of,
    product_decomposition,
)
from distmeas.errors import (
    BudgetExceeded,
    NotAPartition,
    NotInImage,
    NotSurjective,
)
from distmeas.fixtures import and_table, two_input_system, xor_table
from distmeas.lattice import top
from distmeas.measure import system_output_space
from distmeas.oracle import FunctionTable, exhaustive_tables, gamma_counts, random_tables
from distmeas.stoch import BINARY, alphabet, dirac

TOL = 1e-9
XY_PARTITION = partition_of([["vX"], ["vY"]])


def d_out_for(spec, symbol):
    return dirac(system_output_space(spec), (symbol,))


def gamma_of(g, z):
    spec = two_input_system(g)
    return entanglement(spec, top(spec), XY_PARTITION, d_out_for(spec, z))


# -- entanglement -----------------------------------------------------------

def test_xor_is_maximally_entangled():
    rep = gamma_of(xor_table(), "0")
    assert rep.gamma_bits == 1.0
    assert rep.per_block_ei == (0.0, 0.0)
    assert rep.ei_whole == 1.0
    assert rep.additivity_gap == 1.0


def test_projection_function_is_disentangled():
    g = FunctionTable((BINARY, BINARY), BINARY, ("0", "0", "1", "1"))  # g = x
    for z in "01":
        assert gamma_of(g, z).gamma_bits == 0.0


def test_and_entanglement_at_zero():
    rep = gamma_of(and_table(), "0")
    want = math.log2(27 / 16) / 3
    assert abs(rep.gamma_bits - want) <= TOL
    assert round(rep.gamma_bits, 5) == 0.25163


def test_partition_must_cover_sources():
    spec = two_input_system(xor_table())
    with pytest.raises(NotAPartition):
        entanglement(spec, top(spec), partition_of([["vX"]]), d_out_for(spec, "0"))


def test_blocks_must_be_disjoint():
    with pytest.raises(NotAPartition):
        Partition((("vX", "vY"), ("vY",)))


def test_whole_partition_has_zero_gamma():
    spec = two_input_system(and_table())
    both = partition_of([["vX", "vY"]])
    rep = entanglement(spec, top(spec), both, d_out_for(spec, "0"))
    assert rep.gamma_bits == 0.0
    assert abs(rep.additivity_gap) <= TOL


# -- closed form ---------------------------------------------------------------

def test_closed_form_xor():
    assert gamma_closed_form_two_source(xor_table(), "0").bits == 1.0
    assert gamma_closed_form_two_source(xor_table(), "1").bits == 1.0


def test_closed_form_vanishes_on_products():
    import random
    rng = random.Random(3)
    for _ in range(20):
        g = random_product_function(rng, 3, 3)
        for z in g.attained():
            assert gamma_closed_form_two_source(g, z).is_zero()


def test_closed_form_and():
    got = gamma_closed_form_two_source(and_table(), "0")
    assert abs(got.bits - math.log2(27 / 16) / 3) <= TOL


def test_closed_form_requires_attained_output():
    g = FunctionTable((BINARY, BINARY), BINARY, ("0", "0", "0", "0"))
    with pytest.raises(NotInImage):
        gamma_closed_form_two_source(g, "1")


# -- rectangularity --------------------------------------------------------------

def test_xor_preimage_is_not_rectangular():
    rect, witness = is_rectangular(xor_table(), "0")
    assert not rect
    (p1, p2) = witness
    assert {p1, p2} == {("0", "0"), ("1", "1")}


def test_projection_preimage_is_full_rectangle():
    g = FunctionTable((BINARY, BINARY), BINARY, ("0", "0", "1", "1"))
    assert is_rectangular(g, "0") == (True, None)


def test_and_preimage_of_one_is_point_rectangle():
    assert is_rectangular(and_table(), "1") == (True, None)


def test_rectangular_iff_zero_gamma_exhaustive_2x2():
    for nz in (2, 4):
        for g in exhaustive_tables(2, 2, nz):
            for z in g.attained():
                rect, _ = is_rectangular(g, z)
                assert rect == gamma_counts(g, z).is_zero()
                assert rect == (gamma_of(g, z).gamma_bits < TOL)


# -- product decomposition --------------------------------------------------------

def random_product_function(rng, nx, ny):
    """g((x,y)) = (g1(x), g2(y)) with codomain exactly the attained pairs."""
    x, y = alphabet(range(nx)), alphabet(range(ny))
    g1 = {s: rng.randint(0, nx - 1) for s in x.symbols}
    g2 = {s: rng.randint(0, ny - 1) for s in y.symbols}
    pairs = sorted({(g1[a], g2[b]) for a in x.symbols for b in y.symbols})
    label = {p: f"z{i}" for i, p in enumerate(pairs)}
    z = alphabet([label[p] for p in pairs])
    outputs = [label[(g1[a], g2[b])] for a in x.symbols for b in y.symbols]
    return FunctionTable((x, y), z, tuple(outputs))


def test_decomposes_pair_valued_function():
    # g((x, y)) = (x, y mod 2) over a 2 x 4 grid
    x, y = alphabet("01"), alphabet("0123")
    label = {("0", 0): "a", ("0", 1): "b", ("1", 0): "c", ("1", 1): "d"}
    outputs = [label[(a, int(b) % 2)] for a in x.symbols for b in y.symbols]
    g = FunctionTable((x, y), alphabet("abcd"), tuple(outputs))
    got = product_decomposition(g)
    assert got is not None
    g1, g2 = got
    assert len(set(g1.values())) == 2
    assert len(set(g2.values())) == 2
    # fibers of the returned pair reproduce g's fibers
    for a1, b1 in g.inputs():
        for a2, b2 in g.inputs():
            same_g = g.value((a1, b1)) == g.value((a2, b2))
            same_pair = (g1[a1], g2[b1]) == (g1[a2], g2[b2])
            assert same_g == same_pair


def test_xor_has_no_decomposition():
    assert product_decomposition(xor_table()) is None


def test_constant_function_decomposes():
    one = alphabet(["c"])
    g = FunctionTable((BINARY, BINARY), one, ("c", "c", "c", "c"))
    got = product_decomposition(g)
    assert got is not None
    g1, g2 = got
    assert len(set(g1.values())) == 1 and len(set(g2.values())) == 1


def test_decomposition_requires_surjectivity():
    g = FunctionTable((BINARY, BINARY), BINARY, ("0", "0", "0", "0"))
    with pytest.raises(NotSurjective):
        product_decomposition(g)


def test_rectangular_everywhere_but_no_product():
    # fibers {(0,0)}, {(0,1)}, {1}x{0,1}: gamma is 0 at every output, yet
    # |Z| = 3 cannot factor, so no decomposition exists (known proof gap)
    g = FunctionTable((BINARY, BINARY), alphabet("012"), ("0", "1", "2", "2"))
    for z in g.attained():
        assert gamma_counts(g, z).is_zero()
        assert gamma_of(g, z).gamma_bits <= TOL
    assert product_decomposition(g) is None


def test_round_trip_on_random_products():
    import random
    rng = random.Random(17)
    for _ in range(25):
        g = random_product_function(rng, rng.randint(2, 4), rng.randint(2, 4))
        for z in g.attained():
            assert gamma_counts(g, z).is_zero()
        got = product_decomposition(g)
        assert got is not None
        g1, g2 = got
        for a1, b1 in g.inputs():
            for a2, b2 in g.inputs():
                same_g = g.value((a1, b1)) == g.value((a2, b2))
                same_pair = (g1[a1], g2[b1]) == (g1[a2], g2[b2])
                assert same_g == same_pair


# -- identities -------------------------------------------------------------------

def test_additivity_when_gamma_vanishes_exhaustive_2x2():
    for g in exhaustive_tables(2, 2, 2):
        spec = two_input_system(g)
        for z in g.attained():
            rep = entanglement(spec, top(spec), XY_PARTITION, d_out_for(spec, z))
            if rep.gamma_bits < TOL:
                assert abs(rep.additivity_gap) <= TOL


def test_triple_identity_exhaustive_2x2():
    from distmeas.measure import effective_information
    from distmeas.lattice import subsystem
    for g in exhaustive_tables(2, 2, 2):
        spec = two_input_system(g)
        whole = top(spec)
        xe = subsystem(spec, [("vX", "vZ")])
        ye = subsystem(spec, [("vY", "vZ")])
        for z in g.attained():
            d_out = d_out_for(spec, z)
            kl = entanglement(spec, whole, XY_PARTITION, d_out).gamma_bits
            counts = gamma_counts(g, z).bits
            diff = (effective_information(spec, whole, None, d_out)
                    - effective_information(spec, xe, None, d_out)
                    - effective_information(spec, ye, None, d_out))
            assert abs(kl - counts) <= TOL
            assert abs(kl - diff) <= TOL


def test_triple_identity_random_3x3():
    from distmeas.measure import effective_information
    from distmeas.lattice import subsystem
    for g in random_tables(3, 3, 3, 40, seed=29):
        spec = two_input_system(g)
        whole = top(spec)
        xe = subsystem(spec, [("vX", "vZ")])
        ye = subsystem(spec, [("vY", "vZ")])
        for z in g.attained():
            d_out = d_out_for(spec, z)
            kl = entanglement(spec, whole, XY_PARTITION, d_out).gamma_bits
            assert abs(kl - gamma_counts(g, z).bits) <= TOL
            diff = (effective_information(spec, whole, None, d_out)
                    - effective_information(spec, xe, None, d_out)
                    - effective_information(spec, ye, None, d_out))
            assert abs(kl - diff) <= TOL


def test_gamma_nonnegative_random():
    for g in random_tables(2, 3, 3, 30, seed=41):
        spec = two_input_system(g)
        for z in g.attained():
            rep = entanglement(spec, top(spec), XY_PARTITION, d_out_for(spec, z))
            assert rep.gamma_bits >= -1e-12


# -- partition enumeration ---------------------------------------------------------

def test_partition_counts_match_bell_numbers():
    def bell(n):
        # Bell triangle: each row starts with the previous row's last entry,
        # and the row's last entry is the next Bell number
        row = [1]
        for _ in range(n - 1):
            nxt = [row[-1]]
            for v in row:
                nxt.append(nxt[-1] + v)
            row = nxt
        return row[-1]

    for n, want in ((1, 1), (2, 2), (3, 5), (4, 15)):
        names = [f"v{i}" for i in range(n)]
        got = list(enumerate_partitions(names))
        assert len(got) == want == bell(n)
        seen = set()
        for part in got:
            assert sorted(m for b in part.blocks for m in b) == sorted(names)
            assert part.blocks == tuple(sorted(part.blocks, key=lambda b: b[0]))
            seen.add(part.blocks)
        assert len(seen) == want


def test_partition_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_partitions([f"v{i}" for i in range(9)], max_sources=8))
