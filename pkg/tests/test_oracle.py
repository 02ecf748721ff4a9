import math
from fractions import Fraction

import pytest

from distmeas.errors import NotInImage, UnknownSymbol
from distmeas.fixtures import and_table, xor_table
from distmeas.oracle import (
    ExactBits,
    FunctionTable,
    crosscheck,
    ei_classical,
    ei_partial,
    ei_relative,
    exhaustive_tables,
    gamma_counts,
    preimage_count,
    random_tables,
    single_function_tables,
    slice_count,
)
from distmeas.stoch import BINARY, alphabet

TOL = 1e-9


# -- counting -----------------------------------------------------------------

def test_xor_counts():
    g = xor_table()
    assert preimage_count(g, "0") == 2
    assert slice_count(g, 0, "0", "0") == 1
    assert slice_count(g, 1, "0", "0") == 1


def test_and_counts():
    g = and_table()
    assert preimage_count(g, "0") == 3
    assert slice_count(g, 0, "0", "0") == 2
    assert slice_count(g, 0, "1", "0") == 1


def test_constant_counts():
    one = alphabet(["c"])
    g = FunctionTable((BINARY, alphabet("012")), one, ("c",) * 6)
    assert preimage_count(g, "c") == 6


def test_unknown_symbols_rejected():
    with pytest.raises(UnknownSymbol):
        preimage_count(xor_table(), "7")
    with pytest.raises(UnknownSymbol):
        slice_count(xor_table(), 0, "7", "0")


# -- exact bits ------------------------------------------------------------------

def test_exact_bits_equality_across_roots():
    assert ExactBits(Fraction(4), 2) == ExactBits(Fraction(2), 1)
    assert ExactBits(Fraction(8), 3) != ExactBits(Fraction(4), 1)


def test_exact_bits_arithmetic():
    two = ExactBits(Fraction(4), 2)
    one = ExactBits(Fraction(2), 2)
    assert (two - one) == ExactBits(Fraction(2), 2)
    assert float(two) == 1.0
    assert (one + one) == two


# -- closed forms ------------------------------------------------------------------

def test_ei_classical_xor_as_four_input_function():
    assert ei_classical(xor_table(), "0").bits == 1.0


def test_ei_partial_and():
    got = ei_partial(and_table(), "0", 0)
    want = 1 + (2 / 3) * math.log2(2 / 3) + (1 / 3) * math.log2(1 / 3)
    assert abs(got.bits - want) <= TOL
    assert round(got.bits, 5) == 0.08170


def test_ei_relative_xor():
    assert ei_relative(xor_table(), "0", 0).bits == 1.0


def test_not_in_image():
    g = FunctionTable((BINARY, BINARY), BINARY, ("0",) * 4)
    with pytest.raises(NotInImage):
        ei_classical(g, "1")


def test_relative_identity_exact_before_floats():
    # the comparing-measurements identity holds in exact arithmetic
    for g in exhaustive_tables(2, 2, 2):
        for z in g.attained():
            for axis in (0, 1):
                assert ei_relative(g, z, axis) == \
                    ei_classical(g, z) - ei_partial(g, z, axis)


def test_gamma_counts_is_difference_of_eis_exactly():
    for g in exhaustive_tables(2, 2, 3):
        for z in g.attained():
            assert gamma_counts(g, z) == (
                ei_classical(g, z) - ei_partial(g, z, 0) - ei_partial(g, z, 1))


# -- families ----------------------------------------------------------------------

def test_exhaustive_family_sizes():
    assert sum(1 for _ in exhaustive_tables(2, 2, 2)) == 16
    assert sum(1 for _ in exhaustive_tables(2, 2, 4)) == 256
    assert sum(1 for _ in single_function_tables(3, 2)) == 8


def test_random_tables_are_seeded():
    a = [g.outputs for g in random_tables(3, 3, 3, 5, seed=7)]
    b = [g.outputs for g in random_tables(3, 3, 3, 5, seed=7)]
    assert a == b


# -- crosscheck ----------------------------------------------------------------------

def test_crosscheck_exhaustive_2x2x2():
    report = crosscheck(exhaustive_tables(2, 2, 2), label="2x2x2")
    assert report.functions == 16
    assert report.ok, report.mismatches
    assert "0 mismatches" in report.summary()


def test_crosscheck_exhaustive_2x2x4():
    report = crosscheck(exhaustive_tables(2, 2, 4), label="2x2x4")
    assert report.functions == 256
    assert report.ok, report.mismatches


def test_crosscheck_random_500_seeded():
    report = crosscheck(random_tables(3, 3, 3, 500, seed=7), label="random")
    assert report.functions == 500
    assert report.ok, report.mismatches
