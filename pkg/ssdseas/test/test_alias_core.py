import io
import unittest
from fractions import Fraction
from unittest import mock

import numpy as np

from ssdseas.alias_core import JSpectrum, aggregate, aggregate_per_column, aliasing_index, choose_engine, \
    compute_spectrum, full_spectrum_enum, full_spectrum_wht, popcount, write_spectrum_csv
from ssdseas.design_io import DesignMatrix
from ssdseas.errors import IllegalStateError, ResourceError, UnavailableRangeError, ValidationError

# 2^(3-1) with C = AB
HALF_FRACTION = DesignMatrix([[-1, -1, 1], [1, -1, -1], [-1, 1, -1], [1, 1, 1]])
# columns A, D = A and an unbalanced E
DUPLICATED = DesignMatrix([[-1, -1, 1], [1, 1, 1], [-1, -1, 1], [1, 1, -1]])


class TestPopcount(unittest.TestCase):
    def test_popcount(self):
        self.assertEqual([0, 1, 2, 8, 40], popcount([0, 1, 3, 255, 2 ** 40 - 1]).tolist())


class TestAliasingIndex(unittest.TestCase):
    def test_defining_word(self):
        self.assertEqual(Fraction(1), aliasing_index(HALF_FRACTION, [0, 1, 2]))

    def test_orthogonal_pair(self):
        self.assertEqual(Fraction(0), aliasing_index(HALF_FRACTION, [0, 1]))

    def test_partial_aliasing(self):
        self.assertEqual(Fraction(1, 2), aliasing_index(DUPLICATED, (0, 2)))
        self.assertEqual(Fraction(1), aliasing_index(DUPLICATED, (0, 1)))

    def test_bad_subsets(self):
        for subset in ([], [0, 0], [3], [-1]):
            with self.assertRaises(ValidationError):
                aliasing_index(HALF_FRACTION, subset)


class TestSpectrum(unittest.TestCase):
    def test_transform_spectrum(self):
        spectrum = full_spectrum_wht(HALF_FRACTION)
        self.assertEqual(list(range(1, 8)), spectrum.subsets.tolist())
        self.assertEqual([0, 0, 0, 0, 0, 0, 4], spectrum.j_abs.tolist())
        self.assertEqual([1, 1, 2, 1, 2, 2, 3], spectrum.sizes.tolist())
        self.assertEqual(4, spectrum.j_value(0b111))

    def test_enumeration_matches_transform(self):
        for design in (HALF_FRACTION, DUPLICATED):
            self.assertEqual(full_spectrum_wht(design), full_spectrum_enum(design))

    def test_truncated_spectrum(self):
        spectrum = full_spectrum_wht(HALF_FRACTION, k_max=2)
        self.assertEqual(6, len(spectrum))
        self.assertEqual(2, spectrum.k_max)
        self.assertEqual(spectrum, full_spectrum_enum(HALF_FRACTION, k_max=2))
        with self.assertRaises(UnavailableRangeError):
            spectrum.j_value(0b111)

    def test_k_max_at_factor_count_is_full(self):
        self.assertIsNone(full_spectrum_wht(HALF_FRACTION, k_max=3).k_max)

    def test_bad_subset_code(self):
        spectrum = full_spectrum_wht(HALF_FRACTION)
        with self.assertRaises(ValidationError):
            spectrum.j_value(0)
        with self.assertRaises(ValidationError):
            spectrum.j_value(8)

    def test_spectrum_is_read_only(self):
        with self.assertRaises(ValueError):
            full_spectrum_wht(HALF_FRACTION).j_abs[0] = 1

    def test_transform_factor_cap(self):
        with self.assertRaisesRegex(ResourceError, 'enumeration engine'):
            full_spectrum_wht(HALF_FRACTION, max_factors=2)


class TestEngines(unittest.TestCase):
    def test_choose_engine(self):
        self.assertEqual('wht', choose_engine(10, None))
        self.assertEqual('enum', choose_engine(10, 3))
        self.assertEqual('wht', choose_engine(10, 8))
        self.assertEqual('enum', choose_engine(30, 8))
        self.assertEqual('cross-check', choose_engine(10, None, 'cross-check'))

    def test_choose_engine_errors(self):
        with self.assertRaises(ResourceError):
            choose_engine(30, None)
        with self.assertRaises(ValidationError):
            choose_engine(10, None, 'bogus')

    def test_cross_check(self):
        self.assertEqual(full_spectrum_wht(DUPLICATED), compute_spectrum(DUPLICATED, engine='cross-check'))

    def test_cross_check_disagreement(self):
        good = full_spectrum_wht(DUPLICATED)
        bad = JSpectrum(good.n_runs, good.n_factors, good.subsets, np.zeros(len(good), dtype=np.int32))
        with mock.patch('ssdseas.alias_core.full_spectrum_enum', return_value=bad):
            with self.assertRaisesRegex(IllegalStateError, 'disagree'):
                compute_spectrum(DUPLICATED, engine='cross-check')

    def test_bad_k_max(self):
        with self.assertRaises(ValidationError):
            compute_spectrum(HALF_FRACTION, k_max=0)

    def test_spectrum_csv(self):
        stream = io.StringIO()
        write_spectrum_csv(full_spectrum_wht(HALF_FRACTION), stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual('subset_code,size,j_abs', lines[0])
        self.assertEqual('0x1,1,0', lines[1])
        self.assertEqual('0x7,3,4', lines[-1])
        self.assertEqual(8, len(lines))


class TestAggregates(unittest.TestCase):
    def test_design_aggregates(self):
        agg = aggregate(full_spectrum_wht(HALF_FRACTION))
        self.assertEqual(range(1, 4), agg.sizes())
        self.assertEqual((0, 0, 0, 0, 1), agg.frequencies(3))
        self.assertEqual((4, 16, 1), (agg.max_j(3), agg.sumsq_j(3), agg.count_nonzero(3)))
        self.assertEqual((0, 0, 0), (agg.max_j(2), agg.sumsq_j(2), agg.count_nonzero(2)))
        self.assertEqual(3, agg.full_count(2))

    def test_sum_of_j(self):
        agg = aggregate(full_spectrum_wht(DUPLICATED))
        self.assertEqual(1, agg.count_nonzero(1))
        # pairs: {A, D} at 4, {A, E} and {D, E} at 2
        self.assertEqual(8, agg.sum_j(2))
        self.assertEqual(24, agg.sumsq_j(2))

    def test_truncated_aggregates(self):
        agg = aggregate(full_spectrum_wht(HALF_FRACTION, k_max=2))
        self.assertEqual(2, agg.max_size)
        with self.assertRaises(UnavailableRangeError):
            agg.max_j(3)
        with self.assertRaises(ValidationError):
            agg.max_j(4)
        with self.assertRaises(ValidationError):
            agg.max_j(0)

    def test_column_aggregates(self):
        columns = aggregate_per_column(full_spectrum_wht(DUPLICATED))
        self.assertEqual([0, 1, 2], [c.column for c in columns])
        first = columns[0]
        self.assertEqual(range(2, 4), first.sizes())
        self.assertEqual((4, 20, 2), (first.max_j(2), first.sumsq_j(2), first.count_nonzero(2)))
        self.assertEqual(2, first.full_count(2))
        self.assertEqual((2, 1), (first.max_j(3), first.count_nonzero(3)))
        with self.assertRaises(ValidationError):
            first.max_j(1)

    def test_column_counts_add_up(self):
        spectrum = full_spectrum_wht(DUPLICATED)
        agg = aggregate(spectrum)
        columns = aggregate_per_column(spectrum)
        for k in range(2, 4):
            self.assertEqual(k * agg.count_nonzero(k), sum(c.count_nonzero(k) for c in columns))
            self.assertEqual(agg.max_j(k), max(c.max_j(k) for c in columns))
