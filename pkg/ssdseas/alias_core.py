"""
J-characteristics of every column subset and the per-size aggregates built
on them.

A subset S of columns is coded as the integer with bit j set for column j.
For a ±1 design the product of the columns in S at run i is
(-1) ** popcount(run_code_i & S), so the J-characteristic of every subset is
one entry of the Walsh-Hadamard transform of the run-code histogram.
"""
import csv
import logging
from fractions import Fraction

import numpy as np

from ssdseas.errors import IllegalStateError, ResourceError, UnavailableRangeError, ValidationError
from ssdseas.exact import binomial

LOGGER = logging.getLogger('ssdseas')

DEFAULT_MAX_FACTORS = 26
MAX_ENUM_FACTORS = 62
ENUM_CAPPED_KMAX = 6
ENGINES = ('auto', 'wht', 'enum', 'cross-check')

_BYTE_POPCOUNT = np.array([bin(i).count('1') for i in range(256)], dtype=np.uint8)


def popcount(codes) -> np.ndarray:
    codes = np.ascontiguousarray(codes, dtype=np.uint64)
    return _BYTE_POPCOUNT[codes.view(np.uint8)].reshape(-1, 8).sum(axis=1, dtype=np.uint8)


def _dense_popcount(m) -> np.ndarray:
    counts = np.zeros(1 << m, dtype=np.uint8)
    for bit in range(m):
        counts[1 << bit:1 << (bit + 1)] = counts[:1 << bit] + 1
    return counts


class JSpectrum(object):
    """|J(S)| for nonempty column subsets, sorted by subset code"""

    def __init__(self, n_runs, n_factors, subsets, j_abs, k_max=None, sizes=None) -> None:
        self.n_runs = n_runs
        self.n_factors = n_factors
        self.k_max = None if k_max is None or k_max >= n_factors else k_max
        self.subsets = np.asarray(subsets, dtype=np.int64)
        self.j_abs = np.asarray(j_abs, dtype=np.int32)
        self.sizes = popcount(self.subsets) if sizes is None else np.asarray(sizes, dtype=np.uint8)
        for array in (self.subsets, self.j_abs, self.sizes):
            array.flags.writeable = False

    @property
    def max_size(self) -> int:
        return self.n_factors if self.k_max is None else self.k_max

    def available(self, k) -> bool:
        return 1 <= k <= self.max_size

    def j_value(self, subset) -> int:
        subset = int(subset)
        size = bin(subset).count('1')
        if subset <= 0 or subset >= 1 << self.n_factors:
            raise ValidationError('subset code %#x is not a nonempty subset of %d columns' % (subset, self.n_factors))
        if not self.available(size):
            raise UnavailableRangeError('subset %#x has %d columns, spectrum stops at %d' % (subset, size, self.max_size))
        position = int(np.searchsorted(self.subsets, subset))
        return int(self.j_abs[position])

    def __len__(self) -> int:
        return len(self.subsets)

    def __eq__(self, other) -> bool:
        return isinstance(other, JSpectrum) and \
            (self.n_runs, self.n_factors, self.k_max) == (other.n_runs, other.n_factors, other.k_max) and \
            np.array_equal(self.subsets, other.subsets) and np.array_equal(self.j_abs, other.j_abs)

    def __repr__(self) -> str:
        return 'JSpectrum(n_runs=%d, n_factors=%d, k_max=%s, entries=%d)' % (
            self.n_runs, self.n_factors, self.k_max, len(self))


def _check_subset(design, subset) -> list:
    columns = list(subset)
    if not columns:
        raise ValidationError('aliasing index needs a nonempty subset of columns')
    if len(set(columns)) != len(columns):
        raise ValidationError('subset %s repeats a column' % columns)
    for column in columns:
        if not 0 <= column < design.n_factors:
            raise ValidationError('column %s is out of range for %d factors' % (column, design.n_factors))
    return columns


def aliasing_index(design, subset) -> Fraction:
    """|sum over runs of the product of the columns in subset| / n, subset given as 0-based columns"""
    columns = _check_subset(design, subset)
    products = np.prod(design.entries[:, columns].astype(np.int64), axis=1)
    return Fraction(abs(int(products.sum())), design.n_runs)


def _fwht_inplace(table) -> None:
    h = 1
    while h < len(table):
        pairs = table.reshape(-1, 2, h)
        low = pairs[:, 0, :].copy()
        pairs[:, 0, :] += pairs[:, 1, :]
        pairs[:, 1, :] = low - pairs[:, 1, :]
        h *= 2


def full_spectrum_wht(design, k_max=None, max_factors=DEFAULT_MAX_FACTORS) -> JSpectrum:
    m = design.n_factors
    if m > max_factors:
        raise ResourceError('%d factors exceed the transform cap of %d, use the enumeration engine or set k_max'
                            % (m, max_factors))
    table = np.bincount(np.asarray(design.run_codes, dtype=np.int64), minlength=1 << m).astype(np.int32)
    _fwht_inplace(table)
    sizes = _dense_popcount(m)[1:]
    subsets = np.arange(1, 1 << m, dtype=np.int64)
    j_abs = np.abs(table[1:])
    if k_max is not None and k_max < m:
        keep = sizes <= k_max
        subsets, j_abs, sizes = subsets[keep], j_abs[keep], sizes[keep]
    LOGGER.debug('transform spectrum for %d runs, %d factors: %d subsets', design.n_runs, m, len(subsets))
    return JSpectrum(design.n_runs, m, subsets, j_abs, k_max, sizes)


def full_spectrum_enum(design, k_max=None) -> JSpectrum:
    n, m = design.n_runs, design.n_factors
    if m > MAX_ENUM_FACTORS:
        raise ResourceError('%d factors exceed the %d-bit subset codes of the enumeration engine' % (m, MAX_ENUM_FACTORS))
    depth = m if k_max is None else min(k_max, m)
    total = sum(binomial(m, k) for k in range(1, depth + 1))
    masks = design.column_masks()
    subsets = []
    j_abs = []
    progress_step = 1 << 20

    # stack of (next column, running product mask, subset code, subset size)
    stack = [(0, 0, 0, 0)]
    while stack:
        start, mask, code, size = stack.pop()
        for j in range(start, m):
            child = mask ^ masks[j]
            child_code = code | (1 << j)
            subsets.append(child_code)
            j_abs.append(abs(n - 2 * bin(child).count('1')))
            if len(subsets) % progress_step == 0:
                LOGGER.info('visited %s subsets of %s (%.2f %% done)', len(subsets), total, 100 * len(subsets) / total)
            if size + 1 < depth:
                stack.append((j + 1, child, child_code, size + 1))
    subsets = np.array(subsets, dtype=np.int64)
    j_abs = np.array(j_abs, dtype=np.int32)
    order = np.argsort(subsets)
    return JSpectrum(n, m, subsets[order], j_abs[order], k_max)


def choose_engine(n_factors, k_max, engine='auto', max_factors=DEFAULT_MAX_FACTORS) -> str:
    if engine not in ENGINES:
        raise ValidationError('unknown engine %r, expected one of %s' % (engine, ', '.join(ENGINES)))
    if engine != 'auto':
        return engine
    if k_max is not None and k_max <= ENUM_CAPPED_KMAX:
        return 'enum'
    if n_factors <= max_factors:
        return 'wht'
    if k_max is not None:
        return 'enum'
    raise ResourceError('%d factors exceed the transform cap of %d, set k_max to use the enumeration engine'
                        % (n_factors, max_factors))


def compute_spectrum(design, k_max=None, engine='auto', max_factors=DEFAULT_MAX_FACTORS) -> JSpectrum:
    if k_max is not None and not 1 <= k_max:
        raise ValidationError('k_max must be at least 1, got %s' % k_max)
    chosen = choose_engine(design.n_factors, k_max, engine, max_factors)
    LOGGER.info('computing spectrum of %d runs x %d factors with %s engine (k_max=%s)',
                design.n_runs, design.n_factors, chosen, k_max)
    if chosen == 'wht':
        return full_spectrum_wht(design, k_max, max_factors)
    if chosen == 'enum':
        return full_spectrum_enum(design, k_max)
    transformed = full_spectrum_wht(design, k_max, max_factors)
    enumerated = full_spectrum_enum(design, k_max)
    if transformed != enumerated:
        differing = np.flatnonzero(transformed.j_abs != enumerated.j_abs) \
            if len(transformed) == len(enumerated) else []
        raise IllegalStateError('transform and enumeration spectra disagree on %d subsets (first: %s)'
                                % (len(differing), [hex(int(transformed.subsets[i])) for i in differing[:5]]))
    LOGGER.info('cross-check passed on %d subsets', len(transformed))
    return transformed


def write_spectrum_csv(spectrum, stream) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['subset_code', 'size', 'j_abs'])
    for code, size, value in zip(spectrum.subsets, spectrum.sizes, spectrum.j_abs):
        writer.writerow(['%#x' % int(code), int(size), int(value)])


class AliasAggregates(object):
    """
    Exact per-size aggregates of the nonzero J values, built from the
    frequency table frequencies[k][J] = number of size-k subsets with |J(S)| = J.
    """

    def __init__(self, n_runs, n_factors, frequencies, k_max=None) -> None:
        self.n_runs = n_runs
        self.n_factors = n_factors
        self.k_max = k_max
        self._frequencies = [tuple(int(f) for f in row) for row in frequencies]

    @property
    def max_size(self) -> int:
        return self.n_factors if self.k_max is None else min(self.k_max, self.n_factors)

    @property
    def min_size(self) -> int:
        return 1

    def sizes(self) -> range:
        return range(self.min_size, self.max_size + 1)

    def available(self, k) -> bool:
        return self.min_size <= k <= self.max_size

    def _row(self, k) -> tuple:
        if not self.min_size <= k <= self.n_factors:
            raise ValidationError('subset size %s is outside %d..%d' % (k, self.min_size, self.n_factors))
        if not self.available(k):
            raise UnavailableRangeError('subset size %d is above the computed range (k_max=%d)' % (k, self.k_max))
        return self._frequencies[k]

    def frequencies(self, k) -> tuple:
        """counts of size-k subsets indexed by |J| = 0..n"""
        return self._row(k)

    def max_j(self, k) -> int:
        row = self._row(k)
        return max((j for j in range(1, len(row)) if row[j]), default=0)

    def sumsq_j(self, k) -> int:
        row = self._row(k)
        return sum(j * j * f for j, f in enumerate(row))

    def sum_j(self, k) -> int:
        row = self._row(k)
        return sum(j * f for j, f in enumerate(row))

    def count_nonzero(self, k) -> int:
        return sum(self._row(k)[1:])

    def full_count(self, k) -> int:
        return binomial(self.n_factors, k)


class ColumnAliasAggregates(AliasAggregates):
    """aggregates over the subsets that contain one column"""

    def __init__(self, column, n_runs, n_factors, frequencies, k_max=None) -> None:
        super().__init__(n_runs, n_factors, frequencies, k_max)
        self.column = column

    @property
    def min_size(self) -> int:
        return 2

    def full_count(self, k) -> int:
        return binomial(self.n_factors - 1, k - 1)


def _frequency_table(sizes, j_abs, n_runs, n_factors) -> list:
    width = n_runs + 1
    keys = sizes.astype(np.int64) * width + j_abs.astype(np.int64)
    counts = np.bincount(keys, minlength=(n_factors + 1) * width)
    return counts.reshape(n_factors + 1, width).tolist()


def aggregate(spectrum) -> AliasAggregates:
    table = _frequency_table(spectrum.sizes, spectrum.j_abs, spectrum.n_runs, spectrum.n_factors)
    return AliasAggregates(spectrum.n_runs, spectrum.n_factors, table, spectrum.k_max)


def aggregate_per_column(spectrum) -> list:
    result = []
    for column in range(spectrum.n_factors):
        member = ((spectrum.subsets >> column) & 1).astype(bool)
        table = _frequency_table(spectrum.sizes[member], spectrum.j_abs[member], spectrum.n_runs, spectrum.n_factors)
        # size-1 rows only hold the column itself; effect-level aggregates start at size 2
        result.append(ColumnAliasAggregates(column, spectrum.n_runs, spectrum.n_factors, table, spectrum.k_max))
    return result
