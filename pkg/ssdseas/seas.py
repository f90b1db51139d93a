"""
M-, A- and P-patterns at design level and per column.

Entry k of every pattern is k + value / 10 with value in [0, 1]:
- M: the largest aliasing index among size-k subsets,
- A: the mean squared aliasing index over the nonzero ones,
- P: the share of size-k subsets with a nonzero index.
An empty group of nonzero indices gives entry k exactly.
"""
import logging
from fractions import Fraction

from ssdseas.errors import UnavailableRangeError, ValidationError
from ssdseas.exact import PATTERN_DECIMALS, binomial, display_round

LOGGER = logging.getLogger('ssdseas')

PATTERNS = ('M', 'A', 'P')
BETTER, WORSE, EQUAL = 'better', 'worse', 'equal'


class SeasPatterns(object):
    def __init__(self, m_pattern, a_pattern, p_pattern, k_start=1) -> None:
        self.m_pattern = tuple(m_pattern)
        self.a_pattern = tuple(a_pattern)
        self.p_pattern = tuple(p_pattern)
        self.k_start = k_start

    def pattern(self, which) -> tuple:
        try:
            return {'M': self.m_pattern, 'A': self.a_pattern, 'P': self.p_pattern}[which.upper()]
        except KeyError:
            raise ValidationError('unknown pattern %r, expected one of %s' % (which, ', '.join(PATTERNS)))

    def sizes(self) -> range:
        return range(self.k_start, self.k_start + len(self.m_pattern))

    def entry(self, which, k) -> Fraction:
        if k not in self.sizes():
            raise UnavailableRangeError('pattern entry %d is outside %d..%d' % (k, self.k_start, self.sizes()[-1]))
        return self.pattern(which)[k - self.k_start]

    def __eq__(self, other) -> bool:
        return isinstance(other, SeasPatterns) and self.k_start == other.k_start and \
            (self.m_pattern, self.a_pattern, self.p_pattern) == (other.m_pattern, other.a_pattern, other.p_pattern)

    def __repr__(self) -> str:
        return 'SeasPatterns(k=%d..%d)' % (self.k_start, self.sizes()[-1])


class EffectSeasPatterns(SeasPatterns):
    def __init__(self, column, m_pattern, a_pattern, p_pattern) -> None:
        super().__init__(m_pattern, a_pattern, p_pattern, k_start=2)
        self.column = column

    def __repr__(self) -> str:
        return 'EffectSeasPatterns(column=%d, k=2..%d)' % (self.column + 1, self.sizes()[-1])


class PatternComparison(object):
    def __init__(self, relation, first_differing_k=None) -> None:
        assert (relation == EQUAL) == (first_differing_k is None)
        self.relation = relation
        self.first_differing_k = first_differing_k

    def __eq__(self, other) -> bool:
        return isinstance(other, PatternComparison) and \
            (self.relation, self.first_differing_k) == (other.relation, other.first_differing_k)

    def __repr__(self) -> str:
        return 'PatternComparison(%s, k=%s)' % (self.relation, self.first_differing_k)


class ColumnRanking(object):
    """columns in ascending pattern order, 0-based, with groups of tied columns"""

    def __init__(self, which, order, ties) -> None:
        self.which = which
        self.order = tuple(order)
        self.ties = tuple(tuple(group) for group in ties)

    def labels(self) -> list:
        return [column + 1 for column in self.order]


def _sizes(agg, k_stop):
    if k_stop is None:
        return agg.sizes()
    if not agg.available(k_stop):
        raise UnavailableRangeError('pattern requested up to k=%d but aggregates stop at %d' % (k_stop, agg.max_size))
    return range(agg.min_size, k_stop + 1)


def _entry(k, value) -> Fraction:
    return k + Fraction(value) / 10


def max_index(agg, k) -> Fraction:
    return Fraction(agg.max_j(k), agg.n_runs)


def mean_squared_index(agg, k) -> Fraction:
    count = agg.count_nonzero(k)
    if count == 0:
        return Fraction(0)
    return Fraction(agg.sumsq_j(k), count * agg.n_runs ** 2)


def mean_index(agg, k) -> Fraction:
    count = agg.count_nonzero(k)
    if count == 0:
        return Fraction(0)
    return Fraction(agg.sum_j(k), count * agg.n_runs)


def nonzero_share(agg, k, denominator=None) -> Fraction:
    return Fraction(agg.count_nonzero(k), agg.full_count(k) if denominator is None else denominator)


def m_pattern(agg, k_stop=None) -> tuple:
    return tuple(_entry(k, max_index(agg, k)) for k in _sizes(agg, k_stop))


def a_pattern(agg, k_stop=None) -> tuple:
    return tuple(_entry(k, mean_squared_index(agg, k)) for k in _sizes(agg, k_stop))


def p_pattern(agg, k_stop=None) -> tuple:
    return tuple(_entry(k, nonzero_share(agg, k)) for k in _sizes(agg, k_stop))


def design_patterns(agg, k_stop=None) -> SeasPatterns:
    if agg.k_max is not None:
        LOGGER.warning('patterns truncated at k=%d of %d', agg.max_size, agg.n_factors)
    return SeasPatterns(m_pattern(agg, k_stop), a_pattern(agg, k_stop), p_pattern(agg, k_stop))


def effect_patterns(col_agg, strict_text=False) -> EffectSeasPatterns:
    """
    Per-column patterns over the subsets containing the column. By default the
    P share is taken over the C(m-1, k-1) subsets that can contain the column
    and the A entry averages squared indices; strict_text switches to C(m, k)
    and to a plain average of the indices.
    """
    sizes = col_agg.sizes()
    m = col_agg.n_factors
    if strict_text:
        a_values = [mean_index(col_agg, k) for k in sizes]
        p_values = [nonzero_share(col_agg, k, binomial(m, k)) for k in sizes]
    else:
        a_values = [mean_squared_index(col_agg, k) for k in sizes]
        p_values = [nonzero_share(col_agg, k) for k in sizes]
    return EffectSeasPatterns(col_agg.column,
                              [_entry(k, max_index(col_agg, k)) for k in sizes],
                              [_entry(k, v) for k, v in zip(sizes, a_values)],
                              [_entry(k, v) for k, v in zip(sizes, p_values)])


def compare_patterns(p, q, k_start=1) -> PatternComparison:
    """lexicographic comparison, lower is better"""
    if len(p) != len(q):
        raise ValidationError('cannot compare patterns of lengths %d and %d' % (len(p), len(q)))
    for offset, (left, right) in enumerate(zip(p, q)):
        if left != right:
            return PatternComparison(BETTER if left < right else WORSE, k_start + offset)
    return PatternComparison(EQUAL)


def _ranking_key(pattern, decimals):
    if decimals is None:
        return tuple(pattern)
    return tuple(display_round(value, decimals) for value in pattern)


def rank_columns(effects, which, decimals=PATTERN_DECIMALS) -> ColumnRanking:
    """
    Ascending lexicographic order of one pattern. Entries are compared at
    display precision unless decimals is None; equal keys keep column order
    and are reported as ties.
    """
    keyed = sorted(((_ranking_key(e.pattern(which), decimals), e.column) for e in effects))
    order = [column for _, column in keyed]
    ties = []
    group = [keyed[0][1]] if keyed else []
    for (previous, _), (key, column) in zip(keyed, keyed[1:]):
        if key == previous:
            group.append(column)
        else:
            if len(group) > 1:
                ties.append(group)
            group = [column]
    if len(group) > 1:
        ties.append(group)
    return ColumnRanking(which.upper(), order, ties)
