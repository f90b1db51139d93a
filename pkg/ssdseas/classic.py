"""
Classical criteria derived from the same aggregates as the patterns: E(s^2),
generalized resolution, the generalized wordlength pattern and the
confounding frequency vector, plus exact checks that tie them back to the
M-, A- and P-patterns.
"""
import logging
from fractions import Fraction

import numpy as np

from ssdseas.alias_core import aggregate, compute_spectrum
from ssdseas.errors import UnavailableRangeError, ValidationError
from ssdseas.exact import binomial
from ssdseas.seas import design_patterns

LOGGER = logging.getLogger('ssdseas')


class Resolution(object):
    """
    GR = r + 1 - max |J(S)| / n over the size-r subsets, r being the smallest
    size with a nonzero J. A design orthogonal through every order has order
    None and value m + 1.
    """

    def __init__(self, value, order=None) -> None:
        self.value = Fraction(value)
        self.order = order

    @property
    def orthogonal(self) -> bool:
        return self.order is None

    def __eq__(self, other) -> bool:
        return isinstance(other, Resolution) and (self.value, self.order) == (other.value, other.order)

    def __repr__(self) -> str:
        return 'Resolution(%s, order=%s)' % (self.value, self.order)


class ClassicSummary(object):
    def __init__(self, es2, resolution, gwlp, cfv) -> None:
        self.es2 = es2
        self.resolution = resolution
        self.gwlp = tuple(gwlp)
        self.cfv = tuple(tuple(row) for row in cfv)

    @property
    def gr(self):
        return None if self.resolution is None else self.resolution.value


class IdentityCheck(object):
    def __init__(self, name, k, direct, via_patterns) -> None:
        self.name = name
        self.k = k
        self.direct = direct
        self.via_patterns = via_patterns

    @property
    def holds(self) -> bool:
        return self.direct == self.via_patterns

    def __repr__(self) -> str:
        return 'IdentityCheck(%s, k=%s, %s vs %s)' % (self.name, self.k, self.direct, self.via_patterns)


class IdentityReport(object):
    def __init__(self, checks, skipped=()) -> None:
        self.checks = tuple(checks)
        self.skipped = tuple(skipped)

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    def failures(self) -> list:
        return [check for check in self.checks if not check.holds]

    def by_name(self, name) -> list:
        return [check for check in self.checks if check.name == name]


def es2(agg) -> Fraction:
    if agg.n_factors < 2:
        raise ValidationError('E(s^2) needs at least 2 factors, got %d' % agg.n_factors)
    return Fraction(agg.sumsq_j(2), binomial(agg.n_factors, 2))


def generalized_resolution(agg) -> Resolution:
    for k in agg.sizes():
        top = agg.max_j(k)
        if top:
            return Resolution(k + 1 - Fraction(top, agg.n_runs), k)
    if agg.k_max is not None:
        raise UnavailableRangeError('no nonzero J up to k=%d, rerun with a larger k_max' % agg.max_size)
    return Resolution(agg.n_factors + 1)


def gwlp(agg) -> tuple:
    """A_1..A_kmax, A_k being the sum of squared aliasing indices of the size-k subsets"""
    return tuple(Fraction(agg.sumsq_j(k), agg.n_runs ** 2) for k in agg.sizes())


def cfv_from_aggregates(agg) -> list:
    """rows k = 1..max size, cells ordered by J from n down to 0"""
    return [list(reversed(agg.frequencies(k))) for k in agg.sizes()]


def cfv(spectrum) -> list:
    return cfv_from_aggregates(aggregate(spectrum))


def classic_summary(agg) -> ClassicSummary:
    """es2 is None below two factors, resolution is None when a truncated spectrum shows no aliasing"""
    value = es2(agg) if agg.n_factors >= 2 else None
    try:
        resolution = generalized_resolution(agg)
    except UnavailableRangeError as error:
        LOGGER.warning('generalized resolution unavailable: %s', error)
        resolution = None
    return ClassicSummary(value, resolution, gwlp(agg), cfv_from_aggregates(agg))


def patterns_from_cfv(table, n_runs, n_factors) -> list:
    """
    (max index, mean squared index, nonzero share) per row of a frequency
    vector, read off the cells alone.
    """
    result = []
    for k, row in enumerate(table, start=1):
        nonzero = [(n_runs - cell, count) for cell, count in enumerate(row[:n_runs]) if count]
        count = sum(c for _, c in nonzero)
        if count:
            top = Fraction(nonzero[0][0], n_runs)
            mean_square = Fraction(sum(j * j * c for j, c in nonzero), count * n_runs ** 2)
        else:
            top = mean_square = Fraction(0)
        result.append((top, mean_square, Fraction(count, binomial(n_factors, k))))
    return result


def _direct_sums(spectrum) -> dict:
    """per size, (max J, sum of J^2) straight from the spectrum arrays"""
    sums = {}
    values = spectrum.j_abs.astype(np.int64)
    for k in range(1, spectrum.max_size + 1):
        selected = values[spectrum.sizes == k]
        sums[k] = (int(selected.max()) if len(selected) else 0, int((selected * selected).sum()))
    return sums


def _column_inner_products(design) -> Fraction:
    entries = design.entries.astype(np.int64)
    gram = entries.T @ entries
    upper = gram[np.triu_indices(design.n_factors, 1)]
    return Fraction(int((upper * upper).sum()), binomial(design.n_factors, 2))


def check_identities(design, spectrum) -> IdentityReport:
    """
    Evaluates both sides of each pattern identity exactly:
    - resolution: GR from the first nonzero order against r + 1 - 10 (M_r - r),
    - wordlength: A_k against 100 C(m, k) (A-pattern_k - k) (P-pattern_k - k),
    - E(s^2) from the column inner products against 100 n^2 (A_2 - 2) (P_2 - 2),
    - every pattern entry against the one read off the frequency vector.
    """
    agg = aggregate(spectrum)
    patterns = design_patterns(agg)
    n, m = spectrum.n_runs, spectrum.n_factors
    direct = _direct_sums(spectrum)
    checks = []
    skipped = []

    order = next((k for k in agg.sizes() if direct[k][0]), None)
    if order is None:
        if agg.k_max is None:
            checks.append(IdentityCheck('resolution', None, Fraction(m + 1), generalized_resolution(agg).value))
        else:
            skipped.append('resolution')
    else:
        m_entry = patterns.entry('M', order)
        checks.append(IdentityCheck('resolution', order, order + 1 - Fraction(direct[order][0], n),
                                    order + 1 - 10 * (m_entry - order)))

    for k in agg.sizes():
        via_patterns = 100 * binomial(m, k) * (patterns.entry('A', k) - k) * (patterns.entry('P', k) - k)
        checks.append(IdentityCheck('wordlength', k, Fraction(direct[k][1], n * n), via_patterns))

    if m >= 2 and agg.available(2):
        via_patterns = 100 * n * n * (patterns.entry('A', 2) - 2) * (patterns.entry('P', 2) - 2)
        checks.append(IdentityCheck('es2', 2, _column_inner_products(design), via_patterns))
    else:
        skipped.append('es2')

    for k, (top, mean_square, share) in enumerate(patterns_from_cfv(cfv_from_aggregates(agg), n, m), start=1):
        from_cfv = (k + top / 10, k + mean_square / 10, k + share / 10)
        direct_entries = tuple(patterns.entry(which, k) for which in 'MAP')
        checks.append(IdentityCheck('cfv', k, direct_entries, from_cfv))

    report = IdentityReport(checks, skipped)
    for failure in report.failures():
        LOGGER.error('identity %s does not hold at k=%s: %s != %s',
                     failure.name, failure.k, failure.direct, failure.via_patterns)
    return report


def verify_theorems(design, spectrum=None, engine='auto') -> IdentityReport:
    if spectrum is None:
        spectrum = compute_spectrum(design, engine=engine)
    return check_identities(design, spectrum)
