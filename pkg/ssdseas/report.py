"""
Text, csv and json renderings of design summaries, design comparisons and
per-column (effect) pattern tables.
"""
import csv
import io
import json
import logging
import textwrap
from itertools import combinations

from tabulate import tabulate

from ssdseas.alias_core import DEFAULT_MAX_FACTORS, aggregate, aggregate_per_column, compute_spectrum
from ssdseas.classic import classic_summary
from ssdseas.errors import ValidationError
from ssdseas.exact import ES2_DECIMALS, GR_DECIMALS, GWLP_DECIMALS, PATTERN_DECIMALS, format_exact, format_fixed
from ssdseas.seas import EQUAL, PATTERNS, compare_patterns, design_patterns, effect_patterns, rank_columns

LOGGER = logging.getLogger('ssdseas')

SCHEMA_VERSION = 1
FORMATS = ('text', 'csv', 'json')
DEFAULT_WIDTH = 88
DEFAULT_TRUNCATE = 4
PATTERN_LABELS = {'M': 'M-pattern', 'A': 'A-pattern', 'P': 'P-pattern'}


class DesignReport(object):
    def __init__(self, name, n_runs, n_factors, patterns, classic, effects=None, design_vector=None,
                 k_max=None, strict_text=False) -> None:
        self.name = name
        self.n_runs = n_runs
        self.n_factors = n_factors
        self.patterns = patterns
        self.classic = classic
        self.effects = effects
        self.design_vector = design_vector
        self.k_max = k_max
        self.strict_text = strict_text

    def __repr__(self) -> str:
        return 'DesignReport(%r, n_runs=%d, n_factors=%d)' % (self.name, self.n_runs, self.n_factors)


class RankedDesigns(object):
    def __init__(self, which, order, ties) -> None:
        self.which = which
        self.order = tuple(order)
        self.ties = tuple(tuple(group) for group in ties)


def build_design_report(design, name, design_vector=None, k_max=None, engine='auto', with_effects=False,
                        strict_text=False, max_factors=DEFAULT_MAX_FACTORS, spectrum=None) -> DesignReport:
    if spectrum is None:
        spectrum = compute_spectrum(design, k_max, engine, max_factors)
    agg = aggregate(spectrum)
    effects = None
    if with_effects:
        if design.n_factors < 2:
            raise ValidationError('per-column patterns need at least 2 factors')
        effects = [effect_patterns(col_agg, strict_text) for col_agg in aggregate_per_column(spectrum)]
    return DesignReport(name, design.n_runs, design.n_factors, design_patterns(agg), classic_summary(agg), effects,
                        design_vector, spectrum.k_max, strict_text)


def _check_format(fmt) -> None:
    if fmt not in FORMATS:
        raise ValidationError('unknown format %r, expected one of %s' % (fmt, ', '.join(FORMATS)))


def _selected(patterns) -> tuple:
    selected = tuple(p.upper() for p in patterns)
    for which in selected:
        if which not in PATTERNS:
            raise ValidationError('unknown pattern %r, expected one of %s' % (which, ', '.join(PATTERNS)))
    return selected


def _wrapped(label, values, width) -> str:
    return textwrap.fill(', '.join(values), width=width, initial_indent=label + ': ',
                         subsequent_indent=' ' * (len(label) + 2), break_on_hyphens=False)


def _value_entries(values, decimals, k_start=1) -> list:
    return [{'k': k, 'value_exact': format_exact(v), 'value_display': format_fixed(v, decimals)}
            for k, v in enumerate(values, start=k_start)]


def _es2_display(classic) -> str:
    return 'n/a' if classic.es2 is None else format_fixed(classic.es2, ES2_DECIMALS)


def _gr_display(classic) -> str:
    return 'n/a' if classic.resolution is None else format_fixed(classic.gr, GR_DECIMALS)


def _design_text(report, patterns, width) -> str:
    classic = report.classic
    lines = ['Summary of the aliasing structure for design %s (n=%d, m=%d)' % (report.name, report.n_runs,
                                                                              report.n_factors)]
    gr = _gr_display(classic)
    if classic.resolution is None:
        gr += ' (no aliasing up to k = %d)' % report.k_max
    elif classic.resolution.orthogonal:
        gr += ' (orthogonal through order %d)' % report.n_factors
    lines.append('E(s^2) = %s, GR = %s' % (_es2_display(classic), gr))
    if report.k_max is not None:
        lines.append('truncated at k = %d' % report.k_max)
    if report.design_vector is not None:
        lines.append(_wrapped('Design vector', [str(c) for c in report.design_vector.codes], width))
    for which in patterns:
        values = [format_fixed(v, PATTERN_DECIMALS) for v in report.patterns.pattern(which)]
        lines.append(_wrapped(PATTERN_LABELS[which], values, width))
    lines.append(_wrapped('GWLP', [format_fixed(v, GWLP_DECIMALS) for v in classic.gwlp], width))
    text = '\n'.join(lines) + '\n'
    if report.effects:
        text += '\n' + _effect_text(report.effects, patterns, width)
    return text


def _design_rows(report, patterns) -> list:
    classic = report.classic
    rows = [['quantity', 'k', 'j', 'display', 'exact']]
    if classic.es2 is not None:
        rows.append(['es2', 2, '', _es2_display(classic), format_exact(classic.es2)])
    if classic.resolution is not None:
        rows.append(['gr', classic.resolution.order or '', '', _gr_display(classic), format_exact(classic.gr)])
    for which in patterns:
        for entry in _value_entries(report.patterns.pattern(which), PATTERN_DECIMALS):
            rows.append([which, entry['k'], '', entry['value_display'], entry['value_exact']])
    for entry in _value_entries(classic.gwlp, GWLP_DECIMALS):
        rows.append(['gwlp', entry['k'], '', entry['value_display'], entry['value_exact']])
    for k, row in enumerate(classic.cfv, start=1):
        for cell, count in enumerate(row):
            if count:
                rows.append(['cfv', k, report.n_runs - cell, count, count])
    return rows


def _csv(rows) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator='\n').writerows(rows)
    return buffer.getvalue()


def design_report_dict(report, patterns=PATTERNS) -> dict:
    classic = report.classic
    document = {
        'schema_version': SCHEMA_VERSION,
        'name': report.name,
        'n_runs': report.n_runs,
        'n_factors': report.n_factors,
        'k_max': report.k_max,
        'design_vector': None if report.design_vector is None else list(report.design_vector.codes),
        'es2': None if classic.es2 is None else {'value_exact': format_exact(classic.es2),
                                                 'value_display': _es2_display(classic)},
        'gr': None if classic.resolution is None else {
            'value_exact': format_exact(classic.gr), 'value_display': _gr_display(classic),
            'order': classic.resolution.order, 'orthogonal': classic.resolution.orthogonal},
        'patterns': {which: _value_entries(report.patterns.pattern(which), PATTERN_DECIMALS) for which in patterns},
        'gwlp': _value_entries(classic.gwlp, GWLP_DECIMALS),
        'cfv': [{'k': k, 'j_from': report.n_runs, 'frequencies': list(row)}
                for k, row in enumerate(classic.cfv, start=1)],
    }
    if report.effects:
        document['effects'] = effect_report_dict(report.effects, patterns, report.strict_text)
    return document


def render_design_report(report, fmt='text', width=DEFAULT_WIDTH, patterns=PATTERNS) -> str:
    _check_format(fmt)
    patterns = _selected(patterns)
    if fmt == 'text':
        return _design_text(report, patterns, width)
    if fmt == 'csv':
        text = _csv(_design_rows(report, patterns))
        if report.effects:
            text += '\n' + _csv(_effect_rows(report.effects, patterns))
        return text
    return json.dumps(design_report_dict(report, patterns), indent=2) + '\n'


def _check_comparable(reports) -> None:
    if len(reports) < 2:
        raise ValidationError('a comparison needs at least 2 designs, got %d' % len(reports))
    first = reports[0]
    for other in reports[1:]:
        if (other.n_runs, other.n_factors) != (first.n_runs, first.n_factors):
            raise ValidationError('cannot compare %s (n=%d, m=%d) with %s (n=%d, m=%d)'
                                  % (first.name, first.n_runs, first.n_factors,
                                     other.name, other.n_runs, other.n_factors))


def _group_ties(keyed) -> list:
    ties = []
    group = []
    previous = None
    for key, label in keyed:
        if group and key == previous:
            group.append(label)
        else:
            if len(group) > 1:
                ties.append(group)
            group = [label]
        previous = key
    if len(group) > 1:
        ties.append(group)
    return ties


def rank_designs(reports, which) -> RankedDesigns:
    """lexicographic order of the exact patterns, lowest first; equal patterns keep input order"""
    which = which.upper()
    if which == 'GWLP':
        keyed = sorted(((r.classic.gwlp, i), r.name) for i, r in enumerate(reports))
    else:
        keyed = sorted(((r.patterns.pattern(which), i), r.name) for i, r in enumerate(reports))
    return RankedDesigns(which, [name for _, name in keyed],
                         _group_ties([(key, name) for (key, _), name in keyed]))


def _comparisons(reports, patterns) -> list:
    """(first, second, {criterion: PatternComparison}) for every pair"""
    result = []
    for first, second in combinations(reports, 2):
        verdicts = {}
        for which in patterns:
            verdicts[which] = compare_patterns(first.patterns.pattern(which), second.patterns.pattern(which),
                                               first.patterns.k_start)
        verdicts['GWLP'] = compare_patterns(first.classic.gwlp, second.classic.gwlp)
        result.append((first, second, verdicts))
    return result


def _verdict_text(comparison) -> str:
    if comparison.relation == EQUAL:
        return EQUAL
    return '%s (k=%d)' % (comparison.relation, comparison.first_differing_k)


def _comparison_columns(reports, patterns, truncate_k) -> tuple:
    available = min(r.patterns.sizes()[-1] for r in reports)
    if truncate_k > available:
        LOGGER.warning('comparison truncated at k=%d instead of %d', available, truncate_k)
        truncate_k = available
    sizes = range(2, truncate_k + 1)
    headers = ['design', 'E(s^2)', 'GR'] + ['A_%d' % k for k in sizes]
    for which in patterns:
        headers += ['%s_%d' % (which, k) for k in sizes]
    rows = []
    for report in reports:
        row = [report.name, _es2_display(report.classic), _gr_display(report.classic)]
        row += [format_fixed(report.classic.gwlp[k - 1], GWLP_DECIMALS) for k in sizes]
        for which in patterns:
            row += [format_fixed(report.patterns.entry(which, k), PATTERN_DECIMALS) for k in sizes]
        rows.append(row)
    return headers, rows


def render_comparison(reports, patterns=PATTERNS, truncate_k=DEFAULT_TRUNCATE, fmt='text') -> str:
    _check_format(fmt)
    _check_comparable(reports)
    patterns = _selected(patterns)
    headers, rows = _comparison_columns(reports, patterns, truncate_k)
    comparisons = _comparisons(reports, patterns)
    criteria = list(patterns) + ['GWLP']

    if fmt == 'json':
        document = {
            'schema_version': SCHEMA_VERSION,
            'summary': [dict(zip(headers, row)) for row in rows],
            'verdicts': [{'first': a.name, 'second': b.name,
                          'criteria': {c: {'relation': v[c].relation, 'first_differing_k': v[c].first_differing_k}
                                       for c in criteria}}
                         for a, b, v in comparisons],
            'rankings': {c: {'order': list(ranked.order), 'ties': [list(t) for t in ranked.ties]}
                         for c, ranked in ((c, rank_designs(reports, c)) for c in criteria)},
        }
        return json.dumps(document, indent=2) + '\n'

    verdict_headers = ['first', 'second'] + criteria
    verdict_rows = [[a.name, b.name] + [_verdict_text(v[c]) for c in criteria] for a, b, v in comparisons]
    if fmt == 'csv':
        return _csv([headers] + rows) + '\n' + _csv([verdict_headers] + verdict_rows)

    lines = [tabulate(rows, headers=headers, tablefmt='simple', disable_numparse=True), '',
             'Pairwise verdicts (lower pattern is better):',
             tabulate(verdict_rows, headers=verdict_headers, tablefmt='simple'), '']
    for criterion in criteria:
        ranked = rank_designs(reports, criterion)
        line = '%s ranking: %s' % (criterion, ', '.join(ranked.order))
        if ranked.ties:
            line += ' (tied: %s)' % '; '.join(', '.join(group) for group in ranked.ties)
        lines.append(line)
    return '\n'.join(lines) + '\n'


def _rankings(effects, patterns) -> list:
    return [rank_columns(effects, which) for which in patterns]


def _ranking_text(ranking, width) -> str:
    line = _wrapped('%s ranking' % PATTERN_LABELS[ranking.which], [str(c) for c in ranking.labels()], width)
    if ranking.ties:
        groups = ['(%s)' % ', '.join(str(c + 1) for c in group) for group in ranking.ties]
        line += '\n' + textwrap.fill('; '.join(groups), width=width, initial_indent='  tied: ',
                                     subsequent_indent=' ' * 8, break_on_hyphens=False)
    return line


def _effect_text(effects, patterns, width) -> str:
    blocks = []
    for which in patterns:
        sizes = effects[0].sizes()
        headers = ['column'] + ['k=%d' % k for k in sizes]
        rows = [[e.column + 1] + [format_fixed(v, PATTERN_DECIMALS) for v in e.pattern(which)] for e in effects]
        blocks.append('Effect %s\n%s' % (PATTERN_LABELS[which],
                                         tabulate(rows, headers=headers, tablefmt='simple', disable_numparse=True)))
    blocks.append('\n'.join(_ranking_text(r, width) for r in _rankings(effects, patterns)))
    return '\n\n'.join(blocks) + '\n'


def _effect_rows(effects, patterns) -> list:
    rows = [['column', 'pattern', 'k', 'display', 'exact']]
    for which in patterns:
        for e in effects:
            for entry in _value_entries(e.pattern(which), PATTERN_DECIMALS, e.k_start):
                rows.append([e.column + 1, which, entry['k'], entry['value_display'], entry['value_exact']])
    return rows


def effect_report_dict(effects, patterns=PATTERNS, strict_text=False) -> dict:
    return {
        'strict_text': strict_text,
        'columns': [{'column': e.column + 1,
                     'patterns': {which: _value_entries(e.pattern(which), PATTERN_DECIMALS, e.k_start)
                                  for which in patterns}}
                    for e in effects],
        'rankings': {r.which: {'order': r.labels(), 'ties': [[c + 1 for c in group] for group in r.ties]}
                     for r in _rankings(effects, patterns)},
    }


def render_effect_report(report, fmt='text', width=DEFAULT_WIDTH, patterns=PATTERNS) -> str:
    _check_format(fmt)
    patterns = _selected(patterns)
    if not report.effects:
        raise ValidationError('design %s was evaluated without per-column patterns' % report.name)
    if fmt == 'text':
        header = 'Effect-level aliasing of design %s (n=%d, m=%d)\n\n' % (report.name, report.n_runs,
                                                                           report.n_factors)
        return header + _effect_text(report.effects, patterns, width)
    if fmt == 'csv':
        return _csv(_effect_rows(report.effects, patterns))
    document = {'schema_version': SCHEMA_VERSION, 'name': report.name, 'n_runs': report.n_runs,
                'n_factors': report.n_factors}
    document.update(effect_report_dict(report.effects, patterns, report.strict_text))
    return json.dumps(document, indent=2) + '\n'
