import unittest
from fractions import Fraction

from ssdseas.classic import cfv_from_aggregates
from ssdseas.exact import ES2_DECIMALS, GR_DECIMALS, GWLP_DECIMALS, PATTERN_DECIMALS, format_fixed
from ssdseas.seas import BETTER, EQUAL, WORSE, EffectSeasPatterns, compare_patterns, rank_columns
from ssdseas.test import load_data, shipped_evaluation

DESIGNS = ('d1', 'd2', 'd3', 'd_sib')

# (design, pattern, k) entries whose printed value is off by one unit in the last place
PRINTED_DESIGN_TYPOS = {('d1', 'A', 3), ('d1', 'P', 11)}
# (column, pattern, k) entries of the printed per-column tables that disagree with the exact values
PRINTED_EFFECT_TYPOS = {
    (3, 'A', 5), (4, 'A', 11), (5, 'A', 5), (5, 'A', 17), (5, 'P', 5), (8, 'A', 4), (9, 'P', 3), (11, 'A', 15),
    (12, 'P', 9), (15, 'A', 17), (16, 'A', 19), (16, 'P', 7), (17, 'A', 21), (17, 'P', 7), (18, 'P', 11),
    (19, 'P', 7), (22, 'P', 9), (23, 'P', 19), (23, 'P', 21),
}
A_RANKING = [12, 23, 8, 18, 21, 22, 1, 7, 11, 6, 3, 5, 13, 15, 16, 10, 17, 9, 14, 2, 20, 19, 4]
PRINTED_P_RANKING = [19, 20, 2, 14, 13, 5, 8, 4, 23, 3, 11, 12, 6, 1, 7, 9, 17, 22, 16, 10, 21, 15, 18]


def displayed(values, decimals=PATTERN_DECIMALS) -> list:
    return [format_fixed(v, decimals) for v in values]


class TestDesignTables(unittest.TestCase):
    exact = None
    printed = None

    @classmethod
    def setUpClass(cls):
        cls.exact = load_data('designs_exact.json')
        cls.printed = load_data('printed_tables.json')

    def test_patterns_at_display_precision(self):
        for name in DESIGNS:
            patterns = shipped_evaluation(name).report.patterns
            for which in 'MAP':
                self.assertEqual(self.exact[name][which], displayed(patterns.pattern(which)), (name, which))

    def test_classic_criteria_at_display_precision(self):
        for name in DESIGNS:
            classic = shipped_evaluation(name).report.classic
            self.assertEqual(self.exact[name]['es2'], format_fixed(classic.es2, ES2_DECIMALS), name)
            self.assertEqual(self.exact[name]['gr'], format_fixed(classic.gr, GR_DECIMALS), name)
            self.assertEqual(self.exact[name]['gwlp'], displayed(classic.gwlp, GWLP_DECIMALS), name)

    def test_aggregates(self):
        for name in DESIGNS:
            agg = shipped_evaluation(name).agg
            for k, max_j, sumsq_j, count in self.exact[name]['aggregates']:
                self.assertEqual([max_j, sumsq_j, count], [agg.max_j(k), agg.sumsq_j(k), agg.count_nonzero(k)],
                                 (name, k))

    def test_published_summary(self):
        expected = {'d1': ('7.921', '2.29'), 'd2': ('7.921', '2.29'), 'd3': ('7.921', '2.57'),
                    'd_sib': ('7.415', '2.57')}
        for name, (es2, gr) in expected.items():
            classic = shipped_evaluation(name).report.classic
            self.assertEqual((es2, gr), (format_fixed(classic.es2, ES2_DECIMALS), format_fixed(classic.gr, GR_DECIMALS)))

    def test_printed_patterns_up_to_known_typos(self):
        for name in DESIGNS:
            patterns = shipped_evaluation(name).report.patterns
            for which in 'MAP':
                for k, (ours, theirs) in enumerate(zip(displayed(patterns.pattern(which)),
                                                       self.printed['designs'][name][which]), start=1):
                    if (name, which, k) in PRINTED_DESIGN_TYPOS:
                        self.assertNotEqual(theirs, ours)
                        self.assertEqual(Fraction(1, 10 ** 4), abs(Fraction(ours) - Fraction(theirs)))
                    else:
                        self.assertEqual(theirs, ours, (name, which, k))

    def test_printed_gwlp_within_tolerance(self):
        # printed to three decimals, so rounding alone can exceed a purely relative bound on small entries
        for name in DESIGNS:
            gwlp = shipped_evaluation(name).report.classic.gwlp
            printed = [Fraction(v) for v in self.printed['designs'][name]['gwlp']]
            self.assertEqual(format_fixed(gwlp[1], GWLP_DECIMALS), self.printed['designs'][name]['gwlp'][1])
            for k, (ours, theirs) in enumerate(zip(gwlp, printed), start=1):
                if ours == 0:
                    self.assertEqual(0, theirs)
                else:
                    self.assertLessEqual(abs(ours - theirs), Fraction(5, 10 ** 4) + ours / 10 ** 4, (name, k))

    def test_confounding_frequencies_of_pairs(self):
        agg = shipped_evaluation('d1').agg
        row = cfv_from_aggregates(agg)[1]
        self.assertEqual({14 - 10: 1, 14 - 6: 28, 14 - 2: 224}, {cell: count for cell, count in enumerate(row) if count})
        self.assertEqual(253, sum(row))


class TestDesignComparisons(unittest.TestCase):
    def patterns(self, name):
        return shipped_evaluation(name).report.patterns

    def test_max_pattern_separates_designs_with_equal_resolution(self):
        comparison = compare_patterns(self.patterns('d1').m_pattern, self.patterns('d2').m_pattern)
        self.assertEqual((BETTER, 4), (comparison.relation, comparison.first_differing_k))
        self.assertEqual(['4.0714', '4.1000'], [format_fixed(self.patterns(n).entry('M', 4), 4) for n in ('d1', 'd2')])

    def test_average_and_proportion_patterns_disagree(self):
        a_verdict = compare_patterns(self.patterns('d2').a_pattern, self.patterns('d3').a_pattern)
        p_verdict = compare_patterns(self.patterns('d2').p_pattern, self.patterns('d3').p_pattern)
        self.assertEqual((BETTER, 3), (a_verdict.relation, a_verdict.first_differing_k))
        self.assertEqual((WORSE, 3), (p_verdict.relation, p_verdict.first_differing_k))
        self.assertEqual(['3.0129', '3.0136'], [format_fixed(self.patterns(n).entry('A', 3), 4) for n in ('d2', 'd3')])
        self.assertEqual(['3.0615', '3.0589'], [format_fixed(self.patterns(n).entry('P', 3), 4) for n in ('d2', 'd3')])

    def test_gwlp_prefers_d2_over_d3(self):
        comparison = compare_patterns(shipped_evaluation('d2').report.classic.gwlp,
                                      shipped_evaluation('d3').report.classic.gwlp)
        self.assertEqual((BETTER, 3), (comparison.relation, comparison.first_differing_k))

    def test_design_against_itself(self):
        self.assertEqual(EQUAL, compare_patterns(self.patterns('d_sib').p_pattern,
                                                 self.patterns('d_sib').p_pattern).relation)


class TestEffectTables(unittest.TestCase):
    exact = None
    printed = None

    @classmethod
    def setUpClass(cls):
        cls.exact = load_data('d_sib_effects_exact.json')
        cls.printed = load_data('printed_tables.json')['effects']
        cls.effects = shipped_evaluation('d_sib').report.effects

    def test_column_patterns_at_display_precision(self):
        self.assertEqual(23, len(self.effects))
        for effect in self.effects:
            for which in 'MAP':
                self.assertEqual(self.exact[str(effect.column + 1)][which], displayed(effect.pattern(which)),
                                 (effect.column + 1, which))

    def test_column_aggregates(self):
        for col_agg in shipped_evaluation('d_sib').column_aggs:
            for k, max_j, sumsq_j, count in self.exact[str(col_agg.column + 1)]['aggregates']:
                self.assertEqual([max_j, sumsq_j, count],
                                 [col_agg.max_j(k), col_agg.sumsq_j(k), col_agg.count_nonzero(k)])

    def test_every_pair_with_a_column_is_aliased(self):
        for effect in self.effects:
            self.assertEqual(Fraction(21, 10), effect.entry('P', 2))

    def test_printed_tables_up_to_known_typos(self):
        mismatches = set()
        for effect in self.effects:
            column = effect.column + 1
            for which in 'MAP':
                ours = displayed(effect.pattern(which))[:-1]
                for k, (mine, theirs) in enumerate(zip(ours, self.printed[str(column)][which]), start=2):
                    if mine != theirs:
                        mismatches.add((column, which, k))
        self.assertEqual(PRINTED_EFFECT_TYPOS, mismatches)

    def test_average_pattern_ranking(self):
        self.assertEqual(A_RANKING, rank_columns(self.effects, 'A').labels())

    def test_exact_average_ranking_swaps_tied_display_values(self):
        labels = rank_columns(self.effects, 'A', decimals=None).labels()
        self.assertLess(labels.index(11), labels.index(7))
        self.assertEqual(sorted(A_RANKING), sorted(labels))

    def test_max_pattern_ranking_groups(self):
        ranking = rank_columns(self.effects, 'M')
        self.assertEqual([1, 6, 9, 16, 18, 23], ranking.labels()[:6])
        self.assertEqual([4, 5, 12, 17], ranking.labels()[-4:])
        self.assertEqual([[1, 6, 9, 16, 18, 23], [2, 3, 7, 8, 10, 11, 13, 14, 15, 19, 20, 21, 22], [5, 12, 17]],
                         [[c + 1 for c in group] for group in ranking.ties])
        for column in (1, 6, 9, 16, 18, 23):
            self.assertEqual('3.0571', format_fixed(self.effects[column - 1].entry('M', 3), 4))
        for column in (4, 5, 12, 17):
            self.assertEqual('4.1000', format_fixed(self.effects[column - 1].entry('M', 4), 4))
        # column 4 stays last on its own at the final order
        self.assertEqual(['22.0429', '22.0714', '22.0714', '22.0714'],
                         [format_fixed(self.effects[column - 1].entry('M', 22), 4) for column in (4, 5, 12, 17)])

    def test_proportion_ranking(self):
        # column 12 prints 9.0582 at k = 9 where the exact value rounds to 9.0581, which puts it ahead of column 11
        labels = rank_columns(self.effects, 'P').labels()
        self.assertEqual(PRINTED_P_RANKING[:10], labels[:10])
        self.assertEqual([12, 11], labels[10:12])
        self.assertEqual(PRINTED_P_RANKING[12:], labels[12:])

    def test_proportion_ranking_of_printed_table(self):
        printed = [EffectSeasPatterns(column - 1, *[[Fraction(v) for v in self.printed[str(column)][which]]
                                                    for which in 'MAP'])
                   for column in range(1, 24)]
        self.assertEqual(PRINTED_P_RANKING, rank_columns(printed, 'P').labels())
