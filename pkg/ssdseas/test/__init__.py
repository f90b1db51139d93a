import os
from functools import lru_cache
from json import loads

from ssdseas.alias_core import aggregate, aggregate_per_column, compute_spectrum
from ssdseas.design_io import encode_design_matrix, read_shipped_design
from ssdseas.report import build_design_report

DATA_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), 'data')


def load_data(name) -> dict:
    with open(os.path.join(DATA_DIR, name)) as data_file:
        return loads(data_file.read())


class ShippedEvaluation(object):
    def __init__(self, agg, column_aggs, report) -> None:
        self.agg = agg
        self.column_aggs = column_aggs
        self.report = report


@lru_cache(maxsize=None)
def shipped_evaluation(name) -> ShippedEvaluation:
    """aggregates and full report of a bundled design, computed once per test run"""
    design = read_shipped_design(name)
    spectrum = compute_spectrum(design, engine='wht')
    report = build_design_report(design, name, encode_design_matrix(design), with_effects=True, spectrum=spectrum)
    return ShippedEvaluation(aggregate(spectrum), aggregate_per_column(spectrum), report)
