import logging
import time

import numpy as np

from ssdseas.alias_core import full_spectrum_enum, full_spectrum_wht
from ssdseas.design_io import DesignMatrix, read_shipped_design

logging.basicConfig(format='%(asctime)s [%(name)s][%(process)d] %(levelname)s: %(message)s')
LOGGER = logging.getLogger('spectrumbench')
LOGGER.setLevel(logging.INFO)

N_RUNS = 14
FACTORS = (8, 12, 16, 20, 23)
ENUM_KMAX = 3
SEED = 42


def timed(function, *args):
    start = time.perf_counter()
    result = function(*args)
    return result, time.perf_counter() - start


def bench(designs):
    for name, design in designs:
        spectrum, wht_seconds = timed(full_spectrum_wht, design)
        LOGGER.info('%s (%d x %d): transform %d subsets in %.3f s', name, design.n_runs, design.n_factors,
                    len(spectrum), wht_seconds)
        spectrum, enum_seconds = timed(full_spectrum_enum, design, ENUM_KMAX)
        LOGGER.info('%s (%d x %d): enumeration up to k=%d, %d subsets in %.3f s', name, design.n_runs,
                    design.n_factors, ENUM_KMAX, len(spectrum), enum_seconds)


def random_designs():
    rng = np.random.default_rng(SEED)
    return [('random_%d' % m, DesignMatrix(rng.choice([-1, 1], size=(N_RUNS, m)))) for m in FACTORS]


if __name__ == '__main__':
    bench(random_designs() + [('d_sib', read_shipped_design('d_sib'))])
