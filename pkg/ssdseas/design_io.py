"""
Design matrices: the ±1 run-by-factor array, the design-vector encoding
(one integer per column, most significant bit in run 1, digit 0 for -1 and
digit 1 for +1) and the plain matrix text format.
"""
import logging
import os
import re

import numpy as np

from ssdseas.errors import DesignParseError, EncodingOverflowError, ShapeError, ValidationError

LOGGER = logging.getLogger('ssdseas')

VECTOR_HEADER = re.compile(r'^n\s*=')
DECIMAL = re.compile(r'[0-9]+')
PLUS_MINUS_TOKENS = {'-1': -1, '+1': 1, '1': 1}
ZERO_ONE_TOKENS = {'0': -1, '1': 1}
DESIGNS_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), 'designs')


class DesignMatrix(object):
    def __init__(self, entries) -> None:
        array = np.array(entries)
        if array.ndim != 2:
            raise ShapeError('a design matrix needs rows of factor levels, got %d dimension(s)' % array.ndim)
        n_runs, n_factors = array.shape
        if n_runs < 2:
            raise ValidationError('a design needs at least 2 runs, got %d' % n_runs)
        if n_factors < 1:
            raise ValidationError('a design needs at least 1 factor')
        if not np.isin(array, (-1, 1)).all():
            row, column = np.argwhere(~np.isin(array, (-1, 1)))[0]
            raise ValidationError('entry (%d, %d) is %d, expected -1 or +1' % (row + 1, column + 1, array[row, column]))
        array = array.astype(np.int8)
        array.flags.writeable = False
        self.entries = array
        self.n_runs = n_runs
        self.n_factors = n_factors
        self.run_codes = tuple(_run_code(row) for row in array)

    def column(self, j) -> np.ndarray:
        return self.entries[:, j]

    def column_masks(self) -> list:
        """per column, an n-bit integer with bit i set iff run i is at -1"""
        return [sum(1 << i for i, x in enumerate(self.entries[:, j]) if x == -1) for j in range(self.n_factors)]

    def __eq__(self, other) -> bool:
        return isinstance(other, DesignMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return 'DesignMatrix(n_runs=%d, n_factors=%d)' % (self.n_runs, self.n_factors)


class DesignVector(object):
    def __init__(self, n_runs, codes) -> None:
        if n_runs < 2:
            raise ValidationError('a design needs at least 2 runs, got %d' % n_runs)
        if len(codes) == 0:
            raise ValidationError('a design vector needs at least one code')
        self.n_runs = int(n_runs)
        self.codes = tuple(int(c) for c in codes)

    def __eq__(self, other) -> bool:
        return isinstance(other, DesignVector) and (self.n_runs, self.codes) == (other.n_runs, other.codes)

    def __hash__(self):
        return hash((self.n_runs, self.codes))

    def __repr__(self) -> str:
        return 'DesignVector(n_runs=%d, codes=%s)' % (self.n_runs, list(self.codes))


class BalanceReport(object):
    def __init__(self, column_sums) -> None:
        self.column_sums = tuple(int(s) for s in column_sums)
        self.unbalanced_columns = tuple(j for j, s in enumerate(self.column_sums) if s != 0)
        self.balanced = len(self.unbalanced_columns) == 0


def _run_code(row) -> int:
    return sum(1 << j for j, x in enumerate(row) if x == -1)


def decode_design_vector(vector) -> DesignMatrix:
    n = vector.n_runs
    columns = []
    for j, code in enumerate(vector.codes):
        if code < 0 or code >= 1 << n:
            raise EncodingOverflowError(j, code, n)
        columns.append([2 * ((code >> (n - 1 - i)) & 1) - 1 for i in range(n)])
    return DesignMatrix(np.array(columns, dtype=np.int8).T)


def encode_design_matrix(design) -> DesignVector:
    n = design.n_runs
    codes = []
    for j in range(design.n_factors):
        column = design.column(j)
        codes.append(sum(1 << (n - 1 - i) for i in range(n) if column[i] == 1))
    return DesignVector(n, codes)


def check_balance(design) -> BalanceReport:
    report = BalanceReport(design.entries.sum(axis=0, dtype=np.int64))
    if not report.balanced:
        LOGGER.warning('design is not balanced, columns %s have nonzero sums',
                       [j + 1 for j in report.unbalanced_columns])
    return report


def _significant_lines(text):
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith('#'):
            yield number, line


def _tokens(line):
    """yields (1-based column, token) for each token of a line"""
    for match in re.finditer(r'[^\s,]+', line):
        yield match.start() + 1, match.group()


def parse_matrix_text(text) -> DesignMatrix:
    rows = []
    alphabet = None
    width = None
    for line_number, line in _significant_lines(text):
        row = []
        for column, token in _tokens(line):
            if token in ('-1', '+1'):
                token_alphabet = 'pm'
            elif token == '0':
                token_alphabet = '01'
            elif token == '1':
                token_alphabet = None
            else:
                raise DesignParseError('unexpected token %r, levels must be -1/+1 or 0/1' % token,
                                       line_number, column)
            if token_alphabet is not None:
                if alphabet is None:
                    alphabet = token_alphabet
                elif alphabet != token_alphabet:
                    raise DesignParseError('token %r mixes the 0/1 and -1/+1 alphabets' % token,
                                           line_number, column)
            row.append(token)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ShapeError('row has %d entries, expected %d' % (len(row), width), line_number)
        rows.append(row)
    if not rows:
        raise DesignParseError('no design rows found')
    table = ZERO_ONE_TOKENS if alphabet == '01' else PLUS_MINUS_TOKENS
    return DesignMatrix([[table[token] for token in row] for row in rows])


def parse_design_vector_text(text, n_runs=None) -> DesignVector:
    lines = list(_significant_lines(text))
    if not lines:
        raise DesignParseError('empty design vector')
    header_number, header = lines[0]
    if VECTOR_HEADER.match(header.strip()) is None:
        if n_runs is None:
            raise DesignParseError('design vector must start with n=<runs>', header_number, 1)
        body = lines
    else:
        declared = header.split('=', 1)[1].strip()
        if DECIMAL.fullmatch(declared) is None:
            raise DesignParseError('run count %r is not a positive integer' % declared, header_number,
                                   header.index('=') + 2)
        if n_runs is not None and int(declared) != n_runs:
            raise ValidationError('design vector declares n=%s but %d runs were requested' % (declared, n_runs))
        n_runs = int(declared)
        body = lines[1:]
    codes = []
    for line_number, line in body:
        for column, token in _tokens(line):
            if DECIMAL.fullmatch(token) is None:
                raise DesignParseError('unexpected token %r, codes must be nonnegative integers' % token,
                                       line_number, column)
            codes.append(int(token))
    if not codes:
        raise DesignParseError('design vector has no codes')
    return DesignVector(n_runs, codes)


def is_design_vector_text(text) -> bool:
    for _, line in _significant_lines(text):
        return VECTOR_HEADER.match(line.strip()) is not None
    return False


def has_signed_levels(text) -> bool:
    """true when some token is -1 or +1, which no design vector contains"""
    return any(token in ('-1', '+1') for _, line in _significant_lines(text) for _, token in _tokens(line))


def read_design_text(text, n_runs=None) -> DesignMatrix:
    """autodetects the format: a first line starting with n= is a design vector"""
    if is_design_vector_text(text):
        return decode_design_vector(parse_design_vector_text(text, n_runs))
    return parse_matrix_text(text)


def read_design(path, n_runs=None) -> DesignMatrix:
    with open(path) as design_file:
        return read_design_text(design_file.read(), n_runs)


def format_design_vector(vector) -> str:
    return 'n=%d\n%s\n' % (vector.n_runs, ' '.join(str(c) for c in vector.codes))


def format_matrix_text(design, alphabet='pm') -> str:
    if alphabet == '01':
        labels = {-1: '0', 1: '1'}
    else:
        labels = {-1: '-1', 1: '+1'}
    return ''.join(' '.join(labels[int(x)] for x in row) + '\n' for row in design.entries)


def shipped_designs() -> list:
    return sorted(os.path.splitext(name)[0] for name in os.listdir(DESIGNS_DIR) if name.endswith('.vec'))


def read_shipped_design(name) -> DesignMatrix:
    """one of the design vectors bundled in ssdseas/designs, by file stem"""
    if name not in shipped_designs():
        raise ValidationError('unknown shipped design %r, expected one of %s' % (name, ', '.join(shipped_designs())))
    return read_design(os.path.join(DESIGNS_DIR, name + '.vec'))
