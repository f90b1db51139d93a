import getopt
import logging
import os
import sys
from json import loads, dumps

from ssdseas.alias_core import DEFAULT_MAX_FACTORS, ENGINES, compute_spectrum, write_spectrum_csv
from ssdseas.classic import verify_theorems
from ssdseas.design_io import DECIMAL, DesignVector, check_balance, decode_design_vector, encode_design_matrix, \
    format_matrix_text, has_signed_levels, is_design_vector_text, parse_design_vector_text, \
    read_design_text
from ssdseas.errors import EXIT_OK, EXIT_USAGE, IllegalStateError, SeasError, UsageError, ValidationError
from ssdseas.report import DEFAULT_TRUNCATE, DEFAULT_WIDTH, FORMATS, build_design_report, design_report_dict, \
    render_comparison, render_design_report, render_effect_report
from ssdseas.seas import PATTERNS

logging.basicConfig(format='%(asctime)s [%(name)s][%(process)d] %(levelname)s: %(message)s')
LOGGER = logging.getLogger('ssdseas')
LOGGER.setLevel(logging.INFO)

COMMANDS = ('evaluate', 'compare', 'effect-seas', 'decode', 'verify')
UNCAPPED_FACTORS = 24
CAPPED_KMAX = 5
CONFIG_KEYS = ('max_factors', 'kmax', 'engine', 'format', 'width', 'pattern', 'strict_text', 'truncate')


class CliConfig(object):
    def __init__(self, command, inputs, fmt='text', kmax=None, engine='auto', patterns=PATTERNS, strict_text=False,
                 n_runs=None, width=DEFAULT_WIDTH, truncate=DEFAULT_TRUNCATE, max_factors=DEFAULT_MAX_FACTORS,
                 dump_spectrum=None) -> None:
        if command not in COMMANDS:
            raise UsageError('unknown command %r, expected one of %s' % (command, ', '.join(COMMANDS)))
        if fmt not in FORMATS:
            raise ValidationError('unknown format %r, expected one of %s' % (fmt, ', '.join(FORMATS)))
        if engine not in ENGINES:
            raise ValidationError('unknown engine %r, expected one of %s' % (engine, ', '.join(ENGINES)))
        if kmax is not None and kmax < 2:
            raise ValidationError('--kmax must be at least 2, got %d' % kmax)
        self.command = command
        self.inputs = list(inputs)
        self.format = fmt
        self.kmax = kmax
        self.engine = engine
        self.patterns = tuple(patterns)
        self.strict_text = strict_text
        self.n_runs = n_runs
        self.width = width
        self.truncate = truncate
        self.max_factors = max_factors
        self.dump_spectrum = dump_spectrum

    def kmax_for(self, n_factors):
        """explicit kmax wins, otherwise unlimited up to 24 factors and 5 above"""
        if self.kmax is not None:
            if self.kmax > n_factors:
                raise ValidationError('--kmax %d exceeds the %d factors of the design' % (self.kmax, n_factors))
            return None if self.kmax == n_factors else self.kmax
        if n_factors <= UNCAPPED_FACTORS:
            return None
        LOGGER.warning('%d factors: evaluating subsets up to size %d, use --kmax to change', n_factors, CAPPED_KMAX)
        return CAPPED_KMAX


def usage(argv):
    print('Usage: %s command [options] input...' % os.path.basename(argv[0]))
    print('commands:')
    print('\tevaluate: summary of each input design (patterns, E(s^2), GR, GWLP)')
    print('\tcompare: side by side summary and pairwise verdicts of two or more designs')
    print('\teffect-seas: per-column patterns and column rankings of one design')
    print('\tdecode: design vector (file or codes) to a -1/+1 matrix')
    print('\tverify: exact check of the pattern identities on each design')
    print('inputs are design vector files (first line n=<runs>) or matrix text files, - reads stdin')
    print('options:')
    print('\t--n: number of runs, inputs without a n= header and without -1/+1 entries are then read as design vectors')
    print('\t--format: text (default), csv or json')
    print('\t--kmax: largest subset size to evaluate (default all up to 24 factors, 5 above)')
    print('\t--engine: auto (default), wht, enum or cross-check')
    print('\t--pattern: M, A, P or all (default all)')
    print('\t--strict-text: per-column A over plain indices and P over C(m, k)')
    print('\t--truncate: largest k shown by compare (default %d)' % DEFAULT_TRUNCATE)
    print('\t--width: text wrap width (default %d)' % DEFAULT_WIDTH)
    print('\t--dump-spectrum: write the |J| spectrum of the first input as csv to this path')
    print('\t--config: json dict string or file path beginning with @, keys: %s' % ', '.join(CONFIG_KEYS))
    print('\t-v|--verbose: debug logs')
    print('\t-q|--quiet: warnings and errors only')


def _get_dict_from_string_or_file(input_str) -> dict:
    if input_str is None:
        return dict()
    if input_str.startswith('@'):
        with open(input_str[1:]) as config_file:
            return loads(config_file.read())
    else:
        return loads(input_str)


def _int_option(name, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValidationError('%s expects an integer, got %r' % (name, value))


def _patterns_option(value) -> tuple:
    value = str(value)
    if value.lower() == 'all':
        return PATTERNS
    selected = tuple(p.strip().upper() for p in value.split(','))
    for which in selected:
        if which not in PATTERNS:
            raise ValidationError('--pattern expects M, A, P or all, got %r' % value)
    return selected


def parse_args(argv) -> CliConfig:
    try:
        options, remainder = getopt.gnu_getopt(argv[1:], 'hvq',
                ['help', 'verbose', 'quiet', 'n=', 'format=', 'kmax=', 'engine=', 'pattern=', 'strict-text',
                 'truncate=', 'width=', 'dump-spectrum=', 'config='])
    except getopt.GetoptError as error:
        raise UsageError(str(error))
    if not remainder:
        raise UsageError('missing command')

    settings = dict()
    config_file_settings = dict()
    for opt, arg in options:
        if opt in ('-h', '--help'):
            usage(argv)
            sys.exit()

        if opt in ('-v', '--verbose'):
            LOGGER.setLevel(logging.DEBUG)

        if opt in ('-q', '--quiet'):
            LOGGER.setLevel(logging.WARNING)

        if opt == '--config':
            config_file_settings = _get_dict_from_string_or_file(arg)

        if opt == '--n':
            settings['n_runs'] = _int_option(opt, arg)

        if opt == '--format':
            settings['fmt'] = arg

        if opt == '--kmax':
            settings['kmax'] = _int_option(opt, arg)

        if opt == '--engine':
            settings['engine'] = arg

        if opt == '--pattern':
            settings['patterns'] = _patterns_option(arg)

        if opt == '--strict-text':
            settings['strict_text'] = True

        if opt == '--truncate':
            settings['truncate'] = _int_option(opt, arg)

        if opt == '--width':
            settings['width'] = _int_option(opt, arg)

        if opt == '--dump-spectrum':
            settings['dump_spectrum'] = arg

    merged = _settings_from_config(config_file_settings)
    merged.update(settings)
    return CliConfig(remainder[0], remainder[1:], **merged)


def _settings_from_config(config_dict) -> dict:
    if not isinstance(config_dict, dict):
        raise ValidationError('--config expects a json object')
    unknown = set(config_dict) - set(CONFIG_KEYS)
    if unknown:
        raise ValidationError('unknown config keys %s, expected some of %s' % (sorted(unknown), ', '.join(CONFIG_KEYS)))
    settings = dict()
    for key in ('max_factors', 'kmax', 'width', 'truncate'):
        if config_dict.get(key) is not None:
            settings[key] = _int_option(key, config_dict[key])
    if 'engine' in config_dict:
        settings['engine'] = config_dict['engine']
    if 'format' in config_dict:
        settings['fmt'] = config_dict['format']
    if 'pattern' in config_dict:
        settings['patterns'] = _patterns_option(config_dict['pattern'])
    if 'strict_text' in config_dict:
        settings['strict_text'] = bool(config_dict['strict_text'])
    return settings


def _read_input(path) -> str:
    if path == '-':
        return sys.stdin.read()
    with open(path) as design_file:
        return design_file.read()


def _design_name(path) -> str:
    return 'stdin' if path == '-' else os.path.splitext(os.path.basename(path))[0]


def load_designs(config) -> list:
    """(name, design matrix, design vector or None) for every input"""
    if not config.inputs:
        raise UsageError('%s needs at least one input' % config.command)
    designs = []
    for path in config.inputs:
        text = _read_input(path)
        vector = None
        if is_design_vector_text(text) or (config.n_runs is not None and not has_signed_levels(text)):
            vector = parse_design_vector_text(text, config.n_runs)
        design = decode_design_vector(vector) if vector is not None else read_design_text(text)
        LOGGER.info('read design %s: %d runs x %d factors', path, design.n_runs, design.n_factors)
        check_balance(design)
        designs.append((_design_name(path), design, vector))
    return designs


def _report(config, name, design, vector, with_effects=False, dump=False):
    k_max = config.kmax_for(design.n_factors)
    spectrum = compute_spectrum(design, k_max, config.engine, config.max_factors)
    if dump and config.dump_spectrum is not None:
        with open(config.dump_spectrum, 'w') as spectrum_file:
            write_spectrum_csv(spectrum, spectrum_file)
        LOGGER.info('wrote %s subsets to %s', len(spectrum), config.dump_spectrum)
    return build_design_report(design, name, vector if vector is not None else encode_design_matrix(design),
                               with_effects=with_effects, strict_text=config.strict_text, spectrum=spectrum)


def evaluate(config, stream) -> None:
    reports = [_report(config, name, design, vector, dump=i == 0)
               for i, (name, design, vector) in enumerate(load_designs(config))]
    if config.format == 'json' and len(reports) > 1:
        stream.write(dumps([design_report_dict(r, config.patterns) for r in reports], indent=2) + '\n')
        return
    stream.write('\n'.join(render_design_report(r, config.format, config.width, config.patterns) for r in reports))


def compare(config, stream) -> None:
    designs = load_designs(config)
    if len(designs) < 2:
        raise UsageError('compare needs at least two inputs')
    reports = [_report(config, name, design, vector, dump=i == 0) for i, (name, design, vector) in enumerate(designs)]
    stream.write(render_comparison(reports, config.patterns, config.truncate, config.format))


def effect_seas(config, stream) -> None:
    designs = load_designs(config)
    if len(designs) != 1:
        raise UsageError('effect-seas takes exactly one input')
    name, design, vector = designs[0]
    report = _report(config, name, design, vector, with_effects=True, dump=True)
    stream.write(render_effect_report(report, config.format, config.width, config.patterns))


def _decode_inputs(config) -> list:
    if config.inputs and all(DECIMAL.fullmatch(token) for token in config.inputs):
        if config.n_runs is None:
            raise UsageError('decoding codes from the command line needs --n')
        return [DesignVector(config.n_runs, [int(token) for token in config.inputs])]
    return [vector if vector is not None else encode_design_matrix(design)
            for _, design, vector in load_designs(config)]


def decode(config, stream) -> None:
    for vector in _decode_inputs(config):
        stream.write(format_matrix_text(decode_design_vector(vector)))


def verify(config, stream) -> None:
    failed = []
    for name, design, _ in load_designs(config):
        spectrum = compute_spectrum(design, config.kmax_for(design.n_factors), config.engine, config.max_factors)
        report = verify_theorems(design, spectrum)
        for identity in ('resolution', 'wordlength', 'es2', 'cfv'):
            checks = report.by_name(identity)
            if identity in report.skipped or not checks:
                status = 'skipped'
            else:
                status = 'OK' if all(c.holds for c in checks) else 'FAILED'
            stream.write('%s: %s identity: %s\n' % (name, identity, status))
        stream.write('%s: all identities: %s\n' % (name, 'OK' if report.holds else 'FAILED'))
        if not report.holds:
            failed.append(name)
    if failed:
        raise IllegalStateError('pattern identities do not hold for %s' % ', '.join(failed))


ACTIONS = {'evaluate': evaluate, 'compare': compare, 'effect-seas': effect_seas, 'decode': decode, 'verify': verify}


def run(config, stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    try:
        ACTIONS[config.command](config, stream)
    except SeasError as error:
        LOGGER.error('%s: %s', config.command, error)
        return error.exit_code
    except OSError as error:
        LOGGER.error('%s: %s', config.command, error)
        return EXIT_USAGE
    except Exception:
        LOGGER.exception('unexpected error while running %s', config.command)
        return EXIT_USAGE
    return EXIT_OK


def main(argv=None):
    argv = sys.argv if argv is None else argv
    if len(argv) == 1:
        usage(argv)
        sys.exit(EXIT_USAGE)
    try:
        config = parse_args(argv)
    except UsageError as error:
        LOGGER.error(error)
        usage(argv)
        sys.exit(error.exit_code)
    except SeasError as error:
        LOGGER.error(error)
        sys.exit(error.exit_code)
    except (OSError, ValueError) as error:
        LOGGER.error('invalid --config: %s', error)
        sys.exit(EXIT_USAGE)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
