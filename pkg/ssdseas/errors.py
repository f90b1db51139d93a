EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_RESOURCE = 4
EXIT_INCONSISTENT = 5


class SeasError(Exception):
    exit_code = EXIT_USAGE

    def __init__(self, *args: object) -> None:
        super().__init__(*args)


class DesignParseError(SeasError, ValueError):
    exit_code = EXIT_PARSE

    def __init__(self, message, line=None, column=None) -> None:
        self.line = line
        self.column = column
        if line is not None:
            where = 'line %d' % line if column is None else 'line %d, column %d' % (line, column)
            message = '%s: %s' % (where, message)
        super().__init__(message)


class ShapeError(DesignParseError):
    pass


class ValidationError(SeasError, ValueError):
    exit_code = EXIT_VALIDATION


class EncodingOverflowError(ValidationError):
    def __init__(self, column, code, n_runs) -> None:
        self.column = column
        self.code = code
        super().__init__('column %d: code %d does not fit in %d bits' % (column + 1, code, n_runs))


class UnavailableRangeError(ValidationError):
    pass


class ResourceError(SeasError):
    exit_code = EXIT_RESOURCE


class IllegalStateError(SeasError, RuntimeError):
    exit_code = EXIT_INCONSISTENT


class UsageError(SeasError):
    exit_code = EXIT_USAGE
