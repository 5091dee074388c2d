"""Exception hierarchy shared by every stage of the pipeline."""


class BanglaHateError(Exception):
    """Base class for all errors raised by this package."""


class DataError(BanglaHateError):
    """Input data is malformed or inconsistent (CLI exit code 2)."""


class ParseError(DataError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class SchemaError(DataError):
    """A label does not belong to the expected schema, or schemas disagree."""


class ValidationError(DataError):
    """Structural invariant violated (duplicate ids, mismatched lengths...)."""


class ScoringError(DataError):
    """A prediction file cannot be aligned with its gold file."""

    def __init__(self, message, offenders=()):
        self.offenders = list(offenders)
        super().__init__(message)


class TrainError(BanglaHateError):
    pass


class NumericError(TrainError):
    def __init__(self, message, epoch=None):
        self.epoch = epoch
        super().__init__(message)


class ModelLoadError(DataError):
    pass


class ConfigError(DataError):
    pass


class StageError(BanglaHateError):
    """Wraps an error raised inside one stage of an experiment run."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
