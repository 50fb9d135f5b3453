"""Exception hierarchy shared by the library and the command line."""


class MatrixProfileError(Exception):
    """Base class for every error raised by mpkit."""

    exit_code = 1


class ParameterError(MatrixProfileError, ValueError):
    """An argument is outside its valid range or inconsistent with another."""

    exit_code = 2


class UnsupportedModeError(ParameterError):
    """The requested algorithm cannot run this kind of join."""


class StaleProfileError(MatrixProfileError):
    """A discovery step needs something the profile or archive does not carry."""

    exit_code = 3


class IngestionError(MatrixProfileError):
    """Input files or archives could not be read."""

    exit_code = 4
