"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: configuration and input
problems exit with 2, numerical failures with 3, and I/O errors
(plain ``OSError``) with 4.
"""


class FractalFcError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FractalFcError):
    """Invalid configuration, malformed input file, or bad argument."""


class NumericalError(FractalFcError):
    """A computation failed or produced a degenerate/unstable result."""
