"""Exception hierarchy shared by every module.

CLI exit codes map onto these: ValidationError -> 2, InconclusiveError -> 3.
"""


class CrystalFormsError(Exception):
    """Base class."""


class ValidationError(CrystalFormsError, ValueError):
    """Malformed or inconsistent input (bad graph, bad table, unknown id)."""


class InconclusiveError(CrystalFormsError):
    """A finite window is too small to decide a statement about the infinite lattice."""


class CapExceeded(CrystalFormsError):
    """An enumeration would exceed the configured state-space cap."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ClosednessError(CrystalFormsError):
    """A form integrates to a nonzero value around a closed path."""

    def __init__(self, message, cycle=None, defect=None):
        super().__init__(message)
        self.cycle = cycle
        self.defect = defect


class SplittingError(CrystalFormsError):
    """A pairing table cannot be written as a coboundary."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificateError(CrystalFormsError):
    """Internal consistency failure of a decomposition (nonzero residual)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
