"""Exception hierarchy shared across the package.

Input errors correspond to CLI exit code 2, numerical errors to exit code 3.
"""


class GraphspecError(Exception):
    """Base class for all library errors."""


class InputError(GraphspecError):
    """Invalid argument, shape, or violated precondition."""


class NumericalError(GraphspecError):
    """A computation failed or left its supported numerical regime."""


class DimensionMismatch(InputError):
    """Operands have incompatible sizes."""


class InvalidSpec(InputError):
    """A graph/experiment specification is malformed."""


class InvalidExponents(InputError):
    """Shift-invariance exponents (a, b, c) violate their constraints."""


class NotNormal(InputError):
    """Shift matrix fails the normality test S S^H = S^H S."""


class NotSymmetric(InputError):
    """Operation requires a symmetric (real-spectrum) shift."""


class ShiftNotPSD(InputError):
    """Operation requires a positive-semidefinite shift."""


class EigsNotDistinct(InputError):
    """Operation requires all shift eigenvalues to be distinct."""


class Disconnected(InputError):
    """Graph is disconnected where a connected one is required."""


class EmptyBank(InputError):
    """A window or filter bank has no members."""


class DegreeOverflow(InputError):
    """Filter expansion exceeds degree N-1 and cannot be reduced."""


class NumericalFailure(NumericalError):
    """An eigensolver or factorization did not converge / produced garbage."""


class IllConditioned(NumericalError):
    """A linear system is too ill conditioned to solve reliably."""


class PoleOnGrid(NumericalError):
    """A rational filter has a pole at (or too close to) a shift eigenvalue."""


class NoDescent(NumericalError):
    """All restarts of a nonconvex fit failed to beat the flat baseline."""


class RankDeficientWarning(UserWarning):
    """Least-squares design matrix was rank deficient; minimum-norm used."""
