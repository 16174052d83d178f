"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class InvariantViolation(ValueError):
    """An input object does not satisfy the invariants it is supposed to carry."""


class NumericalError(ArithmeticError):
    """Integration produced non-finite values."""


class NonCommutingError(DomainError):
    """The coefficient matrix does not commute with itself at different times.

    The analytic propagator exp(G) is only exact when it does; callers should
    fall back to RK4 integration.
    """


class ConfigError(ValueError):
    """A configuration document failed validation.

    ``problems`` lists every violated constraint, not just the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(ValueError):
    """A bit string contained a symbol other than 0 or 1."""


class EncodingMismatch(RuntimeError):
    """The physical witness of a parity transition disagrees with the truth table."""

    def __init__(self, message, observables=None):
        super().__init__(message)
        self.observables = dict(observables or {})


class DensityMatrixWarning(UserWarning):
    """A reconstructed density matrix is not positive semidefinite."""


class DegenerateSpectrumWarning(UserWarning):
    """Eigenvalues are too close for Sylvester's formula."""
