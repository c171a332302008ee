"""Exception hierarchy.

``ContractViolation`` subclasses signal that an exact computation broke one of
its own guarantees (a division that had to be exact, a closed form that had to
match). Those are implementation bugs, never mathematical findings, and the
command line maps them to exit code 3.
"""


class QConvexError(Exception):
    pass


class ContractViolation(QConvexError):
    pass


class NotDivisible(ContractViolation):
    pass


class NotIntegral(ContractViolation):
    pass


class MismatchError(ContractViolation):
    def __init__(self, field, expected=None, actual=None):
        self.field = field
        self.expected = expected
        self.actual = actual
        super().__init__(f"{field}: expected {expected}, got {actual}")


class DomainError(QConvexError, ValueError):
    pass


class ParityError(DomainError):
    pass


class DegreeBoundTooSmall(DomainError):
    pass


class ZeroDenominator(QConvexError, ZeroDivisionError):
    pass


class ZeroPolynomial(DomainError):
    pass


class OddMultiplicityZero(QConvexError):
    pass


class ConvergenceFailure(QConvexError):
    def __init__(self, worst_residual):
        self.worst_residual = worst_residual
        super().__init__(f"root residual {worst_residual:.3e} above tolerance")


class ResidualTooLarge(QConvexError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"grid residual {residual:.3e} above tolerance")


class PairingAmbiguity(QConvexError):
    pass
