"""Exception hierarchy shared by all ffmv modules."""


class FFMVError(Exception):
    pass


class NonPrimeP(FFMVError, ValueError):
    pass


class ReducibleModulus(FFMVError, ValueError):
    pass


class DivisionByZero(FFMVError, ZeroDivisionError):
    pass


class NotMonic(FFMVError, ValueError):
    pass


class ZeroPolynomial(FFMVError, ValueError):
    pass


class ZeroModulus(FFMVError, ValueError):
    pass


class BudgetExceeded(FFMVError, RuntimeError):
    pass


class GroupTooLarge(BudgetExceeded):
    pass


class DegreeTooSmall(FFMVError, ValueError):
    pass


class DegreeConstraintViolated(FFMVError, ValueError):
    pass


class NotCoprime(FFMVError, ValueError):
    pass


class SizeMismatch(FFMVError, ValueError):
    pass


class DomainError(FFMVError, ValueError):
    pass


class CrossCheckMismatch(FFMVError, AssertionError):
    pass


class OrthogonalityViolation(FFMVError, AssertionError):
    pass


class BoundViolation(FFMVError, AssertionError):
    pass


class NumericalInstability(FFMVError, ArithmeticError):
    pass
