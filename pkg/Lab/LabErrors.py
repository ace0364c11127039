"""
Exceptions raised by the lab. Every error carries the process exit code the
command line maps it to: 2 usage, 3 verification failure, 4 capability or
budget refusal.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3
EXIT_CAPABILITY = 4


class LabError(Exception):
    exit_code = EXIT_USAGE


# MARK: Field errors
class FieldConstructionError(LabError):
    """The modulus is reducible or has the wrong degree."""
    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class FieldMismatchError(LabError):
    pass


class DivisionByZeroError(LabError, ZeroDivisionError):
    pass


class DomainError(LabError):
    pass


# MARK: Tower errors
class StructureError(LabError):
    exit_code = EXIT_VERIFICATION

    def __init__(self, message, element=None, depth=None):
        super().__init__(message)
        self.element = element
        self.depth = depth


class PlaceCapError(LabError):
    exit_code = EXIT_CAPABILITY

    def __init__(self, message, expected_count):
        super().__init__(message)
        self.expected_count = expected_count


class CapabilityError(LabError):
    exit_code = EXIT_CAPABILITY


# MARK: Code errors
class InsufficientRepairDataError(LabError):
    pass


class LocalityUndefinedError(LabError):
    pass


class ConstructionError(LabError):
    """A counting claim behind an explicit low-weight codeword does not hold."""
    exit_code = EXIT_VERIFICATION

    def __init__(self, message, claim):
        super().__init__(message)
        self.claim = claim


class BudgetExceededError(LabError):
    exit_code = EXIT_CAPABILITY

    def __init__(self, message, required_budget):
        super().__init__(message)
        self.required_budget = required_budget


class UsageError(LabError):
    pass
