#!/usr/bin/env python3
"""
Exception hierarchy for the self-dual normal basis toolkit
Every error carries the CLI exit code it maps to
"""

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARAMETERS = 2
EXIT_PRECISION = 3


class SdnbError(Exception):
    """Base class for all toolkit errors"""

    exit_code = EXIT_VERIFY_FAILED


class ParameterError(SdnbError, ValueError):
    """Invalid or unsupported parameters"""

    exit_code = EXIT_PARAMETERS


class ExistenceError(SdnbError):
    """No self-dual basis exists for the requested extension"""

    exit_code = EXIT_PARAMETERS

    def __init__(self, message: str, criterion: str):
        super().__init__(f"{message} ({criterion})")
        self.criterion = criterion


class DomainError(SdnbError, ValueError):
    """Input outside the domain of an operation"""

    exit_code = EXIT_PARAMETERS


class NotFoundError(SdnbError):
    """Polynomial has no root in the requested field"""

    exit_code = EXIT_PARAMETERS


class PrecisionError(SdnbError, ArithmeticError):
    """Working precision exhausted"""

    exit_code = EXIT_PRECISION


class VerificationError(SdnbError):
    """A constructed object failed its own certificate check"""

    exit_code = EXIT_VERIFY_FAILED


class InternalError(SdnbError):
    """An invariant guaranteed by theory did not hold"""

    exit_code = EXIT_VERIFY_FAILED


class CertificateFormatError(SdnbError):
    """Certificate document is unreadable or schema-invalid"""

    exit_code = EXIT_PARAMETERS


ODD_DEGREE_CRITERION = (
    "in odd characteristic a self-dual normal basis exists if and only if "
    "[F:E] is odd"
)
EXPONENT_FOUR_CRITERION = (
    "in characteristic 2 a self-dual normal basis exists if and only if "
    "the exponent of the Galois group is not divisible by 4"
)
WEAK_RAMIFICATION_CRITERION = (
    "A_{L/K} has a self-dual integral normal basis only for odd-degree, "
    "at most weakly ramified L/K"
)
