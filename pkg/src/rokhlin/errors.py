"""Exception hierarchy.

The CLI maps :class:`InputError` subclasses to exit code 1 and
:class:`InternalInconsistencyError` subclasses to exit code 3.
"""

from __future__ import annotations


class RokhlinError(Exception):
    pass


class InputError(RokhlinError, ValueError):
    pass


class InvalidOrderError(InputError):
    pass


class UnsupportedOperationError(InputError):
    pass


class GroupMismatchError(InputError):
    pass


class NotACharacterError(InputError):
    pass


class InexactInputError(InputError):
    pass


class OutOfRangeError(InputError, IndexError):
    pass


class DimensionMismatchError(InputError):
    pass


class RankMismatchError(InputError):
    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element


class EmptyBlockError(InputError):
    pass


class NoRegularSummandError(InputError):
    pass


class SpecValidationError(InputError):
    """Schema or invariant violation, labelled with a field path like ``levels[2].mults``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message


class InvariantViolationError(SpecValidationError):
    pass


class HorizonExhaustedError(RokhlinError):
    def __init__(self, message: str, position: int, partial=None):
        super().__init__(message)
        self.position = position
        self.partial = partial


class InternalInconsistencyError(RokhlinError):
    pass


class IdentityViolationError(InternalInconsistencyError):
    def __init__(self, message: str, element=None, defect: float | None = None):
        super().__init__(message)
        self.element = element
        self.defect = defect
