from django.core.exceptions import ValidationError


class CorrelationLabError(Exception):
    """Base class for every error raised by the correlation lab."""


class DomainError(CorrelationLabError, ValidationError):
    """
    An argument lies outside the domain of an operation.

    Subclasses Django's ValidationError so forms and views can report it
    the same way they report field errors.
    """

    def __init__(self, message):
        ValidationError.__init__(self, message, code='domain')

    def __str__(self):
        return str(self.message)


class InconsistentListsError(DomainError):
    """Trial records cannot be arranged into four consistent lists."""
