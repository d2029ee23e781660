"""Exception hierarchy shared by all qforge modules."""


class QForgeError(Exception):
    pass


class InputError(QForgeError, ValueError):
    """Malformed or inconsistent input (bad word, bad table, bad JSON)."""


class PreconditionError(InputError):
    """An operation was called outside its documented domain."""


class UnsupportedDegreeError(InputError):
    pass


class DomainError(InputError):
    """Elements lie in different components where one is required."""


class CertificationError(QForgeError, RuntimeError):
    """A certified inequality failed on a concrete witness.

    This signals either a wrong configured bound or an evaluation bug, never
    a property of the input that could be worked around.
    """
