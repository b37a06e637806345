"""Exception hierarchy shared by all modules.

``ValidationError`` covers malformed input and violated preconditions (CLI exit
code 2); ``CapExceeded`` covers brute-force searches that hit a configured
bound (CLI exit code 3).  ``InternalError`` signals an invariant that the theory
guarantees but the implementation failed to maintain.
"""


class FlipdistError(Exception):
    pass


class ValidationError(FlipdistError, ValueError):
    pass


class CapExceeded(FlipdistError):
    pass


class InternalError(FlipdistError, RuntimeError):
    pass
