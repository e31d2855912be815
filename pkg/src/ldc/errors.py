"""Errors raised by the checkers."""


class CheckError(Exception):
    def __init__(self, msg, rule=""):
        super().__init__(f"{rule}: {msg}" if rule else msg)
        self.rule = rule
        self.msg = msg


class TypeMismatch(CheckError):
    pass


class UsageError(CheckError):
    """Grade accounting failed; retrying at a lower observer grade may help."""
