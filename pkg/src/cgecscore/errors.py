"""Shared exception types."""


class DataError(Exception):
    """An input file or record violates the corpus/hypothesis/table contract.

    Messages name the offending file and, where possible, the line number.
    The CLI maps this to exit code 2.
    """
