"""Exceptions shared across the package."""


class ResourceLimitError(RuntimeError):
    """Raised when a computation would exceed a hard size bound.

    Analyzers and generators refuse oversized requests up front instead of
    thrashing; the CLI maps this to exit code 3.
    """
