"""Exception types shared across the library.

The CLI maps these onto its exit-code contract: validation failures exit
with 2, size-guard rejections with 3.
"""


class HypergamesError(Exception):
    """Base class for all library errors."""


class ValidationError(HypergamesError):
    """Malformed input: schema violations, dangling references, bad values."""


class SizeLimitError(HypergamesError):
    """An explicit size guard was exceeded (alphabet blow-up, oracle bound)."""
