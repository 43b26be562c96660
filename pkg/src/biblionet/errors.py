"""Exception types shared across the package."""


class FormatError(ValueError):
    """An input file does not conform to its declared format."""


class DegenerateDataError(ValueError):
    """An analysis is undefined for the given data.

    Raised for empty denominators, zero-variance inputs, too-small
    samples, and similar degeneracies that a caller may want to treat
    differently from a plain programming error.
    """
