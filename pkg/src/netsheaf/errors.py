class Undecided(Exception):
    """The question is well posed but outside what the library can decide.

    Raised instead of guessing, e.g. conjugacy in an unsupported infinite group.
    """


class BoundExceeded(ValueError):
    """A brute-force search would exceed its documented size bound."""


class TrivialClassError(ValueError):
    """A paradox was requested for a cocycle whose class is trivial."""
