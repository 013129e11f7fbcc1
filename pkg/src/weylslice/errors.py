"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An operation was called outside its precondition."""


class LemmaViolation(RuntimeError):
    """A search guaranteed to succeed by a proven lemma came back empty.

    Raising this means either a bug or a counterexample; both deserve a look.
    """
