"""Exception types shared across the package."""


class DocumentError(ValueError):
    """Malformed algebra document, unknown corpus name, or bad CLI input."""


class PreconditionError(ValueError):
    """A mathematical precondition failed (singular map, guard violation, non-member input)."""
