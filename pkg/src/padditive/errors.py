"""Exception types; the CLI maps each to its own exit code."""


class ParseError(ValueError):
    """Malformed field spec, rational function or p-polynomial text."""

    def __init__(self, msg, text=None, pos=None):
        self.text, self.pos = text, pos
        if text is not None and pos is not None:
            msg = f"{msg} at position {pos}: {text!r}"
        super().__init__(msg)


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class InvariantError(RuntimeError):
    """An internal consistency check failed (a bug, not bad input)."""
