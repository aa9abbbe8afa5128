"""Exception types shared by every stage of the engine.

Each error carries a ``kind`` string naming its category (``"unbound-variable"``,
``"sort-mismatch"``, ...) so callers and tests can dispatch on it without
matching message text.  Syntax errors carry a ``(line, col)`` position and
well-formedness errors a ``path`` into the offending term.
"""

from __future__ import annotations


class SoasError(Exception):
    kind = "error"

    def __init__(self, message, *, kind=None, pos=None, path=(), source=None):
        super().__init__(message)
        self.message = message
        if kind is not None:
            self.kind = kind
        self.pos = pos
        self.path = tuple(path)
        self.source = source

    def located(self, source):
        """Attach a file name used when rendering the diagnostic."""
        self.source = source
        return self

    def __str__(self):
        where = ""
        if self.pos is not None:
            line, col = self.pos
            where = f"{self.source or '<input>'}:{line}:{col}: "
        elif self.source:
            where = f"{self.source}: "
        path = ""
        if self.path:
            path = " at /" + "/".join(self.path)
        return f"{where}{self.kind}: {self.message}{path}"


class SpecError(SoasError):
    """Malformed signature specification."""

    kind = "spec-error"


class SortError(SoasError):
    """Sort instantiation or unification failure."""

    kind = "sort-error"


class ContextError(SoasError):
    """Renaming/substitution applied between incompatible contexts."""

    kind = "context-mismatch"


class CheckError(SoasError):
    """A term violates a well-formedness invariant."""

    kind = "ill-formed"

    def under(self, step):
        """Prefix ``step`` to the error path while it propagates outward."""
        self.path = (step,) + self.path
        return self


class TermSyntaxError(SoasError):
    """Concrete term text that cannot be parsed or elaborated."""

    kind = "parse-error"


class GenerationError(SoasError):
    kind = "uninhabitable"


class ProofError(SoasError):
    """A proof script step that does not check."""

    kind = "proof-failure"

    def __init__(self, message, *, step=None, expected=None, found=None, **kw):
        super().__init__(message, **kw)
        self.step = step
        self.expected = expected
        self.found = found
