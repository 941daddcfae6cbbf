"""Exception hierarchy shared by all palkit modules."""


class PalError(Exception):
    """Base class for every error raised by palkit."""


class ParseError(PalError):
    """Formula text does not match the grammar.

    ``offset`` is the 1-based byte offset of the offending token and
    ``expected`` the set of token descriptions that would have been accepted.
    """

    def __init__(self, text, offset, expected, found):
        self.text = text
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        want = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at offset {offset}: found {found}, expected one of: {want}")


class ModelError(PalError):
    """A model document violates the file schema.

    ``path`` points at the offending field, e.g. ``agents.a.partition[1]``.
    """

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class EmptyDomain(PalError):
    """Attempted to build a model with no worlds."""


class UnknownAgent(PalError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(name)

    def __str__(self):
        return f"unknown agent {self.name!r}"


class UnknownWorld(PalError, KeyError):
    def __init__(self, label):
        self.label = label
        super().__init__(label)

    def __str__(self):
        return f"unknown world {self.label!r}"


class UnboundSchematic(PalError):
    """A schematic variable has no denotation in the environment."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"schematic variable ?{name} is not bound")


class CapExceeded(PalError):
    """The projected search size exceeds the configured cap."""

    def __init__(self, projected, cap, what="models"):
        self.projected = projected
        self.cap = cap
        super().__init__(f"projected {projected} {what} exceeds cap {cap}")
