"""Exception hierarchy shared by every module of the package."""


class QuivrepError(Exception):
    """Base class for all domain errors raised by quivrep."""


# exact linear algebra

class DimensionMismatch(QuivrepError):
    pass


class FieldMismatch(QuivrepError):
    pass


class EntryOverflowBudget(QuivrepError):
    """An exact rational computation exceeded the configured size guard."""


# quivers

class QuiverError(QuivrepError):
    pass


class DuplicateVertex(QuiverError):
    pass


class DuplicateArrow(QuiverError):
    pass


class DanglingEndpoint(QuiverError):
    pass


class EmptyQuiver(QuiverError):
    pass


class CyclicQuiver(QuiverError):
    pass


# representations and morphisms

class ShapeMismatch(QuivrepError):
    def __init__(self, where, expected, found):
        self.where = where
        self.expected = tuple(expected)
        self.found = tuple(found)
        super().__init__(
            f"shape mismatch at {where}: expected {self.expected[0]}x{self.expected[1]}, "
            f"found {self.found[0]}x{self.found[1]}"
        )


class NotCommuting(QuivrepError):
    """A commuting square fails at ``arrow``; ``lhs`` and ``rhs`` are both sides."""

    def __init__(self, arrow, lhs, rhs):
        self.arrow = arrow
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"square does not commute at arrow {arrow!r}: {lhs.to_strings()} != {rhs.to_strings()}")


class SourceTargetMismatch(QuivrepError):
    pass


class QuiverMismatch(QuivrepError):
    pass


class ZeroRepresentation(QuivrepError):
    pass


# n-representations

class LevelCountTooSmall(QuivrepError):
    pass


class LevelOutOfRange(QuivrepError):
    pass


class TupleMismatch(QuivrepError):
    pass


class MissingLink(QuivrepError):
    def __init__(self, level, prev_arrow, arrow):
        self.level = level
        self.prev_arrow = prev_arrow
        self.arrow = arrow
        super().__init__(f"missing link at level {level} for arrow pair ({prev_arrow!r}, {arrow!r})")


class NotCommutingLink(QuivrepError):
    def __init__(self, level, prev_arrow, arrow, lhs, rhs):
        self.level = level
        self.prev_arrow = prev_arrow
        self.arrow = arrow
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"link square does not commute at level {level}, arrow pair ({prev_arrow!r}, {arrow!r}): "
            f"{lhs.to_strings()} != {rhs.to_strings()}"
        )


# limits

class InvalidDiagram(QuivrepError):
    pass


# coalgebras

class CoalgebraError(QuivrepError):
    pass


class EndpointMismatch(CoalgebraError):
    pass


class NotCoassociative(CoalgebraError):
    def __init__(self, level, vertex):
        self.level = level
        self.vertex = vertex
        super().__init__(f"coassociativity fails at level {level}, vertex {vertex!r}")


class CounitLawFails(CoalgebraError):
    def __init__(self, side, level, vertex):
        self.side = side
        self.level = level
        self.vertex = vertex
        super().__init__(f"{side} counit law fails at level {level}, vertex {vertex!r}")


# front end

class DslError(QuivrepError):
    """Error tied to a location in an input file."""

    def __init__(self, message, file=None, line=None, col=None):
        self.message = message
        self.file = file
        self.line = line
        self.col = col
        loc = ":".join(str(x) for x in (file, line, col) if x is not None)
        super().__init__(f"{loc}: {message}" if loc else message)


class DslSyntaxError(DslError):
    pass


class UnresolvedReference(DslError):
    pass


class DuplicateName(DslError):
    pass


class UnknownCommand(QuivrepError):
    pass


class ArgumentError(QuivrepError):
    pass
