"""Exception types shared across the pipelines."""


class SepspaceError(Exception):
    """Base class for all library errors."""


class UnknownVertex(SepspaceError, KeyError):
    def __str__(self):
        if self.args and isinstance(self.args[0], str):
            return self.args[0]
        return f"unknown vertex {self.args[0]}" if self.args else "unknown vertex"


class InvalidGraph(SepspaceError, ValueError):
    pass


class MeterUnderflow(SepspaceError):
    """A release exceeded the outstanding charge for its label."""


class DartNotFound(SepspaceError, KeyError):
    pass


class DisconnectedInput(SepspaceError, ValueError):
    pass


class NotChordal(SepspaceError, ValueError):
    def __init__(self, witness):
        super().__init__(f"graph is not chordal; chordless cycle {list(witness)}")
        self.witness = tuple(witness)


class AssumptionViolated(SepspaceError, ValueError):
    pass


class GeneralPositionViolation(SepspaceError, ValueError):
    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class NoLineFound(SepspaceError, RuntimeError):
    pass


class PlacementConflict(SepspaceError, RuntimeError):
    pass


class UnknownDisk(SepspaceError, KeyError):
    def __str__(self):
        if self.args and isinstance(self.args[0], str):
            return self.args[0]
        return f"unknown disk {self.args[0]}" if self.args else "unknown disk"


class OracleUnsound(SepspaceError, AssertionError):
    pass


class ResampleExhausted(SepspaceError, RuntimeError):
    pass


class FormatError(SepspaceError, ValueError):
    pass

