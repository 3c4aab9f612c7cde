"""Exception hierarchy shared across the engine."""


class CelloEvalError(Exception):
    """Base class for all engine errors."""


# --- stream parsing ---

class MalformedRecord(CelloEvalError):
    pass


class OutOfRange(MalformedRecord):
    pass


class NonMonotonicTimestamp(CelloEvalError):
    pass


# --- features ---

class DegenerateHand(CelloEvalError):
    pass


class DegeneratePose(CelloEvalError):
    pass


# --- geometry ---

class NotIntersecting(CelloEvalError):
    pass


class ParallelAxes(CelloEvalError):
    """Bow and string axes too close to parallel for a crossing point."""


# --- neural net ---

class ShapeMismatch(CelloEvalError):
    pass


class InsufficientData(CelloEvalError):
    pass


class VersionMismatch(CelloEvalError):
    pass


class CorruptFile(CelloEvalError):
    pass


class ModelShapeMismatch(CelloEvalError):
    pass


# --- feedback / session ---

class NonMonotonicTime(CelloEvalError):
    pass


class EmptySession(CelloEvalError):
    pass


class StoreUnavailable(CelloEvalError):
    pass


class UnknownSession(CelloEvalError):
    pass


class BadConfig(CelloEvalError):
    pass
