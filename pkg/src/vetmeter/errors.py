"""Exception hierarchy shared by all vetmeter modules."""


class VetmeterError(Exception):
    """Base class for every error raised by this package."""


class TraceParseError(VetmeterError, ValueError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class MalformedLine(TraceParseError):
    pass


class NegativeDuration(TraceParseError):
    def __init__(self, line_no, duration=None):
        detail = "negative duration" if duration is None else f"negative duration {duration}"
        super().__init__(line_no, detail)


class DuplicateKey(VetmeterError, ValueError):
    def __init__(self, key, line_no=None):
        self.key = key
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}duplicate (job, task, phase, seq) = {key}")


class ZeroUnitSize(VetmeterError, ValueError):
    pass


class EmptyTrace(VetmeterError, ValueError):
    pass


class EmptySegment(VetmeterError, ValueError):
    pass


class InvalidOmega(VetmeterError, ValueError):
    pass


class TraceTooShort(VetmeterError, ValueError):
    def __init__(self, n, omega):
        self.n = n
        self.omega = omega
        super().__init__(f"n={n} < 2*omega={2 * omega}")


class IndexOutOfRange(VetmeterError, IndexError):
    pass


class ZeroIdealCost(VetmeterError, ZeroDivisionError):
    pass


class NoValidTasks(VetmeterError, ValueError):
    pass


class NonPositiveDuration(VetmeterError, ValueError):
    pass


class KTooLarge(VetmeterError, ValueError):
    pass


class DegenerateTail(VetmeterError, ValueError):
    pass


class EmptySample(VetmeterError, ValueError):
    pass


class InvalidConfig(VetmeterError, ValueError):
    pass


class IoWriteFailure(VetmeterError, OSError):
    pass


def describe(exc):
    """Short ``Name(detail)`` string used for exclusion reasons in reports."""
    return f"{type(exc).__name__}({exc})"
