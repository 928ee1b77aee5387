"""Exception types raised across the package."""


class SupportPoseError(Exception):
    """Base class for all package errors."""


class TaxonomyParseError(SupportPoseError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TaxonomyValidationError(SupportPoseError, ValueError):
    """Raised when a loaded taxonomy violates one or more invariants.

    ``report`` carries the full ValidationReport so callers can list every
    violation, not just the first one.
    """

    def __init__(self, report):
        self.report = report
        lines = [str(v) for v in report.violations]
        super().__init__(
            f"{len(lines)} taxonomy violation(s):\n  " + "\n  ".join(lines)
        )


class UnknownId(SupportPoseError, KeyError):
    def __str__(self):
        return f"unknown class id {self.args[0]!r}"


class UnknownPose(SupportPoseError, LookupError):
    pass


class NoPath(SupportPoseError, LookupError):
    pass


class MotionFormatError(SupportPoseError, ValueError):
    pass


class LengthMismatchError(MotionFormatError):
    pass


class NonFiniteError(MotionFormatError):
    pass


class SceneError(SupportPoseError, ValueError):
    pass


class CountMismatchError(SupportPoseError, ValueError):
    pass


class TooShortError(SupportPoseError, ValueError):
    pass


class InvalidCutoffError(SupportPoseError, ValueError):
    pass


class UnknownSegmentError(SupportPoseError, KeyError):
    def __str__(self):
        return f"unknown body segment {self.args[0]!r}"


class EmptyReportError(SupportPoseError, ValueError):
    pass


class ReportFormatError(SupportPoseError, ValueError):
    pass


class ShortMotionError(MotionFormatError, TooShortError):
    """A motion with fewer frames than any processing stage accepts."""
