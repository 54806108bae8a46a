"""A collection of exceptions used by scenemap."""
from typing import Optional


class SceneMapException(Exception):
    """The base class for all exceptions raised by scenemap."""

    def __init__(self, message: str, exception: Optional[Exception] = None) -> None:
        """
        :param message: see the :attr:`message` property
        :param exception: see the :attr:`exception` property
        """
        super().__init__(message)
        self.message = message
        """
        Retrieves the message associated with this exception. This is a descriptive message that is
        sufficiently clear to be presented to an end-user.
        """
        self.exception = exception
        """
        Returns an optional underlying exception that can potentially be used for debugging
        purposes, but which should not, in general, be presented to an end-user.
        """

    def __str__(self) -> str:
        """Returns the message, followed by the underlying exception, if any."""
        if self.exception is None:
            return self.message
        else:
            return '%s (%s)' % (self.message, self.exception)


class UnreadableSourceException(SceneMapException):
    """
    An exception signalling that a video source cannot be probed or decoded.

    This is fatal for the video in question. In batch mode, it is recorded against the video and
    processing continues with the remaining videos.
    """

    def __init__(self, message: str, exception: Optional[Exception] = None,
                 transient: bool = False) -> None:
        """
        :param message: see :attr:`message`
        :param exception: see :attr:`exception`
        :param transient: see :attr:`transient`
        """
        super().__init__(message, exception)
        self.transient = transient
        """
        Returns `True` if the condition that triggered this exception may not persist. A decoder
        that was killed by a signal is a transient failure, whereas a file that does not exist or
        that the decoder cannot parse is not.
        """


class TruncatedStreamException(SceneMapException):
    """
    Describes a frame stream that ended before the expected number of frames was read.

    This exception is not raised by frame streams. It is recorded on the stream (see
    :attr:`~scenemap.frame_source.FrameStream.error`) and frames already yielded remain valid.
    """

    def __init__(self, message: str, expected: int, received: int,
                 exception: Optional[Exception] = None) -> None:
        """
        :param message: see :attr:`message`
        :param expected: the number of frames the stream was expected to produce
        :param received: the number of frames actually produced
        :param exception: see :attr:`exception`
        """
        super().__init__(message, exception)
        self.expected = expected
        self.received = received


class InvalidParameterException(SceneMapException, ValueError):
    """Thrown when a value passed to scenemap is outside of its allowed domain."""

    pass


class DimensionMismatchException(InvalidParameterException):
    """Thrown when two frames that must be compared have different dimensions."""

    pass


class IndexOutOfRangeException(InvalidParameterException, IndexError):
    """Thrown when a score index lies outside of a score series."""

    pass


class EvenWindowException(InvalidParameterException):
    """Thrown when a centered smoothing window has an even length."""

    pass


class EmptyInputException(InvalidParameterException):
    """Thrown when an operation that requires at least one value receives none."""

    pass


class LengthMismatchException(InvalidParameterException):
    """Thrown when paired score arrays have different lengths."""

    pass


class PolicyConfigException(SceneMapException):
    """A base class for problems found in a policy table or policy file."""

    pass


class PolicyParseException(PolicyConfigException):
    """Thrown when a policy file cannot be parsed or contains unknown keys or values."""

    pass


class NonMonotoneDurationsException(PolicyConfigException):
    """Thrown when the duration bounds of a policy table are not strictly increasing."""

    pass


class MissingUnboundedRowException(PolicyConfigException):
    """Thrown when the last row of a policy table has a finite duration bound."""

    pass


class CandidateFetchException(SceneMapException):
    """
    Thrown when pixel data for keyframe candidates cannot be obtained.

    The pipeline catches this exception per scene; the scene is then reported without a keyframe.
    """

    pass


class OutputException(SceneMapException):
    """Thrown when metadata, thumbnails, or reports cannot be written."""

    pass
