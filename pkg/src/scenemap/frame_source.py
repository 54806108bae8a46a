"""This module contains the :class:`FrameSource` base class and the :class:`FrameStream`."""
import logging
from abc import ABC, abstractmethod
from typing import Iterator, Optional, Sequence, Dict, Set

from scenemap.exceptions import TruncatedStreamException, CandidateFetchException
from scenemap.frame_spec import Frame, FrameSpec, VideoMeta


logger = logging.getLogger(__name__)


class FrameStream(Iterator[Frame]):
    """
    A single-consumer iterator over the sampled frames of a video.

    Frames are produced in strictly increasing index order. At most `expected` frames are
    produced. If the underlying source ends early, the stream simply stops and a
    :class:`~scenemap.exceptions.TruncatedStreamException` is recorded in :attr:`error`; frames
    that were already produced remain valid.
    """

    def __init__(self, frames: Iterator[Frame], expected: int, source: str) -> None:
        """
        :param frames: The raw frame iterator, typically a generator owned by a
            :class:`FrameSource`.
        :param expected: The number of frames the source should produce.
        :param source: A description of the source used in log and error messages.
        """
        self._frames = frames
        self.expected = expected
        self.source = source
        self.frames_read = 0
        self.error: Optional[TruncatedStreamException] = None
        self._done = False

    def __iter__(self) -> 'FrameStream':
        """Returns this stream."""
        return self

    def __next__(self) -> Frame:
        """Returns the next frame or raises `StopIteration` at the end of the stream."""
        if self._done:
            raise StopIteration()
        if self.frames_read >= self.expected:
            self._finish(None)
            raise StopIteration()
        try:
            frame = next(self._frames)
        except StopIteration:
            self._finish(None)
            raise
        except TruncatedStreamException as ex:
            self._finish(ex)
            raise StopIteration()
        self.frames_read += 1
        return frame

    def _finish(self, ex: Optional[TruncatedStreamException]) -> None:
        self._done = True
        close = getattr(self._frames, 'close', None)
        if close is not None:
            close()
        if self.frames_read < self.expected:
            if ex is None:
                ex = TruncatedStreamException('Stream from %s ended after %s of %s frames'
                                              % (self.source, self.frames_read, self.expected),
                                              self.expected, self.frames_read)
            self.error = ex
            logger.warning('%s', ex)

    def close(self) -> None:
        """Stops the stream and releases the resources used by the underlying source."""
        if not self._done:
            self._done = True
            close = getattr(self._frames, 'close', None)
            if close is not None:
                close()

    @property
    def truncated(self) -> bool:
        """Returns `True` if the stream ended before producing the expected number of frames."""
        return self.error is not None


class FrameSource(ABC):
    """
    An abstract base class for all sources of sampled frames.

    A source is probed once, with :meth:`probe`, after which :attr:`spec` holds the effective
    frame specification (which can differ from the requested one, for example if the source
    frame rate is lower than the requested sampling rate). Frames are then obtained either
    sequentially, through :meth:`frames`, or by index, through :meth:`fetch`.
    """

    def __init__(self, path: str, spec: FrameSpec) -> None:
        """
        :param path: A string identifying the source, typically a file system path.
        :param spec: The requested frame specification.
        """
        self.path = path
        self._requested_spec = spec
        self._spec: Optional[FrameSpec] = None
        self._meta: Optional[VideoMeta] = None

    @property
    def spec(self) -> FrameSpec:
        """Returns the effective frame specification. The source is probed if necessary."""
        if self._spec is None:
            self.probe()
        assert self._spec is not None
        return self._spec

    @property
    def meta(self) -> VideoMeta:
        """Returns the video metadata. The source is probed if necessary."""
        if self._meta is None:
            self.probe()
        assert self._meta is not None
        return self._meta

    @property
    def frame_count(self) -> int:
        """Returns the number of frames this source is expected to produce."""
        return self.spec.frame_count(self.meta.duration_sec)

    @property
    def random_access(self) -> bool:
        """
        Returns `True` if :meth:`fetch` can retrieve frames without decoding the entire video.

        The pipeline uses this to decide whether keyframe candidates are fetched per scene or
        collected in a single sequential pass.
        """
        return False

    def probe(self) -> VideoMeta:
        """
        Obtains the video metadata and computes the effective frame specification.

        :raises UnreadableSourceException: if the source cannot be probed.
        """
        if self._meta is None:
            self._meta = self._probe()
            self._spec = self._effective_spec(self._meta)
            logger.debug('Probed %s: %s, %s', self.path, self._meta, self._spec)
        return self._meta

    def _effective_spec(self, meta: VideoMeta) -> FrameSpec:
        return self._requested_spec.capped(meta.source_fps)

    @abstractmethod
    def _probe(self) -> VideoMeta:
        pass

    @abstractmethod
    def _generate(self) -> Iterator[Frame]:
        """Produces frames in index order; may stop early or raise a truncation exception."""
        pass

    def frames(self) -> FrameStream:
        """
        Opens a new stream over all the frames of this source.

        :raises UnreadableSourceException: if the source cannot be probed or decoding cannot
            be started.
        """
        self.probe()
        return FrameStream(self._generate(), self.frame_count, self.path)

    def iter_selected(self, indices: Sequence[int]) -> Iterator[Frame]:
        """
        Yields the frames with the given indices, in increasing index order.

        The default implementation decodes the source sequentially and stops after the largest
        requested index.
        """
        wanted: Set[int] = set(indices)
        if not wanted:
            return
        last = max(wanted)
        stream = self.frames()
        try:
            for frame in stream:
                if frame.index in wanted:
                    yield frame
                if frame.index >= last:
                    break
        finally:
            stream.close()

    def fetch(self, indices: Sequence[int]) -> Dict[int, Frame]:
        """
        Returns the frames with the given indices.

        :raises CandidateFetchException: if any of the requested frames cannot be obtained.
        """
        try:
            r = {frame.index: frame for frame in self.iter_selected(indices)}
        except CandidateFetchException:
            raise
        except Exception as ex:
            raise CandidateFetchException('Could not read frames from %s' % self.path,
                                          exception=ex)
        missing = [i for i in indices if i not in r]
        if missing:
            raise CandidateFetchException('Frames %s are not available from %s'
                                          % (missing, self.path))
        return r

    def close(self) -> None:
        """Releases any resources held by this source."""
        pass

    def __repr__(self) -> str:
        """Returns a string representation of this source."""
        return '%s[%s]' % (self.__class__.__name__, self.path)
