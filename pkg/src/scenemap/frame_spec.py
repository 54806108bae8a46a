"""Frame geometry, sampled frames, and video metadata."""
import math
from typing import Optional, Union, Dict, Tuple

import numpy as np
from typeguard import typechecked

from scenemap.exceptions import InvalidParameterException

#: The smallest allowed frame width or height.
MIN_DIMENSION = 16

# tolerance used when converting durations to frame counts, so that 60.000000001 s at
# 2 fps gives 120 frames rather than 121
_COUNT_EPSILON = 1e-6


class FrameSpec(object):
    """
    Describes the frames a video is reduced to before scoring.

    Frames are interleaved 8-bit RGB, `width` x `height` pixels, sampled uniformly at
    `sampling_fps` frames per second.
    """

    @typechecked
    def __init__(self, width: int = 256, height: int = 144,
                 sampling_fps: Union[int, float] = 2) -> None:
        """
        :param width: The width, in pixels, that frames are resized to. Must be at least 16.
        :param height: The height, in pixels, that frames are resized to. Must be at least 16.
        :param sampling_fps: The rate at which frames are sampled from the source. When the
            source frame rate is known and lower than this value, use :meth:`capped` to obtain
            the effective specification.

        All constructor parameters are accessible as properties.
        """
        if width < MIN_DIMENSION or height < MIN_DIMENSION:
            raise InvalidParameterException('Frame dimensions must be at least %sx%s; got %sx%s'
                                            % (MIN_DIMENSION, MIN_DIMENSION, width, height))
        if not sampling_fps > 0 or math.isinf(sampling_fps):
            raise InvalidParameterException('Invalid sampling rate: %s' % sampling_fps)
        self._width = width
        self._height = height
        self._sampling_fps = float(sampling_fps)

    @property
    def width(self) -> int:
        """The frame width, in pixels."""
        return self._width

    @property
    def height(self) -> int:
        """The frame height, in pixels."""
        return self._height

    @property
    def sampling_fps(self) -> float:
        """The number of frames sampled per second of video."""
        return self._sampling_fps

    @property
    def frame_size(self) -> int:
        """The size, in bytes, of one frame."""
        return self._width * self._height * 3

    @property
    def shape(self) -> Tuple[int, int, int]:
        """The shape of the pixel array of a frame (rows, columns, channels)."""
        return (self._height, self._width, 3)

    def frame_count(self, duration_sec: float) -> int:
        """
        Returns the number of frames sampled from a video of a given duration.

        This is `ceil(duration_sec * sampling_fps)`, but never less than one.
        """
        return max(1, math.ceil(duration_sec * self._sampling_fps - _COUNT_EPSILON))

    def time_of(self, index: int) -> float:
        """Returns the timestamp, in seconds, of the sampled frame with the given index."""
        return index / self._sampling_fps

    def capped(self, source_fps: Optional[float]) -> 'FrameSpec':
        """
        Returns a specification whose sampling rate does not exceed `source_fps`.

        If `source_fps` is unknown or not lower than the sampling rate, this specification is
        returned unchanged.
        """
        if source_fps is None or source_fps <= 0 or source_fps >= self._sampling_fps:
            return self
        return FrameSpec(self._width, self._height, source_fps)

    def with_size(self, width: int, height: int) -> 'FrameSpec':
        """Returns a copy of this specification with different frame dimensions."""
        return FrameSpec(width, height, self._sampling_fps)

    def to_dict(self) -> Dict[str, object]:
        """Returns a dictionary representation of this specification."""
        return {'width': self._width, 'height': self._height, 'sampling_fps': self._sampling_fps}

    def __eq__(self, other: object) -> bool:
        """Compares two specifications for equality."""
        if not isinstance(other, FrameSpec):
            return False
        return (self._width, self._height, self._sampling_fps) == \
            (other._width, other._height, other._sampling_fps)

    def __hash__(self) -> int:
        """Returns a hash of this specification."""
        return hash((self._width, self._height, self._sampling_fps))

    def __repr__(self) -> str:
        """Returns a string representation of this specification."""
        return 'FrameSpec(%sx%s @ %s fps)' % (self._width, self._height, self._sampling_fps)


class Frame(object):
    """A single sampled frame together with its position in the video."""

    def __init__(self, index: int, time_sec: float, pixels: np.ndarray) -> None:
        """
        :param index: The ordinal of this frame among the sampled frames, starting at 0.
        :param time_sec: The time, in seconds from the start of the video, of this frame.
        :param pixels: A `(height, width, 3)` array of `uint8` RGB values.
        """
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.dtype != np.uint8:
            raise InvalidParameterException('Expected an HxWx3 uint8 array; got %s %s'
                                            % (pixels.dtype, pixels.shape))
        self.index = index
        self.time_sec = time_sec
        self.pixels = pixels

    @property
    def width(self) -> int:
        """The width of this frame, in pixels."""
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        """The height of this frame, in pixels."""
        return int(self.pixels.shape[0])

    def __repr__(self) -> str:
        """Returns a string representation of this frame."""
        return 'Frame[%s, t=%.3f, %sx%s]' % (self.index, self.time_sec, self.width, self.height)


class VideoMeta(object):
    """Properties of a video obtained before frames are streamed."""

    def __init__(self, duration_sec: float, source_path: str,
                 source_fps: Optional[float] = None) -> None:
        """
        :param duration_sec: The total duration of the video, in seconds.
        :param source_path: An opaque string identifying the video.
        :param source_fps: The native frame rate of the video, if known.
        """
        if not duration_sec > 0:
            raise InvalidParameterException('Video duration must be positive; got %s'
                                            % duration_sec)
        self.duration_sec = float(duration_sec)
        self.source_path = source_path
        self.source_fps = source_fps

    def __eq__(self, other: object) -> bool:
        """Compares two metadata instances for equality."""
        if not isinstance(other, VideoMeta):
            return False
        return (self.duration_sec, self.source_path, self.source_fps) == \
            (other.duration_sec, other.source_path, other.source_fps)

    def __repr__(self) -> str:
        """Returns a string representation of this metadata."""
        return 'VideoMeta[%s, duration=%ss, fps=%s]' % (self.source_path, self.duration_sec,
                                                        self.source_fps)
