"""This module contains the :class:`Scene` class and helpers to build scene lists."""
from typing import Sequence, List, Dict, Any, Optional

from scenemap.exceptions import InvalidParameterException


class Scene(object):
    """
    A half-open interval of sampled frames.

    A scene spans the frames `start_frame` to `end_frame - 1`. The times are derived from the
    frame indices and the sampling rate, except for the end of the last scene of a video, which
    is clamped to the video duration.
    """

    def __init__(self, index: int, start_frame: int, end_frame: int, start_sec: float,
                 end_sec: float) -> None:
        """
        :param index: The position of this scene in its video, starting at zero.
        :param start_frame: The first sampled frame of the scene.
        :param end_frame: One past the last sampled frame of the scene.
        :param start_sec: The start time, in seconds.
        :param end_sec: The end time, in seconds.
        """
        if not 0 <= start_frame < end_frame:
            raise InvalidParameterException('Invalid scene frame range [%s, %s)'
                                            % (start_frame, end_frame))
        self.index = index
        self.start_frame = start_frame
        self.end_frame = end_frame
        self.start_sec = start_sec
        self.end_sec = end_sec

    @property
    def frame_count(self) -> int:
        """Returns the number of sampled frames in this scene."""
        return self.end_frame - self.start_frame

    @property
    def duration_sec(self) -> float:
        """Returns the duration of this scene, in seconds."""
        return self.end_sec - self.start_sec

    def contains(self, frame_index: int) -> bool:
        """Returns `True` if the given sampled frame belongs to this scene."""
        return self.start_frame <= frame_index < self.end_frame

    def to_dict(self) -> Dict[str, Any]:
        """Returns the fields of this scene as a dictionary, in a stable order."""
        return {'index': self.index, 'start_frame': self.start_frame,
                'end_frame': self.end_frame, 'start_sec': self.start_sec,
                'end_sec': self.end_sec}

    @staticmethod
    def from_dict(d: Dict[str, Any]) -> 'Scene':
        """Creates a scene from a dictionary produced by :meth:`to_dict`."""
        try:
            return Scene(int(d['index']), int(d['start_frame']), int(d['end_frame']),
                         float(d['start_sec']), float(d['end_sec']))
        except (KeyError, TypeError, ValueError) as ex:
            raise InvalidParameterException('Invalid scene: %s' % d, exception=ex)

    def __eq__(self, other: object) -> bool:
        """Returns `True` if `other` is a scene with the same fields."""
        if not isinstance(other, Scene):
            return NotImplemented
        return (self.index, self.start_frame, self.end_frame, self.start_sec, self.end_sec) == \
            (other.index, other.start_frame, other.end_frame, other.start_sec, other.end_sec)

    def __hash__(self) -> int:
        """Returns a hash of the frame range of this scene."""
        return hash((self.index, self.start_frame, self.end_frame))

    def __repr__(self) -> str:
        """Returns a string representation of this scene."""
        return 'Scene(%s, [%s, %s), %.3fs-%.3fs)' % (self.index, self.start_frame, self.end_frame,
                                                    self.start_sec, self.end_sec)


def scenes_from_starts(starts: Sequence[int], frame_count: int, sampling_fps: float,
                       duration_sec: Optional[float] = None) -> List[Scene]:
    """
    Builds a tiling of `[0, frame_count)` from the start frames of all scenes but the first.

    Start frames outside of `(0, frame_count)` and repeated start frames are ignored.

    :param starts: The sorted frames at which new scenes begin.
    :param frame_count: The number of sampled frames of the video.
    :param sampling_fps: The sampling rate, used to compute times.
    :param duration_sec: The video duration, to which the end of the last scene is clamped.
    """
    if frame_count < 1:
        raise InvalidParameterException('Frame count must be positive; got %s' % frame_count)
    edges = [0]
    for s in starts:
        if edges[-1] < s < frame_count:
            edges.append(s)
    edges.append(frame_count)
    scenes = []
    for i in range(len(edges) - 1):
        start, end = edges[i], edges[i + 1]
        scenes.append(Scene(i, start, end, start / sampling_fps, end / sampling_fps))
    if duration_sec is not None:
        last = scenes[-1]
        last.end_sec = max(last.start_sec, min(last.end_sec, duration_sec))
    return scenes


def scenes_from_boundaries(boundaries: Sequence[int], frame_count: int, sampling_fps: float,
                           duration_sec: Optional[float] = None) -> List[Scene]:
    """
    Builds a tiling of `[0, frame_count)` from boundary indices.

    A boundary `b` separates frames `b` and `b + 1`, so the scene following it starts at frame
    `b + 1`. See :func:`scenes_from_starts` for the other parameters.
    """
    return scenes_from_starts([b + 1 for b in boundaries], frame_count, sampling_fps,
                              duration_sec)


def internal_cuts(scenes: Sequence[Scene]) -> List[int]:
    """Returns the start frames of all scenes except the first."""
    return [s.start_frame for s in scenes[1:]]


def is_tiling(scenes: Sequence[Scene], frame_count: int) -> bool:
    """Returns `True` if `scenes` cover `[0, frame_count)` in order, without gaps or overlaps."""
    if not scenes or scenes[0].start_frame != 0 or scenes[-1].end_frame != frame_count:
        return False
    for i, s in enumerate(scenes):
        if s.index != i or s.start_frame >= s.end_frame:
            return False
        if i > 0 and scenes[i - 1].end_frame != s.start_frame:
            return False
    return True
