"""This module contains the :class:`DetectorParams` class."""
import math
from typing import Union, Dict, Any

from typeguard import typechecked

from scenemap.exceptions import InvalidParameterException

Number = Union[int, float]


class DetectorParams(object):
    """
    Parameters of the scene detectors.

    Not every detector uses every parameter. The content detector compares smoothed scores against
    `threshold` (on the 0-255 content scale), the adaptive detector compares neighborhood ratios
    against `threshold` (values near 1), and the regular split detector only uses `interval_sec`.
    Instances are immutable; use :meth:`replace` to derive modified copies.
    """

    #: The names of all parameters, in the order in which they are serialized.
    FIELDS = ('threshold', 'minlen_sec', 'smoothing_window', 'adaptive_window', 'interval_sec',
              'fallback_min_scenes', 'min_content_score')

    @typechecked
    def __init__(self, threshold: Number = 15.0, minlen_sec: Number = 12.0,
                 smoothing_window: int = 3, adaptive_window: int = 2,
                 interval_sec: Number = 30.0, fallback_min_scenes: int = 3,
                 min_content_score: Number = 3.0) -> None:
        """
        :param threshold: The score a boundary candidate must exceed.
        :param minlen_sec: The minimum distance, in seconds, between accepted boundaries, and
            between the start of the video and the first one.
        :param smoothing_window: The length of the moving average applied to raw content scores
            before the content detector looks for peaks. Must be odd.
        :param adaptive_window: The half-width, in frames, of the neighborhood used by the adaptive
            score.
        :param interval_sec: The scene length used by the regular split detector.
        :param fallback_min_scenes: The number of scenes below which the fallback detector
            discards the adaptive result and runs the content detector.
        :param min_content_score: The raw content score that adaptive boundary candidates must
            also exceed.

        All constructor parameters are accessible as properties.
        """
        if not threshold >= 0 or math.isinf(threshold):
            raise InvalidParameterException('Threshold must be non-negative; got %s' % threshold)
        if not minlen_sec >= 0 or math.isinf(minlen_sec):
            raise InvalidParameterException('Minimum scene length must be non-negative; got %s'
                                            % minlen_sec)
        if smoothing_window < 1 or smoothing_window % 2 == 0:
            raise InvalidParameterException('Smoothing window must be a positive odd number; '
                                            'got %s' % smoothing_window)
        if adaptive_window < 1:
            raise InvalidParameterException('Adaptive window must be at least 1; got %s'
                                            % adaptive_window)
        if not interval_sec > 0 or math.isinf(interval_sec):
            raise InvalidParameterException('Interval must be positive; got %s' % interval_sec)
        if fallback_min_scenes < 1:
            raise InvalidParameterException('Fallback scene count must be at least 1; got %s'
                                            % fallback_min_scenes)
        if not min_content_score >= 0:
            raise InvalidParameterException('Content score floor must be non-negative; got %s'
                                            % min_content_score)
        self._threshold = float(threshold)
        self._minlen_sec = float(minlen_sec)
        self._smoothing_window = smoothing_window
        self._adaptive_window = adaptive_window
        self._interval_sec = float(interval_sec)
        self._fallback_min_scenes = fallback_min_scenes
        self._min_content_score = float(min_content_score)

    @property
    def threshold(self) -> float:
        """The boundary threshold."""
        return self._threshold

    @property
    def minlen_sec(self) -> float:
        """The minimum distance between boundaries, in seconds."""
        return self._minlen_sec

    @property
    def smoothing_window(self) -> int:
        """The moving average length used by the content detector."""
        return self._smoothing_window

    @property
    def adaptive_window(self) -> int:
        """The neighborhood half-width used by the adaptive detector."""
        return self._adaptive_window

    @property
    def interval_sec(self) -> float:
        """The regular split interval, in seconds."""
        return self._interval_sec

    @property
    def fallback_min_scenes(self) -> int:
        """The scene count the adaptive pass of the fallback detector must reach."""
        return self._fallback_min_scenes

    @property
    def min_content_score(self) -> float:
        """The raw content score floor applied by the adaptive detector."""
        return self._min_content_score

    def minlen_frames(self, sampling_fps: float) -> int:
        """Returns :attr:`minlen_sec` converted to sampled frames, rounded half up."""
        return int(math.floor(self._minlen_sec * sampling_fps + 0.5))

    def replace(self, **kwargs: Any) -> 'DetectorParams':
        """
        Returns a copy of these parameters with some values replaced.

        Keyword arguments set to `None` are ignored.

        :raises InvalidParameterException: if an unknown parameter name is passed.
        """
        unknown = set(kwargs) - set(DetectorParams.FIELDS)
        if unknown:
            raise InvalidParameterException('Unknown detector parameters: %s'
                                            % ', '.join(sorted(unknown)))
        values = self.to_dict()
        values.update({k: v for k, v in kwargs.items() if v is not None})
        return DetectorParams(**values)

    def to_dict(self) -> Dict[str, Any]:
        """Returns all parameters as a dictionary."""
        return {name: getattr(self, name) for name in DetectorParams.FIELDS}

    @staticmethod
    def from_dict(d: Dict[str, Any]) -> 'DetectorParams':
        """
        Creates parameters from a dictionary; missing keys take their default values.

        :raises InvalidParameterException: if the dictionary contains unknown keys.
        """
        return DetectorParams().replace(**d)

    def __eq__(self, other: object) -> bool:
        """Compares two parameter sets for equality."""
        if not isinstance(other, DetectorParams):
            return False
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        """Returns a hash of these parameters."""
        return hash(tuple(self.to_dict().values()))

    def __repr__(self) -> str:
        """Returns a string representation of these parameters."""
        return 'DetectorParams(%s)' % ', '.join('%s=%s' % kv for kv in self.to_dict().items())
