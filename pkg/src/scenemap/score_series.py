"""This module contains the :class:`ScoreSeries` class."""
from typing import Optional, Sequence, Union

import numpy as np

from scenemap.exceptions import InvalidParameterException
from scenemap.metrics import smooth


class ScoreSeries(object):
    """
    A sequence of change scores for consecutive pairs of sampled frames.

    Score `i` compares frames `i` and `i + 1`, so a video with `n` sampled frames has a series of
    length `n - 1`. A series is immutable once created.
    """

    def __init__(self, raw: Union[Sequence[float], np.ndarray], sampling_fps: float,
                 smoothing_window: int = 1, duration_sec: Optional[float] = None) -> None:
        """
        :param raw: The raw pairwise scores. All scores must be non-negative.
        :param sampling_fps: The sampling rate of the frames the scores were computed from.
        :param smoothing_window: The length of the centered moving average used to compute
            :attr:`smoothed`. Must be odd.
        :param duration_sec: The duration of the video, if known. It is used to clamp the end of
            the last scene.
        """
        values = np.array(raw, dtype=np.float64)
        if values.ndim != 1:
            raise InvalidParameterException('Scores must be one-dimensional')
        if values.size > 0 and (not np.all(np.isfinite(values)) or values.min() < 0):
            raise InvalidParameterException('Scores must be finite and non-negative')
        if not sampling_fps > 0:
            raise InvalidParameterException('Sampling rate must be positive; got %s'
                                            % sampling_fps)
        values.setflags(write=False)
        self._raw = values
        self._smoothing_window = smoothing_window
        self._smoothed = smooth(values, smoothing_window)
        self._smoothed.setflags(write=False)
        self._sampling_fps = float(sampling_fps)
        self._duration_sec = duration_sec

    @property
    def raw(self) -> np.ndarray:
        """The raw scores (a read-only array)."""
        return self._raw

    @property
    def smoothed(self) -> np.ndarray:
        """The smoothed scores, of the same length as :attr:`raw`."""
        return self._smoothed

    @property
    def sampling_fps(self) -> float:
        """The sampling rate of the scored frames."""
        return self._sampling_fps

    @property
    def smoothing_window(self) -> int:
        """The smoothing window used to compute :attr:`smoothed`."""
        return self._smoothing_window

    @property
    def duration_sec(self) -> float:
        """The video duration, or `frame_count / sampling_fps` if it was not specified."""
        if self._duration_sec is None:
            return self.frame_count / self._sampling_fps
        return self._duration_sec

    @property
    def frame_count(self) -> int:
        """The number of sampled frames, which is one more than the number of scores."""
        return len(self._raw) + 1

    def with_smoothing(self, window: int) -> 'ScoreSeries':
        """Returns a series with the same raw scores and a different smoothing window."""
        if window == self._smoothing_window:
            return self
        return ScoreSeries(self._raw, self._sampling_fps, window, self._duration_sec)

    def __len__(self) -> int:
        """Returns the number of scores."""
        return len(self._raw)

    def __repr__(self) -> str:
        """Returns a string representation of this series."""
        return 'ScoreSeries(n=%s, fps=%s, window=%s)' % (len(self._raw), self._sampling_fps,
                                                         self._smoothing_window)
