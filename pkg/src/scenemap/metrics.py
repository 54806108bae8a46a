"""
Perceptual frame metrics.

All functions in this module are pure and can be called concurrently.
"""
from typing import Sequence, List, Union, TYPE_CHECKING

import cv2
import numpy as np

from scenemap.exceptions import DimensionMismatchException, IndexOutOfRangeException, \
    EvenWindowException, EmptyInputException, InvalidParameterException
from scenemap.frame_spec import Frame

if TYPE_CHECKING:
    from scenemap.score_series import ScoreSeries

#: ITU-R BT.601 luma weights for R, G, and B.
BT601_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)

#: The value returned by :func:`adaptive_score` when a positive score has a zero neighborhood.
ADAPTIVE_SENTINEL = 1e6

Scores = Union[Sequence[float], np.ndarray]
SeriesLike = Union['ScoreSeries', Scores]


def brightness(frame: Frame) -> float:
    """
    Returns the mean lightness of a frame.

    The frame is converted to 8-bit CIE LAB, where L is scaled to [0, 255], and the L channel is
    averaged.
    """
    lab = cv2.cvtColor(frame.pixels, cv2.COLOR_RGB2LAB)
    return float(lab[:, :, 0].mean())


def grayscale(frame: Frame) -> np.ndarray:
    """Returns the BT.601 luma of a frame as a `float64` array."""
    return np.asarray(frame.pixels, dtype=np.float64) @ BT601_WEIGHTS


def sharpness(frame: Frame) -> float:
    """
    Returns the variance of the Laplacian of the grayscale frame.

    The Laplacian is the 3x3 kernel `[[0, 1, 0], [1, -4, 1], [0, 1, 0]]`, with replicated borders.
    """
    lap = cv2.Laplacian(grayscale(frame), cv2.CV_64F, ksize=1, borderType=cv2.BORDER_REPLICATE)
    return float(lap.var())


def hsv(frame: Frame) -> np.ndarray:
    """Returns the 8-bit HSV representation of a frame, with H scaled to [0, 255]."""
    return cv2.cvtColor(frame.pixels, cv2.COLOR_RGB2HSV_FULL)


def hsv_distance(a: np.ndarray, b: np.ndarray) -> float:
    """
    Returns the mean absolute difference of two HSV images, averaged over the three channels.

    Use this with :func:`hsv` when consecutive frames are compared, so that each frame is
    converted only once.
    """
    if a.shape != b.shape:
        raise DimensionMismatchException('Cannot compare frames of shapes %s and %s'
                                         % (a.shape, b.shape))
    return float(cv2.absdiff(a, b).mean())


def content_score(a: Frame, b: Frame) -> float:
    """
    Returns the visual dissimilarity of two frames, in [0, 255].

    :raises DimensionMismatchException: if the frames have different dimensions.
    """
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatchException('Cannot compare frames of shapes %s and %s'
                                         % (a.pixels.shape, b.pixels.shape))
    return hsv_distance(hsv(a), hsv(b))


def adaptive_score(series: SeriesLike, t: int, window: int = 2) -> float:
    """
    Returns the ratio of a score to the mean of its neighborhood.

    The neighborhood consists of the scores at `t - window` to `t + window`, excluding `t`, and
    clamped to the ends of the series. If the neighborhood mean is zero, the result is zero if the
    score itself is zero and :data:`ADAPTIVE_SENTINEL` otherwise.

    :param series: A :class:`~scenemap.score_series.ScoreSeries` (whose raw scores are used) or
        a sequence of scores.
    :param t: The index of the score.
    :param window: The half-width of the neighborhood. Must be at least 1.
    :raises IndexOutOfRangeException: if `t` is not a valid index.
    """
    raw = _raw(series)
    if window < 1:
        raise InvalidParameterException('Window must be at least 1; got %s' % window)
    if t < 0 or t >= len(raw):
        raise IndexOutOfRangeException('Index %s is outside of [0, %s)' % (t, len(raw)))
    return float(adaptive_scores(raw, window)[t])


def adaptive_scores(series: SeriesLike, window: int = 2) -> np.ndarray:
    """Returns :func:`adaptive_score` for every index of a series."""
    raw = _raw(series)
    if window < 1:
        raise InvalidParameterException('Window must be at least 1; got %s' % window)
    n = len(raw)
    total = np.zeros(n, dtype=np.float64)
    count = np.zeros(n, dtype=np.float64)
    for offset in range(1, min(window, n - 1) + 1):
        # left neighbors, then right neighbors
        total[offset:] += raw[:-offset]
        count[offset:] += 1
        total[:-offset] += raw[offset:]
        count[:-offset] += 1
    r = np.zeros(n, dtype=np.float64)
    positive = total > 0
    r[positive] = raw[positive] / (total[positive] / count[positive])
    r[~positive & (raw > 0)] = ADAPTIVE_SENTINEL
    return r


def smooth(raw: Scores, window: int = 1) -> np.ndarray:
    """
    Returns the centered moving average of a series of scores.

    Near the ends of the series the window shrinks to the available scores, so the result has
    the same length as the input. The result never leaves the range of the input.

    :raises EvenWindowException: if `window` is even.
    """
    if window < 1 or window % 2 == 0:
        raise EvenWindowException('The smoothing window must be a positive odd number; got %s'
                                  % window)
    values = np.asarray(raw, dtype=np.float64)
    n = len(values)
    if window == 1 or n == 0:
        return values.copy()
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(values)))
    idx = np.arange(n)
    lo = np.maximum(0, idx - half)
    hi = np.minimum(n, idx + half + 1)
    r = (csum[hi] - csum[lo]) / (hi - lo)
    return np.clip(r, values.min(), values.max())


def _zscore(values: np.ndarray) -> np.ndarray:
    # population std; values are left as they are when it is zero
    std = values.std()
    if std != 0:
        return (values - values.mean()) / std
    return values


def zscore(values: Scores) -> List[float]:
    """
    Standardizes a list of values using the population standard deviation.

    If the standard deviation is zero, the values are returned unchanged.

    :raises EmptyInputException: if `values` is empty.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInputException('Cannot normalize an empty list')
    return [float(v) for v in _zscore(arr)]


def _raw(series: SeriesLike) -> np.ndarray:
    raw = getattr(series, 'raw', series)
    return np.asarray(raw, dtype=np.float64)
