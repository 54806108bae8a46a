"""
The :class:`SceneDetector` base class and the boundary selection shared by the detectors.

Boundary selection works in two steps. First, :func:`find_candidates` picks the indices of a
score array that exceed a threshold and are strict local maxima, where a run of equal scores
counts as a single maximum located at its leftmost index. Then, :func:`filter_min_length`
accepts candidates from left to right, dropping any that is closer than the minimum scene
length to the previously accepted one, or to the start of the video.
"""
import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union, Callable, cast

import numpy as np
from packaging.version import Version

from scenemap._plugins import _register_plugin, _get_plugin_class
from scenemap.descriptor import Descriptor, _VersionEntry
from scenemap.detector_params import DetectorParams
from scenemap.exceptions import InvalidParameterException
from scenemap.frame_spec import VideoMeta
from scenemap.metrics import adaptive_scores
from scenemap.scene import Scene
from scenemap.score_series import ScoreSeries


logger = logging.getLogger(__name__)

ScoreFunction = Callable[[ScoreSeries, DetectorParams], np.ndarray]


def _content_series(series: ScoreSeries, params: DetectorParams) -> np.ndarray:
    return series.with_smoothing(params.smoothing_window).smoothed


def _adaptive_series(series: ScoreSeries, params: DetectorParams) -> np.ndarray:
    return adaptive_scores(series, params.adaptive_window)


#: The score functions that can be passed by name to :func:`detect_boundaries`.
SCORE_FUNCTIONS: Dict[str, ScoreFunction] = {
    'content': _content_series,
    'adaptive': _adaptive_series,
}


#: The relative difference below which :func:`find_peaks` treats two scores as equal. For scores
#: smaller than 1 in magnitude it is an absolute difference.
PLATEAU_TOLERANCE = 1e-9


def _same(a: float, b: float) -> bool:
    if not (np.isfinite(a) and np.isfinite(b)):
        return bool(a == b)
    return bool(abs(a - b) <= PLATEAU_TOLERANCE * max(1.0, abs(a), abs(b)))


def find_peaks(scores: Union[Sequence[float], np.ndarray],
               threshold: float) -> List[Tuple[int, int]]:
    """
    Returns the extents of the local maxima of a score array that exceed a threshold.

    Each maximum is returned as a `(first, last)` pair of indices of a run of equal scores whose
    neighbors on both sides (if any) are strictly lower. A run spanning the whole array is not a
    maximum. Scores that differ by less than :data:`PLATEAU_TOLERANCE` count as equal, so that runs
    produced by floating point smoothing are recognized; any larger difference is significant.
    """
    s = np.asarray(scores, dtype=np.float64)
    n = len(s)
    peaks = []
    above = np.flatnonzero(s > threshold)
    skip_to = -1
    for t in above:
        if t <= skip_to:
            continue
        v = s[t]
        if t > 0 and (s[t - 1] >= v or _same(s[t - 1], v)):
            continue
        end = t
        while end + 1 < n and _same(s[end + 1], v):
            end += 1
        skip_to = end
        if t == 0 and end + 1 == n:
            # a constant array has no maximum
            break
        if end + 1 == n or s[end + 1] < v:
            peaks.append((int(t), int(end)))
    return peaks


def find_candidates(scores: Union[Sequence[float], np.ndarray], threshold: float) -> List[int]:
    """
    Returns the boundary candidates of a score array.

    A candidate is an index whose score is greater than `threshold` and is a strict local maximum
    over its immediate neighbors. Runs of equal scores resolve to their leftmost index.
    """
    return [first for first, _ in find_peaks(scores, threshold)]


def filter_min_length(candidates: Sequence[int], minlen_frames: int) -> List[int]:
    """
    Greedily accepts sorted candidates from left to right.

    A candidate is accepted if it is at least `minlen_frames` after the previously accepted one,
    where the start of the video, frame 0, counts as the first accepted boundary. No scene
    other than the last is therefore shorter than `minlen_frames`. This keeps the largest
    possible number of candidates, so the result can only shrink as `minlen_frames` grows.
    """
    accepted: List[int] = []
    prev = 0
    for t in candidates:
        if t - prev >= minlen_frames:
            accepted.append(t)
            prev = t
    return accepted


def detect_boundaries(series: ScoreSeries, score_fn: Union[str, ScoreFunction, np.ndarray],
                      params: DetectorParams) -> List[int]:
    """
    Finds the boundaries of a score series.

    :param series: The score series.
    :param score_fn: The scores to look for peaks in. This is either the name of a score function
        (`"content"` for the smoothed content scores or `"adaptive"` for the adaptive ratios), a
        callable mapping the series and parameters to a score array, or an array of the same
        length as the series.
    :param params: The detector parameters, of which `threshold` and `minlen_sec` are used here.
    :return: The accepted boundary indices. Boundary `b` separates frames `b` and `b + 1`.
    """
    scores = _resolve_scores(series, score_fn, params)
    candidates = find_candidates(scores, params.threshold)
    return filter_min_length(candidates, params.minlen_frames(series.sampling_fps))


def _resolve_scores(series: ScoreSeries, score_fn: Union[str, ScoreFunction, np.ndarray],
                    params: DetectorParams) -> np.ndarray:
    if isinstance(score_fn, str):
        try:
            score_fn = SCORE_FUNCTIONS[score_fn]
        except KeyError:
            raise InvalidParameterException('Unknown score function "%s"; expected one of %s'
                                            % (score_fn, ', '.join(SCORE_FUNCTIONS)))
    if callable(score_fn):
        scores = np.asarray(score_fn(series, params), dtype=np.float64)
    else:
        scores = np.asarray(score_fn, dtype=np.float64)
    if len(scores) != len(series):
        raise InvalidParameterException('Expected %s scores; got %s' % (len(series), len(scores)))
    return scores


class Detection(object):
    """The outcome of running a detector on one video."""

    def __init__(self, scenes: List[Scene], used_strategy: str,
                 boundaries: Optional[List[int]] = None) -> None:
        """
        :param scenes: The scenes, tiling all sampled frames.
        :param used_strategy: The strategy that produced the scenes. This is the detector name,
            except for the fallback detector, which reports `"fallback:adaptive"` or
            `"fallback:content"`.
        :param boundaries: The accepted boundary indices, if the detector works with boundaries.
        """
        self.scenes = scenes
        self.used_strategy = used_strategy
        self.boundaries = boundaries if boundaries is not None else \
            [s.start_frame - 1 for s in scenes[1:]]

    @property
    def fallback_triggered(self) -> bool:
        """Returns `True` if a fallback detector had to run its second pass."""
        return self.used_strategy == 'fallback:content'

    def __repr__(self) -> str:
        """Returns a string representation of this detection."""
        return 'Detection(%s, %s scenes)' % (self.used_strategy, len(self.scenes))


class SceneDetector(ABC):
    """
    An abstract base class for scene detectors.

    Detectors are registered through :class:`~scenemap.descriptor.Descriptor` instances and
    obtained by name using :meth:`get_instance`.
    """

    _detectors: Dict[str, List[_VersionEntry['SceneDetector']]] = {}

    @property
    def name(self) -> str:
        """Returns the name under which this detector was obtained."""
        return cast(str, getattr(self.__class__, '_NAME_', self.__class__.__name__))

    @property
    def version(self) -> Version:
        """Returns the version of this detector."""
        return cast(Version, getattr(self.__class__, '_VERSION_', Version('0.0.0')))

    @abstractmethod
    def detect(self, series: ScoreSeries, meta: VideoMeta, params: DetectorParams,
               content_params: Optional[DetectorParams] = None) -> Detection:
        """
        Segments a video.

        :param series: The pairwise content scores of the sampled frames.
        :param meta: The video metadata.
        :param params: The detector parameters.
        :param content_params: Parameters of a second, content-based pass, used by detectors
            that combine strategies.
        :return: The scenes, which tile `[0, series.frame_count)`.
        """
        pass

    def __repr__(self) -> str:
        """Returns a string representation of this detector."""
        return 'SceneDetector[%s, %s]' % (self.name, self.version)

    @staticmethod
    def get_instance(name: str, version_constraint: Optional[str] = None) -> 'SceneDetector':
        """
        Returns an instance of a registered detector.

        :param name: The detector name or alias, as listed by :meth:`list_detectors`.
        :param version_constraint: An optional version constraint such as `">= 0.1, != 0.2"`.
        :raises InvalidParameterException: if no matching detector is registered.
        """
        selected = _get_plugin_class(name, version_constraint, 'detector',
                                     SceneDetector._detectors)
        assert selected.cls is not None
        assert issubclass(selected.cls, SceneDetector)
        setattr(selected.cls, '_NAME_', selected.desc.name)
        setattr(selected.cls, '_VERSION_', selected.version)
        return selected.cls()

    @staticmethod
    def register_detector(desc: Descriptor) -> None:
        """
        Registers a detector class through a :class:`~scenemap.descriptor.Descriptor`.

        The class can then be instantiated using :meth:`get_instance`.
        """
        _register_plugin(desc, 'detector', SceneDetector._detectors)

    @staticmethod
    def list_detectors() -> Set[str]:
        """Returns the names and aliases of all registered detectors."""
        return set(SceneDetector._detectors.keys())

    @staticmethod
    def canonical_name(name: str) -> str:
        """
        Returns the registered name of a detector given its name or one of its aliases.

        :raises InvalidParameterException: if no such detector is registered.
        """
        return _get_plugin_class(name, None, 'detector', SceneDetector._detectors).desc.name
