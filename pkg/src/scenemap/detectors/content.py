"""The content detector, which cuts where smoothed content scores peak above a threshold."""
import logging
from typing import List, Optional

import numpy as np

from scenemap.detector import SceneDetector, Detection, find_peaks, filter_min_length
from scenemap.detector_params import DetectorParams
from scenemap.frame_spec import VideoMeta
from scenemap.scene import Scene, scenes_from_boundaries
from scenemap.score_series import ScoreSeries


logger = logging.getLogger(__name__)


def content_boundaries(series: ScoreSeries, params: DetectorParams) -> List[int]:
    """
    Returns the boundaries found by the content detector.

    Peaks are searched for in the smoothed scores. Smoothing spreads an isolated cut over the
    whole window, so each peak is moved to the largest raw score within half a window of it
    before the minimum length filter is applied.
    """
    smoothed = series.with_smoothing(params.smoothing_window)
    raw = smoothed.raw
    half = params.smoothing_window // 2
    n = len(raw)
    refined = set()
    for first, last in find_peaks(smoothed.smoothed, params.threshold):
        lo = max(0, first - half)
        hi = min(n - 1, last + half)
        refined.add(lo + int(np.argmax(raw[lo:hi + 1])))
    return filter_min_length(sorted(refined), params.minlen_frames(series.sampling_fps))


def detect_content(series: ScoreSeries, params: DetectorParams) -> List[Scene]:
    """
    Segments a video by thresholding its smoothed content scores.

    :param series: The content scores.
    :param params: The detector parameters; `threshold`, `minlen_sec` and `smoothing_window`
        are used.
    :return: Scenes tiling all sampled frames.
    """
    boundaries = content_boundaries(series, params)
    logger.debug('Content detector: %s boundaries at threshold %s', len(boundaries),
                 params.threshold)
    return scenes_from_boundaries(boundaries, series.frame_count, series.sampling_fps,
                                  series.duration_sec)


class ContentDetector(SceneDetector):
    """A :class:`~scenemap.detector.SceneDetector` wrapping :func:`detect_content`."""

    def detect(self, series: ScoreSeries, meta: VideoMeta, params: DetectorParams,
               content_params: Optional[DetectorParams] = None) -> Detection:
        """Runs :func:`detect_content` with `params`."""
        boundaries = content_boundaries(series, params)
        scenes = scenes_from_boundaries(boundaries, series.frame_count, series.sampling_fps,
                                        meta.duration_sec)
        return Detection(scenes, 'content', boundaries)
