"""
The adaptive detector.

Each pairwise score is divided by the mean of its neighbors. Cuts stand out as ratios well above
one, regardless of how much motion the surrounding footage contains. In near-static footage the
ratios of tiny score fluctuations can be just as large, so candidates must also have a raw score
above `min_content_score`.
"""
import logging
from typing import List, Optional

from scenemap.detector import SceneDetector, Detection, find_candidates, filter_min_length
from scenemap.detector_params import DetectorParams
from scenemap.frame_spec import VideoMeta
from scenemap.metrics import adaptive_scores
from scenemap.scene import Scene, scenes_from_boundaries
from scenemap.score_series import ScoreSeries


logger = logging.getLogger(__name__)


def adaptive_boundaries(series: ScoreSeries, params: DetectorParams) -> List[int]:
    """Returns the boundaries found by the adaptive detector."""
    raw = series.raw
    ratios = adaptive_scores(raw, params.adaptive_window)
    candidates = [t for t in find_candidates(ratios, params.threshold)
                  if raw[t] > params.min_content_score]
    return filter_min_length(candidates, params.minlen_frames(series.sampling_fps))


def detect_adaptive(series: ScoreSeries, params: DetectorParams) -> List[Scene]:
    """
    Segments a video by thresholding the ratio of each score to its neighborhood mean.

    :param series: The content scores.
    :param params: The detector parameters; `threshold`, `minlen_sec`, `adaptive_window` and
        `min_content_score` are used.
    :return: Scenes tiling all sampled frames.
    """
    boundaries = adaptive_boundaries(series, params)
    logger.debug('Adaptive detector: %s boundaries at threshold %s', len(boundaries),
                 params.threshold)
    return scenes_from_boundaries(boundaries, series.frame_count, series.sampling_fps,
                                  series.duration_sec)


class AdaptiveDetector(SceneDetector):
    """A :class:`~scenemap.detector.SceneDetector` wrapping :func:`detect_adaptive`."""

    def detect(self, series: ScoreSeries, meta: VideoMeta, params: DetectorParams,
               content_params: Optional[DetectorParams] = None) -> Detection:
        """Runs :func:`detect_adaptive` with `params`."""
        boundaries = adaptive_boundaries(series, params)
        scenes = scenes_from_boundaries(boundaries, series.frame_count, series.sampling_fps,
                                        meta.duration_sec)
        return Detection(scenes, 'adaptive', boundaries)
