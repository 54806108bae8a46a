"""The fallback detector, which runs the content detector when the adaptive one finds too little."""
import logging
from typing import List, Optional, Tuple

from scenemap.detector import SceneDetector, Detection
from scenemap.detector_params import DetectorParams
from scenemap.detectors.adaptive import detect_adaptive
from scenemap.detectors.content import detect_content
from scenemap.frame_spec import VideoMeta
from scenemap.scene import Scene
from scenemap.score_series import ScoreSeries


logger = logging.getLogger(__name__)

#: The tag reported when the adaptive pass was kept.
ADAPTIVE_TAG = 'fallback:adaptive'

#: The tag reported when the content pass replaced the adaptive one.
CONTENT_TAG = 'fallback:content'


def detect_fallback(series: ScoreSeries, adaptive_params: DetectorParams,
                    content_params: DetectorParams) -> Tuple[List[Scene], str]:
    """
    Runs the adaptive detector and, if it finds too few scenes, the content detector.

    The adaptive result is kept if it has at least `adaptive_params.fallback_min_scenes` scenes.
    Otherwise, the content result is returned, however many scenes it has.

    :return: The scenes and either `"fallback:adaptive"` or `"fallback:content"`.
    """
    scenes = detect_adaptive(series, adaptive_params)
    if len(scenes) >= adaptive_params.fallback_min_scenes:
        return scenes, ADAPTIVE_TAG
    logger.warning('Adaptive pass found %s scene(s), fewer than %s; running content pass',
                   len(scenes), adaptive_params.fallback_min_scenes)
    return detect_content(series, content_params), CONTENT_TAG


class FallbackDetector(SceneDetector):
    """A :class:`~scenemap.detector.SceneDetector` wrapping :func:`detect_fallback`."""

    def detect(self, series: ScoreSeries, meta: VideoMeta, params: DetectorParams,
               content_params: Optional[DetectorParams] = None) -> Detection:
        """
        Runs :func:`detect_fallback`.

        :param params: The parameters of the adaptive pass.
        :param content_params: The parameters of the content pass. If not specified, `params` is
            used with the default content threshold.
        """
        if content_params is None:
            content_params = params.replace(threshold=DetectorParams().threshold)
        scenes, tag = detect_fallback(series, params, content_params)
        return Detection(scenes, tag)
