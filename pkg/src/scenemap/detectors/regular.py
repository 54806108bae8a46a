"""The regular split detector, which cuts at fixed time intervals."""
import math
from typing import List, Optional

from scenemap.detector import SceneDetector, Detection
from scenemap.detector_params import DetectorParams
from scenemap.exceptions import InvalidParameterException
from scenemap.frame_spec import FrameSpec, VideoMeta
from scenemap.scene import Scene, scenes_from_starts
from scenemap.score_series import ScoreSeries

#: A trailing piece shorter than this many seconds is merged into the preceding scene.
MIN_REMAINDER_SEC = 1.0


def split_times(duration_sec: float, interval_sec: float) -> List[float]:
    """Returns the times, in seconds, at which a video of the given duration is split."""
    if not interval_sec > 0:
        raise InvalidParameterException('Interval must be positive; got %s' % interval_sec)
    times = []
    k = 1
    while k * interval_sec < duration_sec:
        times.append(k * interval_sec)
        k += 1
    if times and duration_sec - times[-1] < MIN_REMAINDER_SEC:
        times.pop()
    return times


def detect_regular(meta: VideoMeta, spec: FrameSpec, interval_sec: float,
                   frame_count: Optional[int] = None) -> List[Scene]:
    """
    Splits a video into scenes of `interval_sec` seconds.

    The last scene covers what remains; if that is less than one second, it is merged into the
    previous scene.

    :param meta: The video metadata; only the duration is used.
    :param spec: The frame specification; only the sampling rate is used.
    :param interval_sec: The scene length.
    :param frame_count: The number of sampled frames. Defaults to the number of frames `spec`
        yields for the video duration.
    """
    fps = spec.sampling_fps
    n = frame_count if frame_count is not None else spec.frame_count(meta.duration_sec)
    starts = [int(math.floor(t * fps + 0.5)) for t in split_times(meta.duration_sec,
                                                                  interval_sec)]
    return scenes_from_starts(starts, n, fps, meta.duration_sec)


class RegularSplitDetector(SceneDetector):
    """A :class:`~scenemap.detector.SceneDetector` wrapping :func:`detect_regular`."""

    def detect(self, series: ScoreSeries, meta: VideoMeta, params: DetectorParams,
               content_params: Optional[DetectorParams] = None) -> Detection:
        """Runs :func:`detect_regular` with `params.interval_sec`; the scores are not used."""
        spec = FrameSpec(sampling_fps=series.sampling_fps)
        scenes = detect_regular(meta, spec, params.interval_sec, series.frame_count)
        return Detection(scenes, 'regular_split')
