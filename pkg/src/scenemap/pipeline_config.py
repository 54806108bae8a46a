"""The configuration shared by all the stages of a :class:`~scenemap.pipeline.Pipeline`."""
import os
from typing import Optional, Dict, Any, Union

from typeguard import typechecked

from scenemap.detector_params import DetectorParams
from scenemap.exceptions import InvalidParameterException
from scenemap.frame_spec import FrameSpec
from scenemap.keyframes import KeyframeWeights
from scenemap.policy import PolicyTable, default_table

#: The detector parameters that can be overridden for a run.
OVERRIDE_KEYS = ('threshold', 'content_threshold', 'minlen_sec', 'interval_sec',
                 'smoothing_window', 'adaptive_window', 'min_content_score')

#: The strategy value that selects the detector using the policy table.
AUTO = 'auto'


class PipelineConfig(object):
    """
    The configuration of a :class:`~scenemap.pipeline.Pipeline`.

    The decoder executables can also be set with the `SCENEMAP_FFMPEG` and `SCENEMAP_FFPROBE`
    environment variables, and thumbnails can be disabled by setting `SCENEMAP_NO_THUMBNAILS`.
    Explicit constructor arguments take precedence over the environment.
    """

    #: A default `PipelineConfig` used when none is specified.
    DEFAULT: 'PipelineConfig' = None  # type: ignore

    @typechecked
    def __init__(self, frame_spec: Optional[FrameSpec] = None,
                 policy_table: Optional[PolicyTable] = None,
                 strategy: str = AUTO,
                 overrides: Optional[Dict[str, Union[int, float]]] = None,
                 weights: Optional[KeyframeWeights] = None,
                 write_thumbnails: Optional[bool] = None,
                 ffmpeg_path: Optional[str] = None,
                 ffprobe_path: Optional[str] = None,
                 keyframe_workers: int = 1) -> None:
        """
        :param frame_spec: The frame geometry and sampling rate. Defaults to `FrameSpec()`.
        :param policy_table: The policy table. Defaults to
            :func:`~scenemap.policy.default_table`.
        :param strategy: `"auto"` to select the detector from the policy table based on the video
            duration, or the name of a detector to use for all videos.
        :param overrides: Detector parameter values that replace those of the selected policy
            rule. Valid keys are listed in :data:`OVERRIDE_KEYS`.
        :param weights: The keyframe selection weights. Defaults to `KeyframeWeights()`.
        :param write_thumbnails: Whether keyframe thumbnails are written with the metadata.
        :param ffmpeg_path: The `ffmpeg` executable.
        :param ffprobe_path: The `ffprobe` executable.
        :param keyframe_workers: The number of threads used to extract the keyframes of a video
            from random-access sources.

        All constructor parameters are accessible as properties.
        """
        overrides = dict(overrides) if overrides else {}
        unknown = set(overrides) - set(OVERRIDE_KEYS)
        if unknown:
            raise InvalidParameterException('Unknown overrides: %s' % ', '.join(sorted(unknown)))
        _check_overrides(overrides)
        if keyframe_workers < 1:
            raise InvalidParameterException('At least one keyframe worker is needed; got %s'
                                            % keyframe_workers)
        self._frame_spec = frame_spec if frame_spec is not None else FrameSpec()
        self._policy_table = policy_table if policy_table is not None else default_table()
        self._strategy = strategy
        self._overrides = overrides
        self._weights = weights if weights is not None else KeyframeWeights()
        if write_thumbnails is None:
            write_thumbnails = 'SCENEMAP_NO_THUMBNAILS' not in os.environ
        self._write_thumbnails = write_thumbnails
        self._ffmpeg_path = ffmpeg_path or os.environ.get('SCENEMAP_FFMPEG', 'ffmpeg')
        self._ffprobe_path = ffprobe_path or os.environ.get('SCENEMAP_FFPROBE', 'ffprobe')
        self._keyframe_workers = keyframe_workers

    @property
    def frame_spec(self) -> FrameSpec:
        """The requested frame geometry and sampling rate."""
        return self._frame_spec

    @property
    def policy_table(self) -> PolicyTable:
        """The policy table used when :attr:`strategy` is `"auto"`."""
        return self._policy_table

    @property
    def strategy(self) -> str:
        """`"auto"` or the name of the detector to use for all videos."""
        return self._strategy

    @property
    def overrides(self) -> Dict[str, Union[int, float]]:
        """Detector parameter overrides."""
        return dict(self._overrides)

    @property
    def weights(self) -> KeyframeWeights:
        """The keyframe selection weights."""
        return self._weights

    @property
    def write_thumbnails(self) -> bool:
        """Whether thumbnails are written."""
        return self._write_thumbnails

    @property
    def ffmpeg_path(self) -> str:
        """The `ffmpeg` executable."""
        return self._ffmpeg_path

    @property
    def ffprobe_path(self) -> str:
        """The `ffprobe` executable."""
        return self._ffprobe_path

    @property
    def keyframe_workers(self) -> int:
        """The number of keyframe extraction threads per video."""
        return self._keyframe_workers

    def replace(self, **kwargs: Any) -> 'PipelineConfig':
        """Returns a copy of this configuration with some constructor parameters replaced."""
        values = {'frame_spec': self._frame_spec, 'policy_table': self._policy_table,
                  'strategy': self._strategy, 'overrides': self._overrides,
                  'weights': self._weights, 'write_thumbnails': self._write_thumbnails,
                  'ffmpeg_path': self._ffmpeg_path, 'ffprobe_path': self._ffprobe_path,
                  'keyframe_workers': self._keyframe_workers}
        unknown = set(kwargs) - set(values)
        if unknown:
            raise InvalidParameterException('Unknown configuration keys: %s'
                                            % ', '.join(sorted(unknown)))
        values.update(kwargs)
        return PipelineConfig(**values)

    def with_overrides(self, **kwargs: Union[int, float]) -> 'PipelineConfig':
        """Returns a copy of this configuration with additional parameter overrides."""
        overrides = dict(self._overrides)
        overrides.update(kwargs)
        return self.replace(overrides=overrides)

    def __repr__(self) -> str:
        """Returns a string representation of this configuration."""
        return 'PipelineConfig(%s, strategy=%s, overrides=%s, %s)' % (self._frame_spec,
                                                                       self._strategy,
                                                                       self._overrides,
                                                                       self._weights)


def _check_overrides(overrides: Dict[str, Union[int, float]]) -> None:
    primary = {k: v for k, v in overrides.items() if k != 'content_threshold'}
    DetectorParams().replace(**primary)
    if 'content_threshold' in overrides:
        DetectorParams(threshold=overrides['content_threshold'])


PipelineConfig.DEFAULT = PipelineConfig()
