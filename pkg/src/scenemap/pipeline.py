"""
The segmentation pipeline.

A video is processed in two passes. The first pass streams all sampled frames once, computing
the content score of each consecutive pair and keeping only the previous frame. After the scenes
are detected, the second pass obtains only the keyframe candidates of each scene: random-access
sources fetch them per scene, possibly in parallel, while decoded videos are re-read sequentially
and candidates are released as soon as their scene is done.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, List, Dict, Any, Sequence, Union, Tuple, Iterator

import numpy as np

from scenemap.detector import SceneDetector, Detection
from scenemap.exceptions import UnreadableSourceException, CandidateFetchException, \
    SceneMapException, InvalidParameterException
from scenemap.frame_source import FrameSource
from scenemap.frame_spec import Frame, FrameSpec, VideoMeta
from scenemap.keyframes import KeyframeRecord, KeyframeWeights, extract_keyframe, \
    sample_indices
from scenemap.metrics import hsv, hsv_distance
from scenemap.pipeline_config import PipelineConfig, AUTO
from scenemap.policy import PolicySpec, resolve, resolve_strategy
from scenemap.scene import Scene
from scenemap.score_series import ScoreSeries
from scenemap.sources import open_source, SourceLike


logger = logging.getLogger(__name__)

#: The stages reported in :attr:`SegmentationResult.timing`.
STAGES = ('probe', 'score', 'detect', 'keyframes', 'write')


class Diagnostics(object):
    """Counters collected while processing a video."""

    def __init__(self, frames_read: int = 0, pairs_scored: int = 0, candidates_scored: int = 0,
                 fallback_triggered: bool = False, keyframe_coverage: float = 0.0,
                 truncated: bool = False, failed_scenes: Optional[List[int]] = None) -> None:
        """
        :param frames_read: The number of sampled frames read in the scoring pass.
        :param pairs_scored: The number of content scores computed.
        :param candidates_scored: The number of keyframe candidates scored.
        :param fallback_triggered: Whether a fallback detector ran its content pass.
        :param keyframe_coverage: The fraction of scenes that have a keyframe.
        :param truncated: Whether the frame stream ended before the expected frame count.
        :param failed_scenes: The indices of the scenes for which no keyframe could be extracted.
        """
        self.frames_read = frames_read
        self.pairs_scored = pairs_scored
        self.candidates_scored = candidates_scored
        self.fallback_triggered = fallback_triggered
        self.keyframe_coverage = keyframe_coverage
        self.truncated = truncated
        self.failed_scenes = failed_scenes if failed_scenes is not None else []

    def to_dict(self) -> Dict[str, Any]:
        """Returns the counters written to the metadata file, in a stable order."""
        return {'frames_read': self.frames_read, 'pairs_scored': self.pairs_scored,
                'fallback_triggered': self.fallback_triggered,
                'keyframe_coverage': self.keyframe_coverage,
                'candidates_scored': self.candidates_scored, 'truncated': self.truncated}

    def __repr__(self) -> str:
        """Returns a string representation of these diagnostics."""
        return 'Diagnostics(%s)' % self.to_dict()


class SegmentationResult(object):
    """The outcome of processing one video."""

    def __init__(self, video: VideoMeta, spec: FrameSpec, policy: PolicySpec,
                 used_strategy: str, scenes: List[Scene], keyframes: List[KeyframeRecord],
                 diagnostics: Diagnostics, timing: Optional[Dict[str, float]] = None) -> None:
        """
        :param video: The video metadata.
        :param spec: The effective frame specification.
        :param policy: The resolved policy, including overrides.
        :param used_strategy: The strategy that produced the scenes, which, for the fallback
            strategy, tells which pass was used.
        :param scenes: The scenes, tiling the frames that were read.
        :param keyframes: At most one keyframe per scene, ordered by scene.
        :param diagnostics: Counters collected during processing.
        :param timing: The wall clock time, in seconds, spent in each stage.
        """
        self.video = video
        self.spec = spec
        self.policy = policy
        self.used_strategy = used_strategy
        self.scenes = scenes
        self.keyframes = keyframes
        self.diagnostics = diagnostics
        self.timing = timing if timing is not None else {}

    def keyframe_for(self, scene_index: int) -> Optional[KeyframeRecord]:
        """Returns the keyframe of a scene, or `None` if it could not be extracted."""
        for kf in self.keyframes:
            if kf.scene_index == scene_index:
                return kf
        return None

    @property
    def scene_durations(self) -> List[float]:
        """The duration of each scene, in seconds."""
        return [s.duration_sec for s in self.scenes]

    def __repr__(self) -> str:
        """Returns a string representation of this result."""
        return 'SegmentationResult(%s, %s, %s scenes, %s keyframes)' % (
            self.video.source_path, self.used_strategy, len(self.scenes), len(self.keyframes))


class Pipeline(object):
    """Segments videos and selects their keyframes according to a :class:`PipelineConfig`."""

    def __init__(self, config: Optional[PipelineConfig] = None) -> None:
        """:param config: The configuration; defaults to `PipelineConfig.DEFAULT`."""
        self.config = config if config is not None else PipelineConfig.DEFAULT

    def resolve_policy(self, duration_sec: float) -> PolicySpec:
        """Returns the strategy and parameters used for a video of the given duration."""
        c = self.config
        if c.strategy == AUTO:
            policy = resolve(duration_sec, c.policy_table)
        else:
            policy = resolve_strategy(c.strategy, c.policy_table)
        return policy.with_overrides(**c.overrides)

    def run(self, source: SourceLike, out_dir: Optional[Union[str, Path]] = None) \
            -> SegmentationResult:
        """
        Processes a video.

        :param source: A video file, a raw-frame sequence directory, or a
            :class:`~scenemap.frame_source.FrameSource`.
        :param out_dir: If specified, the metadata and thumbnails are written to this directory.
        :return: The scenes, keyframes, and diagnostics.
        :raises UnreadableSourceException: if the source cannot be probed or contains no frames.
        :raises OutputException: if the outputs cannot be written.
        """
        c = self.config
        timing: Dict[str, float] = {}
        start = time.perf_counter()
        src = open_source(source, c.frame_spec, c.ffmpeg_path, c.ffprobe_path)
        try:
            meta = src.probe()
            spec = src.spec
            policy = self.resolve_policy(meta.duration_sec)
            timing['probe'] = _lap(start)
            logger.debug('%s: %s, %s, %s', src.path, meta, spec, policy)

            start = time.perf_counter()
            series, diagnostics = self._score(src, spec, meta, policy)
            timing['score'] = _lap(start)

            start = time.perf_counter()
            detector = SceneDetector.get_instance(policy.strategy)
            detection = detector.detect(series, meta, policy.params, policy.content_params)
            diagnostics.fallback_triggered = detection.fallback_triggered
            timing['detect'] = _lap(start)

            start = time.perf_counter()
            keyframes = self._extract_keyframes(src, detection.scenes, diagnostics)
            timing['keyframes'] = _lap(start)
        finally:
            src.close()

        result = SegmentationResult(meta, spec, policy, detection.used_strategy,
                                    detection.scenes, keyframes, diagnostics, timing)
        if out_dir is not None:
            from scenemap.metadata import write_metadata

            start = time.perf_counter()
            write_metadata(result, out_dir, c.write_thumbnails)
            timing['write'] = _lap(start)
            _release_frames(result)
        elif not c.write_thumbnails:
            _release_frames(result)
        logger.info('%s: strategy=%s, scenes=%s, coverage=%.1f%%', meta.source_path,
                    detection.used_strategy, len(detection.scenes),
                    100 * diagnostics.keyframe_coverage)
        logger.debug('%s: timing %s', meta.source_path,
                     ', '.join('%s=%.3fs' % kv for kv in timing.items()))
        return result

    def _score(self, src: FrameSource, spec: FrameSpec, meta: VideoMeta,
               policy: PolicySpec) -> Tuple[ScoreSeries, Diagnostics]:
        scores: List[float] = []
        prev: Optional[np.ndarray] = None
        stream = src.frames()
        try:
            for frame in stream:
                current = hsv(frame)
                if prev is not None:
                    scores.append(hsv_distance(prev, current))
                prev = current
        finally:
            stream.close()
        if stream.frames_read == 0:
            raise UnreadableSourceException('No frames could be read from %s' % src.path,
                                            exception=stream.error)
        series = ScoreSeries(scores, spec.sampling_fps, policy.params.smoothing_window,
                             meta.duration_sec)
        diagnostics = Diagnostics(frames_read=stream.frames_read, pairs_scored=len(scores),
                                  truncated=stream.truncated)
        return series, diagnostics

    def _extract_keyframes(self, src: FrameSource, scenes: List[Scene],
                           diagnostics: Diagnostics) -> List[KeyframeRecord]:
        if src.random_access:
            outcomes = self._extract_random_access(src, scenes)
        else:
            outcomes = list(self._extract_sequential(src, scenes))
        keyframes = []
        for scene, outcome in zip(scenes, outcomes):
            if isinstance(outcome, KeyframeRecord):
                keyframes.append(outcome)
                diagnostics.candidates_scored += outcome.candidate_count
            else:
                logger.warning('%s: no keyframe for scene %s: %s', src.path, scene.index,
                               outcome)
                diagnostics.failed_scenes.append(scene.index)
        diagnostics.keyframe_coverage = len(keyframes) / len(scenes)
        return keyframes

    def _extract_random_access(self, src: FrameSource, scenes: List[Scene]) \
            -> List[Union[KeyframeRecord, SceneMapException]]:
        weights = self.config.weights

        def extract(scene: Scene) -> Union[KeyframeRecord, SceneMapException]:
            try:
                return extract_keyframe(scene, src.fetch, weights)
            except CandidateFetchException as ex:
                return ex

        workers = self.config.keyframe_workers
        if workers == 1 or len(scenes) == 1:
            return [extract(scene) for scene in scenes]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(extract, scenes))

    def _extract_sequential(self, src: FrameSource, scenes: List[Scene]) \
            -> Iterator[Union[KeyframeRecord, SceneMapException]]:
        weights = self.config.weights
        plan = [(scene, sample_indices(scene, weights.n_candidates)) for scene in scenes]
        wanted = [i for _, indices in plan for i in indices]
        buffer: Dict[int, Frame] = {}
        k = 0
        try:
            for frame in src.iter_selected(wanted):
                buffer[frame.index] = frame
                while k < len(plan) and plan[k][1][-1] <= frame.index:
                    yield _extract_buffered(plan[k][0], plan[k][1], buffer, weights)
                    k += 1
        except Exception as ex:
            logger.debug('Candidate pass over %s failed', src.path, exc_info=True)
            failure = CandidateFetchException('Could not read candidates from %s' % src.path,
                                              exception=ex)
            for _ in range(k, len(plan)):
                yield failure
            return
        for scene, indices in plan[k:]:
            yield _extract_buffered(scene, indices, buffer, weights)


def _extract_buffered(scene: Scene, indices: List[int], buffer: Dict[int, Frame],
                      weights: KeyframeWeights) -> Union[KeyframeRecord, SceneMapException]:
    try:
        return extract_keyframe(scene, buffer, weights)
    except CandidateFetchException as ex:
        return ex
    finally:
        for i in indices:
            buffer.pop(i, None)


def _lap(start: float) -> float:
    return time.perf_counter() - start


def _release_frames(result: SegmentationResult) -> None:
    for kf in result.keyframes:
        kf.frame = None


class BatchItem(object):
    """The outcome of processing one video of a batch."""

    def __init__(self, source: SourceLike, result: Optional[SegmentationResult] = None,
                 error: Optional[Exception] = None, out_dir: Optional[Path] = None) -> None:
        """
        :param source: The source as passed to :func:`run_batch`.
        :param result: The result, if the video was processed successfully.
        :param error: The exception that stopped the processing of the video, if any.
        :param out_dir: The directory the outputs were written to, if any.
        """
        self.source = source
        self.result = result
        self.error = error
        self.out_dir = out_dir

    @property
    def ok(self) -> bool:
        """Returns `True` if the video was processed successfully."""
        return self.error is None

    def __repr__(self) -> str:
        """Returns a string representation of this item."""
        if self.ok:
            return 'BatchItem(%s, %r)' % (self.source, self.result)
        return 'BatchItem(%s, error=%s)' % (self.source, self.error)


def output_names(sources: Sequence[SourceLike]) -> List[str]:
    """
    Returns distinct directory names for the outputs of a list of sources.

    Names are derived from the file or directory names of the sources without their extension.
    Repeated names get a numeric suffix.
    """
    names: List[str] = []
    seen: Dict[str, int] = {}
    for source in sources:
        path = source.path if isinstance(source, FrameSource) else str(source)
        base = Path(path.rstrip('/')).stem or 'video'
        n = seen.get(base, 0) + 1
        seen[base] = n
        names.append(base if n == 1 else '%s_%s' % (base, n))
    return names


def run_batch(sources: Sequence[SourceLike], parallelism: int = 1,
              config: Optional[PipelineConfig] = None,
              out_dir: Optional[Union[str, Path]] = None) -> List[BatchItem]:
    """
    Processes several videos concurrently.

    A failure to process one video is recorded in its :class:`BatchItem` and does not affect the
    other videos.

    :param sources: The videos to process.
    :param parallelism: The maximum number of videos processed at the same time.
    :param config: The pipeline configuration.
    :param out_dir: If specified, the outputs of each video are written to a subdirectory of
        this directory named after the video (see :func:`output_names`).
    :return: One item per source, in the order of `sources`.
    """
    if parallelism < 1:
        raise InvalidParameterException('Parallelism must be at least 1; got %s' % parallelism)
    pipeline = Pipeline(config)
    dirs: List[Optional[Path]] = [None] * len(sources)
    if out_dir is not None:
        dirs = [Path(out_dir) / name for name in output_names(sources)]

    def process(i: int) -> BatchItem:
        source = sources[i]
        try:
            return BatchItem(source, pipeline.run(source, dirs[i]), out_dir=dirs[i])
        except SceneMapException as ex:
            logger.error('%s: %s', source, ex)
            return BatchItem(source, error=ex, out_dir=dirs[i])
        except Exception as ex:
            logger.error('%s: unexpected error: %s', source, ex)
            logger.debug('Error processing %s', source, exc_info=True)
            return BatchItem(source, error=ex, out_dir=dirs[i])

    if not sources:
        return []
    with ThreadPoolExecutor(max_workers=min(parallelism, len(sources))) as pool:
        items = list(pool.map(process, range(len(sources))))
    failed = sum(1 for item in items if not item.ok)
    logger.info('Processed %s videos, %s failed', len(items), failed)
    return items
