"""
Corpus evaluation and parameter ablation.

A corpus is described by a manifest, a text file with one video per line, optionally followed by
a tab and a category tag. Each video is segmented with the same configuration, and per-video and
per-category statistics are collected: scene counts, average scene length, scene density in
scenes per minute, and keyframe coverage. An ablation repeats the evaluation once for each
value of a detector parameter, keeping everything else fixed.
"""
import logging
import statistics
from pathlib import Path
from typing import List, Optional, Sequence, Union, Dict, Any, Tuple, Iterable

from scenemap.exceptions import InvalidParameterException, SceneMapException
from scenemap.pipeline import SegmentationResult, run_batch
from scenemap.pipeline_config import PipelineConfig
from scenemap.scene import Scene, internal_cuts
from scenemap.sources import SourceLike


logger = logging.getLogger(__name__)

#: The minimum scene length recommended for general use, in seconds.
RECOMMENDED_MINLEN_SEC = 12.0

#: The content threshold recommended for general use.
RECOMMENDED_THRESHOLD = 15.0

#: The default minimum scene lengths swept by :func:`ablate`.
MINLEN_SWEEP = [3, 5, 8, 10, 12, 15, 20, 25, 30]

#: The default thresholds swept by :func:`ablate`.
THRESHOLD_SWEEP = [5, 10, 15, 20, 25, 30]

#: The sweepable parameters, mapped to the detector parameter they override.
SWEEP_PARAMS = {'minlen': 'minlen_sec', 'threshold': 'threshold'}

#: Duration categories and their exclusive upper bounds, in seconds.
CATEGORIES: List[Tuple[str, Optional[float]]] = [
    ('short', 120.0),
    ('talk', 1800.0),
    ('film', 7200.0),
    ('event', 10800.0),
    ('surveillance', None),
]


def category_for(duration_sec: float) -> str:
    """Returns the duration category of a video."""
    for name, bound in CATEGORIES:
        if bound is None or duration_sec < bound:
            return name
    raise AssertionError('unreachable')


class ManifestEntry(object):
    """A video listed in a corpus manifest."""

    def __init__(self, source: SourceLike, category: Optional[str] = None) -> None:
        """
        :param source: The video.
        :param category: The category tag; if `None`, it is inferred from the video duration.
        """
        self.source = source
        self.category = category

    def __eq__(self, other: object) -> bool:
        """Compares two entries."""
        if not isinstance(other, ManifestEntry):
            return False
        return (str(self.source), self.category) == (str(other.source), other.category)

    def __repr__(self) -> str:
        """Returns a string representation of this entry."""
        return 'ManifestEntry(%s, %s)' % (self.source, self.category)


def read_manifest(path: Union[str, Path]) -> List[ManifestEntry]:
    """
    Reads a corpus manifest.

    Empty lines and lines starting with `#` are ignored. Relative video paths are resolved
    against the directory of the manifest.

    :raises InvalidParameterException: if the manifest cannot be read or a line has more than
        two tab-separated fields.
    """
    p = Path(path)
    try:
        lines = p.read_text().splitlines()
    except OSError as ex:
        raise InvalidParameterException('Cannot read manifest %s' % p, exception=ex)
    entries = []
    for n, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        fields = line.rstrip('\n').split('\t')
        if len(fields) > 2:
            raise InvalidParameterException('%s:%s: expected "path<TAB>category"' % (p, n))
        video = Path(fields[0].strip())
        if not video.is_absolute():
            video = p.parent / video
        category = fields[1].strip() if len(fields) == 2 and fields[1].strip() else None
        entries.append(ManifestEntry(video, category))
    return entries


class VideoRow(object):
    """Evaluation statistics of one video."""

    def __init__(self, path: str, category: str, duration_sec: float, scene_count: int,
                 keyframe_count: int, scene_durations: List[float], used_strategy: str) -> None:
        """
        :param path: The video.
        :param category: The category tag.
        :param duration_sec: The video duration.
        :param scene_count: The number of detected scenes.
        :param keyframe_count: The number of scenes with a keyframe.
        :param scene_durations: The duration of each scene, in seconds.
        :param used_strategy: The strategy that produced the scenes.
        """
        self.path = path
        self.category = category
        self.duration_sec = duration_sec
        self.scene_count = scene_count
        self.keyframe_count = keyframe_count
        self.scene_durations = scene_durations
        self.used_strategy = used_strategy

    @staticmethod
    def from_result(result: SegmentationResult, category: Optional[str] = None) -> 'VideoRow':
        """Collects the statistics of a segmentation result."""
        duration = result.video.duration_sec
        return VideoRow(result.video.source_path,
                        category if category is not None else category_for(duration),
                        duration, len(result.scenes), len(result.keyframes),
                        result.scene_durations, result.used_strategy)

    @property
    def avg_scene_len_sec(self) -> float:
        """The mean scene duration."""
        return statistics.mean(self.scene_durations)

    @property
    def scenes_per_minute(self) -> float:
        """The number of scenes per minute of video."""
        return self.scene_count / (self.duration_sec / 60)

    @property
    def keyframe_coverage_pct(self) -> float:
        """The percentage of scenes that have a keyframe."""
        return 100.0 * self.keyframe_count / self.scene_count

    @property
    def fallback_triggered(self) -> bool:
        """Whether the content pass of the fallback detector was used."""
        return self.used_strategy == 'fallback:content'

    def to_dict(self) -> Dict[str, Any]:
        """Returns the columns of the per-video report."""
        return {'path': self.path, 'category': self.category, 'duration_sec': self.duration_sec,
                'scene_count': self.scene_count, 'avg_scene_len_sec': self.avg_scene_len_sec,
                'scenes_per_minute': self.scenes_per_minute,
                'keyframe_coverage_pct': self.keyframe_coverage_pct,
                'used_strategy': self.used_strategy}


class CategoryRow(object):
    """Mean statistics over the videos of a category."""

    def __init__(self, category: str, videos: Sequence[VideoRow]) -> None:
        """
        :param category: The category tag.
        :param videos: The videos in the category; there must be at least one.
        """
        if not videos:
            raise InvalidParameterException('No videos in category %s' % category)
        self.category = category
        self.video_count = len(videos)
        self.mean_duration_min = statistics.mean(v.duration_sec / 60 for v in videos)
        self.mean_avg_scene_len_sec = statistics.mean(v.avg_scene_len_sec for v in videos)
        self.mean_scenes_per_minute = statistics.mean(v.scenes_per_minute for v in videos)
        self.mean_keyframe_coverage_pct = statistics.mean(v.keyframe_coverage_pct
                                                          for v in videos)
        self.fallback_count = sum(1 for v in videos if v.fallback_triggered)

    def to_dict(self) -> Dict[str, Any]:
        """Returns the columns of the per-category report."""
        return {'category': self.category, 'videos': self.video_count,
                'avg_duration_min': self.mean_duration_min,
                'avg_scene_len_sec': self.mean_avg_scene_len_sec,
                'scenes_per_minute': self.mean_scenes_per_minute,
                'keyframe_coverage_pct': self.mean_keyframe_coverage_pct,
                'fallback_count': self.fallback_count}


def _category_order(categories: Iterable[str]) -> List[str]:
    known = [name for name, _ in CATEGORIES]
    present = set(categories)
    return [c for c in known if c in present] + sorted(present - set(known))


class CorpusReport(object):
    """The outcome of evaluating a corpus."""

    def __init__(self, videos: List[VideoRow],
                 errors: Optional[List[Tuple[str, Exception]]] = None) -> None:
        """
        :param videos: The statistics of the videos that were processed successfully.
        :param errors: The videos that could not be processed, with the corresponding errors.
        """
        self.videos = videos
        self.errors = errors if errors is not None else []
        by_category: Dict[str, List[VideoRow]] = {}
        for v in videos:
            by_category.setdefault(v.category, []).append(v)
        self.categories = [CategoryRow(c, by_category[c])
                           for c in _category_order(by_category)]

    @property
    def failed(self) -> int:
        """The number of videos that could not be processed."""
        return len(self.errors)

    @property
    def mean_scenes_per_video(self) -> float:
        """The mean number of scenes per video."""
        return statistics.mean(v.scene_count for v in self.videos) if self.videos else 0.0

    @property
    def median_scene_duration_sec(self) -> float:
        """The median duration of all scenes of all videos."""
        pooled = self.scene_durations
        return statistics.median(pooled) if pooled else 0.0

    @property
    def mean_keyframe_coverage_pct(self) -> float:
        """The mean keyframe coverage over all videos."""
        return statistics.mean(v.keyframe_coverage_pct for v in self.videos) \
            if self.videos else 0.0

    @property
    def scene_durations(self) -> List[float]:
        """The durations of all scenes of all videos."""
        return [d for v in self.videos for d in v.scene_durations]

    def __repr__(self) -> str:
        """Returns a string representation of this report."""
        return 'CorpusReport(%s videos, %s failed)' % (len(self.videos), self.failed)


def _as_entries(manifest: Union[str, Path, Sequence[ManifestEntry]]) -> List[ManifestEntry]:
    if isinstance(manifest, (str, Path)):
        return read_manifest(manifest)
    return list(manifest)


def evaluate_corpus(manifest: Union[str, Path, Sequence[ManifestEntry]],
                    config: Optional[PipelineConfig] = None,
                    parallelism: int = 1) -> CorpusReport:
    """
    Segments every video of a corpus and collects evaluation statistics.

    :param manifest: A manifest file or a list of entries.
    :param config: The pipeline configuration used for all videos.
    :param parallelism: The number of videos processed concurrently.
    :return: A report with one row per successfully processed video. Videos that fail are
        listed in :attr:`CorpusReport.errors` and excluded from the aggregates.
    """
    entries = _as_entries(manifest)
    # pixels are only needed for thumbnails, which are not written here
    config = (config if config is not None else PipelineConfig.DEFAULT).replace(
        write_thumbnails=False)
    items = run_batch([e.source for e in entries], parallelism, config)
    rows = []
    errors: List[Tuple[str, Exception]] = []
    for entry, item in zip(entries, items):
        if item.result is not None:
            rows.append(VideoRow.from_result(item.result, entry.category))
        else:
            assert item.error is not None
            errors.append((str(entry.source), item.error))
    report = CorpusReport(rows, errors)
    logger.info('Evaluated %s videos (%s failed): %.2f scenes per video', len(rows), len(errors),
                report.mean_scenes_per_video)
    return report


class AblationRow(object):
    """Corpus statistics for one value of a swept parameter."""

    def __init__(self, param: str, param_value: float, report: CorpusReport) -> None:
        """
        :param param: The swept parameter.
        :param param_value: The value used for this row.
        :param report: The corpus report obtained with that value.
        """
        self.param = param
        self.param_value = param_value
        self.report = report
        self.segments_per_video = report.mean_scenes_per_video
        self.median_duration_sec = report.median_scene_duration_sec
        self.keyframe_coverage_pct = report.mean_keyframe_coverage_pct

    def to_dict(self) -> Dict[str, Any]:
        """Returns the columns of the ablation table."""
        return {self.param: self.param_value, 'segments_per_video': self.segments_per_video,
                'median_duration_sec': self.median_duration_sec,
                'keyframe_coverage_pct': self.keyframe_coverage_pct,
                'failed': self.report.failed}

    def __repr__(self) -> str:
        """Returns a string representation of this row."""
        return 'AblationRow(%s=%s, %.2f segments, median %.2fs)' % (
            self.param, self.param_value, self.segments_per_video, self.median_duration_sec)


def sweep_key(param: str) -> str:
    """
    Returns the detector parameter overridden when sweeping `param`.

    :raises InvalidParameterException: if `param` cannot be swept.
    """
    if param in SWEEP_PARAMS:
        return SWEEP_PARAMS[param]
    if param in SWEEP_PARAMS.values():
        return param
    raise InvalidParameterException('Cannot sweep "%s"; expected one of %s'
                                    % (param, ', '.join(SWEEP_PARAMS)))


def ablate(param: str, values: Sequence[float],
           manifest: Union[str, Path, Sequence[ManifestEntry]],
           config: Optional[PipelineConfig] = None, strategy: str = 'content',
           parallelism: int = 1) -> List[AblationRow]:
    """
    Evaluates a corpus once for each value of a detector parameter.

    All videos are segmented with the same detector, so that only the swept parameter changes
    between rows.

    :param param: `"minlen"` or `"threshold"`.
    :param values: The values to sweep.
    :param manifest: A manifest file or a list of entries.
    :param config: The base configuration. Its strategy is replaced by `strategy` and the swept
        parameter overrides any existing override.
    :param strategy: The detector used for all videos.
    :param parallelism: The number of videos processed concurrently.
    :return: One row per value, in the order of `values`.
    """
    key = sweep_key(param)
    if len(values) == 0:
        raise InvalidParameterException('No values to sweep')
    entries = _as_entries(manifest)
    base = (config if config is not None else PipelineConfig.DEFAULT).replace(strategy=strategy)
    rows = []
    for value in values:
        report = evaluate_corpus(entries, base.with_overrides(**{key: value}), parallelism)
        row = AblationRow(param, value, report)
        logger.info('%s', row)
        rows.append(row)
    return rows


class GroundTruth(object):
    """The known scene cuts of a video, as sampled-frame indices of scene starts."""

    def __init__(self, cuts: Iterable[int]) -> None:
        """:param cuts: The cuts; they are sorted and duplicates are removed."""
        self.cuts = sorted(set(int(c) for c in cuts))

    def __len__(self) -> int:
        """Returns the number of cuts."""
        return len(self.cuts)

    def __repr__(self) -> str:
        """Returns a string representation of this ground truth."""
        return 'GroundTruth(%s)' % self.cuts


def _cut_list(cuts: Union[GroundTruth, Sequence[Scene], Sequence[int]]) -> List[int]:
    if isinstance(cuts, GroundTruth):
        return cuts.cuts
    items = list(cuts)
    if items and isinstance(items[0], Scene):
        return internal_cuts(items)  # type: ignore
    return sorted(set(int(c) for c in items))  # type: ignore


def boundary_prf(detected: Union[Sequence[Scene], Sequence[int], GroundTruth],
                 truth: Union[GroundTruth, Sequence[int]],
                 tolerance: int = 1) -> Tuple[float, float, float]:
    """
    Computes the precision, recall, and F1 score of detected scene cuts.

    Detected cuts are matched one-to-one to true cuts that are at most `tolerance` sampled
    frames away, scanning both sorted lists from left to right.

    :param detected: The detected scenes, whose internal cuts are evaluated, or the cuts
        themselves.
    :param truth: The true cuts.
    :param tolerance: The maximum distance between matched cuts, in sampled frames.
    :return: `(precision, recall, f1)`. Precision is 1 if nothing was detected and recall is 1
        if there is nothing to detect.
    """
    if tolerance < 0:
        raise InvalidParameterException('Tolerance must be non-negative; got %s' % tolerance)
    d = _cut_list(detected)
    t = _cut_list(truth)
    i = j = matched = 0
    while i < len(d) and j < len(t):
        if abs(d[i] - t[j]) <= tolerance:
            matched += 1
            i += 1
            j += 1
        elif d[i] < t[j]:
            i += 1
        else:
            j += 1
    precision = matched / len(d) if d else 1.0
    recall = matched / len(t) if t else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def failures(report: CorpusReport) -> List[str]:
    """Returns a description of each video of a report that could not be processed."""
    return ['%s: %s' % (path, ex.message if isinstance(ex, SceneMapException) else ex)
            for path, ex in report.errors]
