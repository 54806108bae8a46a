import csv
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pytest

from _test_tools import RGB, color_blocks, write_fixture

from scenemap import FrameSpec, InvalidParameterException, PipelineConfig, VideoMeta
from scenemap.detectors import detect_regular
from scenemap.evaluation import CorpusReport, GroundTruth, ManifestEntry, VideoRow, ablate, \
    boundary_prf, category_for, evaluate_corpus, failures, read_manifest, sweep_key
from scenemap.report import render_ablation_report, write_ablation_report, write_corpus_report

COLORS = ['red', 'green', 'blue', 'yellow', 'magenta', 'black', 'white']


def _row(duration: float, durations: List[float], keyframes: int) -> VideoRow:
    return VideoRow('v', category_for(duration), duration, len(durations), keyframes, durations,
                    'content')


def test_video_row() -> None:
    row = _row(60, [15.0] * 4, 4)
    assert row.scenes_per_minute == 4.0
    assert row.avg_scene_len_sec == 15.0
    assert row.keyframe_coverage_pct == 100.0
    assert _row(100, [10.0] * 10, 9).keyframe_coverage_pct == 90.0


def test_regular_split_density() -> None:
    meta = VideoMeta(232 * 60, 'long')
    scenes = detect_regular(meta, FrameSpec(sampling_fps=2), 30)
    row = VideoRow('long', category_for(meta.duration_sec), meta.duration_sec, len(scenes),
                   len(scenes), [s.duration_sec for s in scenes], 'regular_split')
    assert row.category == 'surveillance'
    assert row.scenes_per_minute == 2.0


def test_category_for() -> None:
    assert category_for(30) == 'short'
    assert category_for(119.9) == 'short'
    assert category_for(120) == 'talk'
    assert category_for(1800) == 'film'
    assert category_for(7199) == 'film'
    assert category_for(7200) == 'event'
    assert category_for(10800) == 'surveillance'


def test_corpus_report_aggregates() -> None:
    report = CorpusReport([_row(60, [10.0, 20.0, 30.0], 3), _row(90, [45.0, 45.0], 1)],
                          [('missing.mp4', InvalidParameterException('gone'))])
    assert report.mean_scenes_per_video == 2.5
    assert report.median_scene_duration_sec == 30.0
    assert report.mean_keyframe_coverage_pct == 75.0
    assert report.failed == 1
    assert failures(report) == ['missing.mp4: gone']
    assert len(report.categories) == 1
    assert report.categories[0].video_count == 2
    assert report.categories[0].mean_duration_min == 1.25

    empty = CorpusReport([])
    assert empty.mean_scenes_per_video == 0.0
    assert empty.categories == []


def test_boundary_prf() -> None:
    assert boundary_prf([10, 20, 30], [11, 25, 30]) == pytest.approx((2 / 3, 2 / 3, 2 / 3))
    assert boundary_prf([], []) == (1.0, 1.0, 1.0)
    assert boundary_prf([], [5]) == (1.0, 0.0, 0.0)
    assert boundary_prf([5], []) == (0.0, 1.0, 0.0)
    assert boundary_prf([5], GroundTruth([7, 7])) == (0.0, 0.0, 0.0)
    assert boundary_prf([5], GroundTruth([7]), tolerance=2) == (1.0, 1.0, 1.0)
    # a detection cannot match two cuts
    assert boundary_prf([10], [9, 11]) == pytest.approx((1.0, 0.5, 2 / 3))
    with pytest.raises(InvalidParameterException):
        boundary_prf([1], [1], tolerance=-1)


def test_boundary_prf_symmetry() -> None:
    rng = np.random.default_rng(12)
    for _ in range(200):
        a = sorted(set(rng.integers(0, 100, size=int(rng.integers(0, 10))).tolist()))
        b = sorted(set(rng.integers(0, 100, size=int(rng.integers(0, 10))).tolist()))
        p, r, f = boundary_prf(a, b, tolerance=2)
        assert boundary_prf(b, a, tolerance=2) == (r, p, f)
        assert boundary_prf(a, a) == (1.0, 1.0, 1.0)


def test_read_manifest(tmp_path: Path) -> None:
    manifest = tmp_path / 'corpus.tsv'
    manifest.write_text('# a corpus\n'
                        'videos/a.mp4\tfilm\n'
                        '\n'
                        '/data/b.mp4\n'
                        'c\t\n')
    assert read_manifest(manifest) == [ManifestEntry(tmp_path / 'videos' / 'a.mp4', 'film'),
                                       ManifestEntry(Path('/data/b.mp4')),
                                       ManifestEntry(tmp_path / 'c')]


def test_read_manifest_errors(tmp_path: Path) -> None:
    with pytest.raises(InvalidParameterException):
        read_manifest(tmp_path / 'missing.tsv')
    bad = tmp_path / 'bad.tsv'
    bad.write_text('a.mp4\tfilm\textra\n')
    with pytest.raises(InvalidParameterException):
        read_manifest(bad)


@pytest.fixture
def corpus(tmp_path: Path) -> Path:
    rng = np.random.default_rng(5)
    lines = []
    for i in range(10):
        colors = []
        for _ in range(int(rng.integers(3, 8))):
            choices = [c for c in COLORS if not colors or c != colors[-1]]
            colors.append(choices[int(rng.integers(0, len(choices)))])
        blocks = [(float(rng.integers(3, 12)), c) for c in colors]
        write_fixture(tmp_path / 'videos' / ('v%s' % i), blocks)
        lines.append('videos/v%s' % i)
    manifest = tmp_path / 'corpus.tsv'
    manifest.write_text('\n'.join(lines) + '\n')
    return manifest


def test_evaluate_corpus(corpus: Path, tmp_path: Path) -> None:
    report = evaluate_corpus(corpus, PipelineConfig(write_thumbnails=True), parallelism=3)
    assert len(report.videos) == 10
    assert report.failed == 0
    assert all(v.category == 'short' for v in report.videos)
    assert report.mean_keyframe_coverage_pct == 100.0
    # thumbnails are never written during evaluation
    assert list(tmp_path.rglob('*.png')) == []

    paths = write_corpus_report(report, tmp_path / 'report')
    assert sorted(p.name for p in paths) == ['categories.csv', 'durations.csv', 'report.csv',
                                             'report.md']
    with (tmp_path / 'report' / 'report.csv').open() as f:
        rows = list(csv.reader(f))
    assert len(rows) == 11
    assert rows[0][0] == 'Path'
    with (tmp_path / 'report' / 'durations.csv').open() as f:
        assert len(list(csv.reader(f))) == len(report.scene_durations) + 1
    assert '10 videos evaluated, 0 failed.' in (tmp_path / 'report' / 'report.md').read_text()


def test_evaluate_with_failures(corpus: Path, tmp_path: Path) -> None:
    entries = read_manifest(corpus) + [ManifestEntry(tmp_path / 'missing.mp4', 'film')]
    report = evaluate_corpus(entries)
    assert len(report.videos) == 10
    assert report.failed == 1
    assert 'missing.mp4' in failures(report)[0]
    text = (write_corpus_report(report, tmp_path / 'report')[-1]).read_text()
    assert '## Failures' in text


def _write_manifest(root: Path,
                    videos: Sequence[Sequence[Tuple[float, Union[str, RGB]]]]) -> Path:
    lines = []
    for i, blocks in enumerate(videos):
        write_fixture(root / 'videos' / ('v%s' % i), blocks)
        lines.append('videos/v%s' % i)
    manifest = root / 'corpus.tsv'
    manifest.write_text('\n'.join(lines) + '\n')
    return manifest


def test_ablate_minlen(tmp_path: Path) -> None:
    # 5 min of 5 s blocks; every cut is far above any content threshold
    manifest = _write_manifest(tmp_path, [color_blocks(['black', 'white'] * 30, 5),
                                          color_blocks(['blue', 'white'] * 30, 5)])
    values = [3, 5, 8, 10, 12, 15, 20, 25, 30]
    rows = ablate('minlen', values, manifest, parallelism=2)
    assert [r.param_value for r in rows] == values
    segments = [r.segments_per_video for r in rows]
    medians = [r.median_duration_sec for r in rows]
    assert segments == sorted(segments, reverse=True)
    assert medians == sorted(medians)
    assert segments == [60, 59, 30, 30, 20, 20, 15, 12, 10]
    assert medians == [5, 5, 10, 10, 15, 15, 20, 25, 30]
    assert all(r.keyframe_coverage_pct == 100.0 for r in rows)
    assert all(v.used_strategy == 'content' for r in rows for v in r.report.videos)

    paths = write_ablation_report(rows, tmp_path / 'ablation')
    assert [p.name for p in paths] == ['ablation_minlen.csv', 'ablation_minlen.md']
    with paths[0].open() as f:
        table = list(csv.reader(f))
    assert table[0][0] == 'minlen (s)'
    assert len(table) == len(values) + 1


def test_ablate_minlen_random_corpus(corpus: Path) -> None:
    rows = ablate('minlen', [0, 3, 5, 8, 12, 20], corpus, parallelism=2)
    segments = [r.segments_per_video for r in rows]
    assert segments == sorted(segments, reverse=True)
    assert segments[0] > segments[-1]


def test_ablate_threshold(tmp_path: Path) -> None:
    # black and white differ by 85, red and blue by about 57; smoothing divides both by three
    manifest = _write_manifest(tmp_path, [[(5, 'black'), (5, 'white'), (5, 'black')],
                                          [(5, 'red'), (5, 'blue'), (5, 'red')]])
    values = [5, 10, 15, 20, 25, 30]
    rows = ablate('threshold', values, manifest, PipelineConfig().with_overrides(minlen_sec=2))
    segments = [r.segments_per_video for r in rows]
    medians = [r.median_duration_sec for r in rows]
    assert segments == sorted(segments, reverse=True)
    assert medians == sorted(medians)
    assert segments == [3, 3, 3, 2, 2, 1]
    assert medians == [5, 5, 5, 5, 5, 15]
    assert 'Threshold' in render_ablation_report(rows)


def test_single_value_ablation(corpus: Path) -> None:
    row = ablate('minlen', [12], corpus)[0]
    config = PipelineConfig(strategy='content').with_overrides(minlen_sec=12)
    report = evaluate_corpus(corpus, config)
    assert [v.scene_count for v in row.report.videos] == [v.scene_count for v in report.videos]
    assert row.median_duration_sec == report.median_scene_duration_sec


def test_sweep_key() -> None:
    assert sweep_key('minlen') == 'minlen_sec'
    assert sweep_key('threshold') == 'threshold'
    assert sweep_key('minlen_sec') == 'minlen_sec'
    with pytest.raises(InvalidParameterException):
        sweep_key('interval')
    with pytest.raises(InvalidParameterException):
        ablate('minlen', [], [])
