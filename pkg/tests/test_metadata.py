import json
from pathlib import Path

import cv2
import pytest

from scenemap import OutputException, Pipeline, PipelineConfig, SceneMapException, read_scenes, \
    write_metadata
from scenemap.metadata import METADATA_FILE, read_metadata, thumbnail_name, to_document


def test_thumbnails(three_blocks: Path, config: PipelineConfig, tmp_path: Path) -> None:
    out = tmp_path / 'out'
    result = Pipeline(config).run(three_blocks, out)
    assert sorted(p.name for p in out.glob('*.png')) == ['scene_0000.png', 'scene_0001.png',
                                                         'scene_0002.png']
    image = cv2.imread(str(out / 'scene_0001.png'))
    assert image.shape == (18, 32, 3)
    # blue, read back in BGR order
    assert tuple(image[0, 0]) == (255, 0, 0)
    assert [kf.thumbnail for kf in result.keyframes] == [thumbnail_name(i) for i in range(3)]
    assert all(kf.frame is None for kf in result.keyframes)
    assert result.timing['write'] >= 0


def test_document(three_blocks: Path, config: PipelineConfig, tmp_path: Path) -> None:
    Pipeline(config).run(three_blocks, tmp_path)
    with (tmp_path / METADATA_FILE).open() as f:
        doc = json.load(f)
    assert list(doc) == ['video', 'policy', 'scenes', 'diagnostics']
    assert doc['video']['duration_sec'] == 60.0
    assert doc['video']['sampling_fps'] == 2.0
    assert (doc['video']['frame_width'], doc['video']['frame_height']) == (32, 18)
    assert doc['policy']['strategy'] == 'adaptive'
    assert doc['policy']['used_strategy'] == 'adaptive'
    assert doc['policy']['matched_rule'] == '0 < D <= 120'
    assert doc['policy']['params']['threshold'] == 1.0
    assert doc['policy']['params']['minlen_sec'] == 15.0
    assert 'content_params' not in doc['policy']
    assert [s['start_sec'] for s in doc['scenes']] == [0.0, 20.0, 40.0]
    assert doc['scenes'][-1]['end_sec'] == 60.0
    assert doc['diagnostics']['keyframe_coverage'] == 1.0


def test_round_trip(three_blocks: Path, config: PipelineConfig, tmp_path: Path) -> None:
    result = Pipeline(config).run(three_blocks, tmp_path)
    scenes, keyframes = read_scenes(tmp_path)
    assert scenes == result.scenes
    assert [kf.to_dict() if kf else None for kf in keyframes] == \
        [kf.to_dict() for kf in result.keyframes]


def test_without_thumbnails(black_white: Path, tmp_path: Path) -> None:
    result = Pipeline(PipelineConfig(write_thumbnails=False)).run(black_white, tmp_path)
    assert list(tmp_path.glob('*.png')) == []
    _, keyframes = read_scenes(tmp_path / METADATA_FILE)
    assert all(kf is not None and kf.thumbnail is None for kf in keyframes)
    assert len(keyframes) == len(result.scenes)


def test_missing_keyframe(three_blocks: Path, config: PipelineConfig, tmp_path: Path) -> None:
    result = Pipeline(config).run(three_blocks)
    del result.keyframes[1]
    write_metadata(result, tmp_path)
    doc = to_document(result)
    assert doc['scenes'][1]['keyframe'] is None
    assert not (tmp_path / 'scene_0001.png').exists()
    _, keyframes = read_scenes(tmp_path)
    assert keyframes[1] is None
    assert keyframes[2] is not None


def test_unwritable_output(black_white: Path, config: PipelineConfig, tmp_path: Path) -> None:
    blocker = tmp_path / 'file'
    blocker.write_text('')
    with pytest.raises(OutputException):
        Pipeline(config).run(black_white, blocker / 'out')


def test_read_metadata_errors(tmp_path: Path) -> None:
    with pytest.raises(SceneMapException):
        read_metadata(tmp_path / 'missing.json')
    bad = tmp_path / 'bad.json'
    bad.write_text('{"scenes": [')
    with pytest.raises(SceneMapException):
        read_metadata(bad)
    other = tmp_path / 'other.json'
    other.write_text('{"rules": []}')
    with pytest.raises(SceneMapException):
        read_metadata(other)
