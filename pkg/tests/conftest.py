import logging
from pathlib import Path

import pytest

from _test_tools import write_fixture, SMALL_SPEC

from scenemap import PipelineConfig, FrameSpec


logger = logging.getLogger(__name__)


@pytest.fixture
def small_spec() -> FrameSpec:
    return SMALL_SPEC


@pytest.fixture
def black_white(tmp_path: Path) -> Path:
    """A 40 s raw-frame sequence: 20 s black, then 20 s white."""
    d = tmp_path / 'black_white'
    write_fixture(d, [(20, 'black'), (20, 'white')])
    return d


@pytest.fixture
def three_blocks(tmp_path: Path) -> Path:
    """A 60 s raw-frame sequence with cuts at 20 s and 40 s."""
    d = tmp_path / 'three_blocks'
    write_fixture(d, [(20, 'red'), (20, 'blue'), (20, 'noise:7')])
    return d


@pytest.fixture
def config() -> PipelineConfig:
    """A configuration that does not depend on the environment."""
    return PipelineConfig(write_thumbnails=True, ffmpeg_path='ffmpeg', ffprobe_path='ffprobe')
