"""Duration-aware video scene segmentation and keyframe selection."""
import importlib.util
import logging
import os
import pkgutil
import sys
from typing import Callable, Set

from scenemap.descriptor import Descriptor
from .detector import SceneDetector, Detection
from .detector_params import DetectorParams
from .exceptions import SceneMapException, UnreadableSourceException, \
    TruncatedStreamException, InvalidParameterException, PolicyConfigException, \
    CandidateFetchException, OutputException
from .frame_source import FrameSource, FrameStream
from .frame_spec import Frame, FrameSpec, VideoMeta
from .keyframes import KeyframeRecord, KeyframeWeights, choose_best_frame, extract_keyframe
from .metadata import write_metadata, read_scenes
from .pipeline import Pipeline, SegmentationResult, BatchItem, run_batch
from .pipeline_config import PipelineConfig
from .policy import PolicyRule, PolicyTable, PolicySpec, default_table, resolve, load_table
from .scene import Scene
from .score_series import ScoreSeries
from .sources import open_source, open_stream
from .version import VERSION

__version__ = VERSION

__all__ = [
    'SceneDetector', 'Detection', 'DetectorParams', 'SceneMapException',
    'UnreadableSourceException', 'TruncatedStreamException', 'InvalidParameterException',
    'PolicyConfigException', 'CandidateFetchException', 'OutputException', 'FrameSource',
    'FrameStream', 'Frame', 'FrameSpec', 'VideoMeta', 'KeyframeRecord', 'KeyframeWeights',
    'choose_best_frame', 'extract_keyframe', 'write_metadata', 'read_scenes', 'Pipeline',
    'SegmentationResult', 'BatchItem', 'run_batch', 'PipelineConfig', 'PolicyRule',
    'PolicyTable', 'PolicySpec', 'default_table', 'resolve', 'load_table', 'Scene',
    'ScoreSeries', 'open_source', 'open_stream'
]

logger = logging.getLogger(__name__)


class _PluginType:
    def __init__(self, name: str, registration_method: Callable[[Descriptor], None]):
        self.name = name
        self.registration_method = registration_method


PACKAGE = ['scenemap-descriptors']


TYPES = [_PluginType('detectors', SceneDetector.register_detector)]


def _load_plugins(full_path: str, mod: pkgutil.ModuleInfo) -> None:
    if mod.ispkg:
        return
    logger.debug('Attempting to load %s from %s', mod.name, full_path)
    spec = mod.module_finder.find_spec(mod.name, None)  # type: ignore
    full_mod_path = os.path.join(full_path, mod.name)
    try:
        if spec is None:
            raise Exception('Could not find module "%s"' % mod.name)
        im = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(im)
        full_mod_path = spec.origin or full_mod_path

        for _type in TYPES:
            var_name = '__SCENEMAP_{}__'.format(_type.name.upper())
            if hasattr(im, var_name):
                descs = getattr(im, var_name)
                logger.debug('Found module "%s" with %s', mod.name, descs)
                for desc in descs:
                    if isinstance(desc, Descriptor):
                        desc.path = full_mod_path
                        _type.registration_method(desc)
                    else:
                        logger.warning('Cannot load plugin. Expected an instance of '
                                       'Descriptor in %s', full_mod_path)
    except Exception as ex:
        logger.warning('Could not import %s: %s', full_mod_path, ex)
        logger.debug(ex, exc_info=True)


def _find_plugins(path: str) -> None:
    full_path = os.path.join(path, *PACKAGE)
    for mod in pkgutil.iter_modules(path=[full_path]):
        _load_plugins(full_path, mod)


_seen_paths: Set[str] = set()


for _path in sys.path:
    _path = os.path.realpath(_path)
    if _path in _seen_paths:
        logger.debug('Ignoring duplicate entry in sys.path: %s', _path)
        continue
    _seen_paths.add(_path)
    _find_plugins(_path)
