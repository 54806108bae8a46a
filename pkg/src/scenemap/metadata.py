"""
Writing and reading the per-video metadata file, `scenes.json`, and the keyframe thumbnails.

The metadata file is written with a fixed key order and without timing information, so that
processing the same input twice with the same configuration produces identical files.
"""
import json
import logging
from pathlib import Path
from typing import Union, Dict, Any, List, Optional, Tuple, TYPE_CHECKING

import cv2

from scenemap.exceptions import OutputException, SceneMapException
from scenemap.keyframes import KeyframeRecord
from scenemap.scene import Scene

if TYPE_CHECKING:
    from scenemap.pipeline import SegmentationResult


logger = logging.getLogger(__name__)

METADATA_FILE = 'scenes.json'
THUMBNAIL_FORMAT = 'scene_%04d.png'


def thumbnail_name(scene_index: int) -> str:
    """Returns the file name of the thumbnail of a scene."""
    return THUMBNAIL_FORMAT % scene_index


def to_document(result: 'SegmentationResult') -> Dict[str, Any]:
    """Returns the contents of the metadata file of a result as a dictionary."""
    policy = result.policy.to_dict()
    policy_block: Dict[str, Any] = {'strategy': policy['strategy'],
                                    'used_strategy': result.used_strategy}
    policy_block.update((k, v) for k, v in policy.items() if k != 'strategy')
    scenes = []
    for scene in result.scenes:
        d = scene.to_dict()
        kf = result.keyframe_for(scene.index)
        d['keyframe'] = kf.to_dict() if kf is not None else None
        scenes.append(d)
    return {
        'video': {'path': result.video.source_path,
                  'duration_sec': result.video.duration_sec,
                  'sampling_fps': result.spec.sampling_fps,
                  'frame_width': result.spec.width,
                  'frame_height': result.spec.height},
        'policy': policy_block,
        'scenes': scenes,
        'diagnostics': result.diagnostics.to_dict()
    }


def write_thumbnails(result: 'SegmentationResult', out_dir: Path) -> int:
    """
    Writes a PNG thumbnail for every keyframe whose pixels are still held by the result.

    :return: The number of thumbnails written.
    :raises OutputException: if a thumbnail cannot be written.
    """
    n = 0
    for kf in result.keyframes:
        if kf.frame is None:
            continue
        name = thumbnail_name(kf.scene_index)
        path = out_dir / name
        bgr = cv2.cvtColor(kf.frame.pixels, cv2.COLOR_RGB2BGR)
        try:
            ok = cv2.imwrite(str(path), bgr)
        except cv2.error as ex:
            raise OutputException('Could not write thumbnail %s' % path, exception=ex)
        if not ok:
            raise OutputException('Could not write thumbnail %s' % path)
        kf.thumbnail = name
        n += 1
    return n


def write_metadata(result: 'SegmentationResult', out_dir: Union[str, Path],
                   thumbnails: bool = True) -> Path:
    """
    Writes the metadata file and the thumbnails of a result.

    :param result: The result to write.
    :param out_dir: The output directory. It is created if it does not exist.
    :param thumbnails: Whether to write keyframe thumbnails. If `False`, the `thumbnail` fields
        of the keyframes are `null`.
    :return: The path of the metadata file.
    :raises OutputException: if the directory or any of the files cannot be written.
    """
    d = Path(out_dir)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as ex:
        raise OutputException('Could not create output directory %s' % d, exception=ex)
    if thumbnails:
        n = write_thumbnails(result, d)
        logger.debug('Wrote %s thumbnails to %s', n, d)
    else:
        for kf in result.keyframes:
            kf.thumbnail = None
    path = d / METADATA_FILE
    try:
        with path.open('w') as f:
            json.dump(to_document(result), f, indent=2)
            f.write('\n')
    except OSError as ex:
        raise OutputException('Could not write %s' % path, exception=ex)
    return path


def read_metadata(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Reads a metadata file.

    :param path: The metadata file or the directory holding it.
    :raises SceneMapException: if the file cannot be read or parsed.
    """
    p = Path(path)
    if p.is_dir():
        p = p / METADATA_FILE
    try:
        with p.open('r') as f:
            doc = json.load(f)
    except (OSError, ValueError) as ex:
        raise SceneMapException('Could not read %s' % p, exception=ex)
    if not isinstance(doc, dict) or 'scenes' not in doc:
        raise SceneMapException('%s is not a scene metadata file' % p)
    return doc


def read_scenes(path: Union[str, Path]) -> Tuple[List[Scene], List[Optional[KeyframeRecord]]]:
    """
    Reads the scenes and keyframes stored in a metadata file.

    :return: The scenes and, for each scene, its keyframe or `None`.
    """
    doc = read_metadata(path)
    scenes = []
    keyframes: List[Optional[KeyframeRecord]] = []
    for d in doc['scenes']:
        scene = Scene.from_dict(d)
        scenes.append(scene)
        kf = d.get('keyframe')
        keyframes.append(KeyframeRecord.from_dict(scene.index, kf) if kf is not None else None)
    return scenes, keyframes
