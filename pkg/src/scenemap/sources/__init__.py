"""Frame sources: `ffmpeg` decoding, raw-frame sequences, and synthetic sequences."""
import os
from pathlib import Path
from typing import Union, Optional, Tuple

from scenemap.exceptions import UnreadableSourceException
from scenemap.frame_source import FrameSource, FrameStream
from scenemap.frame_spec import FrameSpec, VideoMeta
from scenemap.sources.ffmpeg import FFmpegFrameSource
from scenemap.sources.raw import RawFrameSource, is_raw_sequence, write_raw_sequence
from scenemap.sources.synthetic import SyntheticFrameSource, Block, generate_synthetic, \
    planted_cuts

__all__ = ['FFmpegFrameSource', 'RawFrameSource', 'SyntheticFrameSource', 'Block',
           'generate_synthetic', 'planted_cuts', 'write_raw_sequence', 'open_source',
           'open_stream', 'SourceLike']

SourceLike = Union[str, Path, FrameSource]


def open_source(source: SourceLike, spec: Optional[FrameSpec] = None,
                ffmpeg: str = 'ffmpeg', ffprobe: str = 'ffprobe') -> FrameSource:
    """
    Returns a frame source for a path.

    Directories holding a raw-frame sequence are read with a
    :class:`~scenemap.sources.raw.RawFrameSource`; files are decoded with an
    :class:`~scenemap.sources.ffmpeg.FFmpegFrameSource`. :class:`FrameSource` instances are
    returned unchanged.

    :raises UnreadableSourceException: if the path does not exist, or is a directory that does
        not hold a raw-frame sequence.
    """
    if isinstance(source, FrameSource):
        return source
    spec = spec if spec is not None else FrameSpec()
    path = Path(source)
    if path.is_dir():
        if not is_raw_sequence(path):
            raise UnreadableSourceException('%s is a directory, but not a raw-frame sequence'
                                            % path)
        return RawFrameSource(path, spec)
    if not path.is_file() or not os.access(path, os.R_OK):
        raise UnreadableSourceException('Cannot read %s' % path)
    return FFmpegFrameSource(str(path), spec, ffmpeg=ffmpeg, ffprobe=ffprobe)


def open_stream(source: SourceLike, spec: Optional[FrameSpec] = None,
                ffmpeg: str = 'ffmpeg',
                ffprobe: str = 'ffprobe') -> Tuple[FrameStream, VideoMeta]:
    """
    Probes a source and opens a stream over its frames.

    The metadata is obtained before streaming begins. Use :func:`open_source` directly when the
    effective frame specification is also needed.

    :raises UnreadableSourceException: if the source cannot be probed or decoded.
    """
    src = open_source(source, spec, ffmpeg, ffprobe)
    meta = src.probe()
    return src.frames(), meta
