"""
A frame source that reads raw-frame sequences from a directory.

A raw-frame sequence is a directory containing a `meta.json` file and one file per frame::

    meta.json
    frame_000000.rgb
    frame_000001.rgb
    ...

`meta.json` holds the keys `width`, `height`, `sampling_fps`, and `frame_count`, and, optionally,
`duration_sec` (which otherwise defaults to `frame_count / sampling_fps`). Each frame file holds
exactly `width * height * 3` bytes of interleaved RGB, row-major, with the origin in the top-left
corner. Frames are used as stored; they are never rescaled.
"""
import json
import logging
from pathlib import Path
from typing import Iterator, Sequence, Dict, Union, Iterable, Optional

import numpy as np

from scenemap.exceptions import UnreadableSourceException, TruncatedStreamException, \
    OutputException
from scenemap.frame_source import FrameSource
from scenemap.frame_spec import Frame, FrameSpec, VideoMeta


logger = logging.getLogger(__name__)

META_FILE = 'meta.json'
FRAME_FILE_FORMAT = 'frame_%06d.rgb'


def frame_path(directory: Path, index: int) -> Path:
    """Returns the path of the file holding the frame with the given index."""
    return directory / (FRAME_FILE_FORMAT % index)


def is_raw_sequence(path: Union[str, Path]) -> bool:
    """Returns `True` if `path` is a directory containing a raw-frame sequence."""
    p = Path(path)
    return p.is_dir() and (p / META_FILE).is_file()


def write_raw_sequence(directory: Union[str, Path], spec: FrameSpec,
                       frames: Iterable[np.ndarray],
                       duration_sec: Optional[float] = None) -> int:
    """
    Writes a raw-frame sequence.

    :param directory: The directory to write to. It is created if it does not exist.
    :param spec: The geometry and sampling rate of the frames.
    :param frames: The pixel arrays, each of shape `spec.shape` and type `uint8`.
    :param duration_sec: An optional duration to record in `meta.json`.
    :return: The number of frames written.
    :raises OutputException: if the sequence cannot be written.
    """
    d = Path(directory)
    n = 0
    try:
        d.mkdir(parents=True, exist_ok=True)
        for pixels in frames:
            if pixels.shape != spec.shape or pixels.dtype != np.uint8:
                raise OutputException('Frame %s has shape %s %s; expected %s uint8'
                                      % (n, pixels.dtype, pixels.shape, spec.shape))
            frame_path(d, n).write_bytes(np.ascontiguousarray(pixels).tobytes())
            n += 1
        meta: Dict[str, object] = {'width': spec.width, 'height': spec.height,
                                   'sampling_fps': spec.sampling_fps, 'frame_count': n}
        if duration_sec is not None:
            meta['duration_sec'] = duration_sec
        with (d / META_FILE).open('w') as f:
            json.dump(meta, f, indent=2)
    except OSError as ex:
        raise OutputException('Could not write raw-frame sequence to %s' % d, exception=ex)
    logger.debug('Wrote %s frames to %s', n, d)
    return n


class RawFrameSource(FrameSource):
    """A :class:`~scenemap.frame_source.FrameSource` reading a raw-frame sequence directory."""

    def __init__(self, path: Union[str, Path], spec: Optional[FrameSpec] = None) -> None:
        """
        :param path: The directory containing the sequence.
        :param spec: The requested specification. Raw sequences are never rescaled or
            resampled, so the effective specification is always the one stored in `meta.json`.
        """
        super().__init__(str(path), spec if spec is not None else FrameSpec())
        self._dir = Path(path)
        self._frame_count = 0

    @property
    def random_access(self) -> bool:
        """Raw sequences support random access."""
        return True

    @property
    def frame_count(self) -> int:
        """Returns the `frame_count` value from `meta.json`."""
        self.probe()
        return self._frame_count

    def _probe(self) -> VideoMeta:
        meta_path = self._dir / META_FILE
        try:
            with meta_path.open('r') as f:
                meta = json.load(f)
            width = int(meta['width'])
            height = int(meta['height'])
            fps = float(meta['sampling_fps'])
            count = int(meta['frame_count'])
            duration = float(meta.get('duration_sec', count / fps))
            self._raw_spec = FrameSpec(width, height, fps)
        except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as ex:
            raise UnreadableSourceException('Cannot read raw-frame sequence metadata from %s'
                                            % meta_path, exception=ex)
        if count < 1:
            raise UnreadableSourceException('Raw-frame sequence %s contains no frames'
                                            % self._dir)
        self._frame_count = count
        if self._raw_spec != self._requested_spec:
            logger.debug('Using stored geometry %s for %s instead of %s', self._raw_spec,
                         self._dir, self._requested_spec)
        return VideoMeta(duration, str(self._dir), fps)

    def _effective_spec(self, meta: VideoMeta) -> FrameSpec:
        return self._raw_spec

    def _read(self, index: int) -> Frame:
        spec = self.spec
        p = frame_path(self._dir, index)
        try:
            data = p.read_bytes()
        except OSError as ex:
            raise TruncatedStreamException('Cannot read frame %s of %s' % (index, self._dir),
                                           self._frame_count, index, exception=ex)
        if len(data) != spec.frame_size:
            raise TruncatedStreamException('Frame file %s has %s bytes; expected %s'
                                           % (p, len(data), spec.frame_size),
                                           self._frame_count, index)
        pixels = np.frombuffer(data, dtype=np.uint8).reshape(spec.shape)
        return Frame(index, spec.time_of(index), pixels)

    def _generate(self) -> Iterator[Frame]:
        for i in range(self._frame_count):
            yield self._read(i)

    def iter_selected(self, indices: Sequence[int]) -> Iterator[Frame]:
        """Reads the requested frames directly, without reading the frames in between."""
        self.probe()
        for i in sorted(set(indices)):
            if 0 <= i < self._frame_count:
                yield self._read(i)
