"""
Synthetic frame sequences with known scene cuts.

A synthetic sequence is described by a list of blocks, each with a duration and a fill. The
following fills are understood:

* an `(r, g, b)` tuple, or a color name such as `"black"` or `"white"`: a solid color;
* `"noise:<seed>"`: a fixed pseudo-random image, drawn with `numpy.random.default_rng(seed)`;
* `"crossfade:<from>:<to>"`: a linear transition between two colors over the block.

Each block occupies `ceil(duration * sampling_fps)` sampled frames (at least one). The planted
cuts are the indices of the first frame of every block except the first.
"""
import logging
from pathlib import Path
from typing import Tuple, Union, List, Sequence, Iterator, Dict, Optional

import numpy as np

from scenemap.exceptions import InvalidParameterException
from scenemap.frame_source import FrameSource
from scenemap.frame_spec import Frame, FrameSpec, VideoMeta
from scenemap.sources.raw import write_raw_sequence


logger = logging.getLogger(__name__)

RGB = Tuple[int, int, int]
Fill = Union[RGB, str]

COLORS: Dict[str, RGB] = {
    'black': (0, 0, 0),
    'white': (255, 255, 255),
    'gray': (128, 128, 128),
    'grey': (128, 128, 128),
    'red': (255, 0, 0),
    'green': (0, 255, 0),
    'blue': (0, 0, 255),
    'yellow': (255, 255, 0),
    'cyan': (0, 255, 255),
    'magenta': (255, 0, 255),
}


def parse_color(s: str) -> RGB:
    """Parses a color name or an `r,g,b` / `r/g/b` triple."""
    s = s.strip().lower()
    if s in COLORS:
        return COLORS[s]
    parts = s.replace('/', ',').split(',')
    if len(parts) == 3:
        try:
            rgb = tuple(int(p) for p in parts)
        except ValueError:
            rgb = ()
        if len(rgb) == 3 and all(0 <= c <= 255 for c in rgb):
            return rgb  # type: ignore
    raise InvalidParameterException('Unknown color "%s"' % s)


class Block(object):
    """A run of frames with a common fill."""

    def __init__(self, duration_sec: float, fill: Fill) -> None:
        """
        :param duration_sec: The duration of the block, in seconds. Must be positive.
        :param fill: See the module documentation.
        """
        if not duration_sec > 0:
            raise InvalidParameterException('Block duration must be positive; got %s'
                                            % duration_sec)
        self.duration_sec = float(duration_sec)
        self.fill = fill
        self._kind, self._args = self._parse(fill)

    @staticmethod
    def _parse(fill: Fill) -> Tuple[str, Tuple[object, ...]]:
        if isinstance(fill, tuple):
            if len(fill) != 3 or not all(isinstance(c, int) and 0 <= c <= 255 for c in fill):
                raise InvalidParameterException('Invalid RGB fill: %s' % (fill, ))
            return 'solid', (fill, )
        if fill.startswith('noise:'):
            try:
                return 'noise', (int(fill[6:]), )
            except ValueError:
                raise InvalidParameterException('Invalid noise seed in "%s"' % fill)
        if fill.startswith('crossfade:'):
            parts = fill.split(':')
            if len(parts) != 3:
                raise InvalidParameterException('Expected crossfade:<from>:<to>; got "%s"'
                                                % fill)
            return 'crossfade', (parse_color(parts[1]), parse_color(parts[2]))
        return 'solid', (parse_color(fill), )

    def frame_count(self, spec: FrameSpec) -> int:
        """Returns the number of sampled frames in this block."""
        return spec.frame_count(self.duration_sec)

    def render(self, spec: FrameSpec) -> Iterator[np.ndarray]:
        """Yields the pixel arrays of the frames of this block."""
        n = self.frame_count(spec)
        if self._kind == 'solid':
            pixels = np.empty(spec.shape, dtype=np.uint8)
            pixels[:, :] = self._args[0]
            for _ in range(n):
                yield pixels
        elif self._kind == 'noise':
            rng = np.random.default_rng(self._args[0])
            pixels = rng.integers(0, 256, size=spec.shape, dtype=np.uint8)
            for _ in range(n):
                yield pixels
        else:
            start = np.array(self._args[0], dtype=np.float64)
            end = np.array(self._args[1], dtype=np.float64)
            for j in range(n):
                a = j / (n - 1) if n > 1 else 0.0
                color = np.rint(start + (end - start) * a).astype(np.uint8)
                pixels = np.empty(spec.shape, dtype=np.uint8)
                pixels[:, :] = color
                yield pixels

    def __repr__(self) -> str:
        """Returns a string representation of this block."""
        return 'Block(%ss, %s)' % (self.duration_sec, self.fill)


BlockLike = Union[Block, Tuple[float, Fill]]


def _to_blocks(blocks: Sequence[BlockLike]) -> List[Block]:
    if len(blocks) == 0:
        raise InvalidParameterException('At least one block is required')
    return [b if isinstance(b, Block) else Block(b[0], b[1]) for b in blocks]


def planted_cuts(blocks: Sequence[BlockLike], spec: FrameSpec) -> List[int]:
    """Returns the index of the first frame of every block except the first."""
    cuts = []
    start = 0
    for block in _to_blocks(blocks):
        if start > 0:
            cuts.append(start)
        start += block.frame_count(spec)
    return cuts


def render_blocks(blocks: Sequence[BlockLike], spec: FrameSpec) -> Iterator[np.ndarray]:
    """Yields the pixel arrays of all the frames of a block sequence."""
    for block in _to_blocks(blocks):
        yield from block.render(spec)


def generate_synthetic(blocks: Sequence[BlockLike], spec: FrameSpec,
                       out_dir: Union[str, Path]) -> List[int]:
    """
    Writes a synthetic raw-frame sequence and returns its planted cuts.

    :param blocks: The blocks making up the sequence, as :class:`Block` instances or
        `(duration_sec, fill)` tuples.
    :param spec: The frame geometry and sampling rate.
    :param out_dir: The directory to write the sequence to (see :mod:`scenemap.sources.raw`).
    :return: The sampled-frame indices at which a new block starts.
    :raises OutputException: if the sequence cannot be written.
    """
    bs = _to_blocks(blocks)
    duration = sum(b.duration_sec for b in bs)
    write_raw_sequence(out_dir, spec, render_blocks(bs, spec), duration_sec=duration)
    cuts = planted_cuts(bs, spec)
    logger.debug('Generated %s blocks in %s; cuts at %s', len(bs), out_dir, cuts)
    return cuts


class SyntheticFrameSource(FrameSource):
    """
    An in-memory :class:`~scenemap.frame_source.FrameSource` over a block sequence.

    Frames are rendered on demand, which makes it possible to process synthetic videos that
    would be impractical to store on disk, such as multi-hour sequences.
    """

    def __init__(self, blocks: Sequence[BlockLike], spec: Optional[FrameSpec] = None,
                 name: str = 'synthetic', duration_sec: Optional[float] = None) -> None:
        """
        :param blocks: The blocks making up the sequence.
        :param spec: The frame geometry and sampling rate.
        :param name: The name reported as the source path.
        :param duration_sec: An optional duration that overrides the sum of the block
            durations in the reported metadata.
        """
        super().__init__(name, spec if spec is not None else FrameSpec())
        self.blocks = _to_blocks(blocks)
        self._duration = duration_sec if duration_sec is not None \
            else sum(b.duration_sec for b in self.blocks)
        self._counts = [b.frame_count(self._requested_spec) for b in self.blocks]

    @property
    def random_access(self) -> bool:
        """Synthetic sequences support random access."""
        return True

    @property
    def frame_count(self) -> int:
        """Returns the total number of frames of all blocks."""
        return sum(self._counts)

    @property
    def cuts(self) -> List[int]:
        """Returns the planted cuts of this sequence."""
        return planted_cuts(self.blocks, self._requested_spec)

    def _probe(self) -> VideoMeta:
        return VideoMeta(self._duration, self.path, None)

    def _generate(self) -> Iterator[Frame]:
        spec = self.spec
        for i, pixels in enumerate(render_blocks(self.blocks, spec)):
            yield Frame(i, spec.time_of(i), pixels)

    def iter_selected(self, indices: Sequence[int]) -> Iterator[Frame]:
        """Renders only the blocks containing the requested frames."""
        spec = self.spec
        wanted = sorted(set(i for i in indices if 0 <= i < self.frame_count))
        start = 0
        k = 0
        for block, count in zip(self.blocks, self._counts):
            if k >= len(wanted):
                break
            if wanted[k] < start + count:
                for j, pixels in enumerate(block.render(spec)):
                    while k < len(wanted) and wanted[k] == start + j:
                        yield Frame(start + j, spec.time_of(start + j), pixels)
                        k += 1
            start += count
