"""This module contains the `ffmpeg` based :class:`~scenemap.frame_source.FrameSource`."""
import json
import logging
import shlex
import subprocess
import tempfile
from fractions import Fraction
from typing import List, Iterator, Optional, IO, Dict, Any

import numpy as np
import psutil

from scenemap.exceptions import UnreadableSourceException, TruncatedStreamException
from scenemap.frame_source import FrameSource
from scenemap.frame_spec import Frame, FrameSpec, VideoMeta


logger = logging.getLogger(__name__)

_PROBE_TIMEOUT = 60


def _format_shell_cmd(args: List[str]) -> str:
    """Formats an argument list in a way that allows it to be pasted in a shell."""
    return ' '.join(shlex.quote(arg) for arg in args)


def _kill(process: 'subprocess.Popen[bytes]') -> None:
    if process.poll() is not None:
        return
    try:
        root = psutil.Process(process.pid)
        for proc in root.children(recursive=True):
            proc.kill()
    except psutil.NoSuchProcess:
        pass
    process.kill()
    process.wait()


def _parse_rate(rate: Optional[str]) -> Optional[float]:
    # ffprobe reports rates as fractions, such as "30000/1001"; "0/0" means unknown
    if not rate:
        return None
    try:
        r = Fraction(rate)
    except (ValueError, ZeroDivisionError):
        return None
    if r <= 0:
        return None
    return float(r)


def _read_tail(f: IO[bytes], limit: int = 2048) -> str:
    f.seek(0)
    data = f.read()
    return data[-limit:].decode('utf-8', errors='replace').strip()


class FFmpegFrameSource(FrameSource):
    """
    A frame source that decodes videos with an external `ffmpeg` process.

    The video is probed with `ffprobe`. Frames are decoded by `ffmpeg`, which resamples them to
    the sampling rate, scales them to the frame dimensions using its default scaler, and writes
    them to a pipe as raw interleaved RGB. No codec library is linked into this process.
    """

    def __init__(self, path: str, spec: FrameSpec, ffmpeg: str = 'ffmpeg',
                 ffprobe: str = 'ffprobe') -> None:
        """
        :param path: The path of the video file.
        :param spec: The requested frame specification.
        :param ffmpeg: The `ffmpeg` executable.
        :param ffprobe: The `ffprobe` executable.
        """
        super().__init__(path, spec)
        self.ffmpeg = ffmpeg
        self.ffprobe = ffprobe

    def _probe_args(self) -> List[str]:
        return [self.ffprobe, '-v', 'error', '-select_streams', 'v:0',
                '-show_entries', 'format=duration:stream=duration,r_frame_rate,avg_frame_rate',
                '-of', 'json', self.path]

    def _decode_args(self) -> List[str]:
        spec = self.spec
        return [self.ffmpeg, '-nostdin', '-v', 'error', '-i', self.path, '-map', '0:v:0',
                '-vf', 'fps=%s,scale=%d:%d' % (Fraction(spec.sampling_fps).limit_denominator(),
                                               spec.width, spec.height),
                '-f', 'rawvideo', '-pix_fmt', 'rgb24', '-']

    def _probe(self) -> VideoMeta:
        args = self._probe_args()
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug('Running %s', _format_shell_cmd(args))
        try:
            p = subprocess.run(args, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                               timeout=_PROBE_TIMEOUT)
        except (OSError, subprocess.TimeoutExpired) as ex:
            raise UnreadableSourceException('Failed to run %s' % self.ffprobe, exception=ex,
                                            transient=isinstance(ex, subprocess.TimeoutExpired))
        if p.returncode != 0:
            raise UnreadableSourceException('Cannot probe %s: %s'
                                            % (self.path, p.stderr.decode('utf-8', 'replace')
                                               .strip()),
                                            transient=p.returncode < 0)
        try:
            info: Dict[str, Any] = json.loads(p.stdout.decode('utf-8'))
        except ValueError as ex:
            raise UnreadableSourceException('Cannot parse probe output for %s' % self.path,
                                            exception=ex)
        streams = info.get('streams') or []
        if not streams:
            raise UnreadableSourceException('%s contains no video stream' % self.path)
        stream = streams[0]
        duration = info.get('format', {}).get('duration') or stream.get('duration')
        try:
            duration_sec = float(duration)
        except (TypeError, ValueError):
            duration_sec = 0.0
        if not duration_sec > 0:
            raise UnreadableSourceException('Cannot determine the duration of %s' % self.path)
        fps = _parse_rate(stream.get('avg_frame_rate')) or _parse_rate(stream.get('r_frame_rate'))
        return VideoMeta(duration_sec, self.path, fps)

    def _start(self, err: IO[bytes]) -> 'subprocess.Popen[bytes]':
        args = self._decode_args()
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug('Running %s', _format_shell_cmd(args))
        try:
            return subprocess.Popen(args, stdin=subprocess.DEVNULL, stdout=subprocess.PIPE,
                                    stderr=err, close_fds=True)
        except OSError as ex:
            raise UnreadableSourceException('Failed to start %s' % self.ffmpeg, exception=ex)

    def _generate(self) -> Iterator[Frame]:
        # not a generator itself, so that a decoder that cannot be started fails in frames()
        err = tempfile.TemporaryFile()
        try:
            process = self._start(err)
        except UnreadableSourceException:
            err.close()
            raise
        return self._read_frames(process, err)

    def _read_frames(self, process: 'subprocess.Popen[bytes]', err: IO[bytes]) -> Iterator[Frame]:
        spec = self.spec
        size = spec.frame_size
        index = 0
        assert process.stdout is not None
        try:
            while True:
                data = process.stdout.read(size)
                if len(data) < size:
                    break
                pixels = np.frombuffer(data, dtype=np.uint8).reshape(spec.shape)
                yield Frame(index, spec.time_of(index), pixels)
                index += 1
            exit_code = process.wait()
            if index < self.frame_count:
                raise TruncatedStreamException('Decoder for %s exited with code %s after %s of '
                                               '%s frames: %s'
                                               % (self.path, exit_code, index, self.frame_count,
                                                  _read_tail(err)),
                                               self.frame_count, index)
        finally:
            _kill(process)
            if process.stdout is not None:
                process.stdout.close()
            err.close()
