"""
Keyframe selection.

A few equidistant candidate frames are sampled from each scene. Each candidate is scored on
sharpness and brightness, both scores are standardized over the candidates of the scene, and the
candidate with the highest weighted sum wins.
"""
import logging
import math
from typing import List, Sequence, Callable, Mapping, Optional, Dict, Any, Union

import numpy as np
from typeguard import typechecked

from scenemap.exceptions import InvalidParameterException, LengthMismatchException, \
    EmptyInputException, CandidateFetchException
from scenemap.frame_spec import Frame
from scenemap.metrics import brightness, sharpness, _zscore
from scenemap.scene import Scene


logger = logging.getLogger(__name__)

#: A function returning the frames with the given indices.
FrameFetcher = Callable[[Sequence[int]], Mapping[int, Frame]]


class KeyframeWeights(object):
    """The weights and candidate count used to select keyframes."""

    @typechecked
    def __init__(self, w_sharp: Union[int, float] = 0.7, w_bright: Union[int, float] = 0.3,
                 n_candidates: int = 5) -> None:
        """
        :param w_sharp: The weight of the standardized sharpness score.
        :param w_bright: The weight of the standardized brightness score.
        :param n_candidates: The number of candidate frames sampled from each scene.

        All constructor parameters are accessible as properties.
        """
        if w_sharp < 0 or w_bright < 0 or not w_sharp + w_bright > 0:
            raise InvalidParameterException('Weights must be non-negative and not both zero; '
                                            'got %s, %s' % (w_sharp, w_bright))
        if n_candidates < 1:
            raise InvalidParameterException('At least one candidate is needed; got %s'
                                            % n_candidates)
        self._w_sharp = float(w_sharp)
        self._w_bright = float(w_bright)
        self._n_candidates = n_candidates

    @property
    def w_sharp(self) -> float:
        """The sharpness weight."""
        return self._w_sharp

    @property
    def w_bright(self) -> float:
        """The brightness weight."""
        return self._w_bright

    @property
    def n_candidates(self) -> int:
        """The number of candidates per scene."""
        return self._n_candidates

    def to_dict(self) -> Dict[str, Any]:
        """Returns a dictionary representation of these weights."""
        return {'w_sharp': self._w_sharp, 'w_bright': self._w_bright,
                'n_candidates': self._n_candidates}

    def __eq__(self, other: object) -> bool:
        """Compares two sets of weights."""
        if not isinstance(other, KeyframeWeights):
            return False
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        """Returns a string representation of these weights."""
        return 'KeyframeWeights(sharp=%s, bright=%s, n=%s)' % (self._w_sharp, self._w_bright,
                                                             self._n_candidates)


class KeyframeRecord(object):
    """The keyframe chosen for a scene."""

    def __init__(self, scene_index: int, frame_index: int, time_sec: float, brightness: float,
                 sharpness: float, combined_score: float, candidate_count: int,
                 thumbnail: Optional[str] = None, frame: Optional[Frame] = None) -> None:
        """
        :param scene_index: The index of the scene.
        :param frame_index: The sampled-frame index of the keyframe.
        :param time_sec: The time of the keyframe, in seconds.
        :param brightness: The raw brightness of the keyframe.
        :param sharpness: The raw sharpness of the keyframe.
        :param combined_score: The weighted standardized score of the keyframe. It is only
            meaningful relative to the other candidates of the same scene.
        :param candidate_count: The number of candidates the keyframe was chosen from.
        :param thumbnail: The name of the thumbnail file, once written.
        :param frame: The keyframe pixels. They are kept until the thumbnail is written and are
            never serialized.
        """
        if candidate_count < 1:
            raise InvalidParameterException('Candidate count must be positive')
        self.scene_index = scene_index
        self.frame_index = frame_index
        self.time_sec = time_sec
        self.brightness = brightness
        self.sharpness = sharpness
        self.combined_score = combined_score
        self.candidate_count = candidate_count
        self.thumbnail = thumbnail
        self.frame = frame

    def to_dict(self) -> Dict[str, Any]:
        """Returns the serialized fields of this record, in a stable order."""
        return {'frame_index': self.frame_index, 'time_sec': self.time_sec,
                'brightness': self.brightness, 'sharpness': self.sharpness,
                'combined_score': self.combined_score, 'thumbnail': self.thumbnail,
                'candidate_count': self.candidate_count}

    @staticmethod
    def from_dict(scene_index: int, d: Dict[str, Any]) -> 'KeyframeRecord':
        """Creates a record from the output of :meth:`to_dict`."""
        return KeyframeRecord(scene_index, int(d['frame_index']), float(d['time_sec']),
                              float(d['brightness']), float(d['sharpness']),
                              float(d['combined_score']), int(d.get('candidate_count', 1)),
                              d.get('thumbnail'))

    def __repr__(self) -> str:
        """Returns a string representation of this record."""
        return 'KeyframeRecord(scene=%s, frame=%s, score=%.4f)' % (self.scene_index,
                                                                   self.frame_index,
                                                                   self.combined_score)


def sample_indices(scene: Scene, n: int) -> List[int]:
    """
    Returns up to `n` equidistant frame indices of a scene.

    The first and last frames of the scene are included. If the scene holds at most `n` frames,
    all of them are returned; if `n` is one, the middle frame is returned.
    """
    if n < 1:
        raise InvalidParameterException('At least one candidate is needed; got %s' % n)
    start, end = scene.start_frame, scene.end_frame
    if end - start <= n:
        return list(range(start, end))
    if n == 1:
        return [(start + end - 1) // 2]
    step = (end - 1 - start) / (n - 1)
    r: List[int] = []
    for i in range(n):
        f = int(math.floor(start + i * step + 0.5))
        if f not in r:
            r.append(f)
    return r


def combined_scores(brightness_scores: Sequence[float], sharpness_scores: Sequence[float],
                    weights: KeyframeWeights) -> np.ndarray:
    """
    Returns the weighted sum of the standardized sharpness and brightness scores.

    :raises LengthMismatchException: if the arrays differ in length.
    :raises EmptyInputException: if the arrays are empty.
    """
    b = np.asarray(brightness_scores, dtype=np.float64)
    s = np.asarray(sharpness_scores, dtype=np.float64)
    if len(b) != len(s):
        raise LengthMismatchException('Got %s brightness scores and %s sharpness scores'
                                      % (len(b), len(s)))
    if len(b) == 0:
        raise EmptyInputException('No candidates to choose from')
    return weights.w_sharp * _zscore(s) + weights.w_bright * _zscore(b)


def choose_best_frame(brightness_scores: Sequence[float], sharpness_scores: Sequence[float],
                      weights: Optional[KeyframeWeights] = None) -> int:
    """
    Returns the index of the best candidate.

    Ties are resolved in favor of the lowest index.

    :param brightness_scores: The brightness of each candidate.
    :param sharpness_scores: The sharpness of each candidate.
    :param weights: The weights; defaults to `KeyframeWeights()`.
    :raises LengthMismatchException: if the arrays differ in length.
    :raises EmptyInputException: if the arrays are empty.
    """
    if weights is None:
        weights = KeyframeWeights()
    return int(np.argmax(combined_scores(brightness_scores, sharpness_scores, weights)))


def extract_keyframe(scene: Scene, fetch: Union[FrameFetcher, Mapping[int, Frame]],
                     weights: Optional[KeyframeWeights] = None) -> KeyframeRecord:
    """
    Selects the keyframe of a scene.

    :param scene: The scene.
    :param fetch: A function returning the frames with the given indices, such as
        :meth:`~scenemap.frame_source.FrameSource.fetch`, or a mapping from indices to frames.
    :param weights: The selection weights; defaults to `KeyframeWeights()`.
    :return: A record holding the raw scores of the winning candidate and its pixels.
    :raises CandidateFetchException: if the candidate frames cannot be obtained.
    """
    if weights is None:
        weights = KeyframeWeights()
    indices = sample_indices(scene, weights.n_candidates)
    try:
        frames = fetch(indices) if callable(fetch) else fetch
        candidates = [frames[i] for i in indices]
    except KeyError as ex:
        raise CandidateFetchException('Frame %s of scene %s is not available' % (ex, scene.index))
    b = [brightness(f) for f in candidates]
    s = [sharpness(f) for f in candidates]
    combined = combined_scores(b, s, weights)
    best = int(np.argmax(combined))
    logger.debug('Scene %s: candidates %s, combined %s, best %s', scene.index, indices,
                 combined, indices[best])
    winner = candidates[best]
    return KeyframeRecord(scene.index, winner.index, winner.time_sec, b[best], s[best],
                          float(combined[best]), len(candidates), frame=winner)
