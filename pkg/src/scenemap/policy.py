"""
The duration-based policy map.

A :class:`PolicyTable` is an ordered list of rules. Each rule has an upper duration bound, a
strategy (the name of a registered :class:`~scenemap.detector.SceneDetector`), and detector
parameters. A video of duration `D` is handled by the first rule whose bound `d` satisfies
`D <= d`; the last rule has no bound.
"""
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Dict, Any, Union, IO

from scenemap.detector import SceneDetector
from scenemap.detector_params import DetectorParams
from scenemap.exceptions import NonMonotoneDurationsException, MissingUnboundedRowException, \
    InvalidParameterException, PolicyParseException


logger = logging.getLogger(__name__)

#: The name of the strategy that uses two parameter sets.
FALLBACK = 'fallback'


class PolicyRule(object):
    """A row of a :class:`PolicyTable`."""

    def __init__(self, max_duration_sec: Optional[float], strategy: str, params: DetectorParams,
                 content_params: Optional[DetectorParams] = None) -> None:
        """
        :param max_duration_sec: The largest duration, in seconds, handled by this rule, or
            `None` if the rule has no upper bound.
        :param strategy: The name of the detector used by this rule.
        :param params: The detector parameters. For the fallback strategy these are the
            parameters of the adaptive pass.
        :param content_params: The parameters of the content pass of the fallback strategy. They
            default to the standard content parameters for fallback rules and must not be
            specified for other strategies.
        """
        if max_duration_sec is not None and math.isinf(max_duration_sec):
            max_duration_sec = None
        if max_duration_sec is not None and not max_duration_sec > 0:
            raise InvalidParameterException('Duration bounds must be positive; got %s'
                                            % max_duration_sec)
        self.max_duration_sec = None if max_duration_sec is None else float(max_duration_sec)
        self.strategy = strategy
        self.params = params
        if strategy == FALLBACK:
            self.content_params: Optional[DetectorParams] = \
                content_params if content_params is not None else DetectorParams()
        elif content_params is not None:
            raise InvalidParameterException('Only %s rules take content parameters' % FALLBACK)
        else:
            self.content_params = None

    @property
    def unbounded(self) -> bool:
        """Returns `True` if this rule has no upper duration bound."""
        return self.max_duration_sec is None

    def matches(self, duration_sec: float) -> bool:
        """Returns `True` if `duration_sec` does not exceed the bound of this rule."""
        return self.max_duration_sec is None or duration_sec <= self.max_duration_sec

    def __eq__(self, other: object) -> bool:
        """Compares two rules for equality."""
        if not isinstance(other, PolicyRule):
            return False
        return (self.max_duration_sec, self.strategy, self.params, self.content_params) == \
            (other.max_duration_sec, other.strategy, other.params, other.content_params)

    def __repr__(self) -> str:
        """Returns a string representation of this rule."""
        bound = 'inf' if self.max_duration_sec is None else '%g' % self.max_duration_sec
        if self.content_params is None:
            return 'PolicyRule(<= %s, %s, %s)' % (bound, self.strategy, self.params)
        return 'PolicyRule(<= %s, %s, %s, content=%s)' % (bound, self.strategy, self.params,
                                                          self.content_params)


class PolicyTable(object):
    """An immutable, ordered list of :class:`PolicyRule` objects."""

    def __init__(self, rules: Sequence[PolicyRule]) -> None:
        """
        :param rules: The rules, ordered by strictly increasing duration bound. The last rule
            must be unbounded.
        :raises NonMonotoneDurationsException: if the bounds are not strictly increasing.
        :raises MissingUnboundedRowException: if the last rule has a bound, or if there are no
            rules.
        """
        if len(rules) == 0:
            raise MissingUnboundedRowException('A policy table needs at least one rule')
        prev = 0.0
        for i, rule in enumerate(rules[:-1]):
            if rule.max_duration_sec is None:
                raise NonMonotoneDurationsException('Rule %s is unbounded but is not the last rule'
                                                    % i)
            if rule.max_duration_sec <= prev:
                raise NonMonotoneDurationsException('Rule %s has bound %s, which does not exceed '
                                                    'the previous bound %s'
                                                    % (i, rule.max_duration_sec, prev))
            prev = rule.max_duration_sec
        last = rules[-1]
        if last.max_duration_sec is not None:
            if last.max_duration_sec <= prev:
                raise NonMonotoneDurationsException('Rule %s has bound %s, which does not exceed '
                                                    'the previous bound %s'
                                                    % (len(rules) - 1, last.max_duration_sec,
                                                       prev))
            raise MissingUnboundedRowException('The last rule must be unbounded; it has bound %s'
                                               % last.max_duration_sec)
        self._rules = tuple(rules)

    @property
    def rules(self) -> Sequence[PolicyRule]:
        """The rules of this table."""
        return self._rules

    def lower_bound(self, index: int) -> float:
        """Returns the bound of the rule preceding the one with the given index, or zero."""
        if index == 0:
            return 0.0
        bound = self._rules[index - 1].max_duration_sec
        assert bound is not None
        return bound

    def __len__(self) -> int:
        """Returns the number of rules."""
        return len(self._rules)

    def __getitem__(self, index: int) -> PolicyRule:
        """Returns the rule with the given index."""
        return self._rules[index]

    def __eq__(self, other: object) -> bool:
        """Compares two tables for equality."""
        if not isinstance(other, PolicyTable):
            return False
        return self._rules == other._rules

    def __repr__(self) -> str:
        """Returns a string representation of this table."""
        return 'PolicyTable(%s)' % list(self._rules)


class MatchedRule(object):
    """Identifies the rule a :class:`PolicySpec` was resolved from."""

    def __init__(self, index: Optional[int], min_duration_sec: float,
                 max_duration_sec: Optional[float]) -> None:
        """
        :param index: The index of the rule in its table, or `None` if the strategy was forced.
        :param min_duration_sec: The exclusive lower bound of the durations the rule handles.
        :param max_duration_sec: The inclusive upper bound, or `None` if unbounded.
        """
        self.index = index
        self.min_duration_sec = min_duration_sec
        self.max_duration_sec = max_duration_sec

    def to_dict(self) -> Dict[str, Any]:
        """Returns a dictionary representation of this descriptor."""
        return {'index': self.index, 'min_duration_sec': self.min_duration_sec,
                'max_duration_sec': self.max_duration_sec}

    def __str__(self) -> str:
        """Returns the duration range in the form `a < D <= b`."""
        if self.index is None:
            return 'forced'
        upper = 'inf' if self.max_duration_sec is None else '%g' % self.max_duration_sec
        return '%g < D <= %s' % (self.min_duration_sec, upper)

    def __repr__(self) -> str:
        """Returns a string representation of this descriptor."""
        return 'MatchedRule(%s: %s)' % (self.index, self)


class PolicySpec(object):
    """A resolved strategy together with its parameters."""

    def __init__(self, strategy: str, params: DetectorParams,
                 matched_rule: Optional[MatchedRule] = None,
                 content_params: Optional[DetectorParams] = None) -> None:
        """
        :param strategy: The detector name.
        :param params: The detector parameters.
        :param matched_rule: The rule this specification comes from.
        :param content_params: The content pass parameters, for the fallback strategy.
        """
        self.strategy = strategy
        self.params = params
        self.matched_rule = matched_rule if matched_rule is not None \
            else MatchedRule(None, 0.0, None)
        self.content_params = content_params

    def with_overrides(self, threshold: Optional[float] = None,
                       minlen_sec: Optional[float] = None,
                       interval_sec: Optional[float] = None,
                       smoothing_window: Optional[int] = None,
                       adaptive_window: Optional[int] = None,
                       min_content_score: Optional[float] = None,
                       content_threshold: Optional[float] = None) -> 'PolicySpec':
        """
        Returns a copy of this specification with some parameters replaced.

        `threshold` applies to the primary parameters (the adaptive pass of a fallback);
        `content_threshold` applies to the content pass of a fallback. The remaining values
        apply to both parameter sets.
        """
        common = {'minlen_sec': minlen_sec, 'interval_sec': interval_sec,
                  'smoothing_window': smoothing_window, 'adaptive_window': adaptive_window,
                  'min_content_score': min_content_score}
        params = self.params.replace(threshold=threshold, **common)
        content_params = None
        if self.content_params is not None:
            content_params = self.content_params.replace(threshold=content_threshold, **common)
        return PolicySpec(self.strategy, params, self.matched_rule, content_params)

    def to_dict(self) -> Dict[str, Any]:
        """Returns a dictionary representation of this specification."""
        d: Dict[str, Any] = {'strategy': self.strategy, 'params': self.params.to_dict()}
        if self.content_params is not None:
            d['content_params'] = self.content_params.to_dict()
        d['matched_rule'] = str(self.matched_rule)
        return d

    def __eq__(self, other: object) -> bool:
        """Compares the strategy and parameters of two specifications."""
        if not isinstance(other, PolicySpec):
            return False
        return (self.strategy, self.params, self.content_params) == \
            (other.strategy, other.params, other.content_params)

    def __repr__(self) -> str:
        """Returns a string representation of this specification."""
        return 'PolicySpec(%s, %s, %r)' % (self.strategy, self.params, self.matched_rule)


def default_table() -> PolicyTable:
    """
    Returns the default policy table.

    ======================  =============  ==================================================
    Duration                Strategy       Parameters
    ======================  =============  ==================================================
    up to 2 min             adaptive       threshold 1.0, minlen 15 s
    up to 30 min            adaptive       threshold 1.2, minlen 15 s
    up to 2 h               fallback       adaptive threshold 1.4, content threshold 15,
                                           minlen 15 s for both passes
    up to 3 h               content        threshold 12.0, minlen 15 s
    longer                  regular_split  interval 30 s
    ======================  =============  ==================================================
    """
    return PolicyTable([
        PolicyRule(120, 'adaptive', DetectorParams(threshold=1.0, minlen_sec=15)),
        PolicyRule(1800, 'adaptive', DetectorParams(threshold=1.2, minlen_sec=15)),
        PolicyRule(7200, FALLBACK, DetectorParams(threshold=1.4, minlen_sec=15),
                   DetectorParams(threshold=15, minlen_sec=15)),
        PolicyRule(10800, 'content', DetectorParams(threshold=12.0, minlen_sec=15)),
        PolicyRule(None, 'regular_split', DetectorParams(interval_sec=30)),
    ])


def _spec(table: PolicyTable, index: int) -> PolicySpec:
    rule = table[index]
    return PolicySpec(rule.strategy, rule.params,
                      MatchedRule(index, table.lower_bound(index), rule.max_duration_sec),
                      rule.content_params)


def resolve(duration_sec: float, table: Optional[PolicyTable] = None) -> PolicySpec:
    """
    Selects the rule for a video of a given duration.

    :param duration_sec: The video duration. Must be positive.
    :param table: The policy table; defaults to :func:`default_table`.
    :return: The strategy and parameters of the first rule whose bound is at least
        `duration_sec`.
    """
    if not duration_sec > 0:
        raise InvalidParameterException('Duration must be positive; got %s' % duration_sec)
    if table is None:
        table = default_table()
    for i, rule in enumerate(table.rules):
        if rule.matches(duration_sec):
            return _spec(table, i)
    raise AssertionError('The last rule of a policy table must be unbounded')


def resolve_strategy(strategy: str, table: Optional[PolicyTable] = None) -> PolicySpec:
    """
    Returns the parameters to use when a strategy is chosen explicitly.

    The parameters come from the first rule of `table` with that strategy or, if there is no such
    rule, from the first such rule of the default table. Strategy aliases are accepted.

    :raises InvalidParameterException: if no detector with that name is registered.
    """
    name = SceneDetector.canonical_name(strategy)
    for t in ([table] if table is not None else []) + [default_table()]:
        for i, rule in enumerate(t.rules):
            if rule.strategy == name:
                spec = _spec(t, i)
                spec.matched_rule = MatchedRule(None, 0.0, None)
                return spec
    content_params = DetectorParams() if name == FALLBACK else None
    return PolicySpec(name, DetectorParams(), None, content_params)


def load_table(config: Union[str, Path, IO[str], Dict[str, Any]]) -> PolicyTable:
    """
    Loads a policy table.

    :param config: A path to a JSON policy file, an open text stream, or an already parsed
        dictionary. See `docs/policy.rst` for the format.
    :raises PolicyParseException: if the configuration cannot be parsed.
    :raises NonMonotoneDurationsException: if the duration bounds are not strictly increasing.
    :raises MissingUnboundedRowException: if the last rule has a bound.
    """
    from scenemap.serialize import JSONSerializer

    s = JSONSerializer()
    if isinstance(config, dict):
        return s.from_dict(config)
    if isinstance(config, (str, Path)):
        try:
            with open(config, 'r') as f:
                table = s.load(f)
        except OSError as ex:
            raise PolicyParseException('Cannot read policy file %s' % config, exception=ex)
        logger.debug('Loaded policy table from %s: %s', config, table)
        return table
    return s.load(config)


def dump_table(table: PolicyTable, dest: Optional[Union[str, Path, IO[str]]] = None) -> str:
    """
    Serializes a policy table to JSON.

    :param table: The table to serialize.
    :param dest: An optional path or text stream to write the JSON to.
    :return: The JSON text.
    """
    from scenemap.serialize import JSONSerializer

    text = JSONSerializer().dumps(table)
    if isinstance(dest, (str, Path)):
        with open(dest, 'w') as f:
            f.write(text)
    elif dest is not None:
        dest.write(text)
    return text

