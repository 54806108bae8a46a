"""
Reading and writing policy tables.

A :class:`Serializer` converts a :class:`~scenemap.policy.PolicyTable` to a plain dictionary
and back, and leaves the encoding of that dictionary to its subclasses.
:class:`JSONSerializer` is the encoding used for policy files.
"""
import inspect
import json
import math
import typing
from abc import ABC, abstractmethod
from io import StringIO, TextIOBase
from typing import Optional, Dict, IO, AnyStr, TextIO, Any

from scenemap.detector import SceneDetector
from scenemap.detector_params import DetectorParams
from scenemap.exceptions import PolicyParseException, InvalidParameterException
from scenemap.policy import PolicyTable, PolicyRule

_RULE_KEYS = ('max_duration_sec', 'strategy', 'params', 'content_params')
_UNBOUNDED = ('inf', 'infinity', '+inf')


class Serializer(ABC):
    """
    A base class for policy table serializers.

    This class converts a :class:`~scenemap.policy.PolicyTable` into an intermediate
    representation consisting of standard dictionaries and lists, where dictionary keys are
    strings and values are limited to dictionaries, lists, `str`, `int`, `float`, and `None`, and
    back. Only detector parameters that differ from their defaults are included. Concrete
    serializers extend this class and implement the `_dump_dict` and `_load_dict` methods, which
    convert the intermediate representation to the actual serialized format.
    """

    def dump(self, table: PolicyTable, stream: IO[AnyStr]) -> None:
        """
        Serialize the given :class:`~scenemap.policy.PolicyTable` and write the results to
        `stream`.

        :param table: The table to serialize.
        :param stream: A stream to write the serialized table to. Concrete serializers may
            require that the stream be a binary or text stream.
        """
        self._dump_dict(self.to_dict(table), stream)

    def load(self, stream: IO[AnyStr]) -> PolicyTable:
        """
        Deserialize the contents of a stream to a :class:`~scenemap.policy.PolicyTable`.

        :param stream: A stream to read the serialized table from.
        :return: The deserialized table.
        :raises PolicyParseException: if the contents cannot be parsed.
        """
        return self.from_dict(self._load_dict(stream))

    def dumps(self, table: PolicyTable) -> str:
        """Serialize the given :class:`~scenemap.policy.PolicyTable` to a string."""
        f = StringIO()
        self.dump(table, f)
        return f.getvalue()

    def loads(self, s: str) -> PolicyTable:
        """Deserialize a :class:`~scenemap.policy.PolicyTable` from a string."""
        f = StringIO(s)
        return self.load(f)

    @abstractmethod
    def _dump_dict(self, dict: Dict[str, object], stream: IO[AnyStr]) -> None:
        pass

    @abstractmethod
    def _load_dict(self, stream: IO[AnyStr]) -> Dict[str, object]:
        pass

    def to_dict(self, table: PolicyTable) -> Dict[str, object]:
        """Converts a table to the intermediate representation."""
        return {'rules': [self._from_rule(rule) for rule in table.rules]}

    def _from_rule(self, rule: PolicyRule) -> Dict[str, object]:
        r: Dict[str, object] = {'max_duration_sec': rule.max_duration_sec,
                                'strategy': rule.strategy,
                                'params': self._from_params(rule.params)}
        if rule.content_params is not None:
            r['content_params'] = self._from_params(rule.content_params)
        return r

    def _from_params(self, params: DetectorParams) -> Dict[str, object]:
        r = {}
        sig = inspect.signature(DetectorParams.__init__)
        for name, param in sig.parameters.items():
            if name == 'self':
                continue
            value = getattr(params, name)
            if value != param.default:
                # only explicitly serialize if it's not the default
                r[name] = value
        return r

    def from_dict(self, d: Dict[str, Any]) -> PolicyTable:
        """
        Converts the intermediate representation to a table.

        :raises PolicyParseException: if the representation contains unknown keys, unknown
            strategies, or values of the wrong type.
        :raises NonMonotoneDurationsException: if the duration bounds are not strictly increasing.
        :raises MissingUnboundedRowException: if the last rule has a bound.
        """
        if not isinstance(d, dict):
            raise PolicyParseException('Expected an object at the top level of the policy')
        for key in d:
            if key != 'rules':
                raise PolicyParseException('Unexpected key "%s"' % key)
        rules = d.get('rules')
        if not isinstance(rules, list):
            raise PolicyParseException('Expected a list of rules under "rules"')
        return PolicyTable([self._to_rule(i, r) for i, r in enumerate(rules)])

    def _to_rule(self, index: int, d: object) -> PolicyRule:
        if not isinstance(d, dict):
            raise PolicyParseException('Rule %s is not an object' % index)
        for key in d:
            if key not in _RULE_KEYS:
                raise PolicyParseException('Unexpected key "%s" in rule %s' % (key, index))
        if 'max_duration_sec' not in d or 'strategy' not in d:
            raise PolicyParseException('Rule %s must have "max_duration_sec" and "strategy"'
                                       % index)
        bound = self._to_bound(index, d['max_duration_sec'])
        strategy = d['strategy']
        if not isinstance(strategy, str):
            raise PolicyParseException('The strategy of rule %s must be a string' % index)
        try:
            strategy = SceneDetector.canonical_name(strategy)
        except InvalidParameterException as ex:
            raise PolicyParseException('Unknown strategy in rule %s' % index, exception=ex)
        params = self._to_params(index, d.get('params', {}))
        content_params = None
        if 'content_params' in d:
            content_params = self._to_params(index, d['content_params'])
        try:
            return PolicyRule(bound, strategy, params, content_params)
        except InvalidParameterException as ex:
            raise PolicyParseException('Invalid rule %s' % index, exception=ex)

    def _to_bound(self, index: int, v: object) -> Optional[float]:
        if v is None:
            return None
        if isinstance(v, str) and v.strip().lower() in _UNBOUNDED:
            return None
        if isinstance(v, (int, float)) and not isinstance(v, bool) and not math.isnan(v):
            return None if math.isinf(v) else float(v)
        raise PolicyParseException('Invalid duration bound in rule %s: %r' % (index, v))

    def _to_params(self, index: int, d: object) -> DetectorParams:
        if not isinstance(d, dict):
            raise PolicyParseException('Parameters of rule %s must be an object' % index)
        types = typing.get_type_hints(DetectorParams.__init__)
        values = {}
        for name, v in d.items():
            if name not in types or name == 'return':
                raise PolicyParseException('Unexpected parameter "%s" in rule %s' % (name, index))
            values[name] = self._to_number(index, name, v, types[name] is int)
        try:
            return DetectorParams(**values)
        except InvalidParameterException as ex:
            raise PolicyParseException('Invalid parameters in rule %s' % index, exception=ex)

    def _to_number(self, index: int, name: str, v: object, integral: bool) -> object:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise PolicyParseException('Parameter "%s" of rule %s must be a number; got %r'
                                       % (name, index, v))
        if integral:
            if isinstance(v, float):
                if not v.is_integer():
                    raise PolicyParseException('Parameter "%s" of rule %s must be an integer; '
                                               'got %r' % (name, index, v))
                return int(v)
        return v


class JSONSerializer(Serializer):
    """A JSON serializer."""

    def _dump_dict(self, d: Dict[str, object], stream: IO[AnyStr]) -> None:
        assert isinstance(stream, TextIO) or isinstance(stream, TextIOBase), \
            'The JSON serializer requires a text stream.'

        json.dump(d, stream, indent=2)
        stream.write('\n')  # type: ignore

    def _load_dict(self, stream: IO[AnyStr]) -> Dict[str, object]:
        assert isinstance(stream, TextIO) or isinstance(stream, TextIOBase), \
            'The JSON serializer requires a text stream.'

        try:
            r = json.load(stream)
        except ValueError as ex:
            raise PolicyParseException('Invalid JSON in policy', exception=ex)
        if not isinstance(r, dict):
            raise PolicyParseException('Expected an object at the top level of the policy')
        return r
