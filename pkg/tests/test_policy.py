import io
import json
from pathlib import Path
from typing import Any, Dict

import pytest
from typeguard import suppress_type_checks

from scenemap import DetectorParams, PolicyRule, PolicyTable, default_table, load_table, resolve
from scenemap.exceptions import NonMonotoneDurationsException, MissingUnboundedRowException, \
    PolicyParseException, PolicyConfigException, InvalidParameterException
from scenemap.policy import dump_table, resolve_strategy
from scenemap.serialize import JSONSerializer

EXAMPLE_POLICY = Path(__file__).parent.parent / 'examples-policy' / 'default_policy.json'

# duration -> (strategy, threshold, minlen, content threshold, interval)
EXPECTED = {
    90: ('adaptive', 1.0, 15.0, None, None),
    120: ('adaptive', 1.0, 15.0, None, None),
    121: ('adaptive', 1.2, 15.0, None, None),
    1800: ('adaptive', 1.2, 15.0, None, None),
    1801: ('fallback', 1.4, 15.0, 15.0, None),
    7200: ('fallback', 1.4, 15.0, 15.0, None),
    7201: ('content', 12.0, 15.0, None, None),
    10800: ('content', 12.0, 15.0, None, None),
    10801: ('regular_split', None, None, None, 30.0),
    20000: ('regular_split', None, None, None, 30.0),
}


@pytest.mark.parametrize('duration', sorted(EXPECTED))
def test_resolve_default_table(duration: float) -> None:
    strategy, threshold, minlen, content_threshold, interval = EXPECTED[duration]
    spec = resolve(duration)
    assert spec.strategy == strategy
    if threshold is not None:
        assert spec.params.threshold == threshold
        assert spec.params.minlen_sec == minlen
    if content_threshold is not None:
        assert spec.content_params is not None
        assert spec.content_params.threshold == content_threshold
        assert spec.content_params.minlen_sec == minlen
    else:
        assert spec.content_params is None
    if interval is not None:
        assert spec.params.interval_sec == interval


def test_matched_rule() -> None:
    spec = resolve(120)
    assert spec.matched_rule.index == 0
    assert str(spec.matched_rule) == '0 < D <= 120'
    spec = resolve(20000)
    assert spec.matched_rule.index == 4
    assert spec.matched_rule.min_duration_sec == 10800
    assert spec.matched_rule.max_duration_sec is None
    assert str(spec.matched_rule) == '10800 < D <= inf'


def test_default_table() -> None:
    table = default_table()
    assert len(table) == 5
    assert table[3].params.threshold == 12.0
    assert table[2].strategy == 'fallback'
    assert table[2].params.threshold == 1.4
    assert table[-1].unbounded
    assert table == default_table()


def test_resolve_invalid_duration() -> None:
    with pytest.raises(InvalidParameterException):
        resolve(0)
    with pytest.raises(InvalidParameterException):
        resolve(-5)


def test_resolve_strategy() -> None:
    spec = resolve_strategy('content')
    assert spec.strategy == 'content'
    assert spec.params.threshold == 12.0
    assert spec.matched_rule.index is None
    assert str(spec.matched_rule) == 'forced'

    spec = resolve_strategy('regular')
    assert spec.strategy == 'regular_split'
    assert spec.params.interval_sec == 30

    table = PolicyTable([PolicyRule(None, 'content', DetectorParams(threshold=22))])
    assert resolve_strategy('content', table).params.threshold == 22
    # not in the table, so taken from the default table
    assert resolve_strategy('adaptive', table).params.threshold == 1.0

    with pytest.raises(InvalidParameterException):
        resolve_strategy('histogram')


def test_overrides() -> None:
    spec = resolve(3600).with_overrides(threshold=2.0, content_threshold=20, minlen_sec=5)
    assert spec.params.threshold == 2.0
    assert spec.params.minlen_sec == 5
    assert spec.content_params is not None
    assert spec.content_params.threshold == 20
    assert spec.content_params.minlen_sec == 5
    assert spec.matched_rule.index == 2

    spec = resolve(90).with_overrides(content_threshold=20)
    assert spec.content_params is None
    assert spec.params == resolve(90).params


def test_table_validation() -> None:
    with pytest.raises(NonMonotoneDurationsException):
        PolicyTable([PolicyRule(600, 'adaptive', DetectorParams()),
                     PolicyRule(300, 'content', DetectorParams()),
                     PolicyRule(None, 'regular_split', DetectorParams())])
    with pytest.raises(NonMonotoneDurationsException):
        PolicyTable([PolicyRule(None, 'adaptive', DetectorParams()),
                     PolicyRule(None, 'content', DetectorParams())])
    with pytest.raises(MissingUnboundedRowException):
        PolicyTable([PolicyRule(600, 'adaptive', DetectorParams())])
    with pytest.raises(MissingUnboundedRowException):
        PolicyTable([])
    with pytest.raises(InvalidParameterException):
        PolicyRule(600, 'adaptive', DetectorParams(), DetectorParams())


def test_detector_params_validation() -> None:
    assert DetectorParams().smoothing_window == 3
    with pytest.raises(InvalidParameterException):
        DetectorParams(threshold=-1)
    with pytest.raises(InvalidParameterException):
        DetectorParams(smoothing_window=4)
    with pytest.raises(InvalidParameterException):
        DetectorParams(interval_sec=0)
    with suppress_type_checks():
        with pytest.raises(InvalidParameterException):
            DetectorParams(smoothing_window=2.0)  # type: ignore


def test_minlen_frames() -> None:
    assert DetectorParams(minlen_sec=15).minlen_frames(2) == 30
    assert DetectorParams(minlen_sec=2.5).minlen_frames(2) == 5
    assert DetectorParams(minlen_sec=1.25).minlen_frames(2) == 3
    assert DetectorParams(minlen_sec=0).minlen_frames(2) == 0


def test_serialization() -> None:
    s = JSONSerializer()

    table1 = default_table()
    str1 = s.dumps(table1)

    table2 = s.loads(str1)
    assert table1 == table2

    str2 = s.dumps(table2)
    assert str1 == str2


def test_serialization_omits_defaults() -> None:
    d: Dict[str, Any] = JSONSerializer().to_dict(default_table())
    assert d['rules'][0] == {'max_duration_sec': 120.0, 'strategy': 'adaptive',
                             'params': {'threshold': 1.0, 'minlen_sec': 15.0}}
    assert d['rules'][-1]['max_duration_sec'] is None
    assert d['rules'][-1]['params'] == {}


def _rules(*rules: Dict[str, Any]) -> Dict[str, Any]:
    return {'rules': list(rules)}


def test_load_table() -> None:
    table = load_table(_rules(
        {'max_duration_sec': 60, 'strategy': 'Content', 'params': {'threshold': 20}},
        {'max_duration_sec': 'inf', 'strategy': 'regular', 'params': {'interval_sec': 10.0}}))
    assert len(table) == 2
    assert table[0].strategy == 'content'
    assert table[0].params == DetectorParams(threshold=20)
    assert table[1].strategy == 'regular_split'
    assert resolve(61, table).params.interval_sec == 10


def test_load_table_from_stream_and_file(tmp_path: Path) -> None:
    text = dump_table(default_table())
    assert load_table(io.StringIO(text)) == default_table()
    p = tmp_path / 'policy.json'
    dump_table(default_table(), p)
    assert load_table(p) == default_table()
    assert load_table(str(p)) == default_table()


def test_example_policy() -> None:
    assert load_table(EXAMPLE_POLICY) == default_table()


def test_load_table_errors(tmp_path: Path) -> None:
    with pytest.raises(NonMonotoneDurationsException):
        load_table(_rules({'max_duration_sec': 600, 'strategy': 'adaptive'},
                          {'max_duration_sec': 300, 'strategy': 'content'},
                          {'max_duration_sec': None, 'strategy': 'regular_split'}))
    with pytest.raises(MissingUnboundedRowException):
        load_table(_rules({'max_duration_sec': 600, 'strategy': 'adaptive'}))
    bad = [
        {'rules': {}},
        {'rules': [], 'version': 2},
        _rules({'strategy': 'adaptive'}),
        _rules({'max_duration_sec': None, 'strategy': 'histogram'}),
        _rules({'max_duration_sec': None, 'strategy': 'content', 'params': {'thresh': 1}}),
        _rules({'max_duration_sec': None, 'strategy': 'content', 'params': {'threshold': '1'}}),
        _rules({'max_duration_sec': None, 'strategy': 'content',
                'params': {'smoothing_window': 2.5}}),
        _rules({'max_duration_sec': None, 'strategy': 'content', 'params': {'threshold': -1}}),
        _rules({'max_duration_sec': 'forever', 'strategy': 'content'}),
        _rules({'max_duration_sec': None, 'strategy': 'content', 'extra': 1}),
    ]
    for config in bad:
        with pytest.raises(PolicyParseException):
            load_table(config)  # type: ignore
    with pytest.raises(PolicyParseException):
        load_table(io.StringIO('{"rules": ['))
    with pytest.raises(PolicyConfigException):
        load_table(tmp_path / 'missing.json')


def test_dump_is_json() -> None:
    d = json.loads(dump_table(default_table()))
    assert [r['strategy'] for r in d['rules']] == ['adaptive', 'adaptive', 'fallback', 'content',
                                                  'regular_split']
    assert d['rules'][2]['content_params'] == {'minlen_sec': 15.0}
