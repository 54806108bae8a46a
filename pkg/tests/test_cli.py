import json
from pathlib import Path

import pytest

from scenemap.cli import main, EXIT_OK, EXIT_PARTIAL_FAILURE, EXIT_INVALID_ARGS
from scenemap.metadata import read_scenes


def test_segment(black_white: Path, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / 'out'
    assert main(['segment', str(black_white), '--out', str(out), '--no-thumbs']) == EXIT_OK
    scenes, keyframes = read_scenes(out / 'black_white')
    assert len(scenes) == 2
    assert keyframes[0] is not None and keyframes[0].thumbnail is None
    assert '2 scenes (adaptive)' in capsys.readouterr().out


def test_segment_options(three_blocks: Path, tmp_path: Path) -> None:
    out = tmp_path / 'out'
    assert main(['segment', str(three_blocks), '--out', str(out), '--strategy', 'regular',
                 '--interval', '15', '--candidates', '3', '--weights', '1,0']) == EXIT_OK
    with (out / 'three_blocks' / 'scenes.json').open() as f:
        doc = json.load(f)
    assert doc['policy']['strategy'] == 'regular_split'
    assert doc['policy']['matched_rule'] == 'forced'
    assert len(doc['scenes']) == 4
    assert all(s['keyframe']['candidate_count'] == 3 for s in doc['scenes'])
    assert (out / 'three_blocks' / 'scene_0003.png').exists()


def test_segment_partial_failure(black_white: Path, tmp_path: Path,
                                 capsys: pytest.CaptureFixture) -> None:
    rc = main(['segment', str(black_white), str(tmp_path / 'missing.mp4'), '--out',
               str(tmp_path / 'out'), '-j', '2'])
    assert rc == EXIT_PARTIAL_FAILURE
    assert 'missing.mp4: FAILED' in capsys.readouterr().err
    assert (tmp_path / 'out' / 'black_white' / 'scenes.json').exists()


def test_invalid_arguments(black_white: Path, tmp_path: Path) -> None:
    out = str(tmp_path / 'out')
    assert main([]) == EXIT_INVALID_ARGS
    assert main(['segment', str(black_white), '--out', out, '--jobs', '0']) == EXIT_INVALID_ARGS
    assert main(['segment', str(black_white), '--out', out, '--strategy', 'histogram']) \
        == EXIT_INVALID_ARGS
    assert main(['segment', str(black_white), '--out', out, '--minlen', '-1']) \
        == EXIT_INVALID_ARGS
    assert main(['segment', str(black_white), '--out', out, '--policy',
                 str(tmp_path / 'missing.json')]) == EXIT_INVALID_ARGS
    for argv in [['segment', str(black_white)], ['segment', '--out', out],
                 ['segment', str(black_white), '--out', out, '--size', '256'],
                 ['ablate', 'm.tsv', '--out', out, '--param', 'interval'],
                 ['frobnicate']]:
        with pytest.raises(SystemExit) as exc_info:
            main(argv)
        assert exc_info.value.code == EXIT_INVALID_ARGS


def test_synth(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    d = tmp_path / 'seq'
    assert main(['synth', str(d), '--block', '5:black', '--block', '5:white', '--size',
                 '32x18']) == EXIT_OK
    assert capsys.readouterr().out.strip() == '10'
    assert (d / 'meta.json').exists()
    with pytest.raises(SystemExit):
        main(['synth', str(d), '--block', '5:octarine'])


def test_policy(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(['policy', '--duration', '3600']) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith('1800 < D <= 7200: fallback')
    assert 'content_params' in out

    assert main(['policy']) == EXIT_OK
    table = capsys.readouterr().out
    p = tmp_path / 'policy.json'
    p.write_text(table)
    assert main(['policy', '--policy', str(p), '--duration', '20000']) == EXIT_OK
    assert 'regular_split' in capsys.readouterr().out

    p.write_text('{"rules": [{"max_duration_sec": 60, "strategy": "content"}]}')
    assert main(['policy', '--policy', str(p)]) == EXIT_INVALID_ARGS


def test_detectors(capsys: pytest.CaptureFixture) -> None:
    assert main(['detectors']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    names = {line.split('\t')[0] for line in lines}
    assert {'content', 'adaptive', 'fallback', 'regular_split'} <= names
    assert 'regular\tregular_split\t0.1.0' in lines


def test_evaluate_and_ablate(three_blocks: Path, black_white: Path, tmp_path: Path) -> None:
    manifest = tmp_path / 'corpus.tsv'
    manifest.write_text('%s\tshort\n%s\n' % (three_blocks, black_white))
    out = tmp_path / 'report'
    assert main(['evaluate', str(manifest), '--out', str(out)]) == EXIT_OK
    assert (out / 'report.md').exists()
    assert main(['ablate', str(manifest), '--out', str(out), '--param', 'minlen', '--values',
                 '1,10,25']) == EXIT_OK
    assert (out / 'ablation_minlen.csv').exists()

    manifest.write_text('%s\n%s\n' % (three_blocks, tmp_path / 'missing.mp4'))
    assert main(['evaluate', str(manifest), '--out', str(out)]) == EXIT_PARTIAL_FAILURE
