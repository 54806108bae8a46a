"""The `scenemap` command line tool."""
import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from scenemap.detector import SceneDetector
from scenemap.evaluation import ablate, evaluate_corpus, read_manifest, MINLEN_SWEEP, \
    THRESHOLD_SWEEP, SWEEP_PARAMS, failures
from scenemap.exceptions import SceneMapException, InvalidParameterException, \
    PolicyConfigException
from scenemap.frame_spec import FrameSpec
from scenemap.keyframes import KeyframeWeights
from scenemap.pipeline import run_batch
from scenemap.pipeline_config import PipelineConfig, AUTO
from scenemap.policy import default_table, dump_table, load_table, resolve
from scenemap.report import write_corpus_report, write_ablation_report
from scenemap.sources.synthetic import Block, generate_synthetic
from scenemap.version import VERSION


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL_FAILURE = 1
EXIT_INVALID_ARGS = 2

LOG_FORMATTER = logging.Formatter(fmt='%(asctime)s %(levelname)s %(name)s %(message)s',
                                  datefmt='%Y-%m-%d %H:%M:%S')
LOG_FORMATTER.converter = time.gmtime


def _size(s: str) -> Tuple[int, int]:
    try:
        w, h = s.lower().split('x')
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError('expected WIDTHxHEIGHT; got "%s"' % s)


def _weights(s: str) -> Tuple[float, float]:
    try:
        sharp, bright = s.split(',')
        return float(sharp), float(bright)
    except ValueError:
        raise argparse.ArgumentTypeError('expected SHARP,BRIGHT; got "%s"' % s)


def _values(s: str) -> List[float]:
    try:
        return [float(v) for v in s.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected a comma separated list of numbers; got "%s"'
                                         % s)


def _block(s: str) -> Block:
    duration, sep, fill = s.partition(':')
    if not sep:
        raise argparse.ArgumentTypeError('expected DURATION:FILL; got "%s"' % s)
    try:
        return Block(float(duration), fill)
    except (ValueError, InvalidParameterException) as ex:
        raise argparse.ArgumentTypeError(str(ex))


def _add_frame_options(p: argparse.ArgumentParser) -> None:
    p.add_argument('--fps', type=float, default=2.0, help='sampling rate (default: 2)')
    p.add_argument('--size', type=_size, default=(256, 144),
                   help='frame size, WIDTHxHEIGHT (default: 256x144)')


def _add_segment_options(p: argparse.ArgumentParser) -> None:
    _add_frame_options(p)
    p.add_argument('--strategy', default=AUTO,
                   help='"auto" to select the detector by duration, or a detector name '
                        '(see the "detectors" command)')
    p.add_argument('--threshold', type=float, help='detection threshold override')
    p.add_argument('--content-threshold', type=float,
                   help='threshold override for the content pass of the fallback detector')
    p.add_argument('--minlen', type=float, help='minimum scene length override, in seconds')
    p.add_argument('--interval', type=float, help='regular split interval override, in seconds')
    p.add_argument('--weights', type=_weights, default=(0.7, 0.3),
                   help='keyframe weights, SHARP,BRIGHT (default: 0.7,0.3)')
    p.add_argument('--candidates', type=int, default=5,
                   help='keyframe candidates per scene (default: 5)')
    p.add_argument('--policy', type=Path, help='a JSON policy file')
    p.add_argument('--jobs', '-j', type=int, default=1,
                   help='number of videos processed concurrently (default: 1)')
    p.add_argument('--no-thumbs', action='store_true', help='do not write thumbnails')


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='scenemap',
                                     description='Duration-aware scene segmentation and '
                                                 'keyframe selection.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + VERSION)
    parser.add_argument('-v', '--verbose', dest='verbose', action='store_true',
                        help='print progress information')
    parser.add_argument('--debug', dest='debug', action='store_true',
                        help='print debug information')
    sub = parser.add_subparsers(dest='command', help='Subcommands')

    p = sub.add_parser('segment', help='segment videos and write scene metadata')
    p.add_argument('inputs', nargs='+', help='video files or raw-frame sequence directories')
    p.add_argument('--out', type=Path, required=True, help='output directory')
    _add_segment_options(p)

    p = sub.add_parser('evaluate', help='evaluate a corpus listed in a manifest')
    p.add_argument('manifest', type=Path, help='a file with lines of the form path<TAB>category')
    p.add_argument('--out', type=Path, required=True, help='report directory')
    _add_segment_options(p)

    p = sub.add_parser('ablate', help='sweep a detector parameter over a corpus')
    p.add_argument('manifest', type=Path, help='a file with lines of the form path<TAB>category')
    p.add_argument('--param', choices=sorted(SWEEP_PARAMS), required=True,
                   help='the parameter to sweep')
    p.add_argument('--values', type=_values,
                   help='comma separated values (default: the recommended sweep)')
    p.add_argument('--out', type=Path, required=True, help='report directory')
    _add_segment_options(p)
    p.set_defaults(strategy='content')

    p = sub.add_parser('synth', help='write a synthetic raw-frame sequence')
    p.add_argument('out_dir', type=Path, help='the directory to write the sequence to')
    p.add_argument('--block', type=_block, action='append', required=True,
                   help='a block, DURATION:FILL, where FILL is a color name, r,g,b, '
                        'noise:SEED, or crossfade:FROM:TO; repeat for more blocks')
    _add_frame_options(p)

    p = sub.add_parser('policy', help='print the policy table or the rule for a duration')
    p.add_argument('--policy', type=Path, help='a JSON policy file')
    p.add_argument('--duration', type=float, help='a video duration, in seconds')

    sub.add_parser('detectors', help='list the registered detectors')
    return parser


_handler: Optional[logging.Handler] = None


def _configure_logging(verbose: bool, debug: bool) -> None:
    global _handler
    root = logging.getLogger()
    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(LOG_FORMATTER)
        root.addHandler(_handler)
    root.setLevel(logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING)


def _overrides(args: argparse.Namespace) -> dict:
    r = {'threshold': args.threshold, 'content_threshold': args.content_threshold,
         'minlen_sec': args.minlen, 'interval_sec': args.interval}
    return {k: v for k, v in r.items() if v is not None}


def build_config(args: argparse.Namespace) -> PipelineConfig:
    """
    Creates a pipeline configuration from parsed command line arguments.

    :raises InvalidParameterException: if any value is invalid.
    :raises PolicyConfigException: if the policy file is invalid.
    """
    width, height = args.size
    if args.jobs < 1:
        raise InvalidParameterException('--jobs must be at least 1')
    strategy = args.strategy
    if strategy != AUTO:
        strategy = SceneDetector.canonical_name(strategy)
    table = load_table(args.policy) if args.policy is not None else default_table()
    return PipelineConfig(frame_spec=FrameSpec(width, height, args.fps),
                          policy_table=table, strategy=strategy,
                          overrides=_overrides(args),
                          weights=KeyframeWeights(args.weights[0], args.weights[1],
                                                  args.candidates),
                          write_thumbnails=False if args.no_thumbs else None)


def _segment(args: argparse.Namespace) -> int:
    config = build_config(args)
    items = run_batch(args.inputs, args.jobs, config, args.out)
    failed = 0
    for item in items:
        if item.ok:
            assert item.result is not None
            print('%s: %s scenes (%s) -> %s' % (item.source, len(item.result.scenes),
                                                 item.result.used_strategy, item.out_dir))
        else:
            failed += 1
            print('%s: FAILED: %s' % (item.source, item.error), file=sys.stderr)
    return EXIT_PARTIAL_FAILURE if failed else EXIT_OK


def _evaluate(args: argparse.Namespace) -> int:
    config = build_config(args)
    report = evaluate_corpus(read_manifest(args.manifest), config, args.jobs)
    for path in write_corpus_report(report, args.out):
        print(path)
    for message in failures(report):
        print('FAILED: %s' % message, file=sys.stderr)
    return EXIT_PARTIAL_FAILURE if report.failed else EXIT_OK


def _ablate(args: argparse.Namespace) -> int:
    config = build_config(args)
    values = args.values
    if values is None:
        values = MINLEN_SWEEP if args.param == 'minlen' else THRESHOLD_SWEEP
    rows = ablate(args.param, values, read_manifest(args.manifest),
                  config, config.strategy, args.jobs)
    for path in write_ablation_report(rows, args.out):
        print(path)
    return EXIT_PARTIAL_FAILURE if any(r.report.failed for r in rows) else EXIT_OK


def _synth(args: argparse.Namespace) -> int:
    width, height = args.size
    cuts = generate_synthetic(args.block, FrameSpec(width, height, args.fps), args.out_dir)
    print(' '.join(str(c) for c in cuts))
    return EXIT_OK


def _policy(args: argparse.Namespace) -> int:
    table = load_table(args.policy) if args.policy is not None else default_table()
    if args.duration is None:
        sys.stdout.write(dump_table(table))
    else:
        spec = resolve(args.duration, table)
        print('%s: %s' % (spec.matched_rule, spec.strategy))
        print('  params: %s' % spec.params.to_dict())
        if spec.content_params is not None:
            print('  content_params: %s' % spec.content_params.to_dict())
    return EXIT_OK


def _detectors(args: argparse.Namespace) -> int:
    for name in sorted(SceneDetector.list_detectors()):
        detector = SceneDetector.get_instance(name)
        print('%s\t%s\t%s' % (name, detector.name, detector.version))
    return EXIT_OK


_COMMANDS = {'segment': _segment, 'evaluate': _evaluate, 'ablate': _ablate, 'synth': _synth,
             'policy': _policy, 'detectors': _detectors}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs the command line tool.

    :param argv: The arguments, not including the program name. Defaults to `sys.argv[1:]`.
    :return: 0 on success, 1 if some videos could not be processed, and 2 if the arguments are
        invalid.
    """
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID_ARGS
    _configure_logging(args.verbose, args.debug)
    try:
        return _COMMANDS[args.command](args)
    except (InvalidParameterException, PolicyConfigException) as ex:
        print('scenemap: error: %s' % ex, file=sys.stderr)
        return EXIT_INVALID_ARGS
    except SceneMapException as ex:
        print('scenemap: %s' % ex, file=sys.stderr)
        logger.debug('Command failed', exc_info=True)
        return EXIT_PARTIAL_FAILURE
