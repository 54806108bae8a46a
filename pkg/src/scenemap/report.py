"""
Writing evaluation and ablation reports.

Reports are written as CSV files, for further processing and plotting, and as Markdown tables
rendered from Mustache templates (see https://mustache.github.io/) with Pystache.
"""
import csv
import logging
from pathlib import Path
from typing import List, Sequence, Dict, Any, Union, Callable

import pystache

from scenemap.evaluation import CorpusReport, AblationRow, failures
from scenemap.exceptions import OutputException, InvalidParameterException


logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / 'templates'

#: Column headers of the per-category table.
CATEGORY_COLUMNS = ['Category', 'Videos', 'Avg. Duration (min)', 'Avg. Scene Length (s)',
                    'Scenes per Minute', 'Keyframe Coverage (%)', 'Fallbacks']

#: Column headers of the per-video table.
VIDEO_COLUMNS = ['Path', 'Category', 'Duration (s)', 'Scenes', 'Avg. Scene Length (s)',
                 'Scenes per Minute', 'Keyframe Coverage (%)', 'Strategy']

#: Column headers of the ablation tables, after the swept parameter column.
ABLATION_COLUMNS = ['Segments per Video', 'Median Duration (s)', 'Keyframe Coverage (%)',
                    'Failed']

_PARAM_HEADERS = {'minlen': 'minlen (s)', 'minlen_sec': 'minlen (s)', 'threshold': 'Threshold'}


def _fmt(v: object) -> str:
    if isinstance(v, float):
        return '%.2f' % v
    return str(v)


class ReportRenderer(object):
    """Renders Markdown reports from a Mustache template."""

    def __init__(self, template_path: Path, escape: Callable[[str], str] = str) -> None:
        """
        :param template_path: The path to a Mustache template.
        :param escape: An escape function applied to all values. Values are not escaped by
            default.
        """
        with template_path.open('r') as template_file:
            self.template = pystache.parse(template_file.read())
        self.renderer = pystache.Renderer(escape=escape)

    def render(self, context: Dict[str, Any]) -> str:
        """Renders the template with the given context."""
        return str(self.renderer.render(self.template, context))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
    try:
        with path.open('w', newline='') as f:
            w = csv.writer(f)
            w.writerow(header)
            w.writerows(rows)
    except OSError as ex:
        raise OutputException('Could not write %s' % path, exception=ex)
    return path


def _write_text(path: Path, text: str) -> Path:
    try:
        path.write_text(text)
    except OSError as ex:
        raise OutputException('Could not write %s' % path, exception=ex)
    return path


def _mkdir(out_dir: Union[str, Path]) -> Path:
    d = Path(out_dir)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as ex:
        raise OutputException('Could not create %s' % d, exception=ex)
    return d


def _video_cells(report: CorpusReport) -> List[List[object]]:
    return [[v.path, v.category, v.duration_sec, v.scene_count, v.avg_scene_len_sec,
             v.scenes_per_minute, v.keyframe_coverage_pct, v.used_strategy]
            for v in report.videos]


def _category_cells(report: CorpusReport) -> List[List[object]]:
    return [[c.category, c.video_count, c.mean_duration_min, c.mean_avg_scene_len_sec,
             c.mean_scenes_per_minute, c.mean_keyframe_coverage_pct, c.fallback_count]
            for c in report.categories]


def _table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> Dict[str, Any]:
    return {'header': ' | '.join(header),
            'separator': ' | '.join('---' for _ in header),
            'rows': [{'cells': ' | '.join(_fmt(v) for v in row)} for row in rows]}


def render_corpus_report(report: CorpusReport) -> str:
    """Returns a Markdown rendering of a corpus report."""
    context = {
        'video_count': len(report.videos),
        'failed': report.failed,
        'failures': [{'message': m} for m in failures(report)],
        'categories': _table(CATEGORY_COLUMNS, _category_cells(report)),
        'videos': _table(VIDEO_COLUMNS, _video_cells(report)),
    }
    return ReportRenderer(TEMPLATE_DIR / 'corpus.mustache').render(context)


def write_corpus_report(report: CorpusReport, out_dir: Union[str, Path]) -> List[Path]:
    """
    Writes a corpus report.

    The following files are written: `report.csv`, with one row per video, `categories.csv`,
    with the means per category, `durations.csv`, with the duration of every scene, and
    `report.md`, which holds both tables.

    :return: The paths of the files written.
    :raises OutputException: if the files cannot be written.
    """
    d = _mkdir(out_dir)
    durations = [[v.category, s] for v in report.videos for s in v.scene_durations]
    paths = [_write_csv(d / 'report.csv', VIDEO_COLUMNS, _video_cells(report)),
             _write_csv(d / 'categories.csv', CATEGORY_COLUMNS, _category_cells(report)),
             _write_csv(d / 'durations.csv', ['Category', 'Scene Duration (s)'], durations),
             _write_text(d / 'report.md', render_corpus_report(report))]
    logger.debug('Wrote %s', ', '.join(str(p) for p in paths))
    return paths


def _ablation_param(rows: Sequence[AblationRow]) -> str:
    if not rows:
        raise InvalidParameterException('No ablation rows')
    params = set(r.param for r in rows)
    if len(params) != 1:
        raise InvalidParameterException('Rows sweep different parameters: %s'
                                        % ', '.join(sorted(params)))
    return rows[0].param


def _ablation_cells(rows: Sequence[AblationRow]) -> List[List[object]]:
    return [[r.param_value, r.segments_per_video, r.median_duration_sec,
             r.keyframe_coverage_pct, r.report.failed] for r in rows]


def render_ablation_report(rows: Sequence[AblationRow]) -> str:
    """Returns a Markdown rendering of the rows of an ablation."""
    param = _ablation_param(rows)
    header = [_PARAM_HEADERS.get(param, param)] + ABLATION_COLUMNS
    context = {'param': param, 'table': _table(header, _ablation_cells(rows))}
    return ReportRenderer(TEMPLATE_DIR / 'ablation.mustache').render(context)


def write_ablation_report(rows: Sequence[AblationRow], out_dir: Union[str, Path]) -> List[Path]:
    """
    Writes the rows of an ablation to `ablation_<param>.csv` and `ablation_<param>.md`.

    The CSV file is the data series for plotting the effect of the parameter.

    :return: The paths of the files written.
    :raises OutputException: if the files cannot be written.
    """
    param = _ablation_param(rows)
    d = _mkdir(out_dir)
    header = [_PARAM_HEADERS.get(param, param)] + ABLATION_COLUMNS
    return [_write_csv(d / ('ablation_%s.csv' % param), header, _ablation_cells(rows)),
            _write_text(d / ('ablation_%s.md' % param), render_ablation_report(rows))]
