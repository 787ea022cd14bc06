# src/controllers/results_controller.py
import csv
import io
import json
import logging
import sys

from ..models import ConfigError, ExperimentStats, ResultsWriteError

logger = logging.getLogger(__name__)

RUN_COLUMNS = ('run_index', 'seed', 'success', 'evaluations', 'generations', 'best_level_final')
FORMATS = ('csv', 'json')


class ResultsController:
    @staticmethod
    def _rows(payload):
        if isinstance(payload, ExperimentStats):
            return list(RUN_COLUMNS), [run.summary() for run in payload.per_run]
        if hasattr(payload, 'to_dict'):
            payload = payload.to_dict()
        if isinstance(payload, dict):
            return list(payload.keys()), [payload]
        rows = list(payload)
        columns = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        return columns, rows

    @classmethod
    def render(cls, payload, fmt):
        if fmt not in FORMATS:
            raise ConfigError(f"unknown format '{fmt}', expected csv or json", key='format')
        if fmt == 'json':
            if hasattr(payload, 'to_dict'):
                payload = payload.to_dict()
            return json.dumps(payload, indent=2) + '\n'
        columns, rows = cls._rows(payload)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n', extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: ('' if value is None else value) for key, value in row.items()})
        return buffer.getvalue()

    @classmethod
    def emit_results(cls, payload, fmt, destination='-'):
        """Write stats, a report record or a list of rows as CSV or JSON; '-' means stdout."""
        text = cls.render(payload, fmt)
        if destination in (None, '-'):
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        try:
            with open(destination, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        except OSError as e:
            logger.error(f"Error writing results to {destination}: {e}")
            raise ResultsWriteError(destination, e.strerror or str(e)) from e
        logger.info(f"results written to {destination}")
