"""
Copyright 2026 The chirpfit developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this module except in compliance with the License.
You may obtain a copy of the License at:

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF
ANY KIND, either express or implied.
"""
import csv
import json
from os.path import exists, splitext
from typing import Any, Iterable, Sequence

import numpy as np

from .model import Signal

__all__ = [
    'Writer',
    'write_signal',
    'write_result',
    'write_mse_report',
    'write_avar_report',
    'write_timing',
]

FLOAT_FORMAT = '%.17g'


def _finite_or_null(data: Any) -> Any:
    """replace NaN and inf by None, written as JSON null"""
    if isinstance(data, dict):
        return {k: _finite_or_null(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_finite_or_null(v) for v in data]
    if isinstance(data, (float, np.floating)) and not np.isfinite(data):
        return None
    return data


def _format(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


class Writer:
    """write `.json` or `.csv` output, never overwriting a file"""

    def __init__(self, filename: str):
        self.filename = filename

    @property
    def filename(self) -> str:
        return self._filename

    @filename.setter  # type: ignore
    def filename(self, fn: str):
        """check filename with .csv/.json extension does not exist"""
        ext = splitext(fn)[1]
        if ext not in ('.csv', '.json'):
            raise ValueError(f"unsupported extension '{ext}' of '{fn}'")
        if exists(fn):
            raise FileExistsError(f"File '{fn}' exists already")
        self._filename = fn

    def export_to_json(self, data):
        """export data to .json file; non-finite floats become null"""
        with open(self.filename, 'x') as file:
            json.dump(_finite_or_null(data), file, indent=4, allow_nan=False)

    def export_to_csv(self, header: Sequence[str],
                      rows: Iterable[Sequence[Any]]):
        """export rows to .csv file; floats keep all 17 digits"""
        with open(self.filename, 'x', newline='') as file:
            out = csv.writer(file, lineterminator='\n')
            out.writerow(header)
            for row in rows:
                out.writerow([_format(v) for v in row])


def write_signal(signal: Signal, filename: str):
    """write `n,y` CSV with n = 1..N"""
    Writer(filename).export_to_csv(
        ('n', 'y'), zip(signal.index.tolist(), signal.samples))


def write_result(result, filename: str):
    """write an `EstimationResult` as JSON"""
    Writer(filename).export_to_json(result.get_serializable_content())


def write_mse_report(report, prefix: str):
    """write `<prefix>.csv` (MSE table) and `<prefix>.json` (full report)"""
    csv_writer = Writer(prefix + '.csv')
    json_writer = Writer(prefix + '.json')
    csv_writer.export_to_csv(report.csv_columns, report.csv_rows())
    json_writer.export_to_json(report.get_serializable_content())


def write_avar_report(report, filename: str):
    """write an `AsymptoticReport` as CSV table or full JSON"""
    writer = Writer(filename)
    if filename.endswith('.json'):
        writer.export_to_json(report.get_serializable_content())
    else:
        writer.export_to_csv(report.columns, report.rows)


def write_timing(table, filename: str):
    writer = Writer(filename)
    if filename.endswith('.json'):
        writer.export_to_json(table.get_serializable_content())
    else:
        writer.export_to_csv(table.columns, table.rows)
