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

Readers of the chirpfit file formats

+--------------------+--------+----------------------------------------+
| function           | format | content                                |
+--------------------+--------+----------------------------------------+
| `read_params`      | JSON   | `{"components": [...], "beta": ...}`   |
| `read_noise`       | JSON   | `{"kind": ..., "sigma": ..., ...}`     |
| `read_sweep_config`| JSON   | see `montecarlo.SweepConfig.from_dict` |
| `read_result`      | JSON   | output of `estimate`                   |
| `read_signal`      | CSV    | header `n,y`, n = 1, 2, ...            |
+--------------------+--------+----------------------------------------+
"""
import csv
import json
from typing import Any

import numpy as np

from .errors import ConfigError, SignalFormatError
from .estimators import EstimationResult
from .model import ChirpParams, Signal
from .montecarlo import SweepConfig
from . import noise

__all__ = [
    'read_json',
    'read_params',
    'read_noise',
    'read_sweep_config',
    'read_result',
    'read_signal',
]


def read_json(filename: str) -> Any:
    with open(filename) as fp:
        try:
            return json.load(fp)
        except json.JSONDecodeError as err:
            raise ConfigError(
                f"invalid JSON in '{filename}' (line {err.lineno}: "
                f"{err.msg})")


def read_params(filename: str) -> ChirpParams:
    return ChirpParams.from_dict(read_json(filename))


def read_noise(filename: str) -> noise.NoiseModel:
    return noise.from_dict(read_json(filename))


def read_sweep_config(filename: str) -> SweepConfig:
    return SweepConfig.from_dict(read_json(filename))


def read_result(filename: str) -> EstimationResult:
    return EstimationResult.from_dict(read_json(filename))


def read_signal(filename: str) -> Signal:
    """read a signal CSV, checking the header and the sample index"""
    samples = []
    with open(filename, newline='') as fp:
        for lineno, row in enumerate(csv.reader(fp), start=1):
            if lineno == 1:
                if [c.strip() for c in row] != ['n', 'y']:
                    raise SignalFormatError(
                        f"expected header 'n,y', got {','.join(row)!r}", 1)
                continue
            if not row or not ''.join(row).strip():
                continue
            if len(row) != 2:
                raise SignalFormatError(
                    f"expected 2 fields, got {len(row)}", lineno)
            try:
                n, y = int(row[0]), float(row[1])
            except ValueError:
                raise SignalFormatError(
                    f"cannot parse {','.join(row)!r}", lineno)
            if n != len(samples) + 1:
                raise SignalFormatError(
                    f"expected index {len(samples) + 1}, got {n}", lineno)
            if not np.isfinite(y):
                raise SignalFormatError(f"non-finite sample {y}", lineno)
            samples.append(y)
    if not samples:
        raise SignalFormatError("no samples", 1)
    return Signal(samples, {'source': filename})
