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
import json

import pytest

from ..cli import main
from ..model import ChirpParams, benchmark_params
from ..reader import read_result, read_signal


@pytest.fixture
def params():
    return ChirpParams([(2.0, 1.0, 0.9), (1.0, 0.3, 1.9), (0.5, 0.2, 0.4)],
                       0.2)


@pytest.fixture
def params_file(tmp_path, params):
    filename = tmp_path / 'params.json'
    filename.write_text(json.dumps(params.get_serializable_content()))
    return str(filename)


@pytest.fixture
def iid_file(tmp_path):
    filename = tmp_path / 'noise.json'
    filename.write_text('{"kind": "iid", "sigma": 1.0}')
    return str(filename)


def test_synth_benchmark(tmp_path, capsys):
    params_file = tmp_path / 'benchmark.json'
    params_file.write_text(
        json.dumps(benchmark_params().get_serializable_content()))
    out = str(tmp_path / 'signal.csv')
    assert main(['synth', '--params', str(params_file), '--n', '500',
                 '--out', out]) == 0
    signal = read_signal(out)
    assert signal.n_samples == 500
    assert "wrote 500 samples" in capsys.readouterr().out


def test_synth_single_sample(tmp_path, params_file):
    out = str(tmp_path / 'signal.csv')
    assert main(['synth', '--params', params_file, '--n', '1',
                 '--out', out]) == 0
    assert read_signal(out).n_samples == 1


def test_synth_is_deterministic(tmp_path, params_file, iid_file, capsys):
    outputs = [str(tmp_path / f'signal{i}.csv') for i in range(2)]
    for out in outputs:
        assert main(['synth', '--params', params_file, '--noise', iid_file,
                     '--n', '64', '--seed', '9', '--out', out]) == 0
    with open(outputs[0]) as first, open(outputs[1]) as second:
        assert first.read() == second.read()
    assert "SNR" in capsys.readouterr().out


def synth(tmp_path, params_file, n=300):
    out = str(tmp_path / 'signal.csv')
    assert main(['synth', '--params', params_file, '--n', str(n),
                 '--out', out]) == 0
    return out


def test_estimate_round_trip(tmp_path, params, params_file, capsys):
    signal = synth(tmp_path, params_file)
    init = ','.join(str(v) for v in params.xi)
    out = str(tmp_path / 'result.json')
    assert main(['estimate', '--signal', signal, '--p', '3', '--method',
                 'lse', '--init', init, '--out', out]) == 0
    result = read_result(out)
    assert result.theta == pytest.approx(params.theta, abs=1e-5)
    printed = capsys.readouterr().out
    assert 'alpha3' in printed and 'beta' in printed


def test_estimate_plugin_shares_beta(tmp_path, params, params_file):
    signal = synth(tmp_path, params_file)
    hint = ','.join(str(v) for v in params.xi)
    out = str(tmp_path / 'result.json')
    assert main(['estimate', '--signal', signal, '--p', '3', '--method',
                 'plugin', '--hint', hint, '--points', '5',
                 '--out', out]) == 0
    with open(out) as fp:
        content = json.load(fp)
    betas = {c['beta'] for c in content['components']}
    assert betas == {content['beta']}


def test_estimate_with_standard_errors(tmp_path, params, params_file,
                                       capsys):
    signal = synth(tmp_path, params_file)
    init = ','.join(str(v) for v in params.xi)
    assert main(['estimate', '--signal', signal, '--p', '3', '--method',
                 'combined', '--init', init, '--avar', '0.5']) == 0
    assert 'std_error' in capsys.readouterr().out


def test_estimate_needs_init(tmp_path, params_file, capsys):
    signal = synth(tmp_path, params_file)
    assert main(['estimate', '--signal', signal, '--p', '3', '--method',
                 'lse']) == 2
    assert '--init' in capsys.readouterr().err


def test_estimate_wrong_init_length(tmp_path, params_file, capsys):
    signal = synth(tmp_path, params_file)
    assert main(['estimate', '--signal', signal, '--p', '3', '--method',
                 'lse', '--init', '0.9,1.9,0.2']) == 2
    assert "expected 4 values" in capsys.readouterr().err


def test_estimate_malformed_signal(tmp_path, capsys):
    signal = tmp_path / 'signal.csv'
    signal.write_text('n,y\n1,0.5\n2,x\n')
    assert main(['estimate', '--signal', str(signal), '--p', '1',
                 '--method', 'lse', '--init', '0.5,0.1']) == 2
    assert 'line 3' in capsys.readouterr().err


def test_estimate_degenerate_design(tmp_path, params_file, capsys):
    signal = synth(tmp_path, params_file, n=50)
    assert main(['estimate', '--signal', signal, '--p', '2', '--method',
                 'lse', '--init', '0.5,0.5,0.1']) == 3
    assert 'rank deficient' in capsys.readouterr().err


def test_avar_single_component(tmp_path, iid_file, capsys):
    params_file = tmp_path / 'params.json'
    params_file.write_text(
        '{"components": [{"a": 1, "b": 0, "alpha": 0.5}], "beta": 0.1}')
    out = str(tmp_path / 'avar.csv')
    assert main(['avar', '--params', str(params_file), '--noise', iid_file,
                 '--out', out]) == 0
    printed = capsys.readouterr().out
    assert '360' in printed
    assert '384' in printed
    with open(out) as fp:
        assert fp.readline().strip() == \
            'method,parameter,scaled_variance,unscaled_variance'


def test_avar_bad_params(tmp_path, iid_file, capsys):
    params_file = tmp_path / 'params.json'
    params_file.write_text(
        '{"components": [{"a": 1, "b": 0, "alpha": "x"}], "beta": 0.1}')
    assert main(['avar', '--params', str(params_file),
                 '--noise', iid_file]) == 2
    assert 'params.components[0].alpha' in capsys.readouterr().err


@pytest.fixture
def sweep_config(tmp_path):
    filename = tmp_path / 'sweep.json'
    filename.write_text(json.dumps({
        'params': {'components': [{'a': 2.0, 'b': 0.1, 'alpha': 1.5},
                                  {'a': 1.0, 'b': 0.1, 'alpha': 0.5}],
                   'beta': 0.1},
        'noise': {'kind': 'iid', 'sigma': 0.3},
        'axis': {'sample_size': [40, 60]},
        'replications': 10,
        'init': {'points': 5},
    }))
    return str(filename)


def test_sweep(tmp_path, sweep_config, capsys):
    prefix = str(tmp_path / 'mse')
    assert main(['sweep', '--config', sweep_config, '--out', prefix]) == 0
    with open(prefix + '.csv') as fp:
        lines = fp.read().splitlines()
    assert lines[0] == \
        'axis_value,method,parameter,mse,bias,n_reps,n_nonconverged,' \
        'mean_seconds'
    assert len(lines) == 1 + 2 * 3 * 7
    with open(prefix + '.json') as fp:
        assert json.load(fp)['config']['replications'] == 10
    # outputs are never overwritten
    assert main(['sweep', '--config', sweep_config, '--out', prefix]) == 2
    assert 'exists already' in capsys.readouterr().err


def test_timing(tmp_path, sweep_config, capsys):
    out = str(tmp_path / 'timing.csv')
    assert main(['timing', '--config', sweep_config, '--out', out]) == 0
    assert 'lse_over_plugin' in capsys.readouterr().out
    with open(out) as fp:
        assert len(fp.read().splitlines()) == 3


def test_missing_file(tmp_path, iid_file, capsys):
    assert main(['avar', '--params', str(tmp_path / 'nope.json'),
                 '--noise', iid_file]) == 2
    assert 'error' in capsys.readouterr().err


def test_no_subcommand():
    assert main([]) == 2
