import csv
import io
import json

import pytest
from click.testing import CliRunner

from src.views import cli

TINY = ['--problem', 'onemax:n=1', '--lambda', '2', '--selection', 'tournament:k=2',
        '--mutation', 'bitwise:chi=1.0', '--max-evals', '1000']


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, args, tmp_path, name='out'):
    destination = tmp_path / name
    result = runner.invoke(cli, args + ['--output', str(destination)])
    return result, destination


def test_run_writes_one_csv_row_per_replicate(runner, tmp_path):
    result, destination = _invoke(runner, ['run', *TINY, '--replicates', '3', '--format', 'csv'], tmp_path)
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(destination.read_text())))
    assert len(rows) == 3
    assert all(row['success'] == '1' for row in rows)


def test_run_report_in_json(runner, tmp_path):
    args = ['run', '--problem', 'onemax:n=4', '--lambda', '4', '--selection', 'tournament:k=2',
            '--mutation', 'bitwise:chi=1.0', '--max-evals', '100000', '--replicates', '2', '--report',
            '--format', 'json']
    result, destination = _invoke(runner, args, tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['replicates'] == 2
    assert record['bound'] > 0
    assert not record['certified']


def test_run_reads_experiment_file(runner, tmp_path):
    path = tmp_path / 'experiment.env'
    path.write_text("PROBLEM=onemax:n=1\nLAMBDA=2\nSELECTION=tournament:k=2\nMUTATION=bitwise\nMAX_EVALS=100\n")
    result, destination = _invoke(runner, ['run', '--config', str(path), '--replicates', '2', '--format', 'csv'],
                                  tmp_path)
    assert result.exit_code == 0, result.output
    assert len(destination.read_text().splitlines()) == 3


@pytest.mark.parametrize(
    "args",
    [
        ['run', '--problem', 'onemax:n=10', '--lambda', '10', '--selection', 'tournament:k=0',
         '--mutation', 'bitwise'],
        ['run', '--problem', 'onemax:n=10', '--lambda', '10', '--selection', 'tournament:k=2',
         '--mutation', 'exchange'],
        ['run', '--lambda', '10'],
        ['bound', '--theorem', '4_inv', '--n', '5', '--pc', '1.0'],
        ['verify', '--theorem', '3_onemax'],
        ['sweep', *TINY, '--vary', 'generations=1,2'],
    ],
    ids=["zero_k", "representation_mismatch", "missing_keys", "pc_one", "theorem_without_n", "bad_vary"],
)
def test_configuration_errors_exit_with_two(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    assert 'error:' in result.output


def test_invalid_environment_setting_exits_with_two(runner, monkeypatch):
    from config import Config

    monkeypatch.setattr(Config, 'GA_WORKERS', 0)
    result = runner.invoke(cli, ['bound', '--theorem', '3_onemax', '--n', '20'])
    assert result.exit_code == 2
    assert 'GA_WORKERS' in result.output


def test_unwritable_output_exits_with_three(runner, tmp_path):
    result = runner.invoke(cli, ['run', *TINY, '--output', str(tmp_path / 'missing' / 'runs.csv')])
    assert result.exit_code == 3


def test_bound_for_theorem(runner, tmp_path):
    result, destination = _invoke(runner, ['bound', '--theorem', '3_onemax', '--n', '50', '--delta', '0.1',
                                           '--format', 'json'], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['selection'] == 'tournament:k=24'
    assert record['lambda_ok']
    assert record['delta'] < 0.1


def test_bound_from_explicit_levels(runner, tmp_path):
    result, destination = _invoke(runner, ['bound', '--levels', '0.1', '--lambda', '464', '--gamma0', '0.25',
                                           '--format', 'json'], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['lambda_min'] == 464
    assert record['bound'] == pytest.approx(1.2927e6, rel=1e-3)


def test_verify_theorem_configuration(runner, tmp_path):
    result, destination = _invoke(runner, ['verify', '--theorem', '3_onemax', '--n', '20', '--format', 'json'],
                                  tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['conditions_pass']
    assert record['C4_method'] == 'exact_beta'


def test_estimate_beta(runner, tmp_path):
    result, destination = _invoke(runner, ['estimate', 'beta', '--selection', 'tournament:k=2', '--lambda', '2',
                                           '--gamma', '0.5', '--trials', '1000', '--format', 'json'], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['exact_enumerated'] == pytest.approx(0.75)
    assert record['exact_distinct'] == pytest.approx(0.75)


def test_estimate_sj(runner, tmp_path):
    result, destination = _invoke(runner, ['estimate', 'sj', '--problem', 'onemax:n=10', '--mutation', 'bitwise',
                                           '--level', '3', '--trials', '2000', '--format', 'json'], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['exact_method'] == 'enumeration'
    assert record['exact'] >= record['s_j']


def test_estimate_lemma2(runner, tmp_path):
    result, destination = _invoke(runner, ['estimate', 'lemma2', '--u', '110', '--v', '011', '--case', 'ii',
                                           '--format', 'json'], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(destination.read_text())
    assert record['satisfied']
    assert record['estimated'] == pytest.approx(0.5)


def test_estimate_lemma2_rejects_non_bits(runner):
    result = runner.invoke(cli, ['estimate', 'lemma2', '--u', '1a0', '--v', '011', '--case', 'ii'])
    assert result.exit_code == 2


def test_sweep_rows(runner, tmp_path):
    result, destination = _invoke(runner, ['sweep', *TINY, '--replicates', '2', '--vary', 'lambda=2,4',
                                           '--vary', 'seed=1,2', '--format', 'csv'], tmp_path)
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(destination.read_text())))
    assert [(row['lambda'], row['seed']) for row in rows] == [('2', '1'), ('2', '2'), ('4', '1'), ('4', '2')]
    assert all(row['success_rate'] == '1.0' for row in rows)
