import json
from io import StringIO

import pytest
from django.core.management import call_command, execute_from_command_line
from django.core.management.base import CommandError

from datagen.serializers import load_dataset_csv, load_population_spec
from experiments.persistence import read_table
from learner.serializers import load_model
from metrics.serializers import REPORT_COLUMNS
from sepbias.commands import EXIT_DOMAIN, EXIT_IO
from sepbias.settings import RUN_FILES

TRAIN_FLAGS = ['--max-epochs', '10', '--batch-size', '128']


def run(*argv) -> str:
    stdout = StringIO()
    call_command(*argv, stdout=stdout)
    return stdout.getvalue()


@pytest.fixture
def generated(tmp_path):
    out = tmp_path / 'data'
    run('generate', '--n', '1500', '--auc', '0.9', '--out', str(out), '--seed', '3')
    return out


def test_generate_writes_data_and_spec(generated):
    dataset = load_dataset_csv(generated / 'data.csv')
    spec = load_population_spec(generated / 'population.json')
    assert len(dataset) == 1500
    assert dataset.is_clean()
    assert dataset.dim == spec.dim == 2


def test_generate_is_seeded(tmp_path, generated):
    again = tmp_path / 'again'
    run('generate', '--n', '1500', '--auc', '0.9', '--out', str(again), '--seed', '3')
    assert (again / 'data.csv').read_bytes() == (generated / 'data.csv').read_bytes()


def test_generate_seed_from_environment(tmp_path, monkeypatch, generated):
    monkeypatch.setenv('SEPBIAS_SEED', '3')
    out = tmp_path / 'env'
    run('generate', '--n', '1500', '--auc', '0.9', '--out', str(out))
    assert (out / 'data.csv').read_bytes() == (generated / 'data.csv').read_bytes()


def test_generate_with_preset_and_fields(tmp_path):
    out = tmp_path / 'preset'
    run('generate', '--n', '500', '--preset', 'ham10000-age', '--dim', '4', '--axis-angle', '60', '--out', str(out))
    spec = load_population_spec(out / 'population.json')
    assert spec.dim == 4
    assert spec.group_prior == 0.281
    assert spec.disease_axis[0] == pytest.approx(0.5)


def test_inject_flips_target_group(tmp_path, generated):
    out = tmp_path / 'noisy.csv'
    run('inject', '--in', str(generated / 'data.csv'), '--out', str(out), '--rate', '0.5', '--group', '0')
    noisy = load_dataset_csv(out)
    changed = noisy.observed_labels != noisy.true_labels
    assert changed.any()
    assert not (changed & (noisy.groups == 1)).any()


def test_audit_prints_auc(tmp_path, generated):
    out = tmp_path / 'audit'
    printed = run('audit', '--in', str(generated / 'data.csv'), '--out', str(out), '--arch', 'linear', *TRAIN_FLAGS)
    document = json.loads((out / 'audit.json').read_text(encoding='utf-8'))
    assert document['separability_auc'] > 0.8
    assert printed.startswith('separability_auc ')


def test_train_then_evaluate(tmp_path, generated):
    data = str(generated / 'data.csv')
    run('train', '--in', data, '--out', str(tmp_path / 'model'), *TRAIN_FLAGS)
    model_path = tmp_path / 'model' / 'model.json'
    assert load_model(model_path).arch.value == 'mlp'
    printed = run('evaluate', '--model', str(model_path), '--in', data, '--out', str(tmp_path / 'eval'),
                  '--split', *TRAIN_FLAGS)
    rows = read_table(tmp_path / 'eval' / 'metrics.csv', REPORT_COLUMNS)
    assert [row['group'] for row in rows] == ['0', '1', 'all']
    assert all(row['run_id'] == 'model' for row in rows)
    assert 'split_auc' in json.loads((tmp_path / 'eval' / 'split.json').read_text(encoding='utf-8'))
    assert printed.startswith('split_auc ')


def test_experiment_and_report(tmp_path):
    out = tmp_path / 'run'
    printed = run('experiment', 'degradation', '--out', str(out), '--targets', '0.6', '0.95', '--rates', '0.3',
                  '--n-train', '1000', '--n-test', '800', '--n-seeds', '2', '--arch', 'linear',
                  '--set', 'train_config.max_epochs=5', '--seed', '9')
    assert printed.startswith('degradation experiment: 8 models, 16 tests')
    config = json.loads((out / RUN_FILES['config']).read_text(encoding='utf-8'))
    assert config['master_seed'] == 9
    assert config['train_config']['max_epochs'] == 5
    assert config['output_dir'] == str(out)
    assert run('report', str(out)) == printed


def test_experiment_config_file(tmp_path):
    config_path = tmp_path / 'config.yaml'
    config_path.write_text(
        'separability_targets: [0.7]\nn_train: 800\nn_test: 500\nn_seeds: 2\narch: linear\n'
        'master_seed: 2\ntrain_config:\n  max_epochs: 5\n',
        encoding='utf-8',
    )
    out = tmp_path / 'run'
    printed = run('experiment', 'audit', '--out', str(out), '--config', str(config_path), '--n-seeds', '3')
    config = json.loads((out / RUN_FILES['config']).read_text(encoding='utf-8'))
    assert (config['n_seeds'], config['master_seed']) == (3, 2)
    assert printed.startswith('audit experiment: 3 models, 0 tests')


@pytest.mark.parametrize('argv', [
    ['generate', '--n', '10', '--auc', '1.5', '--out', 'unused'],
    ['experiment', 'split', '--out', 'unused', '--arch', 'linear', '--n-seeds', '1'],
    ['audit', '--in', 'data.csv', '--out', 'unused', '--max-epochs', '0'],
])
def test_domain_errors(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(CommandError) as error:
        run(*argv)
    assert error.value.returncode == EXIT_DOMAIN


def test_missing_input_is_an_io_error(tmp_path):
    with pytest.raises(CommandError) as error:
        run('inject', '--in', str(tmp_path / 'absent.csv'), '--out', str(tmp_path / 'noisy.csv'))
    assert error.value.returncode == EXIT_IO


def test_report_of_corrupt_run(tmp_path):
    (tmp_path / 'run').mkdir()
    with pytest.raises(CommandError, match='missing run file') as error:
        run('report', str(tmp_path / 'run'))
    assert error.value.returncode == EXIT_IO


def test_bad_option_value():
    with pytest.raises(CommandError, match='invalid choice'):
        run('inject', '--in', 'data.csv', '--out', 'noisy.csv', '--rate', '0.2', '--group', '2')


def test_command_line_exit_codes(tmp_path, capsys):
    (tmp_path / 'run').mkdir()
    with pytest.raises(SystemExit) as exit_info:
        execute_from_command_line(['manage.py', 'report', str(tmp_path / 'run')])
    assert exit_info.value.code == EXIT_IO
    assert 'CommandError: missing run file' in capsys.readouterr().err
    with pytest.raises(SystemExit) as exit_info:
        execute_from_command_line(['manage.py', 'generate', '--n', '10', '--auc', '1.5', '--out', str(tmp_path)])
    assert exit_info.value.code == EXIT_DOMAIN
    with pytest.raises(SystemExit) as exit_info:
        execute_from_command_line(['manage.py', 'inject', '--in', 'data.csv'])
    assert exit_info.value.code == 2


def test_help_lists_laboratory_commands(capsys):
    execute_from_command_line(['manage.py', 'help'])
    printed = capsys.readouterr().out
    for name in ('generate', 'inject', 'audit', 'train', 'evaluate', 'experiment', 'report'):
        assert name in printed
