import pytest

from bimod.utils.config import DEFAULT_CONFIG, load_config
from bimod.utils.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ('BIMOD_SEED', 'BIMOD_N_JOBS', 'BIMOD_FORMAT'):
        monkeypatch.delenv(name, raising=False)


def test_defaults_without_file(tmp_path):
    config = load_config(str(tmp_path / 'missing.yaml'), use_env=False)
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_yaml_overrides_are_merged(tmp_path):
    path = tmp_path / 'config.yaml'
    path.write_text("n_jobs: 2\nverifications:\n  compat:\n    equivalence_trials: 7\n", encoding='utf-8')
    config = load_config(str(path), use_env=False)
    assert config['n_jobs'] == 2
    assert config['verifications']['compat']['equivalence_trials'] == 7
    assert config['verifications']['compat']['max_degree'] == DEFAULT_CONFIG['verifications']['compat']['max_degree']


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv('BIMOD_SEED', '7')
    monkeypatch.setenv('BIMOD_FORMAT', 'json')
    config = load_config(str(tmp_path / 'missing.yaml'))
    assert config['random_state'] == 7
    assert config['format'] == 'json'


@pytest.mark.parametrize('text', [
    "n_jobs: 0\n",
    "format: xml\n",
    "random_state: -1\n",
    "verifications:\n  center:\n    bound: many\n",
    "verifications:\n  middle_linear:\n    zeta3_window: [0, 1]\n",
    "- not a mapping\n",
    "n_jobs: [\n",
])
def test_invalid_values(tmp_path, text):
    path = tmp_path / 'config.yaml'
    path.write_text(text, encoding='utf-8')
    with pytest.raises(ConfigError):
        load_config(str(path), use_env=False)


def test_repository_config_is_valid():
    config = load_config(use_env=False)
    assert config['matrixgeo']['n'] == 2
    assert config['paths']['reports'] == 'reports'
