"""
명령행 진입점 테스트
"""

import logging

import pandas as pd
import pytest

import main

SMALL_CONFIG = """\
alpha1_re = 1
alpha2_re = 0.8
eps1 = 1
t_max = 2
steps = 40
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / 'small.txt'
    path.write_text(SMALL_CONFIG, encoding='utf-8')
    return path


class TestCommands:
    def test_list(self, capsys):
        assert main.main(['list']) == main.EXIT_OK
        assert 'fig1a' in capsys.readouterr().out

    def test_unknown_preset(self, tmp_path):
        assert main.main(['run', 'fig99', '--out', str(tmp_path)]) == main.EXIT_UNKNOWN_NAME

    def test_bad_config_key(self, tmp_path, caplog):
        path = tmp_path / 'bad.txt'
        path.write_text("alpha1_re = 1\nalpha2_re = 1\ncolour = red\n", encoding='utf-8')
        with caplog.at_level(logging.ERROR):
            assert main.main(['run', '--config', str(path), '--out', str(tmp_path)]) == main.EXIT_BAD_CONFIG
        assert 'colour' in caplog.text

    def test_missing_config_file(self, tmp_path):
        missing = tmp_path / 'missing.txt'
        assert main.main(['run', '--config', str(missing), '--out', str(tmp_path)]) == main.EXIT_BAD_CONFIG

    def test_preset_and_config_together(self, config_path, tmp_path):
        code = main.main(['run', 'fig1a', '--config', str(config_path), '--out', str(tmp_path)])
        assert code == main.EXIT_BAD_CONFIG

    def test_bad_snapshot(self, config_path, tmp_path):
        code = main.main(['run', '--config', str(config_path), '--out', str(tmp_path), '--snapshot', '1,x'])
        assert code == main.EXIT_BAD_CONFIG

    def test_unwritable_output(self, config_path, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('', encoding='utf-8')
        assert main.main(['run', '--config', str(config_path), '--out', str(blocker)]) == main.EXIT_UNWRITABLE

    def test_config_run(self, config_path, tmp_path):
        out = tmp_path / 'results'
        code = main.main(['run', '--config', str(config_path), '--out', str(out), '--snapshot', '0.5', '--gnuplot'])
        assert code == main.EXIT_OK
        scenario_dir = out / 'small'
        inversion = pd.read_csv(scenario_dir / 'inversion.csv')
        assert list(inversion.columns) == ['curve', 'T', 'sigma_z']
        assert len(inversion) == 40
        assert set(inversion['curve']) == {'config'}
        assert (scenario_dir / 'phase1d_T0.5.csv').exists()
        assert (scenario_dir / 'summary.json').exists()
        assert (scenario_dir / 'plot.gp').exists()


class TestVerifyCommand:
    def test_unknown_profile(self):
        assert main.main(['verify', '--tol', 'nope']) == main.EXIT_UNKNOWN_NAME

    def test_wigner_suite(self, capsys):
        assert main.main(['verify', '--only', 'wigner', '--tol', 'quick']) == main.EXIT_OK
        assert '✅' in capsys.readouterr().out

    def test_unknown_suite_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main.main(['verify', '--only', 'entropy'])


class TestSnapshots:
    def test_parse(self):
        assert main.parse_snapshots('4.42, 6.2999,9.32') == [4.42, 6.2999, 9.32]

    def test_empty(self):
        with pytest.raises(main.ConfigError):
            main.parse_snapshots(' , ')
