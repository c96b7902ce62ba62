import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from cli import RunConfig, SweepRunner, main, make_command, sweep
from cli.commands import FiguresCommand
from cli.config import OUT_ENV
from helpers.errors import ConfigError, InvalidDeviceError, UnknownCommandError
from helpers.units import ueV_to_rad_ns

DEVICE = """
[device]
g = 20
kappa_top = 12
kappa_bottom = 12
kappa_loss = 16
gamma_sp = 0.5
eta_in = 0.9
"""


@pytest.fixture
def device_cfg(tmp_path):
    path = tmp_path / 'device.cfg'
    path.write_text(DEVICE)
    return path


def run_main(argv, capsys):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


class TestRunConfig:
    """Parsing, units, overrides and hashing"""

    def test_plain_numbers_use_schema_units(self, device_cfg):
        config = RunConfig.load(device_cfg)
        assert config.get('device', 'g') == 20.0
        assert config.device_params().g == pytest.approx(ueV_to_rad_ns(20.0))

    def test_unit_suffix(self):
        config = RunConfig.load(None, ['device.g=0.02 meV', 'telegraph.dt=500 ns'])
        assert config.get('device', 'g') == pytest.approx(20.0)
        assert config.get('telegraph', 'dt') == pytest.approx(0.5)

    def test_wrong_dimension_is_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig.load(None, ['device.g=16 us']).get('device', 'g')

    @pytest.mark.parametrize('override', ['device.colour=red', 'nothing.g=1', 'device.g', 'g=1'])
    def test_bad_overrides(self, override):
        with pytest.raises(ConfigError):
            RunConfig.load(None, [override])

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.load(tmp_path / 'absent.cfg')

    def test_bad_integer(self):
        with pytest.raises(ConfigError):
            RunConfig.load(None, ['solver.n_max=2.5']).get('solver', 'n_max')

    def test_hash_ignores_comments_whitespace_and_order(self, tmp_path, device_cfg):
        shuffled = tmp_path / 'shuffled.cfg'
        shuffled.write_text("# same device\n[device]\neta_in=0.9   # input coupling\ngamma_sp = 0.5\n"
                            "kappa_loss =16\n\nkappa_bottom= 12\nkappa_top = 12\ng = 20\n")
        assert RunConfig.load(device_cfg).hash() == RunConfig.load(shuffled).hash()
        assert RunConfig.load(device_cfg, ['device.g=21']).hash() != RunConfig.load(device_cfg).hash()

    @given(st.integers(min_value=0, max_value=2 ** 31))
    def test_hash_tracks_seed(self, seed):
        a = RunConfig.load(None, [f'run.seed={seed}'])
        b = RunConfig({'run': {'seed': str(seed)}})
        assert a.hash() == b.hash()
        assert a.seed == seed

    def test_override_replaces_file_value(self, device_cfg):
        config = RunConfig.load(device_cfg, ['device.g=25'])
        assert config.get('device', 'g') == 25.0

    def test_fit_level_device(self):
        config = RunConfig({'device': {'cooperativity': '2.5', 'eta_top': '0.08', 'eta_in': '0.95',
                                       'g': '16', 'kappa': '46', 'gamma_sp': '0.5'}})
        params = config.device_params()
        assert params.gamma_star == pytest.approx(ueV_to_rad_ns(1.976), rel=1e-3)
        assert params.kappa == pytest.approx(ueV_to_rad_ns(46.0), rel=1e-9)
        assert params.eta_top == pytest.approx(0.08)

    def test_fit_level_device_with_negative_dephasing(self):
        config = RunConfig({'device': {'cooperativity': '50', 'eta_top': '0.08', 'g': '16',
                                       'kappa': '46', 'gamma_sp': '0.5'}})
        with pytest.raises(InvalidDeviceError):
            config.device_params()

    def test_out_dir_precedence(self, tmp_path, monkeypatch):
        monkeypatch.delenv(OUT_ENV, raising=False)
        assert RunConfig.load(None).out_dir == Path('out')
        monkeypatch.setenv(OUT_ENV, str(tmp_path / 'env'))
        assert RunConfig.load(None).out_dir == tmp_path / 'env'
        assert RunConfig.load(None, [f'run.out={tmp_path / "cfg"}']).out_dir == tmp_path / 'cfg'


class TestCommands:
    """Command registry and the main entry point"""

    def test_make_command(self):
        assert make_command('figures').name == 'figures'
        assert make_command('gate', 'sweep').name == 'gate sweep'
        with pytest.raises(UnknownCommandError):
            make_command('bogus')
        with pytest.raises(UnknownCommandError):
            make_command('figures', 'extra')
        with pytest.raises(UnknownCommandError):
            make_command('gate', 'teleport')

    def test_figures(self, device_cfg, tmp_path, capsys):
        code, summary = run_main(['figures', '--config', device_cfg, '--out', tmp_path], capsys)
        assert code == 0
        out = summary['outputs']
        assert out['beta'] == pytest.approx(out['purcell'] / (out['purcell'] + 1))
        assert out['regime'] == 'strong'
        assert (tmp_path / 'figures.csv').is_file()
        assert (tmp_path / 'figures_summary.json').is_file()
        assert summary['config_hash'] == RunConfig.load(device_cfg, [f'run.out={tmp_path}']).hash()

    def test_gate_fidelity(self, tmp_path, capsys):
        code, summary = run_main(['gate', 'fidelity', '--M', '0.76', '--out', tmp_path], capsys)
        assert code == 0
        assert summary['outputs']['F'] == pytest.approx(0.7097, abs=1e-4)
        assert summary['annotations']['measured_correct_output'] == 0.684

    def test_unknown_command(self, capsys):
        code, error = run_main(['bogus'], capsys)
        assert code == 2
        assert error['error'] == 'UnknownCommandError'
        assert error['exit_code'] == 2

    def test_stochastic_command_needs_seed(self, tmp_path, capsys):
        code, error = run_main(['g2', '--out', tmp_path], capsys)
        assert code == ConfigError.exit_code
        assert 'seed' in error['message']

    def test_invalid_device_exit_code(self, device_cfg, tmp_path, capsys):
        code, error = run_main(['figures', '-c', device_cfg, '--set', 'device.g=-1', '--out', tmp_path],
                               capsys)
        assert code == InvalidDeviceError.exit_code
        assert error['error'] == 'InvalidDeviceError'

    def test_gate_sweep_is_reproducible(self, tmp_path, capsys):
        for name in ('a', 'b'):
            assert main(['gate', 'sweep', '--set', 'gate.m_points=5', '--out', str(tmp_path / name)]) == 0
        capsys.readouterr()
        assert (tmp_path / 'a' / 'fidelity_sweep.csv').read_bytes() == \
            (tmp_path / 'b' / 'fidelity_sweep.csv').read_bytes()


class TestSweep:
    """Cross-product sweeps over config paths"""

    def sweep_config(self, device_cfg, *overrides):
        return RunConfig.load(device_cfg, ['sweep.command=figures', *overrides])

    def test_single_point_matches_direct_run(self, device_cfg):
        config = self.sweep_config(device_cfg, 'sweep.axis1=device.g', 'sweep.grid1=20')
        table = sweep(config)
        direct, _ = FiguresCommand().run(RunConfig.load(device_cfg), with_tables=False)
        assert len(table) == 1
        assert table['purcell'].iloc[0] == pytest.approx(direct['purcell'], rel=1e-12)
        assert table['error'].iloc[0] == ''

    def test_two_axes_rectangular_and_ordered(self, device_cfg):
        config = self.sweep_config(device_cfg, 'sweep.axis1=device.g', 'sweep.grid1=10, 20, 30',
                                   'sweep.axis2=device.gamma_sp', 'sweep.grid2=0.5, 1')
        table = sweep(config)
        assert len(table) == 6
        assert table['device.g'].tolist() == [10.0, 10.0, 20.0, 20.0, 30.0, 30.0]
        assert table['device.gamma_sp'].tolist() == [0.5, 1.0] * 3
        assert table.columns[-1] == 'error'
        assert table['cooperativity'].iloc[0] > table['cooperativity'].iloc[1]

    def test_failing_point_is_recorded(self, device_cfg):
        config = self.sweep_config(device_cfg, 'sweep.axis1=device.g', 'sweep.grid1=20, -5')
        table = sweep(config)
        assert table['error'].iloc[0] == ''
        assert table['error'].iloc[1].startswith('InvalidDeviceError')

    def test_unknown_axis(self, device_cfg):
        config = self.sweep_config(device_cfg, 'sweep.axis1=device.colour', 'sweep.grid1=1')
        with pytest.raises(ConfigError):
            SweepRunner(config)

    def test_csv_is_byte_identical(self, device_cfg, tmp_path):
        for name in ('a', 'b'):
            config = self.sweep_config(device_cfg, 'sweep.axis1=device.g', 'sweep.grid1=10, 20',
                                       f'run.out={tmp_path / name}')
            SweepRunner(config).execute()
        assert (tmp_path / 'a' / 'sweep.csv').read_bytes() == (tmp_path / 'b' / 'sweep.csv').read_bytes()

    def test_sweep_through_main(self, device_cfg, tmp_path, capsys):
        code, summary = run_main(['sweep', '-c', device_cfg, '--set', 'sweep.command=figures',
                                  '--set', 'sweep.axis1=device.g', '--set', 'sweep.grid1=10, 20',
                                  '--out', tmp_path], capsys)
        assert code == 0
        assert summary['outputs']['points'] == 2
        assert summary['outputs']['failed'] == 0
        assert (tmp_path / 'sweep.csv').is_file()
