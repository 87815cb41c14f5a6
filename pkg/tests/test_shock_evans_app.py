import json
from pathlib import Path

import pytest

from shock_evans.gas_model import v_star
from shock_evans.shock_evans_app import EXIT_FAILURE, EXIT_OK, EXIT_UNSTABLE, ShockEvansApp
from shock_evans.shock_evans_settings import ShockEvansSettings
from shock_evans.sweep import EUCKEN, STAR, SweepConfig, SweepRecord, build_grid


def _settings(*argv):
    with ShockEvansSettings(argv=list(argv)) as settings:
        return settings


def test_point_settings():
    settings = _settings('endstates', '--gamma', '0.4', '--vplus', 'star')
    assert settings.command == 'endstates'
    assert settings.vplus == v_star(0.4)
    assert settings.nu is None and settings.mu == 1.0
    assert settings.policy == 'practical' and settings.points == 180


def test_radius_selects_fixed_policy():
    settings = _settings('winding', '--gamma', '0.4', '--vplus', '0.3', '--radius', '20')
    assert settings.policy == 'fixed' and settings.radius == 20.0


@pytest.mark.parametrize('argv', [
    [],
    ['endstates', '--vplus', '0.5'],
    ['endstates', '--gamma', '0.4'],
    ['endstates', '--gamma', '0.4', '--vplus', '0.1'],
    ['winding', '--gamma', '0.4', '--vplus', '0.5', '--policy', 'fixed'],
    ['sweep', '--points', '4'],
    ['sweep', '--jobs', '0'],
    ['sweep', '-v', '-q'],
    ['launch'],
])
def test_invalid_settings(argv):
    with pytest.raises(SystemExit):
        _settings(*argv)


def test_json_config_layers_under_flags(tmp_path):
    path = tmp_path / 'sweep.json'
    path.write_text(json.dumps({'gamma_list': [0.4], 'nu_list': [1.47], 'n_points': 60, 'out_dir': 'run1'}))
    settings = _settings('sweep', '--config', str(path))
    assert settings.points == 60 and settings.out == 'run1'
    assert settings.config_data['gamma_list'] == [0.4]
    assert _settings('sweep', '--config', str(path), '--points', '90').points == 90


def test_sweep_config_from_settings(tmp_path):
    path = tmp_path / 'sweep.json'
    path.write_text(json.dumps({'gamma_list': [0.4, 0.6], 'v_plus_count': 2}))
    app = ShockEvansApp(_settings('sweep', '--config', str(path), '--out', str(tmp_path), '--jobs', '2'))
    config = app._sweep_config()
    assert config.gamma_list == pytest.approx((0.4, 0.6))
    assert config.nu_list == (EUCKEN,)
    # Eucken's nu/mu follows each Gamma
    nus = sorted({params.nu for params in build_grid(config)})
    assert nus == pytest.approx([1.425, 1.7625])
    assert config.jobs == 2 and config.out_dir == str(tmp_path)

    app = ShockEvansApp(_settings('sweep', '--config', str(path), '--gamma', '0.2', '--vplus', '0.5'))
    config = app._sweep_config()
    assert config.gamma_list == pytest.approx((0.2,)) and config.v_plus_list == pytest.approx((0.5,))


def test_sweep_v_plus_star(tmp_path):
    path = tmp_path / 'sweep.json'
    path.write_text(json.dumps({'gamma_list': [0.4, 2.0 / 3.0], 'nu_list': [1.0]}))
    app = ShockEvansApp(_settings('sweep', '--config', str(path), '--vplus', 'star'))
    config = app._sweep_config()
    assert config.v_plus_list == (STAR,)
    grid = build_grid(config)
    assert [params.v_plus for params in grid] == pytest.approx([v_star(0.4), v_star(2.0 / 3.0)])


def test_endstates_command(capsys):
    code = ShockEvansApp(_settings('endstates', '--gamma', '0.6666666666666666', '--vplus', '0.4')).execute()
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data['e_minus'] == pytest.approx(0.18)
    assert data['mach'] == pytest.approx(5.0 ** 0.5)


def test_strong_shock_endstates_output(capsys):
    assert ShockEvansApp(_settings('endstates', '--gamma', '0.4', '--vplus', 'star')).execute() == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data['mach'] == 'inf'
    assert data['energy_ratio'] == 'inf'


def test_profile_command(tmp_path, capsys):
    code = ShockEvansApp(_settings('profile', '--gamma', '0.6666666666666666', '--nu', '1', '--vplus', '0.5',
                                   '--out', str(tmp_path))).execute()
    assert code == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert max(data['endpoint_errors']) <= 1e-3
    assert Path(data['file']).is_file()
    assert Path(data['file']).parent == tmp_path


def test_failures_become_exit_codes(tmp_path):
    assert ShockEvansApp(_settings('plot', '--out', str(tmp_path))).execute() == 2
    assert ShockEvansApp(_settings('sweep', '--out', str(tmp_path))).execute() == 2


def test_sweep_exit_codes():
    grid = build_grid(SweepConfig(gamma_list=(0.4,), nu_list=(1.0,), v_plus_count=2))
    stable = [SweepRecord.base(params, winding=0) for params in grid]
    unstable = [SweepRecord.base(grid[0], winding=1), stable[1]]
    failed = [stable[0], SweepRecord.base(grid[1], status='error(fit)')]
    app = ShockEvansApp(_settings('sweep', '--gamma', '0.4'))
    assert app._sweep_exit_code(stable, expected=2) == EXIT_OK
    assert app._sweep_exit_code(unstable, expected=2) == EXIT_UNSTABLE
    assert app._sweep_exit_code(failed, expected=2) == EXIT_FAILURE
    assert app._sweep_exit_code(stable[:1], expected=2) == EXIT_FAILURE
