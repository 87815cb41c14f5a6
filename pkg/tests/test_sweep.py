import json

import pytest

from shock_evans.errors import ConfigError
from shock_evans.gas_model import eucken_nu_over_mu, v_star
from shock_evans.sweep import (SweepConfig, SweepRecord, build_grid, journal_path, read_journal, run_sweep,
                               v_plus_ladder)

CALLS = []


def fake_runner(params, config):
    CALLS.append(params.key())
    return SweepRecord.base(params, winding=0, Lambda_star=40.0, radius_used=10.0, wall_ms=1.0)


def failing_runner(params, config):
    if params.v_plus == params.v_star:
        return SweepRecord.base(params, status='error(fit)', message='sign change')
    return fake_runner(params, config)


def _config(tmp_path, **values):
    data = {'gamma_list': [0.4, 2.0 / 3.0], 'nu_list': [1.0, 2.0], 'v_plus_count': 3, 'out_dir': str(tmp_path)}
    data.update(values)
    return SweepConfig.from_dict(data)


def test_v_plus_ladder():
    ladder = v_plus_ladder(2.0 / 3.0, 8)
    assert len(ladder) == 8
    assert ladder[0] == 0.7
    assert ladder[-1] == v_star(2.0 / 3.0)
    assert ladder[-2] == pytest.approx(v_star(2.0 / 3.0) + 1e-3)
    assert all(a > b for a, b in zip(ladder, ladder[1:]))
    offsets = [v - v_star(2.0 / 3.0) for v in ladder[:-1]]
    ratios = [b / a for a, b in zip(offsets, offsets[1:])]
    assert max(ratios) == pytest.approx(min(ratios))
    assert v_plus_ladder(0.4, 1) == [v_star(0.4)]
    with pytest.raises(ConfigError):
        v_plus_ladder(2.0, 4, v_plus_max=0.5)


def test_build_grid_order(tmp_path):
    grid = build_grid(_config(tmp_path))
    assert len(grid) == 12
    assert [p.gruneisen for p in grid[:6]] == [0.4] * 6
    assert [p.nu for p in grid[:6]] == [1.0] * 3 + [2.0] * 3
    assert grid[0].v_plus == 0.7 and grid[2].v_plus == v_star(0.4)
    fixed = build_grid(_config(tmp_path, v_plus_list=[0.5]))
    assert [p.v_plus for p in fixed] == [0.5] * 4
    with pytest.raises(ConfigError):
        build_grid(_config(tmp_path, v_plus_list=[0.1]))


def test_build_grid_resolves_per_gamma(tmp_path):
    grid = build_grid(_config(tmp_path, nu_list=['eucken', 2.0], v_plus_list=['Star', 0.5], mu=2.0))
    assert len(grid) == 8
    assert [p.nu for p in grid[:4]] == pytest.approx([2.85, 2.85, 2.0, 2.0])
    assert [p.nu for p in grid[4:]] == pytest.approx([2.0 * eucken_nu_over_mu(5.0 / 3.0)] * 2 + [2.0] * 2)
    assert [p.v_plus for p in grid[:2]] == pytest.approx([v_star(0.4), 0.5])
    assert grid[4].v_plus == pytest.approx(v_star(2.0 / 3.0))
    with pytest.raises(ConfigError):
        _config(tmp_path, nu_list=['prandtl'])


@pytest.mark.parametrize('values', [
    {'gamma_list': []},
    {'radius_policy': 'largest'},
    {'radius_policy': 'fixed'},
    {'n_points': 4},
    {'jobs': 0},
    {'v_plus_count': 0},
    {'colour': 'blue'},
])
def test_config_errors(tmp_path, values):
    with pytest.raises(ConfigError):
        _config(tmp_path, **values)


def test_config_json(tmp_path):
    config = _config(tmp_path, radius_policy='fixed', fixed_radius=12.0)
    path = tmp_path / 'sweep.json'
    path.write_text(json.dumps(config.to_dict()))
    assert SweepConfig.from_json(path) == config
    assert config.radius == 12.0
    assert _config(tmp_path).radius == 'practical'
    path.write_text('{"gamma_list": [0.4],')
    with pytest.raises(ConfigError):
        SweepConfig.from_json(path)


def test_sweep_journal_and_resume(tmp_path):
    config = _config(tmp_path)
    CALLS.clear()
    records = run_sweep(config, runner=fake_runner)
    assert len(records) == 12 == len(CALLS)
    assert [r.key for r in records] == [p.key() for p in build_grid(config)]
    lines = journal_path(config).read_text().splitlines()
    assert len(lines) == 12
    assert json.loads(lines[0])['theta_minus'] == 'nan'

    # an interrupted run leaves a partial journal with a torn last line
    journal_path(config).write_text("\n".join(lines[:5]) + "\n" + lines[5][:20])
    assert len(read_journal(journal_path(config))) == 5
    CALLS.clear()
    resumed = run_sweep(config, resume=True, runner=fake_runner)
    assert len(CALLS) == 7
    assert [r.key for r in resumed] == [r.key for r in records]
    assert resumed[0].Lambda_star == records[0].Lambda_star == 40.0

    CALLS.clear()
    run_sweep(config, resume=True, runner=fake_runner)
    assert CALLS == []


def test_sweep_restart_discards_journal(tmp_path):
    config = _config(tmp_path)
    run_sweep(config, runner=fake_runner)
    CALLS.clear()
    run_sweep(config, runner=fake_runner)
    assert len(CALLS) == 12
    assert len(journal_path(config).read_text().splitlines()) == 12


def test_error_records(tmp_path):
    records = run_sweep(_config(tmp_path), runner=failing_runner)
    failed = [r for r in records if not r.ok]
    assert len(failed) == 4
    assert all(r.status == 'error(fit)' and r.winding is None for r in failed)


def test_refine_checks(tmp_path):
    records = run_sweep(_config(tmp_path, refine_checks=3, seed=1), runner=fake_runner)
    assert sum(r.refined_winding is not None for r in records) == 3


def test_parallel_sweep(tmp_path):
    records = run_sweep(_config(tmp_path, jobs=2), runner=fake_runner)
    assert [r.key for r in records] == [p.key() for p in build_grid(_config(tmp_path))]
    assert len(journal_path(_config(tmp_path)).read_text().splitlines()) == 12


def test_record_round_trip():
    grid = build_grid(SweepConfig(gamma_list=(0.4,), nu_list=(1.0,), v_plus_count=2))
    record = SweepRecord.base(grid[1], winding=1, status='ok')
    restored = SweepRecord.from_dict(json.loads(json.dumps(record.to_dict(), default=str)))
    assert restored.winding == 1
    assert restored.key == record.key
