# coding=utf-8

"""
Parameter sweeps: grid construction, per-point verdicts and a resumable JSON-lines journal.

Every grid point runs the sequential pipeline profile -> bound -> contour -> winding.  Records are appended
to ``<out_dir>/journal.jsonl`` as soon as they exist; a resumed sweep skips keys already journaled.
"""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from shock_evans.errors import ConfigError, ShockEvansError
from shock_evans.gas_model import ModelParams, eucken_nu_over_mu, mach_number, rankine_hugoniot, v_star
from shock_evans.graceful_interrupt_handler import GracefulInterruptHandler
from shock_evans.safe_edit import append_json_line

__docformat__ = 'restructuredtext en'
__all__ = ('RADIUS_POLICIES', 'EUCKEN', 'STAR', 'CSV_COLUMNS', 'SweepConfig', 'SweepRecord', 'v_plus_ladder',
           'build_grid', 'evaluate_point', 'run_sweep', 'read_journal', 'journal_path', 'contour_path')

RADIUS_POLICIES = ('tracking', 'practical', 'fixed')
CSV_COLUMNS = ('gamma', 'nu', 'mu', 'v_plus', 'v_star', 'mach', 'e_minus', 'e_plus', 'u_plus', 'theta_minus',
               'theta_plus', 'L_minus', 'L_plus', 'Lambda_star', 'radius_used', 'winding', 'max_arg_step',
               'method_agreement', 'wall_ms', 'status')
JOURNAL_NAME = 'journal.jsonl'
CONTOUR_DIR = 'contours'
# list entries resolved per Gamma in build_grid
EUCKEN = 'eucken'
STAR = 'star'


def _entry(value: Union[str, float], sentinel: str) -> Union[str, float]:
    if isinstance(value, str) and value.strip().lower() == sentinel:
        return sentinel
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number or '{sentinel}', got {value!r}")


@dataclass(frozen=True)
class SweepConfig:
    """
    nu_list entries may be 'eucken' for nu = mu nu/mu(Gamma + 1) by Eucken's prediction, and v_plus_list
    entries may be 'star' for v+ = v*(Gamma).
    """
    gamma_list: Tuple[float, ...]
    nu_list: Tuple[Union[float, str], ...]
    mu: float = 1.0
    v_plus_count: int = 8
    v_plus_max: float = 0.7
    min_offset: float = 1e-3
    v_plus_list: Optional[Tuple[Union[float, str], ...]] = None
    radius_policy: str = 'practical'
    fixed_radius: Optional[float] = None
    n_points: int = 180
    out_dir: str = 'shock_evans_out'
    jobs: int = 1
    seed: int = 0
    refine_checks: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'gamma_list', tuple(float(g) for g in self.gamma_list))
        object.__setattr__(self, 'nu_list', tuple(_entry(n, EUCKEN) for n in self.nu_list))
        if self.v_plus_list is not None:
            object.__setattr__(self, 'v_plus_list', tuple(_entry(v, STAR) for v in self.v_plus_list))
        if not self.gamma_list or not self.nu_list:
            raise ConfigError("gamma_list and nu_list must not be empty")
        if self.v_plus_list is not None and not self.v_plus_list:
            raise ConfigError("v_plus_list must not be empty when given")
        if self.radius_policy not in RADIUS_POLICIES:
            raise ConfigError(f"radius_policy must be one of {RADIUS_POLICIES}, got {self.radius_policy!r}")
        if self.radius_policy == 'fixed' and not (self.fixed_radius and self.fixed_radius > 0):
            raise ConfigError("radius_policy 'fixed' requires a positive fixed_radius")
        if self.v_plus_count < 1:
            raise ConfigError(f"v_plus_count must be at least 1, got {self.v_plus_count}")
        if not 0 < self.min_offset:
            raise ConfigError(f"min_offset must be positive, got {self.min_offset}")
        if self.n_points < 8:
            raise ConfigError(f"n_points must be at least 8, got {self.n_points}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if self.refine_checks < 0:
            raise ConfigError(f"refine_checks must not be negative, got {self.refine_checks}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepConfig':
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown sweep config keys: {sorted(unknown)}")
        try:
            return cls(**{key: value for key, value in data.items() if value is not None or key in
                          ('v_plus_list', 'fixed_radius')})
        except TypeError as ex:
            raise ConfigError(f"invalid sweep config: {ex}")

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> 'SweepConfig':
        try:
            with open(path, 'r', encoding='utf-8') as in_file:
                return cls.from_dict(json.load(in_file))
        except json.JSONDecodeError as ex:
            raise ConfigError(f"{path} is not valid JSON: {ex}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ('gamma_list', 'nu_list', 'v_plus_list'):
            if data[key] is not None:
                data[key] = list(data[key])
        return data

    @property
    def radius(self) -> Union[str, float]:
        """The radius policy as stability_verdict takes it."""
        return self.fixed_radius if self.radius_policy == 'fixed' else self.radius_policy

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)


def v_plus_ladder(gruneisen: float, count: int, v_plus_max: float = 0.7, min_offset: float = 1e-3) -> List[float]:
    """
    count values from v_plus_max down to v*: geometric in v+ - v* from v_plus_max - v* to min_offset,
    then v* itself.
    """
    vs = v_star(gruneisen)
    if count == 1:
        return [vs]
    if not v_plus_max - vs > min_offset:
        raise ConfigError(f"v_plus_max={v_plus_max} leaves no room above v*={vs:.6g} for Gamma={gruneisen}")
    offsets = np.geomspace(v_plus_max - vs, min_offset, count - 1)
    ladder = [vs + float(offset) for offset in offsets] + [vs]
    ladder[0] = v_plus_max
    return ladder


def build_grid(config: SweepConfig) -> List[ModelParams]:
    """Gamma x nu x v+ in that nesting order, the 'eucken' and 'star' entries resolved per Gamma."""
    grid = []
    for gruneisen in config.gamma_list:
        for entry in config.nu_list:
            nu = eucken_nu_over_mu(gruneisen + 1.0) * config.mu if entry == EUCKEN else entry
            ladder = ([v_star(gruneisen) if v == STAR else v for v in config.v_plus_list]
                      if config.v_plus_list is not None else
                      v_plus_ladder(gruneisen, config.v_plus_count, config.v_plus_max, config.min_offset))
            for v_plus in ladder:
                try:
                    grid.append(ModelParams(gruneisen=gruneisen, nu=nu, mu=config.mu, v_plus=v_plus))
                except ShockEvansError as ex:
                    raise ConfigError(f"grid point Gamma={gruneisen} nu={nu} v_plus={v_plus}: {ex}")
    return grid


@dataclass(frozen=True)
class SweepRecord:
    gamma: float
    nu: float
    mu: float
    v_plus: float
    v_star: float
    mach: float
    e_minus: float
    e_plus: float
    u_plus: float
    theta_minus: float = math.nan
    theta_plus: float = math.nan
    L_minus: float = math.nan
    L_plus: float = math.nan
    Lambda_star: float = math.nan
    radius_used: float = math.nan
    winding: Optional[int] = None
    max_arg_step: float = math.nan
    method_agreement: float = math.nan
    wall_ms: float = math.nan
    status: str = 'ok'
    practical_radius: float = math.nan
    C: float = math.nan
    alpha: float = math.nan
    fit_residual: float = math.nan
    refined_winding: Optional[int] = None
    message: str = field(default='', compare=False)

    @property
    def params(self) -> ModelParams:
        return ModelParams(gruneisen=self.gamma, nu=self.nu, mu=self.mu, v_plus=self.v_plus)

    @property
    def key(self) -> str:
        return self.params.key()

    @property
    def ok(self) -> bool:
        return self.status == 'ok'

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepRecord':
        values = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if f.name in ('winding', 'refined_winding'):
                value = None if value is None or (isinstance(value, float) and math.isnan(value)) else int(value)
            elif f.name not in ('status', 'message'):
                value = float(value) if value is not None else math.nan
            values[f.name] = value
        return cls(**values)

    @classmethod
    def base(cls, params: ModelParams, **values) -> 'SweepRecord':
        endstates = rankine_hugoniot(params)
        return cls(gamma=params.gruneisen, nu=params.nu, mu=params.mu, v_plus=params.v_plus,
                   v_star=params.v_star, mach=mach_number(params), e_minus=endstates.e_minus,
                   e_plus=endstates.e_plus, u_plus=endstates.u_plus, **values)


def journal_path(config: SweepConfig) -> Path:
    return config.out_path / JOURNAL_NAME


def contour_path(config: SweepConfig, params: ModelParams) -> Path:
    return config.out_path / CONTOUR_DIR / f"{params.key()}.txt"


def evaluate_point(params: ModelParams, config: SweepConfig) -> SweepRecord:
    """
    Stability verdict for one grid point.  Failures become error records.
    """
    from shock_evans.evans import stability_verdict

    try:
        report = stability_verdict(params, radius_policy=config.radius, n_points=config.n_points)
    except ShockEvansError as ex:
        logging.error(f"{params.key()}: {ex.kind} error: {ex}")
        return SweepRecord.base(params, status=f"error({ex.kind})", message=str(ex))
    except (ArithmeticError, np.linalg.LinAlgError) as ex:
        logging.error(f"{params.key()}: numerical failure: {ex}")
        return SweepRecord.base(params, status='error(numerical)', message=str(ex))

    path = contour_path(config, params)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.contour.export(path)
    approximant = report.approximant
    practical = report.practical
    return SweepRecord.base(
        params, theta_minus=report.theta_minus, theta_plus=report.theta_plus, L_minus=report.L_minus,
        L_plus=report.L_plus, Lambda_star=report.tracking.Lambda_star, radius_used=report.radius_used,
        winding=report.winding, max_arg_step=report.max_arg_step, method_agreement=report.method_agreement,
        wall_ms=report.wall_ms, status='ok',
        practical_radius=practical.radius if practical is not None else math.nan,
        C=approximant.C if approximant is not None else math.nan,
        alpha=approximant.alpha if approximant is not None else math.nan,
        fit_residual=approximant.fit_residual if approximant is not None else math.nan)


def read_journal(path: Union[str, Path]) -> Dict[str, SweepRecord]:
    """
    Records by key; a later line for the same key replaces an earlier one.  A truncated last line from an
    interrupted write is skipped.
    """
    records: Dict[str, SweepRecord] = {}
    path = Path(path)
    if not path.is_file():
        return records
    with open(path, 'r', encoding='utf-8') as in_file:
        for number, line in enumerate(in_file, 1):
            if not line.strip():
                continue
            try:
                record = SweepRecord.from_dict(json.loads(line))
            except (json.JSONDecodeError, TypeError, ValueError) as ex:
                logging.warning(f"{path}:{number}: skipping unreadable journal line ({ex})")
                continue
            records[record.key] = record
    return records


def _run_points(points: Sequence[ModelParams], config: SweepConfig, runner: Callable,
                journal: Path, handler: GracefulInterruptHandler) -> Dict[str, SweepRecord]:
    done: Dict[str, SweepRecord] = {}
    total = len(points)
    if config.jobs == 1:
        for params in points:
            if handler.interrupted:
                break
            record = runner(params, config)
            append_json_line(journal, record.to_dict())
            done[record.key] = record
            logging.info(f"[{len(done)}/{total}] {record.key}: {record.status} winding={record.winding}")
        return done

    with ProcessPoolExecutor(max_workers=config.jobs) as executor:
        futures = {executor.submit(runner, params, config): params for params in points}
        for future in as_completed(futures):
            record = future.result()
            # single writer: only the parent process appends
            append_json_line(journal, record.to_dict())
            done[record.key] = record
            logging.info(f"[{len(done)}/{total}] {record.key}: {record.status} winding={record.winding}")
            if handler.interrupted:
                for pending in futures:
                    pending.cancel()
                break
    return done


def _refine_checks(records: List[SweepRecord], config: SweepConfig, runner: Callable,
                   journal: Path) -> List[SweepRecord]:
    candidates = [index for index, record in enumerate(records) if record.ok]
    count = min(config.refine_checks, len(candidates))
    if count == 0:
        return records
    rng = np.random.default_rng(config.seed)
    chosen = sorted(rng.choice(candidates, size=count, replace=False).tolist())
    refined_config = replace(config, n_points=2 * config.n_points, refine_checks=0)
    records = list(records)
    for index in chosen:
        record = records[index]
        check = runner(record.params, refined_config)
        if not check.ok or check.winding != record.winding:
            logging.warning(f"{record.key}: winding {record.winding} at {config.n_points} points but "
                            f"{check.winding} ({check.status}) at {refined_config.n_points}")
        records[index] = replace(record, refined_winding=check.winding)
        append_json_line(journal, records[index].to_dict())
    return records


def run_sweep(config: SweepConfig, resume: bool = False,
              runner: Callable[[ModelParams, SweepConfig], SweepRecord] = evaluate_point) -> List[SweepRecord]:
    """
    Evaluate the grid, journaling each record as it completes.

    :param config: the sweep configuration
    :param resume: keep the existing journal and evaluate only missing points
    :param runner: per-point evaluation, picklable when config.jobs > 1
    :return: records in grid order; fewer than the grid when interrupted
    """
    grid = build_grid(config)
    config.out_path.mkdir(parents=True, exist_ok=True)
    journal = journal_path(config)
    existing = read_journal(journal) if resume else {}
    if not resume and journal.exists():
        journal.unlink()
    pending = [params for params in grid if params.key() not in existing]
    logging.info(f"sweep of {len(grid)} points: {len(grid) - len(pending)} journaled, {len(pending)} to run")

    with GracefulInterruptHandler() as handler:
        done = _run_points(pending, config, runner, journal, handler)
        if handler.interrupted:
            logging.warning(f"sweep interrupted with {len(grid) - len(existing) - len(done)} points left")

    results = {**existing, **done}
    records = [results[params.key()] for params in grid if params.key() in results]
    if config.refine_checks and len(records) == len(grid):
        records = _refine_checks(records, config, runner, journal)
    return records
