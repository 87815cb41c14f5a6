# coding=utf-8

"""
This is the object responsible for running one command: it builds the parameter point or sweep config from
the settings, runs the computation and writes data results to stdout as JSON and files under --out.
"""

import argparse
import json
import logging
import math
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from shock_evans.errors import ConfigError, ShockEvansError
from shock_evans.gas_model import ModelParams, eucken_nu_over_mu, mach_number, rankine_hugoniot
from shock_evans.safe_edit import json_safe
from shock_evans.sweep import CONTOUR_DIR, EUCKEN, STAR, SweepConfig, SweepRecord, build_grid, run_sweep

__docformat__ = 'restructuredtext en'
__all__ = ('ShockEvansApp', 'EXIT_OK', 'EXIT_UNSTABLE', 'EXIT_FAILURE')

EXIT_OK = 0
EXIT_UNSTABLE = 10
EXIT_FAILURE = 20


# noinspection PyMethodMayBeStatic
class ShockEvansApp(object):
    def __init__(self, settings: argparse.Namespace):
        self.settings = settings
        if getattr(settings, 'verbose', False):
            logging.getLogger().setLevel(logging.DEBUG)
        elif getattr(settings, 'quiet', False):
            logging.getLogger().setLevel(logging.WARNING)

    def execute(self) -> int:
        """
        Dispatch the command.  Numerical failures are logged and turned into their exit codes.

        :return: the exit code (0 stable or success, 10 instability detected, 20+ failures)
        """
        command = getattr(self, f"_{self.settings.command}")
        try:
            return command()
        except ShockEvansError as ex:
            logging.error(f"{self.settings.command} failed ({ex.kind}): {ex}")
            for item in ex.trace[-5:]:
                logging.debug(f"  trace: {item}")
            return ex.exit_code

    @property
    def out_dir(self) -> Path:
        return Path(self.settings.out)

    def _params(self) -> ModelParams:
        settings = self.settings
        nu = settings.nu
        if nu is None:
            nu = eucken_nu_over_mu(settings.gamma + 1.0) * settings.mu
            logging.info(f"nu not given; using the Eucken value {nu:.6g}")
        return ModelParams(gruneisen=settings.gamma, nu=nu, mu=settings.mu, v_plus=settings.vplus)

    def _radius(self):
        return self.settings.radius if self.settings.policy == 'fixed' else self.settings.policy

    def _emit(self, data: Dict[str, Any]) -> None:
        print(json.dumps(json_safe(data), indent=2, sort_keys=True))

    def _endstates(self) -> int:
        params = self._params()
        endstates = rankine_hugoniot(params)
        self._emit({'gamma': params.gruneisen, 'v_plus': params.v_plus, 'v_star': params.v_star,
                    'u_plus': endstates.u_plus, 'e_minus': endstates.e_minus, 'e_plus': endstates.e_plus,
                    'energy_ratio': endstates.energy_ratio, 'mach': mach_number(params)})
        return EXIT_OK

    def _profile(self) -> int:
        from shock_evans.shock_profile import solve_profile

        params = self._params().normalized()
        params.require_noncharacteristic()
        profile = solve_profile(params)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = profile.export(self.out_dir / f"profile_{params.key()}.txt")
        left, right = profile.endpoint_errors()
        self._emit({'file': str(path), 'L_minus': profile.L_minus, 'L_plus': profile.L_plus,
                    'theta_minus': profile.theta_minus, 'theta_plus': profile.theta_plus,
                    'nodes': int(profile.mesh.size), 'endpoint_errors': [left, right],
                    'midpoint_residual': profile.midpoint_residual()})
        return EXIT_OK

    def _bound(self) -> int:
        from shock_evans.evans import EvansEvaluator, prepare_profile
        from shock_evans.eigensystem import SpectralMatrix
        from shock_evans.freq_bounds import compute_alpha, hf_fit, practical_radius, tracking_bound
        from shock_evans.shock_profile import solve_profile

        params = self._params().normalized()
        params.require_noncharacteristic()
        profile = solve_profile(params)
        bound = tracking_bound(profile, params, norm=self.settings.norm)
        lambda_max = min(bound.Lambda_star, self.settings.radius or 100.0)
        # the search may climb to Lambda*
        profile, lengths = prepare_profile(params, bound.Lambda_star, profile)
        evaluator = EvansEvaluator(SpectralMatrix(profile), *lengths, reference=lambda_max, polar=False)
        approximant = hf_fit(evaluator, lambda_max)
        practical = practical_radius(evaluator, approximant, tracking_radius=bound.Lambda_star)
        self._emit({'Lambda_star': bound.Lambda_star, 'norm': bound.norm_used, 'iterations': bound.iterations,
                    'converged': bound.converged, 'practical_radius': practical.radius,
                    'practical_converged': practical.converged, 'C': approximant.C, 'alpha': approximant.alpha,
                    'alpha_quadrature': compute_alpha(profile, params), 'fit_residual': approximant.fit_residual})
        return EXIT_OK

    def _winding(self) -> int:
        from shock_evans.evans import stability_verdict

        params = self._params()
        params.require_noncharacteristic()
        report = stability_verdict(params, radius_policy=self._radius(), n_points=self.settings.points,
                                   polar=not self.settings.no_polar)
        path = self.out_dir / CONTOUR_DIR / f"{params.key()}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        report.contour.export(path)
        self._emit({'gamma': params.gruneisen, 'nu': params.nu, 'mu': params.mu, 'v_plus': params.v_plus,
                    'radius_used': report.radius_used, 'Lambda_star': report.tracking.Lambda_star,
                    'winding': report.winding, 'max_arg_step': report.max_arg_step,
                    'method_agreement': report.method_agreement, 'L_minus': report.L_minus,
                    'L_plus': report.L_plus, 'wall_ms': report.wall_ms, 'contour_file': str(path)})
        return report.exit_code

    def _sweep_config(self) -> SweepConfig:
        settings = self.settings
        data = dict(settings.config_data or {})
        if settings.gamma is not None:
            data['gamma_list'] = [settings.gamma]
        if settings.nu is not None:
            data['nu_list'] = [settings.nu]
        if settings.vplus is not None:
            # 'star' parses to NaN
            data['v_plus_list'] = [STAR if math.isnan(settings.vplus) else settings.vplus]
        if 'gamma_list' not in data:
            raise ConfigError("sweep needs gamma_list in --config or --gamma")
        if 'nu_list' not in data:
            data['nu_list'] = [EUCKEN]
        config = SweepConfig.from_dict(data)
        # settings already layer file values under explicit flags
        return replace(config, out_dir=str(settings.out), n_points=settings.points, jobs=settings.jobs,
                       mu=settings.mu, radius_policy=settings.policy,
                       fixed_radius=settings.radius if settings.policy == 'fixed' else config.fixed_radius)

    def _sweep(self) -> int:
        from shock_evans.outputs import emit_outputs

        config = self._sweep_config()
        records = run_sweep(config, resume=self.settings.resume)
        emit_outputs(records, config.out_dir)
        return self._sweep_exit_code(records, expected=len(build_grid(config)))

    def _sweep_exit_code(self, records: List[SweepRecord], expected: Optional[int] = None) -> int:
        unstable = [r for r in records if r.ok and r.winding != 0]
        failed = [r for r in records if not r.ok]
        logging.info(f"{len(records)} records: {len(records) - len(failed)} ok, {len(unstable)} with nonzero "
                     f"winding, {len(failed)} failed")
        if unstable:
            return EXIT_UNSTABLE
        if failed or (expected is not None and len(records) < expected):
            return EXIT_FAILURE
        return EXIT_OK

    def _plot(self) -> int:
        from shock_evans.outputs import CSV_NAME, emit_outputs, read_csv

        csv_path = self.out_dir / CSV_NAME
        if not csv_path.is_file():
            raise ConfigError(f"no {CSV_NAME} in {self.out_dir}; run a sweep first")
        records = read_csv(csv_path)
        written = emit_outputs(records, self.out_dir, formats=('svg',))
        self._emit({'figures': [str(path) for path in written]})
        return EXIT_OK
