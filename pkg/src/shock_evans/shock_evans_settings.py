# coding=utf-8

"""
This is the command line argument handling.
"""

import importlib
import os
from typing import Dict, Optional, Sequence

from shock_evans.application_settings import ApplicationSettings
from shock_evans.freq_bounds import NORMS
from shock_evans.gas_model import v_star
from shock_evans.sweep import RADIUS_POLICIES

__docformat__ = 'restructuredtext en'
__all__ = ('ShockEvansSettings', 'COMMANDS', 'POINT_COMMANDS', 'OUT_ENV')

APP_PACKAGE = 'shock_evans'
app_module = importlib.import_module(APP_PACKAGE)
APP_DESCRIPTION = app_module.__doc__

COMMANDS = ('endstates', 'profile', 'bound', 'winding', 'sweep', 'plot')
POINT_COMMANDS = ('endstates', 'profile', 'bound', 'winding')
OUT_ENV = 'SHOCK_EVANS_OUT'
DEFAULT_OUT = 'shock_evans_out'


def _v_plus(text: str) -> float:
    """A v+ value, or 'star' for the strong-shock limit (resolved once Gamma is known)."""
    if str(text).lower() in ('star', 'v*', 'vstar'):
        return float('nan')
    return float(text)


class ShockEvansSettings(ApplicationSettings):
    """
    Usage::

        with ShockEvansSettings() as settings:
            return ShockEvansApp(settings).execute()
    """

    HELP = {
        'shock_evans': APP_DESCRIPTION,

        'command': f"One of: {', '.join(COMMANDS)}",

        'model_group': 'Parameter point (endstates, profile, bound, winding; sweep uses them as one-point lists)',
        'gamma': 'Gruneisen constant Gamma = gamma - 1.',
        'nu': 'Heat conduction nu.  (default: Eucken value for gamma = Gamma + 1)',
        'mu': 'Viscosity mu.  (default: 1)',
        'vplus': "Right specific volume v+ in [v*, 1], or 'star' for v* = Gamma/(Gamma+2).",

        'evans_group': 'Evans function and radius options',
        'radius': 'Contour radius.  Selects the fixed radius policy.',
        'policy': f"Radius policy, one of {', '.join(RADIUS_POLICIES)}.  (default: practical)",
        'points': 'Number of contour points.  (default: 180)',
        'norm': f"Matrix norm for the tracking bound, one of {', '.join(NORMS)}.  (default: l2)",
        'no_polar': 'Skip the polar-coordinate cross check.',

        'sweep_group': 'Sweep and output options',
        'out': f"Output directory.  (default: ${OUT_ENV} or ./{DEFAULT_OUT})",
        'jobs': 'Worker processes for sweep.  (default: 1)',
        'resume': 'Continue a sweep from its journal, skipping finished points.',

        'info_group': '',
        'verbose': 'Log debug detail.',
        'quiet': 'Log warnings and errors only.',
        'version': "Show shock_evans's version.",
    }

    def __init__(self, argv: Optional[Sequence[str]] = None):
        super().__init__('shock_evans', APP_PACKAGE, [APP_PACKAGE], self.HELP, argv=argv)

    def _config_aliases(self) -> Dict[str, str]:
        return {'out_dir': 'out', 'n_points': 'points', 'radius_policy': 'policy', 'fixed_radius': 'radius'}

    def _cli_options(self, parser, defaults):
        """
        Adds application specific arguments to the parser.

        :param parser: the argument parser with --config already added.
        :type parser: argparse.ArgumentParser
        """
        parser.add_argument('command', nargs='?', choices=COMMANDS, metavar='COMMAND', help=self._help['command'])

        model_group = parser.add_argument_group(title='Model Options', description=self._help['model_group'])
        model_group.add_argument('--gamma', type=float, metavar='GAMMA', help=self._help['gamma'])
        model_group.add_argument('--nu', type=float, metavar='NU', help=self._help['nu'])
        model_group.add_argument('--mu', type=float, metavar='MU', default=1.0, help=self._help['mu'])
        model_group.add_argument('--vplus', type=_v_plus, metavar='VPLUS', dest='vplus', help=self._help['vplus'])

        evans_group = parser.add_argument_group(title='Evans Options', description=self._help['evans_group'])
        evans_group.add_argument('--radius', type=float, metavar='R', help=self._help['radius'])
        evans_group.add_argument('--policy', choices=RADIUS_POLICIES, default='practical', help=self._help['policy'])
        evans_group.add_argument('--points', type=int, metavar='N', default=180, help=self._help['points'])
        evans_group.add_argument('--norm', choices=tuple(NORMS), default='l2', help=self._help['norm'])
        evans_group.add_argument('--no-polar', dest='no_polar', action='store_true', help=self._help['no_polar'])

        sweep_group = parser.add_argument_group(title='Sweep Options', description=self._help['sweep_group'])
        sweep_group.add_argument('--out', metavar='DIR', default=os.environ.get(OUT_ENV, DEFAULT_OUT),
                                 help=self._help['out'])
        sweep_group.add_argument('--jobs', type=int, metavar='N', default=1, help=self._help['jobs'])
        sweep_group.add_argument('--resume', action='store_true', help=self._help['resume'])

        info_group = parser.add_argument_group(title='Informational Options', description=self._help['info_group'])
        info_group.add_argument('-v', '--verbose', action='store_true', help=self._help['verbose'])
        info_group.add_argument('-q', '--quiet', action='store_true', help=self._help['quiet'])
        info_group.add_argument('--version', dest='version', action='store_true', help=self._help['version'])

    def _cli_validate(self, settings, remaining_argv):
        """
        Verify we have required options for commands.

        :param settings: the settings object returned by ArgumentParser.parse_args()
        :type settings: argparse.Namespace
        :return: the error message if any
        :rtype: str or None
        """
        if settings.command is None:
            return f"a command is required, one of: {', '.join(COMMANDS)}"
        if settings.command in POINT_COMMANDS:
            if settings.gamma is None:
                return f"--gamma is required for {settings.command}"
            if not settings.gamma > 0:
                return f"--gamma must be positive, got {settings.gamma}"
            if settings.vplus is None:
                return f"--vplus is required for {settings.command}"
            if settings.vplus != settings.vplus:
                settings.vplus = v_star(settings.gamma)
            if not v_star(settings.gamma) <= settings.vplus <= 1.0:
                return f"--vplus must lie in [v*={v_star(settings.gamma):.6g}, 1], got {settings.vplus}"
        if settings.nu is not None and not settings.nu > 0:
            return f"--nu must be positive, got {settings.nu}"
        if not settings.mu > 0:
            return f"--mu must be positive, got {settings.mu}"
        if settings.radius is not None:
            if not settings.radius > 0:
                return f"--radius must be positive, got {settings.radius}"
            settings.policy = 'fixed'
        elif settings.policy == 'fixed':
            return "--policy fixed requires --radius"
        if settings.points < 8:
            return f"--points must be at least 8, got {settings.points}"
        if settings.jobs < 1:
            return f"--jobs must be at least 1, got {settings.jobs}"
        if settings.verbose and settings.quiet:
            return "--verbose and --quiet are exclusive"
        return None
