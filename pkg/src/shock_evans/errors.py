# coding=utf-8

"""
Exception hierarchy.  Every error carries a short ``kind`` used in sweep status fields and an
``exit_code`` used by the command line front end.
"""

from typing import Any, List, Optional

__docformat__ = 'restructuredtext en'
__all__ = ('ShockEvansError', 'DomainError', 'PhysicalityError', 'DegeneracyError', 'ProfileSolverError',
           'LadderExhaustedError', 'SplittingError', 'IntegrationError', 'ZeroOnContourError',
           'UnresolvedWindingError', 'FitError', 'ConfigError')


class ShockEvansError(Exception):
    kind = 'error'
    exit_code = 20

    def __init__(self, message: str, trace: Optional[List[Any]] = None):
        """
        :param message: human readable description
        :param trace: optional iteration or step trace for post mortem
        """
        super().__init__(message)
        self.trace = list(trace) if trace else []


class DomainError(ShockEvansError, ValueError):
    kind = 'domain'


class PhysicalityError(DomainError):
    """v+ below the strong-shock limit v*."""
    kind = 'physicality'


class DegeneracyError(ShockEvansError):
    """Characteristic limit v+ = 1, where the endstates stop being hyperbolic."""
    kind = 'characteristic'


class ProfileSolverError(ShockEvansError):
    kind = 'profile'
    exit_code = 21


class LadderExhaustedError(ShockEvansError):
    kind = 'ladder'
    exit_code = 21


class SplittingError(ShockEvansError):
    kind = 'splitting'
    exit_code = 22


class IntegrationError(ShockEvansError):
    kind = 'integration'
    exit_code = 23


class ZeroOnContourError(ShockEvansError):
    kind = 'zero_on_contour'
    exit_code = 24


class UnresolvedWindingError(ShockEvansError):
    kind = 'unresolved_winding'
    exit_code = 24


class FitError(ShockEvansError):
    kind = 'fit'
    exit_code = 25


class ConfigError(ShockEvansError, ValueError):
    kind = 'config'
    exit_code = 2
