#!/bin/env python

import logging

from shock_evans.shock_evans_settings import ShockEvansSettings
from shock_evans.shock_evans_app import ShockEvansApp

"""
This is the main entry point for the viscous shock Evans function toolkit
"""

logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')


def main() -> int:
    """ run one shock_evans command
    """
    with ShockEvansSettings() as settings:
        return ShockEvansApp(settings).execute()


if __name__ == '__main__':
    exit(main())
