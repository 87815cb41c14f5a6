# coding=utf-8
"""
Layered settings for the command line: defaults in code, then INI rc files, then a config file given with
-c/--config (INI, or JSON by the .json suffix), then the command line flags.

File values become argparse defaults so an explicit flag always wins.  JSON documents may hold list valued
keys that have no flag (sweep grids); those are only kept in ``settings.config_data``.  Scalar JSON keys are
mapped to argument names through **_config_aliases**.

Derive from ApplicationSettings and override **_cli_options**, and usually **_cli_validate** and
**_config_aliases**.
"""
import argparse
import importlib
import json
import logging
import os
import shutil
from configparser import ConfigParser, NoSectionError
from itertools import chain
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

__docformat__ = 'restructuredtext en'
__all__ = ("ApplicationSettings", "SplitlineHelpFormatter")


class SplitlineHelpFormatter(argparse.HelpFormatter):
    """
    Formatter that keeps the embedded newlines of help text (the package docstring is the long help).
    """
    def _split_lines(self, text, width):
        # noinspection PyProtectedMember
        lines = [argparse.HelpFormatter._split_lines(self, line, width) for line in text.splitlines()]
        return list(chain.from_iterable(lines))


class ApplicationSettings(object):
    """
    Usage::

        class RunSettings(ApplicationSettings):
            HELP = {
                'run': 'what the app does',
                'points': 'number of contour points',
            }

            def __init__(self, argv=None):
                super().__init__('run', 'app_package', ['app_package'], self.HELP, argv=argv)

            def _cli_options(self, parser, defaults):
                parser.add_argument('--points', type=int, default=180, help=self._help['points'])

        with RunSettings() as settings:
            print(settings.points)
    """

    def __init__(self, app_name: str, app_package: str, config_sections: List[str], help_strings: Dict[str, str],
                 argv: Optional[Sequence[str]] = None):
        """
        :param app_name: The application name, also the key of its description in help_strings
        :param app_package: The application's package name; names the rc files and holds __version__
        :param config_sections: The INI sections imported as argument defaults
        :param help_strings: maps argument names to their help messages
        :param argv: the arguments to parse, sys.argv[1:] when None
        """
        self.__app_name = app_name
        self.__app_package = app_package
        self.__config_sections = config_sections
        self.__argv = None if argv is None else list(argv)
        self._parser = None
        self._settings = None

        self._help = {'version': "Show the application's version."}
        self._help.update(help_strings)

    def parse(self):
        """
        Read the config layers and parse the command line.

        :return: the parser, the settings and any unparsed arguments
        :rtype: tuple(argparse.ArgumentParser, argparse.Namespace, list)
        """
        conf_parser = argparse.ArgumentParser(add_help=False)
        conf_parser.add_argument('-c', '--config', metavar='FILE',
                                 help=f"Configuration file, JSON or INI (default: {self._default_config_files()})")
        args, remaining_argv = conf_parser.parse_known_args(self.__argv)

        config_files = self._default_config_files()
        defaults = self._read_ini(config_files)
        config_data = {}
        if args.config:
            if Path(args.config).suffix.lower() == '.json':
                config_data = self._read_json(args.config)
                aliases = self._config_aliases()
                defaults.update({aliases.get(key, key): value for key, value in config_data.items()
                                 if value is not None and not isinstance(value, (list, dict))})
            else:
                defaults.update(self._read_ini([args.config]))
            config_files.insert(0, args.config)
        if defaults:
            logging.debug(f"config defaults from {config_files}: {sorted(defaults)}")

        console_width = shutil.get_terminal_size().columns
        parser = argparse.ArgumentParser(self.__app_name,
                                         parents=[conf_parser],
                                         formatter_class=lambda prog: SplitlineHelpFormatter(prog,
                                                                                             max_help_position=30,
                                                                                             width=console_width),
                                         description=self._help[self.__app_name])
        self._cli_options(parser, defaults)

        # after the options so file values replace the defaults given to add_argument
        if defaults:
            parser.set_defaults(**defaults)

        settings, leftover_argv = parser.parse_known_args(remaining_argv)
        settings.config_files = config_files
        settings.config_data = config_data
        return parser, settings, leftover_argv

    def _read_ini(self, config_files: List[str]) -> Dict[str, Any]:
        config = ConfigParser()
        config.read(config_files)
        defaults = {}
        for section in self.__config_sections:
            try:
                defaults.update(dict(config.items(section)))
            except NoSectionError:
                pass
        return defaults

    # noinspection PyMethodMayBeStatic
    def _read_json(self, file_name: str) -> Dict[str, Any]:
        with open(file_name, 'r', encoding='utf-8') as in_file:
            data = json.load(in_file)
        if not isinstance(data, dict):
            raise ValueError(f"{file_name} must hold a JSON object")
        return data

    def _default_config_files(self) -> List[str]:
        """
        ".pkgrc" in the current directory, then "~/.pkg/pkg.conf" and "~/.pkgrc".
        """
        pkg = self.__app_package
        return [f".{pkg}rc", os.path.expanduser(f"~/.{pkg}/{pkg}.conf"), os.path.expanduser(f"~/.{pkg}rc")]

    # noinspection PyMethodMayBeStatic
    def _config_aliases(self) -> Dict[str, str]:
        """
        Maps JSON config keys to argument dest names.

        :return: key -> dest
        """
        return {}

    # noinspection PyUnusedLocal
    def _cli_options(self, parser: argparse.ArgumentParser, defaults: Dict[str, Any]) -> None:
        """
        This is where you should add arguments to the parser.

        :param parser: the argument parser with --config already added.
        :param defaults: the default dictionary loaded from the config layers
        """
        parser.add_argument('--version', dest='version', action='store_true', help=self._help['version'])

    # noinspection PyMethodMayBeStatic,PyUnusedLocal
    def _cli_validate(self, settings: argparse.Namespace, remaining_argv: List[str]) -> Optional[str]:
        """
        Hook for checking option combinations after parsing.  May also fill in derived values.

        :return: the error message if any
        """
        return None

    def __enter__(self) -> argparse.Namespace:
        self._parser, self._settings, remaining_argv = self.parse()

        if self._settings.version:
            print(self._load_version())
            exit(0)

        error_message = self._cli_validate(self._settings, remaining_argv)
        if error_message is not None:
            self._parser.error("\n" + error_message)

        self._settings.parser = self._parser
        return self._settings

    def __exit__(self, exc_type, exc_val, exc_tb):
        pass

    def _load_version(self) -> str:
        """
        :returns: app_package.__version__ or 'Unknown'
        """
        # noinspection PyBroadException
        try:
            return importlib.import_module(self.__app_package).__version__
        except Exception as ex:
            logging.debug(f"no version for {self.__app_package}: {ex}")
            return 'Unknown'
