# coding=utf-8

"""
Safely write output files: content goes to a temporary file beside the target, which replaces the target
only when writing succeeded.  On any error the previous file is left untouched.
"""

import json
import math
import os
from contextlib import contextmanager
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import Any, Iterator, Union

__docformat__ = 'restructuredtext en'
__all__ = ('safe_edit', 'write_text', 'write_json', 'append_json_line', 'json_safe')

PathLike = Union[str, Path]


# noinspection PyArgumentEqualDefault
@contextmanager
def safe_edit(file_name: PathLike, backup: bool = False) -> Iterator[dict]:
    """
    Rewrite a file through a temporary sibling.

    Usage::

        with safe_edit(path) as files:
            if files['in'] is not None:
                old = files['in'].read()
            files['out'].write(text)

    :param file_name: file to (re)write; parent directories are created
    :param backup: keep the previous content as ``file_name~``
    :yield: dict with the current file open for reading (files['in'], None if absent) and the temporary
            output (files['out'])
    :raises: allows IO exceptions to propagate
    """
    path = Path(file_name)
    path.parent.mkdir(parents=True, exist_ok=True)
    in_file = open(path, 'r', encoding='utf-8') if path.is_file() else None
    tmp_file = NamedTemporaryFile(mode='w', delete=False, encoding='utf-8', dir=str(path.parent),
                                  prefix=f".{path.name}.", suffix='.tmp', newline='\n')
    try:
        yield {'in': in_file, 'out': tmp_file}
        tmp_file.flush()
        os.fsync(tmp_file.fileno())
    except BaseException:
        tmp_file.close()
        os.remove(tmp_file.name)
        raise
    finally:
        if in_file:
            in_file.close()
    tmp_file.close()
    if backup and path.is_file():
        os.replace(path, path.with_name(path.name + '~'))
    os.replace(tmp_file.name, path)


def write_text(path: PathLike, text: str) -> Path:
    with safe_edit(path) as files:
        files['out'].write(text)
    return Path(path)


def json_safe(value: Any) -> Any:
    """Replace non-finite floats by the strings 'inf', '-inf' and 'nan' so the output is strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    if isinstance(value, dict):
        return {key: json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(item) for item in value]
    return value


def write_json(path: PathLike, obj: Any) -> Path:
    return write_text(path, json.dumps(json_safe(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")


def append_json_line(path: PathLike, obj: Any) -> None:
    """Append one compact JSON document and flush it to disk.  A torn last line is closed first."""
    line = json.dumps(json_safe(obj), sort_keys=True, separators=(',', ':'), allow_nan=False)
    path = Path(path)
    if path.is_file() and path.stat().st_size > 0:
        with open(path, 'rb') as existing:
            existing.seek(-1, os.SEEK_END)
            if existing.read(1) != b"\n":
                line = "\n" + line
    with open(path, 'a', encoding='utf-8', newline='\n') as out:
        out.write(line + "\n")
        out.flush()
        os.fsync(out.fileno())
