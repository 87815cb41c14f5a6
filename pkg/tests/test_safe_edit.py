import json
import math

import pytest

from shock_evans.safe_edit import append_json_line, json_safe, safe_edit, write_json, write_text


def test_write_creates_parents(tmp_path):
    path = write_text(tmp_path / 'a' / 'b' / 'out.txt', 'hello\n')
    assert path.read_text() == 'hello\n'
    assert [p.name for p in path.parent.iterdir()] == ['out.txt']


def test_failed_edit_keeps_previous_content(tmp_path):
    path = write_text(tmp_path / 'out.txt', 'old\n')
    with pytest.raises(RuntimeError):
        with safe_edit(path) as files:
            files['out'].write('partial')
            raise RuntimeError('disk on fire')
    assert path.read_text() == 'old\n'
    assert [p.name for p in tmp_path.iterdir()] == ['out.txt']


def test_edit_reads_previous_content_and_backs_up(tmp_path):
    path = write_text(tmp_path / 'out.txt', 'one\n')
    with safe_edit(path, backup=True) as files:
        files['out'].write(files['in'].read() + 'two\n')
    assert path.read_text() == 'one\ntwo\n'
    assert (tmp_path / 'out.txt~').read_text() == 'one\n'


def test_json_safe():
    data = json_safe({'a': math.inf, 'b': [-math.inf, math.nan, 1.5], 'c': 'x', 'd': None})
    assert data == {'a': 'inf', 'b': ['-inf', 'nan', 1.5], 'c': 'x', 'd': None}


def test_write_json_is_strict(tmp_path):
    path = write_json(tmp_path / 'out.json', {'mach': math.inf, 'winding': 0})
    assert json.loads(path.read_text()) == {'mach': 'inf', 'winding': 0}


def test_append_json_line_closes_torn_line(tmp_path):
    path = tmp_path / 'journal.jsonl'
    append_json_line(path, {'n': 1})
    with open(path, 'a') as out:
        out.write('{"n": 2, "tru')
    append_json_line(path, {'n': 3})
    lines = path.read_text().splitlines()
    assert lines[0] == '{"n":1}'
    assert lines[1] == '{"n": 2, "tru'
    assert lines[2] == '{"n":3}'
