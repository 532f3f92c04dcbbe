import json

import pytest
from hypothesis import given

from bggtate import gallery, modfile
from bggtate.linalg import Field
from bggtate.exterior import ExteriorContext
from bggtate.modules import make_free, underline_k
from strategies import CONTEXTS, modules


def test_residue_field_text():
    assert modfile.dumps(underline_k(CONTEXTS[2])) == \
        '{"n": 2, "char": 32003, "components": {"0": 1}, "action": {}}\n'


def test_shift_key_only_when_nonzero():
    s = gallery.twisted_structure(CONTEXTS[2], 2)
    data = json.loads(modfile.dumps(s.module, s.shift))
    assert data["shift"] == 2
    assert "shift" not in json.loads(modfile.dumps(s.module))


@given(modules(ns=(1, 2, 3), socle_free=False))
def test_round_trip(N):
    text = modfile.dumps(N)
    M, shift = modfile.loads(text)
    assert M == N and shift == 0
    assert modfile.dumps(M) == text


def test_rationals():
    ctx = ExteriorContext(1, Field(0))
    N = make_free(ctx, "lambda", 1)
    M, _ = modfile.loads(modfile.dumps(N))
    assert M == N
    data = modfile.to_dict(N)
    data["action"]["0"]["-1"] = [["1/2", 0]]
    with pytest.raises(modfile.ModuleFileError):
        modfile.from_dict(data)


def test_file_round_trip(tmp_path):
    s = gallery.omega(CONTEXTS[2], 1)
    path = tmp_path / "omega.json"
    modfile.write(str(path), s.module, s.shift)
    assert modfile.read(str(path)) == (s.module, s.shift)


def test_entries_are_reduced():
    N, _ = modfile.loads('{"n": 1, "char": 7, "components": {"0": 1, "1": 1}, "action": {"0": {"0": [[9]]}}}')
    assert N.act(0, 0).tolist() == [[2]]


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"n": 1, "char": 7}',
    '{"n": 1, "char": 8, "components": {}}',
    '{"n": 0, "char": 7, "components": {}}',
    '{"n": 1, "char": 7, "components": {"0": -1}}',
    '{"n": 1, "char": 7, "components": {"x": 1}}',
    '{"n": 1, "char": 7, "components": {"0": 1, "1": 1}, "action": {"2": {"0": [[1]]}}}',
    '{"n": 1, "char": 7, "components": {"0": 1, "1": 1}, "action": {"0": {"0": [[1, 2]]}}}',
    '{"n": 1, "char": 7, "components": {"0": 1}, "action": {"0": {"0": [[1]]}}}',
    # e0 and e1 acting by the same nonzero map do not anticommute
    '{"n": 1, "char": 7, "components": {"0": 1, "1": 1, "2": 1},'
    ' "action": {"0": {"0": [[1]], "1": [[1]]}, "1": {"0": [[1]], "1": [[1]]}}}',
    '{"n": 1, "char": 7, "components": {}, "shift": "x"}',
])
def test_malformed(text):
    with pytest.raises(modfile.ModuleFileError):
        modfile.loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(modfile.ModuleFileError):
        modfile.read(str(tmp_path / "absent.json"))
