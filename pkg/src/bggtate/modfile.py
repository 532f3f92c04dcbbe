"""The module file format: a JSON object read and written bit-exactly.

::

    {"n": 2, "char": 32003, "shift": 0,
     "components": {"0": 1, "1": 3},
     "action": {"0": {"0": [[1, 0, 0]]}, ...}}

Degrees and generator indices are keys, matrices are row-major.  Zero
matrices are omitted.  Over Q entries are integers or ``"p/q"`` strings.
``shift`` is optional and defaults to 0.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .exterior import ExteriorContext
from .linalg import Field
from .modules import LambdaModule, ModuleAxiomError


class ModuleFileError(ValueError):
    """Malformed module file."""


def _entry(x, char: int):
    if char:
        return int(x)
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_dict(N: LambdaModule, shift: int = 0) -> dict:
    char = N.field.char
    action: dict[str, dict[str, list]] = {}
    for (i, d), m in sorted(N.action.items()):
        if np.any(m != 0):
            rows = [[_entry(x, char) for x in row] for row in m.tolist()]
            action.setdefault(str(i), {})[str(d)] = rows
    out = {"n": N.n, "char": char}
    if shift:
        out["shift"] = shift
    out["components"] = {str(d): m for d, m in sorted(N.dims.items())}
    out["action"] = action
    return out


def dumps(N: LambdaModule, shift: int = 0) -> str:
    return json.dumps(to_dict(N, shift), separators=(", ", ": ")) + "\n"


def _int(x, what: str) -> int:
    try:
        if isinstance(x, bool):
            raise TypeError
        return int(x)
    except (TypeError, ValueError):
        raise ModuleFileError(f"{what} must be an integer, got {x!r}") from None


def from_dict(data: dict, check: bool = True) -> tuple[LambdaModule, int]:
    """Parse a module file object into ``(module, shift)``."""
    if not isinstance(data, dict):
        raise ModuleFileError("module file must hold a JSON object")
    for key in ("n", "char", "components"):
        if key not in data:
            raise ModuleFileError(f"missing field {key!r}")
    n = _int(data["n"], "n")
    try:
        field = Field(_int(data["char"], "char"))
        ctx = ExteriorContext(n, field)
    except ValueError as exc:
        raise ModuleFileError(str(exc)) from None
    comps = data["components"]
    if not isinstance(comps, dict):
        raise ModuleFileError("components must be an object")
    dims = {_int(d, "degree"): _int(m, "dimension") for d, m in comps.items()}
    if any(m < 0 for m in dims.values()):
        raise ModuleFileError("dimensions must be nonnegative")
    action = {}
    raw = data.get("action", {})
    if not isinstance(raw, dict):
        raise ModuleFileError("action must be an object")
    for i_key, per_deg in raw.items():
        i = _int(i_key, "generator index")
        if not 0 <= i <= n:
            raise ModuleFileError(f"generator index {i} outside 0..{n}")
        if not isinstance(per_deg, dict):
            raise ModuleFileError(f"action of e{i} must be an object")
        for d_key, rows in per_deg.items():
            d = _int(d_key, "degree")
            shape = (dims.get(d, 0), dims.get(d + 1, 0))
            try:
                mat = field.array(rows, shape=shape) if shape[0] * shape[1] else field.zeros(*shape)
                if not shape[0] * shape[1] and np.array(rows, dtype=object).size:
                    raise ValueError
            except (ValueError, TypeError, ZeroDivisionError):
                raise ModuleFileError(f"action of e{i} in degree {d} is not a {shape[0]}x{shape[1]} matrix") from None
            action[(i, d)] = mat
    try:
        N = LambdaModule(ctx, dims, action, check=check)
    except (ModuleAxiomError, ValueError) as exc:
        raise ModuleFileError(str(exc)) from None
    return N, _int(data.get("shift", 0), "shift")


def loads(text: str, check: bool = True) -> tuple[LambdaModule, int]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModuleFileError(f"not valid JSON: {exc}") from None
    return from_dict(data, check)


def read(path: str, check: bool = True) -> tuple[LambdaModule, int]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModuleFileError(str(exc)) from None
    return loads(text, check)


def write(path: str, N: LambdaModule, shift: int = 0) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(N, shift))
