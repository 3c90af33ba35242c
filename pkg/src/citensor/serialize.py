"""Deterministic JSON/CSV serialization for tensors and trajectories.

Floats are written with 17 significant digits so every value round-trips
bit-faithfully; given identical inputs the emitted bytes are identical.
Tensor files use 1-based row-major (i, j, k, l) order and say so:

    { "n": 3, "index_base": 1, "entries": [ ...n^4 numbers... ] }
"""

from __future__ import annotations

import json

import numpy as np

from .dynamics import Trajectory
from .tensor import Tensor4


def _format_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with .17g floats; dict order is preserved (deterministic)."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2).lstrip()}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj.tolist()) if isinstance(obj, np.ndarray) else list(obj)
        if not seq:
            return "[]"
        parts = [dumps(v, indent + 2).lstrip() for v in seq]
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(parts) + "]"
        items = [f"{pad}  {p}" for p in parts]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def tensor_to_obj(t: Tensor4, **tags) -> dict:
    obj = dict(tags)
    obj.update({"n": t.n, "index_base": 1, "entries": t.flat().tolist()})
    return obj


def tensor_from_obj(obj: dict) -> Tensor4:
    if "n" not in obj or "entries" not in obj:
        raise ValueError("tensor object needs 'n' and 'entries' keys")
    if int(obj.get("index_base", 1)) != 1:
        raise ValueError("tensor files use index_base 1")
    n = int(obj["n"])
    entries = np.asarray(obj["entries"], dtype=float)
    if entries.size != n ** 4:
        raise ValueError(f"expected {n ** 4} entries for n={n}, got {entries.size}")
    return Tensor4(n, entries.reshape((n,) * 4))


def read_tensor(path) -> Tensor4:
    with open(path, "r", encoding="utf-8") as fh:
        return tensor_from_obj(json.load(fh))


def write_tensor(path, t: Tensor4, **tags) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(tensor_to_obj(t, **tags)) + "\n")


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV with columns t, x_1..x_n, h, s, entropy_rate, sh_bracket."""
    n = traj.states.shape[1]
    header = ["t"] + [f"x_{i}" for i in range(1, n + 1)] \
        + ["h", "s", "entropy_rate", "sh_bracket"]
    lines = [",".join(header)]
    for i in range(traj.times.size):
        row = [traj.times[i], *traj.states[i], traj.h_values[i], traj.s_values[i],
               traj.entropy_rate_values[i], traj.sh_bracket_values[i]]
        lines.append(",".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_from_csv(text: str) -> Trajectory:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("trajectory CSV needs a header and at least one row")
    header = lines[0].split(",")
    expected_tail = ["h", "s", "entropy_rate", "sh_bracket"]
    if header[0] != "t" or header[-4:] != expected_tail:
        raise ValueError(f"unexpected trajectory CSV header: {header}")
    n = len(header) - 5
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if data.shape[1] != len(header):
        raise ValueError("trajectory CSV row length does not match header")
    return Trajectory(
        times=data[:, 0], states=data[:, 1:1 + n],
        h_values=data[:, 1 + n], s_values=data[:, 2 + n],
        entropy_rate_values=data[:, 3 + n], sh_bracket_values=data[:, 4 + n])


def trajectory_to_obj(traj: Trajectory) -> dict:
    return {
        "times": traj.times.tolist(),
        "states": traj.states.tolist(),
        "h": traj.h_values.tolist(),
        "s": traj.s_values.tolist(),
        "entropy_rate": traj.entropy_rate_values.tolist(),
        "sh_bracket": traj.sh_bracket_values.tolist(),
    }
