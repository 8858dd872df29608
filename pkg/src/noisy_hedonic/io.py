"""JSON and CSV formats for games, partitions, noise, reports and regions."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .game import Coalition, HedonicGame, Partition
from .noise import NoiseAssignment, NoiseSpec
from .pac import PacParams
from .regimes import Region1D, Region2D


def parse_number(x):
    """Numbers pass through; strings like ``"1/3"`` become Fractions."""
    if isinstance(x, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(x, (int, float, Fraction)):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"not a number: {x!r}")


def to_jsonable(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, Coalition):
        return list(x.members)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_atomic(path, text: str):
    """Write through a temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, Fraction)) else v for v in row])
    return buf.getvalue()


# games

def game_from_dict(d) -> HedonicGame:
    n = int(d["n"])
    values = {}
    for row in d["values"]:
        S = Coalition.from_members(row["coalition"])
        values[(int(row["agent"]), S.mask)] = parse_number(row["value"])
    return HedonicGame(n, values, d.get("coverage", "full"))


def game_to_dict(game: HedonicGame) -> dict:
    rows = [
        {"agent": i, "coalition": list(Coalition(m).members), "value": v}
        for (i, m), v in sorted(game.values.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]
    return {"n": game.n, "values": rows, "coverage": game.coverage}


def partition_from_dict(d, n=None) -> Partition:
    return Partition.from_blocks(d["blocks"], n)


def partition_to_dict(pi: Partition) -> dict:
    return {"blocks": pi.as_lists()}


# noise

def noise_spec_from_dict(d) -> NoiseSpec:
    return NoiseSpec(tuple(parse_number(a) for a in d["support"]),
                     tuple(parse_number(p) for p in d["probs"]))


def noise_spec_to_dict(spec: NoiseSpec) -> dict:
    return {"support": list(spec.support), "probs": list(spec.probs)}


def assignment_from_list(rows) -> NoiseAssignment:
    return NoiseAssignment({Coalition.from_members(r["coalition"]).mask: parse_number(r["alpha"])
                            for r in rows})


def assignment_to_list(a: NoiseAssignment) -> list:
    return [{"coalition": list(S.members), "alpha": v} for S, v in a.items()]


def pac_params_from_dict(d) -> PacParams:
    return PacParams(eps_tilde=float(d["eps_tilde"]), delta=float(d["delta"]),
                     zeta=float(d.get("zeta", 1.0)), n=int(d["n"]),
                     eps=d.get("eps"))


def pac_params_to_dict(p: PacParams) -> dict:
    d = {"eps_tilde": p.eps_tilde, "delta": p.delta, "zeta": p.zeta, "n": p.n}
    if p.eps is not None:
        d["eps"] = p.eps
    return d


# regions

def region_to_dict(region) -> dict:
    if isinstance(region, Region1D):
        return {"intervals": [list(iv) for iv in region.intervals], "resolution": region.resolution}
    if isinstance(region, Region2D):
        return {"cells": region.cells(), "resolution": region.resolution}
    raise TypeError(f"not a region: {type(region).__name__}")


def region_from_dict(d):
    if "intervals" in d:
        return Region1D(tuple(tuple(iv) for iv in d["intervals"]), int(d.get("resolution", 10_000)))
    raise ValueError("only interval regions can be read back")
