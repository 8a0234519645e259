"""Text and JSON file formats.

Problem files::

    # comment
    ising 3            (or: qubo 3 [min|max])
    0 1 -1.0           i j value, 0-based, i <= j, one line per unordered pair
    1 2 0.5

The loader mirrors each entry to ``(j, i)``.  Dataset CSVs have a header
``b0,...,b{n-1},target[,target2,...]``.  Models are JSON objects.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import FormatError, InputError
from .problems import Direction, IsingProblem, QuboProblem
from .rbm import RbmModel
from .surrogate import FactorModel, PropertyDataset, TargetTransform


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_problem(text: str) -> IsingProblem | QuboProblem:
    lines = [(no, _strip(raw)) for no, raw in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise FormatError("empty problem file")
    no, header = lines[0]
    head = header.split()
    kind = head[0].lower()
    try:
        if kind == "ising" and len(head) == 2:
            n, direction = int(head[1]), None
        elif kind == "qubo" and len(head) in (2, 3):
            n = int(head[1])
            direction = Direction.parse(head[2]) if len(head) == 3 else Direction.MINIMIZE
        else:
            raise ValueError(header)
    except (ValueError, InputError):
        raise FormatError(f"line {no}: bad header {header!r}") from None
    if n < 1:
        raise FormatError(f"line {no}: n must be >= 1")

    M = np.zeros((n, n))
    seen = set()
    for no, ln in lines[1:]:
        parts = ln.split()
        try:
            if len(parts) != 3:
                raise ValueError
            i, j, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise FormatError(f"line {no}: expected 'i j value', got {ln!r}") from None
        if not (0 <= i <= j < n):
            raise FormatError(f"line {no}: indices must satisfy 0 <= i <= j < {n}")
        if not np.isfinite(val):
            raise FormatError(f"line {no}: non-finite value")
        if (i, j) in seen:
            raise FormatError(f"line {no}: duplicate entry ({i}, {j})")
        seen.add((i, j))
        if kind == "ising" and i == j and val != 0.0:
            raise FormatError(f"line {no}: Ising diagonal entries must be zero")
        M[i, j] = M[j, i] = val
    if kind == "ising":
        return IsingProblem(M)
    return QuboProblem(M, direction)


def load_problem(path) -> IsingProblem | QuboProblem:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_problem(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def format_problem(p: IsingProblem | QuboProblem) -> str:
    if isinstance(p, IsingProblem):
        if p.offset != 0.0:
            raise InputError("the problem format has no offset; compile QUBOs at solve time")
        M, out = p.J, [f"ising {p.n}"]
    else:
        M, out = p.Q, [f"qubo {p.n} {p.direction.value}"]
    ii, jj = np.nonzero(np.triu(M))
    out += [f"{i} {j} {float(M[i, j])!r}" for i, j in zip(ii, jj)]
    return "\n".join(out) + "\n"


def save_problem(p, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_problem(p))


# -- datasets ---------------------------------------------------------------

def parse_dataset(text: str) -> PropertyDataset:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise FormatError("dataset needs a header and at least one row")
    header = [h.strip() for h in rows[0]]
    n = 0
    while n < len(header) and header[n] == f"b{n}":
        n += 1
    names = header[n:]
    if n == 0 or not names:
        raise FormatError("header must be b0,...,b{n-1} followed by target columns")
    bits = np.empty((len(rows) - 1, n), dtype=np.uint8)
    targets = np.empty((len(rows) - 1, len(names)))
    for r, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise FormatError(f"row {r + 2}: expected {len(header)} fields, got {len(row)}")
        cells = [c.strip() for c in row]
        if any(c not in ("0", "1") for c in cells[:n]):
            raise FormatError(f"row {r + 2}: bits must be 0 or 1")
        bits[r] = [int(c) for c in cells[:n]]
        try:
            targets[r] = [float(c) for c in cells[n:]]
        except ValueError:
            raise FormatError(f"row {r + 2}: non-numeric target") from None
    try:
        return PropertyDataset(bits, targets, names)
    except InputError as exc:
        raise FormatError(str(exc)) from exc


def load_dataset(path) -> PropertyDataset:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_dataset(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def format_dataset(d: PropertyDataset) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"b{i}" for i in range(d.n)] + list(d.names))
    for bits, t in zip(d.bits, d.targets):
        w.writerow([int(b) for b in bits] + [repr(float(x)) for x in t])
    return out.getvalue()


# -- models -----------------------------------------------------------------

def factor_model_to_dict(m: FactorModel) -> dict:
    return {"n": m.n, "K": m.K, "V": m.V.reshape(-1).tolist(),
            "target_transform": {"scale": m.transform.scale, "shift": m.transform.shift}}


def factor_model_from_dict(d: dict) -> FactorModel:
    try:
        n, K = int(d["n"]), int(d["K"])
        V = np.asarray(d["V"], dtype=np.float64).reshape(n, K)
        tt = d.get("target_transform", {})
        tr = TargetTransform(float(tt.get("scale", 1.0)), float(tt.get("shift", 0.0)))
        return FactorModel(V, tr)
    except (KeyError, TypeError, ValueError, InputError) as exc:
        raise FormatError(f"malformed factor model: {exc}") from exc


def rbm_to_dict(m: RbmModel) -> dict:
    return {"n_v": m.n_v, "n_h": m.n_h, "W": m.W.reshape(-1).tolist(),
            "b_v": m.b_v.tolist(), "b_h": m.b_h.tolist()}


def rbm_from_dict(d: dict) -> RbmModel:
    try:
        n_v, n_h = int(d["n_v"]), int(d["n_h"])
        W = np.asarray(d["W"], dtype=np.float64).reshape(n_v, n_h)
        return RbmModel(W, d["b_v"], d["b_h"])
    except (KeyError, TypeError, ValueError, InputError) as exc:
        raise FormatError(f"malformed RBM model: {exc}") from exc


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)
