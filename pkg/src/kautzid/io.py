"""CSV readers and writers for responses, pole sets and run results.

Formats:

* FRF: header ``frequency_hz,real,imag``.
* Impulse response: comment line ``# sample_rate_hz=<fs>``, header ``k,value``.
* Pole set: optional ``# key=value`` provenance comments, header ``re,im``;
  one line per pair, conjugates implied.
* Weights: ``index,value``; error history: ``k,e_k``.

Floats are written with ``repr`` so that identical runs give identical files.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .kautz import PoleSet
from .prony import TrainingEnsemble
from .signals import FrequencyResponse, ImpulseResponse

__all__ = [
    "fmt",
    "read_frf_csv",
    "write_frf_csv",
    "read_impulse_response_csv",
    "write_impulse_response_csv",
    "read_ensemble_dir",
    "write_ensemble_dir",
    "read_poles_csv",
    "write_poles_csv",
    "write_weights_csv",
    "write_error_history_csv",
    "write_table",
]


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _comments_and_rows(path):
    meta, rows = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            rows.append(line)
    reader = csv.reader(rows)
    header = [h.strip() for h in next(reader)]
    return meta, header, [r for r in reader]


def _columns(path, header, rows, names):
    missing = [n for n in names if n not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}, found {header}")
    idx = [header.index(n) for n in names]
    data = np.array([[float(r[i]) for i in idx] for r in rows], dtype=float)
    return data.reshape(-1, len(names)).T


def write_table(path, header, rows, comments=()):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_frf_csv(path) -> FrequencyResponse:
    _, header, rows = _comments_and_rows(path)
    f, re, im = _columns(path, header, rows, ["frequency_hz", "real", "imag"])
    return FrequencyResponse(f, re + 1j * im)


def write_frf_csv(path, frf: FrequencyResponse):
    rows = zip(frf.frequencies_hz, frf.values.real, frf.values.imag)
    write_table(path, ["frequency_hz", "real", "imag"], rows)


def read_impulse_response_csv(path) -> ImpulseResponse:
    meta, header, rows = _comments_and_rows(path)
    if "sample_rate_hz" not in meta:
        raise ValueError(f"{path}: missing '# sample_rate_hz=' header line")
    k, value = _columns(path, header, rows, ["k", "value"])
    if not np.array_equal(k, np.arange(k.size)):
        raise ValueError(f"{path}: sample index column must run 0, 1, 2, ...")
    return ImpulseResponse(value, float(meta["sample_rate_hz"]))


def write_impulse_response_csv(path, ir: ImpulseResponse):
    write_table(
        path,
        ["k", "value"],
        zip(range(len(ir)), ir.samples),
        comments=[f"sample_rate_hz={fmt(ir.sample_rate_hz)}"],
    )


def read_ensemble_dir(directory) -> TrainingEnsemble:
    """All ``*.csv`` impulse responses in ``directory``, in file-name order."""
    files = sorted(Path(directory).glob("*.csv"))
    if not files:
        raise ValueError(f"no impulse-response CSV files in {directory}")
    return TrainingEnsemble(tuple(read_impulse_response_csv(f) for f in files))


def write_ensemble_dir(directory, ensemble: TrainingEnsemble, prefix: str = "ir"):
    directory = Path(directory)
    width = max(2, len(str(len(ensemble))))
    for i, ir in enumerate(ensemble.responses):
        write_impulse_response_csv(directory / f"{prefix}_{i:0{width}d}.csv", ir)


def read_poles_csv(path) -> PoleSet:
    meta, header, rows = _comments_and_rows(path)
    re, im = _columns(path, header, rows, ["re", "im"])
    return PoleSet.from_complex(re + 1j * im, **meta)


def write_poles_csv(path, poles: PoleSet):
    comments = [f"{k}={fmt(v) if isinstance(v, (int, float, np.number)) else v}"
                for k, v in sorted(poles.provenance.items())]
    p = poles.as_array()
    write_table(path, ["re", "im"], zip(p.real, p.imag), comments=comments)


def write_weights_csv(path, weights):
    write_table(path, ["index", "value"], enumerate(np.asarray(weights, dtype=float)))


def write_error_history_csv(path, errors):
    write_table(path, ["k", "e_k"], enumerate(np.asarray(errors, dtype=float)))
