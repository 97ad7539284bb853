"""One evaluation of a recovery method, and its CSV form."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RunRecord:
    method: str
    param: float | None
    index: float
    point: tuple
    value: complex
    truth: complex

    @property
    def abs_error(self) -> float:
        return abs(self.value - self.truth)


def csv_header(d: int) -> list[str]:
    return (["method", "param", "index"] + [f"x_{j + 1}" for j in range(d)]
            + ["value_re", "value_im", "truth_re", "truth_im", "abs_error"])


def _num(v) -> str:
    v = float(v)
    if math.isfinite(v) and v == int(v) and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def record_row(rec: RunRecord) -> list[str]:
    return ([rec.method, "" if rec.param is None else _num(rec.param), _num(rec.index)]
            + [_num(c) for c in rec.point]
            + [repr(float(rec.value.real)), repr(float(rec.value.imag)),
               repr(float(rec.truth.real)), repr(float(rec.truth.imag)),
               repr(float(rec.abs_error))])


def write_records(path, records, d: int):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header(d))
        for rec in records:
            writer.writerow(record_row(rec))


def read_records(path) -> list[RunRecord]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        d = len(header) - 8
        for row in reader:
            point = tuple(float(v) for v in row[3:3 + d])
            vr, vi, tr, ti = (float(v) for v in row[3 + d:7 + d])
            out.append(RunRecord(row[0], float(row[1]) if row[1] else None, float(row[2]),
                                 point, complex(vr, vi), complex(tr, ti)))
    return out


def truth_of(mu, x) -> complex:
    """Ground-truth ``mu({x})``, or NaN when ``mu`` is only known through its spectrum."""
    from .measures import Measure, true_atom

    if isinstance(mu, Measure):
        return true_atom(mu, x)
    known = getattr(mu, "truth", None)
    if known is None:
        return complex(np.nan, np.nan)
    return true_atom(known, x)
