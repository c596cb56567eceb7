"""JSON/CSV encodings shared by the library and the command line.

Complex numbers travel as [re, im] pairs; points as arrays of pairs;
maps as row-major (n+1)x(n+1) arrays of pairs.  A bare real number is
accepted wherever a pair is expected.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

import numpy as np

from .ball import MoebiusMap, as_point


def complex_from_json(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex number must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    raise ValueError(f"cannot read a complex number from {value!r}")


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def point_to_json(z) -> list[list[float]]:
    return [complex_to_json(c) for c in np.asarray(z).reshape(-1)]


def point_from_json(data, n: int | None = None) -> np.ndarray:
    if not isinstance(data, (list, tuple)):
        data = [data]
    return as_point([complex_from_json(c) for c in data], n)


def map_to_json(m: MoebiusMap) -> list[list[list[float]]]:
    return [[complex_to_json(c) for c in row] for row in m.mat]


def map_from_json(data) -> MoebiusMap:
    mat = np.array([[complex_from_json(c) for c in row] for row in data], dtype=complex)
    return MoebiusMap.from_matrix(mat)


def orbit_csv(points: Sequence[np.ndarray], shells: Iterable[int]) -> str:
    """Rows re_1, im_1, ..., re_n, im_n, shell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    points = list(points)
    n = points[0].size if points else 0
    header = [f"{part}{j}" for j in range(1, n + 1) for part in ("re", "im")] + ["shell"]
    writer.writerow(header)
    for p, shell in zip(points, shells):
        row: list = []
        for c in p:
            row.extend([repr(float(c.real)), repr(float(c.imag))])
        row.append(shell)
        writer.writerow(row)
    return buf.getvalue()
