"""CSV loading helpers shared by the plot scripts."""

from __future__ import annotations

import numpy as np


class MissingColumnError(KeyError):
    """A required CSV column is absent; the message names file and column."""


def read_columns(path, required=()):
    """Load a headed CSV into a {column: 1D array} dict.

    `required` columns are checked against the header before the data is
    parsed, so a schema mismatch fails with the column names instead of a
    shape error downstream.
    """
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    missing = [c for c in required if c not in header]
    if missing:
        raise MissingColumnError(
            f"{path}: missing column(s) {', '.join(missing)}; "
            f"found {', '.join(header)}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def mixture_field(cols, field, path="<csv>"):
    """Resolve a plot field against solver columns.

    Solver snapshots store per-phase pressures and temperatures; the
    mixture values are volume-fraction weighted (pressure) and phase
    fields weighted the same way for a single display temperature.
    Oracle CSVs carry `p`/`T` directly.
    """
    if field in cols:
        return cols[field]
    pair = {"p": ("p1", "p2"), "T": ("T1", "T2")}.get(field)
    if pair and all(k in cols for k in pair + ("alpha2",)):
        a2 = cols["alpha2"]
        return (1.0 - a2) * cols[pair[0]] + a2 * cols[pair[1]]
    raise MissingColumnError(
        f"{path}: cannot resolve field {field!r} from columns "
        f"{', '.join(cols)}")
