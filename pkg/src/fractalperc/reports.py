"""Delimited output with a fixed float format.

Floats print with 17 significant digits (round-trip safe) and rows end in
LF regardless of platform, so identical runs produce identical bytes.
"""

from __future__ import annotations


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    try:  # numpy scalars
        import numpy as np

        if isinstance(value, np.floating):
            return format(float(value), ".17g")
        if isinstance(value, np.integer):
            return str(int(value))
    except ImportError:  # pragma: no cover
        pass
    return str(value)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows):
    text = csv_text(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text
