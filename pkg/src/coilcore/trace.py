"""Uniformly sampled multi-signal simulation output."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

CANONICAL_COLUMNS = ("time", "v_in", "i", "v_out", "q", "l_eff")


def format_float(x: float) -> str:
    return format(x, ".12g")


@dataclass
class Trace:
    """Named equal-length signal arrays on a uniform time grid."""

    dt: float
    columns: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"column lengths differ: {lengths}")

    def __len__(self):
        for v in self.columns.values():
            return len(v)
        return 0

    @property
    def names(self):
        return tuple(self.columns)

    def signal(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"no signal {name!r}; have {list(self.columns)}")
        return self.columns[name]

    @property
    def time(self) -> np.ndarray:
        return self.signal("time")

    def to_csv(self, out, signals=None) -> None:
        """Write CSV with the canonical header.

        Signals absent from the trace (or excluded by ``signals``) are
        emitted as empty fields so the header is stable.
        """
        close = False
        if isinstance(out, (str, bytes)) or hasattr(out, "__fspath__"):
            out = open(out, "w", newline="")
            close = True
        try:
            out.write(",".join(CANONICAL_COLUMNS) + "\n")
            cols = []
            for name in CANONICAL_COLUMNS:
                present = name in self.columns and (signals is None or name in signals
                                                    or name == "time")
                cols.append(self.columns[name] if present else None)
            for k in range(len(self)):
                out.write(",".join(
                    format_float(c[k]) if c is not None else "" for c in cols))
                out.write("\n")
        finally:
            if close:
                out.close()

    def to_csv_text(self, signals=None) -> str:
        buf = io.StringIO()
        self.to_csv(buf, signals=signals)
        return buf.getvalue()
