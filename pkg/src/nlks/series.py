"""Time series of norm observables recorded along a trajectory."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import InvariantViolation
from .spectral import h1_norm, h2_norm, l2_norm, to_real

COLUMNS = ("t", "l2", "h1", "h2", "linf", "mean")


@dataclass(frozen=True, eq=False)
class NormSeries:
    times: np.ndarray
    l2: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    linf: np.ndarray
    mean: np.ndarray

    def __post_init__(self):
        n = None
        for f in fields(self):
            arr = np.array(getattr(self, f.name), dtype=float).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, f.name, arr)
            if n is None:
                n = arr.size
            elif arr.size != n:
                raise InvariantViolation("NormSeries columns differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise InvariantViolation("NormSeries times must be strictly increasing")
        for name in ("l2", "h1", "h2", "linf"):
            if np.any(getattr(self, name) < 0):
                raise InvariantViolation(f"negative {name} norm in series")

    def __len__(self):
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, NormSeries):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f.name), getattr(other, f.name)) for f in fields(self)
        )

    __hash__ = None

    @classmethod
    def from_rows(cls, rows):
        """``rows`` is an iterable of (t, l2, h1, h2, linf, mean) tuples."""
        arr = np.asarray(list(rows), dtype=float).reshape(-1, len(COLUMNS))
        return cls(*arr.T)

    def rows(self) -> np.ndarray:
        return np.column_stack([self.times, self.l2, self.h1, self.h2, self.linf, self.mean])

    def window(self, t0=-np.inf, t1=np.inf) -> "NormSeries":
        keep = (self.times >= t0) & (self.times <= t1)
        return NormSeries.from_rows(self.rows()[keep])

    def sup(self, name, t0=-np.inf, t1=np.inf) -> float:
        keep = (self.times >= t0) & (self.times <= t1)
        vals = getattr(self, name)[keep]
        if vals.size == 0:
            raise ValueError(f"no samples in window [{t0}, {t1}]")
        return float(np.max(vals))


def observe(t, u):
    """One NormSeries row for field ``u`` at time ``t``."""
    values = to_real(u).values
    return (
        float(t),
        l2_norm(u),
        h1_norm(u),
        h2_norm(u),
        float(np.max(np.abs(values))),
        float(np.mean(values)),
    )
