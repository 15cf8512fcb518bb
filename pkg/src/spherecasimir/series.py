"""Truncated summation of monotonically decaying series.

All infinite sums in the package go through :func:`sum_series`.  Terms are
generated in geometrically growing numpy chunks, accumulated without rounding
error by :func:`math.fsum`, and the sum is stopped once an estimate of the
remaining tail stays below ``tol * |partial sum|`` for three consecutive terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SeriesStalledError

MAX_TERMS = 10_000_000
PLATEAU = 3

_FIRST_CHUNK = 32
_MAX_CHUNK = 1 << 16


@dataclass(frozen=True)
class SeriesResult:
    """Dimensionless value of a truncated series plus truncation metadata.

    Energies follow the convention F = (k_B T / 2) * value.
    """

    value: float
    terms_used: int
    last_term: float
    converged: bool = True

    def __float__(self) -> float:
        return float(self.value)


def sum_series(
    terms: Callable[[np.ndarray], np.ndarray],
    tol: float = 1e-15,
    start: int = 0,
    max_terms: int = MAX_TERMS,
    floor: float = 0.0,
) -> SeriesResult:
    """Sum ``terms(n)`` for n = start, start+1, ... until the tail is negligible.

    Parameters
    ----------
    terms : callable
        Vectorised term generator; receives an int64 index array.
    tol : float
        Relative tolerance on the truncated tail.
    start : int
        First index.
    max_terms : int
        Cap on the number of evaluated terms.
    floor : float
        Absolute scale below which the partial sum is not used as reference,
        so that series summing to zero terminate.

    Returns
    -------
    SeriesResult

    Raises
    ------
    SeriesStalledError
        If the cap is reached before the termination test passes.
    """
    chunk_sums: list[float] = []
    total = 0.0
    prev = math.nan
    carry = np.zeros(PLATEAU - 1, dtype=bool)
    n = start
    stop = start + max_terms
    size = _FIRST_CHUNK
    while n < stop:
        idx = np.arange(n, min(n + size, stop), dtype=np.int64)
        t = np.asarray(terms(idx), dtype=float)
        partial = total + np.cumsum(t)
        mag = np.abs(t)
        before = np.empty_like(mag)
        before[0] = abs(prev)
        before[1:] = mag[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(before > 0, mag / before, 0.0)
            # geometric tail bound t*q/(1-q); ratios >= 1 never count as converged
            tail = np.where(q < 1.0, mag * q / (1.0 - q), np.inf)
        tail = np.maximum(tail, mag * np.finfo(float).eps)
        ok = (tail <= tol * np.maximum(np.abs(partial), floor)) | (mag == 0.0)
        ext = np.concatenate([carry, ok])
        window = ext[: len(ok)].copy()
        for j in range(1, PLATEAU):
            window &= ext[j : j + len(ok)]
        hits = np.flatnonzero(window)
        hit = int(hits[0]) if hits.size else -1
        if hit >= 0:
            chunk_sums.append(math.fsum(t[: hit + 1]))
            return SeriesResult(
                value=math.fsum(chunk_sums),
                terms_used=int(idx[hit] - start + 1),
                last_term=float(t[hit]),
                converged=True,
            )
        chunk_sums.append(math.fsum(t))
        total = math.fsum(chunk_sums)
        prev = t[-1]
        carry = ext[-(PLATEAU - 1):]
        n = int(idx[-1]) + 1
        size = min(2 * size, _MAX_CHUNK)
    raise SeriesStalledError(
        f"series-stalled: no convergence within {max_terms} terms (tol={tol:g})"
    )
