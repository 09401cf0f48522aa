"""
Tabulated running suprema f*(r) = sup_{0 < u <= r} f(u) and their right-sided inverses
"""

import logging
import math
import threading
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from calculations.errors import EnvelopeRangeError
from app_config import (ENVELOPE_NODES_PER_DECADE, ENVELOPE_INITIAL_RANGE, ENVELOPE_EXTENSION_FACTOR,
                        ENVELOPE_LOCAL_SAMPLES, ENVELOPE_MIN_ARGUMENT, ENVELOPE_MAX_ARGUMENT,
                        ENVELOPE_INVERSE_RTOL)

logger = logging.getLogger(__name__)


class _Table(NamedTuple):
    nodes: np.ndarray
    values: np.ndarray
    runmax: np.ndarray


def _log_nodes(lo: float, hi: float, per_decade: int) -> np.ndarray:
    count = max(2, int(round(math.log10(hi / lo) * per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), count)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


class MonotoneEnvelope:
    """
    Nondecreasing majorant of a nonnegative function on (0, inf).

    The table starts on ENVELOPE_INITIAL_RANGE and is extended by ENVELOPE_EXTENSION_FACTOR
    on demand. Readers always see a complete table: extensions build a new one and swap it
    in under the lock.
    """

    def __init__(self,
                 func: Callable[[np.ndarray], np.ndarray],
                 name: str = 'f',
                 nodes_per_decade: int = ENVELOPE_NODES_PER_DECADE):
        self.func = func
        self.name = name
        self.nodes_per_decade = nodes_per_decade
        self._lock = threading.Lock()
        lo, hi = ENVELOPE_INITIAL_RANGE
        nodes = _log_nodes(lo, hi, nodes_per_decade)
        self._table = self._build(nodes, self._evaluate(nodes))

    def _evaluate(self, r: np.ndarray) -> np.ndarray:
        values = np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)
        return np.where(np.isfinite(values), values, np.inf)

    @staticmethod
    def _build(nodes: np.ndarray, values: np.ndarray) -> _Table:
        return _Table(_frozen(nodes), _frozen(values), _frozen(np.maximum.accumulate(values)))

    @property
    def table(self) -> _Table:
        return self._table

    @property
    def refinements(self) -> int:
        """Number of tabulated nodes, a proxy for how far the table has been extended"""
        return len(self._table.nodes)

    def _extend(self, lo: float = None, hi: float = None) -> _Table:
        with self._lock:
            table = self._table
            nodes, values = table.nodes, table.values
            if lo is not None and lo < nodes[0]:
                new_lo = max(ENVELOPE_MIN_ARGUMENT, min(lo, nodes[0] / ENVELOPE_EXTENSION_FACTOR))
                left = _log_nodes(new_lo, nodes[0], self.nodes_per_decade)[:-1]
                nodes = np.concatenate([left, nodes])
                values = np.concatenate([self._evaluate(left), values])
            if hi is not None and hi > nodes[-1]:
                new_hi = min(ENVELOPE_MAX_ARGUMENT, max(hi, nodes[-1] * ENVELOPE_EXTENSION_FACTOR))
                right = _log_nodes(nodes[-1], new_hi, self.nodes_per_decade)[1:]
                nodes = np.concatenate([nodes, right])
                values = np.concatenate([values, self._evaluate(right)])
            if len(nodes) != len(table.nodes):
                logger.debug("%s envelope extended to [%g, %g] (%d nodes)",
                             self.name, nodes[0], nodes[-1], len(nodes))
                self._table = self._build(nodes, values)
            return self._table

    def _covering(self, r: float) -> _Table:
        if not ENVELOPE_MIN_ARGUMENT <= r <= ENVELOPE_MAX_ARGUMENT:
            raise EnvelopeRangeError(f"{self.name}* queried at {r}, outside the tabulation guards")
        table = self._table
        if r < table.nodes[0]:
            table = self._extend(lo=r)
        elif r > table.nodes[-1]:
            table = self._extend(hi=r)
        return table

    def value(self, r: float) -> float:
        """f*(r): running maximum up to the bracketing node, refined inside the cell"""
        if not r > 0:
            raise ValueError(f"{self.name}* needs r > 0: {r}")
        table = self._covering(r)
        i = int(np.searchsorted(table.nodes, r, side='right')) - 1
        if i < 0:
            return float(self._evaluate(np.array([r]))[0])
        base = table.runmax[i]
        if r == table.nodes[i]:
            return float(base)
        local = self._evaluate(np.linspace(table.nodes[i], r, ENVELOPE_LOCAL_SAMPLES))
        return float(max(base, local.max()))

    def inverse(self, s: float) -> float:
        """
        Right-sided inverse sup{r > 0: f*(r) = s}

        Raises:
            EnvelopeRangeError: s is below the smallest or above the largest reachable value
        """
        if not s > 0:
            raise ValueError(f"{self.name}^-1 needs s > 0: {s}")
        table = self._table
        while table.runmax[0] > s:
            if table.nodes[0] <= ENVELOPE_MIN_ARGUMENT * (1 + 1e-12):
                raise EnvelopeRangeError(f"{s} is below the range of {self.name}*")
            table = self._extend(lo=table.nodes[0] / ENVELOPE_EXTENSION_FACTOR)
        while not table.runmax[-1] > s:
            if table.nodes[-1] >= ENVELOPE_MAX_ARGUMENT * (1 - 1e-12):
                raise EnvelopeRangeError(f"{s} is above the range of {self.name}*")
            table = self._extend(hi=table.nodes[-1] * ENVELOPE_EXTENSION_FACTOR)

        j = int(np.argmax(table.runmax > s))
        a, b = float(table.nodes[j - 1]), float(table.nodes[j])
        fa = float(self._evaluate(np.array([a]))[0]) - s
        if fa >= 0:
            return a

        def gap(r):
            return float(self._evaluate(np.array([r]))[0]) - s

        return brentq(gap, a, b, xtol=1e-14 * a, rtol=ENVELOPE_INVERSE_RTOL, maxiter=200)
