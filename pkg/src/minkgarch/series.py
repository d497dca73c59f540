"""Price ingestion, returns and sample moments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime, time
from typing import Iterable, Literal, Sequence, Union

import numpy as np

from .errors import MalformedRow, NonMonotoneTime, NonPositivePrice, TooShort, ZeroVariance

Instant = Union[date, datetime]


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeries:
    timestamps: tuple
    prices: np.ndarray

    def __post_init__(self):
        prices = _frozen(self.prices)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "timestamps", tuple(self.timestamps))
        if prices.ndim != 1 or len(self.timestamps) != prices.size:
            raise MalformedRow("timestamps and prices must have equal length")
        if not np.all(np.isfinite(prices)):
            raise MalformedRow("prices must be finite")
        bad = np.flatnonzero(prices <= 0)
        if bad.size:
            raise NonPositivePrice(f"price at row {bad[0]} is {prices[bad[0]]!r}")
        for i in range(1, len(self.timestamps)):
            if not self.timestamps[i] > self.timestamps[i - 1]:
                raise NonMonotoneTime(
                    f"timestamp {self.timestamps[i]} at row {i} does not follow {self.timestamps[i - 1]}"
                )

    def __len__(self) -> int:
        return self.prices.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return self.timestamps == other.timestamps and np.array_equal(self.prices, other.prices)

    __hash__ = None


@dataclass(frozen=True)
class ReturnSeries:
    values: np.ndarray
    kind: Literal["log", "simple"] = "log"

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1:
            raise MalformedRow("returns must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise MalformedRow("returns must be finite")
        if self.kind not in ("log", "simple"):
            raise ValueError(f"unknown return kind {self.kind!r}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReturnSeries):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    fourth_moment: float
    excess_kurtosis: float


def as_values(returns: ReturnSeries | Sequence[float] | np.ndarray) -> np.ndarray:
    """Return the raw float array behind a ReturnSeries or array-like."""
    if isinstance(returns, ReturnSeries):
        return returns.values
    arr = np.asarray(returns, dtype=float)
    if arr.ndim != 1:
        raise MalformedRow("expected a one-dimensional series")
    return arr


def _parse_instant(text: str) -> Instant:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        return date.fromisoformat(text)
    except ValueError:
        return datetime.fromisoformat(text)


def _is_instant(text: str) -> bool:
    try:
        _parse_instant(text)
    except ValueError:
        return False
    return True


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_price_csv(text: str | Iterable[str]) -> PriceSeries:
    """Parse ``date,price`` rows into a validated PriceSeries.

    Blank lines and ``#`` comment lines are skipped. The first row is a
    header when its second field is not numeric and its first is not a date,
    so ``2020-01-01,a`` is still reported as a malformed data row.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    stamps: list[Instant] = []
    prices: list[float] = []
    seen_row = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise MalformedRow(f"line {lineno}: expected 2 fields, got {len(fields)}")
        if not seen_row:
            seen_row = True
            if not _is_number(fields[1]) and not _is_instant(fields[0]):
                continue
        try:
            stamp = _parse_instant(fields[0])
            price = float(fields[1])
        except ValueError as exc:
            raise MalformedRow(f"line {lineno}: {exc}") from None
        if not math.isfinite(price):
            raise MalformedRow(f"line {lineno}: non-finite price {fields[1]!r}")
        if price <= 0:
            raise NonPositivePrice(f"line {lineno}: price {price!r} is not positive")
        stamps.append(stamp)
        prices.append(price)

    # mixed date/datetime columns cannot be compared; promote dates to midnight
    if any(isinstance(s, datetime) for s in stamps):
        stamps = [s if isinstance(s, datetime) else datetime.combine(s, time()) for s in stamps]
    try:
        return PriceSeries(tuple(stamps), np.array(prices, dtype=float))
    except TypeError as exc:  # naive vs aware datetimes
        raise MalformedRow(str(exc)) from None


def serialize_prices(series: PriceSeries, header: bool = True) -> str:
    """Render a PriceSeries as CSV; floats use the shortest round-trip repr."""
    rows = ["date,price"] if header else []
    rows += [f"{ts.isoformat()},{float(p)!r}" for ts, p in zip(series.timestamps, series.prices)]
    return "\n".join(rows) + "\n"


def parse_returns(text: str | Iterable[str], kind: Literal["log", "simple"] = "log") -> ReturnSeries:
    """Parse one decimal per line (blank and ``#`` lines ignored)."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise MalformedRow(f"line {lineno}: cannot parse {line!r} as a number") from None
    return ReturnSeries(np.array(values, dtype=float), kind)


def serialize_returns(returns: ReturnSeries | np.ndarray) -> str:
    return "".join(f"{v:.17g}\n" for v in as_values(returns))


def log_returns(series: PriceSeries) -> ReturnSeries:
    if len(series) < 2:
        raise TooShort("need at least 2 prices for a return")
    return ReturnSeries(np.diff(np.log(series.prices)), "log")


def simple_returns(series: PriceSeries) -> ReturnSeries:
    if len(series) < 2:
        raise TooShort("need at least 2 prices for a return")
    p = series.prices
    return ReturnSeries(p[1:] / p[:-1] - 1.0, "simple")


def moments(returns: ReturnSeries | Sequence[float] | np.ndarray) -> MomentSummary:
    """Population (divide-by-N) moments and excess kurtosis."""
    x = as_values(returns)
    if x.size < 4:
        raise TooShort(f"need at least 4 observations, got {x.size}")
    mean = float(np.mean(x))
    dev = x - mean
    var = float(np.mean(dev**2))
    if var == 0.0:
        raise ZeroVariance("series is constant")
    mu4 = float(np.mean(dev**4))
    return MomentSummary(mean, var, mu4, mu4 / var**2 - 3.0)
