from datetime import date, timedelta

import numpy as np
import pytest

from minkgarch.garch import GarchParams, SimConfig, simulate
from minkgarch.series import serialize_returns


def write_prices(path, returns, start=100.0):
    prices = start * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))
    d0 = date(2000, 1, 3)
    rows = ["date,price"] + [f"{(d0 + timedelta(days=i)).isoformat()},{float(p)!r}" for i, p in enumerate(prices)]
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture
def price_file(tmp_path):
    r = simulate(GarchParams(0.05, 0.10, 0.85), SimConfig(seed=21, T=1500)).values * 0.01
    return write_prices(tmp_path / "prices.csv", r)


@pytest.fixture
def igarch_returns_file(tmp_path):
    r = simulate(GarchParams(0.02, 0.10, 0.88), SimConfig(seed=0, T=100_000, burn_in=1000))
    path = tmp_path / "igarch.txt"
    path.write_text(serialize_returns(r))
    return path


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
