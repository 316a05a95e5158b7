from pathlib import Path

import pytest

from zlad.ladder import build_table, load_table, save_table

ROOT = Path(__file__).resolve().parents[1]
CACHE = ROOT / ".cache"
FIXTURES = ROOT / "fixtures"
TABLE_T_MAX = 2e5


def _cached_table(t_max: float, name: str):
    path = CACHE / name
    if path.exists():
        return load_table(path, t_max=t_max)
    table = build_table(t_max)
    CACHE.mkdir(exist_ok=True)
    save_table(table, path)
    return table


@pytest.fixture(scope="session")
def table():
    """The default ladder table to 2e5, built once and cached under .cache/."""
    return _cached_table(TABLE_T_MAX, "ladder-table-2e5.csv")


@pytest.fixture(scope="session")
def table_path(table):
    return CACHE / "ladder-table-2e5.csv"


@pytest.fixture(scope="session")
def small_table():
    return build_table(1e3)


def read_fixture_rows(name: str, skip: int):
    lines = (FIXTURES / name).read_text().splitlines()
    return [ln for ln in lines[skip:] if ln.strip()]


@pytest.fixture(scope="session")
def zero_heights():
    return [float(x) for x in read_fixture_rows("zeros.csv", 1)]


@pytest.fixture(scope="session")
def z_oracle():
    rows = read_fixture_rows("z_values.csv", 2)
    return [tuple(float(v) for v in r.split(",")) for r in rows]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
