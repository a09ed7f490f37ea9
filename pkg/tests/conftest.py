import pytest

from skewbraid.factory import preset
from skewbraid.monodromy import track_circle
from skewbraid.skewparam import SkewParam

EX1 = SkewParam.from_flat(3, [0, 0, 0, -2, 0, 0, 0])
EX2 = SkewParam.from_flat(3, [0, -2, 0, 0, 0, 0, 0])
EX3 = SkewParam.from_flat(3, [0, 0, 0, 0, 0, 4j, 0])

ADM_PRESETS = ["d3-ex1-adm", "d3-ex2-adm", "d3-ex3-adm", "d2-s0-adm", "d2-s1-adm", "d2-s2-adm"]


@pytest.fixture(scope="session")
def geometries():
    """Level-1, one-turn geometry for every admissible preset."""
    return {name: track_circle(preset(name), 1, 1) for name in ADM_PRESETS}


CRITERIA_LINES: list[str] = []


def report_criterion(label: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
    CRITERIA_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
