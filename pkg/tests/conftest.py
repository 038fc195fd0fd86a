import pytest

from etamu import FadingFormat, MrcChannel

REF_MUS = (1.0, 1.5, 2.0, 3.5, 4.5)

# filled in by test_acceptance; printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def ref_channel(n_branches: int, mean_snr: float = 1.0) -> MrcChannel:
    return MrcChannel.build(FadingFormat.FORMAT1, 1.2, REF_MUS[:n_branches], mean_snr)


@pytest.fixture
def nakagami_pair():
    """Two format-1 branches with eta = 1, mu = 1: the sum is Gamma(4, 0.5)."""
    return MrcChannel.build(1, 1.0, [1.0, 1.0])


@pytest.fixture
def eta12_single():
    return MrcChannel.build(1, 1.2, [1.0])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
