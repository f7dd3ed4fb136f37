import pytest

from minibank import Bank, BankConfig, ManualClock


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: spec exit-criteria suite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance check."""
    reports = []
    for outcome in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(outcome, []))
    acceptance = [r for r in reports
                  if getattr(r, "when", "call") == "call"
                  and "test_acceptance.py" in r.nodeid.split("::", 1)[0]]
    if not acceptance:
        return
    acceptance.sort(key=lambda r: r.nodeid)
    terminalreporter.write_sep("-", "acceptance criteria")
    for report in acceptance:
        word = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::", 1)[1]
        terminalreporter.write_line(f"{word}  {name}")


def fast_config(**overrides) -> BankConfig:
    """Test config: cheap digests, no fsync per event."""
    defaults = dict(digest_iterations=1_000, flush_policy="batch")
    defaults.update(overrides)
    return BankConfig(**defaults)


@pytest.fixture
def clock() -> ManualClock:
    return ManualClock()


@pytest.fixture
def bank(clock) -> Bank:
    """In-memory bank, not seeded."""
    return Bank.in_memory(fast_config(), clock)


@pytest.fixture
def seeded(clock) -> Bank:
    """In-memory bank with the demo fixture loaded."""
    b = Bank.in_memory(fast_config(), clock)
    b.admin.seed()
    return b


@pytest.fixture
def seeded_dir(tmp_path, clock):
    """Journal-backed bank in a temp dir, seeded; yields (bank, data_dir)."""
    data_dir = str(tmp_path / "data")
    b = Bank.open(data_dir, config=fast_config(), clock=clock)
    b.admin.seed()
    yield b, data_dir
    b.close()


DEMO_CUSTOMER = "C000001"
DEMO_CURRENT = "0000000001"
DEMO_SAVINGS = "0000000002"
