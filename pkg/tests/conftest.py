import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    database=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("repo")

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.outcome != "passed" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
    passed = sum(o == "passed" for _, o in _acceptance)
    terminalreporter.write_line(f"{passed}/{len(_acceptance)} criteria pass")


@pytest.fixture(scope="session")
def fleet_verdicts():
    """[(D, p, z1, z2, target, verdict)] over the desk-scale fleet, computed once."""
    from tests.oracles import fleet

    from quadidem import build_matrix, decide_conjecture, make_context, make_elem
    from quadidem.errors import QuadIdemError

    out = []
    for D, p, z1, z2 in fleet():
        ctx = make_context(D)
        try:
            target = build_matrix(p, make_elem(ctx, z1, z2))
        except QuadIdemError:
            continue
        out.append((D, p, z1, z2, target, decide_conjecture(target)))
    return out
