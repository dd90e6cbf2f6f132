import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: end-to-end checks over the public contract"
    )


def pytest_runtest_logreport(report):
    # One visible verdict line per acceptance check, even under -q.
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        name = report.nodeid.split("::")[-1]
        if report.passed:
            status = "PASS"
        elif report.skipped:
            status = "SKIP"
        else:
            status = "FAIL"
        print(f"\n[acceptance] {name}: {status}", flush=True)
