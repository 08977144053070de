import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion."""
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return
    outcome = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when not in ("call", "setup"):
                continue
            num = int(nodeid.split("test_criterion_")[1][:2])
            ok = key == "passed"
            outcome[num] = outcome.get(num, True) and ok
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for num, title in sorted(CRITERIA.items()):
        if num in outcome:
            status = "PASS" if outcome[num] else "FAIL"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"criterion {num:2d} {status}: {title}")
