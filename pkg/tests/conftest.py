from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

# fixed seed, no deadlines: every run checks the same cases
settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

#: example count for the property suites
MANY = settings(max_examples=1000)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("QUATSPIN_SKIP_SLOW"):
        skip = pytest.mark.skip(reason="QUATSPIN_SKIP_SLOW is set")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip)


#: (criterion, passed, line) rows filled in by test_acceptance.py
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
