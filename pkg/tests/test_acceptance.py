"""Runs each acceptance criterion and prints one pass/fail line per criterion."""

import pytest

from steinerlab.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion-{c.cid}")
def test_criterion(criterion, request):
    outcome = run_criterion(criterion)
    status = "PASS" if outcome.passed else "FAIL"
    line = (f"criterion {outcome.cid} {status} ({outcome.seconds:.2f}s, limit {outcome.limit:.0f}s): "
            f"{outcome.name}")
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line(line)
    else:
        print(line)
    assert outcome.actual == outcome.expected, "\n".join(outcome.diff)
    assert outcome.seconds < outcome.limit, f"took {outcome.seconds:.2f}s, limit {outcome.limit}s"
