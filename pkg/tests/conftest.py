"""Shared pytest hooks: per-criterion pass/fail summary for the acceptance
suite (tests named test_criterion_NN_* in test_acceptance.py)."""

import re

CRITERIA = {
    1: "exact drift identity on the clamp-free lattice",
    2: "transience functional scan has zero violations",
    3: "recurrence functional scan clean, threshold sanity holds",
    4: "constant-drift exit bound: all exits, nu floor, power-sign scan",
    5: "running-minimum tail within the 4hB1^2/b^2 bound",
    6: "sqrt-t crossing estimates nondecreasing with frozen margin",
    7: "hitting-curve phase separation across drift strengths",
    8: "transient growth exponent within 0.7 +/- 0.05",
    9: "urn coupling identity with unit steps",
    10: "urn return census direction and recurrent/transient ratio",
    11: "classifier table pins and sweep inequality consistency",
    12: "byte-identical artifacts across thread counts",
}

_PATTERN = re.compile(r"test_criterion_(\d\d)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    state = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            match = _PATTERN.search(getattr(report, "nodeid", ""))
            if not match:
                continue
            n = int(match.group(1))
            state[n] = state.get(n, True) and key == "passed"
    if not state:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(state):
        verdict = "PASS" if state[n] else "FAIL"
        terminalreporter.write_line(
            f"criterion {n:2d}: {verdict} - {CRITERIA.get(n, '?')}")
