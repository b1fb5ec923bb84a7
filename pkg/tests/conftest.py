import itertools

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from coxstat.groups import GroupDescriptor

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def signed_permutations(draw, families="ABD", max_n=6):
    family = draw(st.sampled_from(families))
    lo = 4 if family == "D" else (1 if family == "A" else 1)
    n = draw(st.integers(lo, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    if family == "A":
        signs = [1] * n
    else:
        signs = draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
        if family == "D" and signs.count(-1) % 2:
            signs[-1] = -signs[-1]
    return GroupDescriptor(family, n).element([s * p for s, p in zip(signs, perm)])


def all_windows(desc: GroupDescriptor):
    """Every element, listed straight from the definition (independent of the enumerator)."""
    n = desc.n
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        if desc.family == "A":
            out.append(desc.element(perm))
            continue
        for signs in itertools.product((1, -1), repeat=n):
            if desc.family == "D" and signs.count(-1) % 2:
                continue
            out.append(desc.element([s * p for s, p in zip(signs, perm)]))
    return out


SMALL_GROUPS = [GroupDescriptor(*g) for g in
                [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 1), ("B", 2), ("B", 3),
                 ("D", 2), ("D", 3), ("D", 4)]]


@pytest.fixture(params=SMALL_GROUPS, ids=str)
def small_group(request):
    return request.param


# -- acceptance report: one line per criterion, printed after the run ----------

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record ``(id, title)`` and the outcome of the test as one report line."""
    box = {}

    def declare(cid, title, detail=""):
        box.update(cid=cid, title=title, detail=detail)

    def note(detail):
        box["detail"] = detail

    declare.note = note
    yield declare
    rep = getattr(request.node, "rep_call", None)
    if "cid" in box:
        ok = rep is not None and rep.passed
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {box['cid']:>2}: {box['title']}"
        if box.get("detail"):
            line += f" | {box['detail']}"
        ACCEPTANCE_LINES[box["cid"]] = line


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[cid])
