import pytest

# criterion number -> {"title", "outcomes", "notes"}
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion checked by this test")


@pytest.fixture
def note(request):
    """Attach a measurement line to the criterion of the current test."""
    mark = request.node.get_closest_marker("criterion")

    def add(text):
        if mark is not None:
            _entry(mark)["notes"].append(text)

    return add


def _entry(mark):
    k, title = mark.args
    return _CRITERIA.setdefault(k, {"title": title, "outcomes": [], "notes": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _entry(mark)["outcomes"].append("skipped" if rep.skipped else rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        e = _CRITERIA[k]
        outs = e["outcomes"]
        if not outs:
            status = "NOT RUN"
        elif all(o == "passed" for o in outs):
            status = "PASS"
        elif any(o == "failed" for o in outs):
            status = "FAIL"
        else:
            status = "SKIPPED"
        if status == "PASS" and any(n.startswith("SOFT-FAIL") for n in e["notes"]):
            status = "SOFT-FAIL"
        tr.write_line("criterion %2d %-9s %s" % (k, status, e["title"]))
        for n in e["notes"]:
            tr.write_line("              %s" % n)
