import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = f"{marker.args[0]:>2}. {marker.args[1]}"
    if rep.when == "call" or rep.failed:
        prev = _ACCEPTANCE.get(key)
        _ACCEPTANCE[key] = "FAIL" if rep.failed or prev == "FAIL" else "PASS"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split(".")[0])):
        tr.write_line(f"{_ACCEPTANCE[key]}  {key}")
