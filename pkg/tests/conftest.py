import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = rep.failed
    if rep.when == "call" or failed:
        prev = _RESULTS.get(num)
        ok = not failed and (prev is None or prev[1])
        measured = [f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}" for k, v in item.user_properties]
        _RESULTS[num] = (title, ok, measured)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, ok, measured = _RESULTS[num]
        extra = f"  ({', '.join(measured)})" if measured else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {num:2d}. {title}{extra}")
