import pytest

from p1k import graded_ring as gr

STRONG = ("laurent", "twisted_laurent", "checkerboard")

_BUILDERS = {
    "laurent": gr.laurent,
    "twisted_laurent": lambda: gr.twisted_laurent(4),
    "checkerboard": gr.checkerboard,
    "polynomial": gr.polynomial,
}
_MODELS = {}


def model(name):
    # models cache structure constants, so share one instance per session
    if name not in _MODELS:
        _MODELS[name] = _BUILDERS[name]()
    return _MODELS[name]


@pytest.fixture(params=STRONG)
def strong_model(request):
    return model(request.param)


@pytest.fixture
def laurent():
    return model("laurent")


@pytest.fixture
def board():
    return model("checkerboard")


@pytest.fixture
def tl4():
    return model("twisted_laurent")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
