import pytest

from specforge.session import Session, corpus_text

ACCEPTANCE_LINES = []


def load(name, **kw):
    s = Session(**kw)
    s.load_text(corpus_text(name))
    return s


@pytest.fixture(scope="session")
def monoid_session():
    return load("closed_monoid.gsl")


@pytest.fixture(scope="session")
def members_session():
    return load("members.gsl")


@pytest.fixture()
def fresh_session():
    return Session()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
