import pytest
from hypothesis import HealthCheck, settings

from nilvariety import corpus as cp

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


_cache = {}


def by_name(name):
    if name not in _cache:
        for e in cp.default_corpus():
            if e.name == name:
                _cache[name] = e.build()
                break
        else:
            raise KeyError(name)
    return _cache[name]


@pytest.fixture(scope="session")
def group():
    """Factory fixture: ``group("Sym4")`` builds (and caches) a default corpus entry."""
    return by_name


@pytest.fixture(scope="session")
def default_corpus_built():
    built = cp.build_corpus(cp.default_corpus())
    assert not built.skipped, built.skipped
    for name, G in built.groups:
        _cache.setdefault(name, G)
    return built.groups
