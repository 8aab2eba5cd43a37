import functools

from hypothesis import HealthCheck, settings

from polyalab.numfield import NumberField, class_group
from polyalab.poly import IntPoly

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("repo")


@functools.lru_cache(maxsize=None)
def field_of(coeffs):
    return NumberField(IntPoly(tuple(coeffs)))


@functools.lru_cache(maxsize=None)
def class_group_of(coeffs):
    return class_group(field_of(coeffs))


ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
