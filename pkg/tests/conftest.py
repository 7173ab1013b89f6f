import os
import time

import pytest

from polartwist import twist_d5 as d5
from polartwist import twist_d6 as d6
from polartwist.quadspace import QuadraticSpace, enumerate_maximals

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}
TIMINGS: dict[str, float] = {}


def record(criterion: int, ok: bool, detail: str):
    """Remember one sub-result of an acceptance criterion and echo it."""
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[c]
        ok = all(p for p, _ in parts)
        tr.write_line(f"criterion {c:>2}: {'PASS' if ok else 'FAIL'}")
        for p, detail in parts:
            tr.write_line(f"    [{'ok' if p else 'FAIL'}] {detail}")


class Timer:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t
        TIMINGS[self.name] = self.elapsed


@pytest.fixture(scope="session")
def fams10():
    with Timer("enumerate O+(10,2)"):
        return enumerate_maximals(QuadraticSpace(2, 5))


@pytest.fixture(scope="session")
def fams12():
    with Timer("enumerate O+(12,2)"):
        return enumerate_maximals(QuadraticSpace(2, 6))


@pytest.fixture(scope="session")
def ctx2(fams10):
    return d5.d5_context(2, families=fams10)


@pytest.fixture(scope="session")
def gamma2(ctx2):
    return d5.build_gamma(ctx2)


@pytest.fixture(scope="session")
def gamma_prime2(ctx2):
    return d5.build_gamma_prime(ctx2)


@pytest.fixture(scope="session")
def ctx6(fams12):
    return d6.d6_context(2, families=fams12)


@pytest.fixture(scope="session")
def d6_run(ctx6):
    """Γ, the partition, the validation report and the (non-strict) switch."""
    with Timer("D6 build+switch"):
        G = d6.build_gamma6(ctx6)
        part = d6.build_partition(ctx6)
        Gp, report = d6.validate_and_switch(ctx6, G, part, strict=False)
    return {"G": G, "part": part, "Gp": Gp, "report": report}


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    env = os.environ.get("POLARTWIST_CACHE")
    return env or str(tmp_path_factory.mktemp("cache"))
