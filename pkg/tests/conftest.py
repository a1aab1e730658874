import numpy as np
import pytest

from leakcap import JointPmf

_ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, ok, detail)``; a per-criterion line is printed at the end."""
    store = request.config.stash[_ACCEPTANCE_KEY]

    def record(criterion: int, ok: bool, detail: str):
        store.setdefault(criterion, []).append((bool(ok), detail))
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(store):
        parts = store[crit]
        ok = all(p[0] for p in parts)
        detail = "; ".join(p[1] for p in parts)
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'} | {detail}")


def random_joint(rng, names, sizes, conc=1.0) -> JointPmf:
    t = rng.dirichlet(np.full(int(np.prod(sizes)), conc))
    return JointPmf(list(zip(names, sizes)), t)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
