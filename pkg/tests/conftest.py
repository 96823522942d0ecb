import itertools
from pathlib import Path

import pytest

from bansync.core import LIMITS, Network

DATA = Path(__file__).resolve().parent.parent / "data"

EXFREE = ["x0 & !x1", "!x0 & x1"]
CONTREX = ["x2 | (x0 & !x1)", "x3 | (!x0 & x1)", "!x0 & x1", "x0 & !x1"]
CONTREX5 = ["x2 | (x0 & !x1) | (x4 & !x1 & !x3)", "x3 | (!x0 & x1)", "!x0 & x1", "x0 & !x1",
            "!(x0 | x1 | x2 | x3) & !x4"]


def configs(n):
    """B^n in the package's integer encoding, with bit tuples (index 0 first)."""
    for x in range(1 << n):
        yield x, tuple((x >> i) & 1 for i in range(n))


def brute_eval(funcs, n):
    """Oracle: evaluate python callables on bit tuples."""
    return {x: tuple(int(f(bits)) for f in funcs) for x, bits in configs(n)}


@pytest.fixture
def exfree():
    return Network.from_expressions(EXFREE, name="exfree")


@pytest.fixture
def contrex():
    return Network.from_expressions(CONTREX, name="contrex")


@pytest.fixture
def contrex5():
    return Network.from_expressions(CONTREX5, name="contrex5")


@pytest.fixture
def restore_limits():
    saved = (LIMITS.eig, LIMITS.sig)
    yield
    LIMITS.eig, LIMITS.sig = saved
