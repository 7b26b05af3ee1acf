import os

import pytest

from classes.Catalog import builtin, cyclic_group, trivial
from classes.Semigroup import GeneratingMap

SEMIGROUPS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "semigroups")

# Small instances used for corpus-wide properties, each of order <= 8
CORPUS = ["trivial", "z2", "z3", "z2_0", "z3_0", "sl", "chain3", "null", "lz2", "rb12", "rb22", "rb23", "rm_z2"]

# Instances whose expansions stay small enough for exhaustive word checks
SMALL_CORPUS = ["trivial", "z2", "z3", "z2_0", "sl", "chain3", "null", "lz2", "rb12", "rb22"]


def semigroup_file(name: str) -> str:
    return os.path.join(SEMIGROUPS_DIR, name)


@pytest.fixture
def sl():
    return builtin("sl")


@pytest.fixture
def z2_0():
    return builtin("z2_0")


@pytest.fixture
def trivial_a():
    S = trivial()
    return S, GeneratingMap(("a",), (0,))


@pytest.fixture
def trivial_ab():
    S = trivial()
    return S, GeneratingMap(("a", "b"), (0, 0))


@pytest.fixture
def z2():
    return cyclic_group(2)


@pytest.fixture(params=CORPUS)
def corpus_instance(request):
    S, gmap = builtin(request.param)
    return request.param, S, gmap


@pytest.fixture(params=SMALL_CORPUS)
def small_instance(request):
    S, gmap = builtin(request.param)
    return request.param, S, gmap


@pytest.fixture
def cli_args(tmp_path):
    """Flags that keep CLI runs deterministic and their logs out of the repository."""
    return ["--no-meta", "--log-dir", str(tmp_path / "logs"), "--log-level", "WARNING"]

