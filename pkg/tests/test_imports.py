"""Import smoke test for every package module"""

import importlib

import pytest

MODULES = [
    "src.main",
    "src.core.exactlin",
    "src.core.shuffle",
    "src.core.simplicial",
    "src.core.coalg",
    "src.core.liealg",
    "src.core.bar",
    "src.core.dual",
    "src.core.diffcore",
    "src.core.documents",
    "src.core.catalog",
    "src.core.config",
    "src.core.verify",
    "src.ui.cli",
    "src.utils.exceptions",
    "src.utils.file_utils",
    "src.utils.logger",
    "src.utils.schemas",
]


@pytest.mark.parametrize("name", MODULES)
def test_import(name):
    assert importlib.import_module(name) is not None


def test_version():
    import src
    assert src.__version__ == "1.0.0"


def test_sympy_supports_sparse_rref_export():
    from sympy.polys.domains import QQ
    from sympy.polys.matrices import DomainMatrix

    reduced, pivots = DomainMatrix({0: {0: QQ(2), 1: QQ(4)}}, (1, 2), QQ).rref()
    assert pivots == (0,)
    assert reduced.to_dok() == {(0, 0): QQ(1), (0, 1): QQ(2)}
