"""Tests for shuffles and order-preserving maps"""

from math import comb

import pytest

from src.core.shuffle import (OrdinalEpi, Shuffle, codegeneracy, codegeneracy_composite, coface, enumerate_shuffles,
                              factor_order_map, shift_filter, shifted, shuffle_count_table, shuffle_sign, theta,
                              verify_theta_identities)
from src.utils.exceptions import MalformedShuffle, NegativeIndex


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)])
def test_shuffle_count(p, q):
    assert len(enumerate_shuffles(p, q)) == comb(p + q, p)


def test_shuffle_sign_is_inversion_parity():
    assert shuffle_sign(Shuffle(1, 1, (0,), (1,))) == 1
    assert shuffle_sign(Shuffle(1, 1, (1,), (0,))) == -1
    assert Shuffle(2, 1, (1, 2), (0,)).sign == 1
    assert sum(s.sign for s in enumerate_shuffles(1, 1)) == 0


def test_malformed_shuffles():
    with pytest.raises(MalformedShuffle):
        Shuffle(1, 1, (0,), (0,))
    with pytest.raises(MalformedShuffle):
        Shuffle(2, 0, (1, 0), ())
    with pytest.raises(MalformedShuffle):
        Shuffle(1, 1, (0,), (2,))


def test_ordinal_epi_composition_and_degeneracies():
    s = codegeneracy_composite((0, 2), 3)
    assert s.values == (0, 0, 1, 1)
    assert s.degeneracy_set() == (0, 2)
    assert codegeneracy(0, 1).compose(codegeneracy(1, 2)).values == (0, 0, 0, 1)
    identity = OrdinalEpi.identity(1)
    assert identity.compose(s).values == s.values
    with pytest.raises(MalformedShuffle):
        OrdinalEpi(2, 1, (0, 2, 1))


def test_coface_skips_index():
    assert coface(1, 3) == (0, 2, 3)
    assert coface(0, 2) == (1, 2)


def test_epi_mono_factorization():
    epi, image = factor_order_map((1, 1, 3, 4))
    assert image == (1, 3, 4)
    assert epi.values == (0, 0, 1, 2)


def test_shift_filter():
    assert shift_filter((0, 2, 5), 1, -1) == (1, 4)
    assert shifted((1, 2), 3) == (4, 5)
    with pytest.raises(NegativeIndex):
        shifted((0, 1), -1)


def test_theta_rejects_wrong_types():
    with pytest.raises(MalformedShuffle):
        theta(1, 1, 1, enumerate_shuffles(1, 1)[0], enumerate_shuffles(1, 1)[0])


def test_theta_identities_small():
    result = verify_theta_identities(4)
    assert result["passed"], result["violations"][:3]
    assert result["cases"] > 0


@pytest.mark.slow
def test_theta_identities_up_to_six():
    assert verify_theta_identities(6)["passed"]


def test_shuffle_count_table():
    assert all(ok for _, _, ok in shuffle_count_table(6))
