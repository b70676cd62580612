from functools import lru_cache

import pytest

from powergcd.arith import divisors
from powergcd.explorer import EnumConfig, enumerate_factor_closed, enumerate_gcd_closed
from powergcd.structure import GcdSet, _condition_g, max_gtd

# Divisor lattices that are rich in elements with three greatest-type
# divisors; the small enumerated corpora never reach them.
LATTICE_MODULI = (30, 60, 120, 210, 300, 900)


@lru_cache(maxsize=None)
def gcd_closed_corpus(max_element=12, max_size=5):
    return tuple(enumerate_gcd_closed(EnumConfig(max_element, max_size)))


@lru_cache(maxsize=None)
def factor_closed_corpus(max_element=24):
    return tuple(enumerate_factor_closed(EnumConfig(max_element)))


@lru_cache(maxsize=None)
def theorem_corpus(max_element=24, max_size=6):
    """Enumerated sets meeting the hypotheses: condition G and max |G(x)| <= 3."""
    return tuple(S for S in gcd_closed_corpus(max_element, max_size)
                 if _condition_g(S).holds and max_gtd(S) <= 3)


def lattice(m):
    return GcdSet(divisors(m))


@pytest.fixture
def d30():
    return lattice(30)
