import pytest

from classes.Catalog import chain, cyclic_group, null_semigroup, rectangular_band, semilattice
from classes.Errors import ParseError
from classes.OmegaTerms import (
    APERIODIC, UNION_OF_GROUPS, XYZ_EQ_XZ, OmegaFactor, parse_identity, parse_term, satisfies_identity,
)


def test_parse_powers():
    term = parse_term("x^3 y^w z^{w+1} x^(w-2)")
    assert term.factors == (
        OmegaFactor("x", False, 3),
        OmegaFactor("y", True, 0),
        OmegaFactor("z", True, 1),
        OmegaFactor("x", True, -2),
    )
    assert term.variables == ["x", "y", "z"]


def test_parse_identity_round_trip_text():
    identity = parse_identity("xyx = x")
    assert str(identity) == "x y x = x"
    assert identity.variables == ["x", "y"]


@pytest.mark.parametrize("text", ["", "x^", "x=y=z", "X=x", "x^0=x"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_identity(text)


def test_rectangular_band_identities():
    S = rectangular_band(2, 3)
    assert satisfies_identity(S, "xyx=x").holds
    assert satisfies_identity(S, XYZ_EQ_XZ).holds
    assert satisfies_identity(S, "x^2=x")


def test_commutativity():
    assert satisfies_identity(semilattice(), "xy=yx").holds
    check = satisfies_identity(rectangular_band(1, 2), "xy=yx")
    assert not check.holds
    S = rectangular_band(1, 2)
    x, y = check.witness["x"], check.witness["y"]
    assert S.mul(x, y) != S.mul(y, x)


def test_witness_is_first_assignment():
    G = cyclic_group(2)
    check = satisfies_identity(G, "x^2=x")
    assert check.witness == {"x": 1}
    assert check.describe(G) == {"x": "g"}


def test_lhs_rhs_form():
    assert satisfies_identity(chain(3), "x y", "y x").holds


def test_standard_identities():
    assert satisfies_identity(chain(3), APERIODIC).holds
    assert not satisfies_identity(cyclic_group(3), APERIODIC).holds
    assert satisfies_identity(cyclic_group(3), UNION_OF_GROUPS).holds
    assert not satisfies_identity(null_semigroup(), UNION_OF_GROUPS).holds
