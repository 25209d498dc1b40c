import random

import pytest

from orcline import BoundExceeded, ModelBuilder, UnknownFeature
from orcline.feature_model import (
    enumerate_products, is_valid, product_count, validate,
)

from generators import brute_force_products, random_feature_model


def smartgrid_like():
    b = ModelBuilder("Grid")
    b.mandatory("Grid", "Renewables")
    b.mandatory("Renewables", "Storage")
    b.mandatory("Grid", "Response")
    b.optional("Grid", "Choice")
    b.optional("Grid", "Forecast")
    return b.build()


# ---------------------------------------------------------------------------
# builder

def test_builder_rejects_duplicates_and_unknown_parents():
    b = ModelBuilder("R")
    b.mandatory("R", "A")
    with pytest.raises(ValueError):
        b.mandatory("R", "A")
    with pytest.raises(UnknownFeature):
        b.optional("Ghost", "B")


def test_builder_rejects_small_groups_and_bad_constraints():
    b = ModelBuilder("R")
    with pytest.raises(ValueError):
        b.alternative("R", "OnlyOne")
    b.alternative("R", "X", "Y")
    b.requires("X", "Ghost")
    with pytest.raises(UnknownFeature):
        b.build()


# ---------------------------------------------------------------------------
# validation rules

def test_root_must_be_selected():
    m = smartgrid_like()
    violations = validate(m, {"Renewables"})
    assert any(v.rule == "root" for v in violations)


def test_parent_of_selected_feature_must_be_selected():
    m = smartgrid_like()
    violations = validate(m, {"Grid", "Storage"})
    assert any(v.rule == "orphan" for v in violations)


def test_mandatory_children_of_selected_parents_are_required():
    m = smartgrid_like()
    violations = validate(
        m, {"Grid", "Renewables", "Response"})  # Storage missing
    assert any(v.rule == "mandatory" for v in violations)


def test_optional_features_may_be_left_out():
    m = smartgrid_like()
    assert is_valid(m, {"Grid", "Renewables", "Storage", "Response"})
    assert is_valid(m, {"Grid", "Renewables", "Storage", "Response",
                        "Choice"})


def test_alternative_needs_exactly_one_member():
    b = ModelBuilder("R")
    b.alternative("R", "X", "Y")
    m = b.build()
    assert any(v.rule == "alternative" for v in validate(m, {"R"}))
    assert is_valid(m, {"R", "X"})
    assert is_valid(m, {"R", "Y"})
    assert any(v.rule == "alternative"
               for v in validate(m, {"R", "X", "Y"}))


def test_requires_and_excludes():
    b = ModelBuilder("R")
    b.optional("R", "A")
    b.optional("R", "B")
    b.requires("A", "B")
    m = b.build()
    assert any(v.rule == "requires" for v in validate(m, {"R", "A"}))
    assert is_valid(m, {"R", "A", "B"})
    assert is_valid(m, {"R", "B"})

    b2 = ModelBuilder("R")
    b2.optional("R", "A")
    b2.optional("R", "B")
    b2.excludes("A", "B")
    m2 = b2.build()
    assert any(v.rule == "excludes" for v in validate(m2, {"R", "A", "B"}))
    assert is_valid(m2, {"R", "A"})


def test_unknown_selection_name_raises():
    with pytest.raises(UnknownFeature):
        validate(smartgrid_like(), {"Grid", "Nonsense"})


# ---------------------------------------------------------------------------
# enumeration

def test_enumerates_optional_combinations():
    m = smartgrid_like()
    products = enumerate_products(m)
    assert len(products) == 4
    base = frozenset({"Grid", "Renewables", "Storage", "Response"})
    assert base in products
    assert base | {"Choice", "Forecast"} in products


def test_alternative_with_requires_between_members_kills_one_branch():
    b = ModelBuilder("F")
    b.alternative("F", "X", "Y")
    b.requires("X", "Y")
    m = b.build()
    products = enumerate_products(m)
    assert products == {frozenset({"F", "Y"})}


def test_product_count_matches_enumeration():
    rng = random.Random(41)
    for _ in range(80):
        m = random_feature_model(rng, max_features=10)
        assert product_count(m) == len(enumerate_products(m))


def test_count_uses_multiplication_without_constraints():
    b = ModelBuilder("R")
    for i in range(30):
        b.optional("R", f"O{i}")
    m = b.build()
    # far beyond the enumeration bound, but countable in closed form
    assert product_count(m, max_features=40) == 2 ** 30


def test_enumeration_bound_is_enforced():
    b = ModelBuilder("R")
    for i in range(30):
        b.optional("R", f"O{i}")
    with pytest.raises(BoundExceeded):
        enumerate_products(b.build())


def test_every_enumerated_product_is_valid():
    rng = random.Random(42)
    for _ in range(60):
        m = random_feature_model(rng, max_features=12)
        for product in enumerate_products(m):
            assert is_valid(m, product)


def test_enumeration_matches_brute_force_oracle():
    rng = random.Random(43)
    for _ in range(60):
        m = random_feature_model(rng, max_features=12)
        assert enumerate_products(m) == brute_force_products(m)
