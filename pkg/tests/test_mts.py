import random

import pytest

from orcline import (
    ActionMismatch, Lts, Mts, derive_products, export_dot, is_product,
    modality, parse_lts, parse_mts, underlying_lts,
)
from orcline.corpus import fixture_text

from generators import random_lts, random_mts


def chain_family() -> Mts:
    return parse_mts(fixture_text("drh_family.mts"))


def chain_product() -> Lts:
    return parse_lts(fixture_text("drh_product.lts"))


# ---------------------------------------------------------------------------
# construction invariants

def test_must_transitions_are_always_possible():
    m = Mts(frozenset({"a", "b"}), frozenset(), "a",
            frozenset({("a", "go", "b")}), frozenset())
    assert ("a", "go", "b") in m.may


def test_actions_include_every_used_label():
    m = Mts(frozenset({"a"}), frozenset(), "a", frozenset(),
            frozenset({("a", "loop", "a")}))
    assert "loop" in m.actions


def test_unknown_states_are_rejected():
    with pytest.raises(ValueError):
        Lts(frozenset({"a"}), frozenset(), "a",
            frozenset({("a", "go", "ghost")}))
    with pytest.raises(ValueError):
        Mts(frozenset({"a"}), frozenset(), "ghost", frozenset(),
            frozenset())


def test_modality_partitions_triples():
    rng = random.Random(51)
    for _ in range(100):
        m = random_mts(rng)
        for s in sorted(m.states):
            for a in sorted(m.actions):
                for d in sorted(m.states):
                    kind = modality(m, s, a, d)
                    triple = (s, a, d)
                    if kind == "must":
                        assert triple in m.must and triple in m.may
                    elif kind == "may-only":
                        assert triple in m.may and triple not in m.must
                    else:
                        assert kind == "absent"
                        assert triple not in m.may


def test_underlying_lts_is_the_may_relation():
    m = chain_family()
    l = underlying_lts(m)
    assert l.trans == m.may and l.init == m.init


# ---------------------------------------------------------------------------
# the product relation

def test_chain_product_is_a_product_with_identity_witness():
    check = is_product(chain_product(), chain_family())
    assert check.holds
    assert check.witness == {(f"s{i}", f"s{i}") for i in range(5)}


def test_optional_transition_may_be_taken():
    full = Lts(chain_product().states, frozenset(), "s0",
               chain_product().trans | {("s1", "Load_shift", "s2")})
    assert is_product(full, chain_family()).holds


def test_missing_must_transition_fails_first_clause():
    broken = Lts(chain_product().states, frozenset(), "s0",
                 frozenset(t for t in chain_product().trans
                           if t[1] != "Sell"))
    check = is_product(broken, chain_family())
    assert not check.holds
    assert check.failure.clause == "must-unmatched"
    assert "required transition" in str(check.failure)


def test_transition_outside_may_fails_second_clause():
    rogue = Lts(chain_product().states, frozenset(), "s0",
                chain_product().trans | {("s0", "Sell", "s1")})
    check = is_product(rogue, chain_family())
    assert not check.holds
    assert check.failure.clause == "may-unmatched"


def test_foreign_action_is_a_modelling_error():
    alien = Lts(frozenset({"s0", "s1"}), frozenset(), "s0",
                frozenset({("s0", "Dance", "s1")}))
    with pytest.raises(ActionMismatch):
        is_product(alien, chain_family())


def test_witness_pairs_really_satisfy_both_clauses():
    rng = random.Random(52)
    checked = 0
    for _ in range(300):
        family = random_mts(rng)
        product = random_lts(rng)
        if not product.actions <= family.actions:
            continue
        check = is_product(product, family)
        if not check.holds:
            continue
        checked += 1
        relation = check.witness
        assert (product.init, family.init) in relation
        for (p, q) in relation:
            for (src, a, dst) in family.must:
                if src != q:
                    continue
                assert any(ps == p and a == pa and (pd, dst) in relation
                           for (ps, pa, pd) in product.trans), \
                    "unmatched family must-transition"
            for (src, a, dst) in product.trans:
                if src != p:
                    continue
                assert any(qs == q and a == qa and (dst, qd) in relation
                           for (qs, qa, qd) in family.may), \
                    "product transition not allowed by may"
    assert checked > 10


# ---------------------------------------------------------------------------
# product derivation

def test_chain_family_has_two_products():
    products = derive_products(chain_family())
    assert len(products) == 2
    sizes = sorted(len(p.trans) for p in products)
    assert sizes == [4, 5]
    for p in products:
        assert is_product(p, chain_family()).holds


def test_derived_products_are_canonical_and_deduplicated():
    # Two may-only self-alternatives that yield identical shapes after
    # renaming collapse to one canonical product.
    family = Mts(frozenset({"q0", "q1", "q2"}), frozenset(), "q0",
                 frozenset(),
                 frozenset({("q0", "a", "q1"), ("q0", "a", "q2")}))
    products = derive_products(family)
    shapes = {(tuple(sorted(p.states)), tuple(sorted(p.trans)))
              for p in products}
    assert len(shapes) == len(products)
    for p in products:
        assert p.init == "s0"
        assert all(s.startswith("s") for s in p.states)


def test_every_derived_product_passes_the_check():
    rng = random.Random(53)
    for _ in range(60):
        family = random_mts(rng)
        for p in derive_products(family):
            assert is_product(p, family).holds


def test_unreachable_parts_are_dropped():
    family = Mts(frozenset({"q0", "q1", "q2"}), frozenset(), "q0",
                 frozenset({("q1", "a", "q2")}),
                 frozenset({("q0", "b", "q1")}))
    products = derive_products(family)
    # Without the may-transition, q1/q2 are unreachable and vanish.
    assert any(len(p.states) == 1 and not p.trans for p in products)
    assert any(len(p.states) == 3 for p in products)


def test_derivation_bound():
    states = frozenset({f"q{i}" for i in range(8)})
    may = frozenset({(f"q{i}", "a", f"q{j}")
                     for i in range(8) for j in range(8)})
    family = Mts(states, frozenset(), "q0", frozenset(), may)
    from orcline import BoundExceeded
    with pytest.raises(BoundExceeded):
        derive_products(family, max_optional=10)


# ---------------------------------------------------------------------------
# export

def test_dot_export_styles_modalities():
    dot = export_dot(chain_family(), name="family")
    assert "digraph family" in dot
    assert 'style=dashed' in dot          # the may-only Load_shift
    assert dot.count("style=dashed") == 1
    assert "__init" in dot
    plain = export_dot(chain_product())
    assert "style=dashed" not in plain
