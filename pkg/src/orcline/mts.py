"""Labelled and modal transition systems.

An ``Lts`` is states + labelled transitions + one initial state.  An
``Mts`` refines this with two transition relations: ``must`` (required
behaviour) and ``may`` (allowed behaviour), with must ⊆ may by
construction — the constructor closes ``may`` over ``must``, so a
violating instance cannot be built.

An LTS ``p`` is a *product* of an MTS ``f`` when there is a relation R
over product × family states containing the initial pair such that for
every (s, t) in R:

* (i)  every must-transition of t is matched by a transition of s with
       targets again related, and
* (ii) every transition of s is allowed by a may-transition of t with
       targets again related.

``is_product`` decides this by deleting failing pairs from the full
relation until fixpoint; ``derive_products`` enumerates all products
obtainable by switching optional (may-only) transitions on or off.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BoundExceeded


class ActionMismatch(Exception):
    """The candidate product uses actions the family does not know."""


def _freeze(obj, attr, value):
    object.__setattr__(obj, attr, value)


def _check_refs(states, init, trans, what):
    if init not in states:
        raise ValueError(f"initial state {init!r} not among states")
    for (src, action, dst) in trans:
        if src not in states or dst not in states:
            raise ValueError(
                f"{what} transition ({src!r}, {action!r}, {dst!r}) "
                f"mentions an undeclared state")


@dataclass(frozen=True)
class Lts:
    states: frozenset
    actions: frozenset
    init: str
    trans: frozenset        # (src, action, dst) triples

    def __post_init__(self):
        _freeze(self, "states", frozenset(self.states))
        _freeze(self, "trans", frozenset(self.trans))
        _check_refs(self.states, self.init, self.trans, "lts")
        labels = frozenset(a for (_, a, _) in self.trans)
        _freeze(self, "actions", frozenset(self.actions) | labels)


@dataclass(frozen=True)
class Mts:
    states: frozenset
    actions: frozenset
    init: str
    must: frozenset
    may: frozenset

    def __post_init__(self):
        _freeze(self, "states", frozenset(self.states))
        _freeze(self, "must", frozenset(self.must))
        # Closure: everything required is also allowed.
        _freeze(self, "may", frozenset(self.may) | self.must)
        _check_refs(self.states, self.init, self.may, "mts")
        labels = frozenset(a for (_, a, _) in self.may)
        _freeze(self, "actions", frozenset(self.actions) | labels)


def underlying_lts(m: Mts) -> Lts:
    """The LTS of everything the MTS allows (its may-relation)."""
    return Lts(m.states, m.actions, m.init, m.may)


def modality(m: Mts, src, action, dst) -> str:
    """Three-valued transition query: "must", "may-only" or "absent"."""
    triple = (src, action, dst)
    if triple in m.must:
        return "must"
    if triple in m.may:
        return "may-only"
    return "absent"


@dataclass(frozen=True)
class ClauseFailure:
    """Why a state pair was deleted during the product check."""

    clause: str              # "must-unmatched" | "may-unmatched"
    product_state: str
    family_state: str
    action: str
    target: str              # transition target lacking a counterpart

    def __str__(self):
        if self.clause == "must-unmatched":
            return (f"required transition {self.family_state} --{self.action}"
                    f"--> {self.target} of the family has no counterpart "
                    f"from product state {self.product_state}")
        return (f"product transition {self.product_state} --{self.action}"
                f"--> {self.target} is not allowed by the family "
                f"at state {self.family_state}")


@dataclass(frozen=True)
class ProductCheck:
    holds: bool
    witness: "frozenset | None"   # (product_state, family_state) pairs
    failure: "ClauseFailure | None"
    rounds: int                   # deletion rounds until fixpoint


def _outgoing(trans):
    out = {}
    for (src, action, dst) in trans:
        out.setdefault(src, []).append((action, dst))
    return out


def is_product(product: Lts, family: Mts) -> ProductCheck:
    """Decide the product relation, with a witness or a root cause.

    Raises ActionMismatch when the product uses an action the family
    has never heard of (that is a modelling error, not a refusal).
    """
    extra = product.actions - family.actions
    if extra:
        raise ActionMismatch(
            f"product actions not in the family alphabet: {sorted(extra)}")

    p_out = _outgoing(product.trans)
    f_must = _outgoing(family.must)
    f_may = _outgoing(family.may)

    relation = set(itertools.product(sorted(product.states),
                                     sorted(family.states)))
    first_failure = None
    rounds = 0
    while True:
        rounds += 1
        doomed = []
        for (p, q) in sorted(relation):
            fail = None
            for (action, q2) in sorted(f_must.get(q, [])):
                if not any((action2 == action and (p2, q2) in relation)
                           for (action2, p2) in p_out.get(p, [])):
                    fail = ClauseFailure("must-unmatched", p, q, action, q2)
                    break
            if fail is None:
                for (action, p2) in sorted(p_out.get(p, [])):
                    if not any((action2 == action and (p2, q2) in relation)
                               for (action2, q2) in f_may.get(q, [])):
                        fail = ClauseFailure("may-unmatched", p, q, action, p2)
                        break
            if fail is not None:
                doomed.append((p, q))
                if first_failure is None:
                    first_failure = fail
        if not doomed:
            break
        relation.difference_update(doomed)

    initial = (product.init, family.init)
    if initial not in relation:
        return ProductCheck(False, None, first_failure, rounds)

    # Restrict the fixpoint to pairs reachable through synchronised
    # moves; the result is still closed under both clauses.
    seen = {initial}
    frontier = [initial]
    while frontier:
        (p, q) = frontier.pop()
        for (action, p2) in p_out.get(p, []):
            for (action2, q2) in f_may.get(q, []):
                if action2 == action and (p2, q2) in relation \
                        and (p2, q2) not in seen:
                    seen.add((p2, q2))
                    frontier.append((p2, q2))
    return ProductCheck(True, frozenset(seen), None, rounds)


def _canonical_reachable(init, trans) -> Lts:
    """Restrict to the part reachable from ``init`` and rename states
    to s0, s1, ... in breadth-first visit order (neighbours taken in
    sorted label/target order, so the renaming is deterministic)."""
    out = _outgoing(trans)
    rename = {init: "s0"}
    queue = [init]
    while queue:
        src = queue.pop(0)
        for (_, dst) in sorted(out.get(src, [])):
            if dst not in rename:
                rename[dst] = f"s{len(rename)}"
                queue.append(dst)
    kept = frozenset((rename[src], action, rename[dst])
                     for (src, action, dst) in trans if src in rename)
    actions = frozenset(a for (_, a, _) in kept)
    return Lts(frozenset(rename.values()), actions, "s0", kept)


def derive_products(family: Mts, max_optional: int = 20) -> list:
    """All products obtained by toggling each may-only transition.

    Each candidate keeps every must-transition plus one subset of the
    may-only ones, restricted to its reachable part and renamed to
    canonical form; duplicates collapse.  Every result is a product of
    ``family`` (the renaming relation restricted to reachable states
    witnesses it).
    """
    optional = sorted(family.may - family.must)
    if len(optional) > max_optional:
        raise BoundExceeded(
            f"{len(optional)} optional transitions, derivation bound "
            f"is {max_optional}")

    seen = {}
    for mask in range(1 << len(optional)):
        chosen = frozenset(t for i, t in enumerate(optional)
                           if mask & (1 << i))
        product = _canonical_reachable(family.init, family.must | chosen)
        key = (product.states, product.trans)
        if key not in seen:
            seen[key] = product

    def sort_key(lts):
        return (len(lts.states), len(lts.trans), sorted(lts.trans))

    return sorted(seen.values(), key=sort_key)


def _gvquote(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(system, name: str = "lts") -> str:
    """GraphViz text for an Lts or Mts.

    Must-transitions (and all LTS transitions) are solid; may-only
    transitions are dashed.  An unlabeled point marks the initial
    state.
    """
    if isinstance(system, Mts):
        solid, dashed = system.must, system.may - system.must
    else:
        solid, dashed = system.trans, frozenset()
    lines = [f"digraph {name} {{", "  rankdir=LR;",
             "  __init [shape=point, label=\"\"];"]
    for s in sorted(system.states):
        lines.append(f"  {_gvquote(s)} [shape=circle];")
    lines.append(f"  __init -> {_gvquote(system.init)};")
    for (src, action, dst) in sorted(solid):
        lines.append(f"  {_gvquote(src)} -> {_gvquote(dst)} "
                     f"[label={_gvquote(action)}];")
    for (src, action, dst) in sorted(dashed):
        lines.append(f"  {_gvquote(src)} -> {_gvquote(dst)} "
                     f"[label={_gvquote(action)}, style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
