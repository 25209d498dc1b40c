"""Compile feature-model relations into Orc combinator expressions.

The correspondence, applied bottom-up over the feature tree:

* sibling mandatory features  →  independent parallel ``A | B``
* an optional child           →  asymmetric parallel ``parent <x< child``
                                 (the binder is never used, so the
                                 parent may ignore the child's value)
* ``requires A B``            →  sequential ``A >x> B`` (B's site is
                                 only reached after A returns)
* ``excludes A B``            →  otherwise ``A ; B`` (B runs only when
                                 A halts silently; A is preferred)
* a binary alternative group  →  a race on a shared flag: two trigger
                                 sites publish true/false, the first
                                 response decides which member runs.

The calculus has no boolean negation, so the flag's complement is
computed with combinators: ``(if(flag) >> let(false) ; let(true))``
publishes the negated flag, because a true flag lets the inner
``let(false)`` publish while a false flag leaves ``if(flag)`` silent
forever and the otherwise branch publishes ``true``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .feature_model import Excludes, FeatureModel, Requires
from .orc_ast import (
    Asymmetric, Expr, Otherwise, Parallel, Program, Sequential, SiteCall,
    SiteSpec, Var,
)


class UnsupportedGroupSize(Exception):
    """Alternative groups other than binary ones have no encoding."""


class MissingTrigger(Exception):
    """An alternative group has no trigger sites in the plan."""


class PlanMismatch(Exception):
    """The plan does not fit the model, or a constraint cannot be
    placed in the composition."""


@dataclass
class EncodingPlan:
    feature_to_site: dict            # feature name -> site name
    trigger_sites: dict = field(default_factory=dict)  # gid -> (a, b)
    notes: list = field(default_factory=list)


def default_plan(model: FeatureModel) -> EncodingPlan:
    """Features keep their own names as sites; each alternative group
    gets two fresh responsive trigger stubs."""
    triggers = {g.gid: (f"choose_{g.members[0]}", f"choose_{g.members[1]}")
                for g in model.groups if len(g.members) == 2}
    return EncodingPlan({name: name for name in model.features}, triggers)


def plan_from_json(text: str) -> EncodingPlan:
    data = json.loads(text)
    triggers = {int(gid): tuple(pair)
                for gid, pair in data.get("trigger_sites", {}).items()}
    return EncodingPlan(dict(data.get("feature_to_site", {})), triggers)


def plan_to_json(plan: EncodingPlan) -> str:
    return json.dumps(
        {"feature_to_site": plan.feature_to_site,
         "trigger_sites": {str(gid): list(pair)
                           for gid, pair in plan.trigger_sites.items()}},
        indent=2, sort_keys=True) + "\n"


def encode_alternative(m: Expr, n: Expr, a: Expr, b: Expr,
                       flag_var: str = "flag",
                       neg_var: str = "nflag") -> Expr:
    """The mutual-exclusion pattern: run m or n, never both.

    One race ``a >> let(true) | b >> let(false)`` decides the flag, so
    the two guards can never disagree; m's guard is ``if(flag)`` and
    n's guard applies ``if`` to the combinator-computed negation.
    """
    guard_m = Sequential(SiteCall("if", (Var(flag_var),)), None, m)
    negate = Otherwise(
        Sequential(SiteCall("if", (Var(flag_var),)), None,
                   SiteCall("let", (False,))),
        SiteCall("let", (True,)))
    guard_n = Sequential(negate, neg_var,
                         Sequential(SiteCall("if", (Var(neg_var),)), None,
                                    n))
    race = Parallel(
        Sequential(a, None, SiteCall("let", (True,))),
        Sequential(b, None, SiteCall("let", (False,))))
    return Asymmetric(Parallel(guard_m, guard_n), flag_var, race)


def _check_plan(model: FeatureModel, plan: EncodingPlan):
    for g in model.groups:
        if len(g.members) != 2:
            raise UnsupportedGroupSize(
                f"alternative group {g.members} has {len(g.members)} "
                f"members; only binary groups have an encoding")
    missing = [name for name in model.features
               if name not in plan.feature_to_site]
    if missing:
        raise PlanMismatch(f"plan gives no site for features: "
                           f"{sorted(missing)}")
    for g in model.groups:
        pair = plan.trigger_sites.get(g.gid)
        if not pair or len(pair) != 2:
            raise MissingTrigger(
                f"alternative group {g.members} needs two trigger sites")


class _Encoder:
    def __init__(self, model: FeatureModel, plan: EncodingPlan):
        self.model = model
        self.plan = plan
        self.counter = 0
        self.applied: set = set()

    def fresh(self) -> str:
        name = f"x{self.counter}"
        self.counter += 1
        return name

    def site(self, feature: str) -> Expr:
        return SiteCall(self.plan.feature_to_site[feature])

    def group_expr(self, group) -> Expr:
        (m, n) = group.members
        (ta, tb) = self.plan.trigger_sites[group.gid]
        self.plan.notes.append(
            f"alternative {{{m}, {n}}}: flag race decided by "
            f"{ta}/{tb}, guards composed with if")
        return encode_alternative(
            self.subtree(m)[0], self.subtree(n)[0],
            SiteCall(ta), SiteCall(tb),
            flag_var=f"flag{group.gid}", neg_var=f"nflag{group.gid}")

    def fuse_constraints(self, units: list) -> list:
        """Apply requires/excludes between units once both endpoints
        have appeared — i.e. at their least common ancestor."""
        for c in self.model.constraints:
            if c in self.applied:
                continue
            ia = ib = None
            for i, (covered, _) in enumerate(units):
                if c.a in covered:
                    ia = i
                if c.b in covered:
                    ib = i
            if ia is None or ib is None:
                continue
            self.applied.add(c)
            if ia == ib:
                raise PlanMismatch(
                    f"constraint {c} relates features that are already "
                    f"composed together; it has no combinator encoding")
            cov_a, expr_a = units[ia]
            cov_b, expr_b = units[ib]
            if isinstance(c, Requires):
                fused = Sequential(expr_a, self.fresh(), expr_b)
                self.plan.notes.append(
                    f"requires {c.a} {c.b}: sequential composition, "
                    f"{c.b} starts after {c.a} returns")
            else:
                fused = Otherwise(expr_a, expr_b)
                self.plan.notes.append(
                    f"excludes {c.a} {c.b}: otherwise composition, "
                    f"{c.b} only if {c.a} stays silent")
            units[min(ia, ib)] = (cov_a | cov_b, fused)
            del units[max(ia, ib)]
        return units

    def subtree(self, name: str):
        """(expr, covered feature names) for the subtree at ``name``."""
        model = self.model
        units = [(set([name]), self.site(name))]
        mandatory = [c for c in model.plain_children(name)
                     if model.features[c].kind == "mandatory"]
        optional = [c for c in model.plain_children(name)
                    if model.features[c].kind == "optional"]
        for child in mandatory:
            expr, covered = self.subtree(child)
            units.append((covered, expr))
            self.plan.notes.append(
                f"mandatory {child} under {name}: parallel composition")
        for g in model.groups_of(name):
            covered = set()
            for m in g.members:
                covered |= self.covered(m)
            units.append((covered, self.group_expr(g)))
        units = self.fuse_constraints(units)
        expr = units[0][1]
        for (_, right) in units[1:]:
            expr = Parallel(expr, right)
        covered_all = set().union(*(c for (c, _) in units))
        for child in optional:
            child_expr, child_cov = self.subtree(child)
            expr = Asymmetric(expr, self.fresh(), child_expr)
            covered_all |= child_cov
            self.plan.notes.append(
                f"optional {child} under {name}: asymmetric composition, "
                f"published value ignored")
        return expr, covered_all

    def covered(self, name: str) -> set:
        out = {name}
        for child in self.model.features[name].children:
            out |= self.covered(child)
        return out

    def root_expr(self) -> Expr:
        model = self.model
        root = model.root
        units = []
        for child in model.plain_children(root):
            if model.features[child].kind == "mandatory":
                expr, covered = self.subtree(child)
                units.append((covered, expr))
                self.plan.notes.append(
                    f"mandatory {child} under {root}: parallel composition")
        for g in model.groups_of(root):
            covered = set()
            for m in g.members:
                covered |= self.covered(m)
            units.append((covered, self.group_expr(g)))
        if not units:
            # Nothing but the family itself: its site anchors the goal.
            units = [(set([root]), self.site(root))]
        units = self.fuse_constraints(units)
        expr = units[0][1]
        for (_, right) in units[1:]:
            expr = Parallel(expr, right)
        for child in model.plain_children(root):
            if model.features[child].kind == "optional":
                child_expr, _ = self.subtree(child)
                expr = Asymmetric(expr, self.fresh(), child_expr)
                self.plan.notes.append(
                    f"optional {child} under {root}: asymmetric "
                    f"composition, published value ignored")
        return expr


def encode(model: FeatureModel, plan: EncodingPlan = None) -> Program:
    """Compile the whole feature tree into a goal expression.

    Raises UnsupportedGroupSize, MissingTrigger or PlanMismatch when
    the model has no encoding under the given plan; ``plan.notes``
    records one line per rule applied.
    """
    if plan is None:
        plan = default_plan(model)
    _check_plan(model, plan)
    encoder = _Encoder(model, plan)
    goal = encoder.root_expr()
    unapplied = [c for c in model.constraints if c not in encoder.applied]
    if unapplied:
        raise PlanMismatch(
            f"constraints {unapplied} touch features that never become "
            f"units of the composition (optional or group subtrees)")
    return Program(goal, {}, {})


def _string_sites(*names) -> dict:
    """Stub sites that respond with their own name, so tuples read
    nicely in traces."""
    return {name: SiteSpec((name,), True, 0) for name in names}


def demand_response_program() -> Program:
    """Aggregate a load-shifting price (real_time | day_ahead) and a
    trade decision (sell | buy), publishing both as one tuple.

    The binders deliberately share names with the tuple arguments, so
    the first response on each side completes the pair."""
    inner = Asymmetric(
        SiteCall("let", (Var("Load_shift"), Var("Agreement"))),
        "Load_shift",
        Parallel(SiteCall("real_time"), SiteCall("day_ahead")))
    goal = Asymmetric(inner, "Agreement",
                      Parallel(SiteCall("sell"), SiteCall("buy")))
    return Program(goal, {}, _string_sites("real_time", "day_ahead",
                                           "sell", "buy"))


def demand_response_choice_program() -> Program:
    """The committed variant: whichever side answers first (pricing or
    trading) is the only one whose follow-up computation runs."""
    goal = encode_alternative(
        SiteCall("Load_shift"), SiteCall("Agreement"),
        Parallel(SiteCall("real_time"), SiteCall("day_ahead")),
        Parallel(SiteCall("sell"), SiteCall("buy")),
        flag_var="f", neg_var="nf")
    return Program(goal, {}, _string_sites(
        "Load_shift", "Agreement", "real_time", "day_ahead", "sell",
        "buy"))
