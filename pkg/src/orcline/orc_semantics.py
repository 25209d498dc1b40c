"""Small-step semantics for Orc: single runs and exhaustive exploration.

Execution proceeds over an ``ExecState`` (expression + pending site
calls + virtual clock).  Four observable event kinds mirror the
calculus — ``Publish`` (!v), ``Internal`` (tau), ``Call`` (M_k(v)) and
``Return`` (k?v) — plus ``Tick``, the virtual-time extension that
gives Rtimer meaning: the clock advances only when nothing else can
move, and then exactly to the earliest due response (maximal
progress).

The stepping rules:

* a SiteCall whose arguments are all values registers a fresh-handle
  pending entry and becomes ``Pending(k)``; calls with an unbound
  variable argument cannot move;
* a due responsive pending entry returns, leaving ``Emit(v)`` which
  then offers ``Publish(v)``;
* Parallel interleaves both sides and lets publications through;
* ``A >x> B`` hides a publication of A as Internal and spawns
  ``[v/x]B`` in parallel;
* ``A <x< B`` hides the first publication of B, terminates B and
  substitutes into A;
* ``A ; B`` fires Internal to B once A is halted, provided A never
  published (a publication of A permanently discards B);
* a DefCall expands its body (call by value), bounded per definition
  name by ``Bounds.max_depth`` — a blocked expansion is reported as
  truncation, never silently dropped.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace

from .errors import BoundExceeded
from .mts import Lts
from .orc_ast import (
    SIGNAL, STOP, Asymmetric, DefCall, Emit, Expr, Otherwise, Parallel,
    Pending, Program, Sequential, Signal, SiteCall, SiteSpec, Stop, Value,
    Var, render_value, substitute, value_sort_key,
)

BUILTIN_SITES = frozenset(["Signal", "Rtimer", "if", "let", "0"])


# ---------------------------------------------------------------------------
# Events

@dataclass(frozen=True)
class Publish:
    value: Value


@dataclass(frozen=True)
class Internal:
    pass


INTERNAL = Internal()


@dataclass(frozen=True)
class Call:
    site: str
    handle: int
    args: tuple


@dataclass(frozen=True)
class Return:
    site: str
    handle: int
    value: Value


@dataclass(frozen=True)
class Tick:
    clock: int  # the clock value being advanced to


def event_label(event) -> str:
    """A short, whitespace-free label for transition-system exports."""
    if isinstance(event, Publish):
        text = f"!{render_value(event.value)}"
    elif isinstance(event, Internal):
        text = "tau"
    elif isinstance(event, Call):
        args = ",".join(render_value(a) if not isinstance(a, Var) else a.name
                        for a in event.args)
        text = f"{event.site}_{event.handle}({args})"
    elif isinstance(event, Return):
        text = f"{event.handle}?{render_value(event.value)}"
    elif isinstance(event, Tick):
        text = f"tick({event.clock})"
    else:
        raise TypeError(f"not an event: {event!r}")
    # Spaces can only come from string values; keep tokens whitespace-free
    # for the line-oriented .mts format (  survives a JSON reparse).
    return text.replace(" ", "\\u0020")


def value_to_json(value: Value):
    if isinstance(value, Signal):
        return {"t": "signal", "v": None}
    if isinstance(value, bool):
        return {"t": "bool", "v": value}
    if isinstance(value, int):
        return {"t": "int", "v": value}
    if isinstance(value, str):
        return {"t": "str", "v": value}
    if isinstance(value, tuple):
        return {"t": "tuple", "v": [value_to_json(v) for v in value]}
    raise TypeError(f"not a value: {value!r}")


def event_to_json(clock: int, event) -> dict:
    if isinstance(event, Publish):
        return {"clock": clock, "kind": "publish",
                "value": value_to_json(event.value)}
    if isinstance(event, Internal):
        return {"clock": clock, "kind": "internal"}
    if isinstance(event, Call):
        return {"clock": clock, "kind": "call", "site": event.site,
                "handle": event.handle,
                "args": [value_to_json(a) for a in event.args]}
    if isinstance(event, Return):
        return {"clock": clock, "kind": "return", "site": event.site,
                "handle": event.handle, "value": value_to_json(event.value)}
    if isinstance(event, Tick):
        return {"clock": clock, "kind": "tick", "to": event.clock}
    raise TypeError(f"not an event: {event!r}")


# ---------------------------------------------------------------------------
# Execution state

@dataclass(frozen=True)
class PendingCall:
    site: str
    args: tuple
    due: "int | None"       # None: the call never responds
    value: "Value | None"   # response value, fixed at call time


@dataclass(frozen=True)
class ExecState:
    expr: Expr
    pending: dict            # handle -> PendingCall
    clock: int = 0
    next_handle: int = 0
    def_depth: dict = field(default_factory=dict)   # name -> expansions
    cycles: dict = field(default_factory=dict)      # site -> calls so far


@dataclass(frozen=True)
class Bounds:
    max_steps: int = 10000
    max_states: int = 100000
    max_depth: int = 16


class Deterministic:
    """Always pick the lowest (rule, position) transition."""


@dataclass(frozen=True)
class SeededRandom:
    seed: int


@dataclass(frozen=True)
class Transition:
    event: object
    state: ExecState
    priority: int      # rule number, for the deterministic policy
    position: tuple    # path of the node that produced the event


@dataclass
class Trace:
    events: list          # (clock, Event) pairs
    publications: list    # Publish values in order
    halted: bool          # quiescent with nothing blocked by bounds
    truncated: bool       # quiescent but a definition hit max_depth


def initial_state(program: Program) -> ExecState:
    return ExecState(program.goal, {})


# Rule numbers; the deterministic policy picks the smallest.
_PRIO_CALL = 1
_PRIO_RETURN = 2
_PRIO_PUBLISH = 3
_PRIO_SEQ_SPAWN = 4
_PRIO_BIND = 5
_PRIO_FALLBACK = 6
_PRIO_EXPAND = 7
_PRIO_TICK = 8


@dataclass(frozen=True)
class _Step:
    priority: int
    position: tuple
    event: object
    expr: Expr
    add: object = None        # (handle, PendingCall) registered by a Call
    remove: object = None     # handle consumed by a Return
    def_name: object = None   # definition expanded
    cycle_site: object = None  # multi-response site called


def _par(left: Expr, right: Expr) -> Expr:
    # A finished side disappears; Parallel(Stop, X) behaves as X.
    if isinstance(left, Stop):
        return right
    if isinstance(right, Stop):
        return left
    return Parallel(left, right)


def _seq(left: Expr, binder, right: Expr) -> Expr:
    # Nothing on the left will ever publish, so B is unreachable.
    if isinstance(left, Stop):
        return STOP
    return Sequential(left, binder, right)


def _resolve_call(site: str, args: tuple, clock: int, program: Program,
                  cycles: dict):
    """(due, value, cycled_site) for a call made now.

    A due of None means the call never responds — the halt site, a
    false guard, an ill-typed builtin call, or a silent external site.
    """
    if site == "0":
        return None, None, None
    if site == "Signal":
        if not args:
            return clock, SIGNAL, None
        return None, None, None
    if site == "let":
        if not args:
            return clock, SIGNAL, None
        if len(args) == 1:
            return clock, args[0], None
        return clock, tuple(args), None
    if site == "if":
        if len(args) == 1 and isinstance(args[0], bool) and args[0]:
            return clock, SIGNAL, None
        return None, None, None
    if site == "Rtimer":
        if (len(args) == 1 and isinstance(args[0], int)
                and not isinstance(args[0], bool) and args[0] >= 0):
            return clock + args[0], SIGNAL, None
        return None, None, None
    spec = program.site_env.get(site, SiteSpec())
    if not spec.responsive or not spec.responses:
        return None, None, None
    value = spec.responses[cycles.get(site, 0) % len(spec.responses)]
    cycled = site if len(spec.responses) > 1 else None
    return clock + spec.delay, value, cycled


def _halted(e: Expr, pending: dict) -> bool:
    """Can this subterm never transition or publish again?

    Conservative where variables are involved: a call blocked on an
    unbound variable counts as live, because an enclosing binder may
    still deliver the value.
    """
    if isinstance(e, Stop):
        return True
    if isinstance(e, Pending):
        return pending[e.handle].due is None
    if isinstance(e, (Parallel, Asymmetric)):
        return _halted(e.left, pending) and _halted(e.right, pending)
    if isinstance(e, Sequential):
        return _halted(e.left, pending)
    # SiteCall, DefCall, Emit, Otherwise all still have (potential) moves.
    return False


def _expr_steps(e: Expr, path: tuple, state: ExecState, program: Program,
                bounds: Bounds) -> list:
    if isinstance(e, SiteCall):
        if any(isinstance(a, Var) for a in e.args):
            return []  # blocked until every argument is a value
        due, value, cycled = _resolve_call(e.site, e.args, state.clock,
                                           program, state.cycles)
        handle = state.next_handle
        pc = PendingCall(e.site, e.args, due, value)
        return [_Step(_PRIO_CALL, path, Call(e.site, handle, e.args),
                      Pending(handle), add=(handle, pc),
                      cycle_site=cycled)]

    if isinstance(e, Pending):
        pc = state.pending[e.handle]
        if pc.due is not None and pc.due <= state.clock:
            return [_Step(_PRIO_RETURN, path,
                          Return(pc.site, e.handle, pc.value),
                          Emit(pc.value), remove=e.handle)]
        return []

    if isinstance(e, Emit):
        return [_Step(_PRIO_PUBLISH, path, Publish(e.value), STOP)]

    if isinstance(e, DefCall):
        if any(isinstance(a, Var) for a in e.args):
            return []
        d = program.definitions[e.name]
        if state.def_depth.get(e.name, 0) >= bounds.max_depth:
            return []  # blocked; surfaces as truncation, not as halting
        body = d.body
        for p, a in zip(d.params, e.args):
            body = substitute(body, p, a)
        return [_Step(_PRIO_EXPAND, path, INTERNAL, body, def_name=e.name)]

    if isinstance(e, Parallel):
        out = []
        for s in _expr_steps(e.left, path + (0,), state, program, bounds):
            out.append(replace(s, expr=_par(s.expr, e.right)))
        for s in _expr_steps(e.right, path + (1,), state, program, bounds):
            out.append(replace(s, expr=_par(e.left, s.expr)))
        return out

    if isinstance(e, Sequential):
        out = []
        for s in _expr_steps(e.left, path + (0,), state, program, bounds):
            if isinstance(s.event, Publish):
                inst = e.right
                if e.binder is not None:
                    inst = substitute(e.right, e.binder, s.event.value)
                out.append(replace(
                    s, priority=_PRIO_SEQ_SPAWN, position=path,
                    event=INTERNAL,
                    expr=_par(_seq(s.expr, e.binder, e.right), inst)))
            else:
                out.append(replace(s, expr=_seq(s.expr, e.binder, e.right)))
        return out

    if isinstance(e, Asymmetric):
        out = []
        for s in _expr_steps(e.left, path + (0,), state, program, bounds):
            out.append(replace(s, expr=Asymmetric(s.expr, e.binder,
                                                  e.right)))
        for s in _expr_steps(e.right, path + (1,), state, program, bounds):
            if isinstance(s.event, Publish):
                bound = e.left
                if e.binder is not None:
                    bound = substitute(e.left, e.binder, s.event.value)
                out.append(replace(s, priority=_PRIO_BIND, position=path,
                                   event=INTERNAL, expr=bound))
            else:
                out.append(replace(s, expr=Asymmetric(e.left, e.binder,
                                                      s.expr)))
        return out

    if isinstance(e, Otherwise):
        out = []
        left_steps = _expr_steps(e.left, path + (0,), state, program,
                                 bounds)
        for s in left_steps:
            if isinstance(s.event, Publish):
                # A publication settles the choice: B is discarded.
                out.append(s)
            else:
                out.append(replace(s, expr=Otherwise(s.expr, e.right)))
        if not left_steps and _halted(e.left, state.pending):
            out.append(_Step(_PRIO_FALLBACK, path, INTERNAL, e.right))
        return out

    return []  # Stop


def _live_handles(e: Expr, acc: set):
    if isinstance(e, Pending):
        acc.add(e.handle)
    elif isinstance(e, (Parallel, Sequential, Asymmetric, Otherwise)):
        _live_handles(e.left, acc)
        _live_handles(e.right, acc)


def _apply(state: ExecState, s: _Step) -> ExecState:
    pending = dict(state.pending)
    next_handle = state.next_handle
    if s.remove is not None:
        del pending[s.remove]
    if s.add is not None:
        handle, pc = s.add
        pending[handle] = pc
        next_handle = handle + 1
    live: set = set()
    _live_handles(s.expr, live)
    if len(live) != len(pending):
        # Terminated branches abandon their outstanding calls.
        pending = {h: pc for h, pc in pending.items() if h in live}
    def_depth = state.def_depth
    if s.def_name is not None:
        def_depth = dict(def_depth)
        def_depth[s.def_name] = def_depth.get(s.def_name, 0) + 1
    cycles = state.cycles
    if s.cycle_site is not None:
        cycles = dict(cycles)
        cycles[s.cycle_site] = cycles.get(s.cycle_site, 0) + 1
    return ExecState(s.expr, pending, state.clock, next_handle, def_depth,
                     cycles)


def step(state: ExecState, program: Program,
         bounds: Bounds = Bounds()) -> list:
    """All enabled transitions, sorted by (rule, position).

    An empty result means the state is quiescent.  The Tick transition
    appears only when nothing else is enabled and some pending response
    lies in the future; it advances the clock exactly to the earliest
    due tick.
    """
    steps = _expr_steps(state.expr, (), state, program, bounds)
    if steps:
        steps.sort(key=lambda s: (s.priority, s.position))
        return [Transition(s.event, _apply(state, s), s.priority,
                           s.position)
                for s in steps]
    future = [pc.due for pc in state.pending.values()
              if pc.due is not None and pc.due > state.clock]
    if future:
        target = min(future)
        return [Transition(Tick(target), replace(state, clock=target),
                           _PRIO_TICK, ())]
    return []


def _subexpr(e: Expr, path: tuple) -> Expr:
    for i in path:
        e = (e.left, e.right)[i]
    return e


def is_halted(state: ExecState, path: tuple = ()) -> bool:
    """True iff the subterm at ``path`` can never move or publish again."""
    return _halted(_subexpr(state.expr, path), state.pending)


def _depth_blocked(e: Expr, state: ExecState, program: Program,
                   bounds: Bounds) -> bool:
    """Is some *active* definition call stuck at the depth bound?"""
    if isinstance(e, DefCall):
        return (not any(isinstance(a, Var) for a in e.args)
                and state.def_depth.get(e.name, 0) >= bounds.max_depth)
    if isinstance(e, (Parallel, Asymmetric)):
        return (_depth_blocked(e.left, state, program, bounds)
                or _depth_blocked(e.right, state, program, bounds))
    if isinstance(e, (Sequential, Otherwise)):
        return _depth_blocked(e.left, state, program, bounds)
    return False


def run(program: Program, policy=None, bounds: Bounds = Bounds()) -> Trace:
    """Execute one interleaving to quiescence.

    The Deterministic policy always takes the lowest-numbered rule at
    the leftmost position; SeededRandom draws uniformly from the
    enabled set.  Raises BoundExceeded (with the partial trace
    attached) when max_steps runs out.
    """
    rng = None
    if isinstance(policy, SeededRandom):
        rng = random.Random(policy.seed)
    state = initial_state(program)
    events: list = []
    publications: list = []
    taken = 0
    while True:
        transitions = step(state, program, bounds)
        if not transitions:
            blocked = _depth_blocked(state.expr, state, program, bounds)
            return Trace(events, publications, halted=not blocked,
                         truncated=blocked)
        if taken >= bounds.max_steps:
            raise BoundExceeded(
                f"no quiescence after {bounds.max_steps} steps",
                partial=Trace(events, publications, halted=False,
                              truncated=True))
        chosen = transitions[0] if rng is None else \
            transitions[rng.randrange(len(transitions))]
        events.append((state.clock, chosen.event))
        if isinstance(chosen.event, Publish):
            publications.append(chosen.event.value)
        state = chosen.state
        taken += 1


# ---------------------------------------------------------------------------
# Exhaustive exploration

def _canon_value(v) -> str:
    return v.name if isinstance(v, Var) else render_value(v)


def _canon_expr(e: Expr, parts: list, handles: dict):
    if isinstance(e, SiteCall):
        parts.append(f"C{e.site}({','.join(_canon_value(a) for a in e.args)})")
    elif isinstance(e, DefCall):
        parts.append(f"D{e.name}({','.join(_canon_value(a) for a in e.args)})")
    elif isinstance(e, Pending):
        handles.setdefault(e.handle, len(handles))
        parts.append(f"?{handles[e.handle]}")
    elif isinstance(e, Emit):
        parts.append(f"!{render_value(e.value)}")
    elif isinstance(e, Stop):
        parts.append(".")
    elif isinstance(e, Parallel):
        parts.append("(")
        _canon_expr(e.left, parts, handles)
        parts.append("|")
        _canon_expr(e.right, parts, handles)
        parts.append(")")
    elif isinstance(e, Sequential):
        parts.append("(")
        _canon_expr(e.left, parts, handles)
        parts.append(f">{e.binder or ''}>")
        _canon_expr(e.right, parts, handles)
        parts.append(")")
    elif isinstance(e, Asymmetric):
        parts.append("(")
        _canon_expr(e.left, parts, handles)
        parts.append(f"<{e.binder or ''}<")
        _canon_expr(e.right, parts, handles)
        parts.append(")")
    elif isinstance(e, Otherwise):
        parts.append("(")
        _canon_expr(e.left, parts, handles)
        parts.append(";")
        _canon_expr(e.right, parts, handles)
        parts.append(")")


def canonical_key(state: ExecState) -> str:
    """Stable state identity: handles renumbered in first-use order,
    pending entries listed in that order, plus clock and counters."""
    parts: list = []
    handles: dict = {}
    _canon_expr(state.expr, parts, handles)
    for old in sorted(handles, key=handles.get):
        pc = state.pending[old]
        parts.append(f"P{handles[old]}:{pc.site}:{pc.due}:"
                     f"{'-' if pc.value is None else render_value(pc.value)}")
    parts.append(f"@{state.clock}")
    for name in sorted(state.def_depth):
        parts.append(f"d{name}={state.def_depth[name]}")
    for site in sorted(state.cycles):
        parts.append(f"c{site}={state.cycles[site]}")
    return "\x1f".join(parts)


@dataclass
class ExploredLts:
    """Every reachable canonical state and transition of a program.

    ``outcomes`` holds, per maximal path that genuinely ends (halts),
    the multiset of published values as a sorted tuple;
    ``truncated_outcomes`` collects the publication prefixes of paths
    cut off by the depth bound, the state bound, or a cycle.
    """

    states: list                  # ExecState per id; 0 is initial
    edges: list                   # (src id, Event, dst id)
    halted_states: frozenset
    truncated_states: frozenset
    outcomes: frozenset           # sorted tuples of Values
    truncated_outcomes: frozenset
    truncated: bool               # state bound was hit


def _fold_paths(n_states: int, edges: list, halted_states, truncated_states,
                extract) -> frozenset:
    """All (item-sequence, truncated?) pairs over maximal paths from
    state 0, where ``extract(event)`` picks which events contribute.
    Cycles contribute a truncated marker instead of unrolling."""
    succ: dict = {i: [] for i in range(n_states)}
    for (i, ev, j) in edges:
        succ[i].append((ev, j))
    color = [0] * n_states   # 0 unvisited, 1 on stack, 2 done
    memo: list = [None] * n_states
    stack = [(0, 0)]
    color[0] = 1
    while stack:
        node, idx = stack[-1]
        if idx < len(succ[node]):
            stack[-1] = (node, idx + 1)
            (_, nxt) = succ[node][idx]
            if color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, 0))
            continue
        stack.pop()
        entries = set()
        if node in halted_states:
            entries.add(((), False))
        if node in truncated_states:
            entries.add(((), True))
        for (ev, nxt) in succ[node]:
            child = memo[nxt] if color[nxt] == 2 \
                else frozenset([((), True)])   # back edge: cycle
            item = extract(ev)
            for (seq, flag) in child:
                entries.add(((item,) + seq if item is not None else seq,
                             flag))
        color[node] = 2
        memo[node] = frozenset(entries)
    return memo[0]


def _publish_value(event):
    return event.value if isinstance(event, Publish) else None


def explore(program: Program, bounds: Bounds = Bounds()) -> ExploredLts:
    """Breadth-first closure of step() with canonical deduplication.

    Raises BoundExceeded (with the partial ExploredLts attached) when
    max_states is hit; paths cut off that way are flagged, not lost.
    """
    init = initial_state(program)
    ids = {canonical_key(init): 0}
    states = [init]
    edges: list = []
    halted: set = set()
    truncated: set = set()
    hit_state_bound = False
    queue: deque = deque([0])
    while queue:
        i = queue.popleft()
        transitions = step(states[i], program, bounds)
        if not transitions:
            if _depth_blocked(states[i].expr, states[i], program, bounds):
                truncated.add(i)
            else:
                halted.add(i)
            continue
        for t in transitions:
            key = canonical_key(t.state)
            j = ids.get(key)
            if j is None:
                if len(states) >= bounds.max_states:
                    hit_state_bound = True
                    truncated.add(i)
                    continue
                j = len(states)
                ids[key] = j
                states.append(t.state)
                queue.append(j)
            edges.append((i, t.event, j))

    raw = _fold_paths(len(states), edges, frozenset(halted),
                      frozenset(truncated), _publish_value)
    outcomes = frozenset(tuple(sorted(seq, key=value_sort_key))
                         for (seq, flag) in raw if not flag)
    cut = frozenset(tuple(sorted(seq, key=value_sort_key))
                    for (seq, flag) in raw if flag)
    result = ExploredLts(states, edges, frozenset(halted),
                         frozenset(truncated), outcomes, cut,
                         hit_state_bound)
    if hit_state_bound:
        raise BoundExceeded(
            f"exploration stopped at {bounds.max_states} states",
            partial=result)
    return result


def publications(program: Program, bounds: Bounds = Bounds()) -> frozenset:
    """Outcome summary: publication multisets of all halting paths."""
    return explore(program, bounds).outcomes


def publication_sequences(explored: ExploredLts) -> frozenset:
    """Ordered publication tuples of every completed maximal path."""
    raw = _fold_paths(len(explored.states), explored.edges,
                      explored.halted_states, explored.truncated_states,
                      _publish_value)
    return frozenset(seq for (seq, flag) in raw if not flag)


def path_call_site_sets(explored: ExploredLts) -> frozenset:
    """Per completed maximal path, the set of site names called."""
    raw = _fold_paths(len(explored.states), explored.edges,
                      explored.halted_states, explored.truncated_states,
                      lambda ev: ev.site if isinstance(ev, Call) else None)
    return frozenset(frozenset(seq) for (seq, flag) in raw if not flag)


def path_call_multisets(explored: ExploredLts) -> frozenset:
    """Per completed maximal path, the sorted tuple of sites called."""
    raw = _fold_paths(len(explored.states), explored.edges,
                      explored.halted_states, explored.truncated_states,
                      lambda ev: ev.site if isinstance(ev, Call) else None)
    return frozenset(tuple(sorted(seq)) for (seq, flag) in raw if not flag)


def reachable_without(explored: ExploredLts, pred) -> set:
    """State ids reachable from the start along edges whose events all
    fail ``pred`` — e.g. everything reachable before a given Return."""
    seen = {0}
    frontier = [0]
    succ: dict = {}
    for (i, ev, j) in explored.edges:
        succ.setdefault(i, []).append((ev, j))
    while frontier:
        i = frontier.pop()
        for (ev, j) in succ.get(i, []):
            if not pred(ev) and j not in seen:
                seen.add(j)
                frontier.append(j)
    return seen


def lts_view(explored: ExploredLts, collapse_internal: bool = False) -> Lts:
    """The explored graph as an Lts with states s0, s1, ...

    With ``collapse_internal`` the view is the weak-transition graph:
    internal moves are elided by shortcutting through tau-closures.
    """
    def name(i):
        return f"s{i}"

    if not collapse_internal:
        trans = frozenset((name(i), event_label(ev), name(j))
                          for (i, ev, j) in explored.edges)
        states = frozenset(name(i) for i in range(len(explored.states)))
        return Lts(states, frozenset(), name(0), trans)

    succ: dict = {}
    for (i, ev, j) in explored.edges:
        succ.setdefault(i, []).append((ev, j))

    def tau_closure(start):
        seen = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for (ev, v) in succ.get(u, []):
                if isinstance(ev, Internal) and v not in seen:
                    seen.add(v)
                    frontier.append(v)
        return seen

    trans = set()
    kept = {0}
    for i in range(len(explored.states)):
        for u in tau_closure(i):
            for (ev, v) in succ.get(u, []):
                if not isinstance(ev, Internal):
                    trans.add((name(i), event_label(ev), name(v)))
                    kept.add(i)
                    kept.add(v)
    states = frozenset(name(i) for i in kept)
    visible = frozenset(t for t in trans if t[0] in states)
    return Lts(states, frozenset(), name(0), visible)
