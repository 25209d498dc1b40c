"""Concrete syntax: Orc programs, feature models and (modal) transition
systems, with parsers and pretty-printers that round-trip.

Orc expressions, tightest to loosest binding::

    expr      := otherwise
    otherwise := asym (";" asym)*            -- groups left
    asym      := par ("<" NAME? "<" asym)?   -- groups right
    par       := seq ("|" seq)*              -- groups left
    seq       := prim (">" NAME? ">" seq)?   -- groups right
    prim      := NAME "(" args ")" | NAME | "0" | "(" expr ")"

A program is zero or more ``site``/``def`` declaration lines followed
by the goal expression.  ``--`` starts a comment in every format.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from . import feature_model as fm
from . import mts as mts_mod
from .orc_ast import (
    SIGNAL, Arg, Asymmetric, DefCall, Definition, Emit, Expr, Otherwise,
    Parallel, Pending, Program, Sequential, SiteCall, SiteSpec, Stop, Var,
    free_vars, render_value,
)

RESERVED = frozenset(
    ["def", "site", "silent", "delay", "responds", "true", "false", "signal"])

_FM_KEYWORDS = frozenset(
    ["family", "mandatory", "optional", "alternative", "requires",
     "excludes"])


@dataclass(frozen=True)
class SourceSpan:
    line: int      # 1-based
    column: int    # 1-based
    length: int


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    severity: str  # "error" | "warning"


def format_diagnostic(d: ParseDiagnostic, filename: str = "<input>") -> str:
    return (f"{filename}:{d.span.line}:{d.span.column}: "
            f"{d.severity}: {d.message}")


class ParseError(Exception):
    """Raised when parsing produced at least one Error diagnostic."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == "error"]
        head = errors[0] if errors else self.diagnostics[0]
        extra = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
        super().__init__(
            f"{head.span.line}:{head.span.column}: {head.message}{extra}")


class _Bail(Exception):
    """Internal: abandon the current statement after a hard error."""


@dataclass(frozen=True)
class _Token:
    kind: str      # "name" | "int" | "string" | "nl" | "eof" | one-char op
    text: str
    value: object
    line: int
    col: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.col, max(1, len(self.text)))


_TOKEN_RE = re.compile(
    r"""(?P<comment>--[^\n]*)
      | (?P<ws>[ \t\r]+)
      | (?P<nl>\n)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<int>-?[0-9]+)
      | (?P<name>[A-Za-z][A-Za-z0-9_]*)
      | (?P<op>[(){}|;,<>=])
    """,
    re.VERBOSE,
)


def _lex(src: str, diags: list) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            col = pos - line_start + 1
            diags.append(ParseDiagnostic(
                SourceSpan(line, col, 1),
                f"unexpected character {src[pos]!r}", "error"))
            pos += 1
            continue
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            tokens.append(_Token("nl", "\n", None, line, col))
            line += 1
            line_start = m.end()
        elif kind == "string":
            try:
                value = json.loads(text)
            except ValueError:
                diags.append(ParseDiagnostic(
                    SourceSpan(line, col, len(text)),
                    "invalid string escape", "error"))
                value = ""
            tokens.append(_Token("string", text, value, line, col))
        elif kind == "int":
            tokens.append(_Token("int", text, int(text), line, col))
        elif kind == "name":
            tokens.append(_Token("name", text, text, line, col))
        elif kind == "op":
            tokens.append(_Token(text, text, text, line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", None, line,
                         len(src) - line_start + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens, diags):
        self.tokens = tokens
        self.i = 0
        self.diags = diags

    def peek(self, k=0) -> _Token:
        j = min(self.i + k, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind) -> bool:
        return self.peek().kind == kind

    def error(self, span, message):
        self.diags.append(ParseDiagnostic(span, message, "error"))

    def expect(self, kind, what) -> _Token:
        if self.at(kind):
            return self.advance()
        t = self.peek()
        shown = t.text if t.kind != "eof" else "end of input"
        self.error(t.span, f"expected {what}, found {shown!r}")
        raise _Bail()


class _ExprParser(_Cursor):
    """Parses one expression over a newline-free token slice.

    Records every call (for definition arity checks) and every variable
    occurrence (for unbound-variable warnings); the program parser owns
    both lists.
    """

    def __init__(self, tokens, diags, calls, var_spans):
        super().__init__(tokens, diags)
        self.calls = calls
        self.var_spans = var_spans

    def parse(self) -> Expr:
        e = self.otherwise()
        if not self.at("eof"):
            t = self.peek()
            self.error(t.span, f"unexpected {t.text!r} after expression")
            raise _Bail()
        return e

    def otherwise(self) -> Expr:
        e = self.asym()
        while self.at(";"):
            self.advance()
            e = Otherwise(e, self.asym())
        return e

    def asym(self) -> Expr:
        left = self.par()
        if self.at("<"):
            self.advance()
            binder = self._binder()
            self.expect("<", "'<' closing the binder")
            return Asymmetric(left, binder, self.asym())
        return left

    def par(self) -> Expr:
        e = self.seq()
        while self.at("|"):
            self.advance()
            e = Parallel(e, self.seq())
        return e

    def seq(self) -> Expr:
        left = self.prim()
        if self.at(">"):
            self.advance()
            binder = self._binder()
            self.expect(">", "'>' closing the binder")
            return Sequential(left, binder, self.seq())
        return left

    def _binder(self):
        if self.at("name"):
            t = self.advance()
            if t.text in RESERVED:
                self.error(t.span, f"{t.text!r} is reserved and cannot "
                                   f"be a binder name")
            return t.text
        return None

    def prim(self) -> Expr:
        t = self.peek()
        if t.kind == "(":
            self.advance()
            e = self.otherwise()
            self.expect(")", "')'")
            return e
        if t.kind == "int":
            self.advance()
            if t.value != 0:
                self.error(t.span, f"a bare number is not an expression; "
                                   f"write let({t.text}) to publish it")
            if self.at("("):
                self.advance()
                if not self.at(")"):
                    self.error(self.peek().span,
                               "the halt site 0 takes no arguments")
                    while not self.at(")") and not self.at("eof"):
                        self.advance()
                self.expect(")", "')'")
            return SiteCall("0", ())
        if t.kind == "string":
            self.advance()
            self.error(t.span, "a bare string is not an expression; "
                               "write let(...) to publish it")
            return SiteCall("0", ())
        if t.kind == "name":
            if t.text in ("true", "false", "signal"):
                self.advance()
                self.error(t.span, f"the literal {t.text!r} is not an "
                                   f"expression; write let({t.text})")
                return SiteCall("0", ())
            if t.text in RESERVED:
                self.advance()
                self.error(t.span, f"{t.text!r} is a reserved word")
                return SiteCall("0", ())
            self.advance()
            if self.at("("):
                args = self._args()
                self.calls.append((t.text, len(args), t.span))
                return SiteCall(t.text, args)
            self.calls.append((t.text, 0, t.span))
            return SiteCall(t.text, ())
        shown = t.text if t.kind != "eof" else "end of input"
        self.error(t.span, f"expected an expression, found {shown!r}")
        raise _Bail()

    def _args(self) -> tuple:
        self.expect("(", "'('")
        args = []
        if not self.at(")"):
            while True:
                args.append(self._arg())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")", "')' closing the argument list")
        return tuple(args)

    def _arg(self) -> Arg:
        t = self.peek()
        if t.kind == "int":
            self.advance()
            return t.value
        if t.kind == "string":
            self.advance()
            return t.value
        if t.kind == "name":
            self.advance()
            if t.text == "true":
                return True
            if t.text == "false":
                return False
            if t.text == "signal":
                return SIGNAL
            if self.at("("):
                self.error(t.span,
                           "site calls cannot be nested in argument "
                           "position; bind the inner call with >x> or <x<")
                self._skip_balanced()
                return Var(t.text)
            if t.text in RESERVED:
                self.error(t.span, f"{t.text!r} is reserved and cannot be "
                                   f"an argument")
                return Var(t.text)
            self.var_spans.append((t.text, t.span))
            return Var(t.text)
        shown = t.text if t.kind != "eof" else "end of input"
        self.error(t.span, f"expected an argument, found {shown!r}")
        raise _Bail()

    def _skip_balanced(self):
        depth = 0
        while not self.at("eof"):
            t = self.advance()
            if t.kind == "(":
                depth += 1
            elif t.kind == ")":
                depth -= 1
                if depth == 0:
                    return


def _line_slice(cur: _Cursor) -> list:
    """Tokens up to the next newline at parenthesis depth 0, newlines
    inside parentheses dropped, terminated by a synthetic eof."""
    out = []
    depth = 0
    while True:
        t = cur.peek()
        if t.kind == "eof":
            break
        if t.kind == "nl" and depth == 0:
            break
        cur.advance()
        if t.kind == "nl":
            continue
        if t.kind == "(":
            depth += 1
        elif t.kind == ")":
            depth = max(0, depth - 1)
        out.append(t)
    end = cur.peek()
    out.append(_Token("eof", "", None, end.line, end.col))
    return out


def _brace_slice(cur: _Cursor) -> list:
    """Tokens inside a balanced { ... }, terminated by a synthetic eof;
    consumes both braces.  The cursor must be at the opening brace."""
    cur.advance()
    out = []
    depth = 1
    while True:
        t = cur.peek()
        if t.kind == "eof":
            cur.error(t.span, "unclosed '{'")
            break
        cur.advance()
        if t.kind == "{":
            depth += 1
        elif t.kind == "}":
            depth -= 1
            if depth == 0:
                break
        out.append(t)
    end = cur.peek()
    out.append(_Token("eof", "", None, end.line, end.col))
    return out


def _literal_arg(cur: _Cursor):
    t = cur.peek()
    if t.kind in ("int", "string"):
        cur.advance()
        return t.value
    if t.kind == "name" and t.text in ("true", "false", "signal"):
        cur.advance()
        return {"true": True, "false": False, "signal": SIGNAL}[t.text]
    cur.error(t.span, f"expected a literal value, found {t.text!r}")
    raise _Bail()


def _parse_site_decl(line: _Cursor, sites: dict):
    line.advance()  # "site"
    name_tok = line.expect("name", "a site name")
    if name_tok.text in RESERVED:
        line.error(name_tok.span,
                   f"{name_tok.text!r} is reserved and cannot name a site")
    if name_tok.text in sites:
        line.error(name_tok.span,
                   f"site {name_tok.text!r} is declared twice")
    responsive = True
    delay = 0
    responses = (SIGNAL,)
    if line.at("name") and line.peek().text == "silent":
        line.advance()
        responsive = False
        responses = ()
    else:
        if line.at("name") and line.peek().text == "delay":
            line.advance()
            delay_tok = line.expect("int", "a delay in ticks")
            if delay_tok.value < 0:
                line.error(delay_tok.span, "delay cannot be negative")
            delay = max(0, delay_tok.value)
        if line.at("name") and line.peek().text == "responds":
            line.advance()
            values = [_literal_arg(line)]
            while line.at(","):
                line.advance()
                values.append(_literal_arg(line))
            responses = tuple(values)
    if not line.at("eof"):
        line.error(line.peek().span,
                   f"unexpected {line.peek().text!r} in site declaration")
        raise _Bail()
    sites[name_tok.text] = SiteSpec(responses, responsive, delay)


def _parse_def_decl(line: _Cursor, defs: dict, diags, calls, var_spans):
    line.advance()  # "def"
    name_tok = line.expect("name", "a definition name")
    if name_tok.text in RESERVED:
        line.error(name_tok.span, f"{name_tok.text!r} is reserved and "
                                  f"cannot name a definition")
    if name_tok.text in defs:
        line.error(name_tok.span,
                   f"definition {name_tok.text!r} is declared twice")
    line.expect("(", "'(' starting the parameter list")
    params = []
    if not line.at(")"):
        while True:
            p = line.expect("name", "a parameter name")
            if p.text in RESERVED:
                line.error(p.span, f"{p.text!r} is reserved and cannot be "
                                   f"a parameter")
            if p.text in params:
                line.error(p.span, f"duplicate parameter {p.text!r}")
            params.append(p.text)
            if line.at(","):
                line.advance()
                continue
            break
    line.expect(")", "')' closing the parameter list")
    line.expect("=", "'=' before the definition body")
    body_tokens = line.tokens[line.i:]
    body = _ExprParser(body_tokens, diags, calls, var_spans).parse()
    defs[name_tok.text] = Definition(tuple(params), body)


def _resolve_defcalls(e: Expr, names: frozenset) -> Expr:
    if isinstance(e, SiteCall) and e.site in names:
        return DefCall(e.site, e.args)
    if isinstance(e, Parallel):
        return Parallel(_resolve_defcalls(e.left, names),
                        _resolve_defcalls(e.right, names))
    if isinstance(e, Sequential):
        return Sequential(_resolve_defcalls(e.left, names), e.binder,
                          _resolve_defcalls(e.right, names))
    if isinstance(e, Asymmetric):
        return Asymmetric(_resolve_defcalls(e.left, names), e.binder,
                          _resolve_defcalls(e.right, names))
    if isinstance(e, Otherwise):
        return Otherwise(_resolve_defcalls(e.left, names),
                         _resolve_defcalls(e.right, names))
    return e


def parse_program_with_diagnostics(src: str):
    """Parse a full program; returns (Program or None, diagnostics)."""
    diags: list = []
    calls: list = []
    var_spans: list = []
    cur = _Cursor(_lex(src, diags), diags)
    defs: dict = {}
    sites: dict = {}
    goal = None
    try:
        while True:
            while cur.at("nl"):
                cur.advance()
            t = cur.peek()
            if t.kind == "name" and t.text == "site":
                line = _Cursor(_line_slice(cur), diags)
                try:
                    _parse_site_decl(line, sites)
                except _Bail:
                    pass
                continue
            if t.kind == "name" and t.text == "def":
                line = _Cursor(_line_slice(cur), diags)
                try:
                    _parse_def_decl(line, defs, diags, calls, var_spans)
                except _Bail:
                    pass
                continue
            break
        goal_tokens = [t for t in cur.tokens[cur.i:] if t.kind != "nl"]
        if not goal_tokens or goal_tokens[0].kind == "eof":
            end = cur.peek()
            cur.error(SourceSpan(end.line, end.col, 1),
                      "a program needs a goal expression")
        else:
            goal = _ExprParser(goal_tokens, diags, calls,
                               var_spans).parse()
    except _Bail:
        pass

    for name in sorted(set(defs) & set(sites)):
        diags.append(ParseDiagnostic(
            SourceSpan(1, 1, 1),
            f"{name!r} is both a declared site and a definition",
            "error"))
    for (name, nargs, span) in calls:
        if name in defs and nargs != len(defs[name].params):
            diags.append(ParseDiagnostic(
                span,
                f"definition {name!r} takes {len(defs[name].params)} "
                f"argument(s), called with {nargs}", "error"))

    if any(d.severity == "error" for d in diags) or goal is None:
        return None, diags

    defnames = frozenset(defs)
    goal = _resolve_defcalls(goal, defnames)
    defs = {name: Definition(d.params, _resolve_defcalls(d.body, defnames))
            for name, d in defs.items()}

    unbound = set(free_vars(goal))
    for d in defs.values():
        unbound |= set(free_vars(d.body)) - set(d.params)
    reported = set()
    for (name, span) in var_spans:
        if name in unbound and name not in reported:
            reported.add(name)
            diags.append(ParseDiagnostic(
                span,
                f"variable {name!r} is never bound; calls using it "
                f"will block forever", "warning"))

    return Program(goal, defs, sites), diags


def parse_program(src: str) -> Program:
    """Parse a program, raising ParseError on any Error diagnostic."""
    program, diags = parse_program_with_diagnostics(src)
    if program is None:
        raise ParseError(diags)
    return program


def parse_expr(src: str) -> Expr:
    """Parse a single goal expression (no declarations)."""
    return parse_program(src).goal


# ---------------------------------------------------------------------------
# Rendering

_LEVEL_OTHERWISE = 1
_LEVEL_ASYM = 2
_LEVEL_PAR = 3
_LEVEL_SEQ = 4
_LEVEL_PRIM = 5


def _level(e: Expr) -> int:
    if isinstance(e, Otherwise):
        return _LEVEL_OTHERWISE
    if isinstance(e, Asymmetric):
        return _LEVEL_ASYM
    if isinstance(e, Parallel):
        return _LEVEL_PAR
    if isinstance(e, Sequential):
        return _LEVEL_SEQ
    return _LEVEL_PRIM


def _render_arg(a: Arg) -> str:
    if isinstance(a, Var):
        return a.name
    return render_value(a)


def _render(e: Expr, floor: int, full: bool) -> str:
    if isinstance(e, SiteCall):
        if e.site == "0" and not e.args:
            return "0"
        return f"{e.site}({', '.join(_render_arg(a) for a in e.args)})"
    if isinstance(e, DefCall):
        return f"{e.name}({', '.join(_render_arg(a) for a in e.args)})"
    if isinstance(e, Pending):
        return f"?{e.handle}"
    if isinstance(e, Emit):
        return f"!{render_value(e.value)}"
    if isinstance(e, Stop):
        return "stop"

    if isinstance(e, Parallel):
        text = (f"{_render(e.left, _LEVEL_PAR, full)} | "
                f"{_render(e.right, _LEVEL_SEQ, full)}")
    elif isinstance(e, Sequential):
        op = f">{e.binder}>" if e.binder is not None else ">>"
        text = (f"{_render(e.left, _LEVEL_PRIM, full)} {op} "
                f"{_render(e.right, _LEVEL_SEQ, full)}")
    elif isinstance(e, Asymmetric):
        op = f"<{e.binder}<" if e.binder is not None else "<<"
        text = (f"{_render(e.left, _LEVEL_PAR, full)} {op} "
                f"{_render(e.right, _LEVEL_ASYM, full)}")
    else:  # Otherwise
        text = (f"{_render(e.left, _LEVEL_OTHERWISE, full)} ; "
                f"{_render(e.right, _LEVEL_ASYM, full)}")

    if full or _level(e) < floor:
        return f"({text})"
    return text


def render_expr(e: Expr, full_parens: bool = False) -> str:
    """Concrete syntax for ``e``; parse_expr(render_expr(e)) == e.

    With ``full_parens`` every composite is parenthesized (useful for
    teaching precedence and for cross-checking the grammar).
    """
    return _render(e, _LEVEL_OTHERWISE, full_parens)


def _render_site_decl(name: str, spec: SiteSpec) -> str:
    if not spec.responsive or not spec.responses:
        return f"site {name} silent"
    parts = [f"site {name}"]
    if spec.delay:
        parts.append(f"delay {spec.delay}")
    if spec.responses != (SIGNAL,):
        rendered = ", ".join(render_value(v) for v in spec.responses)
        parts.append(f"responds {rendered}")
    return " ".join(parts)


def render_program(p: Program, full_parens: bool = False) -> str:
    lines = []
    for name, spec in p.site_env.items():
        lines.append(_render_site_decl(name, spec))
    for name, d in p.definitions.items():
        params = ", ".join(d.params)
        lines.append(f"def {name}({params}) = "
                     f"{render_expr(d.body, full_parens)}")
    lines.append(render_expr(p.goal, full_parens))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Feature-model format

def _fm_name(cur: _Cursor, what: str) -> _Token:
    t = cur.expect("name", what)
    if t.text in _FM_KEYWORDS:
        cur.error(t.span, f"{t.text!r} is a keyword and cannot be "
                          f"a feature name")
    return t


def _fm_items(cur: _Cursor, builder: fm.ModelBuilder, parent: str):
    while True:
        t = cur.peek()
        if t.kind != "name" or t.text not in _FM_KEYWORDS:
            return
        if t.text in ("mandatory", "optional"):
            cur.advance()
            name = _fm_name(cur, "a feature name")
            try:
                if t.text == "mandatory":
                    builder.mandatory(parent, name.text)
                else:
                    builder.optional(parent, name.text)
            except ValueError as exc:
                cur.error(name.span, str(exc))
            if cur.at("{"):
                cur.advance()
                _fm_items(cur, builder, name.text)
                cur.expect("}", "'}' closing the feature block")
        elif t.text == "alternative":
            cur.advance()
            cur.expect("{", "'{' opening the alternative group")
            members = []      # (name token, deferred block tokens or None)
            while True:
                name = _fm_name(cur, "a member feature name")
                block = _brace_slice(cur) if cur.at("{") else None
                members.append((name, block))
                if cur.at(","):
                    cur.advance()
                    continue
                break
            cur.expect("}", "'}' closing the alternative group")
            if len(members) < 2:
                cur.error(t.span,
                          "an alternative group needs at least two members")
            else:
                try:
                    builder.alternative(parent,
                                        *[m.text for (m, _) in members])
                except ValueError as exc:
                    cur.error(members[0][0].span, str(exc))
                    continue
                for (name, block) in members:
                    if block is not None:
                        inner = _Cursor(block, cur.diags)
                        _fm_items(inner, builder, name.text)
                        if not inner.at("eof"):
                            cur.error(inner.peek().span,
                                      f"unexpected "
                                      f"{inner.peek().text!r} in the "
                                      f"block of member {name.text!r}")
        elif t.text in ("requires", "excludes"):
            cur.advance()
            a = _fm_name(cur, "a feature name")
            b = _fm_name(cur, "a feature name")
            if t.text == "requires":
                builder.requires(a.text, b.text)
            else:
                builder.excludes(a.text, b.text)
        else:  # "family" nested — not an item
            cur.error(t.span, f"unexpected {t.text!r} here")
            raise _Bail()


def parse_feature_model(src: str) -> fm.FeatureModel:
    diags: list = []
    tokens = [t for t in _lex(src, diags) if t.kind != "nl"]
    cur = _Cursor(tokens, diags)
    model = None
    try:
        head = cur.expect("name", "'family'")
        if head.text != "family":
            cur.error(head.span, f"expected 'family', found {head.text!r}")
            raise _Bail()
        root = _fm_name(cur, "the family name")
        cur.expect("{", "'{' opening the family block")
        builder = fm.ModelBuilder(root.text)
        _fm_items(cur, builder, root.text)
        cur.expect("}", "'}' closing the family block")
        if not cur.at("eof"):
            cur.error(cur.peek().span,
                      f"unexpected {cur.peek().text!r} after the family "
                      f"block")
        try:
            model = builder.build()
        except fm.UnknownFeature as exc:
            cur.error(SourceSpan(1, 1, 1),
                      f"constraint references unknown feature {exc}")
    except _Bail:
        pass
    if any(d.severity == "error" for d in diags) or model is None:
        raise ParseError(diags)
    return model


def render_feature_model(model: fm.FeatureModel) -> str:
    lines = [f"family {model.root} {{"]

    def emit(name: str, depth: int):
        indent = "  " * depth
        done_groups = set()
        for child in model.features[name].children:
            f = model.features[child]
            if f.kind == "member":
                if f.group in done_groups:
                    continue
                done_groups.add(f.group)
                group = model.groups[f.group]
                if all(not model.features[m].children
                       for m in group.members):
                    members = ", ".join(group.members)
                    lines.append(f"{indent}alternative {{ {members} }}")
                    continue
                lines.append(f"{indent}alternative {{")
                last = len(group.members) - 1
                for i, m in enumerate(group.members):
                    comma = "," if i < last else ""
                    if model.features[m].children:
                        lines.append(f"{indent}  {m} {{")
                        emit(m, depth + 2)
                        lines.append(f"{indent}  }}{comma}")
                    else:
                        lines.append(f"{indent}  {m}{comma}")
                lines.append(f"{indent}}}")
            elif model.features[child].children:
                lines.append(f"{indent}{f.kind} {child} {{")
                emit(child, depth + 1)
                lines.append(f"{indent}}}")
            else:
                lines.append(f"{indent}{f.kind} {child}")

    emit(model.root, 1)
    for c in model.constraints:
        word = "requires" if isinstance(c, fm.Requires) else "excludes"
        lines.append(f"  {word} {c.a} {c.b}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Transition-system formats (line oriented)

def _ts_lines(src: str):
    for lineno, raw in enumerate(src.splitlines(), start=1):
        line = raw.split("--", 1)[0]
        tokens = [(m.group(), m.start() + 1)
                  for m in re.finditer(r"\S+", line)]
        if tokens:
            yield lineno, tokens


def _parse_transition_file(src: str, kind: str):
    """Shared reader for .mts (must/may lines) and .lts (trans lines)."""
    diags: list = []
    states: list = []
    init = None
    triples: dict = {"must": set(), "may": set(), "trans": set()}
    allowed = ("must", "may") if kind == "mts" else ("trans",)
    header_seen = False

    def err(lineno, col, msg):
        diags.append(ParseDiagnostic(SourceSpan(lineno, col, 1), msg,
                                     "error"))

    for lineno, tokens in _ts_lines(src):
        word, col = tokens[0]
        if not header_seen:
            if word != kind or len(tokens) != 2:
                err(lineno, col,
                    f"expected header '{kind} NAME' on the first line")
            header_seen = True
            if word == kind:
                continue
        if word == "states":
            for (name, c) in tokens[1:]:
                if name in states:
                    err(lineno, c, f"state {name!r} declared twice")
                else:
                    states.append(name)
        elif word == "init":
            if len(tokens) != 2:
                err(lineno, col, "expected 'init STATE'")
                continue
            if init is not None:
                err(lineno, col, "init state declared twice")
            init = tokens[1][0]
            if init not in states:
                err(lineno, tokens[1][1],
                    f"init state {init!r} is not declared")
        elif word in allowed:
            if len(tokens) != 4:
                err(lineno, col, f"expected '{word} SRC ACTION DST'")
                continue
            (src_s, c1), (action, _), (dst_s, c3) = tokens[1:]
            ok = True
            for (s, c) in ((src_s, c1), (dst_s, c3)):
                if s not in states:
                    err(lineno, c, f"state {s!r} is not declared")
                    ok = False
            if ok:
                triples[word].add((src_s, action, dst_s))
        else:
            err(lineno, col, f"unknown directive {word!r}")

    if init is None:
        diags.append(ParseDiagnostic(SourceSpan(1, 1, 1),
                                     "missing init state", "error"))
    if any(d.severity == "error" for d in diags):
        raise ParseError(diags)
    return frozenset(states), init, triples


def parse_mts(src: str) -> mts_mod.Mts:
    states, init, triples = _parse_transition_file(src, "mts")
    return mts_mod.Mts(states, frozenset(), init,
                       frozenset(triples["must"]),
                       frozenset(triples["may"]))


def parse_lts(src: str) -> mts_mod.Lts:
    states, init, triples = _parse_transition_file(src, "lts")
    return mts_mod.Lts(states, frozenset(), init,
                       frozenset(triples["trans"]))


def render_mts(m: mts_mod.Mts, name: str = "family") -> str:
    lines = [f"mts {name}",
             "states " + " ".join(sorted(m.states)),
             f"init {m.init}"]
    for (src_s, action, dst_s) in sorted(m.must):
        lines.append(f"must {src_s} {action} {dst_s}")
    for (src_s, action, dst_s) in sorted(m.may - m.must):
        lines.append(f"may {src_s} {action} {dst_s}")
    return "\n".join(lines) + "\n"


def render_lts(l: mts_mod.Lts, name: str = "product") -> str:
    lines = [f"lts {name}",
             "states " + " ".join(sorted(l.states)),
             f"init {l.init}"]
    for (src_s, action, dst_s) in sorted(l.trans):
        lines.append(f"trans {src_s} {action} {dst_s}")
    return "\n".join(lines) + "\n"
