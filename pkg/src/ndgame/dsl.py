"""Line-oriented text format for strategic games (``.ndg``) and multigames (``.ndmg``).

Strategic game::

    game fivebyfive
    agents V H
    outcomes numeric
    strategies V: v1 v2
    strategies H: h1 h2
    cell (v1,h1) -> 0 0          # one integer per agent

Explicit outcomes replace ``outcomes numeric`` with a list of identifiers,
``prefs <agent>: a < b, c < d`` lines (``a = b`` declares indifference) and
cells of the form ``cell (v1,h1) -> oc1``.

Multigame::

    multigame graph
    agents V H
    nodes n1 n2
    start n1                     # optional, display only
    node n1:
      strategies V: v1 v2
      strategies H: h1
      cell (v1,h1) -> 2 2 next n2
      cell (v2,h1) -> outcome oc3 next n1   # explicit mode

``#`` starts a comment. Identifiers are case-sensitive.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CycleError, NdGameError, ParseError, UnknownOutcome, ValidationError
from .multigame import MultiGame
from .order import validate_preference
from .strategic import StrategicGame

STRATEGIC = "strategic"
MULTI = "multi"

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<punct>[<=,():])|(?P<int>-?\d+(?![A-Za-z0-9_']))"
    r"|(?P<word>[A-Za-z0-9_'][A-Za-z0-9_'-]*)|(?P<bad>\S))"
)


@dataclass
class GameDocument:
    kind: str
    name: str
    game: object
    spans: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if not m or m.end() == pos:
            break
        kind = m.lastgroup
        text = m.group(kind)
        col = m.start(kind) + 1
        if kind == "bad":
            raise ParseError(f"unexpected character {text!r}", lineno, col)
        toks.append(_Tok(kind, text, col))
        pos = m.end()
    return toks


class _Line:
    """Cursor over the tokens of one line."""

    def __init__(self, toks, lineno, text):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.text = text

    def error(self, msg, tok=None):
        col = tok.col if tok else (self.toks[self.i].col if self.i < len(self.toks) else len(self.text) + 1)
        return ParseError(msg, self.lineno, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what="token"):
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {what}, found end of line")
        self.i += 1
        return tok

    def ident(self, what="identifier"):
        tok = self.next(what)
        if tok.kind not in ("word", "int"):
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return tok.text

    def expect(self, text):
        tok = self.next(repr(text))
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)

    def idents(self, what="identifier"):
        out = []
        while self.peek() is not None:
            out.append(self.ident(what))
        if not out:
            raise self.error(f"expected at least one {what}")
        return out

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r}", tok)

    def at_end(self):
        return self.peek() is None


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield _Line(_tokenize(body, lineno), lineno, body)


def _profile(ln: _Line) -> tuple:
    ln.expect("(")
    out = [ln.ident("strategy")]
    while True:
        tok = ln.next("',' or ')'")
        if tok.text == ")":
            return tuple(out)
        if tok.text != ",":
            raise ln.error(f"expected ',' or ')', found {tok.text!r}", tok)
        out.append(ln.ident("strategy"))


def _prefs(ln: _Line):
    strict, indiff = [], []
    while True:
        x = ln.ident("outcome")
        op = ln.next("'<' or '='")
        if op.text not in ("<", "="):
            raise ln.error(f"expected '<' or '=', found {op.text!r}", op)
        y = ln.ident("outcome")
        (strict if op.text == "<" else indiff).append((x, y, ln.lineno))
        if ln.at_end():
            return strict, indiff
        ln.expect(",")


class _Builder:
    def __init__(self):
        self.kind = None
        self.name = None
        self.agents = None
        self.outcomes = None  # None: undeclared, "numeric", or list
        self.nodes = None
        self.start = None
        self.strategies = {}  # strategic: agent -> list; multi: (node, agent) -> list
        self.prefs = {}  # agent -> (strict, indiff)
        self.cells = {}  # strategic: profile -> value; multi: node -> {profile: (value, next)}
        self.mode = None  # "numeric" | "explicit"
        self.spans = {}
        self.node = None

    def set_mode(self, mode, ln, tok_col=None):
        declared = self.outcomes
        if declared == "numeric" and mode == "explicit":
            raise ParseError("explicit outcome in a numeric game", ln.lineno, tok_col or 1)
        if isinstance(declared, list) and mode == "numeric":
            raise ParseError("payoff vector in a game with declared outcomes", ln.lineno, tok_col or 1)
        if self.mode is not None and self.mode != mode:
            raise ParseError("cells mix numeric and explicit outcomes", ln.lineno, tok_col or 1)
        self.mode = mode


def _need(b, attr, ln, what):
    if getattr(b, attr) is None:
        raise ParseError(f"{what} must be declared before this line", ln.lineno, 1)


def parse(text: str) -> GameDocument:
    """Parse a game document; raises :class:`ParseError` or :class:`ValidationError`."""
    b = _Builder()
    for ln in _lines(text):
        head = ln.next("keyword")
        kw = head.text
        if b.kind is None:
            if kw not in ("game", "multigame"):
                raise ln.error("document must start with 'game' or 'multigame'", head)
            b.kind = STRATEGIC if kw == "game" else MULTI
            b.name = ln.ident("game name")
            ln.done()
            continue
        if kw == "agents":
            if b.agents is not None:
                raise ln.error("agents declared twice", head)
            b.agents = ln.idents("agent")
            for a in b.agents:
                b.spans.setdefault(a, ln.lineno)
            if len(set(b.agents)) != len(b.agents):
                raise ValidationError("duplicate agent", b.agents, ln.lineno)
        elif kw == "outcomes":
            if b.outcomes is not None:
                raise ln.error("outcomes declared twice", head)
            words = ln.idents("outcome")
            if words == ["numeric"]:
                b.outcomes = "numeric"
            else:
                b.outcomes = words
                for oc in words:
                    b.spans.setdefault(oc, ln.lineno)
        elif kw == "nodes" and b.kind == MULTI:
            b.nodes = ln.idents("node")
            for n in b.nodes:
                b.spans.setdefault(n, ln.lineno)
            if len(set(b.nodes)) != len(b.nodes):
                raise ValidationError("duplicate node", b.nodes, ln.lineno)
        elif kw == "start" and b.kind == MULTI:
            _need(b, "nodes", ln, "nodes")
            b.start = ln.ident("node")
            ln.done()
            if b.start not in b.nodes:
                raise ValidationError(f"unknown node {b.start!r}", b.start, ln.lineno)
        elif kw == "node" and b.kind == MULTI:
            _need(b, "nodes", ln, "nodes")
            n = ln.ident("node")
            ln.expect(":")
            ln.done()
            if n not in b.nodes:
                raise ValidationError(f"unknown node {n!r}", n, ln.lineno)
            if n in b.cells:
                raise ValidationError(f"node {n!r} defined twice", n, ln.lineno)
            b.node = n
            b.cells[n] = {}
        elif kw == "strategies":
            _need(b, "agents", ln, "agents")
            a = ln.ident("agent")
            ln.expect(":")
            ss = ln.idents("strategy")
            if a not in b.agents:
                raise ValidationError(f"unknown agent {a!r}", a, ln.lineno)
            if len(set(ss)) != len(ss):
                raise ValidationError(f"duplicate strategy for {a!r}", a, ln.lineno)
            key = a
            if b.kind == MULTI:
                if b.node is None:
                    raise ln.error("strategies outside a node block", head)
                key = (b.node, a)
            if key in b.strategies:
                raise ValidationError(f"strategies of {a!r} declared twice", a, ln.lineno)
            b.strategies[key] = ss
        elif kw == "prefs":
            _need(b, "agents", ln, "agents")
            a = ln.ident("agent")
            ln.expect(":")
            if a not in b.agents:
                raise ValidationError(f"unknown agent {a!r}", a, ln.lineno)
            strict, indiff = _prefs(ln)
            old = b.prefs.setdefault(a, ([], []))
            old[0].extend(strict)
            old[1].extend(indiff)
        elif kw == "cell":
            _need(b, "agents", ln, "agents")
            _cell(b, ln)
        else:
            raise ln.error(f"unknown keyword {kw!r}", head)
    if b.kind is None:
        raise ParseError("empty document", 1, 1)
    return _finish(b)


def _cell(b: _Builder, ln: _Line):
    if b.kind == MULTI and b.node is None:
        raise ln.error("cell outside a node block")
    profile = _profile(ln)
    if len(profile) != len(b.agents):
        raise ln.error(f"cell needs {len(b.agents)} strategies, found {len(profile)}")
    ln.expect("->")
    first = ln.peek()
    if first is None:
        raise ln.error("expected a cell value")
    if b.kind == MULTI:
        if first.text == "outcome":
            ln.next()
            b.set_mode("explicit", ln, first.col)
            value = ln.ident("outcome")
        else:
            b.set_mode("numeric", ln, first.col)
            value = _ints(ln)
        ln.expect("next")
        nxt = ln.ident("node")
        ln.done()
        if nxt not in b.nodes:
            raise ValidationError(f"unknown node {nxt!r}", nxt, ln.lineno)
        table = b.cells[b.node]
        if profile in table:
            raise ValidationError(f"duplicate cell {profile!r}", profile, ln.lineno)
        table[profile] = (value, nxt)
        b.spans.setdefault((b.node, profile), ln.lineno)
    else:
        words = [t for t in ln.toks[ln.i :]]
        if b.outcomes == "numeric" or (
            b.outcomes is None and all(t.kind == "int" for t in words) and len(words) == len(b.agents)
            and (b.mode != "explicit")
        ):
            b.set_mode("numeric", ln, first.col)
            value = _ints(ln)
        else:
            b.set_mode("explicit", ln, first.col)
            value = ln.ident("outcome")
            ln.done()
        if profile in b.cells:
            raise ValidationError(f"duplicate cell {profile!r}", profile, ln.lineno)
        b.cells[profile] = value
        b.spans.setdefault(profile, ln.lineno)


def _ints(ln: _Line) -> tuple:
    out = []
    while ln.peek() is not None and ln.peek().kind == "int":
        out.append(int(ln.next().text))
    if not out:
        raise ln.error("expected integer payoffs")
    return tuple(out)


def _build_prefs(b: _Builder, domain):
    prefs = {}
    for a in b.agents:
        strict, indiff = b.prefs.get(a, ([], []))
        for x, y, line in strict + indiff:
            for z in (x, y):
                if z not in domain:
                    raise ValidationError(f"undeclared outcome {z!r}", z, line)
        try:
            prefs[a] = validate_preference(
                [(x, y) for x, y, _ in strict], domain, [(x, y) for x, y, _ in indiff]
            )
        except (CycleError, UnknownOutcome) as e:
            line = strict[0][2] if strict else None
            raise ValidationError(f"preference of {a!r}: {e}", a, line) from e
    return prefs


def _check_numeric_width(b, value, where):
    if len(value) != len(b.agents):
        raise ValidationError(
            f"cell {where!r} needs {len(b.agents)} payoffs, found {len(value)}",
            where, b.spans.get(where),
        )


def _wrap(b: _Builder, fn):
    try:
        return fn()
    except ValidationError as e:
        if e.line is None and e.identifier is not None:
            key = e.identifier
            try:
                line = b.spans.get(key)
            except TypeError:
                line = None
            if line is not None:
                raise ValidationError(str(e), key, line) from e
        raise


def _finish(b: _Builder) -> GameDocument:
    if b.agents is None:
        raise ParseError("missing 'agents' line", 1, 1)
    numeric = b.mode == "numeric" or b.outcomes == "numeric"
    if b.kind == STRATEGIC:
        for a in b.agents:
            if a not in b.strategies:
                raise ValidationError(f"no strategies for agent {a!r}", a, b.spans.get(a))
        for profile in b.cells:
            for a, s in zip(b.agents, profile):
                if s not in b.strategies[a]:
                    raise ValidationError(f"unknown strategy {s!r}", s, b.spans.get(profile))
        if numeric:
            if b.prefs:
                raise ValidationError("numeric games take no prefs lines", next(iter(b.prefs)))
            for profile, value in b.cells.items():
                _check_numeric_width(b, value, profile)
            game = _wrap(b, lambda: StrategicGame.from_payoffs(
                b.agents, b.strategies, b.cells, name=b.name))
        else:
            if not isinstance(b.outcomes, list):
                raise ValidationError("explicit outcomes need an 'outcomes' declaration")
            domain = frozenset(b.outcomes)
            for profile, oc in b.cells.items():
                if oc not in domain:
                    raise ValidationError(f"undeclared outcome {oc!r}", oc, b.spans.get(profile))
            prefs = _build_prefs(b, domain)
            game = _wrap(b, lambda: StrategicGame(
                b.agents, b.strategies, b.cells, prefs, name=b.name))
        return GameDocument(STRATEGIC, b.name, game, b.spans)

    if b.nodes is None:
        raise ParseError("missing 'nodes' line", 1, 1)
    for n in b.nodes:
        if n not in b.cells:
            raise ValidationError(f"node {n!r} has no block", n, b.spans.get(n))
        for a in b.agents:
            if (n, a) not in b.strategies:
                raise ValidationError(f"node {n!r}: no strategies for agent {a!r}", n, b.spans.get(n))
        for profile in b.cells[n]:
            for a, s in zip(b.agents, profile):
                if s not in b.strategies[(n, a)]:
                    raise ValidationError(
                        f"node {n!r}: unknown strategy {s!r}", s, b.spans.get((n, profile)))
    if numeric:
        if b.prefs:
            raise ValidationError("numeric games take no prefs lines", next(iter(b.prefs)))
        for n in b.nodes:
            for profile, (value, _) in b.cells[n].items():
                if len(value) != len(b.agents):
                    raise ValidationError(
                        f"node {n!r}: cell {profile!r} needs {len(b.agents)} payoffs",
                        profile, b.spans.get((n, profile)))
        game = _wrap(b, lambda: MultiGame.from_payoffs(
            b.nodes, b.agents, b.strategies, b.cells, name=b.name, start=b.start))
    else:
        if not isinstance(b.outcomes, list):
            raise ValidationError("explicit outcomes need an 'outcomes' declaration")
        domain = frozenset(b.outcomes)
        for n in b.nodes:
            for profile, (oc, _) in b.cells[n].items():
                if oc not in domain:
                    raise ValidationError(
                        f"undeclared outcome {oc!r}", oc, b.spans.get((n, profile)))
        prefs = _build_prefs(b, domain)
        game = _wrap(b, lambda: MultiGame(
            b.nodes, b.agents, b.strategies, b.cells, prefs, name=b.name, start=b.start))
    return GameDocument(MULTI, b.name, game, b.spans)


def load(path) -> GameDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- rendering ----------------------------------------------------------------

def _render_prefs(game, lines):
    for a in game.agents:
        p = game.prefs[a]
        items = [f"{x} < {y}" for x, y in sorted(p.relation, key=lambda q: (str(q[0]), str(q[1])))]
        items += [
            f"{x} = {y}"
            for x, y in sorted(p.indifference, key=lambda q: (str(q[0]), str(q[1])))
            if str(x) < str(y)
        ]
        if items:
            lines.append(f"prefs {a}: " + ", ".join(items))


def _declared_outcomes(game):
    dom = set()
    for p in game.prefs.values():
        dom |= p.domain
    return sorted(dom, key=str)


def render(doc: GameDocument) -> str:
    """Pretty-print a document so that ``parse(render(doc)) == doc``."""
    g = doc.game
    lines = []
    if doc.kind == STRATEGIC:
        lines.append(f"game {g.name}")
        lines.append("agents " + " ".join(g.agents))
        lines.append("outcomes numeric" if g.payoffs is not None
                     else "outcomes " + " ".join(_declared_outcomes(g)))
        for a in g.agents:
            lines.append(f"strategies {a}: " + " ".join(g.strategies[a]))
        if g.payoffs is None:
            _render_prefs(g, lines)
        for profile, oc in g.table.items():
            value = " ".join(map(str, g.payoffs[oc])) if g.payoffs is not None else oc
            lines.append(f"cell ({','.join(profile)}) -> {value}")
        return "\n".join(lines) + "\n"

    lines.append(f"multigame {g.name}")
    lines.append("agents " + " ".join(g.agents))
    lines.append("nodes " + " ".join(g.nodes))
    if g.start is not None:
        lines.append(f"start {g.start}")
    if g.payoffs is None:
        lines.append("outcomes " + " ".join(_declared_outcomes(g)))
        _render_prefs(g, lines)
    for n in g.nodes:
        lines.append(f"node {n}:")
        for a in g.agents:
            lines.append(f"  strategies {a}: " + " ".join(g.local_strategies[(n, a)]))
        for profile, (oc, nxt) in g.transition[n].items():
            if g.payoffs is not None:
                value = " ".join(map(str, g.payoffs[oc]))
            else:
                value = f"outcome {oc}"
            lines.append(f"  cell ({','.join(profile)}) -> {value} next {nxt}")
    return "\n".join(lines) + "\n"


def document_of(game) -> GameDocument:
    kind = MULTI if isinstance(game, MultiGame) else STRATEGIC
    return GameDocument(kind, game.name, game)


__all__ = ["GameDocument", "parse", "render", "load", "document_of", "NdGameError"]
