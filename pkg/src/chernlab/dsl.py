"""Line-oriented session scripts.

    field Fp 32003                      (or: field QQ)
    ring R = poly(x,y,z) / (x*z, y*z, z^2) weights 1,1,1
    ideal J in R = (x, y, z^2)
    coeffs R J maxn=40
    closure I
    hdeg R rel J
    koszul R J
    bounds R J buchsbaum domain
    conjecture1 R J domain
    reductions R I trials=10 seed=42
    compare R J closure(J)

Blank lines and text after '#' are ignored. ``str(parse(text))`` prints a
canonical form that parses back to an equal script.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import PolyRing, make_field, parse_polynomial
from .errors import ParseError

COMMANDS = {
    # name: (positional arity, allowed options, allowed flags)
    "coeffs": (2, {"maxn", "guard", "n"}, set()),
    "closure": (1, set(), set()),
    "hdeg": (1, set(), set()),
    "koszul": (2, set(), set()),
    "bounds": (2, {"seed"}, {"buchsbaum", "domain"}),
    "conjecture1": (2, set(), {"domain", "unmixed"}),
    "reductions": (2, {"trials", "seed"}, set()),
    "compare": (3, set(), set()),
}

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_FILT = re.compile(r"(?:(closure|adic)\(([A-Za-z_][A-Za-z_0-9]*)\)|([A-Za-z_][A-Za-z_0-9]*))$")


@dataclass(frozen=True)
class FieldDecl:
    spec: str

    def __str__(self):
        return f"field {self.spec}"


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple
    relations: tuple = ()
    weights: tuple | None = None

    def __str__(self):
        s = f"ring {self.name} = poly({','.join(self.variables)})"
        if self.relations:
            s += " / (" + ", ".join(self.relations) + ")"
        if self.weights is not None:
            s += " weights " + ",".join(map(str, self.weights))
        return s


@dataclass(frozen=True)
class IdealDecl:
    name: str
    ring: str
    generators: tuple

    def __str__(self):
        return f"ideal {self.name} in {self.ring} = (" + ", ".join(self.generators) + ")"


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple
    options: tuple = ()      # sorted (key, int) pairs
    flags: tuple = ()
    line: int = field(default=0, compare=False)

    def option(self, key, default=None):
        return dict(self.options).get(key, default)

    def __str__(self):
        parts = [self.name, *self.args]
        if self.name == "hdeg" and len(self.args) == 2:
            parts = [self.name, self.args[0], "rel", self.args[1]]
        parts += [f"{k}={v}" for k, v in self.options]
        parts += list(self.flags)
        return " ".join(parts)


@dataclass(frozen=True)
class SessionScript:
    statements: tuple

    @property
    def field(self) -> str | None:
        decls = [s for s in self.statements if isinstance(s, FieldDecl)]
        return decls[-1].spec if decls else None

    @property
    def rings(self) -> list:
        return [s for s in self.statements if isinstance(s, RingDecl)]

    @property
    def ideals(self) -> list:
        return [s for s in self.statements if isinstance(s, IdealDecl)]

    @property
    def commands(self) -> list:
        return [s for s in self.statements if isinstance(s, Command)]

    def __str__(self):
        return "\n".join(str(s) for s in self.statements) + ("\n" if self.statements else "")


# ---------------------------------------------------------------------------
# parsing


def _split_top(text: str, start_col: int, lineno: int) -> list[tuple[str, int]]:
    """Split on commas outside parentheses; returns (piece, column) pairs."""
    pieces, depth, cur, col0, opens = [], 0, [], 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
            opens.append(i)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", lineno, start_col + i)
            opens.pop()
        if ch == "," and depth == 0:
            pieces.append(("".join(cur), start_col + col0))
            cur, col0 = [], i + 1
        else:
            cur.append(ch)
    if depth:
        raise ParseError("unclosed '('", lineno, start_col + opens[-1])
    pieces.append(("".join(cur), start_col + col0))
    out = []
    for p, c in pieces:
        stripped = p.strip()
        out.append((stripped, c + (len(p) - len(p.lstrip()))))
    return out


def _paren_group(line: str, pos: int, lineno: int) -> tuple[str, int]:
    """Content of the parenthesized group starting at line[pos] == '('; returns (inner, end)."""
    if pos >= len(line) or line[pos] != "(":
        raise ParseError("expected '('", lineno, pos + 1)
    depth = 0
    for i in range(pos, len(line)):
        if line[i] == "(":
            depth += 1
        elif line[i] == ")":
            depth -= 1
            if depth == 0:
                return line[pos + 1:i], i + 1
    raise ParseError("unclosed '('", lineno, pos + 1)


def _skip(line, pos):
    while pos < len(line) and line[pos] in " \t":
        pos += 1
    return pos


def _expect(line, pos, token, lineno):
    pos = _skip(line, pos)
    if not line.startswith(token, pos):
        raise ParseError(f"expected '{token}'", lineno, pos + 1)
    return pos + len(token)


def _name(line, pos, lineno, what="name"):
    pos = _skip(line, pos)
    m = _NAME.match(line, pos)
    if not m:
        raise ParseError(f"expected {what}", lineno, pos + 1)
    return m.group(0), m.end()


def _check_polys(items, variables, lineno):
    ring = PolyRing(variables)
    for text, col in items:
        if not text:
            raise ParseError("empty polynomial", lineno, col + 1)
        try:
            parse_polynomial(text, ring)
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], lineno,
                             col + (exc.column or 1))


def _parse_field(line, lineno):
    spec = line[len("field"):].strip()
    try:
        make_field(spec)
    except Exception:
        raise ParseError(f"unknown field {spec!r}", lineno, len("field") + 2)
    return FieldDecl(make_field(spec).name)


def _parse_ring(line, lineno):
    pos = len("ring")
    name, pos = _name(line, pos, lineno, "ring name")
    pos = _expect(line, pos, "=", lineno)
    pos = _expect(line, pos, "poly", lineno)
    pos = _skip(line, pos)
    inner, pos = _paren_group(line, pos, lineno)
    variables = []
    for v, col in _split_top(inner, pos - 1 - len(inner), lineno):
        if not _NAME.fullmatch(v):
            raise ParseError(f"bad variable name {v!r}", lineno, col + 1)
        variables.append(v)
    if len(set(variables)) != len(variables):
        raise ParseError("repeated variable", lineno, pos)
    relations = ()
    weights = None
    pos = _skip(line, pos)
    if pos < len(line) and line[pos] == "/":
        pos = _skip(line, pos + 1)
        inner, end = _paren_group(line, pos, lineno)
        items = [t for t in _split_top(inner, pos + 1, lineno)]
        if items == [("", pos + 1)]:
            items = []
        _check_polys(items, variables, lineno)
        relations = tuple(t for t, _ in items)
        pos = _skip(line, end)
    if line.startswith("weights", pos):
        pos += len("weights")
        text = line[pos:].strip()
        try:
            weights = tuple(int(w) for w in text.split(","))
        except ValueError:
            raise ParseError("weights must be integers", lineno, pos + 2)
        if len(weights) != len(variables) or any(w <= 0 for w in weights):
            raise ParseError("one positive weight per variable required", lineno, pos + 2)
        pos = len(line)
    pos = _skip(line, pos)
    if pos < len(line):
        raise ParseError(f"unexpected text {line[pos:]!r}", lineno, pos + 1)
    return RingDecl(name, tuple(variables), relations, weights)


def _parse_ideal(line, lineno, rings):
    pos = len("ideal")
    name, pos = _name(line, pos, lineno, "ideal name")
    pos = _expect(line, pos, "in", lineno)
    rname, pos = _name(line, pos, lineno, "ring name")
    if rname not in rings:
        raise ParseError(f"unknown ring {rname!r}", lineno, pos - len(rname) + 1)
    pos = _expect(line, pos, "=", lineno)
    pos = _skip(line, pos)
    inner, end = _paren_group(line, pos, lineno)
    items = _split_top(inner, pos + 1, lineno)
    _check_polys(items, rings[rname].variables, lineno)
    rest = line[end:].strip()
    if rest:
        raise ParseError(f"unexpected text {rest!r}", lineno, end + 1)
    return IdealDecl(name, rname, tuple(t for t, _ in items))


def _parse_command(line, lineno, rings, ideals):
    tokens = []
    for m in re.finditer(r"\S+", line):
        tokens.append((m.group(0), m.start() + 1))
    name, col = tokens[0]
    if name not in COMMANDS:
        raise ParseError(f"unknown command {name!r}", lineno, col)
    arity, allowed_opts, allowed_flags = COMMANDS[name]
    args, options, flags = [], {}, []
    rest = tokens[1:]
    if name == "hdeg":
        if len(rest) == 3 and rest[1][0] == "rel":
            rest = [rest[0], rest[2]]
        elif len(rest) != 1:
            raise ParseError("usage: hdeg R [rel J]", lineno, col)
        arity = len(rest)
    for tok, c in rest:
        if "=" in tok:
            k, _, v = tok.partition("=")
            if k not in allowed_opts:
                raise ParseError(f"unknown option {k!r} for {name}", lineno, c)
            if not re.fullmatch(r"-?\d+", v):
                raise ParseError(f"option {k} needs an integer", lineno, c + len(k) + 1)
            options[k] = int(v)
        elif tok in allowed_flags:
            flags.append(tok)
        else:
            args.append((tok, c))
    if len(args) != arity:
        raise ParseError(f"{name} expects {arity} arguments, got {len(args)}", lineno, col)
    # name resolution
    if name == "closure":
        kinds = ["ideal"]
    else:
        kinds = ["ring"] + ["ideal"] * (arity - 1)
    for (tok, c), kind in zip(args, kinds):
        if name == "compare" and kind == "ideal":
            m = _FILT.match(tok)
            if not m:
                raise ParseError(f"bad filtration {tok!r}", lineno, c)
            ref = m.group(2) or m.group(3)
            if ref not in ideals:
                raise ParseError(f"unknown ideal {ref!r}", lineno, c)
            continue
        table = rings if kind == "ring" else ideals
        if tok not in table:
            raise ParseError(f"unknown {kind} {tok!r}", lineno, c)
    if name != "closure":
        rname = args[0][0]
        for tok, c in args[1:]:
            m = _FILT.match(tok)
            ref = m.group(2) or m.group(3)
            if ideals[ref].ring != rname:
                raise ParseError(f"ideal {ref!r} is not an ideal of {rname!r}", lineno, c)
    return Command(name, tuple(t for t, _ in args), tuple(sorted(options.items())),
                   tuple(sorted(set(flags))), lineno)


def parse(text: str) -> SessionScript:
    statements = []
    rings: dict = {}
    ideals: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line != line.lstrip():
            raise ParseError("statements must start in column 1", lineno, 1)
        head = line.split(None, 1)[0]
        if head == "field":
            statements.append(_parse_field(line, lineno))
        elif head == "ring":
            decl = _parse_ring(line, lineno)
            if decl.name in rings or decl.name in ideals:
                raise ParseError(f"{decl.name!r} already declared", lineno, 6)
            rings[decl.name] = decl
            statements.append(decl)
        elif head == "ideal":
            decl = _parse_ideal(line, lineno, rings)
            if decl.name in rings or decl.name in ideals:
                raise ParseError(f"{decl.name!r} already declared", lineno, 7)
            ideals[decl.name] = decl
            statements.append(decl)
        else:
            statements.append(_parse_command(line, lineno, rings, ideals))
    return SessionScript(tuple(statements))


def parse_filtration(token: str) -> tuple[str, str]:
    """'closure(I)' -> ('closure', 'I'); 'I' or 'adic(I)' -> ('adic', 'I')."""
    m = _FILT.match(token)
    if m.group(3):
        return "adic", m.group(3)
    return m.group(1), m.group(2)
