"""Exact coefficient fields, monomial orders and sparse polynomials.

Monomials are exponent tuples. A :class:`Polynomial` is an immutable
mapping from exponent tuples to nonzero coefficients, bound to a
:class:`PolyRing` that fixes the variables, the field and the order.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Mapping

from .errors import ContextError, DomainError, ParseError

DEFAULT_PRIME = 32003


class PrimeField:
    """The prime field F_p; elements are ints in [0, p)."""

    is_prime_field = True

    def __init__(self, p: int = DEFAULT_PRIME):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise DomainError(f"{p} is not a prime")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    @property
    def name(self):
        return f"Fp {self.p}"

    def norm(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def parse(self, text: str):
        if "/" in text:
            raise ParseError(f"rational literal {text!r} outside rational mode")
        return int(text) % self.p

    def random(self, rng: random.Random, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.randrange(lo, self.p)

    def to_str(self, x) -> str:
        # symmetric representative reads better
        return str(x - self.p if x > self.p // 2 else x)


class RationalField:
    """The rationals, with Fraction (or int) elements."""

    is_prime_field = False
    characteristic = 0

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    @property
    def name(self):
        return "QQ"

    def norm(self, x):
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / x)

    def parse(self, text: str):
        return self.norm(Fraction(text))

    def random(self, rng: random.Random, nonzero=False):
        while True:
            v = rng.randint(-20, 20)
            if v or not nonzero:
                return v

    def to_str(self, x) -> str:
        return str(x)


QQ = RationalField()


def make_field(spec) -> PrimeField | RationalField:
    """Build a field from 'QQ', 'qq', 'fp32003', 'Fp 32003', an int prime or a field."""
    if isinstance(spec, (PrimeField, RationalField)):
        return spec
    if spec is None:
        return PrimeField()
    if isinstance(spec, int):
        return PrimeField(spec)
    s = str(spec).strip().lower().replace(" ", "")
    if s in ("qq", "q", "rationals"):
        return QQ
    m = re.fullmatch(r"(?:fp|gf)?(\d+)", s)
    if m:
        return PrimeField(int(m.group(1)))
    raise ParseError(f"unknown field {spec!r}")


class MonomialOrder:
    """A monomial order on exponent vectors.

    kinds: ``grevlex`` (weighted by the ring grading), ``lex``, ``elim``
    (block order; each block compared by weighted grevlex, earlier blocks
    dominate) and ``wdeg`` (an explicit weight vector refined by grevlex).
    """

    KINDS = ("grevlex", "lex", "elim", "wdeg")

    def __init__(self, kind="grevlex", blocks: tuple[int, ...] | None = None,
                 weights: tuple[int, ...] | None = None):
        if kind not in self.KINDS:
            raise DomainError(f"unknown monomial order {kind!r}")
        if kind == "elim" and not blocks:
            raise DomainError("elimination order needs block sizes")
        if kind == "wdeg" and not weights:
            raise DomainError("weighted order needs a weight vector")
        self.kind = kind
        self.blocks = tuple(blocks) if blocks else None
        self.weights = tuple(weights) if weights else None

    def __repr__(self):
        extra = ""
        if self.blocks:
            extra = f", blocks={self.blocks}"
        if self.weights:
            extra += f", weights={self.weights}"
        return f"MonomialOrder({self.kind!r}{extra})"

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.blocks == other.blocks and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.blocks, self.weights))

    @property
    def degree_first(self) -> bool:
        return self.kind in ("grevlex", "wdeg")

    def key_function(self, grading: tuple[int, ...]):
        """Return a function mapping an exponent tuple to a sort key.

        Larger keys are larger monomials; every key is a tuple of ints
        whose first entry is a degree when ``degree_first`` holds.
        """
        n = len(grading)
        if self.kind == "lex":
            return tuple
        if self.kind in ("grevlex", "wdeg"):
            w = self.weights if self.kind == "wdeg" else grading
            if len(w) != n:
                raise ContextError("weight vector length differs from variable count")
            idx = tuple(range(n - 1, -1, -1))

            def key(e, w=w, idx=idx):
                return (sum(a * b for a, b in zip(w, e)),) + tuple(-e[i] for i in idx)
            return key
        # block elimination order
        if sum(self.blocks) != n:
            raise ContextError("block sizes do not add up to the variable count")
        spans = []
        start = 0
        for b in self.blocks:
            spans.append((start, start + b))
            start += b

        def key(e, spans=spans, g=grading):
            out = []
            for lo, hi in spans:
                out.append(sum(g[i] * e[i] for i in range(lo, hi)))
                out.extend(-e[i] for i in range(hi - 1, lo - 1, -1))
            return tuple(out)
        return key

    def compare(self, a, b, grading=None) -> int:
        """Three-way comparison of exponent vectors: -1, 0 or 1."""
        if len(a) != len(b):
            raise ContextError("exponent vectors of different lengths")
        key = self.key_function(tuple(grading) if grading else (1,) * len(a))
        ka, kb = key(tuple(a)), key(tuple(b))
        return (ka > kb) - (ka < kb)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def order_compare(a, b, order: MonomialOrder = GREVLEX, grading=None) -> int:
    return order.compare(a, b, grading)


def monomial_divides(a, b) -> bool:
    if len(a) != len(b):
        raise ContextError("exponent vectors of different lengths")
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(b, a) -> tuple[int, ...]:
    """b / a; a must divide b."""
    if not monomial_divides(a, b):
        raise DomainError(f"{a} does not divide {b}")
    return tuple(y - x for x, y in zip(a, b))


def monomial_lcm(a, b) -> tuple[int, ...]:
    if len(a) != len(b):
        raise ContextError("exponent vectors of different lengths")
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_ops(a, b) -> dict:
    divides = monomial_divides(a, b)
    return {
        "divides": divides,
        "quotient": monomial_quotient(b, a) if divides else None,
        "lcm": monomial_lcm(a, b),
    }


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class PolyRing:
    """k[x_1..x_n] with grading weights and a monomial order."""

    def __init__(self, variables: Iterable[str], field=None, order: MonomialOrder = GREVLEX,
                 weights: Iterable[int] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ContextError("repeated variable name")
        for v in self.variables:
            if not _IDENT.fullmatch(v):
                raise ContextError(f"bad variable name {v!r}")
        self.field = make_field(field)
        self.order = order
        self.nvars = len(self.variables)
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        if len(self.weights) != self.nvars or any(w < 1 for w in self.weights):
            raise ContextError("grading weights must be positive, one per variable")
        self.key = order.key_function(self.weights)
        self._index = {v: i for i, v in enumerate(self.variables)}

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.field!r}, {self.order!r})"

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.variables == other.variables
                and self.field == other.field and self.order == other.order
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.variables, self.field, self.order, self.weights))

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.field, order, self.weights)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"unknown variable {name!r}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.norm(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): coeff})

    def degree_of(self, e) -> int:
        return sum(w * a for w, a in zip(self.weights, e))

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def random_element(self, rng: random.Random, degree: int, terms: int | None = None,
                       homogeneous=False) -> "Polynomial":
        mons = [e for e in _cartesian(range(degree + 1), repeat=self.nvars)
                if (sum(e) == degree if homogeneous else sum(e) <= degree)]
        if terms is not None and terms < len(mons):
            mons = rng.sample(mons, terms)
        return Polynomial(self, {e: self.field.random(rng) for e in mons})


class Polynomial:
    """Immutable sparse polynomial in canonical form."""

    __slots__ = ("ring", "_terms", "_lm", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple, object]):
        self.ring = ring
        norm = ring.field.norm
        clean = {}
        for e, c in terms.items():
            c = norm(c)
            if c:
                if len(e) != ring.nvars:
                    raise ContextError("exponent vector length differs from variable count")
                clean[tuple(e)] = c
        self._terms = clean
        self._lm = None
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._lm = None
        p._hash = None
        return p

    # ---- accessors
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list[tuple[object, tuple]]:
        """(coefficient, exponents) pairs in strictly decreasing order."""
        key = self.ring.key
        return [(self._terms[e], e) for e in sorted(self._terms, key=key, reverse=True)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def leading_monomial(self) -> tuple:
        if self._lm is None:
            if not self._terms:
                raise DomainError("zero polynomial has no leading term")
            self._lm = max(self._terms, key=self.ring.key)
        return self._lm

    @property
    def leading_coefficient(self):
        return self._terms[self.leading_monomial]

    def leading_term(self) -> tuple[object, tuple]:
        return self.leading_coefficient, self.leading_monomial

    def degree(self) -> int:
        """Weighted total degree (max over terms); -1 for zero."""
        if not self._terms:
            return -1
        return max(self.ring.degree_of(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree_of(e) for e in self._terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_coefficient(self):
        return self._terms.get((0,) * self.ring.nvars, 0)

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        c = self.ring.field.inv(self.leading_coefficient)
        return self.scale(c)

    # ---- arithmetic
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContextError("polynomials from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        norm = self.ring.field.norm
        for e, c in other._terms.items():
            v = norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.norm
        return Polynomial._raw(self.ring, {e: norm(-c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        norm = self.ring.field.norm
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.ring, out) if out else self.ring.zero()

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial power must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        norm = self.ring.field.norm
        c = norm(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: norm(v * c) for e, v in self._terms.items()})

    def mul_monomial(self, exps, coeff=1) -> "Polynomial":
        norm = self.ring.field.norm
        coeff = norm(coeff)
        if not coeff:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {tuple(a + b for a, b in zip(e, exps)): norm(c * coeff)
                                           for e, c in self._terms.items()})

    def diff(self, var) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial(self.ring, out)

    def substitute(self, images: list["Polynomial"]) -> "Polynomial":
        """Ring map sending variable i to images[i] (images may live in another ring)."""
        if len(images) != self.ring.nvars:
            raise ContextError("one image per variable required")
        target = images[0].ring if images else self.ring
        result = target.zero()
        powers: dict = {}
        for e, c in self._terms.items():
            term = target.const(c)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in powers:
                        powers[key] = images[i] ** a
                    term = term * powers[key]
            result = result + term
        return result

    def map_to(self, ring: PolyRing, positions: list[int]) -> "Polynomial":
        """Re-embed into ``ring`` sending variable i to variable positions[i]."""
        out = {}
        for e, c in self._terms.items():
            f = [0] * ring.nvars
            for i, a in enumerate(e):
                f[positions[i]] += a
            out[tuple(f)] = c
        return Polynomial(ring, out)

    # ---- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def format_monomial(e, variables) -> str:
    parts = []
    for v, a in zip(variables, e):
        if a == 1:
            parts.append(v)
        elif a:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    field = f.ring.field
    for c, e in f.sorted_terms():
        cs = field.to_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        mono = format_monomial(e, f.ring.variables)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``3*x^2*y - 1/2*z``-style text (also accepts ``**`` and parentheses)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1)
        num, name, op = m.groups()
        col = m.start() + (len(m.group(0)) - len(m.group(0).lstrip())) + 1
        if num is not None:
            tokens.append(("num", num, col))
        elif name is not None:
            tokens.append(("name", name, col))
        else:
            tokens.append(("op", "^" if op == "**" else op, col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    state = {"i": 0}

    def peek():
        return tokens[state["i"]]

    def take():
        t = tokens[state["i"]]
        state["i"] += 1
        return t

    def expr():
        sign = 1
        if peek()[:2] in (("op", "-"), ("op", "+")):
            sign = -1 if take()[1] == "-" else 1
        val = term()
        if sign < 0:
            val = -val
        while peek()[:2] in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = power()
        while peek()[:2] == ("op", "*"):
            take()
            val = val * power()
        return val

    def power():
        base = atom()
        if peek()[:2] == ("op", "^"):
            take()
            t = take()
            if t[0] != "num" or "/" in t[1]:
                raise ParseError("exponent must be a nonnegative integer", column=t[2])
            base = base ** int(t[1])
        return base

    def atom():
        t = take()
        kind, val, col = t
        if kind == "num":
            try:
                return ring.const(ring.field.parse(val))
            except ParseError as exc:
                raise ParseError(str(exc), column=col) from None
        if kind == "name":
            if val not in ring._index:
                raise ParseError(f"undeclared variable {val!r}", column=col)
            return ring.var(val)
        if (kind, val) == ("op", "("):
            inner = expr()
            close = take()
            if close[:2] != ("op", ")"):
                raise ParseError("expected ')'", column=close[2])
            return inner
        if (kind, val) == ("op", "-"):
            return -atom()
        raise ParseError(f"unexpected token {val!r}", column=col)

    result = expr()
    if peek()[0] != "end":
        raise ParseError(f"trailing input {peek()[1]!r}", column=peek()[2])
    return result


class VectorPolynomial:
    """Element of a free module S^rank with per-component degree shifts.

    Terms are keyed by (component, exponents).
    """

    __slots__ = ("ring", "rank", "shifts", "_terms")

    def __init__(self, ring: PolyRing, rank: int, terms: Mapping[tuple, object],
                 shifts: tuple[int, ...] | None = None):
        self.ring = ring
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        if len(self.shifts) != rank:
            raise ContextError("one degree shift per component required")
        norm = ring.field.norm
        clean = {}
        for (comp, e), c in terms.items():
            if not 0 <= comp < rank:
                raise ContextError(f"component {comp} outside rank {rank}")
            c = norm(c)
            if c:
                clean[(comp, tuple(e))] = c
        self._terms = clean

    @classmethod
    def from_polys(cls, polys: list[Polynomial], shifts=None) -> "VectorPolynomial":
        ring = polys[0].ring
        terms = {}
        for i, f in enumerate(polys):
            for e, c in f.items():
                terms[(i, e)] = c
        return cls(ring, len(polys), terms, shifts)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def component(self, i) -> Polynomial:
        return Polynomial(self.ring, {e: c for (k, e), c in self._terms.items() if k == i})

    def to_polys(self) -> list[Polynomial]:
        return [self.component(i) for i in range(self.rank)]

    def is_zero(self):
        return not self._terms

    def _key(self, mon):
        comp, e = mon
        k = self.ring.key(e)
        if self.ring.order.degree_first:
            return (k[0] + self.shifts[comp],) + k[1:] + (-comp,)
        return k + (-comp,)

    def sorted_terms(self):
        return [(self._terms[m], m[0], m[1])
                for m in sorted(self._terms, key=self._key, reverse=True)]

    def __add__(self, other: "VectorPolynomial"):
        if other.ring != self.ring or other.rank != self.rank:
            raise ContextError("vectors from different free modules")
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return VectorPolynomial(self.ring, self.rank, out, self.shifts)

    def __neg__(self):
        return VectorPolynomial(self.ring, self.rank, {m: -c for m, c in self._terms.items()},
                                self.shifts)

    def __sub__(self, other):
        return self + (-other)

    def scale_by(self, f: Polynomial) -> "VectorPolynomial":
        out: dict = {}
        for (comp, e1), c1 in self._terms.items():
            for e2, c2 in f.items():
                m = (comp, tuple(a + b for a, b in zip(e1, e2)))
                out[m] = out.get(m, 0) + c1 * c2
        return VectorPolynomial(self.ring, self.rank, out, self.shifts)

    def __eq__(self, other):
        return (isinstance(other, VectorPolynomial) and self.ring == other.ring
                and self.rank == other.rank and self._terms == other._terms)

    def __hash__(self):
        return hash((self.rank, frozenset(self._terms.items())))

    def __repr__(self):
        comps = ", ".join(str(p) for p in self.to_polys())
        return f"VectorPolynomial([{comps}])"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if f.ring != g.ring:
        raise ContextError("polynomials from different rings")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise DomainError(f"unknown operation {op!r}")
