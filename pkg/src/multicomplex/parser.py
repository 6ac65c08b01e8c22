"""
Recursive-descent parser and evaluator for multicomplex expressions.

Grammar, lowest precedence first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := NUMBER | UNIT | EPS | NAME '(' args ')' | '(' expr ')'

``UNIT`` is a run such as ``i1`` or ``i1i2i3`` (digits are read greedily, so
``i12`` is the twelfth principal unit); ``EPS`` is ``ε<k>``, shorthand for
``eps(k)``. ``·`` is accepted as a multiplication sign so rendered output
parses back. Function calls: ``conj(e, [k, ...])``, ``norm(e)``,
``proj(e, k)``, ``inv(e)``, ``lambda(e)``, ``gamma(j)``, ``gammap(j)``,
``eps(k)``. Idempotent indices in ``proj`` and ``eps`` are 1-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from . import core
from .core import ConjugationMask, Multicomplex
from .errors import IndexRangeError, LevelError, MulticomplexError, NullConeError
from .idempotent import (
    IdempotentRep,
    epsilon,
    from_idempotent,
    gamma,
    gamma_prime,
    invert,
    mnorm,
    to_idempotent,
)

__all__ = [
    "ParseError",
    "UnitLevelError",
    "parse",
    "evaluate",
    "parse_and_eval",
    "mentions_idempotents",
]


class ParseError(MulticomplexError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnitLevelError(ParseError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Unit:
    mask: int
    sign: int = 1


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple


Node = Union[Num, Unit, Neg, BinOp, Pow, Call]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<unit>(?:i\d+)+)(?![A-Za-z_])
  | (?P<eps>ε\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),\[\]·−])
    """,
    re.VERBOSE,
)

_FUNCTIONS = {"conj", "norm", "proj", "inv", "lambda", "gamma", "gammap", "eps"}
_INT_ARGS = {"gamma", "gammap", "eps"}


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "op":
                text = {"·": "*", "−": "-"}.get(text, text)
            tokens.append((kind, text, pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source, level):
        self.tokens = _tokenize(source)
        self.i = 0
        self.level = level

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, got, pos = self.take()
        if got != text or kind not in ("op",):
            raise ParseError(f"expected {text!r}, found {got or 'end of input'!r}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            return Pow(base, sign * self.integer())
        return base

    def integer(self):
        kind, text, pos = self.take()
        if kind != "num" or not text.isdigit():
            raise ParseError(f"expected an integer, found {text or 'end of input'!r}", pos)
        return int(text)

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "unit":
            return Unit(*self.unit_mask(text, pos))
        if kind == "eps":
            return Call("eps", (int(text[1:]),))
        if kind == "name":
            return self.call(text, pos)
        if (kind, text) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)

    def unit_mask(self, text, pos):
        """Bitmask and sign of a juxtaposed unit run; ``i0`` is 1."""
        mask, sign = 0, 1
        for digits in re.findall(r"\d+", text):
            k = int(digits)
            if k > self.level:
                raise UnitLevelError(f"unit i{k} exceeds level {self.level}", pos)
            if k == 0:
                continue
            bit = 1 << (k - 1)
            if mask & bit:
                sign = -sign
            mask ^= bit
        return mask, sign

    def call(self, name, pos):
        if name not in _FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", pos)
        self.expect("(")
        if name in _INT_ARGS:
            args = (self.integer(),)
        elif name == "conj":
            inner = self.expr()
            self.expect(",")
            args = (inner, self.unit_list())
        elif name == "proj":
            inner = self.expr()
            self.expect(",")
            args = (inner, self.integer())
        else:
            args = (self.expr(),)
        self.expect(")")
        return Call(name, args)

    def unit_list(self):
        self.expect("[")
        units = []
        if self.peek()[:2] != ("op", "]"):
            units.append(self.unit_number())
            while self.peek()[:2] == ("op", ","):
                self.take()
                units.append(self.unit_number())
        self.expect("]")
        return tuple(units)

    def unit_number(self):
        pos = self.peek()[2]
        k = self.integer()
        if not 1 <= k <= self.level:
            raise UnitLevelError(f"unit i{k} exceeds level {self.level}", pos)
        return k


def parse(source, level):
    """Parse ``source`` into an expression tree for numbers of the given level."""
    level = core.check_level(level)
    return _Parser(source, level).parse()


def mentions_idempotents(node):
    """True when the tree refers to the canonical idempotents through ``eps``."""
    if isinstance(node, Call):
        return node.name == "eps" or any(
            mentions_idempotents(a) for a in node.args if not isinstance(a, (int, tuple))
        )
    if isinstance(node, Neg):
        return mentions_idempotents(node.operand)
    if isinstance(node, BinOp):
        return mentions_idempotents(node.left) or mentions_idempotents(node.right)
    if isinstance(node, Pow):
        return mentions_idempotents(node.base)
    return False


# evaluation -----------------------------------------------------------------


def _components(x):
    """Idempotent components; level 1 is its own single complex component."""
    if x.level == 1:
        return np.array([complex(x.coeffs[0], x.coeffs[1])])
    return to_idempotent(x).comps


def _from_components(level, comps):
    if level == 1:
        return Multicomplex(1, [comps[0].real, comps[0].imag])
    return from_idempotent(IdempotentRep(level, comps))


def _mul(a, b):
    if a.level == 1:
        return core.mul_standard(a, b)
    return _from_components(a.level, _components(a) * _components(b))


def _inv(a, tol):
    if a.level == 1:
        z = _components(a)
        if abs(z[0]) <= tol:
            raise NullConeError("not invertible: components [0] vanish (0-based)", [0])
        return _from_components(1, 1.0 / z)
    return from_idempotent(invert(to_idempotent(a), tol))


def _check_index(name, k, upper):
    if not 1 <= k <= upper:
        raise IndexRangeError(f"{name}({k}) needs 1 <= index <= {upper}")


def evaluate(node, level, tol=core.DEFAULT_TOL):
    """Evaluate an expression tree to a standard-basis number."""
    ev = lambda n: evaluate(n, level, tol)  # noqa: E731
    if isinstance(node, Num):
        return core.real(level, node.value)
    if isinstance(node, Unit):
        return core.scale(core.unit(level, node.mask), node.sign)
    if isinstance(node, Neg):
        return -ev(node.operand)
    if isinstance(node, BinOp):
        left, right = ev(node.left), ev(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return _mul(left, right)
        return _mul(left, _inv(right, tol))
    if isinstance(node, Pow):
        base = ev(node.base)
        if node.exponent < 0:
            base = _inv(base, tol)
        return _from_components(level, _components(base) ** abs(node.exponent))
    return _call(node, level, tol)


def _call(node, level, tol):
    name, args = node.name, node.args
    half = 1 if level == 1 else 1 << (level - 1)
    if name in ("gamma", "gammap"):
        j = args[0]
        if level < 2 or not 2 <= j <= level:
            raise IndexRangeError(f"{name}({j}) needs 2 <= j <= level (level {level})")
        return (gamma if name == "gamma" else gamma_prime)(level, j)
    if name == "eps":
        if level < 2:
            raise LevelError("eps(k) needs level >= 2")
        _check_index(name, args[0], half)
        return epsilon(level, args[0] - 1)
    x = evaluate(args[0], level, tol)
    if name == "conj":
        return core.conjugate(x, ConjugationMask.from_units(level, args[1]))
    if name == "lambda":
        return core.conjugate(x, ConjugationMask.full(level))
    if name == "inv":
        return _inv(x, tol)
    if name == "norm":
        if level == 1:
            return core.real(1, abs(_components(x)[0]))
        return from_idempotent(mnorm(to_idempotent(x)))
    if name == "proj":
        _check_index(name, args[1], half)
        z = _components(x)[args[1] - 1]
        out = np.zeros(1 << level)
        out[0], out[1] = z.real, z.imag
        return Multicomplex(level, out)
    raise MulticomplexError(f"unknown function {name!r}")


def parse_and_eval(source, level, tol=core.DEFAULT_TOL):
    return evaluate(parse(source, level), level, tol)
