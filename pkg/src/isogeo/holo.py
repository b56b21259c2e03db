"""A small language of holomorphic expressions in ``z``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-'? base ('^' int)?
    base   := 'z' | 'i' | number | number 'i' | '(' expr ')' | ident '(' expr ')'
    ident  := exp | sin | cos | log

There is deliberately no way to write a conjugate, so every expression is
holomorphic away from its poles.  ``log`` is the principal branch; crossing
the cut along the negative real axis is the caller's problem.

Expressions are evaluated with numpy, so ``evaluate`` accepts whole grids.
"""
import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, PoleError

FUNCTIONS = ("exp", "sin", "cos", "log")


class Expr:
    """Base class of expression nodes (immutable, structurally comparable)."""

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def __eq__(self, other):
        return isinstance(other, Const) and complex(self.value) == complex(other.value)

    def __hash__(self):
        return hash(complex(self.value))


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr


Z = Var()


def Add(a, b):
    return BinOp("+", a, b)


def Sub(a, b):
    return BinOp("-", a, b)


def Mul(a, b):
    return BinOp("*", a, b)


def Div(a, b):
    return BinOp("/", a, b)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].lstrip()
            if not rest:
                break
            bad = n - len(rest)
            raise ParseError(_offset(text, bad), "a number, 'z', 'i', a function, or an operator", text)
        if m.group("number") is not None:
            start = m.start("number")
            value = float(m.group("number"))
            kind = "imag" if m.group("imag") else "number"
            tokens.append((kind, value, start))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


def _offset(text, char_index):
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected, tok=None):
        tok = tok or self.peek()
        raise ParseError(_offset(self.text, tok[2]), expected, self.text)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"'{op}'")
        return self.take()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("an operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        negate = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            negate = True
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "number" or tok[1] != int(tok[1]) or not re.fullmatch(
                    r"\d+", self._raw(tok)):
                self.fail("a non-negative integer exponent")
            self.take()
            node = Pow(node, int(tok[1]))
        return Neg(node) if negate else node

    def _raw(self, tok):
        m = _TOKEN.match(self.text, tok[2])
        return m.group("number")

    def base(self):
        tok = self.peek()
        kind, value, _ = tok
        if kind == "number":
            self.take()
            return Const(value)
        if kind == "imag":
            self.take()
            return Const(1j * value)
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "name":
            if value == "z":
                self.take()
                return Z
            if value == "i":
                self.take()
                return Const(1j)
            if value in FUNCTIONS:
                self.take()
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Func(value, arg)
            self.fail(f"'z', 'i' or one of {', '.join(FUNCTIONS)} (unknown identifier {value!r})")
        self.fail("'z', 'i', a number, '(' or a function call")


def parse(text):
    """Parse an expression; raises :class:`ParseError` with a byte offset."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_real(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _fmt_const(c):
    c = complex(c)
    if c.imag == 0:
        s = _fmt_real(c.real)
        return s if c.real >= 0 else f"({s})"
    if c.real == 0 and c.imag > 0:
        return "i" if c.imag == 1 else f"{_fmt_real(c.imag)}i"
    return f"({_fmt_real(c.real)}+{_fmt_real(c.imag)}i)".replace("+-", "-")


def _is_base(node):
    if isinstance(node, Const):
        c = complex(node.value)
        return c.real >= 0 and (c.imag == 0 or (c.real == 0 and c.imag > 0))
    return isinstance(node, (Var, Func))


def _base_str(node):
    s = pretty(node)
    return s if _is_base(node) else f"({s})"


def pretty(node):
    """Render ``node`` so that ``parse(pretty(node)) == node``.

    Exact for every tree produced by :func:`parse` or :func:`differentiate`.
    """
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Func):
        return f"{node.name}({pretty(node.arg)})"
    if isinstance(node, Pow):
        return f"{_base_str(node.base)}^{node.exponent}"
    if isinstance(node, Neg):
        arg = node.arg
        inner = pretty(arg) if isinstance(arg, Pow) else _base_str(arg)
        return f"-{inner}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = pretty(node.left)
        if isinstance(node.left, BinOp) and _PREC[node.left.op] < p:
            left = f"({left})"
        right = pretty(node.right)
        if isinstance(node.right, BinOp) and _PREC[node.right.op] <= p:
            right = f"({right})"
        if node.op in "+-":
            return f"{left} {node.op} {right}"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation

def evaluate(node, z):
    """Evaluate ``node`` at ``z`` (scalar or array).

    Raises :class:`PoleError` carrying the offending ``z`` on division by
    zero or ``log(0)``.
    """
    z = np.asarray(z, dtype=complex)
    out = _eval(node, z)
    out = np.broadcast_to(out, z.shape).astype(complex)
    return out if out.ndim else complex(out)


def _first(z, mask):
    if z.ndim == 0:
        return complex(z)
    return complex(np.broadcast_to(z, mask.shape)[mask][0])


def _eval(node, z):
    if isinstance(node, Var):
        return z
    if isinstance(node, Const):
        return np.complex128(node.value)
    if isinstance(node, Neg):
        return -_eval(node.arg, z)
    if isinstance(node, Pow):
        base = _eval(node.base, z)
        return base ** node.exponent if node.exponent else np.ones_like(base)
    if isinstance(node, Func):
        arg = _eval(node.arg, z)
        if node.name == "log":
            bad = np.asarray(arg == 0)
            if bad.any():
                raise PoleError(_first(z, bad), "log of zero")
        return getattr(np, node.name)(arg)
    if isinstance(node, BinOp):
        a = _eval(node.left, z)
        b = _eval(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        bad = np.asarray(b == 0)
        if bad.any():
            raise PoleError(_first(z, bad), "division by zero")
        return a / b
    raise TypeError(f"not an expression node: {node!r}")


def compile_expr(node):
    """Return ``f(z) = evaluate(node, z)``."""
    def f(z):
        return evaluate(node, z)
    f.expr = node
    return f


# ---------------------------------------------------------------------------
# differentiation

ZERO = Const(0.0)
ONE = Const(1.0)


def _is(node, value):
    return isinstance(node, Const) and complex(node.value) == value


def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return Neg(b)
    return Sub(a, b)


def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Mul(a, b)


def _neg(a):
    return ZERO if _is(a, 0) else Neg(a)


def differentiate(node):
    """Symbolic d/dz with light simplification of zeros and ones."""
    if isinstance(node, Var):
        return ONE
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Neg):
        return _neg(differentiate(node.arg))
    if isinstance(node, Pow):
        n = node.exponent
        if n == 0:
            return ZERO
        inner = differentiate(node.base)
        if n == 1:
            return inner
        power = node.base if n == 2 else Pow(node.base, n - 1)
        return _mul(_mul(Const(float(n)), power), inner)
    if isinstance(node, Func):
        inner = differentiate(node.arg)
        if node.name == "exp":
            outer = node
        elif node.name == "sin":
            outer = Func("cos", node.arg)
        elif node.name == "cos":
            outer = Neg(Func("sin", node.arg))
        else:
            return _mul(inner, Div(ONE, node.arg)) if not _is(inner, 1) else Div(ONE, node.arg)
        if _is(inner, 1):
            return outer
        return _mul(inner, outer)
    if isinstance(node, BinOp):
        a, b = node.left, node.right
        da, db = differentiate(a), differentiate(b)
        if node.op == "+":
            return _add(da, db)
        if node.op == "-":
            return _sub(da, db)
        if node.op == "*":
            return _add(_mul(da, b), _mul(a, db))
        # quotient rule
        num = _sub(_mul(da, b), _mul(a, db))
        if _is(num, 0):
            return ZERO
        return Div(num, Pow(b, 2))
    raise TypeError(f"not an expression node: {node!r}")


def as_expr(value):
    """Accept an expression, its source text, or a number."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return parse(value)
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        c = complex(value)
        if c.real < 0 and c.imag == 0:
            return Neg(Const(-c.real))
        return Const(c)
    raise TypeError(f"cannot interpret {value!r} as an expression")


def node_count(node):
    if isinstance(node, (Var, Const)):
        return 1
    if isinstance(node, (Neg, Pow, Func)):
        child = node.arg if not isinstance(node, Pow) else node.base
        return 1 + node_count(child)
    return 1 + node_count(node.left) + node_count(node.right)

