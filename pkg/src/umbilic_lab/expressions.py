"""Minimal arithmetic expression grammar for custom metrics and surfaces.

Supported: + - * / ^  sin cos exp sqrt, numeric literals, variables
x0 ... x{N-1}.  Expressions parse to a small AST that evaluates on numpy
arrays and differentiates symbolically, so expression-defined maps get
analytic Jacobians and Hessians.
"""

import re

import numpy as np

from .errors import ExpressionError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|([A-Za-z_]\w*)|(\*\*|[()+\-*/^,]))")

FUNCTIONS = {
    "sin": (np.sin, lambda a: ("cos", a)),
    "cos": (np.cos, lambda a: ("neg", ("sin", a))),
    "exp": (np.exp, lambda a: ("exp", a)),
    "sqrt": (np.sqrt, None),  # derivative handled specially
}


def tokenize(text):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExpressionError(f"cannot tokenize {text[pos:]!r}", expression=text)
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", float(text[m.start():m.end()].strip())))
        elif ident is not None:
            tokens.append(("ident", ident))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r}", expression=self.text)

    def parse(self):
        node = self.expr()
        if self.i != len(self.tokens):
            raise ExpressionError("trailing input", expression=self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        # unary minus binds looser than ^, so -x0^2 means -(x0^2)
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.factor())
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        node = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            return ("pow", node, self.factor())  # right-associative
        return node

    def primary(self):
        kind, val = self.take()
        if kind == "num":
            return ("const", val)
        if kind == "ident":
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return (val, arg)
            m = re.fullmatch(r"x(\d+)", val)
            if not m:
                raise ExpressionError(f"unknown identifier {val!r}", expression=self.text)
            return ("var", int(m.group(1)))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError("unexpected token", expression=self.text, token=val)


def parse(text):
    return _Parser(tokenize(text), text).parse()


def free_vars(node):
    op = node[0]
    if op == "const":
        return set()
    if op == "var":
        return {node[1]}
    return set().union(*(free_vars(c) for c in node[1:]))


def evaluate(node, x):
    """Evaluate on x of shape (..., nvars); returns shape (...)."""
    op = node[0]
    if op == "const":
        return np.broadcast_to(np.asarray(node[1]), np.asarray(x).shape[:-1]).astype(float)
    if op == "var":
        return np.asarray(x, dtype=float)[..., node[1]]
    if op == "neg":
        return -evaluate(node[1], x)
    if op in FUNCTIONS:
        return FUNCTIONS[op][0](evaluate(node[1], x))
    a = evaluate(node[1], x)
    b = evaluate(node[2], x)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise ExpressionError(f"bad node {op!r}")


def _is_const(node, value=None):
    return node[0] == "const" and (value is None or node[1] == value)


def _simp(node):
    """Light constant folding; keeps derivative trees small."""
    op = node[0]
    if op in ("const", "var"):
        return node
    kids = tuple(_simp(c) for c in node[1:])
    node = (op,) + kids
    if all(_is_const(k) for k in kids):
        return ("const", float(evaluate(node, np.zeros(1))))
    if op == "add":
        if _is_const(kids[0], 0.0):
            return kids[1]
        if _is_const(kids[1], 0.0):
            return kids[0]
    if op == "sub" and _is_const(kids[1], 0.0):
        return kids[0]
    if op == "mul":
        if _is_const(kids[0], 0.0) or _is_const(kids[1], 0.0):
            return ("const", 0.0)
        if _is_const(kids[0], 1.0):
            return kids[1]
        if _is_const(kids[1], 1.0):
            return kids[0]
    if op == "div" and _is_const(kids[0], 0.0):
        return ("const", 0.0)
    if op == "pow":
        if _is_const(kids[1], 1.0):
            return kids[0]
        if _is_const(kids[1], 0.0):
            return ("const", 1.0)
    if op == "neg" and _is_const(kids[0]):
        return ("const", -kids[0][1])
    return node


def diff(node, var):
    """Symbolic derivative d(node)/d(x_var), constant-folded."""
    return _simp(_diff(node, var))


def _diff(node, var):
    op = node[0]
    if op == "const":
        return ("const", 0.0)
    if op == "var":
        return ("const", 1.0 if node[1] == var else 0.0)
    if op == "neg":
        return ("neg", _diff(node[1], var))
    if op == "add" or op == "sub":
        return (op, _diff(node[1], var), _diff(node[2], var))
    if op == "mul":
        a, b = node[1], node[2]
        return ("add", ("mul", _diff(a, var), b), ("mul", a, _diff(b, var)))
    if op == "div":
        a, b = node[1], node[2]
        return ("div",
                ("sub", ("mul", _diff(a, var), b), ("mul", a, _diff(b, var))),
                ("mul", b, b))
    if op == "pow":
        a, b = node[1], node[2]
        if _is_const(b):
            # d(a^c) = c * a^(c-1) * a'
            return ("mul", ("mul", b, ("pow", a, ("const", b[1] - 1.0))),
                    _diff(a, var))
        # general a^b = exp(b log a): not in the grammar; reject
        raise ExpressionError("only constant exponents are differentiable")
    if op == "sqrt":
        a = node[1]
        return ("div", _diff(a, var), ("mul", ("const", 2.0), ("sqrt", a)))
    if op in FUNCTIONS:
        outer = FUNCTIONS[op][1](node[1])
        return ("mul", outer, _diff(node[1], var))
    raise ExpressionError(f"bad node {op!r}")


class ExpressionMap:
    """Vector-valued map R^nvars -> R^k from component expressions.

    Jacobian and Hessian come from symbolic differentiation, so the map
    counts as analytically differentiable.
    """

    def __init__(self, component_texts, nvars):
        self.nvars = nvars
        self.components = [parse(t) if isinstance(t, str) else t for t in component_texts]
        for c in self.components:
            bad = [v for v in free_vars(c) if v >= nvars]
            if bad:
                raise ExpressionError("variable index out of range", indices=bad)
        self._grads = [[diff(c, v) for v in range(nvars)] for c in self.components]
        self._hess = [[[diff(g, v) for v in range(nvars)] for g in grad]
                      for grad in self._grads]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.stack([evaluate(c, x) for c in self.components], axis=-1)

    def jacobian(self, x):
        x = np.asarray(x, dtype=float)
        return np.stack([np.stack([evaluate(g, x) for g in grad], axis=-1)
                         for grad in self._grads], axis=-2)

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        rows = []
        for hc in self._hess:
            rows.append(np.stack(
                [np.stack([evaluate(e, x) for e in r], axis=-1) for r in hc],
                axis=-2))
        return np.stack(rows, axis=-3)
