"""Safe closed-form expressions for nets, coefficients and functions.

Expressions are ordinary Python arithmetic over a fixed vocabulary: the
variables ``eps``, ``rho``, ``n``, ``x``, ``w``, ``z``, ``K`` plus whatever the
caller declares, the constants ``pi``, ``E``, ``I`` and a handful of mpmath
functions.  Anything else (attributes, subscripts, lambdas, comprehensions)
is rejected at parse time, with the column of the offending node.
"""

from __future__ import annotations

import ast
from typing import Any, Callable, Iterable

DEFAULT_VARIABLES = ("eps", "rho", "n", "x", "w", "z", "K")

FUNCTIONS = (
    "log", "exp", "sqrt", "sin", "cos", "tan", "sinh", "cosh", "tanh",
    "factorial", "gamma", "loggamma", "erf", "re", "im", "conj", "fabs",
    "floor", "ceil",
)
CONSTANTS = ("pi", "E", "I")

_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load,
    ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub,
    ast.UAdd, ast.Mod, ast.FloorDiv, ast.IfExp, ast.Compare, ast.Lt, ast.LtE,
    ast.Gt, ast.GtE, ast.Eq, ast.NotEq, ast.BoolOp, ast.And, ast.Or,
)


class ExprError(ValueError):
    """Expression outside the accepted vocabulary."""


class Expr:
    """A validated expression, callable against an mpmath context."""

    def __init__(self, source: str, variables: Iterable[str] = DEFAULT_VARIABLES):
        self.source = str(source).strip()
        self.variables = tuple(variables)
        try:
            tree = ast.parse(self.source, mode="eval")
        except SyntaxError as exc:
            raise ExprError(f"cannot parse {self.source!r}: {exc.msg}") from exc
        allowed_names = set(self.variables) | set(FUNCTIONS) | set(CONSTANTS)
        for node in ast.walk(tree):
            if not isinstance(node, _ALLOWED_NODES):
                col = getattr(node, "col_offset", 0)
                raise ExprError(
                    f"{type(node).__name__} not allowed at column {col} in {self.source!r}"
                )
            if isinstance(node, ast.Name) and node.id not in allowed_names:
                raise ExprError(f"unknown name {node.id!r} in {self.source!r}")
            if isinstance(node, ast.Call) and not (
                isinstance(node.func, ast.Name) and node.func.id in FUNCTIONS
            ):
                raise ExprError(f"only plain function calls allowed in {self.source!r}")
            if isinstance(node, ast.Constant) and not isinstance(
                node.value, (int, float, complex)
            ):
                raise ExprError(f"literal {node.value!r} not allowed in {self.source!r}")
        self.names = {n.id for n in ast.walk(tree) if isinstance(n, ast.Name)}
        self._code = compile(tree, "<expr>", "eval")

    def __repr__(self) -> str:
        return f"Expr({self.source!r})"

    def uses(self, name: str) -> bool:
        return name in self.names

    def __call__(self, m: Any, **values: Any) -> Any:
        missing = [v for v in self.variables if v in self.names and v not in values]
        if missing:
            raise ExprError(f"{self.source!r} needs values for {missing}")
        namespace = _namespace(m)
        namespace.update(values)
        return eval(self._code, {"__builtins__": {}}, namespace)


def _namespace(m: Any) -> dict[str, Any]:
    ns: dict[str, Any] = {name: getattr(m, name) for name in FUNCTIONS if hasattr(m, name)}
    ns["fabs"] = m.fabs
    ns["pi"] = m.pi
    ns["E"] = m.e
    ns["I"] = m.mpc(0, 1)
    return ns


def compile_expr(source: str | Expr, variables: Iterable[str] = DEFAULT_VARIABLES) -> Expr:
    if isinstance(source, Expr):
        return source
    return Expr(source, variables)


def as_callable(source: str | Expr | Callable, variables: Iterable[str]) -> Callable:
    """Wrap an expression as ``f(m, **values)``; callables pass through."""
    if callable(source) and not isinstance(source, Expr):
        return source
    return compile_expr(source, variables)
