"""Bundled benchmark problems and declarative custom problems.

Six cases are registered.  ``test1``/``test2`` are the 1D forward
verification problems (manufactured solutions, linear and nonlinear); they
reappear as ``ex1``/``ex2`` with the reduced-model defaults used by the
order-identification studies.  ``ex3`` and ``ex4`` are the 2D cases: a
source-free decay problem and a manufactured nonlinear problem with an
anisotropic diagonal diffusion tensor.

Custom problems can be loaded from a JSON file whose coefficient and source
fields are arithmetic expressions in ``x``/``y``/``t``/``u``; see
:func:`from_config`.
"""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fom import ProblemSpec
from .grid import Grid1D, Grid2D

__all__ = ["BenchmarkCase", "CASES", "get_case", "from_config", "load_config"]

PI = math.pi


@dataclass(frozen=True)
class BenchmarkCase:
    """A named problem family parameterized by the fractional order.

    ``problem(beta, ...)`` builds the full spec, including the manufactured
    source tied to that order where one exists.  ``exact`` evaluates the
    closed-form solution (``None`` when unknown).  ``pod_dim``/``deim_dim``
    and ``samples`` are the reduced-model defaults used by the published
    benchmark runs.
    """

    name: str
    dim: int
    default_n: int
    default_steps: int
    default_t_final: float
    pod_dim: int
    deim_dim: int | None
    samples: tuple[float, ...]
    problem: Callable[..., ProblemSpec]
    exact: Callable | None
    beta_star: float = 0.75

    def grid_args(self, n=None, steps=None, t_final=None) -> tuple[int, int, float]:
        return (
            self.default_n if n is None else int(n),
            self.default_steps if steps is None else int(steps),
            self.default_t_final if t_final is None else float(t_final),
        )


def _test1_problem(beta, n=63, steps=64, t_final=1.0) -> ProblemSpec:
    grid = Grid1D(0.0, 1.0, n, t_final, steps)
    gb = math.gamma(2.0 + beta)

    def source(x, t):
        return gb * t * np.sin(PI * x) + t ** (1.0 + beta) * (
            (1.0 + x) * PI**2 * np.sin(PI * x) - PI * np.cos(PI * x)
        )

    return ProblemSpec(
        grid=grid,
        beta=beta,
        diffusion=lambda x: 1.0 + x,
        source=source,
        label="test1",
    )


def _test1_exact(x, t, beta):
    return t ** (1.0 + beta) * np.sin(PI * x)


_TEST2_MU = 0.05


def _test2_profile(x):
    return 4.0 * x * (1.0 - x) * np.exp(-50.0 * (x - 0.5) ** 2)


def _test2_problem(beta, n=63, steps=64, t_final=1.0) -> ProblemSpec:
    grid = Grid1D(0.0, 1.0, n, t_final, steps)
    c_time = 4.0 * math.gamma(3.0) / math.gamma(3.0 - beta)

    def source(x, t):
        bump = np.exp(-50.0 * (x - 0.5) ** 2)
        u = 4.0 * t**2 * x * (1.0 - x) * bump
        poly = -10000.0 * x**4 + 20000.0 * x**3 - 12000.0 * x**2 + 2000.0 * x + 98.0
        return (
            np.sin(u)
            + c_time * t ** (2.0 - beta) * x * (1.0 - x) * bump
            - 4.0 * _TEST2_MU * t**2 * poly * bump
        )

    return ProblemSpec(
        grid=grid,
        beta=beta,
        diffusion=_TEST2_MU,
        source=source,
        reaction=np.sin,
        reaction_deriv=np.cos,
        label="test2",
    )


def _test2_exact(x, t, beta):
    return t**2 * _test2_profile(x)


def _ex3_problem(beta, n=63, steps=64, t_final=1.0) -> ProblemSpec:
    grid = Grid2D(-1.0, 1.0, -1.0, 1.0, n, t_final, steps)
    return ProblemSpec(
        grid=grid,
        beta=beta,
        diffusion=1.0,
        initial=lambda x, y: (x - 1.0) * (x + 1.0) * (y - 1.0) * (y + 1.0),
        label="ex3",
    )


def _ex4_time_factor(t, beta):
    return t ** (2.0 + beta) + t**2 + 1.0


def _ex4_problem(beta, n=63, steps=64, t_final=1.0) -> ProblemSpec:
    grid = Grid2D(0.0, 1.0, 0.0, 1.0, n, t_final, steps)
    c1 = math.gamma(3.0 + beta) / math.gamma(3.0)
    c2 = math.gamma(3.0) / math.gamma(3.0 - beta)

    def source(x, y, t):
        mode = np.sin(2.0 * PI * x) * np.sin(PI * y)
        u = _ex4_time_factor(t, beta) * mode
        return u**3 + 6.0 * PI**2 * u + (c1 * t**2 + c2 * t ** (2.0 - beta)) * mode

    return ProblemSpec(
        grid=grid,
        beta=beta,
        diffusion=(1.0, 2.0),
        source=source,
        initial=lambda x, y: np.sin(2.0 * PI * x) * np.sin(PI * y),
        reaction=lambda u: u**3,
        reaction_deriv=lambda u: 3.0 * u**2,
        label="ex4",
    )


def _ex4_exact(x, y, t, beta):
    return _ex4_time_factor(t, beta) * np.sin(2.0 * PI * x) * np.sin(PI * y)


_SAMPLES = (0.2, 0.4, 0.6, 0.8)

CASES: dict[str, BenchmarkCase] = {
    "test1": BenchmarkCase(
        "test1", 1, 63, 64, 1.0, pod_dim=2, deim_dim=None, samples=_SAMPLES,
        problem=_test1_problem, exact=_test1_exact,
    ),
    "test2": BenchmarkCase(
        "test2", 1, 63, 64, 1.0, pod_dim=4, deim_dim=10, samples=_SAMPLES,
        problem=_test2_problem, exact=_test2_exact,
    ),
    "ex1": BenchmarkCase(
        "ex1", 1, 63, 64, 1.0, pod_dim=4, deim_dim=None, samples=_SAMPLES,
        problem=_test1_problem, exact=_test1_exact,
    ),
    "ex2": BenchmarkCase(
        "ex2", 1, 63, 64, 1.0, pod_dim=4, deim_dim=10, samples=_SAMPLES,
        problem=_test2_problem, exact=_test2_exact,
    ),
    "ex3": BenchmarkCase(
        "ex3", 2, 63, 64, 1.0, pod_dim=4, deim_dim=None, samples=_SAMPLES,
        problem=_ex3_problem, exact=None,
    ),
    "ex4": BenchmarkCase(
        "ex4", 2, 63, 64, 1.0, pod_dim=4, deim_dim=10, samples=_SAMPLES,
        problem=_ex4_problem, exact=_ex4_exact,
    ),
}


def get_case(name: str) -> BenchmarkCase:
    try:
        return CASES[name]
    except KeyError:
        known = ", ".join(sorted(CASES))
        raise KeyError(f"unknown problem {name!r}; known problems: {known}") from None


# --- declarative custom problems ---------------------------------------------

_ALLOWED_CALLS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "gamma": np.vectorize(math.gamma),
}
_ALLOWED_NAMES = {"pi": math.pi, "e": math.e}
_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load,
    ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
)


def compile_expression(text: str, variables: tuple[str, ...]) -> Callable:
    """Compile an arithmetic expression into a vectorized callable.

    The grammar allows ``+ - * / ^`` (``^`` is power), unary sign, numeric
    literals, the variables named in ``variables``, the constants ``pi`` and
    ``e``, and the functions ``sin``, ``cos``, ``exp``, ``sqrt``, ``abs``,
    ``gamma``.  Anything else is rejected.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError(f"disallowed syntax in expression {text!r}: {type(node).__name__}")
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_CALLS:
                raise ValueError(f"disallowed function call in expression {text!r}")
            if node.keywords:
                raise ValueError("keyword arguments are not allowed in expressions")
        if isinstance(node, ast.Name):
            if node.id not in variables and node.id not in _ALLOWED_NAMES and node.id not in _ALLOWED_CALLS:
                raise ValueError(f"unknown name {node.id!r} in expression {text!r}")
    code = compile(tree, "<expression>", "eval")
    namespace = {**_ALLOWED_CALLS, **_ALLOWED_NAMES}

    def evaluate(*args):
        local = dict(zip(variables, args))
        return eval(code, {"__builtins__": {}}, {**namespace, **local})

    return evaluate


def from_config(config: dict) -> Callable[..., ProblemSpec]:
    """Build a problem factory ``(beta, n=..., steps=..., t_final=...)`` from a config dict.

    Expected keys: ``dim`` (1 or 2), ``domain`` (``[lo, hi]`` or
    ``[[x_lo, x_hi], [y_lo, y_hi]]``), ``mu`` (expression, or a pair for 2D),
    optional ``f``, ``u0``, ``g``, ``g_prime`` expressions, and optional
    grid defaults ``n``, ``steps``, ``t_final``.  Reaction expressions use
    the variable ``u``; sources use ``x``(, ``y``) and ``t``; ``beta`` is
    available in source expressions.
    """
    dim = int(config.get("dim", 1))
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    space = ("x",) if dim == 1 else ("x", "y")
    default_n = int(config.get("n", 63))
    default_steps = int(config.get("steps", 64))
    default_t = float(config.get("t_final", 1.0))

    if dim == 1:
        lo, hi = (float(v) for v in config.get("domain", [0.0, 1.0]))
    else:
        dom = config.get("domain", [[0.0, 1.0], [0.0, 1.0]])
        (x_lo, x_hi), (y_lo, y_hi) = ((float(a), float(b)) for a, b in dom)

    mu_cfg = config.get("mu", "1")
    if dim == 1:
        diffusion = compile_expression(str(mu_cfg), space)
    else:
        pair = mu_cfg if isinstance(mu_cfg, (list, tuple)) else (mu_cfg, mu_cfg)
        diffusion = tuple(compile_expression(str(m), space) for m in pair)

    f_expr = config.get("f")
    u0_expr = config.get("u0")
    g_expr = config.get("g")
    gp_expr = config.get("g_prime")
    if (g_expr is None) != (gp_expr is None):
        raise ValueError("g and g_prime must be given together")
    initial = compile_expression(str(u0_expr), space) if u0_expr is not None else None
    reaction = compile_expression(str(g_expr), ("u",)) if g_expr is not None else None
    reaction_deriv = compile_expression(str(gp_expr), ("u",)) if gp_expr is not None else None
    source_raw = (
        compile_expression(str(f_expr), space + ("t", "beta")) if f_expr is not None else None
    )
    label = str(config.get("name", "custom"))

    def factory(beta, n=default_n, steps=default_steps, t_final=default_t) -> ProblemSpec:
        if dim == 1:
            grid = Grid1D(lo, hi, int(n), float(t_final), int(steps))
            source = (
                (lambda x, t: source_raw(x, t, beta)) if source_raw is not None else None
            )
        else:
            grid = Grid2D(x_lo, x_hi, y_lo, y_hi, int(n), float(t_final), int(steps))
            source = (
                (lambda x, y, t: source_raw(x, y, t, beta)) if source_raw is not None else None
            )
        return ProblemSpec(
            grid=grid,
            beta=beta,
            diffusion=diffusion,
            source=source,
            initial=initial,
            reaction=reaction,
            reaction_deriv=reaction_deriv,
            label=label,
        )

    return factory


def load_config(path: str) -> Callable[..., ProblemSpec]:
    """Read a JSON problem description and return its factory."""
    with open(path, "r", encoding="utf-8") as fh:
        return from_config(json.load(fh))
