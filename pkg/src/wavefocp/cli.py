"""Batch command line runner.

Solves the built-in reference problems or a user problem file over a list
of fractional orders, and writes deterministic CSV tables, plot-data
files, and optional operational-matrix dumps.

Exit codes: 0 success, 1 validation/usage error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .basis import WaveletParams
from .expressions import ExpressionError, as_function, parse_expression
from .quadrature import SingularMatrixError, gamma
from .solver import FocpProblem, reconstruct_many, solve_focp

Fn = Callable[[np.ndarray], np.ndarray]

_TABLE_GRID = np.arange(1, 10) / 10.0
_PLOT_GRID = np.linspace(0.0, 1.0, 200)


class UsageError(ValueError):
    """Bad flags or an invalid problem definition."""


def _fmt(v: float) -> str:
    return format(float(v), ".9g")


def _mu_tag(mu: float) -> str:
    return _fmt(mu).replace(".", "p").replace("-", "m")


@dataclass(frozen=True)
class RunConfig:
    """One batch run: problem source, basis family, discretization, outputs."""

    example: int | None
    problem_path: Path | None
    basis: str
    k: int
    M: int
    mu_list: tuple[float, ...]
    out_dir: Path
    emit: tuple[str, ...]

    def __post_init__(self):
        if (self.example is None) == (self.problem_path is None):
            raise UsageError("exactly one of --example and --problem is required")
        if self.basis not in ("tw", "ftw"):
            raise UsageError(f"basis must be tw or ftw, got {self.basis!r}")
        if self.k < 1 or self.M < 1:
            raise UsageError("k and M must be positive integers")
        if not self.mu_list:
            raise UsageError("at least one mu value is required")
        for mu in self.mu_list:
            if not 0.0 < mu <= 1.0:
                raise UsageError(f"mu values must lie in (0, 1], got {mu}")
        bad = set(self.emit) - {"tables", "plotdata", "matrices"}
        if bad:
            raise UsageError(f"unknown emit flags: {sorted(bad)}")


@dataclass(frozen=True)
class ProblemSpec:
    """Mu-parametrized problem plus optional exact solutions for error columns."""

    name: str
    make_problem: Callable[[float], FocpProblem]
    exact_x: Callable[[float], Fn | None] = lambda mu: None
    exact_u: Callable[[float], Fn | None] = lambda mu: None


def _example_spec(example: int) -> ProblemSpec:
    if example == 1:
        sqrt2 = math.sqrt(2.0)
        varpi = -0.98

        def exact_x(mu: float) -> Fn | None:
            if mu != 1.0:
                return None
            return lambda z: np.cosh(sqrt2 * z) + varpi * np.sinh(sqrt2 * z)

        def exact_u(mu: float) -> Fn | None:
            if mu != 1.0:
                return None
            return lambda z: (1.0 + sqrt2 * varpi) * np.cosh(sqrt2 * z) + (
                sqrt2 + varpi
            ) * np.sinh(sqrt2 * z)

        return ProblemSpec(
            name="example1",
            make_problem=lambda mu: FocpProblem(
                p_fn=lambda z: np.ones_like(z), q_fn=lambda z: np.ones_like(z),
                a_fn=lambda z: -np.ones_like(z), b_fn=lambda z: np.ones_like(z),
                x0=1.0, mu=mu,
            ),
            exact_x=exact_x, exact_u=exact_u,
        )
    if example == 2:
        return ProblemSpec(
            name="example2",
            make_problem=lambda mu: FocpProblem(
                p_fn=lambda z: np.ones_like(z), q_fn=lambda z: np.ones_like(z),
                a_fn=lambda z: np.asarray(z, dtype=float),
                b_fn=lambda z: np.ones_like(z),
                x0=1.0, mu=mu,
            ),
        )
    if example == 3:

        def rx(mu: float) -> Fn:
            return lambda z: np.asarray(z, dtype=float) ** mu

        def ru(mu: float) -> Fn:
            g = gamma(mu + 1.0)
            return lambda z: np.asarray(z, dtype=float) ** mu + g

        return ProblemSpec(
            name="example3",
            make_problem=lambda mu: FocpProblem(
                p_fn=lambda z: np.ones_like(z), q_fn=lambda z: np.ones_like(z),
                a_fn=lambda z: -np.ones_like(z), b_fn=lambda z: np.ones_like(z),
                x0=0.0, mu=mu, track_x=rx(mu), track_u=ru(mu),
            ),
            exact_x=lambda mu: rx(mu), exact_u=lambda mu: ru(mu),
        )
    raise UsageError(f"example must be 1, 2, or 3, got {example}")


def parse_problem_file(path: Path) -> tuple[ProblemSpec, dict]:
    """Read a `key = value` problem file; returns the spec plus raw settings.

    Recognized keys: p, q, a, b, rx, ru, exact_x, exact_u (expressions in t),
    x0 (number), mu (comma-separated list), basis, k, M. Lines starting with
    `#` and blank lines are ignored.
    """
    if not path.exists():
        raise UsageError(f"problem file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not key or not val:
            raise UsageError(f"{path}:{lineno}: empty key or value")
        if key in values:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = val

    known = {"p", "q", "a", "b", "rx", "ru", "exact_x", "exact_u",
             "x0", "mu", "basis", "k", "M"}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"{path}: unknown keys: {sorted(unknown)}")
    for req in ("p", "q", "a", "b", "x0"):
        if req not in values:
            raise UsageError(f"{path}: missing required key {req!r}")

    def expr_fn(key: str) -> Fn | None:
        if key not in values:
            return None
        try:
            return as_function(parse_expression(values[key]))
        except ExpressionError as exc:
            raise UsageError(f"{path}: field {key!r}: {exc}") from exc

    p_fn, q_fn = expr_fn("p"), expr_fn("q")
    a_fn, b_fn = expr_fn("a"), expr_fn("b")
    rx_fn, ru_fn = expr_fn("rx"), expr_fn("ru")
    ex_fn, eu_fn = expr_fn("exact_x"), expr_fn("exact_u")
    try:
        x0 = float(values["x0"])
    except ValueError as exc:
        raise UsageError(f"{path}: field 'x0' must be a number") from exc

    def make_problem(mu: float) -> FocpProblem:
        try:
            return FocpProblem(
                p_fn=p_fn, q_fn=q_fn, a_fn=a_fn, b_fn=b_fn,
                x0=x0, mu=mu, track_x=rx_fn, track_u=ru_fn,
            )
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from exc

    spec = ProblemSpec(
        name=path.stem,
        make_problem=make_problem,
        exact_x=lambda mu: ex_fn,
        exact_u=lambda mu: eu_fn,
    )
    settings = {}
    if "mu" in values:
        try:
            settings["mu_list"] = tuple(
                float(tok) for tok in values["mu"].split(",") if tok.strip()
            )
        except ValueError as exc:
            raise UsageError(f"{path}: field 'mu' must be a number list") from exc
    if "basis" in values:
        settings["basis"] = values["basis"].lower()
    for key in ("k", "M"):
        if key in values:
            try:
                settings[key] = int(values[key])
            except ValueError as exc:
                raise UsageError(f"{path}: field {key!r} must be an integer") from exc
    return spec, settings


def _write_lines(path: Path, lines: Sequence[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def run(config: RunConfig) -> list[Path]:
    """Execute the batch run; returns the files written."""
    if config.example is not None:
        spec = _example_spec(config.example)
    else:
        spec, _ = parse_problem_file(config.problem_path)

    config.out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    cost_rows = ["mu,basis,k,M,J"]

    for mu in config.mu_list:
        problem = spec.make_problem(mu)
        basis_mu = mu if config.basis == "ftw" else 1.0
        params = WaveletParams(k=config.k, M=config.M, mu=basis_mu)
        sol = solve_focp(problem, params, diagnostics=False)
        cost_rows.append(
            ",".join(
                [_fmt(mu), config.basis, str(config.k), str(config.M), _fmt(sol.J_value)]
            )
        )
        tag = _mu_tag(mu)
        ex = spec.exact_x(mu)
        eu = spec.exact_u(mu)

        if "tables" in config.emit:
            x, u = reconstruct_many(sol, _TABLE_GRID)
            header = "zeta,x,u"
            cols = [_TABLE_GRID, x, u]
            if ex is not None and eu is not None:
                xe = np.asarray(ex(_TABLE_GRID), dtype=float)
                ue = np.asarray(eu(_TABLE_GRID), dtype=float)
                header += ",exact_x,exact_u,err_x,err_u"
                cols += [xe, ue, np.abs(x - xe), np.abs(u - ue)]
            rows = [header]
            for vals in zip(*cols):
                rows.append(",".join(_fmt(v) for v in vals))
            f = config.out_dir / f"{spec.name}_{config.basis}_trajectory_mu{tag}.csv"
            _write_lines(f, rows)
            written.append(f)

        if "plotdata" in config.emit:
            x, u = reconstruct_many(sol, _PLOT_GRID)
            cols = [_PLOT_GRID, x, u]
            if ex is not None and eu is not None:
                cols += [
                    np.asarray(ex(_PLOT_GRID), dtype=float),
                    np.asarray(eu(_PLOT_GRID), dtype=float),
                ]
            rows = [" ".join(_fmt(v) for v in vals) for vals in zip(*cols)]
            f = config.out_dir / f"{spec.name}_{config.basis}_plot_mu{tag}.dat"
            _write_lines(f, rows)
            written.append(f)

        if "matrices" in config.emit:
            mats = sol.disc.mats
            for label, matrix in (("D", mats.D), ("P1", mats.P1), ("Pmu", mats.Pmu)):
                rows = [",".join(_fmt(v) for v in row) for row in matrix]
                f = config.out_dir / (
                    f"{spec.name}_{config.basis}_{label}_mu{tag}.csv"
                )
                _write_lines(f, rows)
                written.append(f)

    cost_file = config.out_dir / f"{spec.name}_{config.basis}_cost.csv"
    _write_lines(cost_file, cost_rows)
    written.append(cost_file)
    return written


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wavefocp",
        description="Solve linear-quadratic fractional optimal control "
        "problems with Taylor-wavelet operational matrices.",
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--example", type=int, help="built-in problem 1, 2, or 3")
    source.add_argument("--problem", type=Path, help="path to a problem file")
    parser.add_argument("--basis", choices=["tw", "ftw"], default=None)
    parser.add_argument("--k", type=int, default=None, help="resolution level")
    parser.add_argument("--M", type=int, default=None, help="polynomials per block")
    parser.add_argument("--mu", default=None, help="comma-separated order list")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument(
        "--emit", default="tables",
        help="comma-separated subset of tables,plotdata,matrices",
    )
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    file_settings: dict = {}
    if args.problem is not None:
        _, file_settings = parse_problem_file(args.problem)

    basis = args.basis or file_settings.get("basis", "ftw")
    k = args.k if args.k is not None else file_settings.get("k", 2)
    M = args.M if args.M is not None else file_settings.get("M", 4)
    if args.mu is not None:
        try:
            mu_list = tuple(float(tok) for tok in args.mu.split(",") if tok.strip())
        except ValueError as exc:
            raise UsageError("--mu must be a comma-separated number list") from exc
    else:
        mu_list = file_settings.get("mu_list", (1.0,))
    emit = tuple(tok.strip() for tok in args.emit.split(",") if tok.strip())
    return RunConfig(
        example=args.example, problem_path=args.problem,
        basis=basis, k=k, M=M, mu_list=mu_list, out_dir=args.out, emit=emit,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
        written = run(config)
    except (SingularMatrixError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
