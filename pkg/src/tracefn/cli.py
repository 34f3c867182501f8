"""Command line front end: evaluate, differentiate, verify, demonstrate.

Matrices travel as JSON objects with exactly the keys n, re and optional im
(absent means real symmetric).  Reports serialize with sorted keys so that
identical commands and seeds produce byte-identical output apart from the
wall-time field.  Infinity is spelled "+inf" because JSON has no literal
for it.

Exit codes: 0 success, 1 I/O or parse error, 2 domain error (non-PSD input,
image condition violation, non-Hermitian file), 3 oracle disagreement or
suite failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from .derivative_engine import (
    EXACT_DERIVATIVE,
    directional_derivative,
    inverse_gap_demo,
)
from .errors import DomainError
from .finite_diff import one_sided_derivative, quotient_exponents
from .hermitian_core import HermitianMatrix, eig
from .integral_verify import derivative_via_integral
from .scalar_functions import ScalarFunction, builtin
from .suites import SUITES, gap_suite
from .trace_functional import eval_functional

_VERIFY_CHOICES = ("none", "fd", "quad", "all")
_SUITE_CHOICES = ("prop1", "kernel-limit", "quadrature", "gap", "all")
_FD_TOL = 1e-4
_QUAD_TOL = 1e-6
_BOUND_SLACK = 1e-6


def matrix_to_json(m: HermitianMatrix) -> dict:
    """Emit the exact file schema; im is dropped for real matrices."""
    doc = {"n": m.dim, "re": [[float(v) for v in row] for row in m.mat.real]}
    if np.any(m.mat.imag != 0.0):
        doc["im"] = [[float(v) for v in row] for row in m.mat.imag]
    return doc


def _require_square(rows, n: int, key: str) -> np.ndarray:
    if (
        not isinstance(rows, list)
        or len(rows) != n
        or any(not isinstance(row, list) or len(row) != n for row in rows)
    ):
        raise ValueError(f"'{key}' must be an {n}x{n} array of numbers")
    for row in rows:
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"'{key}' must contain only numbers")
    return np.array(rows, dtype=float)


def matrix_from_document(doc) -> HermitianMatrix:
    if not isinstance(doc, dict):
        raise ValueError("matrix file must hold a single JSON object")
    keys = set(doc)
    if keys not in ({"n", "re"}, {"n", "re", "im"}):
        raise ValueError(
            "matrix file keys must be exactly {n, re} or {n, re, im}, got "
            + "{" + ", ".join(sorted(keys)) + "}"
        )
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError("'n' must be a positive integer")
    re_part = _require_square(doc["re"], n, "re")
    if "im" in doc:
        im_part = _require_square(doc["im"], n, "im")
        mat = re_part + 1j * im_part
    else:
        mat = re_part.astype(complex)
    return HermitianMatrix(mat)


def _load_matrix(path: str) -> tuple[HermitianMatrix, str]:
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    doc = json.loads(raw.decode("utf-8"))
    return matrix_from_document(doc), digest


def parse_function_spec(spec: str) -> ScalarFunction:
    name, sep, arg = spec.partition(":")
    if name == "power":
        if not sep:
            raise ValueError("power needs an exponent, e.g. power:0.5")
        return builtin("power", float(arg))
    if sep:
        raise ValueError(f"function {name!r} takes no parameter")
    if name not in ("log", "inverse", "identity", "square"):
        raise ValueError(
            f"unknown function {spec!r}; expected log, power:<p>, inverse, "
            "identity, or square"
        )
    return builtin(name)


def _zero_tol_env() -> float | None:
    raw = os.environ.get("TRACEFN_ZERO_TOL")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"TRACEFN_ZERO_TOL must be a float, got {raw!r}") from None
    if not value > 0.0:
        raise ValueError("TRACEFN_ZERO_TOL must be positive")
    return value


class _Report:
    """Accumulates the machine-readable run report."""

    def __init__(self, argv: list[str]):
        self.command = list(argv)
        self.inputs: dict = {}
        self.results: list[dict] = []
        self.verdicts: list[dict] = []
        self.extras: dict = {}
        self._start = time.perf_counter()

    def result(self, name: str, value, provenance: str) -> None:
        self.results.append(
            {"name": name, "provenance": provenance, "value": value}
        )

    def verdict(self, name: str, passed: bool, detail: str) -> None:
        self.verdicts.append({"detail": detail, "name": name, "passed": passed})

    @property
    def all_passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": self.verdicts,
            "wall_time_s": time.perf_counter() - self._start,
        }
        doc.update(self.extras)
        return json.dumps(doc, sort_keys=True, indent=2)


def _emit(report: _Report, args, human_lines: list[str]) -> None:
    if args.json:
        print(report.to_json())
    else:
        for line in human_lines:
            print(line)


def _verdict_lines(report: _Report) -> list[str]:
    return [
        f"{'PASS' if v['passed'] else 'FAIL'} {v['name']}: {v['detail']}"
        for v in report.verdicts
    ]


def _value_token(value) -> str:
    return value if isinstance(value, str) else repr(value)


def _cmd_eval(args, report: _Report) -> int:
    f = parse_function_spec(args.f_spec)
    p, p_digest = _load_matrix(args.p_path)
    a, a_digest = _load_matrix(args.a_path)
    report.inputs = {
        "A": {"path": args.a_path, "sha256": a_digest},
        "P": {"path": args.p_path, "sha256": p_digest},
        "f": args.f_spec,
    }
    res = eval_functional(f, p, a, zero_threshold=_zero_tol_env())
    value = res.value.serializable()
    report.result("functional", value, "formula")
    report.result("rank_used", res.rank_used, "formula")
    report.result("image_condition_held", res.image_condition_held, "formula")
    _emit(report, args, [_value_token(value)])
    return 0


def _fd_oracle(f: ScalarFunction, p, a, b, zero_tol) -> float:
    singular = eig(a, zero_threshold=zero_tol).rank < a.dim

    def curve(t: float) -> float:
        shifted = a + t * b if t != 0.0 else a
        return eval_functional(
            f, p, shifted, zero_threshold=zero_tol
        ).value.as_float()

    estimate, _ = one_sided_derivative(
        curve, exponents=quotient_exponents(f, singular=singular)
    )
    return estimate


def _cmd_dderiv(args, report: _Report) -> int:
    f = parse_function_spec(args.f_spec)
    p, p_digest = _load_matrix(args.p_path)
    a, a_digest = _load_matrix(args.a_path)
    b, b_digest = _load_matrix(args.b_path)
    report.inputs = {
        "A": {"path": args.a_path, "sha256": a_digest},
        "B": {"path": args.b_path, "sha256": b_digest},
        "P": {"path": args.p_path, "sha256": p_digest},
        "f": args.f_spec,
        "verify": args.verify,
    }
    zero_tol = _zero_tol_env()
    rep = directional_derivative(f, p, a, b, zero_threshold=zero_tol)
    report.result("formula_value", rep.formula_value, "formula")
    report.result("semantics", rep.semantics, "formula")
    lines = [
        f"formula_value = {rep.formula_value!r}",
        f"semantics = {rep.semantics}",
    ]
    fd_tol = args.tol if args.tol is not None else _FD_TOL
    quad_tol = args.tol if args.tol is not None else _QUAD_TOL

    if args.verify in ("fd", "all"):
        fd = _fd_oracle(f, p, a, b, zero_tol)
        report.result("fd_value", fd, "finite_difference")
        lines.append(f"finite_difference = {fd!r}")
        if rep.semantics == EXACT_DERIVATIVE:
            err = abs(fd - rep.formula_value) / (1.0 + abs(rep.formula_value))
            report.verdict(
                "fd-agreement",
                err <= fd_tol,
                f"relative deviation {err:.3e} (tolerance {fd_tol:.1e})",
            )
        else:
            holds = fd >= rep.formula_value - _BOUND_SLACK
            report.verdict(
                "fd-lower-bound",
                holds,
                f"fd {fd!r} vs formula {rep.formula_value!r}; the formula "
                "is a lower bound here, not an equality",
            )
    if args.verify in ("quad", "all"):
        covered = f.name == "log" or (
            f.name == "power" and -1.0 < f.parameter < 1.0 and f.parameter != 0.0
        )
        if covered:
            quad = derivative_via_integral(f, p, a, b).value
            report.result("quad_value", quad, "quadrature")
            lines.append(f"quadrature = {quad!r}")
            err = abs(quad - rep.formula_value) / (1.0 + abs(rep.formula_value))
            report.verdict(
                "quad-agreement",
                err <= quad_tol,
                f"relative deviation {err:.3e} (tolerance {quad_tol:.1e})",
            )
        else:
            report.verdict(
                "quad-agreement",
                True,
                f"skipped: no integral representation for {args.f_spec}",
            )
    lines.extend(_verdict_lines(report))
    _emit(report, args, lines)
    return 0 if report.all_passed else 3


def _cmd_verify(args, report: _Report) -> int:
    report.inputs = {"seed": args.seed, "suite": args.suite, "trials": args.trials}
    names = list(SUITES) if args.suite == "all" else [args.suite]
    lines = []
    for name in names:
        suite_report = SUITES[name](seed=args.seed, trials=args.trials)
        passed_count = sum(1 for c in suite_report.checks if c.passed)
        for check in suite_report.checks:
            report.verdict(f"{name}:{check.name}", check.passed, check.detail)
        report.result(
            f"{name}-passed",
            f"{passed_count}/{len(suite_report.checks)}",
            "formula",
        )
        lines.append(f"suite {name}: {passed_count}/{len(suite_report.checks)} passed")
    lines = _verdict_lines(report) + lines
    _emit(report, args, lines)
    return 0 if report.all_passed else 3


def _cmd_demo_gap(args, report: _Report) -> int:
    demo = inverse_gap_demo()
    gap_checks = gap_suite()
    report.inputs = {}
    report.result("formula_value", demo.formula_value, "formula")
    report.result("fd_estimate", demo.fd_estimate, "finite_difference")
    report.result("gap", demo.gap, "finite_difference")
    report.result("curve_t", list(demo.curve_t), "formula")
    report.result("curve_values", list(demo.curve_values), "formula")
    report.result("curve_closed_form", list(demo.curve_closed_form), "formula")
    for check in gap_checks.checks:
        report.verdict(check.name, check.passed, check.detail)
    report.extras["matrices"] = {
        "A": matrix_to_json(HermitianMatrix.diagonal([1.0, 0.0])),
        "B": matrix_to_json(HermitianMatrix([[0.0, 1.0], [1.0, 1.0]])),
        "P": matrix_to_json(HermitianMatrix.diagonal([1.0, 0.0])),
    }
    lines = [
        f"formula_value = {demo.formula_value!r}",
        f"fd_estimate = {demo.fd_estimate!r}",
        f"gap = {demo.gap!r}",
    ]
    for t, got, want in zip(demo.curve_t, demo.curve_values, demo.curve_closed_form):
        lines.append(f"curve t={t}: value {got!r} closed form {want!r}")
    lines.extend(_verdict_lines(report))
    _emit(report, args, lines)
    return 0 if report.all_passed else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracefn",
        description="Trace functionals of PSD Hermitian matrices and their "
        "one-sided directional derivatives, with built-in verification.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_eval = sub.add_parser("eval", help="evaluate Tr(P f(A))")
    p_eval.add_argument("f_spec")
    p_eval.add_argument("p_path")
    p_eval.add_argument("a_path")
    p_eval.add_argument("--json", action="store_true")

    p_dd = sub.add_parser("dderiv", help="directional derivative toward B")
    p_dd.add_argument("f_spec")
    p_dd.add_argument("p_path")
    p_dd.add_argument("a_path")
    p_dd.add_argument("b_path")
    p_dd.add_argument("--verify", choices=_VERIFY_CHOICES, default="none")
    p_dd.add_argument("--tol", type=float, default=None)
    p_dd.add_argument("--json", action="store_true")

    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("suite", choices=_SUITE_CHOICES)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=10)
    p_ver.add_argument("--json", action="store_true")

    p_demo = sub.add_parser("demo-gap", help="the 2x2 strict lower-bound case")
    p_demo.add_argument("--json", action="store_true")

    return parser


_DISPATCH = {
    "eval": _cmd_eval,
    "dderiv": _cmd_dderiv,
    "verify": _cmd_verify,
    "demo-gap": _cmd_demo_gap,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    report = _Report(argv)
    try:
        return _DISPATCH[args.cmd](args, report)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
