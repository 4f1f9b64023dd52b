"""Command-line front end: ``numgroups certify | traceform | hecke | specs``."""

from __future__ import annotations

import argparse
import ast
import json
import math
import sys
from pathlib import Path

from . import __version__
from ._backend import BACKEND, KERNEL
from .decider import DEFAULT_MAX_ROUNDS, DEFAULT_MAX_WORD_LEN, GroupSpec, Verdict, VerdictKind, certify
from .exactfield import FieldElement, NumberField, quadratic_field, rational_field
from .fricke import _squarefree_part, hecke_value, is_hecke_value, pi_lambda
from .linhull import algebra_basis, det
from .specfile import SpecError, bundled_names, load_bundled, load_spec, serialize_spec, write_bundled

EXIT_CODES = {VerdictKind.NUMERICAL: 0, VerdictKind.NOT_NUMERICAL: 1, VerdictKind.INCONCLUSIVE: 2}
EXIT_INPUT_ERROR = 3

BUILTIN_PREFIX = "builtin:"


def read_spec(path: str) -> GroupSpec:
    if path.startswith(BUILTIN_PREFIX):
        return load_bundled(path[len(BUILTIN_PREFIX):])
    return load_spec(path)


# ---------------------------------------------------------------------------
# Reports


def _matrix_json(m) -> list:
    return m.to_json()


def verdict_report(spec: GroupSpec, v: Verdict, include_timings: bool = True) -> dict:
    """Machine-readable report; identical across runs except for ``timings``."""
    labels = spec.labels
    rep: dict = {
        "verdict": v.kind.value,
        "exit_code": EXIT_CODES[v.kind],
        "field": {"name": spec.field.name, "degree": spec.field.degree},
        "n": spec.n,
        "completely_reducible": v.completely_reducible,
        "irreducible": v.irreducible,
        "realness": v.realness,
        "algebra_dim": v.algebra_dim,
        "gram_det": v.gram_det.to_json(),
        "witness": None,
        "conjugator": None,
        "conjugated_generators": None,
        "closure": v.closure.summary() if v.closure is not None else None,
        "elements_searched": v.elements_searched,
        "reason": v.reason,
    }
    if v.witness_word is not None:
        rep["witness"] = {
            "word": v.witness_word.render(labels),
            "length": len(v.witness_word),
            "trace": v.witness_trace.to_json(),
            "trace_str": str(v.witness_trace),
            "minpoly": v.witness_minpoly.to_json(),
            "minpoly_str": v.witness_minpoly.format("x"),
        }
    if v.conjugator is not None:
        rep["conjugator"] = _matrix_json(v.conjugator)
        rep["conjugated_generators"] = {lab: _matrix_json(h) for lab, h in zip(labels, v.conjugated_generators)}
    if include_timings:
        rep["timings"] = {k: round(t, 6) for k, t in sorted(v.timings.items())}
    return rep


def _fmt_matrix(m, indent: str = "    ") -> str:
    cells = [[str(x) for x in row] for row in m.rows]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def render_verdict(spec: GroupSpec, v: Verdict) -> str:
    lines = [
        f"verdict: {v.kind.value}",
        f"field: {spec.field.name} (degree {spec.field.degree}), n = {spec.n}",
        f"algebra dimension: {v.algebra_dim}",
        f"gram determinant: {v.gram_det}",
        f"completely reducible: {'yes' if v.completely_reducible else 'no'}",
        f"irreducible: {'yes' if v.irreducible else 'no'}",
        f"realness: {v.realness}",
        f"elements searched: {v.elements_searched}",
    ]
    if v.witness_word is not None:
        lines += [
            f"witness word: {v.witness_word.render(spec.labels)}",
            f"witness trace: {v.witness_trace}",
            f"witness minimal polynomial: {v.witness_minpoly.format('x')}",
        ]
    if v.conjugator is not None:
        lines.append("conjugator U:")
        lines.append(_fmt_matrix(v.conjugator))
        for lab, h in zip(spec.labels, v.conjugated_generators):
            lines.append(f"U^-1 {lab} U:")
            lines.append(_fmt_matrix(h))
    if v.closure is not None:
        c = v.closure
        state = "stabilized" if c.stabilized else "diverged"
        lines.append(f"lattice closure: {state} after {c.rounds} rounds, denominators {c.denominators}")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    lines.append("timings: " + ", ".join(f"{k} {t:.3f}s" for k, t in sorted(v.timings.items())))
    return "\n".join(lines)


def traceform_report(spec: GroupSpec) -> dict:
    basis = algebra_basis(spec.generators)
    gdet = det(basis.gram)
    if not gdet:
        cls = "degenerate"
    elif basis.dim == spec.n**2:
        cls = "irreducible"
    else:
        cls = "completely-reducible"
    return {
        "algebra_dim": basis.dim,
        "n": spec.n,
        "gram_det": gdet.to_json(),
        "gram_det_str": str(gdet),
        "classification": cls,
        "words": [w.render(spec.labels) for w in basis.words],
        "gram": [[x.to_json() for x in row] for row in basis.gram],
    }


def render_traceform(rep: dict) -> str:
    return "\n".join(
        [
            f"r = {rep['algebra_dim']} (n^2 = {rep['n'] ** 2})",
            f"det(gram) = {rep['gram_det_str']}",
            f"classification: {rep['classification']}",
            "basis words: " + " ".join(rep["words"]),
        ]
    )


# ---------------------------------------------------------------------------
# lambda expressions for ``hecke --lambda``


class LambdaSyntaxError(ValueError):
    pass


def _sqrt_args(node: ast.AST) -> set[int]:
    found = set()
    for sub in ast.walk(node):
        if isinstance(sub, ast.Name):
            if sub.id != "i" and sub.id != "sqrt":
                raise LambdaSyntaxError(f"unknown name {sub.id!r}")
            if sub.id == "i":
                found.add(-1)
        elif isinstance(sub, ast.Call):
            if not (isinstance(sub.func, ast.Name) and sub.func.id == "sqrt" and len(sub.args) == 1 and not sub.keywords):
                raise LambdaSyntaxError("only sqrt(<integer>) calls are allowed")
            arg = sub.args[0]
            sign = 1
            if isinstance(arg, ast.UnaryOp) and isinstance(arg.op, ast.USub):
                sign, arg = -1, arg.operand
            if not (isinstance(arg, ast.Constant) and type(arg.value) is int):
                raise LambdaSyntaxError("sqrt takes an integer literal")
            found.add(sign * arg.value)
    return found


def parse_lambda(text: str) -> FieldElement:
    """Parse e.g. ``5/2``, ``i/2``, ``sqrt(-5)``, ``(1+sqrt(5))/2`` into the smallest field containing it.

    At most one square root (``i`` counts as sqrt(-1)) may occur.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise LambdaSyntaxError(f"cannot parse {text!r}") from None
    roots = _sqrt_args(tree)
    if len(roots) > 1:
        raise LambdaSyntaxError("at most one square root may appear")
    K: NumberField = rational_field()
    root = None
    if roots:
        d = roots.pop()
        if d < 0 or math.isqrt(d) ** 2 != d:
            k, d0 = _squarefree_part(d)
            K = quadratic_field(d0)
            root = K.gen() * k
        else:
            root = K(math.isqrt(d))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return K(node.value)
        if isinstance(node, ast.Name) and node.id == "i":
            return root
        if isinstance(node, ast.Call):
            return root
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            x = ev(node.operand)
            return -x if isinstance(node.op, ast.USub) else x
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b:
                    raise LambdaSyntaxError("division by zero")
                return a / b
        raise LambdaSyntaxError(f"unsupported syntax in {text!r}")

    return ev(tree)


def discreteness_note(lam: FieldElement, kind: VerdictKind) -> str:
    """Where Pi(lambda) sits relative to the classical Hecke discreteness dichotomy (documentation only)."""
    K = lam.field
    if K.embedding is None or not K.is_real:
        return "lambda is not real; the Hecke discreteness criterion does not apply"
    # Pi(-lambda) is Pi(lambda) conjugated by diag(1, -1), up to the sign of A
    if lam.to_complex().real < 0:
        lam = -lam
    q = is_hecke_value(lam)
    if not any(lam.coords[1:]):
        at_least_two = lam.coords[0] >= 2
    else:
        at_least_two = lam.to_complex().real >= 2
    if at_least_two:
        disc = "discrete (|λ| ≥ 2)"
    elif q is not None:
        disc = f"discrete (|λ| = λ_{q} = 2cos(π/{q}))"
    else:
        disc = "not discrete (|λ| < 2 and |λ| is not of the form 2cos(π/q))"
    if kind is VerdictKind.NUMERICAL:
        return f"{disc} and numerical"
    if kind is VerdictKind.NOT_NUMERICAL:
        return f"{disc} but not numerical" if disc.startswith("discrete") else f"{disc} and not numerical"
    return f"{disc}; numerical status inconclusive"


# ---------------------------------------------------------------------------
# Commands


def _emit(args, text: str, data: dict) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def cmd_certify(args) -> int:
    spec = read_spec(args.path)
    v = certify(spec, args.max_word_len, args.max_rounds)
    _emit(args, render_verdict(spec, v), verdict_report(spec, v, include_timings=not args.no_timings))
    return EXIT_CODES[v.kind]


def cmd_traceform(args) -> int:
    spec = read_spec(args.path)
    rep = traceform_report(spec)
    _emit(args, render_traceform(rep), rep)
    return 0


def cmd_hecke(args) -> int:
    if args.lam is not None:
        lam = parse_lambda(args.lam)
        spec = pi_lambda(lam.field, lam)
        source = f"lambda = {args.lam}"
    else:
        if args.q < 3:
            raise ValueError(f"q must be at least 3, got {args.q}")
        hv = hecke_value(args.q)
        lam = hv.lam
        spec = pi_lambda(hv.field, lam)
        source = f"q = {args.q}"
    text = serialize_spec(spec)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    v = certify(spec, args.max_word_len, args.max_rounds)
    note = discreteness_note(lam, v.kind)
    rep = verdict_report(spec, v, include_timings=not args.no_timings)
    rep["lambda"] = {"source": source, "coords": lam.to_json(), "str": str(lam)}
    rep["discreteness"] = note
    rep["spec_path"] = args.out
    body = [f"Pi(lambda) with {source}, lambda = {lam} in {spec.field.name}"]
    if args.out:
        body.append(f"spec written to {args.out}")
    body += [render_verdict(spec, v), f"discreteness: {note}"]
    _emit(args, "\n".join(body), rep)
    return EXIT_CODES[v.kind]


def cmd_specs(args) -> int:
    if args.write:
        for p in write_bundled(args.write):
            print(p)
    else:
        for name in bundled_names():
            print(f"{BUILTIN_PREFIX}{name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numgroups", description="Decide whether a matrix group over a number field is numerical.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} arithmetic, {KERNEL} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_opts(p):
        p.add_argument("--max-word-len", type=int, default=DEFAULT_MAX_WORD_LEN, metavar="L")
        p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS, metavar="R")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--no-timings", action="store_true", help="omit timings from the JSON report")

    p = sub.add_parser("certify", help="run the full decision pipeline on a spec file")
    p.add_argument("path", help="spec file, or builtin:NAME")
    run_opts(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("traceform", help="algebra dimension and trace-form Gram determinant")
    p.add_argument("path", help="spec file, or builtin:NAME")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_traceform)

    p = sub.add_parser("hecke", help="build Pi(lambda) = <[[0,-1],[1,0]], [[1,lambda],[0,1]]> and certify it")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("q", nargs="?", type=int, help="use lambda = 2cos(pi/q), q >= 3")
    g.add_argument("--lambda", dest="lam", metavar="EXPR", help="e.g. 5/2, i/2, sqrt(-5), (1+sqrt(5))/2")
    p.add_argument("--out", metavar="PATH", help="write the generated spec here")
    run_opts(p)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("specs", help="list bundled specs, or write them to a directory")
    p.add_argument("--write", metavar="DIR")
    p.set_defaults(func=cmd_specs)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for opt in ("max_word_len", "max_rounds"):
        if getattr(args, opt, 1) < 1:
            print(f"error: --{opt.replace('_', '-')} must be at least 1", file=sys.stderr)
            return EXIT_INPUT_ERROR
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {getattr(exc, 'filename', '')}", file=sys.stderr)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
