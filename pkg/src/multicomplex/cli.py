"""
``mcx``: command-line front end.

Subcommands read an expression or a JSON document from the positional
argument, ``--in FILE`` or stdin, and write to stdout or ``--out FILE``.

Exit status: 0 success, 2 parse or input error, 3 domain error (null cone,
singular matrix, operator not self-adjoint), 4 I/O error. ``det`` prints the
determinant even when it lies in the null cone and then exits with 3.

Idempotent labels on the command line are 1-based (``eps(1)``, ``"J": [1]``).
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import core
from .core import ConjugationMask
from .documents import (
    IDEMPOTENT,
    STANDARD,
    DocumentError,
    doc_to_matrix,
    doc_to_number,
    dumps,
    format_real,
    ket_to_doc,
    loads,
    matrix_to_doc,
    number_to_doc,
    render_idempotent,
    render_standard,
)
from .errors import (
    IndexRangeError,
    LevelError,
    MulticomplexError,
    NotSelfAdjointError,
    NullConeError,
    SingularMatrixError,
)
from .hilbert import spectral_decompose
from .ideal import (
    Flavor,
    IdealSpec,
    contains,
    generator,
    is_maximal,
    is_minimal,
    join,
    meet,
    quotient_rep,
)
from .idempotent import from_idempotent, mnorm, to_idempotent
from .linalg import det, invert_matrix, singular_components
from .parser import evaluate, mentions_idempotents, parse

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_FORMATS = {"std": "std", "standard": "std", "idem": "idem", "idempotent": "idem", "json": "json"}
_REP_OF_FORMAT = {"std": STANDARD, "idem": IDEMPOTENT}


class _UsageError(MulticomplexError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="level of the algebra")
    common.add_argument("--format", choices=sorted(_FORMATS), help="output format")
    common.add_argument("--tol", type=float, help="tolerance for vanishing components")
    common.add_argument("--in", dest="infile", help="read input from FILE instead of stdin")
    common.add_argument("--out", dest="outfile", help="write output to FILE")

    parser = _ArgumentParser(prog="mcx", description="Multicomplex algebra toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    for name, text in [
        ("eval", "evaluate an expression"),
        ("conj", "apply principal conjugations to an expression"),
        ("norm", "multiperplex-valued norm of an expression"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("expr", nargs="?", help="expression or NumberDocument JSON")
        if name == "conj":
            p.add_argument(
                "--mask", required=True,
                help="comma-separated principal units to conjugate, e.g. 1,3",
            )

    p = sub.add_parser("convert", parents=[common], help="change the representation of a NumberDocument")
    p.add_argument("doc", nargs="?", help="NumberDocument JSON")
    p.add_argument("--to", required=True, choices=["standard", "idempotent", "std", "idem"])

    p = sub.add_parser("ideal", parents=[common], help="ideal lattice queries")
    p.add_argument("query", nargs="?", help="query JSON")

    for name, text in [
        ("det", "determinant of a MatrixDocument"),
        ("inv", "inverse of a MatrixDocument"),
        ("eig", "spectral decomposition of a self-adjoint MatrixDocument"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("doc", nargs="?", help="MatrixDocument JSON")
    return parser


def _read_input(args, positional, stdin):
    if positional is not None and args.infile is not None:
        raise _UsageError("give the input either inline or with --in, not both")
    if positional is not None:
        return positional
    if args.infile is not None:
        with open(args.infile, encoding="utf-8") as fh:
            return fh.read()
    return stdin.read()


def _tol(args, default):
    return default if args.tol is None else args.tol


def _number_from_text(text, args):
    """Expression or NumberDocument -> (number, input rep, is_document).

    An expression counts as idempotent input when it uses ``eps``.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        doc = loads(stripped)
        x = doc_to_number(doc)
        if args.n is not None and args.n != x.level:
            raise _UsageError(f"--n {args.n} disagrees with document level {x.level}")
        return x, doc.get("rep", STANDARD), True
    if args.n is None:
        raise _UsageError("--n is required for expressions")
    tree = parse(stripped, args.n)
    x = evaluate(tree, args.n, _tol(args, core.DEFAULT_TOL))
    rep = IDEMPOTENT if args.n >= 2 and mentions_idempotents(tree) else STANDARD
    return x, rep, False


def _render_number(x, fmt, json_rep=STANDARD):
    if fmt == "json":
        return dumps(number_to_doc(x, json_rep))
    if fmt == "idem":
        if x.level < 2:
            raise LevelError("idempotent format needs n >= 2")
        return render_idempotent(x) + "\n"
    return render_standard(x) + "\n"


def _output_format(args, default):
    return _FORMATS[args.format] if args.format else default


def _cmd_number(args, text):
    x, rep, is_doc = _number_from_text(text, args)
    if args.command == "conj":
        units = [int(u) for u in args.mask.replace(" ", "").split(",") if u]
        x = core.conjugate(x, ConjugationMask.from_units(x.level, units))
    elif args.command == "norm":
        if x.level == 1:
            x = core.real(1, float(np.hypot(*x.coeffs)))
        else:
            x = from_idempotent(mnorm(to_idempotent(x)))
            rep = IDEMPOTENT
    if not is_doc:
        fmt = _output_format(args, "idem" if rep == IDEMPOTENT else "std")
        return _render_number(x, fmt, rep)
    fmt = _output_format(args, "json")
    return _render_number(x, fmt, _REP_OF_FORMAT.get(fmt, rep))


def _cmd_convert(args, text):
    doc = loads(text)
    x = doc_to_number(doc)
    target = STANDARD if args.to in ("standard", "std") else IDEMPOTENT
    if target == IDEMPOTENT and x.level < 2:
        raise LevelError("idempotent rep needs n >= 2")
    fmt = _output_format(args, "json")
    return _render_number(x, fmt, target)


def _ideal_from(query, level, key):
    indices = query.get(key)
    if not isinstance(indices, list) or not all(
        isinstance(j, int) and not isinstance(j, bool) for j in indices
    ):
        raise DocumentError(f"query field {key!r} must be a list of 1-based indices")
    size = 1 << (level - 1)
    bad = [j for j in indices if not 1 <= j <= size]
    if bad:
        raise IndexRangeError(f"indices {bad} out of range 1..{size}")
    flavor = query.get("flavor", Flavor.MULTICOMPLEX.value)
    try:
        flavor = Flavor(flavor)
    except ValueError:
        raise DocumentError(f"unknown flavor {flavor!r}") from None
    return IdealSpec(level, {j - 1 for j in indices}, flavor)


def _ideal_summary(ideal):
    return {
        "n": ideal.level,
        "J": sorted(j + 1 for j in ideal.indices),
        "flavor": ideal.flavor.value,
        "minimal": is_minimal(ideal),
        "maximal": is_maximal(ideal),
    }


def _cmd_ideal(args, text):
    query = loads(text)
    if not isinstance(query, dict):
        raise DocumentError("ideal query must be a JSON object")
    op = query.get("op")
    level = query.get("n", args.n)
    if not isinstance(level, int) or isinstance(level, bool):
        raise DocumentError("ideal query needs an integer level 'n'")
    level = core.check_level(level, minimum=2)
    ideal = _ideal_from(query, level, "J")
    tol = _tol(args, core.DEFAULT_TOL)
    if op == "generator":
        rep = query.get("rep", STANDARD)
        return _finish_doc(args, generator(ideal), rep)
    if op in ("contains", "quotient"):
        if "x" not in query:
            raise DocumentError(f"{op} query needs an element 'x'")
        x = doc_to_number(query["x"])
        if op == "contains":
            return dumps({"op": "contains", "result": contains(ideal, x, tol)})
        return _finish_doc(args, quotient_rep(x, ideal), query["x"].get("rep", STANDARD))
    if op in ("meet", "join"):
        other = _ideal_from(query, level, "J2")
        result = meet(ideal, other) if op == "meet" else join(ideal, other)
        return dumps({"op": op, **_ideal_summary(result)})
    if op == "classify":
        return dumps({"op": op, **_ideal_summary(ideal)})
    raise DocumentError(f"unknown ideal op {op!r}")


def _finish_doc(args, x, rep):
    fmt = _output_format(args, "json")
    return _render_number(x, fmt, _REP_OF_FORMAT.get(fmt, rep))


def _load_matrix(args, text):
    doc = loads(text)
    a = doc_to_matrix(doc)
    if args.n is not None and args.n != a.level:
        raise _UsageError(f"--n {args.n} disagrees with document level {a.level}")
    return a, doc.get("rep", STANDARD)


def _render_matrix(a, fmt, rep):
    if fmt == "json":
        return dumps(matrix_to_doc(a, rep))
    render = render_idempotent if fmt == "idem" else (lambda r: render_standard(from_idempotent(r)))
    rows = ["[" + "; ".join(render(e) for e in row) + "]" for row in a.entries()]
    return "\n".join(rows) + "\n"


def _cmd_det(args, text, stderr):
    a, rep = _load_matrix(args, text)
    d = det(a)
    fmt = _output_format(args, "json")
    out = _render_number(from_idempotent(d), fmt, _REP_OF_FORMAT.get(fmt, rep))
    dead = singular_components(a, _tol(args, 1e-10))
    if dead:
        stderr.write(f"mcx: singular: determinant components {_labels(dead)} vanish\n")
        return out, EXIT_DOMAIN
    return out, EXIT_OK


def _cmd_inv(args, text):
    a, rep = _load_matrix(args, text)
    inv = invert_matrix(a, _tol(args, 1e-10))
    fmt = _output_format(args, "json")
    return _render_matrix(inv, fmt, _REP_OF_FORMAT.get(fmt, rep))


def _cmd_eig(args, text):
    a, rep = _load_matrix(args, text)
    result = spectral_decompose(a, _tol(args, 1e-10))
    fmt = _output_format(args, "json")
    if fmt == "json":
        return dumps({
            "eigenvalues": [number_to_doc(lam, rep) for lam in result.eigenvalues],
            "eigenkets": [ket_to_doc(psi, rep) for psi in result.eigenkets],
            "residual": result.residual,
        })
    lines = []
    for l, (lam, psi) in enumerate(zip(result.eigenvalues, result.eigenkets), start=1):
        if fmt == "idem":
            coords = ", ".join(render_idempotent(e) for e in psi.entries())
            value = render_idempotent(lam)
        else:
            coords = ", ".join(render_standard(from_idempotent(e)) for e in psi.entries())
            value = render_standard(from_idempotent(lam))
        lines.append(f"λ{l} = {value}    ψ{l} = [{coords}]")
    lines.append(f"residual = {format_real(result.residual)}")
    return "\n".join(lines) + "\n"


def _labels(indices):
    return ", ".join(str(i + 1) for i in indices)


def _describe(exc):
    if isinstance(exc, NotSelfAdjointError):
        return f"not self-adjoint: {exc}"
    if isinstance(exc, NullConeError):
        what = "singular matrix" if isinstance(exc, SingularMatrixError) else "null cone"
        return f"{what}: components {_labels(exc.indices)} vanish"
    return str(exc)


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        stderr.write(f"mcx: error: {exc}\n")
        return EXIT_PARSE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    status = EXIT_OK
    try:
        positional = getattr(args, "expr", None) or getattr(args, "doc", None) or getattr(args, "query", None)
        text = _read_input(args, positional, stdin)
        if args.command in ("eval", "conj", "norm"):
            out = _cmd_number(args, text)
        elif args.command == "convert":
            out = _cmd_convert(args, text)
        elif args.command == "ideal":
            out = _cmd_ideal(args, text)
        elif args.command == "det":
            out, status = _cmd_det(args, text, stderr)
        elif args.command == "inv":
            out = _cmd_inv(args, text)
        else:
            out = _cmd_eig(args, text)
    except OSError as exc:
        stderr.write(f"mcx: I/O error: {exc}\n")
        return EXIT_IO
    except (NullConeError, NotSelfAdjointError) as exc:
        stderr.write(f"mcx: error: {_describe(exc)}\n")
        return EXIT_DOMAIN
    except (MulticomplexError, ValueError, IndexError) as exc:
        stderr.write(f"mcx: error: {exc}\n")
        return EXIT_PARSE

    try:
        if args.outfile is not None:
            with open(args.outfile, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            stdout.write(out)
    except OSError as exc:
        stderr.write(f"mcx: I/O error: {exc}\n")
        return EXIT_IO
    return status


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
