"""``wavemat`` command line interface.

Exit codes: 0 success, 2 unreadable or malformed input, 3 mathematical
failure.  Errors are reported as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io as wio
from .approx import rational_approximate
from .complete import complete_from_row
from .core import classify
from .errors import WaveMatError
from .factorize import factorize, product_chain
from .field import DEFAULT_POLICY, TolerancePolicy, get_field
from .parametrize import generate, wavelet_to_params

EXIT_PARSE = 2
EXIT_MATH = 3


class UsageError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise wio.DocumentError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _policy():
    eps = os.environ.get("WAVEMAT_EPS")
    if not eps:
        return DEFAULT_POLICY
    try:
        return TolerancePolicy(DEFAULT_POLICY.zero_eps, float(eps))
    except ValueError:
        raise wio.DocumentError(f"WAVEMAT_EPS must be a nonnegative number, got {eps!r}") from None


def _field(args):
    if args.field is None:
        return None
    return get_field(args.field, _policy() if args.field == "c64" else None)


def _load(path, args):
    """Parse the document and pick the backend (flag, else its tag)."""
    doc = wio.loads(_read(path))
    f = _field(args)
    if f is None:
        tag = doc.get("field", "c64")
        try:
            f = get_field(tag, _policy() if tag == "c64" else None)
        except ValueError as exc:
            raise wio.DocumentError(str(exc)) from None
    return doc, f


def cmd_generate(args):
    doc, f = _load(args.params, args)
    _write(args.out, wio.dumps(wio.matrix_to_doc(generate(wio.doc_to_params(doc, f)))))


def cmd_params(args):
    doc, f = _load(args.matrix, args)
    _write(args.out, wio.dumps(wio.params_to_doc(wavelet_to_params(wio.doc_to_matrix(doc, f)))))


def cmd_factor(args):
    doc, f = _load(args.matrix, args)
    _write(args.out, wio.dumps(wio.chain_to_doc(factorize(wio.doc_to_matrix(doc, f)))))


def cmd_product(args):
    doc, f = _load(args.chain, args)
    _write(args.out, wio.dumps(wio.matrix_to_doc(product_chain(wio.doc_to_chain(doc, f)))))


def cmd_complete(args):
    doc, f = _load(args.row, args)
    r = wio.doc_to_row(doc, f)
    V = None
    if args.unitary is not None:
        V = wio.doc_to_unitary(wio.loads(_read(args.unitary)), f)
    _write(args.out, wio.dumps(wio.matrix_to_doc(complete_from_row(r, V))))


def cmd_check(args):
    doc, f = _load(args.matrix, args)
    _write(args.out, wio.dumps(classify(wio.doc_to_matrix(doc, f))))


def cmd_approx(args):
    doc, f = _load(args.matrix, args)
    if f.exact:
        raise UsageError("approx takes a c64 matrix; the output is always qi")
    Aq, report = rational_approximate(wio.doc_to_matrix(doc, f), args.max_den)
    _write(args.out, wio.dumps(wio.matrix_to_doc(Aq)))
    text = wio.dumps(report.to_json())
    if args.report:
        _write(args.report, text)
    else:
        sys.stderr.write(text)


def cmd_export(args):
    doc, f = _load(args.matrix, args)
    _write(args.out, wio.flat_csv(wio.doc_to_matrix(doc, f)))


def build_parser():
    p = argparse.ArgumentParser(prog="wavemat", description="Wavelet matrix toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log debug details to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, inp, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument(inp, help='input document ("-" for stdin)')
        s.add_argument("--field", choices=("c64", "qi"), help="backend (default: the document's)")
        s.add_argument("--out", default="-", help='output path (default "-" for stdout)')
        s.set_defaults(fn=fn)
        return s

    verb("generate", cmd_generate, "params", "parameters -> wavelet matrix")
    verb("params", cmd_params, "matrix", "wavelet matrix in WM1 -> parameters")
    verb("factor", cmd_factor, "matrix", "factor into primitive matrices")
    verb("product", cmd_product, "chain", "multiply a chain of primitive matrices")
    s = verb("complete", cmd_complete, "row", "complete a first row to a wavelet matrix")
    s.add_argument("unitary", nargs="?", help="unitary document fixing A(1) (default identity)")
    verb("check", cmd_check, "matrix", "order, degree, residual and class")
    s = verb("approx", cmd_approx, "matrix", "exactly orthogonal rational approximation")
    s.add_argument("--max-den", type=int, default=10_000, help="denominator bound")
    s.add_argument("--report", help="where to write the report (default stderr)")
    s = verb("export", cmd_export, "matrix", "flat coefficient rows")
    s.add_argument("--csv", action="store_true", help="CSV output (the only format)")
    return p


def _fail(code, payload):
    sys.stderr.write(wio.dumps(payload))
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "max_den", 1) < 1:
        return _fail(EXIT_PARSE, {"error": "usage", "message": "--max-den must be positive"})
    try:
        args.fn(args)
    except wio.DocumentError as exc:
        return _fail(EXIT_PARSE, exc.payload())
    except UsageError as exc:
        return _fail(EXIT_PARSE, {"error": "usage", "message": str(exc)})
    except WaveMatError as exc:
        return _fail(EXIT_MATH, exc.payload())
    return 0


if __name__ == "__main__":
    sys.exit(main())
