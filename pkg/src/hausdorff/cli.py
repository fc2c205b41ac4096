"""Command line interface.

Sequence files are JSON objects::

    {"alpha": 0.0, "beta": 1.0, "kind": "moments" | "canonical",
     "dim": q, "data": [matrix, ...]}

where each matrix is a list of ``q`` rows of ``[re, im]`` pairs. Measure
files carry ``"kind": "measure"``, ``"nodes"`` and ``"weights"`` (same
matrix encoding) plus optional ``alpha`` and ``beta``.

Exit codes: 0 success or positive verdict, 2 negative verdict, 1 usage
or I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .fparam import (
    IntervalContext,
    canonical_moments,
    classify,
    det_rank_report,
    extend,
    from_canonical,
    is_Fg,
    is_Fgg,
)
from .linalg import DomainError, InvalidInputError, NumericalConsistencyError, Tol, rank_tol
from .measures import MolecularMeasure, SamplerConfig, moments, sample_moment_space
from .transforms import affine_transform, transformed_context

EXIT_OK, EXIT_IO, EXIT_NEGATIVE = 0, 1, 2


class FileFormatError(Exception):
    """Malformed input file; the message names the offending location."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


# -- file format -------------------------------------------------------------

def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(obj, q: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != q:
        raise FileFormatError(f"{where}: expected {q} rows")
    M = np.empty((q, q), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != q:
            raise FileFormatError(f"{where}[{i}]: expected {q} entries")
        for j, z in enumerate(row):
            ok = (isinstance(z, list) and len(z) == 2
                  and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z))
            if not ok:
                raise FileFormatError(f"{where}[{i}][{j}]: expected a [re, im] pair of numbers")
            M[i, j] = complex(z[0], z[1])
    if not np.all(np.isfinite(M)):
        raise FileFormatError(f"{where}: non-finite entry")
    return M


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise FileFormatError(f"{path}: {exc.strerror}")


def _number(obj, key, path):
    v = obj.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
        raise FileFormatError(f"{path}: field '{key}' must be a finite number")
    return float(v)


def _dim(obj, path):
    q = obj.get("dim")
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise FileFormatError(f"{path}: field 'dim' must be a positive integer")
    return q


def read_sequence_file(path: str, kind: str | None = None):
    """Return ``(alpha, beta, kind, data)`` from a sequence file."""
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    alpha, beta = _number(obj, "alpha", path), _number(obj, "beta", path)
    k = obj.get("kind")
    if k not in ("moments", "canonical"):
        raise FileFormatError(f"{path}: field 'kind' must be 'moments' or 'canonical'")
    if kind is not None and k != kind:
        raise FileFormatError(f"{path}: expected kind '{kind}', found '{k}'")
    q = _dim(obj, path)
    data = obj.get("data")
    if not isinstance(data, list) or not data:
        raise FileFormatError(f"{path}: field 'data' must be a non-empty list")
    arr = np.stack([decode_matrix(m, q, f"{path}: data[{i}]") for i, m in enumerate(data)])
    return alpha, beta, k, arr


def sequence_document(alpha, beta, kind, data, **extra) -> dict:
    data = np.asarray(data, dtype=complex)
    doc = {"alpha": float(alpha), "beta": float(beta), "kind": kind,
           "dim": int(data.shape[1]), "data": [encode_matrix(m) for m in data]}
    doc.update(extra)
    return doc


def read_measure_file(path: str):
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    q = _dim(obj, path)
    nodes = obj.get("nodes")
    weights = obj.get("weights")
    if not isinstance(nodes, list) or not nodes or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in nodes):
        raise FileFormatError(f"{path}: field 'nodes' must be a non-empty list of numbers")
    if not isinstance(weights, list) or len(weights) != len(nodes):
        raise FileFormatError(f"{path}: field 'weights' must list one matrix per node")
    W = np.stack([decode_matrix(m, q, f"{path}: weights[{i}]") for i, m in enumerate(weights)])
    try:
        mu = MolecularMeasure(np.asarray(nodes, dtype=float), W)
    except InvalidInputError as exc:
        raise FileFormatError(f"{path}: {exc}")
    alpha = _number(obj, "alpha", path) if "alpha" in obj else None
    beta = _number(obj, "beta", path) if "beta" in obj else None
    return mu, alpha, beta


def _emit(doc):
    json.dump(doc, sys.stdout)
    sys.stdout.write("\n")


def _warn(msg):
    print(msg, file=sys.stderr)


# -- commands ----------------------------------------------------------------

def _tol(args) -> Tol:
    return Tol(args.tol_rank, args.tol_psd, args.tol_eq)


def _ctx(alpha, beta, args) -> IntervalContext:
    return IntervalContext(alpha, beta, _tol(args))


def _cplx(z):
    return [float(np.real(z)), float(np.imag(z))]


def cmd_check(args) -> int:
    alpha, beta, _, s = read_sequence_file(args.file, "moments")
    ctx = _ctx(alpha, beta, args)
    fgg = is_Fgg(s, ctx)
    report = {"Fgg": fgg, "Fg": bool(fgg and is_Fg(s, ctx))}
    if fgg:
        rep = det_rank_report(s, ctx)
        report["hankel"] = {
            name: {"rank": fr.rank_hankel, "rank_f": fr.rank_f,
                   "det": [_cplx(z) for z in fr.det_hankel],
                   "det_f": [_cplx(z) for z in fr.det_f]}
            for name, fr in rep.families.items()
        }
    _emit(report)
    return EXIT_OK if fgg else EXIT_NEGATIVE


def cmd_canonical(args) -> int:
    alpha, beta, _, s = read_sequence_file(args.file, "moments")
    ctx = _ctx(alpha, beta, args)
    cm = canonical_moments(s, ctx)
    ranks = [rank_tol(d, ctx.tol) for d in cm.d]
    _emit(sequence_document(alpha, beta, "canonical", cm.e, d_ranks=ranks, P_ranks=ranks))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    alpha, beta, _, e = read_sequence_file(args.file, "canonical")
    s = from_canonical(e, _ctx(alpha, beta, args))
    _emit(sequence_document(alpha, beta, "moments", s))
    return EXIT_OK


def cmd_extend(args) -> int:
    alpha, beta, _, s = read_sequence_file(args.file, "moments")
    ctx = _ctx(alpha, beta, args)
    q = s.shape[1]
    if args.matrix is not None:
        obj = _read_json(args.matrix)
        if isinstance(obj, dict):
            obj = obj.get("matrix")
        K = decode_matrix(obj, q, f"{args.matrix}: matrix")
    else:
        K = args.lam
    for _ in range(args.steps):
        s = extend(s, ctx, K)
    _emit(sequence_document(alpha, beta, "moments", s))
    return EXIT_OK


def cmd_transform(args) -> int:
    alpha, beta, _, s = read_sequence_file(args.file, "moments")
    ctx = _ctx(alpha, beta, args)
    new = transformed_context(ctx, args.eta, args.theta)
    w = affine_transform(s, args.eta, args.theta)
    _emit(sequence_document(new.alpha, new.beta, "moments", w))
    return EXIT_OK


def cmd_classify(args) -> int:
    alpha, beta, _, s = read_sequence_file(args.file, "moments")
    _emit(asdict(classify(s, _ctx(alpha, beta, args))))
    return EXIT_OK


def cmd_sample(args) -> int:
    ctx = IntervalContext(args.alpha, args.beta, _tol(args))
    cfg = SamplerConfig(args.q, args.kappa, args.seed, args.boundary_bias)
    s, e = sample_moment_space(cfg, ctx)
    _emit(sequence_document(ctx.alpha, ctx.beta, "moments", s,
                            canonical=[encode_matrix(m) for m in e]))
    return EXIT_OK


def cmd_moments(args) -> int:
    mu, alpha, beta = read_measure_file(args.file)
    alpha = args.alpha if args.alpha is not None else alpha
    beta = args.beta if args.beta is not None else beta
    if alpha is None or beta is None:
        raise FileFormatError(f"{args.file}: interval missing; give alpha/beta in the file or on the command line")
    ctx = _ctx(alpha, beta, args)
    if mu.nodes[0] < ctx.alpha or mu.nodes[-1] > ctx.beta:
        raise InvalidInputError("measure has nodes outside [alpha, beta]")
    _emit(sequence_document(alpha, beta, "moments", moments(mu, args.kappa)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hausdorff", description="Matrix moment sequences on a compact interval.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, file_help="sequence file (JSON)"):
        sp = sub.add_parser(name, help=help_)
        if file_help:
            sp.add_argument("file", help=file_help)
        sp.add_argument("--tol-rank", type=float, default=Tol.rank_rel)
        sp.add_argument("--tol-psd", type=float, default=Tol.psd_abs)
        sp.add_argument("--tol-eq", type=float, default=Tol.eq_abs)
        sp.set_defaults(func=func)
        return sp

    add("check", cmd_check, "test membership; exit 2 if not a moment sequence")
    add("canonical", cmd_canonical, "moments -> canonical moments")
    add("reconstruct", cmd_reconstruct, "canonical moments -> moments")
    sp = add("extend", cmd_extend, "append moments inside the extension interval")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.5,
                    help="position in the extension interval, K = lambda I")
    sp.add_argument("--matrix", default=None, help="JSON file with a contraction K")
    sp.add_argument("--steps", type=int, default=1)
    sp = add("transform", cmd_transform, "moments of the image under x -> theta x + eta")
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--eta", type=float, default=0.0)
    add("classify", cmd_classify, "degeneracy, centrality, symmetry and interior flags")
    sp = add("sample", cmd_sample, "draw a random moment sequence", file_help=None)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--kappa", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--boundary-bias", type=float, default=0.0)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=1.0)
    sp = add("moments", cmd_moments, "moments of a molecular measure", file_help="measure file (JSON)")
    sp.add_argument("--kappa", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--beta", type=float, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        _warn(f"error: {exc}")
        return EXIT_IO
    except DomainError as exc:
        _warn(f"negative: {exc}")
        return EXIT_NEGATIVE
    except InvalidInputError as exc:
        _warn(f"error: {exc}")
        return EXIT_IO
    except NumericalConsistencyError as exc:
        _warn(f"numerical error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
