"""``coverlab`` command line.

Exit codes: 0 definitive answer, 2 inconclusive, 3 invalid input, 4 resource cap.
Every document on stdout is compact JSON with sorted keys and a
``schema_version`` field.  Input paths may be given as ``catalog:<name>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, catalog, certifier, crt, distortion, exact
from .errors import CoverlabError, InvalidInputError, TriviallyCoveringError
from .model import Instance
from .serialize import dumps, fmt_rational, parse_rational

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_CAP = 0, 2, 3, 4


def _read_json(ref: str) -> tuple[dict, str | None]:
    """Returns the document and its catalog kind (None for files)."""
    if ref.startswith("catalog:"):
        entry = catalog.get(ref[len("catalog:"):])
        return entry.payload_json(), entry.kind
    try:
        with open(ref) as fh:
            return json.load(fh), None
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {ref}: {exc}") from exc


def _instance(ref: str) -> Instance:
    doc, kind = _read_json(ref)
    if kind not in (None, "hyperplane-instance"):
        raise InvalidInputError(f"{ref} is a {kind}, not a hyperplane instance")
    return Instance.from_json(doc)


def _system(ref: str) -> crt.APSystem:
    doc, kind = _read_json(ref)
    if kind not in (None, "ap-system"):
        raise InvalidInputError(f"{ref} is a {kind}, not a progression system")
    return crt.APSystem.from_json(doc)


def _cap(args) -> int:
    return args.cap if args.cap is not None else exact.default_cap()


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> tuple[int, dict]:
    if args.system:
        verdict = exact.ap_is_covering(_system(args.system), _cap(args))
    else:
        verdict = exact.is_covering(_instance(args.instance), _cap(args))
    return EXIT_OK, verdict.to_json()


def cmd_certify(args) -> tuple[int, dict]:
    inst = _instance(args.instance)
    delta = parse_rational(args.delta)
    try:
        cert = certifier.certify(inst, delta, args.mode, _cap(args))
    except TriviallyCoveringError as exc:
        return EXIT_INCONCLUSIVE, {"delta": fmt_rational(delta), "mode": args.mode,
                                   "verdict": certifier.INCONCLUSIVE, "reason": str(exc)}
    code = EXIT_OK if cert.verdict == certifier.NOT_COVERING else EXIT_INCONCLUSIVE
    return code, cert.to_json()


def cmd_distort(args) -> tuple[int, dict]:
    inst = _instance(args.instance)
    trace = distortion.run(inst, parse_rational(args.delta), _cap(args), trace_full=args.trace_full)
    return EXIT_OK, trace.to_json(full=args.trace_full)


def cmd_bound(args) -> tuple[int, dict]:
    eps = parse_rational(args.eps)
    if args.sizes:
        doc, _ = _read_json(args.sizes)
        try:
            sizes = doc["sizes"]
        except (KeyError, TypeError) as exc:
            raise InvalidInputError("sizes document needs a 'sizes' list") from exc
        spec = bounds.SequenceSpec("explicit", args.N, eps, tuple(sizes))
    else:
        spec = bounds.SequenceSpec("primes", args.N, eps)
    delta = parse_rational(args.delta) if args.delta is not None else None
    result = bounds.min_C(spec, delta, growth_range=args.growth_range)
    doc = {
        "C": result.C_string(),
        "N": args.N,
        "eps": fmt_rational(eps),
        "delta": fmt_rational(result.delta),
        "sequence": spec.kind,
        "audit": result.audit,
        "reference_constants": bounds.REFERENCE_CONSTANTS,
    }
    if spec.kind == "primes":
        doc["min_modulus_bound"] = bounds.min_modulus_summary(result.C)
    return EXIT_OK, doc


def cmd_crt_map(args) -> tuple[int, dict]:
    return EXIT_OK, crt.system_to_instance(_system(args.system)).to_json()


def cmd_catalog(args) -> tuple[int, dict]:
    if args.action == "list":
        rows = [{"name": n, "kind": k, "expected": e} for n, k, e in catalog.list_entries()]
        return EXIT_OK, {"entries": rows}
    if not args.name:
        raise InvalidInputError("catalog get needs a name")
    entry = catalog.get(args.name)
    return EXIT_OK, {"name": entry.name, "kind": entry.kind, "expected": entry.expected,
                     "provenance": entry.provenance, "payload": entry.payload_json()}


# ---------------------------------------------------------------- parser

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--cap", type=int, default=d(None), help="point/residue limit (env COVERLAB_CAP)")
    p.add_argument("--output", choices=["json"], default=d("json"))
    p.add_argument("--quiet", action="store_true", default=d(False), help="no diagnostics on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coverlab", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("verify", cmd_verify, "decide covering by enumeration")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance")
    g.add_argument("--system")

    p = add("certify", cmd_certify, "second-moment non-covering certificate")
    p.add_argument("--instance", required=True)
    p.add_argument("--delta", default="1/4")
    p.add_argument("--mode", choices=certifier.MODES, default="exact")

    p = add("distort", cmd_distort, "exact distorted measures and residual bound")
    p.add_argument("--instance", required=True)
    p.add_argument("--delta", default="1/4")
    p.add_argument("--trace-full", action="store_true")

    p = add("bound", cmd_bound, "explicit constant C for a growing sequence")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--sequence", choices=["primes"])
    g.add_argument("--sizes")
    p.add_argument("--eps", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--delta")
    p.add_argument("--growth-range", type=int, default=bounds.DEFAULT_GROWTH_RANGE,
                   help="check p_k >= (3+eps)k up to this index (primes only)")

    p = add("crt-map", cmd_crt_map, "progression system -> hyperplane instance")
    p.add_argument("--system", required=True)

    p = add("catalog", cmd_catalog, "list or show catalog entries")
    p.add_argument("action", choices=["list", "get"])
    p.add_argument("name", nargs="?")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, doc = args.func(args)
    except CoverlabError as exc:
        if not args.quiet:
            print(f"coverlab: {exc}", file=sys.stderr)
        code = exc.exit_code
        doc = {"error": str(exc), "error_type": type(exc).__name__}
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
