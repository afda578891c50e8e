"""Command-line front end.

Exit codes: 0 success (including a definite "no"), 1 usage or input error,
2 inconclusive (iteration budget exhausted, enumeration not closed).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .chamber import incident_roots
from .classify import (
    classical_invariants,
    classify_blowup,
    diffeomorphic,
    exceptional_below,
    minimal_exceptional,
)
from .exceptional import DEFAULT_A_MAX, demazure_classes
from .formvec import FormVector, as_rational
from .homology import HomologyClass, format_class
from .reduction import DEFAULT_MAX_ITER, Inconclusive, MoveTrace, chamber_probe, reduce

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1} in {text!r}")
        self.pos = pos


_RAT = re.compile(r"-?\d+(?:/\d+|\.\d+)?")
_WS = re.compile(r"\s*")


def parse_rational(token: str) -> Fraction:
    m = _RAT.fullmatch(token.strip())
    if not m:
        raise ParseError("malformed number", token, 0)
    return _rat(m.group(0), token, 0)


def _rat(s: str, text: str, pos: int) -> Fraction:
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError("zero denominator", text, pos) from None


def _parse_json_vector(text: str) -> FormVector:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON ({exc.msg})", text, exc.pos) from None
    if not isinstance(obj, dict) or "lambda" not in obj or "deltas" not in obj:
        raise ParseError('JSON vector needs "lambda" and "deltas"', text, 0)
    if not isinstance(obj["deltas"], list):
        raise ParseError('"deltas" must be a list', text, 0)
    try:
        vals = [obj["lambda"], *obj["deltas"]]
        if any(isinstance(x, float) for x in vals):
            raise ValueError("floats are not exact; quote the number")
        return FormVector.from_entries([as_rational(x) for x in vals])
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), text, 0) from None


def parse_vector(text: str) -> FormVector:
    """Parse ``"15; 9, 5, 4"``, ``"(15;9,5,4)"`` or the JSON object form."""
    if text.lstrip().startswith("{"):
        return _parse_json_vector(text)
    pos = _WS.match(text, 0).end()
    closing = False
    if text.startswith("(", pos):
        closing = True
        pos = _WS.match(text, pos + 1).end()

    def number(p: int) -> tuple[Fraction, int]:
        m = _RAT.match(text, p)
        if not m:
            raise ParseError("expected a number", text, p)
        return _rat(m.group(0), text, p), _WS.match(text, m.end()).end()

    lam, pos = number(pos)
    if not text.startswith(";", pos):
        raise ParseError("expected ';' after lambda", text, pos)
    pos = _WS.match(text, pos + 1).end()
    deltas = []
    if pos < len(text) and text[pos] not in ")":
        d, pos = number(pos)
        deltas.append(d)
        while text.startswith(",", pos):
            d, pos = number(_WS.match(text, pos + 1).end())
            deltas.append(d)
    if closing:
        if not text.startswith(")", pos):
            raise ParseError("expected ')'", text, pos)
        pos = _WS.match(text, pos + 1).end()
    if pos != len(text):
        raise ParseError("unexpected trailing input", text, pos)
    return FormVector(lam, tuple(deltas))


def format_vector(v: FormVector) -> str:
    """Inverse of :func:`parse_vector`."""
    return f"{v.lam}; {', '.join(str(d) for d in v.deltas)}" if v.deltas else f"{v.lam};"


# ----------------------------------------------------------------------------
# JSON encoding.  Rationals are strings, classes are {"a": .., "b": [..]}.

def vector_json(v: FormVector | None):
    if v is None:
        return None
    return {"lambda": str(v.lam), "deltas": [str(d) for d in v.deltas]}


def class_json(A: HomologyClass) -> dict:
    return {"a": A.a, "b": list(A.b)}


def class_from_json(obj) -> HomologyClass:
    return HomologyClass(obj["a"], tuple(obj["b"]))


def trace_json(t: MoveTrace) -> list:
    return [{"perm": [p + 1 for p in r.perm], "cremona": r.cremona_fired} for r in t]


def _sorted_classes(classes) -> list[HomologyClass]:
    return sorted(classes, key=lambda A: (A.a, tuple(-x for x in A.b)))


def _rat_json(q):
    return None if q is None else str(q)


# ----------------------------------------------------------------------------
# Commands.  Each returns (exit code, record); the record is a JSON-able dict.

def cmd_reduce(v: FormVector, opts) -> tuple[int, dict]:
    try:
        res = reduce(v, opts.max_iter)
    except Inconclusive as exc:
        p = exc.partial
        return EXIT_INCONCLUSIVE, {
            "command": "reduce", "input": vector_json(v), "inconclusive": True,
            "reason": "IterationBudgetExhausted", "iterations": p.iterations,
            "partial": vector_json(p.v_red), "cone": p.cone.value,
        }
    rec = {"command": "reduce", "input": vector_json(v), "v_red": vector_json(res.v_red),
           "iterations": res.iterations, "cremona_steps": res.trace.cremona_count,
           "cone": res.cone.value}
    if opts.trace:
        rec["trace"] = trace_json(res.trace)
    return EXIT_OK, rec


def cmd_classify(v: FormVector, opts) -> tuple[int, dict]:
    verdict = classify_blowup(v, opts.max_iter)
    rec = {"command": "classify", "input": vector_json(v), "is_blowup": verdict.is_blowup,
           "reason": verdict.reason.value, "v_red": vector_json(verdict.v_red)}
    if opts.trace:
        rec["trace"] = trace_json(verdict.trace)
    return EXIT_OK, rec


def cmd_diffeo(v: FormVector, w: FormVector, opts) -> tuple[int, dict]:
    res = diffeomorphic(v, w, opts.max_iter)
    return EXIT_OK, {
        "command": "diffeo", "left": vector_json(v), "right": vector_json(w),
        "diffeomorphic": res.diffeomorphic,
        "left_red": vector_json(res.left.v_red), "right_red": vector_json(res.right.v_red),
    }


def cmd_minimal(v: FormVector, opts) -> tuple[int, dict]:
    rep = minimal_exceptional(v, opts.max_iter)
    rec = {"command": "minimal", "input": vector_json(v), "case": rep.case_label,
           "min_area": _rat_json(rep.min_area),
           "classes": [class_json(A) for A in _sorted_classes(rep.classes)],
           "v_red": vector_json(rep.v_red),
           "reduced_classes": [class_json(A) for A in _sorted_classes(rep.reduced_classes)]}
    if opts.trace:
        rec["trace"] = trace_json(rep.trace)
    return EXIT_OK, rec


def cmd_invariants(v: FormVector, opts) -> tuple[int, dict]:
    inv = classical_invariants(v)
    return EXIT_OK, {"command": "invariants", "input": vector_json(v),
                     "volume_term": str(inv.volume_term), "chern_pairing": str(inv.chern_pairing)}


def cmd_enumerate(v: FormVector, bound: Fraction, a_max: int, opts) -> tuple[int, dict]:
    res = exceptional_below(v, bound, a_max, opts.max_iter)
    rec = {"command": "enumerate", "input": vector_json(v), "bound": str(bound),
           "complete": res.complete, "a_reached": res.a_reached,
           "classes": [class_json(A) for A in _sorted_classes(res.classes)]}
    if not res.complete:
        rec.update(inconclusive=True, reason="EnumerationIncomplete")
        return EXIT_INCONCLUSIVE, rec
    return EXIT_OK, rec


def cmd_demazure(k: int, opts) -> tuple[int, dict]:
    classes = _sorted_classes(demazure_classes(k))
    return EXIT_OK, {"command": "demazure", "k": k, "count": len(classes),
                     "classes": [class_json(A) for A in classes]}


def cmd_probe(v: FormVector, radius: Fraction, samples: int, seed: int, opts) -> tuple[int, dict]:
    rep = chamber_probe(v, radius, samples, seed, opts.max_iter)
    return EXIT_OK, {"command": "chamber-probe", "input": vector_json(v), "radius": str(radius),
                     "samples": rep.samples, "seed": seed, "constant_trace": rep.constant_trace,
                     "hyperplane_hits": rep.hyperplane_hits, "center_on_wall": rep.center_on_wall}


def cmd_roots(v: FormVector, height: int, opts) -> tuple[int, dict]:
    roots = sorted(incident_roots(v, height), key=lambda r: r.e.entries)
    return EXIT_OK, {"command": "roots", "input": vector_json(v), "height_bound": height,
                     "roots": [vector_json(r.e) for r in roots]}


# ----------------------------------------------------------------------------
# Text rendering.

def _vec_text(obj) -> str:
    if obj is None:
        return "-"
    return format_vector(FormVector.from_entries([obj["lambda"], *obj["deltas"]]))


def _classes_text(objs) -> list[str]:
    out = []
    for o in objs:
        A = class_from_json(o)
        out.append(f"  {format_class(A):<40} ({A.a}; {', '.join(map(str, A.b))})")
    return out


def render_text(rec: dict) -> str:
    lines = []
    vec_keys = {"input", "v_red", "partial", "left", "right", "left_red", "right_red"}
    for key, val in rec.items():
        if key == "command":
            continue
        if key in ("classes", "reduced_classes"):
            lines.append(f"{key}: {len(val)}")
            lines.extend(_classes_text(val))
        elif key == "trace":
            lines.append(f"trace: {len(val)} moves")
            for i, m in enumerate(val, 1):
                perm = " ".join(map(str, m["perm"]))
                lines.append(f"  {i:>4}  perm [{perm}]  cremona={'yes' if m['cremona'] else 'no'}")
        elif key == "roots":
            lines.append(f"roots: {len(val)}")
            lines.extend(f"  {_vec_text(r)}" for r in val)
        elif key in vec_keys:
            lines.append(f"{key}: {_vec_text(val)}")
        elif key == "is_blowup":
            lines.append(f"{key}: {'yes' if val else 'no'}")
        elif isinstance(val, bool):
            lines.append(f"{key}: {'true' if val else 'false'}")
        else:
            lines.append(f"{key}: {val}")
    width = max((len(l.split(':', 1)[0]) for l in lines if not l.startswith(' ')), default=0)
    out = []
    for l in lines:
        if l.startswith(" ") or ":" not in l:
            out.append(l)
        else:
            k, v = l.split(":", 1)
            out.append(f"{k + ':':<{width + 1}}{v}")
    return "\n".join(out)


def emit(rec: dict, opts, stream=None) -> None:
    stream = stream or sys.stdout
    if opts.json:
        stream.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        stream.write(render_text(rec) + "\n")
    stream.flush()


# ----------------------------------------------------------------------------
# Batch mode.

def _batch_line(args) -> tuple[int, dict]:
    lineno, line, op, opts = args
    try:
        parts = [p.strip() for p in line.split("|")]
        if len(parts) == 2:
            code, rec = cmd_diffeo(parse_vector(parts[0]), parse_vector(parts[1]), opts)
        elif len(parts) == 1:
            code, rec = BATCH_OPS[op](parse_vector(parts[0]), opts)
        else:
            raise ValueError("expected VEC or VEC | VEC")
    except Inconclusive as exc:
        code, rec = EXIT_INCONCLUSIVE, {"inconclusive": True, "reason": "IterationBudgetExhausted",
                                        "error": str(exc)}
    except (ValueError, TypeError) as exc:
        code, rec = EXIT_USAGE, {"error": str(exc)}
    return code, {"line": lineno, **rec}


BATCH_OPS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "minimal": cmd_minimal,
    "invariants": cmd_invariants,
}


def _batch_inputs(path: str):
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line
    finally:
        if stream is not sys.stdin:
            stream.close()


def cmd_batch(path: str, op: str, jobs: int, opts) -> int:
    work = ((n, line, op, _Opts.of(opts)) for n, line in _batch_inputs(path))
    codes = set()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_batch_line, work, chunksize=4)
            for code, rec in results:
                codes.add(code)
                emit(rec, opts)
    else:
        for item in work:
            code, rec = _batch_line(item)
            codes.add(code)
            emit(rec, opts)
    if EXIT_USAGE in codes:
        return EXIT_USAGE
    return EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_OK


class _Opts:
    """Picklable copy of the global flags for worker processes."""

    def __init__(self, json_, trace, max_iter):
        self.json, self.trace, self.max_iter = json_, trace, max_iter

    @classmethod
    def of(cls, ns) -> _Opts:
        return cls(ns.json, ns.trace, ns.max_iter)


# ----------------------------------------------------------------------------
# Argument parsing.

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1; 0, 0, 0" through as a positional vector
        self._negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _vector_arg(text: str) -> FormVector:
    try:
        return parse_vector(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def default_max_iter() -> int:
    env = os.environ.get("CREMONA_MAX_ITER")
    if env is None:
        return DEFAULT_MAX_ITER
    try:
        return _positive_int(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"CREMONA_MAX_ITER: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit one JSON object per result")
    common.add_argument("--trace", action="store_true", default=argparse.SUPPRESS,
                        help="include the move trace")
    common.add_argument("--max-iter", type=_positive_int, default=argparse.SUPPRESS,
                        metavar="N", help="iteration budget for reductions")

    p = _Parser(prog="cremona", parents=[common],
                description="Exact decisions for blowups of CP^2 encoded as (lambda; delta_1, ..., delta_k).",
                epilog='Vectors look like "15; 9, 5, 4", "(1; 1/3, 0.25, 2)" or a JSON object.')
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("reduce", "reduce a vector to canonical form").add_argument("vector", type=_vector_arg)
    add("classify", "does the class contain a blowup form?").add_argument("vector", type=_vector_arg)
    s = add("diffeo", "are two blowup forms diffeomorphic?")
    s.add_argument("vector", type=_vector_arg)
    s.add_argument("other", type=_vector_arg)
    add("minimal", "exceptional classes of minimal area").add_argument("vector", type=_vector_arg)
    add("invariants", "volume and Chern pairing").add_argument("vector", type=_vector_arg)
    s = add("enumerate", "exceptional classes with area <= bound")
    s.add_argument("vector", type=_vector_arg)
    s.add_argument("--bound", type=_rational_arg, required=True)
    s.add_argument("--a-max", type=_positive_int, default=DEFAULT_A_MAX)
    s = add("demazure", "all exceptional classes for 1 <= k <= 8")
    s.add_argument("k", type=int)
    s = add("chamber-probe", "sample neighbours and compare reduction traces")
    s.add_argument("vector", type=_vector_arg)
    s.add_argument("--radius", type=_rational_arg, required=True)
    s.add_argument("--samples", type=_positive_int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s = add("roots", "integer (-2)-roots orthogonal to the vector")
    s.add_argument("vector", type=_vector_arg)
    s.add_argument("--height", type=_positive_int, default=1)
    s = add("batch", "one VEC or VEC | VEC per line; '#' starts a comment")
    s.add_argument("file", help="path, or - for stdin")
    s.add_argument("--op", choices=sorted(BATCH_OPS), default="classify",
                   help="operation for single-vector lines (pairs always run diffeo)")
    s.add_argument("--jobs", type=_positive_int, default=1)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        ns.json = getattr(ns, "json", False)
        ns.trace = getattr(ns, "trace", False)
        if not hasattr(ns, "max_iter"):
            ns.max_iter = default_max_iter()
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    try:
        if ns.command == "batch":
            return cmd_batch(ns.file, ns.op, ns.jobs, ns)
        if ns.command == "diffeo":
            code, rec = cmd_diffeo(ns.vector, ns.other, ns)
        elif ns.command == "enumerate":
            code, rec = cmd_enumerate(ns.vector, ns.bound, ns.a_max, ns)
        elif ns.command == "demazure":
            code, rec = cmd_demazure(ns.k, ns)
        elif ns.command == "chamber-probe":
            code, rec = cmd_probe(ns.vector, ns.radius, ns.samples, ns.seed, ns)
        elif ns.command == "roots":
            code, rec = cmd_roots(ns.vector, ns.height, ns)
        else:
            code, rec = BATCH_OPS[ns.command](ns.vector, ns)
    except Inconclusive as exc:
        code, rec = EXIT_INCONCLUSIVE, {"command": ns.command, "inconclusive": True,
                                        "reason": "IterationBudgetExhausted", "error": str(exc)}
    except (ValueError, TypeError, OSError) as exc:
        if ns.json:
            emit({"command": ns.command, "error": str(exc)}, ns)
        sys.stderr.write(f"cremona {ns.command}: {exc}\n")
        return EXIT_USAGE
    emit(rec, ns)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
