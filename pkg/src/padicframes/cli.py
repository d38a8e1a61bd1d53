"""Command-line interface.

Exit codes: 0 when the command succeeds or every identity holds, 2 when an
identity or inequality is violated (the report names the witness), 1 for
usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import duals, frames
from .corpus import SplitMix64, generate_corpus, random_table
from .fourier import fourier, inverse_fourier
from .framelet_sets import (
    example_set,
    generators_from_set,
    norm_identity_check,
    set_topology,
    verify_multiframelet_set,
)
from .frames import FrameBounds, FrameError, GeneratorSet, format_scalar
from .functions import Dilate, Modulate, PFunction, Translate
from .padic import PAdic, check_prime
from .serialize import (
    FieldError,
    dumps,
    function_doc,
    generators_doc,
    parse_function,
    parse_generators,
    parse_set,
    parse_table,
    set_doc,
    table_csv,
    table_doc,
)

OK, FAILED, USAGE = 0, 2, 1


class UsageError(Exception):
    pass


# -- input helpers ----------------------------------------------------------


def read_json(path: str | None):
    try:
        text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path or '<stdin>'}: malformed JSON at line {exc.lineno}: {exc.msg}") from None


def build_generators(choice: str, p: int, m: int) -> GeneratorSet:
    if choice == "kozyrev":
        return frames.kozyrev_generators(p)
    if choice == "ks":
        return frames.ks_generators(p, m)
    if choice == "doubled":
        return frames.doubled(frames.kozyrev_generators(p))
    if choice.startswith("weighted:"):
        try:
            ws = [Fraction(w) for w in choice.split(":", 1)[1].split(",")]
        except ValueError:
            raise UsageError(f"--gens: bad weights in {choice!r}") from None
        base = frames.kozyrev_generators(p)
        if len(ws) != base.L:
            raise UsageError(f"--gens: need {base.L} weights for p={p}")
        return frames.weighted(base, ws)
    if choice == "example-set":
        return generators_from_set(example_set(p))
    if Path(choice).is_file():
        doc = read_json(choice)
        if isinstance(doc, dict) and "parts" in doc:
            return generators_from_set(parse_set(doc))
        return parse_generators(doc)
    raise UsageError(f"--gens: unknown generator system {choice!r}")


def parse_unitary(choice: str, p: int):
    kind, _, arg = choice.partition(":")
    try:
        if kind == "translate":
            return Translate(PAdic.of(p, Fraction(arg)))
        if kind == "modulate":
            return Modulate(PAdic.of(p, Fraction(arg)))
        if kind == "dilate":
            return Dilate(int(arg))
    except ValueError:
        pass
    raise UsageError(f"--unitary: expected translate:<q>, modulate:<q> or dilate:<int>, got {choice!r}")


def load_corpus(args) -> list[PFunction]:
    if getattr(args, "input", None):
        doc = read_json(args.input)
        if isinstance(doc, dict) and "functions" in doc:
            p = doc.get("p", args.p)
            return [parse_function(f, f"functions[{i}]", p) for i, f in enumerate(doc["functions"])]
        return [parse_function(doc)]
    return generate_corpus(args.p, args.seed, args.corpus_size, zero_mean=args.zero_mean)


def read_one_function(path) -> PFunction:
    doc = read_json(path)
    if isinstance(doc, dict) and "functions" in doc:
        fs = doc["functions"]
        if not isinstance(fs, list) or len(fs) != 1:
            raise FieldError("functions", "expected exactly one function")
        return parse_function(fs[0], "functions[0]", doc.get("p"))
    return parse_function(doc)


def emit(args, doc, text: str | None = None) -> None:
    out = text if text is not None else dumps(doc)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def report(args, name: str, passed: bool, body: dict) -> int:
    emit(args, {"check": name, "passed": passed, **body})
    return OK if passed else FAILED


# -- commands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.system == "kozyrev":
        g = frames.kozyrev_generators(args.p)
    elif args.system == "ks":
        g = frames.ks_generators(args.p, args.m)
    else:
        if args.input:
            g = generators_from_set(parse_set(read_json(args.input)))
        else:
            g = generators_from_set(example_set(args.p))
    emit(args, generators_doc(g))
    return OK


def cmd_analyze(args) -> int:
    f = read_one_function(args.input)
    t = frames.analyze(f, build_generators(args.gens, f.p, args.m), args.j_min)
    emit(args, None, table_csv(t)) if args.format == "csv" else emit(args, table_doc(t))
    return OK


def cmd_synthesize(args) -> int:
    t = parse_table(read_json(args.input))
    emit(args, function_doc(frames.synthesize(t, build_generators(args.gens, t.p, args.m))))
    return OK


def cmd_fourier(args) -> int:
    f = read_one_function(args.input)
    emit(args, function_doc(fourier(f) if args.direction == "fwd" else inverse_fourier(f)))
    return OK


def cmd_corpus(args) -> int:
    fs = generate_corpus(args.p, args.seed, args.corpus_size, zero_mean=args.zero_mean)
    emit(args, {"p": args.p, "seed": args.seed, "functions": [function_doc(f) for f in fs]})
    return OK


def verify_parseval(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    rep = frames.verify_frame_bounds(gens, load_corpus(args), FrameBounds(1, 1))
    ok = rep.all_equal_to(1)
    body = rep.summary()
    body["verdict"] = "ratios: all exactly 1" if ok else "ratios: not all 1"
    return report(args, "parseval", ok, body)


def verify_bounds(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    if args.A is None or args.B is None:
        raise UsageError("verify bounds needs --A and --B")
    rep = frames.verify_frame_bounds(gens, load_corpus(args), FrameBounds(args.A, args.B))
    return report(args, "bounds", rep.passed, rep.summary())


def _dual_for(args, gens):
    if args.window:
        G, c = args.window
        return duals.canonical_dual(gens, duals.Window(duals.WindowSpace(gens.p, G, c)))
    return duals.canonical_dual(gens)


def verify_dual(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    if args.numeric:
        if not args.window:
            raise UsageError("--numeric needs --window G,c")
        w = duals.WindowSpace(gens.p, *args.window)
        root = duals.s_inv_sqrt_window(gens, w)
        eig = duals.window_eigenvalues(duals.window_matrix("frame", gens, w))
        tol = 2.0 ** -args.tolerance_bits
        # probes must lie in the window, so use its indicator basis
        defects = [root.parseval_defect(e) for e in w.basis()]
        ok = bool(max(defects) <= tol)
        return report(args, "dual-numeric", ok, {
            "window_eigenvalues": [float(x) for x in eig],
            "parseval_defects": [float(d) for d in defects],
            "tolerance": tol,
        })
    if args.A is not None and args.B is not None:
        claimed = FrameBounds(args.A, args.B)
    else:
        claimed = duals.diagonal_structure(gens).bounds()
    corpus = load_corpus(args)
    primal = frames.verify_frame_bounds(gens, corpus, claimed)
    dual = _dual_for(args, gens)
    recip = FrameBounds(1 / claimed.B, 1 / claimed.A)
    rep = frames.verify_frame_bounds(dual, corpus, recip)
    ok = primal.passed and rep.passed
    return report(args, "dual", ok, {"primal": primal.summary(), "dual": rep.summary()})


def verify_decomposition(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    dual = _dual_for(args, gens)
    failures = []
    corpus = load_corpus(args)
    for i, g in enumerate(corpus):
        d = duals.decompose_reconstruct(g, gens, dual)
        if not d.exact:
            failures.append({"index": i, "order": "<g, S^-1 f> f", "g": function_doc(g), "got": function_doc(d.reconstruction)})
        if not d.mirrored_exact:
            failures.append({"index": i, "order": "<g, f> S^-1 f", "g": function_doc(g), "got": function_doc(d.mirrored)})
    return report(args, "decomposition", not failures, {"checked": len(corpus), "failures": failures})


def _kernel_perturbation(rng, gens, dual):
    u = random_table(rng, gens.p, gens.L)
    return u - duals.range_projection(u, gens, dual)


def verify_minimal_norm(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    dual = _dual_for(args, gens)
    rng = SplitMix64((args.seed + 1) & ((1 << 64) - 1))
    rows, failures = [], []
    for i, g in enumerate(load_corpus(args)):
        alt = frames.analyze(g, dual) + _kernel_perturbation(rng, gens, dual)
        r = duals.minimal_norm_identity(g, gens, alt, dual)
        row = {"index": i, "alt": format_scalar(r.lhs), "canonical": format_scalar(r.canonical_part),
               "residual": format_scalar(r.residual_part)}
        rows.append(row)
        if not r.equal:
            failures.append(row)
    return report(args, "minimal-norm", not failures, {"rows": rows, "failures": failures})


def verify_projection(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    dual = _dual_for(args, gens)
    rng = SplitMix64(args.seed)
    failures = []
    for i in range(args.corpus_size):
        u = random_table(rng, gens.p, gens.L)
        P = duals.range_projection(u, gens, dual)
        if duals.range_projection(P, gens, dual) != P:
            failures.append({"index": i, "property": "idempotent", "table": table_doc(u)})
        if not duals.range_projection(u - P, gens, dual).is_zero():
            failures.append({"index": i, "property": "zero on kernel", "table": table_doc(u)})
    for i, g in enumerate(load_corpus(args)):
        t = frames.analyze(g, gens)
        if duals.range_projection(t, gens, dual) != t:
            failures.append({"index": i, "property": "identity on range", "g": function_doc(g)})
    return report(args, "projection", not failures, {"failures": failures})


def verify_transport(args) -> int:
    gens = build_generators(args.gens, args.p, args.m)
    U = parse_unitary(args.unitary, gens.p)
    rep = frames.unitary_transport_check(gens, U, load_corpus(args))
    failures = [
        {"index": i, "original": format_scalar(x), "transported": format_scalar(y)}
        for i, (x, y) in enumerate(zip(rep.original, rep.transported))
        if not (x - y).is_zero()
    ]
    return report(args, "transport", rep.passed, {
        "original": [format_scalar(x) for x in rep.original],
        "transported": [format_scalar(x) for x in rep.transported],
        "failures": failures,
    })


def _load_set(args):
    if args.set:
        return parse_set(read_json(args.set))
    return example_set(args.p)


def verify_set(args) -> int:
    s = _load_set(args)
    args.p = s.p
    rep = verify_multiframelet_set(s, load_corpus(args))
    topo = set_topology(s)
    body = {"set": set_doc(s), "topology": vars(topo)}
    if rep.divergent:
        body["verdict"] = "divergent: " + rep.message
        return report(args, "set", False, body)
    body.update(rep.bounds.summary())
    body["verdict"] = "Parseval-consistent" if rep.parseval_consistent else "not Parseval"
    return report(args, "set", rep.parseval_consistent, body)


def verify_norm_identity(args) -> int:
    s = _load_set(args)
    args.p = s.p
    failures, rows = [], []
    for i, g in enumerate(load_corpus(args)):
        r = norm_identity_check(g, s)
        row = {"index": i, "lhs": format_scalar(r.lhs), "rhs": format_scalar(r.rhs)}
        rows.append(row)
        if not r.equal:
            failures.append(row)
    return report(args, "norm-identity", not failures, {"rows": rows, "failures": failures})


VERIFIERS = {
    "parseval": verify_parseval,
    "bounds": verify_bounds,
    "dual": verify_dual,
    "decomposition": verify_decomposition,
    "set": verify_set,
    "norm-identity": verify_norm_identity,
    "minimal-norm": verify_minimal_norm,
    "projection": verify_projection,
    "transport": verify_transport,
}


# -- parser -----------------------------------------------------------------


def _prime(s: str) -> int:
    p = int(s)
    try:
        check_prime(p)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return p


def _window(s: str) -> tuple[int, int]:
    try:
        G, c = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected G,c") from None
    return G, c


def _seed(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _size(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("corpus size must be at least 1")
    return v


def _bits(s: str) -> int:
    v = int(s)
    if v < 24:
        raise argparse.ArgumentTypeError("tolerance bits must be at least 24")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=_prime, default=3, help="prime (default 3)")
    common.add_argument("-m", type=int, default=1, help="order for ks generators")
    common.add_argument("--out", help="write the result here instead of stdout")

    sysopts = argparse.ArgumentParser(add_help=False)
    sysopts.add_argument("--gens", default="kozyrev",
                         help="kozyrev, ks, doubled, weighted:w1,w2,..., example-set or a JSON file")
    sysopts.add_argument("--j-min", type=int, default=None, help="first explicit scale")

    corp = argparse.ArgumentParser(add_help=False)
    corp.add_argument("--corpus-size", type=_size, default=20)
    corp.add_argument("--seed", type=_seed, default=7)
    corp.add_argument("--zero-mean", action="store_true", help="remove the mean of every corpus function")

    ap = argparse.ArgumentParser(prog="padicframes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", parents=[common], help="print a generator system")
    g.add_argument("system", choices=["kozyrev", "ks", "from-set"])
    g.add_argument("input", nargs="?", help="set JSON for from-set (default: the example set)")
    g.set_defaults(run=cmd_gen)

    a = sub.add_parser("analyze", parents=[common, sysopts], help="coefficient table of a function")
    a.add_argument("input", nargs="?", default="-")
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.set_defaults(run=cmd_analyze)

    s = sub.add_parser("synthesize", parents=[common, sysopts], help="function from a coefficient table")
    s.add_argument("input", nargs="?", default="-")
    s.set_defaults(run=cmd_synthesize)

    f = sub.add_parser("fourier", parents=[common], help="Fourier transform of a function")
    f.add_argument("direction", choices=["fwd", "inv"])
    f.add_argument("input", nargs="?", default="-")
    f.set_defaults(run=cmd_fourier)

    c = sub.add_parser("corpus", parents=[common, corp], help="deterministic random functions")
    c.set_defaults(run=cmd_corpus)

    v = sub.add_parser("verify", help="check an identity or inequality")
    vsub = v.add_subparsers(dest="check", required=True)
    for name, fn in VERIFIERS.items():
        vp = vsub.add_parser(name, parents=[common, sysopts, corp])
        vp.add_argument("--input", help="corpus JSON (a function or {functions: [...]}) instead of random")
        vp.add_argument("--A", type=Fraction, default=None)
        vp.add_argument("--B", type=Fraction, default=None)
        vp.add_argument("--window", type=_window, default=None, help="use the window stage G,c for S^-1")
        vp.add_argument("--numeric", action="store_true", help="floating comparisons (window square roots)")
        vp.add_argument("--tolerance-bits", type=_bits, default=40)
        vp.add_argument("--unitary", default="translate:1/9", help="translate:q, modulate:q or dilate:j")
        vp.add_argument("--set", help="multiframelet set JSON (default: the example set)")
        vp.set_defaults(run=fn)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.run(args)
    except (UsageError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except FrameError as exc:
        # a precondition of the requested check does not hold
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
