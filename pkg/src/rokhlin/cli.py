"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 inconclusive verdict, 3 internal
inconsistency.  Reports are canonical JSON written to --out or stdout;
wall-clock timing goes to stderr so report bytes stay reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path


from . import __version__
from .action import ModelLevel, restrict_to_subgroup
from .classifier import (
    Outcome,
    classify,
    near_regular_block,
    rank1_certificate,
    subgroup_consistency,
    zero_pattern,
)
from .cyclotomic import format_fraction, parse_fraction
from .errors import HorizonExhaustedError, InputError, InternalInconsistencyError, SpecValidationError
from .reports import (
    check_verdict_certificate,
    cyclo_value,
    family_from_obj,
    family_obj,
    split_obj,
    transfer_obj,
    verdict_obj,
    verification_obj,
)
from .spec_io import canonical_dumps, parse_spec, report_digest
from .spectral import (
    DirectSummandVector,
    block_trace_vector,
    block_transfer,
    block_unitaries,
    connecting_map_checks,
    dual_shift,
    fourier_eigenvalues,
    simplex_gap,
)
from .synth import Mode, RokhlinFamily, model_action_family, synthesize, verify_family

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_INTERNAL = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        q = parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return q


def _block(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n:m, got {text!r}") from None
    if not 1 <= n <= m:
        raise argparse.ArgumentTypeError("block needs 1 <= n <= m")
    return n, m


def _subgroup(text: str):
    try:
        return int(text)
    except ValueError:
        try:
            return [int(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad subgroup descriptor {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rokhlin", description="Rokhlin property analysis of product-type actions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("spec", type=Path, help="ActionSpec JSON file")
        sp.add_argument("--out", type=Path, help="write the report here instead of stdout")
        sp.add_argument("--subgroup", type=_subgroup, help="restrict to a subgroup (order divisor, or generator a,b,...)")

    sp = sub.add_parser("classify", help="strict / tracial verdict with certificate")
    common(sp)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 100))

    sp = sub.add_parser("analyze", help="traces, transfer matrix, eigenvalues and near-regular split of a block")
    common(sp)
    sp.add_argument("--block", type=_block, default=(1, 1))
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 100))

    sp = sub.add_parser("synth", help="build and verify a Rokhlin family on a block")
    common(sp)
    sp.add_argument("--block", type=_block, default=(1, 1))
    sp.add_argument("--mode", choices=[m.value for m in Mode])
    sp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10**9))

    sp = sub.add_parser("verify", help="re-check a classify or synth report against the spec")
    common(sp)
    sp.add_argument("--certificate", type=Path, required=True)
    sp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10**9))

    sp = sub.add_parser("crossed", help="crossed-product direct-system identity checks")
    common(sp)
    sp.add_argument("--block", type=_block, default=(1, 1))
    return p


# verbs ------------------------------------------------------------------------


def do_classify(spec, args):
    v = classify(spec, args.horizon, args.epsilon)
    code = EXIT_INCONCLUSIVE if v.outcome == Outcome.INCONCLUSIVE else EXIT_OK
    return verdict_obj(spec, v), code


def do_analyze(spec, args):
    n, m = args.block
    out = {"block": [n, m]}
    pattern = zero_pattern(spec)
    label = spec.group.class_label
    out["zero_pattern"] = [
        {"class": label(c), "zeros": cp.zeros, "below_one": cp.below_one} for c, cp in sorted(pattern.classes.items())
    ]
    if spec.group.is_abelian:
        tv = block_trace_vector(spec, n, m)
        T = block_transfer(spec, n, m)
        out["trace_vector"] = [format_fraction(x) for x in tv.values]
        out["transfer_matrix"] = transfer_obj(T)
        out["eigenvalues"] = [cyclo_value(x) for x in fourier_eigenvalues(T)]
        out["simplex_gap"] = format_fraction(simplex_gap(T))
        try:
            mm, _, gap = rank1_certificate(spec, n, args.epsilon, args.horizon)
            out["rank1"] = {"n": n, "m": mm, "epsilon": format_fraction(args.epsilon), "gap": format_fraction(gap)}
        except HorizonExhaustedError as exc:
            out["rank1"] = {"n": n, "exhausted_at": exc.position, "gap": format_fraction(exc.partial)}
        out["subgroups"] = subgroup_consistency(spec, args.horizon)
    out["near_regular"] = split_obj(spec, near_regular_block(spec, n, m, args.epsilon))
    return out, EXIT_OK


def _synth_family(spec, args) -> RokhlinFamily:
    n, m = args.block
    if n == m and isinstance(spec.level(n).body, ModelLevel) and not spec.group.is_abelian:
        fam = model_action_family(spec.level(n))
        fam.block = (n, n)
        return fam
    mode = args.mode
    if mode is None:
        from .spectral import block_spectral_projections

        ranks = block_spectral_projections(spec, n, m, materialize=False).ranks
        mode = Mode.STRICT if len(set(ranks)) == 1 else Mode.TRACIAL
    fam = synthesize(spec, n, m, mode)
    return fam


_STRUCTURAL = ("idempotent", "self_adjoint", "orthogonal", "equivariance", "sum")


def _structural_ok(report) -> bool:
    """Projection axioms and equivariance; the tracial bounds depend on epsilon and are only reported."""
    return all(ok for name, ok in report.conditions.items() if name in _STRUCTURAL)


def do_synth(spec, args):
    fam = _synth_family(spec, args)
    report = verify_family(fam, epsilon=float(args.epsilon), mode=fam.mode)
    out = family_obj(spec, fam)
    out["verification"] = verification_obj(report)
    return out, EXIT_OK if _structural_ok(report) else EXIT_INTERNAL


def do_verify(spec, args):
    try:
        cert = json.loads(args.certificate.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecValidationError("certificate", str(exc)) from None
    if cert.get("spec_digest") != args.spec_digest:
        raise SpecValidationError("certificate.spec_digest", "certificate was issued for a different spec")
    result = cert.get("result", {})
    if cert.get("verb") == "classify":
        return check_verdict_certificate(spec, result), EXIT_OK
    if cert.get("verb") == "synth":
        n, m = result["block"]
        mats = family_from_obj(result)
        unitaries = block_unitaries(spec, n, m) if spec.group.is_abelian else None
        fam = RokhlinFamily(spec.group, Mode(result["mode"]), tuple(mats), parse_fraction(result["trace_defect"]))
        report = verify_family(fam, unitaries, epsilon=float(args.epsilon))
        if report.trace_defect != fam.trace_defect:
            raise InternalInconsistencyError("certificate trace defect does not match the matrices")
        out = verification_obj(report)
        out["accepted"] = _structural_ok(report)
        return out, EXIT_OK if out["accepted"] else EXIT_INTERNAL
    raise SpecValidationError("certificate.verb", f"cannot verify a {cert.get('verb')!r} report")


def do_crossed(spec, args):
    n, m = args.block
    out = connecting_map_checks(spec, n, m)
    out["trace_components"] = {k: [format_fraction(x) for x in v] for k, v in out["trace_components"].items()}
    group = spec.group
    N = group.order
    base = DirectSummandVector(group, tuple(range(N)))
    laws = all(
        dual_shift(dual_shift(base, h), g).components == dual_shift(base, group.mul(h, g)).components
        for g in range(N)
        for h in range(N)
    )
    out["dual_shift_action"] = laws
    return out, EXIT_OK if laws else EXIT_INTERNAL


VERBS = {
    "classify": do_classify,
    "analyze": do_analyze,
    "synth": do_synth,
    "verify": do_verify,
    "crossed": do_crossed,
}


def _options(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("spec", "out", "verb", "certificate"):
            continue
        if isinstance(v, Fraction):
            v = format_fraction(v)
        elif isinstance(v, tuple):
            v = list(v)
        out[k] = v
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    start = time.perf_counter()
    try:
        try:
            text = args.spec.read_text()
        except OSError as exc:
            raise SpecValidationError("", f"cannot read {args.spec}: {exc}") from None
        spec = parse_spec(text)
        digest = args.spec_digest = report_digest(spec)
        if args.subgroup is not None:
            spec = restrict_to_subgroup(spec, args.subgroup)
        result, code = VERBS[args.verb](spec, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    report = {
        "tool": "rokhlin",
        "version": __version__,
        "verb": args.verb,
        "spec_digest": digest,
        "options": _options(args),
        "result": result,
    }
    text = canonical_dumps(report)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{args.verb}: exit {code} in {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
