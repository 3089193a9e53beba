"""JSON payloads for verdicts, analyses and families, and certificate re-checks."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .action import ActionSpec, ModelTail, Telescope, block_character
from .classifier import (
    ClassDecay,
    NearRegularSplit,
    Outcome,
    Verdict,
    regular_multiple_check,
)
from .cyclotomic import CyclotomicNumber, format_fraction, parse_fraction
from .errors import InternalInconsistencyError
from .spectral import TransferMatrix, block_transfer, simplex_gap
from .spec_io import matrix_obj
from .synth import RokhlinFamily, VerificationReport


def exact_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def cyclo_value(x: CyclotomicNumber):
    """'p/q' for rationals, the full coefficient record otherwise."""
    return format_fraction(x.to_fraction()) if x.is_rational() else x.to_json()


def telescope_obj(t: Telescope | None):
    if t is None:
        return None
    return {"cuts": list(t.cuts), "repeat": None if t.repeat is None else list(t.repeat)}


def _decay_obj(spec: ActionSpec, d: ClassDecay) -> dict:
    out = {"class": spec.group.class_label(d.cls), "positions": d.positions}
    if d.period_product is not None:
        out["period_product"] = cyclo_value(d.period_product)
        sq = d.period_modulus_sq
        out["decay_factor_squared"] = cyclo_value(sq)
        root = exact_sqrt(sq.to_fraction()) if sq.is_rational() else None
        out["decay_factor"] = format_fraction(root) if root is not None else math.sqrt(abs(complex(sq)))
    if d.asymptotic is not None:
        out["asymptotic"] = d.asymptotic
    return out


def verdict_obj(spec: ActionSpec, v: Verdict) -> dict:
    label = spec.group.class_label
    s, t = v.strict, v.tracial
    strict = {
        "holds": s.holds,
        "telescope": telescope_obj(s.telescope),
        "obstruction": None if s.obstruction is None else label(s.obstruction),
        "failure_position": s.failure_position,
    }
    tracial = {
        "holds": t.holds,
        "classes": [_decay_obj(spec, d) for _, d in sorted(t.decay.items())],
        "obstruction": None if t.obstruction is None else label(t.obstruction),
        "obstruction_values": [cyclo_value(x) for x in t.obstruction_values],
    }
    out = {"outcome": v.outcome.value, "horizon": v.horizon, "strict": strict, "tracial": tracial}
    if v.rank1 is not None:
        out["rank1"] = {k: (format_fraction(x) if isinstance(x, Fraction) else x) for k, x in v.rank1.items()}
    return out


def transfer_obj(T: TransferMatrix) -> list:
    return [[format_fraction(x) for x in row] for row in T.entries]


def split_obj(spec: ActionSpec, sp: NearRegularSplit) -> dict:
    return {
        "block": list(sp.block) if sp.block else None,
        "copies": sp.copies,
        "multiplicities": list(sp.multiplicities),
        "remainder_dim": sp.remainder_dim,
        "block_dim": sp.block_dim,
        "ratio": format_fraction(sp.ratio),
        "below_epsilon": sp.below_epsilon,
    }


def verification_obj(r: VerificationReport) -> dict:
    return {
        "mode": r.mode.value,
        "epsilon": r.epsilon,
        "defects": dict(r.defects),
        "trace_defect": format_fraction(r.trace_defect),
        "comparison": r.comparison,
        "ebe_norm": r.ebe_norm,
        "conditions": dict(r.conditions),
        "passed": r.passed,
    }


def family_obj(spec: ActionSpec, fam: RokhlinFamily) -> dict:
    g = spec.group
    return {
        "mode": fam.mode.value,
        "block": list(fam.block) if fam.block else None,
        "dim": fam.dim,
        "trace_defect": format_fraction(fam.trace_defect),
        "projections": [
            {"element": g.class_label(k) if g.is_abelian else k, "matrix": matrix_obj(q)}
            for k, q in enumerate(fam.projections)
        ],
    }


def family_from_obj(obj: dict) -> list[np.ndarray]:
    d = obj["dim"]
    return [
        np.array([complex(a, b) for a, b in p["matrix"]], dtype=complex).reshape(d, d) for p in obj["projections"]
    ]


# certificate re-checks --------------------------------------------------------


def _fail(msg: str):
    raise InternalInconsistencyError(f"certificate rejected: {msg}")


def _class_index(spec: ActionSpec, label) -> int:
    g = spec.group
    if not g.is_abelian:
        return int(label)
    return g.index(tuple(label) if isinstance(label, list) else label)


def check_verdict_certificate(spec: ActionSpec, cert: dict) -> dict:
    """Re-derive the witnesses of a classify payload from the spec alone."""
    outcome = Outcome(cert["outcome"])
    group = spec.group
    checked = []
    if outcome == Outcome.STRICT:
        tel = cert["strict"]["telescope"]
        t = Telescope(tuple(tel["cuts"]), None if tel["repeat"] is None else tuple(tel["repeat"]))
        p = len(spec.prefix)
        if spec.is_finite:
            blocks = list(t.blocks(p, last_level=p))
        else:
            if t.repeat is None:
                _fail("infinite spec needs a repeating telescope")
            if spec.is_periodic and sum(t.repeat) % len(spec.tail):
                _fail("repeat cycle is not a multiple of the period")
            if t.cuts[-1] <= p:
                _fail("repeat cycle starts inside the prefix")
            # explicit blocks plus one full cycle determine all blocks
            blocks = list(t.blocks(t.cuts[-1] + sum(t.repeat) - 1))
            if isinstance(spec.tail, ModelTail) and not spec.tail.s.is_zero:
                _fail("model tail has a non-regular remainder")
        for a, b in blocks:
            chi, d = block_character(spec, a, b)
            ok, _ = regular_multiple_check(chi, d)
            if not ok:
                _fail(f"block [{a}, {b}] is not a multiple of the regular representation")
            checked.append([a, b])
        return {"accepted": True, "outcome": outcome.value, "blocks_checked": checked}
    if outcome in (Outcome.TRACIAL_ONLY, Outcome.NEITHER) and spec.is_periodic:
        p, k = len(spec.prefix), len(spec.tail)
        tail = range(p + 1, p + k + 1)
        if outcome == Outcome.NEITHER:
            c = _class_index(spec, cert["tracial"]["obstruction"])
            if any(spec.level(i).normalized_character(c).abs2() != 1 for i in tail):
                _fail("obstruction class decays somewhere in the period")
            checked.append({"obstruction": cert["tracial"]["obstruction"]})
        else:
            for entry in cert["tracial"]["classes"]:
                c = _class_index(spec, entry["class"])
                if not any(spec.level(i).normalized_character(c).abs2() != 1 for i in entry["positions"] if i > p):
                    _fail(f"class {entry['class']} has no decaying tail position")
                checked.append({"class": entry["class"]})
            if len(cert["tracial"]["classes"]) != group.num_classes - 1:
                _fail("not every non-trivial class has a decay witness")
            no_zero = [
                c for c in range(1, group.num_classes) if all(not spec.level(i).character(c).is_zero() for i in tail)
            ]
            if not no_zero:
                _fail("every class vanishes in the period, so the spec is strict")
            r1 = cert.get("rank1")
            if r1 is not None:
                T = block_transfer(spec, r1["n"], r1["m"])
                gap = simplex_gap(T)
                if gap != parse_fraction(r1["gap"]) or not gap < parse_fraction(r1["epsilon"]):
                    _fail("rank-one gap does not reproduce")
                checked.append({"rank1": [r1["n"], r1["m"]]})
        return {"accepted": True, "outcome": outcome.value, "checked": checked}
    if isinstance(spec.tail, ModelTail):
        from .classifier import _model_tail_rule

        strict, tracial, reason = _model_tail_rule(spec)
        expected = Outcome.STRICT if strict else Outcome.TRACIAL_ONLY if tracial else Outcome.NEITHER
        if expected != outcome:
            _fail(f"model tail rule gives {expected.value}")
        return {"accepted": True, "outcome": outcome.value, "checked": [reason]}
    # Inconclusive: nothing beyond the recorded failure position
    return {"accepted": True, "outcome": outcome.value, "checked": []}
