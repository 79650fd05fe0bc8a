"""Top-level decision procedures: input validation, case classification,
spectral condition checks, reachability verdicts with certificates, and
cross-validation of the spectral route against exact polyhedral iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from conreach import polyhedra as ph
from conreach import setmaps as sm
from conreach.exactla import DEFAULT_TOL, RatMatrix, Subspace, format_rat, rank, hstack, sub_perp
from conreach.geomctrl import (Sigma, SubspaceReport, controllable_subspace,
                               dual_system, kalman_controllable, kl_subspaces,
                               vstar_g_analysis)
from conreach.polyhedra import Polyhedron

_ZERO = Fraction(0)

DEFAULT_CAP = 25

CASE1_STRONG = "Case1Strong"
CASE1_WEAK = "Case1Weak"
CASE2 = "Case2"
CASE3 = "Case3"

REACHABLE = "Reachable"
NOT_REACHABLE = "NotReachable"
INCONCLUSIVE = "Inconclusive"

ROUTE_SPECTRAL = "Spectral"
ROUTE_DIRECT = "DirectIteration"
ROUTE_CASE2 = "Case2Subspace"


class ValidationError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class CaseTag:
    variant: str
    evidence: dict

    def to_dict(self) -> dict:
        return {"variant": self.variant, "evidence": self.evidence}


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witness: object = None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {"holds": self.holds}
        if self.witness is not None:
            if hasattr(self.witness, "to_dict"):
                out["witness"] = self.witness.to_dict()
            elif hasattr(self.witness, "to_json"):
                out["witness"] = self.witness.to_json()
            else:
                out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class SequenceProfile:
    """Per-step shape diagnostics of an iterated polyhedral sequence."""
    mode: str
    entries: tuple[dict, ...]
    stabilized_at: int | None
    contracting: bool = False

    def to_dict(self) -> dict:
        return {"mode": self.mode, "entries": list(self.entries),
                "stabilized_at": self.stabilized_at, "contracting": self.contracting}


@dataclass(frozen=True)
class Verdict:
    status: str
    route: str | None
    certificates: tuple = ()
    steps_used: int = 0
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"status": self.status, "route": self.route,
                "certificates": [c.to_dict() for c in self.certificates],
                "steps_used": self.steps_used,
                "witness": self.witness}


@dataclass(frozen=True)
class Report:
    sigma: Sigma
    constraint: Polyhedron
    case: CaseTag
    subspaces: SubspaceReport
    conditions: dict
    verdict: Verdict
    certificates: tuple
    sequences: dict
    meta: dict

    def to_dict(self) -> dict:
        return {
            "case": self.case.to_dict(),
            "subspaces": self.subspaces.to_dict(),
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
            "verdict": self.verdict.to_dict(),
            "certificates": [c.to_dict() for c in self.certificates],
            "sequences": {k: v.to_dict() for k, v in self.sequences.items()},
            "meta": self.meta,
        }


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    errors: tuple[str, ...] = ()


def validate(sig: Sigma, constraint: Polyhedron) -> ValidationResult:
    """Origin membership, surjectivity of [C D], and solidity of the set."""
    errors = []
    if constraint.dim != sig.s:
        errors.append("constraint set dimension differs from the output dimension")
        return ValidationResult(False, tuple(errors))
    if constraint.is_empty or not constraint.contains([_ZERO] * sig.s):
        errors.append("constraint set does not contain the origin")
    if rank(hstack(sig.C, sig.D)) != sig.s:
        errors.append("[C D] is not surjective")
    solid, _ = ph.interior_queries(constraint)
    if not solid:
        errors.append("constraint set is not solid")
    return ValidationResult(not errors, tuple(errors))


def classify(sig: Sigma, constraint: Polyhedron) -> CaseTag:
    """Exhaustive case split on how im D + C T* meets the constraint set.

    A trivial intersection is checked before the interior test: the two can
    only overlap when the subspace is {0} with the origin interior, and the
    sharper subspace characterization applies there.
    """
    report = kl_subspaces(sig)
    k_poly = Polyhedron.from_subspace(report.ksub)
    k_plus_y = ph.minkowski_sum(k_poly, constraint)
    if k_plus_y.is_universe():
        return CaseTag(CASE1_STRONG, {"sum_equals_space": True})
    meet = ph.intersect(k_poly, constraint)
    if meet == Polyhedron.from_point([_ZERO] * sig.s):
        return CaseTag(CASE2, {"intersection_trivial": True})
    meets, witness = ph.subspace_meets_interior(report.ksub, constraint)
    if meets:
        return CaseTag(CASE1_WEAK, {"interior_point": [format_rat(x) for x in witness]})
    gens = meet.vrep()
    nonzero = next((g for g in gens.generators() if any(x != 0 for x in g)), None)
    return CaseTag(CASE3, {"boundary_point": [format_rat(x) for x in nonzero]
                           if nonzero else None})


def check_conditions(sig: Sigma, constraint: Polyhedron,
                     tol: float = DEFAULT_TOL) -> dict:
    """The four spectral conditions.

    (a) Kalman controllability of (A, B); (b) no nonnegative cone-constrained
    eigenpair against the positive polar of the constraint set; (c) trivial
    bounded output-nulling subspace of the dual system restricted to the
    annihilator of the recession directions; (d) no eigenpair on [0, 1]
    against minus the barrier cone.
    """
    out: dict[str, ConditionResult] = {}

    if kalman_controllable(sig):
        out["a"] = ConditionResult(True)
    else:
        defect = sub_perp(controllable_subspace(sig))
        out["a"] = ConditionResult(False, witness=defect)

    y_plus = ph.pos_polar_cone(constraint)
    res_b = sm.cone_eigen_search(sig, y_plus, (Fraction(0), None),
                                 cone_tag="Yplus", tol=tol)
    out["b"] = ConditionResult(not res_b.found, witness=res_b.certificate,
                               notes=res_b.notes)

    rec = ph.recession_cone(constraint)
    rec_gens = rec.vrep()
    rec_span = Subspace(sig.s, list(rec_gens.rays) + list(rec_gens.lineality))
    annihilator = sub_perp(rec_span)
    split = vstar_g_analysis(dual_system(sig), annihilator, tol=max(tol, 1e-8))
    witness_c = None if split.trivial else split.subspace
    out["c"] = ConditionResult(split.trivial, witness=witness_c, notes=split.notes)

    neg = RatMatrix.identity(sig.s).scale(-1)
    neg_barrier = ph.linear_transform("image", neg, ph.barrier_cone(constraint))
    res_d = sm.cone_eigen_search(sig, neg_barrier, (Fraction(0), Fraction(1)),
                                 cone_tag="negYb", tol=tol)
    out["d"] = ConditionResult(not res_d.found, witness=res_d.certificate,
                               notes=res_d.notes)
    return out


def _profile_entry(step: int, p: Polyhedron) -> dict:
    radius = ph.sup_norm_radius(p)
    return {"step": step, "ineqs": len(p.ineq_rows), "eqs": len(p.eq_rows),
            "vertices": len(p.vrep().vertices) if not p.is_empty else 0,
            "radius": format_rat(radius) if radius is not None else None,
            "bounded": p.is_bounded()}


def _iterate_until_stable(mapping, mode: str, cap: int):
    """Step sets until two consecutive agree or the cap runs out.

    Returns (sets, stabilized_at) where stabilized_at is the smallest
    horizon with set(horizon) == set(horizon + 1), or None.
    """
    sets: list[Polyhedron] = []
    if mode == "X":
        current = sm.domain(mapping)
    else:
        current = sm.map_apply(mapping, "image",
                               Polyhedron.from_point([_ZERO] * mapping.dim))
    sets.append(current)
    for step in range(1, cap + 1):
        nxt = (sm.map_apply(mapping, "preimage", sets[-1]) if mode == "X"
               else sm.map_apply(mapping, "image", sets[-1]))
        if nxt == sets[-1]:
            return sets, step
        sets.append(nxt)
    return sets, None


def _profile(mode: str, sets, stabilized_at) -> SequenceProfile:
    entries = tuple(_profile_entry(i + 1, p) for i, p in enumerate(sets))
    contracting = False
    if stabilized_at is None and len(sets) >= 3:
        radii = [ph.sup_norm_radius(p) for p in sets[-3:]]
        if all(r is not None for r in radii):
            contracting = radii[0] > radii[1] > radii[2]
    return SequenceProfile(mode=mode, entries=entries,
                           stabilized_at=stabilized_at, contracting=contracting)


def _nonmember_witness(inside: Polyhedron, outside: Polyhedron):
    """A point of `inside` not in `outside` (inside not a subset of outside)."""
    v = inside.vrep()
    for vertex in v.vertices:
        if not outside.contains(vertex):
            return vertex
    for base in v.vertices:
        for direction in list(v.rays) + list(v.lineality) + \
                [tuple(-x for x in l) for l in v.lineality]:
            bad_row = None
            for row, b in zip(outside.ineq_rows, outside.ineq_rhs):
                if ph._dot(row, direction) > 0:
                    bad_row = (row, b)
                    break
            if bad_row is None:
                for row, b in zip(outside.eq_rows, outside.eq_rhs):
                    if ph._dot(row, direction) != 0:
                        bad_row = (row, b)
                        break
            if bad_row is None:
                continue
            row, b = bad_row
            num = b - ph._dot(row, base)
            den = ph._dot(row, direction)
            step = num / den + 1 if den != 0 else Fraction(1)
            if step <= 0:
                step = Fraction(1)
            candidate = tuple(x + step * d for x, d in zip(base, direction))
            if inside.contains(candidate) and not outside.contains(candidate):
                return candidate
    return None


def decide_case1(sig: Sigma, constraint: Polyhedron, tag: CaseTag,
                 cap: int = DEFAULT_CAP, tol: float = DEFAULT_TOL,
                 conditions: dict | None = None):
    """Verdict for the interior-meeting cases.

    Strong case: reachability is equivalent to the four spectral conditions.
    Weak case: the conditions are sufficient; otherwise exact iteration
    decides, with NotReachable only once both sequences stabilize.
    """
    if tag.variant not in (CASE1_STRONG, CASE1_WEAK):
        raise ValueError("case-1 decision on a non-case-1 tag")
    conditions = conditions if conditions is not None else check_conditions(sig, constraint, tol)
    failing = [k for k in ("a", "b", "c", "d") if not conditions[k].holds]
    certs = tuple(conditions[k].witness for k in ("b", "d")
                  if not conditions[k].holds and conditions[k].witness is not None)
    sequences: dict[str, SequenceProfile] = {}
    if not failing:
        return Verdict(REACHABLE, ROUTE_SPECTRAL), sequences
    if tag.variant == CASE1_STRONG:
        witness = {"failing_conditions": failing}
        return Verdict(NOT_REACHABLE, ROUTE_SPECTRAL, certificates=certs,
                       witness=witness), sequences

    mapping = sm.build_primal(sig, constraint, "F")
    xs, x_stab = _iterate_until_stable(mapping, "X", cap)
    sequences["X"] = _profile("X", xs, x_stab)
    if x_stab is None:
        rs, r_stab = _iterate_until_stable(mapping, "R", cap)
        sequences["R"] = _profile("R", rs, r_stab)
        return Verdict(INCONCLUSIVE, ROUTE_DIRECT, steps_used=cap), sequences
    x_set = xs[-1]

    rs: list[Polyhedron] = []
    current = sm.map_apply(mapping, "image", Polyhedron.from_point([_ZERO] * sig.n))
    r_stab = None
    for step in range(1, cap + 1):
        rs.append(current)
        if ph.subset_eq(x_set, current):
            sequences["R"] = _profile("R", rs, r_stab)
            return Verdict(REACHABLE, ROUTE_DIRECT, steps_used=step), sequences
        nxt = sm.map_apply(mapping, "image", current)
        if nxt == current:
            r_stab = step
            break
        current = nxt
    sequences["R"] = _profile("R", rs, r_stab)
    if r_stab is not None:
        witness_point = _nonmember_witness(x_set, rs[-1])
        witness = {"feasible_not_reachable":
                   [format_rat(x) for x in witness_point] if witness_point else None}
        return Verdict(NOT_REACHABLE, ROUTE_DIRECT, certificates=certs,
                       steps_used=r_stab, witness=witness), sequences
    return Verdict(INCONCLUSIVE, ROUTE_DIRECT, steps_used=cap), sequences


def decide_case2(sig: Sigma, constraint: Polyhedron,
                 cap: int = DEFAULT_CAP):
    """Verdict when the invertibility subspace meets the set only at zero.

    The reachable set equals the strongly reachable subspace, so the decision
    reduces to comparing the feasible set with it.
    """
    report = kl_subspaces(sig)
    sequences: dict[str, SequenceProfile] = {}
    if report.vstar != report.rstar:
        witness_vec = next(v for v in report.vstar.basis_vectors()
                           if not report.tstar.contains_vector(v))
        witness = {"weakly_unobservable_not_strongly_reachable":
                   [format_rat(x) for x in witness_vec]}
        return Verdict(NOT_REACHABLE, ROUTE_CASE2, witness=witness), sequences

    mapping = sm.build_primal(sig, constraint, "F")
    vstar_poly = Polyhedron.from_subspace(report.vstar)
    tstar_poly = Polyhedron.from_subspace(report.tstar)
    xs, x_stab = _iterate_until_stable(mapping, "X", cap)
    sequences["X"] = _profile("X", xs, x_stab)
    if x_stab is not None:
        x_set = xs[-1]
        if ph.subset_eq(x_set, tstar_poly):
            return Verdict(REACHABLE, ROUTE_CASE2, steps_used=x_stab), sequences
        witness_point = _nonmember_witness(x_set, tstar_poly)
        witness = {"feasible_not_reachable":
                   [format_rat(x) for x in witness_point] if witness_point else None}
        return Verdict(NOT_REACHABLE, ROUTE_CASE2, steps_used=x_stab,
                       witness=witness), sequences
    for step, x_set in enumerate(xs, start=1):
        if ph.subset_eq(x_set, vstar_poly):
            return Verdict(REACHABLE, ROUTE_CASE2, steps_used=step), sequences
    return Verdict(INCONCLUSIVE, ROUTE_CASE2, steps_used=cap), sequences


def analyze(sig: Sigma, constraint: Polyhedron, cap: int = DEFAULT_CAP,
            tol: float = DEFAULT_TOL) -> Report:
    """Validate, classify, check conditions and decide; full evidence report."""
    validation = validate(sig, constraint)
    if not validation.ok:
        raise ValidationError(list(validation.errors))
    tag = classify(sig, constraint)
    subspaces = kl_subspaces(sig)
    conditions = check_conditions(sig, constraint, tol)
    notes: list[str] = []
    if tag.variant in (CASE1_STRONG, CASE1_WEAK):
        verdict, sequences = decide_case1(sig, constraint, tag, cap, tol, conditions)
    elif tag.variant == CASE2:
        verdict, sequences = decide_case2(sig, constraint, cap)
    else:
        verdict, sequences = Verdict(INCONCLUSIVE, None), {}
        notes.append("boundary case: no decision procedure is known for this case")
    certificates = tuple(verdict.certificates)
    for cond in conditions.values():
        notes.extend(cond.notes)
    meta = {"cap": cap, "tol": tol,
            "interpretations": ["controllable=Kalman(A,B)"],
            "notes": sorted(set(notes))}
    return Report(sigma=sig, constraint=constraint, case=tag, subspaces=subspaces,
                  conditions=conditions, verdict=verdict, certificates=certificates,
                  sequences=sequences, meta=meta)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    spectral_status: str
    direct_status: str
    verdicts_agree: bool
    duality_ok: bool
    details: dict

    def to_dict(self) -> dict:
        return {"consistent": self.consistent,
                "spectral_status": self.spectral_status,
                "direct_status": self.direct_status,
                "verdicts_agree": self.verdicts_agree,
                "duality_ok": self.duality_ok,
                "details": self.details}


def _direct_decide(sig: Sigma, constraint: Polyhedron, cap: int,
                   face_budget: int | None = None):
    """Pure-iteration verdict, independent of the spectral conditions.

    `face_budget` optionally bounds the representation size (facets plus
    vertices) of any iterate; exceeding it returns Inconclusive, like the
    step cap.
    """
    mapping = sm.build_primal(sig, constraint, "F")
    xs, x_stab = _iterate_until_stable(mapping, "X", cap)
    if x_stab is None:
        return INCONCLUSIVE, {"X_stabilized": None}
    x_set = xs[-1]
    current = sm.map_apply(mapping, "image", Polyhedron.from_point([_ZERO] * sig.n))
    for step in range(1, cap + 1):
        if ph.subset_eq(x_set, current):
            return REACHABLE, {"X_stabilized": x_stab, "R_covering_step": step}
        if face_budget is not None and not current.is_empty:
            size = len(current.ineq_rows) + len(current.vrep().vertices)
            if size > face_budget:
                return INCONCLUSIVE, {"X_stabilized": x_stab, "R_stabilized": None,
                                      "resource_bailout": step}
        nxt = sm.map_apply(mapping, "image", current)
        if nxt == current:
            return NOT_REACHABLE, {"X_stabilized": x_stab, "R_stabilized": step}
        current = nxt
    return INCONCLUSIVE, {"X_stabilized": x_stab, "R_stabilized": None}


def oracle_compare(sig: Sigma, constraint: Polyhedron, cap: int = DEFAULT_CAP,
                   tol: float = DEFAULT_TOL,
                   face_budget: int | None = None) -> ConsistencyReport:
    """Cross-validate spectral conditions against exact polyhedral iteration.

    Runs only for the interior-meeting cases.  The two routes must never
    return contradictory decided verdicts; finite-horizon duality between the
    backward sets and the forward sets of the polar dual is checked exactly.
    """
    validation = validate(sig, constraint)
    if not validation.ok:
        raise ValidationError(list(validation.errors))
    tag = classify(sig, constraint)
    if tag.variant not in (CASE1_STRONG, CASE1_WEAK):
        raise ValueError("oracle comparison is defined for the interior-meeting cases")
    conditions = check_conditions(sig, constraint, tol)
    all_hold = all(conditions[k].holds for k in ("a", "b", "c", "d"))
    if all_hold:
        spectral = REACHABLE
    elif tag.variant == CASE1_STRONG:
        spectral = NOT_REACHABLE
    else:
        spectral = INCONCLUSIVE

    direct, info = _direct_decide(sig, constraint, cap, face_budget=face_budget)

    mapping = sm.build_primal(sig, constraint, "F")
    primal_iter = sm.reach_feas(mapping, min(4, cap), "X", method="iterate")
    duality_ok = True
    if tag.variant == CASE1_STRONG:
        # the backward/forward polar duality requires the strong premise
        dual_direct = sm.reach_feas(
            sm.build_dual(sig, constraint, "Fpolar"), min(4, cap), "R", method="direct")
        neg = RatMatrix.identity(sig.n).scale(-1)
        for x_set, r_dual in zip(primal_iter, dual_direct):
            mirrored = ph.linear_transform("image", neg, r_dual)
            if ph.polar(x_set) != mirrored:
                duality_ok = False
                break

    decided = {REACHABLE, NOT_REACHABLE}
    verdicts_agree = not (spectral in decided and direct in decided
                          and spectral != direct)
    consistent = duality_ok and verdicts_agree
    details = dict(info)
    details["case"] = tag.variant
    if not consistent:
        details["diagnostic"] = {
            "conditions": {k: v.holds for k, v in conditions.items()},
            "X_profile": [_profile_entry(i + 1, p) for i, p in enumerate(primal_iter)],
        }
    return ConsistencyReport(consistent=consistent, spectral_status=spectral,
                             direct_status=direct, verdicts_agree=verdicts_agree,
                             duality_ok=duality_ok, details=details)
