"""End-to-end classification of plane polynomial endomorphisms.

The decision procedure is staged. Stage 1 tests the Jacobian; maps whose
Jacobian is not a nonzero constant are rejected there (the later criteria
assume it). Stage 2 computes the kernel generator H and the degree r of x
over the image field. Stage 3 produces the y = u/v decomposition, stage 4
factors v and checks the localization units, and stage 5 draws the final
verdict: r = 1 means the map is invertible and the inverse is computed
and verified; r >= 2 on a map that passed stage 1 would be a loud
counterexample candidate and is treated as an artifact bug elsewhere.

The automorphism conclusion is always derived twice, once from r and once
from the units check; the two routes must agree or the run aborts.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import (
    AlgebraicallyDependentError,
    DegreeCapExceeded,
    InternalInconsistencyError,
    KellerError,
    MembershipFailedError,
    NotShapePositionError,
    ResourceCapExceeded,
    ZeroKernelError,
)
from .factor import (
    Factorization,
    PreservationReport,
    UnitsVerdict,
    factor_bivariate,
    factorially_closed_probe,
    localization_units_check,
    stays_irreducible,
)
from .funcfield import UVDecomposition, uv_decomposition
from .groebner import (
    KernelGenerator,
    RunStats,
    birationality_degree,
    kernel_generator,
    subring_membership,
)
from .poly import U12, XY, Endomorphism, JacobianInfo, Polynomial
from .tame import (
    Affine,
    ElementaryX,
    ElementaryY,
    TameRecipe,
    generate_tame,
    random_tame,
)

__all__ = [
    "Affine",
    "ElementaryX",
    "ElementaryY",
    "TameRecipe",
    "generate_tame",
    "random_tame",
    "Verdict",
    "PipelineConfig",
    "ClassificationReport",
    "TfaeReport",
    "classify",
    "invert",
    "verify_inverse",
    "cross_check_tfae",
    "birationality_degree",
]


class Verdict(enum.Enum):
    NOT_KELLER_NONCONSTANT = "NotKellerNonConstantJacobian"
    NOT_KELLER_ZERO = "NotKellerZeroJacobian"
    DEGENERATE = "Degenerate"
    AUTOMORPHISM = "Automorphism"
    COUNTEREXAMPLE_CANDIDATE = "CounterexampleCandidate"


@dataclass(frozen=True)
class PipelineConfig:
    max_spairs: Optional[int] = None
    max_degree: Optional[int] = None
    factor_degree_cap: int = 10
    force: bool = False
    absolute: bool = False


@dataclass(frozen=True)
class TfaeReport:
    """The three equivalent conditions, evaluated independently.

    i: an inverse exists and verifies; ii: x has degree 1 over the image
    field; iii: all unit generators of the localization at v lie in the
    image subalgebra.
    """

    i: bool
    ii: bool
    iii: bool

    @property
    def consistent(self) -> bool:
        return self.i == self.ii == self.iii


@dataclass
class ClassificationReport:
    verdict: Verdict
    jacobian: JacobianInfo
    kernel: Optional[KernelGenerator] = None
    uv: Optional[UVDecomposition] = None
    v_factorization: Optional[Factorization] = None
    v_reports: Tuple[PreservationReport, ...] = ()
    units: Optional[UnitsVerdict] = None
    inverse: Optional[Tuple[Polynomial, Polynomial]] = None
    tfae: Optional[TfaeReport] = None
    degenerate_reason: Optional[str] = None
    notes: Tuple[str, ...] = ()
    stats: RunStats = field(default_factory=RunStats)


_GATE_NOTE = (
    "the Jacobian determinant is not a nonzero constant, so the automorphism "
    "criteria do not apply; any evidence below is informational only"
)
_CANDIDATE_NOTE = (
    "a map with constant nonzero Jacobian and r >= 2 would be invertible-"
    "breaking; expect an artifact bug rather than a genuine example"
)


def invert(
    f: Endomorphism,
    *,
    max_spairs: Optional[int] = None,
    max_degree: Optional[int] = None,
    stats: Optional[RunStats] = None,
) -> Tuple[Polynomial, Polynomial]:
    """Inverse components (s, t) with s(p,q) = x and t(p,q) = y.

    Intended for maps that reached r = 1 with a constant nonzero Jacobian;
    under those preconditions both memberships must exist, so a failure
    raises MembershipFailedError as an internal-error sentinel.
    """
    xv = Polynomial.variable(XY, "x")
    yv = Polynomial.variable(XY, "y")
    s = subring_membership(xv, f, max_spairs=max_spairs, max_degree=max_degree, stats=stats)
    if s is None:
        raise MembershipFailedError("x is not in the image subalgebra")
    t = subring_membership(yv, f, max_spairs=max_spairs, max_degree=max_degree, stats=stats)
    if t is None:
        raise MembershipFailedError("y is not in the image subalgebra")
    return s, t


def verify_inverse(f: Endomorphism, s: Polynomial, t: Polynomial) -> bool:
    """Check both composition identities exactly."""
    xv = Polynomial.variable(XY, "x")
    yv = Polynomial.variable(XY, "y")
    u1 = Polynomial.variable(U12, "u1")
    u2 = Polynomial.variable(U12, "u2")
    back = {"u1": f.p, "u2": f.q}
    if s.substitute(back) != xv or t.substitute(back) != yv:
        return False
    fwd = {"x": s, "y": t}
    return f.p.substitute(fwd) == u1 and f.q.substitute(fwd) == u2


def cross_check_tfae(
    f: Endomorphism,
    *,
    max_spairs: Optional[int] = None,
    max_degree: Optional[int] = None,
    factor_degree_cap: int = 10,
    stats: Optional[RunStats] = None,
) -> TfaeReport:
    """Evaluate the three equivalent conditions independently.

    Requires a constant nonzero Jacobian; the bits are computed separately
    precisely so their agreement is evidence rather than construction.
    """
    if f.jacobian.kind != "constant":
        raise ValueError("the three-way check expects a constant nonzero Jacobian")
    kernel = kernel_generator(f, max_spairs=max_spairs, max_degree=max_degree, stats=stats)
    bit_ii = kernel.r == 1

    uv = uv_decomposition(
        f, kernel=kernel, max_spairs=max_spairs, max_degree=max_degree, stats=stats
    )
    units = localization_units_check(
        f,
        uv.v,
        degree_cap=factor_degree_cap,
        max_spairs=max_spairs,
        max_degree=max_degree,
        stats=stats,
    )
    bit_iii = units.all_units_in_Cpq

    try:
        s, t = invert(f, max_spairs=max_spairs, max_degree=max_degree, stats=stats)
        bit_i = verify_inverse(f, s, t)
    except MembershipFailedError:
        bit_i = False
    return TfaeReport(bit_i, bit_ii, bit_iii)


def classify(f: Endomorphism, config: Optional[PipelineConfig] = None) -> ClassificationReport:
    """Run the staged decision procedure and assemble the evidence."""
    cfg = config or PipelineConfig()
    stats = RunStats()
    start = time.perf_counter()
    notes = []

    jac = f.jacobian
    keller = jac.kind == "constant"
    if not keller:
        verdict = (
            Verdict.NOT_KELLER_ZERO
            if jac.kind == "zero"
            else Verdict.NOT_KELLER_NONCONSTANT
        )
        if not cfg.force:
            stats.millis = int((time.perf_counter() - start) * 1000)
            return ClassificationReport(verdict, jac, stats=stats)
        notes.append(_GATE_NOTE)

    report = ClassificationReport(
        Verdict.DEGENERATE if keller else verdict, jac, stats=stats
    )

    def degenerate(reason: str) -> ClassificationReport:
        if keller:
            report.verdict = Verdict.DEGENERATE
            report.degenerate_reason = reason
        else:
            notes.append(f"evidence stopped early: {reason}")
        report.notes = tuple(notes)
        stats.millis = int((time.perf_counter() - start) * 1000)
        return report

    try:
        kernel = kernel_generator(
            f, max_spairs=cfg.max_spairs, max_degree=cfg.max_degree, stats=stats
        )
    except (AlgebraicallyDependentError, ZeroKernelError) as exc:
        return degenerate(str(exc))
    except (ResourceCapExceeded, DegreeCapExceeded) as exc:
        return degenerate(str(exc))
    report.kernel = kernel

    try:
        uv = uv_decomposition(
            f,
            kernel=kernel,
            max_spairs=cfg.max_spairs,
            max_degree=cfg.max_degree,
            stats=stats,
        )
    except NotShapePositionError as exc:
        return degenerate(str(exc))
    except (ResourceCapExceeded, DegreeCapExceeded) as exc:
        return degenerate(str(exc))
    report.uv = uv

    try:
        vfact = factor_bivariate(
            uv.v,
            degree_cap=max(cfg.factor_degree_cap, uv.v.total_degree()),
            absolute=cfg.absolute,
        )
        report.v_factorization = vfact
        report.v_reports = tuple(
            stays_irreducible(vj, f, degree_cap=cfg.factor_degree_cap)
            for vj, _ in vfact.factors
        )
        units = localization_units_check(
            f,
            uv.v,
            degree_cap=cfg.factor_degree_cap,
            max_spairs=cfg.max_spairs,
            max_degree=cfg.max_degree,
            stats=stats,
        )
        report.units = units
    except (ResourceCapExceeded, DegreeCapExceeded) as exc:
        return degenerate(str(exc))

    all_preserved = all(r.preserved for r in report.v_reports)
    if units.all_units_in_Cpq != all_preserved:
        raise InternalInconsistencyError(
            "units verdict disagrees with factor preservation"
        )

    bit_ii = kernel.r == 1
    bit_iii = units.all_units_in_Cpq
    if keller and bit_ii != bit_iii:
        raise InternalInconsistencyError(
            "the birationality route and the units route disagree"
        )

    if keller and bit_ii:
        s, t = invert(
            f, max_spairs=cfg.max_spairs, max_degree=cfg.max_degree, stats=stats
        )
        if not verify_inverse(f, s, t):
            raise InternalInconsistencyError("computed inverse failed verification")
        report.inverse = (s, t)
        report.verdict = Verdict.AUTOMORPHISM
        report.tfae = TfaeReport(True, bit_ii, bit_iii)
    elif keller:
        report.verdict = Verdict.COUNTEREXAMPLE_CANDIDATE
        notes.append(_CANDIDATE_NOTE)
        try:
            s, t = invert(
                f, max_spairs=cfg.max_spairs, max_degree=cfg.max_degree, stats=stats
            )
            bit_i = verify_inverse(f, s, t)
        except MembershipFailedError:
            bit_i = False
        report.tfae = TfaeReport(bit_i, bit_ii, bit_iii)
    else:
        # informational run on a non-Keller map: no inverse claim is made,
        # but record whichever facts were computed
        report.tfae = None

    report.notes = tuple(notes)
    stats.millis = int((time.perf_counter() - start) * 1000)
    return report
