"""One-stop composition of the geometry pipeline for a single instance."""

from __future__ import annotations

from dataclasses import dataclass

from . import levicivita, natural
from .levicivita import ClassFlags, ConnectionCoeffs, LeeForm, RicciScalar
from .natural import (
    FlatReport,
    NaturalConnection,
    ParallelTorsionReport,
    PCurvatureCriterion,
    RicciRelation,
    STensor,
    TorsionIdentityDefects,
)
from .structure import RpmInstance, StructureReport, validate_structure
from .tensors import DEFAULT_EPS, DenseTensor, max_abs


@dataclass(frozen=True)
class InstanceAnalysis:
    """Every tensor and predicate the verification commands report."""

    inst: RpmInstance
    structure: StructureReport
    flags: ClassFlags
    nabla: ConnectionCoeffs
    F: DenseTensor
    lee: LeeForm
    R: DenseTensor
    ricci: RicciScalar
    D: NaturalConnection
    Rprime: DenseTensor
    ricci_prime: RicciScalar
    S: STensor
    W: DenseTensor
    Wprime: DenseTensor
    naturality_metric_defect: float
    naturality_structure_defect: float
    torsion_reconstruction_defect: float
    torsion_identities: TorsionIdentityDefects
    curvature_relation_residual: float
    ricci_relation: RicciRelation
    weyl_invariance_residual: float
    p_criterion: PCurvatureCriterion
    parallel: ParallelTorsionReport
    flat: FlatReport


def analyze_instance(inst: RpmInstance, eps: float = DEFAULT_EPS) -> InstanceAnalysis:
    structure = validate_structure(inst, eps)
    flags = levicivita.class_flags(inst, eps)

    nabla = levicivita.levi_civita_coeffs(inst)
    f = levicivita.structure_tensor_F(inst, nabla)
    lee = levicivita.lee_form(inst, f)
    theta = lee.theta_components
    r = levicivita.curvature_tensor(nabla, inst.alg, inst.metric)
    ricci = levicivita.ricci_and_scalar(r, inst.metric)

    d = natural.connection_D_from(inst, nabla, theta)
    r_prime = natural.curvature_Rprime(d, inst.alg, inst.metric)
    ricci_prime = levicivita.ricci_and_scalar(r_prime, inst.metric)
    s = natural.s_tensor(inst, d, theta)

    w = levicivita.weyl_tensor(r, ricci.rho, ricci.tau, inst.metric)
    w_prime = levicivita.weyl_tensor(r_prime, ricci_prime.rho, ricci_prime.tau, inst.metric)

    dg_defect, dp_defect = natural.naturality_defects(d, inst)
    reconstruction = max_abs(natural.recomputed_torsion(d.coeffs, inst) - d.T.components)

    return InstanceAnalysis(
        inst=inst,
        structure=structure,
        flags=flags,
        nabla=nabla,
        F=f,
        lee=lee,
        R=r,
        ricci=ricci,
        D=d,
        Rprime=r_prime,
        ricci_prime=ricci_prime,
        S=s,
        W=w,
        Wprime=w_prime,
        naturality_metric_defect=dg_defect,
        naturality_structure_defect=dp_defect,
        torsion_reconstruction_defect=reconstruction,
        torsion_identities=natural.torsion_identity_defects(inst, d, theta),
        curvature_relation_residual=natural.verify_curvature_relation(
            r, r_prime, s, inst.metric, inst.n
        ),
        ricci_relation=natural.ricci_scalar_relation(
            ricci.rho, ricci_prime.rho, ricci.tau, ricci_prime.tau, s, inst.metric, inst.n
        ),
        weyl_invariance_residual=natural.weyl_invariance_check(
            r, ricci.rho, ricci.tau, r_prime, ricci_prime.rho, ricci_prime.tau,
            inst.metric, inst.n,
        ),
        p_criterion=natural.p_curvature_criterion(inst, d, theta, eps, nabla=nabla),
        parallel=natural.has_parallel_torsion(inst, d, theta, eps, nabla=nabla),
        flat=natural.flat_D_report(inst, d, r, r_prime, theta, eps),
    )
