"""Command-line verification tool.

Three subcommands: ``verify-paper`` runs the golden-table battery and the
theorem suite on the builtin family, ``analyze`` runs the pipeline on an
instance file, ``conformal`` checks the conformal-invariance statements
for a given closed 1-form.  Reports are plain text or JSON (--json).

Exit codes: 0 all checks pass, 1 check failure, 2 parse/argument error,
3 structural validation failure, 4 closedness violation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import conformal as conformal_mod
from . import example, levicivita
from .errors import GeometryError, NotClosed
from .instancefile import (
    InvalidInstance,
    LoadedInstance,
    ParseError,
    load_instance,
    parse_rational,
)
from .pipeline import InstanceAnalysis, analyze_instance
from .report import Report
from .structure import RpmInstance, structure_defects, validate_structure
from .tensors import DEFAULT_EPS, max_abs

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_STRUCTURE_FAILURE = 3
EXIT_NOT_CLOSED = 4


def _parse_tuple(text: str, length: int, what: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != length:
        raise ParseError(f"{what} needs {length} comma-separated values, got {len(parts)}")
    return tuple(parse_rational(p) for p in parts)


def _add_structure_checks(rep: Report, report) -> None:
    for defect in report.checks:
        rep.add(defect.name, defect.magnitude)


def _add_analysis_checks(rep: Report, a: InstanceAnalysis) -> None:
    rep.add("natural_connection_preserves_metric", a.naturality_metric_defect)
    rep.add("natural_connection_preserves_structure", a.naturality_structure_defect)
    rep.add("torsion_reconstruction", a.torsion_reconstruction_defect)
    ids = a.torsion_identities
    rep.add("torsion_cyclic_sum", ids.cyclic)
    rep.add("torsion_structure_cyclic_sum", ids.structure_cyclic)
    rep.add("torsion_nested_cyclic_sum", ids.nested_cyclic)
    rep.add("potential_is_transposed_torsion", ids.potential_transpose)
    rep.add("torsion_lee_orthogonality", ids.lee_orthogonality)
    rep.add("curvature_relation", a.curvature_relation_residual)
    rep.add("ricci_relation", a.ricci_relation.ricci_residual)
    rep.add("scalar_relation", a.ricci_relation.scalar_residual)
    rep.add("weyl_invariance", a.weyl_invariance_residual)
    rep.add_indicator("curvature_type_criterion_agreement", a.p_criterion.equivalence_holds)
    rep.add_indicator("curvature_type_closedness_agreement", a.p_criterion.closedness_agrees)
    rep.add_indicator(
        "parallel_torsion_equivalence",
        (a.parallel.dt_defect <= rep.epsilon)
        == (a.parallel.dtheta_defect <= rep.epsilon)
        == (a.parallel.gradient_identity_defect <= rep.epsilon),
    )


def _flags_dict(a: InstanceAnalysis) -> dict:
    return {
        "is_w0": a.flags.is_w0,
        "is_w1": a.flags.is_w1,
        "is_product": a.flags.is_product,
        "flat_natural_connection": a.flat.is_flat,
        "torsion_parallel": a.parallel.verdict,
    }


def _sectional_table(a: InstanceAnalysis) -> dict:
    basis = np.eye(a.inst.dim)
    table = {}
    for i in range(a.inst.dim):
        for j in range(i + 1, a.inst.dim):
            table[f"k_{i + 1}{j + 1}"] = levicivita.sectional_curvature(
                a.R, a.inst.metric, basis[i], basis[j]
            )
    return table


def _tables_dict(a: InstanceAnalysis) -> dict:
    return {
        "lee_form": a.lee.theta_components,
        "levi_civita_gamma": a.nabla.gamma,
        "curvature": a.R.components,
        "ricci": a.ricci.rho.components,
        "scalar_curvature": a.ricci.tau,
        "sectional": _sectional_table(a),
        "natural_gamma": a.D.coeffs.gamma,
        "torsion": a.D.T.components,
        "natural_curvature": a.Rprime.components,
        "natural_curvature_max": max_abs(a.Rprime.components),
        "weyl": a.W.components,
        "weyl_max": max_abs(a.W.components),
        "trace_s": a.S.trace_S,
    }


def _conformal_sweep(rep: Report, inst: RpmInstance, a: InstanceAnalysis, seed: int, samples: int = 5) -> None:
    rng = np.random.default_rng(seed)
    curvature_res = weyl_res = lee_res = conn_res = class_res = 0.0
    for _ in range(samples):
        alpha = conformal_mod.random_closed_form(inst.alg, rng)
        geo = conformal_mod.deformed_geometry(inst, alpha, rep.epsilon)
        curvature_res = max(
            curvature_res,
            conformal_mod.conformal_curvature_residual(a.D, alpha, inst.alg, inst.metric),
        )
        weyl_res = max(weyl_res, conformal_mod.conformal_weyl_residual(inst, alpha, rep.epsilon))
        transformed = conformal_mod.transform_lee(
            a.lee.theta_components, a.lee.omega_components, alpha, inst.structure, inst.metric
        )
        lee_res = max(lee_res, max_abs(transformed.theta_bar.components - geo.theta))
        rule = conformal_mod.transform_D(a.D, alpha)
        conn_res = max(conn_res, max_abs(rule.gamma - geo.D.coeffs.gamma))
        class_res = max(class_res, geo.conformal_class_residual)
    rep.add("conformal_curvature_invariance", curvature_res)
    rep.add("conformal_weyl_invariance", weyl_res)
    rep.add("conformal_lee_reconstruction", lee_res)
    rep.add("conformal_connection_reconstruction", conn_res)
    rep.add("conformal_class_closure", class_res)


def cmd_verify_paper(args) -> int:
    try:
        lam = _parse_tuple(args.lam, 4, "--lambda")
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    eps = args.epsilon
    params = example.ExampleParams(lam)
    inst = example.build_example(params)
    rep = Report(
        instance={"kind": "builtin", "name": "w1-example", "lambda": list(lam)},
        epsilon=eps,
    )

    _add_structure_checks(rep, validate_structure(inst, eps))
    a = analyze_instance(inst, eps)
    rep.add("conformal_class_membership", a.flags.conformal_class_residual)
    rep.add("integrability", a.flags.nijenhuis_defect)

    table_report = example.verify_against_tables(params, eps)
    for name, deviation in table_report.deviations.as_dict().items():
        rep.add(f"table_{name}", deviation)

    if params.degenerate:
        rep.notes.append(
            "degenerate parameters: structure-parallel case, scalar curvature is 0, torsion vanishes"
        )
    else:
        rep.add_indicator("scalar_curvature_negative", table_report.tau < 0.0)
        rep.add_indicator("torsion_not_parallel", not a.parallel.verdict)
    rep.add("weyl_zero", table_report.weyl_max)
    rep.add("natural_curvature_zero", table_report.rprime_max)

    _add_analysis_checks(rep, a)
    _conformal_sweep(rep, inst, a, args.seed)

    flags = example.constant_curvature_flags(params, eps)
    rep.add_indicator("constant_invariant_agreement", flags.invariant_agrees)
    rep.add_indicator("constant_anti_invariant_agreement", flags.anti_invariant_agrees)
    rep.add_indicator("constant_sectional_agreement", flags.sectional_agrees)

    rep.flags.update(_flags_dict(a))
    rep.flags.update(
        {
            "const_invariant": flags.const_invariant,
            "const_anti_invariant": flags.const_anti_invariant,
            "const_sectional": flags.const_sectional,
        }
    )
    rep.tables.update(_tables_dict(a))
    if flags.space_form_residual is not None:
        rep.tables["space_form_residual"] = flags.space_form_residual
        if flags.space_form_residual > eps:
            rep.notes.append(
                "constant basis sectional curvature holds; the curvature tensor still has "
                "parameter cross terms, so it is not proportional to the space-form tensor"
            )

    print(rep.to_json() if args.json else rep.render_text())
    return rep.exit_status


def _load(path: str, rep_kwargs: dict) -> tuple[LoadedInstance | None, Report | None, int]:
    """Load an instance; on failure return a diagnostic report and exit code."""
    try:
        return load_instance(path), None, EXIT_PASS
    except InvalidInstance as exc:
        rep = Report(instance={"kind": "explicit", "path": path}, **rep_kwargs)
        rep.notes.append(f"instance cannot be built: {exc}")
        _add_structure_checks(rep, structure_defects(exc.c, exc.g, exc.p, rep.epsilon))
        return None, rep, EXIT_STRUCTURE_FAILURE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, None, EXIT_PARSE_ERROR


def cmd_analyze(args) -> int:
    loaded, failure_rep, code = _load(args.file, {"epsilon": args.epsilon})
    if failure_rep is not None:
        print(failure_rep.to_json() if args.json else failure_rep.render_text())
        return code
    if loaded is None:
        return code

    inst = loaded.instance
    eps = args.epsilon
    rep = Report(instance=loaded.descriptor, epsilon=eps)
    structure = validate_structure(inst, eps)
    _add_structure_checks(rep, structure)

    a = analyze_instance(inst, eps)
    _add_analysis_checks(rep, a)
    rep.flags.update(_flags_dict(a))
    rep.tables.update(_tables_dict(a))
    if not a.flags.is_w1:
        rep.notes.append(
            "instance is outside the conformally flat product class; "
            "the natural-connection identities are not expected to hold"
        )

    print(rep.to_json() if args.json else rep.render_text())
    if not structure.ok:
        return EXIT_STRUCTURE_FAILURE
    return rep.exit_status


def cmd_conformal(args) -> int:
    loaded, failure_rep, code = _load(args.file, {"epsilon": args.epsilon})
    if failure_rep is not None:
        print(failure_rep.to_json() if args.json else failure_rep.render_text())
        return code
    if loaded is None:
        return code

    inst = loaded.instance
    eps = args.epsilon
    try:
        alpha = np.array(_parse_tuple(args.alpha, inst.dim, "--alpha"))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR

    structure = validate_structure(inst, eps)
    if not structure.ok:
        rep = Report(instance=loaded.descriptor, epsilon=eps)
        _add_structure_checks(rep, structure)
        print(rep.to_json() if args.json else rep.render_text())
        return EXIT_STRUCTURE_FAILURE

    defect = conformal_mod.closedness_defect(inst.alg, alpha)
    if defect > eps:
        basis = conformal_mod.closed_form_basis(inst.alg)
        print(
            f"error: the 1-form is not closed (bracket defect {defect:.3e}); "
            f"closed forms must annihilate the derived subalgebra.\n"
            f"closed-form basis rows:\n{np.array2string(basis, precision=6)}",
            file=sys.stderr,
        )
        return EXIT_NOT_CLOSED

    rep = Report(instance=loaded.descriptor, epsilon=eps)
    rep.tables["alpha"] = alpha
    a = analyze_instance(inst, eps)
    geo = conformal_mod.deformed_geometry(inst, alpha, eps)

    rep.add(
        "conformal_curvature_invariance",
        conformal_mod.conformal_curvature_residual(a.D, alpha, inst.alg, inst.metric),
    )
    rep.add("conformal_weyl_invariance", conformal_mod.conformal_weyl_residual(inst, alpha, eps))
    rep.add("conformal_class_closure", geo.conformal_class_residual)
    transformed = conformal_mod.transform_lee(
        a.lee.theta_components, a.lee.omega_components, alpha, inst.structure, inst.metric
    )
    rep.add(
        "conformal_lee_reconstruction",
        max_abs(transformed.theta_bar.components - geo.theta),
    )
    rep.add(
        "conformal_connection_reconstruction",
        max_abs(conformal_mod.transform_D(a.D, alpha).gamma - geo.D.coeffs.gamma),
    )
    rep.tables["lee_form_transformed"] = geo.theta

    print(rep.to_json() if args.json else rep.render_text())
    return rep.exit_status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodgeo",
        description="Verify curvature and conformal identities of the natural "
        "connection on Riemannian product manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--epsilon", type=float, default=DEFAULT_EPS, help="check tolerance")
        p.add_argument("--json", action="store_true", help="emit a JSON report")

    p_verify = sub.add_parser("verify-paper", help="golden-table and theorem battery for the builtin family")
    p_verify.add_argument("--lambda", dest="lam", required=True, metavar="a,b,c,d",
                          help="four rational family parameters")
    p_verify.add_argument("--seed", type=int, default=0, help="seed for sampled closed 1-forms")
    common(p_verify)

    p_analyze = sub.add_parser("analyze", help="full geometric analysis of an instance file")
    p_analyze.add_argument("--file", required=True, help="instance file (JSON)")
    common(p_analyze)

    p_conf = sub.add_parser("conformal", help="conformal-invariance checks for a closed 1-form")
    p_conf.add_argument("--file", required=True, help="instance file (JSON)")
    p_conf.add_argument("--alpha", required=True, metavar="a,b,...",
                        help="frame components of the closed 1-form")
    common(p_conf)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-paper":
            return cmd_verify_paper(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_conformal(args)
    except NotClosed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CLOSED
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE_FAILURE


if __name__ == "__main__":
    sys.exit(main())
