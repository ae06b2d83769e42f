"""Command-line surface: spec-file ingestion, command dispatch, report emission.

Spec files are JSON documents; expressions are strings in the expression
grammar.  Exit codes: 0 all checks pass, 1 check failures, 2 input or usage
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exprlang import DomainError, ParseError
from .geometry import GeometryError, ManifoldSpec, validate_metric
from .connections import (ConnectionField, conjugate, duality_residual,
                          explicit_connection, is_statistical, levi_civita)
from .curvature import DimensionError, curvature_report
from .products import (ProductSpec, block_levi_civita_defect, curvature_block_report,
                       lift_lemma_residual, mixed_ricci_table, mixed_weyl_report,
                       separability_test, twisted_product)
from .dualistic import (ConjugacyError, dually_flat_verdict, induce_on_product,
                        make_dualistic, theorem41_analyze, theorem42_analyze,
                        theorem43_analyze)
from .report import RunConfig, VerificationReport, jsonable, sha256_of
from .verify import VERSION, verify_paper

__all__ = ["main", "load_spec", "LoadedManifold", "LoadedProduct", "SpecFileError"]


class SpecFileError(ValueError):
    """Spec document violates the schema."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


@dataclass(eq=False)
class LoadedManifold:
    manifold: ManifoldSpec
    connection: ConnectionField
    dual_connection: ConnectionField | None
    digest: str


@dataclass(eq=False)
class LoadedProduct:
    product: ProductSpec
    base: LoadedManifold
    fiber: LoadedManifold
    digest: str


def _require(doc: dict, field: str, kind, where: str):
    if field not in doc:
        raise SpecFileError(f"{where}.{field}", "missing required field")
    value = doc[field]
    if kind is not None and not isinstance(value, kind):
        raise SpecFileError(f"{where}.{field}", f"expected {kind.__name__}")
    return value


def _parse_connection(doc, M: ManifoldSpec, where: str) -> ConnectionField:
    kind = _require(doc, "kind", str, where)
    if kind == "levi-civita":
        return levi_civita(M)
    if kind == "explicit":
        gamma_doc = doc.get("gamma", {})
        if not isinstance(gamma_doc, dict):
            raise SpecFileError(f"{where}.gamma", "expected an object of 'k,i,j' entries")
        entries = {}
        for key, src in gamma_doc.items():
            try:
                k, i, j = (int(part) for part in key.split(","))
            except ValueError:
                raise SpecFileError(f"{where}.gamma[{key!r}]",
                                    "key must be 'k,i,j' with integer indices") from None
            entries[(k, i, j)] = str(src)
        try:
            return explicit_connection(M, entries)
        except (ParseError, ValueError) as exc:
            raise SpecFileError(f"{where}.gamma", str(exc)) from exc
    raise SpecFileError(f"{where}.kind", f"unknown connection kind {kind!r}")


def _load_manifold_doc(doc: dict, where: str, digest: str) -> LoadedManifold:
    name = _require(doc, "name", str, where)
    coords = _require(doc, "coords", list, where)
    domain = _require(doc, "domain", list, where)
    metric = _require(doc, "metric", list, where)
    try:
        M = ManifoldSpec.from_strings(name, coords, [tuple(iv) for iv in domain],
                                      [[str(e) for e in row] for row in metric])
    except ParseError as exc:
        raise SpecFileError(f"{where}.metric", str(exc)) from exc
    except (GeometryError, TypeError, ValueError) as exc:
        raise SpecFileError(where, str(exc)) from exc
    try:
        validate_metric(M, samples=32, seed=7)
    except (GeometryError, DomainError) as exc:
        raise SpecFileError(f"{where}.metric", str(exc)) from exc
    conn = _parse_connection(doc.get("connection", {"kind": "levi-civita"}),
                             M, f"{where}.connection")
    dual = None
    if "dual_connection" in doc:
        dual = _parse_connection(doc["dual_connection"], M, f"{where}.dual_connection")
    return LoadedManifold(M, conn, dual, digest)


def load_spec(path: str):
    """Load a manifold or product spec file (JSON)."""
    p = Path(path)
    if not p.exists():
        raise SpecFileError(str(path), "file does not exist")
    data = p.read_bytes()
    digest = sha256_of(data)
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SpecFileError(str(path), f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecFileError(str(path), "top level must be an object")
    if doc.get("kind") == "twisted_product":
        return _load_product_doc(doc, p, digest)
    return _load_manifold_doc(doc, p.name, digest)


def _load_factor(ref, base_dir: Path, where: str) -> LoadedManifold:
    if isinstance(ref, str):
        loaded = load_spec(str((base_dir / ref).resolve()))
        if not isinstance(loaded, LoadedManifold):
            raise SpecFileError(where, "factor file must describe a manifold")
        return loaded
    if isinstance(ref, dict):
        return _load_manifold_doc(ref, where, "inline")
    raise SpecFileError(where, "expected a path string or an inline manifold object")


def _load_product_doc(doc: dict, path: Path, digest: str) -> LoadedProduct:
    base = _load_factor(_require(doc, "base", None, path.name), path.parent,
                        f"{path.name}.base")
    fiber = _load_factor(_require(doc, "fiber", None, path.name), path.parent,
                         f"{path.name}.fiber")
    twist = _require(doc, "twist", str, path.name)
    try:
        P = twisted_product(base.manifold, fiber.manifold, twist)
    except (ParseError, GeometryError, DomainError) as exc:
        raise SpecFileError(f"{path.name}.twist", str(exc)) from exc
    return LoadedProduct(P, base, fiber, digest)


# ---------------------------------------------------------------------------
# commands


def _new_report(config: RunConfig, inputs: dict) -> VerificationReport:
    return VerificationReport(
        tool="dualgeo", version=VERSION,
        config={"samples": config.samples, "seed": config.seed,
                "tol_exact": config.tol_exact, "tol_fd": config.tol_fd},
        inputs=inputs)


def _finish(rep: VerificationReport, config: RunConfig, extra: dict | None = None) -> int:
    print(rep.render_table())
    if config.report_path:
        payload = json.loads(rep.to_json())
        if extra:
            payload["details"] = jsonable(extra)
        with open(config.report_path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if rep.overall == "pass" else 1


def cmd_check(loaded: LoadedManifold, config: RunConfig) -> int:
    M = loaded.manifold
    rep = _new_report(config, {"spec_digest": loaded.digest, "manifold": M.name})
    inv_worst = 0.0
    sym_worst = 0.0
    for pt in M.sample_points(min(config.samples, 32), config.seed):
        g = M.metric_at(pt)
        sym_worst = max(sym_worst, float(np.max(np.abs(g - g.T))))
        inv_worst = max(inv_worst, float(np.max(np.abs(
            g @ M.inverse_metric_at(pt) - np.eye(M.dim)))))
    rep.add("metric-symmetry", "g_ij = g_ji", sym_worst, config.exact_tol(1e-12))
    rep.add("inverse-metric", "g . g^{-1} = id", inv_worst, config.exact_tol(1e-12))

    C = loaded.connection
    Cstar = loaded.dual_connection or conjugate(C, M)
    declared = loaded.dual_connection is not None
    worst_duality = max(duality_residual(M, C, Cstar, pt)
                        for pt in M.sample_points(config.samples, config.seed))
    rep.add("duality-residual",
            "X.g(Y,Z) = g(D_X Y, Z) + g(Y, D*_X Z)"
            + ("" if declared else " (dual computed by conjugation)"),
            worst_duality, config.exact_tol(1e-9))
    double = conjugate(Cstar, M)
    worst_inv = max(float(np.max(np.abs(double.gamma_at(pt) - C.gamma_at(pt))))
                    for pt in M.sample_points(min(config.samples, 32), config.seed))
    rep.add("conjugation-involution", "dual of the dual returns the primal",
            worst_inv, config.exact_tol(1e-9))
    stat = is_statistical(M, C, min(config.samples, 32), config.seed)
    rep.add("statistical-verdict",
            "torsion-free with totally symmetric cubic form",
            None, None, informational=True,
            notes=(f"statistical={stat.is_statistical} "
                   f"(max torsion {stat.max_torsion:.2e}, "
                   f"max cubic asymmetry {stat.max_cubic_asymmetry:.2e})"))
    return _finish(rep, config)


def cmd_conjugate(loaded: LoadedManifold, config: RunConfig) -> int:
    M = loaded.manifold
    point = M.point(config.point) if config.point else M.center()
    Cstar = conjugate(loaded.connection, M)
    gam = Cstar.gamma_at(point)
    rep = _new_report(config, {"spec_digest": loaded.digest, "manifold": M.name})
    worst = max(duality_residual(M, loaded.connection, Cstar, pt)
                for pt in M.sample_points(min(config.samples, 32), config.seed))
    rep.add("duality-residual", "computed conjugate satisfies the duality relation",
            worst, config.exact_tol(1e-10))
    print(f"conjugate connection at {point.coords.tolist()} "
          f"(entries Gamma*^k_ij, upper index first):")
    d = M.dim
    for k in range(d):
        for i in range(d):
            for j in range(d):
                if abs(gam[k, i, j]) > 1e-14:
                    print(f"  Gamma*^{k}_{i}{j} = {gam[k, i, j]:+.12g}")
    return _finish(rep, config, extra={"point": point.coords, "gamma_star": gam})


def cmd_curvature(loaded: LoadedManifold, config: RunConfig, with_weyl: bool) -> int:
    M = loaded.manifold
    if with_weyl and M.dim <= 2:
        print(f"error: the conformal tensor needs dim >= 3, manifold has dim {M.dim}",
              file=sys.stderr)
        return 2
    point = M.point(config.point) if config.point else M.center()
    report = curvature_report(M, loaded.connection, point, tol=config.tol_exact)
    print(f"curvature at {point.coords.tolist()} on {M.name!r} "
          f"({loaded.connection.provenance}):")
    print(f"  max |R^l_ijk| = {float(np.max(np.abs(report.riemann))):.6e}"
          f"  (flat at point: {report.flat_at_point})")
    print(f"  Ricci = {np.array2string(report.ricci, precision=6)}")
    print(f"  scalar = {report.scalar:.12g}")
    if report.weyl is not None:
        print(f"  max |Weyl| = {float(np.max(np.abs(report.weyl))):.6e}")
    if config.report_path:
        with open(config.report_path, "w") as fh:
            json.dump(jsonable(report.to_dict()), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_twist(loaded: LoadedProduct, config: RunConfig) -> int:
    P = loaded.product
    rep = _new_report(config, {"spec_digest": loaded.digest,
                               "product": P.manifold.name,
                               "classification": P.classification})
    rep.add("twist-classification", "direct / warped / proper-twisted from the twist's "
            "coordinate dependence", None, None, informational=True,
            notes=P.classification)
    rep.add("lift-lemma", "derivatives of factor metrics commute with lifts",
            lift_lemma_residual(P, min(config.samples, 16), config.seed),
            config.exact_tol(1e-10))
    rep.add("block-levi-civita", "block assembly matches the chart connection",
            block_levi_civita_defect(P, min(config.samples, 16), config.seed),
            config.exact_tol(1e-8))
    blocks = curvature_block_report(P, samples=min(config.samples, 10),
                                    seed=config.seed, tol=config.exact_tol(1e-7))
    for name, value in blocks.residuals.items():
        rep.add(f"curvature-block {name}", "block formula vs direct product curvature",
                value, blocks.tol)
    rep.add("curvature-block R(U,V)W variants",
            "as-printed vs index-consistent fiber-block pairing",
            None, None, informational=True,
            notes=f"as-printed={blocks.ruvw_printed:.3e}, "
                  f"index-consistent={blocks.ruvw_index_consistent:.3e}, "
                  f"adopted={blocks.ruvw_adopted}")
    tbl = mixed_ricci_table(P, min(config.samples, 10), config.seed)
    rep.add("mixed-ricci", "|Ric(X,V)| = |(s-1) XV(k)| (sign fixed by the oracle)",
            abs(tbl["max_direct"] - tbl["max_closed_form"]), config.exact_tol(1e-6),
            notes=f"max |Ric(X,V)| = {tbl['max_direct']:.3e}")
    if P.n >= 3:
        mw = mixed_weyl_report(P, samples=min(config.samples, 8), seed=config.seed)
        rep.add("mixed-weyl-display C(X,Y)V", "((1-s)/(n-2))[XV(k)Y - YV(k)X]",
                mw.display_xyv_residual, config.exact_tol(1e-6))
        rep.add("mixed-weyl-display C(V,W)X", "((r-1)/(n-2))[XV(k)W - XW(k)V]",
                mw.display_vwx_residual, config.exact_tol(1e-6))
        rep.add("mixed-weyl-verdicts", "flat-along and mixed-flat conditions",
                None, None, informational=True,
                notes=f"C(X,Y)V=0: {mw.xyv_flat}, C(V,W)X=0: {mw.vwx_flat}, "
                      f"mixed flat: {mw.mixed_weyl_flat}")
    sep = separability_test(P, min(config.samples, 16), config.seed)
    rep.add("separability", "k = alpha(base) + beta(fiber)",
            None, None, informational=True,
            notes=(f"separable={sep.separable}, "
                   f"max cross-derivative={sep.max_cross_derivative:.3e}"))
    return _finish(rep, config)


def cmd_flatness(loaded: LoadedProduct, config: RunConfig) -> int:
    rep = _new_report(config, {"spec_digest": loaded.digest})
    details: dict = {}
    try:
        dB = make_dualistic(loaded.base.manifold, loaded.base.connection,
                            loaded.base.dual_connection,
                            samples=min(config.samples, 32), seed=config.seed)
        dF = make_dualistic(loaded.fiber.manifold, loaded.fiber.connection,
                            loaded.fiber.dual_connection,
                            samples=min(config.samples, 32), seed=config.seed)
        induced = induce_on_product(dB, dF, loaded.product.twist,
                                    samples=min(config.samples, 32), seed=config.seed)
    except ConjugacyError as exc:
        rep.add("conjugacy", "declared pair satisfies the duality relation",
                exc.residual, config.exact_tol(1e-9), notes=str(exc))
        return _finish(rep, config)
    rep.add("induced-duality", "induced pair (D, D*) satisfies the duality relation",
            induced.residual, config.exact_tol(1e-9))

    fv = dually_flat_verdict(induced, min(config.samples, 32), 1e-9, config.seed)
    fb = dually_flat_verdict(dB, min(config.samples, 32), 1e-9, config.seed)
    ff = dually_flat_verdict(dF, min(config.samples, 32), 1e-9, config.seed)
    failing = []
    if not fb.dually_flat:
        failing.append(f"base {dB.manifold.name!r}")
    if not ff.dually_flat:
        failing.append(f"fiber {dF.manifold.name!r}")
    rep.add("dually-flat-verdict",
            "both induced connections torsion-free with vanishing curvature",
            None, None, informational=True,
            notes=(f"dually flat: {fv.dually_flat} "
                   f"(max |R| = {fv.riemann_primal_max:.3e}, "
                   f"max |R*| = {fv.riemann_dual_max:.3e})"
                   + (f"; failing factors: {', '.join(failing)}" if failing else "")))
    rep.add_flag("flat-flags-agree", "R = 0 exactly when R* = 0", fv.flat_flags_agree)

    rec41 = theorem41_analyze(induced, samples=min(config.samples, 16), seed=config.seed)
    rep.add("analyzer-mixed-ricci", "mixed-Ricci-flat biconditional vs direct verdict",
            rec41.mixed_ricci_max, None, informational=True,
            notes=(f"precondition={'holds' if rec41.mixed_ricci_flat else 'fails'}, "
                   f"predicted={rec41.predicted_dually_flat}, "
                   f"direct={rec41.direct.dually_flat}, agreement={rec41.agreement}"
                   + ("; " + "; ".join(rec41.notes) if rec41.notes else "")))
    details["mixed_ricci_analysis"] = rec41
    if induced.product.n >= 3:
        rec42 = theorem42_analyze(induced, samples=min(config.samples, 12), seed=config.seed)
        rep.add("analyzer-mixed-weyl", "Weyl-flat-along biconditional vs direct verdict",
                max(rec42.weyl_xyv_max, rec42.weyl_vwx_max), None, informational=True,
                notes=(f"hypothesis={'holds' if rec42.weyl_flat_along_holds else 'fails'}, "
                       f"predicted={rec42.predicted_dually_flat}, "
                       f"direct={rec42.direct.dually_flat}, agreement={rec42.agreement}"))
        details["mixed_weyl_analysis"] = rec42
    rec43 = theorem43_analyze(induced, samples=min(config.samples, 12), seed=config.seed)
    rep.add("analyzer-weyl-parallel", "parallel-Weyl/Hessian branches vs direct verdict",
            rec43.hessian_defect, None, informational=True,
            notes=(f"branch={rec43.branch}, predicted={rec43.predicted_dually_flat}, "
                   f"direct={rec43.direct.dually_flat}, agreement={rec43.agreement}"
                   + ("; " + "; ".join(rec43.notes) if rec43.notes else "")))
    details["weyl_parallel_analysis"] = rec43
    details["direct_verdict"] = fv
    return _finish(rep, config, extra=details)


def cmd_verify_paper(config: RunConfig) -> int:
    rep = verify_paper(config)
    print(rep.render_table())
    if config.report_path:
        rep.write(config.report_path)
    return 0 if rep.overall == "pass" else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--samples", type=int, default=64, help="sample points per check")
    parser.add_argument("--seed", type=int, default=42, help="RNG seed")
    parser.add_argument("--tol-exact", type=float, default=1e-8,
                        help="tightening override for exact-identity tolerances")
    parser.add_argument("--tol-fd", type=float, default=1e-4,
                        help="tolerance for finite-difference-based checks")
    parser.add_argument("--point", type=str, default=None,
                        help="comma-separated chart coordinates")
    parser.add_argument("--report", type=str, default=None,
                        help="write the machine-readable JSON report here")


def _config_from(args) -> RunConfig:
    point = None
    if args.point:
        try:
            point = tuple(float(part) for part in args.point.split(","))
        except ValueError:
            raise SpecFileError("--point", "expected comma-separated numbers") from None
    return RunConfig(samples=args.samples, seed=args.seed, tol_exact=args.tol_exact,
                     tol_fd=args.tol_fd, report_path=args.report, point=point)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualgeo",
        description="dualistic structures on chart manifolds and twisted products")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a manifold spec and its connection pair")
    p.add_argument("spec")
    _add_common(p)

    p = sub.add_parser("conjugate", help="compute the conjugate connection")
    p.add_argument("spec")
    _add_common(p)

    p = sub.add_parser("curvature", help="curvature report at a point")
    p.add_argument("spec")
    p.add_argument("--weyl", action="store_true",
                   help="require the conformal tensor (error below dim 3)")
    _add_common(p)

    p = sub.add_parser("twist", help="verify twisted-product block formulas")
    p.add_argument("spec", nargs="?", default=None, help="product spec file")
    p.add_argument("--base", help="base manifold spec file")
    p.add_argument("--fiber", help="fiber manifold spec file")
    p.add_argument("--twist", help="twisting expression over both factors' coordinates")
    _add_common(p)

    p = sub.add_parser("flatness", help="dual-flatness verdict and theorem analyzers")
    p.add_argument("spec", help="product spec file with factor connections")
    _add_common(p)

    p = sub.add_parser("verify-paper", help="run the built-in verification suite")
    _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from(args)
        if args.command == "check":
            loaded = load_spec(args.spec)
            if not isinstance(loaded, LoadedManifold):
                raise SpecFileError(args.spec, "check expects a manifold spec")
            return cmd_check(loaded, config)
        if args.command == "conjugate":
            loaded = load_spec(args.spec)
            if not isinstance(loaded, LoadedManifold):
                raise SpecFileError(args.spec, "conjugate expects a manifold spec")
            return cmd_conjugate(loaded, config)
        if args.command == "curvature":
            loaded = load_spec(args.spec)
            if not isinstance(loaded, LoadedManifold):
                raise SpecFileError(args.spec, "curvature expects a manifold spec")
            return cmd_curvature(loaded, config, args.weyl)
        if args.command == "twist":
            if args.spec:
                loaded = load_spec(args.spec)
                if not isinstance(loaded, LoadedProduct):
                    raise SpecFileError(args.spec, "twist expects a product spec")
            elif args.base and args.fiber and args.twist:
                base = load_spec(args.base)
                fiber = load_spec(args.fiber)
                P = twisted_product(base.manifold, fiber.manifold, args.twist)
                digest = sha256_of(f"{base.digest}|{fiber.digest}|{args.twist}".encode())
                loaded = LoadedProduct(P, base, fiber, digest)
            else:
                raise SpecFileError("twist", "provide a product spec or --base/--fiber/--twist")
            return cmd_twist(loaded, config)
        if args.command == "flatness":
            loaded = load_spec(args.spec)
            if not isinstance(loaded, LoadedProduct):
                raise SpecFileError(args.spec, "flatness expects a product spec")
            return cmd_flatness(loaded, config)
        assert args.command == "verify-paper"
        return cmd_verify_paper(config)
    except (SpecFileError, ParseError, GeometryError, DomainError,
            DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
