"""
Command line interface.

    qforge axioms TABLE
    qforge cohomology TABLE [--degree 2] [--theory quandle]
    qforge qm SPEC [--radius 4] [--samples 10000] [--seed 0]
    qforge classes QUANDLE QM [--part 0] [--radius 3] [--samples 10000] [--n-max 32]
    qforge classes --pipeline en [--ns 0,1,2,3,4]
    qforge classes --pipeline kquandle --generators abc --k 2 [--word ab]
    qforge link CODE TABLE

Every run prints one JSON document (or writes it to --out).  Exit status is
0 on success, 1 on a certification failure and 2 on an input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from qforge import __version__
from qforge.boundedclasses import (
    build_phi_X, chooser_independence, counting_family, defect_report,
    en_report, growth_certificate, independence_certificate, k_quandle_pipeline,
)
from qforge.cohomology import bounded_comparison_finite, cohomology_dimension
from qforge.errors import CertificationError, InputError
from qforge.linalg import format_abelian
from qforge.linkdiagram import (
    count_colorings, list_colorings, parse, presentation, wirtinger_presentation,
)
from qforge.quandle import (
    CosetQuandle, TableRack, check_axioms, component_diameter, components,
    inner_group_order,
)
from qforge.quasimorphism import (
    evaluate, frac_str, from_json as qm_from_json, homogenize, measure_defect,
    restriction_is_zero_on_commutators, scl_lower_bound, to_json as qm_to_json,
)
from qforge.words import Alphabet, format_word, parse_word

EXIT_OK, EXIT_CERT, EXIT_INPUT = 0, 1, 2


def _threads() -> int:
    raw = os.environ.get("QFORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"QFORGE_THREADS must be a positive integer, got {raw!r}") from None


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc


def _load_table(path: str, check: bool = False) -> TableRack:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return TableRack.from_json(data, check=check)


# -- commands ----------------------------------------------------------------------------

def cmd_axioms(args) -> dict:
    X = _load_table(args.table)
    rep = check_axioms(X)
    out = {"size": X.size, "rack": rep.rack, "quandle": rep.quandle,
           "classification": rep.classification,
           "right_invertible": rep.right_invertible,
           "self_distributive": rep.self_distributive, "idempotent": rep.idempotent,
           "witnesses": {"invertibility": rep.invertibility_witness,
                         "distributivity": rep.distributivity_witness,
                         "idempotence": rep.idempotence_witness}}
    if rep.rack:
        comps = components(X)
        out.update(components=len(comps), component_list=comps,
                   inn_order=inner_group_order(X), diameters=component_diameter(X))
    return out


def cmd_cohomology(args) -> dict:
    X = TableRack.from_json(_load_json(args.table))
    dim = cohomology_dimension(X, args.degree, args.theory)
    out = {"degree": args.degree, "theory": args.theory, "dimension": dim}
    if args.degree == 2:
        out["comparison"] = bounded_comparison_finite(X, 2, args.theory).to_json()
    return out


def cmd_qm(args) -> dict:
    qm_doc = _load_json(args.qm_file)
    try:
        A = Alphabet.from_json(qm_doc)
        phi = qm_from_json(qm_doc["quasimorphism"], A)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{args.qm_file}: needs generators and a quasimorphism ({exc})") from exc
    elements = [parse_word(t, A) for t in qm_doc.get("elements", [])]
    out: dict = {"quasimorphism": qm_to_json(phi, A)}
    out["values"] = {format_word(g, A): frac_str(evaluate(phi, g, A)) for g in elements}
    hphi = phi if phi.homogeneous else homogenize(phi, A)
    out["homogenized"] = {"quasimorphism": qm_to_json(hphi, A),
                          "values": {format_word(g, A): frac_str(evaluate(hphi, g, A))
                                     for g in elements}}
    measured = measure_defect(phi, A, args.radius, args.samples, args.seed)
    out["defect"] = {"radius": args.radius, "measured": frac_str(measured),
                     "upper": frac_str(phi.defect_upper), "empirical": phi.empirical}
    comm = restriction_is_zero_on_commutators(hphi, A, args.radius)
    out["commutators"] = {"radius": comm.radius, "max_abs": frac_str(comm.max_abs),
                          "witness": format_word(comm.witness, A),
                          "within_bound": comm.within_bound}
    family = [hphi] + [homogenize(qm_from_json(d, A), A) for d in qm_doc.get("family", [])]
    out["scl"] = []
    for t in qm_doc.get("scl", []):
        b = scl_lower_bound(parse_word(t, A), family, A)
        out["scl"].append({"element": t, "lower": frac_str(b.lower)})
    out["certified"] = comm.within_bound and not phi.empirical
    if not comm.within_bound:
        raise CertificationError(f"commutator restriction {comm.max_abs} exceeds the defect bound")
    return out


def _classes_phi(args) -> dict:
    if not args.quandle or not args.qm:
        raise InputError("the phi pipeline needs QUANDLE and QM files")
    X = CosetQuandle.from_json(_load_json(args.quandle))
    A = X.alphabet
    qdata = _load_json(args.qm)
    phi = qm_from_json(qdata, A)
    if not phi.homogeneous:
        phi = homogenize(phi, A)
    phiX = build_phi_X(X, phi, args.part)
    out: dict = {"phi": phiX.describe(), "warnings": list(phiX.warnings),
                 "base": format_word(phiX.base, A) if phiX.base is not None else None}
    out["defect_report"] = defect_report(phiX, args.radius, args.samples, args.seed).to_json()
    if phiX.base is not None:
        out["growth"] = growth_certificate(phiX, args.n_max).to_json()
    out["chooser_independence"] = chooser_independence(
        X, phi, args.part, samples=args.chooser_samples, seed=args.seed).to_json()
    words = qdata.get("family")
    if words:
        fam = counting_family(X, words, args.part)
        out["independence"] = independence_certificate(
            X, fam, args.trials, args.ball_radius, min(args.n_max, 8), args.seed).to_json()
    out["certified"] = all(out[k]["certified"] for k in
                           ("defect_report", "growth", "chooser_independence") if k in out)
    out["empirical"] = phi.empirical
    return out


def cmd_classes(args) -> dict:
    if args.pipeline == "phi":
        return _classes_phi(args)
    if args.pipeline == "en":
        try:
            ns = [int(s) for s in args.ns.split(",") if s.strip()]
        except ValueError:
            raise InputError(f"--ns must be a comma separated list of integers") from None
        return en_report(ns, (-args.m_range, args.m_range)).to_json()
    if not args.generators:
        raise InputError("the kquandle pipeline needs --generators")
    rep = k_quandle_pipeline(list(args.generators), args.k, args.word, args.n_max,
                             args.radius, args.samples, args.seed)
    in_range = (len(rep.generators) >= 2 and rep.k >= 3) or (len(rep.generators) >= 3 and rep.k == 2)
    if in_range and not rep.certified:
        raise CertificationError("k-quandle pipeline produced no certificate: "
                                 + "; ".join(rep.warnings))
    return rep.to_json()


def cmd_link(args) -> dict:
    try:
        text = Path(args.code).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.code}: {exc.strerror}") from exc
    code = parse(text)
    pres = presentation(code)
    free, torsion = wirtinger_presentation(pres).abelianization()
    out = {"arcs": code.arcs, "crossings": len(code.crossings),
           "components": len(code.components), "relations": pres.format_relations(),
           "abelianization": format_abelian(free, torsion)}
    if args.table:
        X = TableRack.from_json(_load_json(args.table))
        if not X.is_quandle:
            raise InputError("colorings need a quandle table")
        out["colorings"] = count_colorings(pres, X)
        listed = list_colorings(pres, X)
        if listed is not None:
            out["coloring_list"] = [list(c) for c in listed]
    return out


# -- plumbing ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qforge", description="Racks, quandles and their bounded cohomology.")
    p.add_argument("--version", action="version", version=f"qforge {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON document here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--radius", type=int, default=None)
    common.add_argument("--samples", type=int, default=10_000)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("axioms", parents=[common], help="classify a rack table")
    a.add_argument("table")
    a.set_defaults(func=cmd_axioms)

    c = sub.add_parser("cohomology", parents=[common], help="rack/quandle cohomology dimension")
    c.add_argument("table")
    c.add_argument("--degree", type=int, default=2)
    c.add_argument("--theory", choices=["rack", "quandle"], default="quandle")
    c.set_defaults(func=cmd_cohomology)

    q = sub.add_parser("qm", parents=[common], help="group quasimorphism report")
    q.add_argument("qm_file", metavar="FILE")
    q.set_defaults(func=cmd_qm, default_radius=4)

    k = sub.add_parser("classes", parents=[common], help="bounded classes from quasimorphisms")
    k.add_argument("quandle", nargs="?")
    k.add_argument("qm", nargs="?")
    k.add_argument("--pipeline", choices=["phi", "en", "kquandle"], default="phi")
    k.add_argument("--part", type=int, default=0)
    k.add_argument("--n-max", dest="n_max", type=int, default=32)
    k.add_argument("--chooser-samples", dest="chooser_samples", type=int, default=1000)
    k.add_argument("--trials", type=int, default=20)
    k.add_argument("--ball-radius", dest="ball_radius", type=int, default=4)
    k.add_argument("--ns", default="0,1,2,3,4")
    k.add_argument("--m-range", dest="m_range", type=int, default=100)
    k.add_argument("--generators")
    k.add_argument("--k", type=int, default=3)
    k.add_argument("--word", default="ab")
    k.set_defaults(func=cmd_classes, default_radius=3)

    l = sub.add_parser("link", parents=[common], help="link diagram presentation and colorings")
    l.add_argument("code")
    l.add_argument("table", nargs="?")
    l.set_defaults(func=cmd_link)
    return p


def _config(args) -> dict:
    skip = {"func", "out", "default_radius"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return frac_str(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.radius is None:
        args.radius = getattr(args, "default_radius", 3)
    status = EXIT_OK
    doc: dict = {"command": args.command}
    try:
        doc["threads"] = _threads()
        doc["config"] = _config(args)
        doc["result"] = args.func(args)
        if doc["result"].get("certified") is False and args.command == "classes" \
                and args.pipeline == "phi":
            status = EXIT_CERT
    except CertificationError as exc:
        doc["error"] = {"kind": "certification", "message": str(exc)}
        status = EXIT_CERT
    except InputError as exc:
        doc["error"] = {"kind": "input", "message": str(exc)}
        status = EXIT_INPUT
    doc["status"] = status
    text = _dump(doc)
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            sys.stderr.write(f"cannot write {args.out}: {exc.strerror}\n")
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
