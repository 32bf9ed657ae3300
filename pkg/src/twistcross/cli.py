"""Command-line front end: batch runs over JSON inputs with JSON/text reports.

Exit codes: 0 when every verdict passes, 1 when a verdict fails or a
decomposition is refused, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import io_json
from .congruence import (
    congruence_from_normal_clifford,
    enumerate_normal_clifford,
    is_congruence,
    is_idempotent_separating,
    kernel_normal_system,
    quotient,
)
from .cross_section import find_order_preserving, is_order_preserving
from .errors import InputError, TwistcrossError, VerificationRefusal
from .exel import ExelSemigroup
from .fdalgebra import cstar_dimension, jacobson_radical, semigroup_algebra
from .partial_bijection import parse_pb
from .report import Report
from .semigroup import (
    adjoin_unit,
    cyclic_group,
    generate_partial_bijections,
    is_ftilde,
    max_group_image,
    verify_inverse_semigroup,
)


def _emit(payload, args):
    text = getattr(args, "format", "json") == "text"
    if text:
        print(_render_text(payload))
    else:
        print(json.dumps(payload, indent=2, default=str))
    out = getattr(args, "output", None)
    if out:
        io_json.dump_json_file(json.loads(json.dumps(payload, default=str)), out)


def _render_text(payload, indent=0):
    pad = "  " * indent
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_render_text(v, indent) for v in payload)
    return f"{pad}{payload}"


def _is_flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


def _write_csv(rows, header, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _outdir(args):
    d = getattr(args, "outdir", None)
    if d:
        os.makedirs(d, exist_ok=True)
    return d


def _report_rows(report):
    return [[c.name, "pass" if c.passed else "FAIL", c.detail] for c in report.checks]


# -- subcommand implementations --------------------------------------------------


def cmd_gen(args):
    gens = [parse_pb(g) for g in args.gens]
    if any(g.degree != args.degree for g in gens):
        raise InputError("generator degree disagrees with --degree")
    S = generate_partial_bijections(gens, cap=args.max_size)
    payload = io_json.dump_semigroup(S)
    if args.output:
        io_json.dump_json_file(payload, args.output)
        print(f"wrote semigroup of size {S.size} to {args.output}")
    else:
        print(json.dumps(payload, indent=2))
    return 0


def cmd_analyze(args):
    S = io_json.load_semigroup(args.input, validate=False, max_size=args.max_size)
    verify = verify_inverse_semigroup(S)
    payload = {
        "size": S.size,
        "unit": S.unit,
        "zero": S.zero,
        "idempotents": list(S.idempotent_list()),
        "order_pairs": sorted(
            [a, b] for a in S.elements() for b in S.elements() if a != b and S.leq(a, b)
        ),
        "verify": verify.to_dict(),
    }
    if S.unit is not None:
        ok, majorant, witness, note = is_ftilde(S)
        payload["unique_maximal_majorants"] = ok
        if ok:
            payload["majorant_map"] = {str(k): v for k, v in sorted(majorant.items())}
        else:
            payload["majorant_witness"] = list(witness[1]) and [witness[0], list(witness[1])]
        if note:
            payload["majorant_note"] = note
    G, proj = max_group_image(S)
    payload["max_group_image"] = {"size": G.size, "projection": list(proj)}
    A = semigroup_algebra(S)
    cert = cstar_dimension(A, tol=args.tol)
    payload["algebra"] = {
        "radical_dim": cert.radical_dim,
        "semisimple_dim": cert.value,
        "certified_positive": cert.certified,
    }
    outdir = _outdir(args)
    if outdir:
        from . import figures

        figures.cayley_figure(S, os.path.join(outdir, "cayley.png"))
        figures.order_figure(S, os.path.join(outdir, "order.png"))
        figures.spectrum_figure(
            cert.eigenvalues, args.tol, os.path.join(outdir, "trace_spectrum.png")
        )
        rows = [["size", S.size, ""], ["group_image", G.size, ""], [
            "radical_dim", cert.radical_dim, ""], ["certified", cert.certified, ""]]
        rows += _report_rows(verify)
        _write_csv(rows, ["item", "value", "detail"], os.path.join(outdir, "summary.csv"))
        payload["figures"] = ["cayley.png", "order.png", "trace_spectrum.png"]
    _emit(payload, args)
    return 0 if verify.passed else 1


def cmd_nclifford(args):
    S = io_json.load_semigroup(args.input, max_size=args.max_size)
    subs = enumerate_normal_clifford(S, max_size=args.guard)
    payload = {"count": len(subs), "subsemigroups": [list(n) for n in subs]}
    _emit(payload, args)
    return 0


def cmd_section(args):
    S = io_json.load_semigroup(args.input, max_size=args.max_size)
    N = io_json.load_subset(args.subsemigroup, S)
    cong = congruence_from_normal_clifford(S, N)
    if args.verify:
        section = io_json.load_section(args.verify)
        rep = is_order_preserving(S, cong, section)
        payload = {"verified": rep.passed, "report": rep.to_dict()}
        _emit(payload, args)
        return 0 if rep.passed else 1
    section, diagnosis = find_order_preserving(S, cong)
    if section is None:
        payload = {"found": False, "diagnosis": diagnosis.to_dict()}
    else:
        payload = {"found": True, "section": io_json.dump_section(section)}
    _emit(payload, args)
    return 0


def cmd_exel(args):
    if args.cyclic is not None:
        G = cyclic_group(args.cyclic)
    elif args.input:
        G = io_json.load_semigroup(args.input)
    else:
        raise InputError("need --cyclic N or --input group.json")
    ex = ExelSemigroup(G)
    payload = io_json.dump_semigroup(ex.semigroup)
    payload["group_size"] = G.size
    payload["expansion_size"] = ex.size()
    if args.output:
        io_json.dump_json_file(payload, args.output)
        print(f"wrote expansion semigroup of size {ex.size()} to {args.output}")
    else:
        print(json.dumps(payload, indent=2))
    return 0


def _load_action_inputs(args):
    S = io_json.load_semigroup(args.input, max_size=args.max_size)
    N = io_json.load_subset(args.sub, S) if args.sub else None
    section = io_json.load_section(args.section) if args.section else None
    return S, N, section


def cmd_action(args):
    from . import actions

    if args.action_cmd == "verify":
        act = io_json.load_action(args.input)
        kind = type(act).__name__
        if kind == "BusbySmithAction":
            rep = actions.verify_busby_smith(act)
        elif kind == "GreenTwistedAction":
            rep = actions.verify_green(act)
        else:
            rep = actions.verify_twisted_partial(act)
        payload = {"kind": kind, "passed": rep.passed, "report": rep.to_dict()}
        _emit(payload, args)
        return 0 if rep.passed else 1

    S, N, section = _load_action_inputs(args)
    if args.kind == "canonical":
        act = actions.canonical_action(S if S.unit is not None else adjoin_unit(S))
    elif args.kind == "cross-section":
        if N is None:
            raise InputError("--sub is required for cross-section actions")
        cong = congruence_from_normal_clifford(S, N)
        if section is None:
            section, diagnosis = find_order_preserving(S, cong)
            if section is None:
                raise VerificationRefusal(
                    "no order-preserving cross-section exists", report=diagnosis
                )
        act = actions.action_from_cross_section(S, N, section, cong)
    elif args.kind == "green-canonical":
        if N is None:
            raise InputError("--sub is required for green-canonical actions")
        act = actions.green_canonical(S, N)
    elif args.kind == "green-to-busby":
        if N is None:
            raise InputError("--sub is required for green-to-busby actions")
        green = actions.green_canonical(S, N)
        cong = congruence_from_normal_clifford(S, N)
        if section is None:
            section, diagnosis = find_order_preserving(S, cong)
            if section is None:
                raise VerificationRefusal(
                    "no order-preserving cross-section exists", report=diagnosis
                )
        act = actions.green_to_busby(green, section, cong)
    else:
        raise InputError(f"unknown action kind {args.kind!r}")
    payload = io_json.dump_action(act)
    if args.output:
        io_json.dump_json_file(payload, args.output)
        print(f"wrote {args.kind} action to {args.output}")
    else:
        print(json.dumps(payload, indent=2))
    return 0


def cmd_xprod(args):
    from . import actions, crossed

    act = io_json.load_action(args.input)
    if type(act).__name__ == "GreenTwistedAction":
        xp = crossed.green_crossed_product(act)
    else:
        xp = crossed.crossed_product(act)
    cert = cstar_dimension(xp.quotient, tol=args.tol)
    payload = {
        "dims": xp.dims(),
        "relation_kind": xp.relation_kind,
        "quotient": {
            "radical_dim": cert.radical_dim,
            "semisimple_dim": cert.value,
            "certified_positive": cert.certified,
        },
    }
    outdir = _outdir(args)
    if outdir:
        from . import figures

        d = xp.dims()
        figures.dims_figure(
            [("convolution", d["convolution"]), ("relations", d["relations"]),
             ("quotient", d["quotient"])],
            os.path.join(outdir, "dimensions.png"),
        )
        figures.spectrum_figure(
            cert.eigenvalues, args.tol, os.path.join(outdir, "quotient_spectrum.png")
        )
        _write_csv(
            [[k, v, ""] for k, v in d.items()]
            + [["certified", cert.certified, cert.reason]],
            ["item", "value", "detail"],
            os.path.join(outdir, "summary.csv"),
        )
        payload["figures"] = ["dimensions.png", "quotient_spectrum.png"]
    _emit(payload, args)
    return 0 if cert.certified else 1


def cmd_decompose(args):
    from . import actions, crossed

    S = io_json.load_semigroup(args.input, max_size=args.max_size)
    if S.unit is None:
        S = adjoin_unit(S)
    sub = io_json.load_subset(args.sub, S)
    section = io_json.load_section(args.section) if args.section else None
    try:
        if args.mode == "busby":
            act = actions.canonical_action(S)
            rep = crossed.decompose_busby(act, sub, section)
        else:
            green = actions.green_canonical(S, sub)
            mid = io_json.load_subset(args.mid, S) if args.mid else sub
            rep = crossed.decompose_green(green, mid)
    except VerificationRefusal as exc:
        payload = {"refused": True, "reason": str(exc)}
        if exc.report is not None:
            payload["diagnosis"] = exc.report.to_dict()
        _emit(payload, args)
        return 1
    payload = {
        "refused": False,
        "dims": {
            "direct": rep.direct.quotient.dim,
            "iterated": rep.iterated.quotient.dim,
            "sub_product": rep.sub_product.quotient.dim,
        },
        "iso": rep.passed,
        "report": rep.to_dict(),
    }
    outdir = _outdir(args)
    if outdir:
        from . import figures

        figures.dims_figure(
            [("direct", rep.direct.quotient.dim),
             ("iterated", rep.iterated.quotient.dim),
             ("inner product", rep.sub_product.quotient.dim)],
            os.path.join(outdir, "decomposition.png"),
        )
        _write_csv(
            _report_rows(rep),
            ["check", "verdict", "detail"],
            os.path.join(outdir, "summary.csv"),
        )
        payload["figures"] = ["decomposition.png"]
    _emit(payload, args)
    return 0 if rep.passed else 1


def cmd_paper_example(args):
    """One-shot reproduction of the counterexample instance and its table."""
    table = Report("counterexample instance")
    r = parse_pb("(1,4,5,0,0,0)")
    s = parse_pb("(0,5,4,0,0,6)")
    S = generate_partial_bijections([r, s], cap=args.max_size)
    table.add("closure of the two generators has 19 elements", S.size == 19,
              f"size {S.size}")
    verify = verify_inverse_semigroup(S)
    table.add("closure is an inverse semigroup", verify.passed)

    conc = S.concrete_elements
    idx = {c: i for i, c in enumerate(conc)}
    sr = idx[s.star() * r]
    rs = idx[r * s.star()]
    E = tuple(i for i in S.elements() if S.is_idempotent(i))
    N = tuple(sorted(set(E) | {sr, rs}))
    cong = congruence_from_normal_clifford(S, N)
    valid = is_congruence(S, cong)
    table.add("induced relation is a congruence", valid.passed)
    table.add(
        "congruence separates idempotents", is_idempotent_separating(S, cong)
    )
    kns = kernel_normal_system(S, cong)
    pair_classes = sorted(tuple(cls) for cls in kns if len(cls) > 1)
    expected = sorted(
        [tuple(sorted((sr, idx[(s.star() * r) * (s.star() * r)]))),
         tuple(sorted((rs, idx[(r * s.star()) * (r * s.star())])))]
    )
    table.add(
        "kernel normal system is the two pairs plus idempotent singletons",
        pair_classes == expected and len(kns) == len(E),
        f"pair classes {pair_classes}",
    )
    section, diagnosis = find_order_preserving(S, cong)
    table.add("no order-preserving cross-section exists", section is None)
    if section is None:
        witness = "; ".join(c.detail for c in diagnosis.checks if c.detail)
        table.add("exhaustion diagnosis names the blocked class", bool(witness), witness)

    subs = enumerate_normal_clifford(S, max_size=max(args.guard, S.size))
    table.add(
        "normal Clifford subsemigroups are the semilattice and the kernel union",
        [len(n) for n in subs] == [len(E), len(N)],
        f"sizes {[len(n) for n in subs]}",
    )
    A = semigroup_algebra(S)
    cert = cstar_dimension(A, tol=args.tol)
    table.add(
        "semigroup algebra is certified semisimple of full dimension",
        cert.certified and cert.radical_dim == 0 and cert.value == S.size,
        f"dim {cert.value}",
    )

    payload = {"passed": table.passed, "table": table.to_dict()}
    outdir = _outdir(args)
    if outdir:
        from . import figures

        figures.cayley_figure(S, os.path.join(outdir, "ex19_cayley.png"))
        figures.order_figure(S, os.path.join(outdir, "ex19_order.png"))
        figures.spectrum_figure(
            cert.eigenvalues, args.tol, os.path.join(outdir, "ex19_trace_spectrum.png")
        )
        _write_csv(
            _report_rows(table),
            ["check", "verdict", "detail"],
            os.path.join(outdir, "summary.csv"),
        )
        payload["figures"] = [
            "ex19_cayley.png",
            "ex19_order.png",
            "ex19_trace_spectrum.png",
        ]
    _emit(payload, args)
    return 0 if table.passed else 1


# -- parser -----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="float comparison tolerance")
    common.add_argument("--samples", type=int, default=200, help="sampled checks per verifier")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument(
        "--max-size", type=int, default=100000, help="closure enumeration cap"
    )
    common.add_argument("--format", choices=["json", "text"], default="json")

    parser = argparse.ArgumentParser(
        prog="twistcross",
        description="Finite-scale twisted inverse-semigroup actions and crossed products.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("gen", help="closure of partial bijection generators")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--gens", nargs="+", required=True, help='tuples like "(1,4,5,0,0,0)"')
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = add_parser("analyze", help="idempotents, order, majorants, group image")
    p.add_argument("--input", required=True)
    p.add_argument("--outdir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = add_parser("nclifford", help="enumerate normal Clifford subsemigroups")
    p.add_argument("--input", required=True)
    p.add_argument("--guard", type=int, default=30, help="size guard for enumeration")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_nclifford)

    p = add_parser("section", help="find or verify order-preserving cross-sections")
    p.add_argument("--input", required=True)
    p.add_argument("--subsemigroup", required=True)
    p.add_argument("--verify", help="section JSON to verify instead of searching")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_section)

    p = add_parser("exel", help="expansion semigroup of a finite group")
    p.add_argument("--cyclic", type=int)
    p.add_argument("--input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_exel)

    p = add_parser("action", help="build or verify twisted actions")
    action_sub = p.add_subparsers(dest="action_cmd", required=True)
    pb = action_sub.add_parser("build", parents=[common])
    pb.add_argument(
        "--kind",
        required=True,
        choices=["canonical", "cross-section", "green-canonical", "green-to-busby"],
    )
    pb.add_argument("--input", required=True)
    pb.add_argument("--sub")
    pb.add_argument("--section")
    pb.add_argument("-o", "--output")
    pb.set_defaults(func=cmd_action)
    pv = action_sub.add_parser("verify", parents=[common])
    pv.add_argument("--input", required=True)
    pv.add_argument("-o", "--output")
    pv.set_defaults(func=cmd_action)

    p = add_parser("xprod", help="crossed product of an action bundle")
    p.add_argument("--input", required=True)
    p.add_argument("--outdir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_xprod)

    p = add_parser("decompose", help="iterated crossed-product decomposition")
    p.add_argument("--mode", choices=["busby", "green"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--sub", required=True)
    p.add_argument("--mid", help="intermediate subsemigroup (green mode)")
    p.add_argument("--section")
    p.add_argument("--outdir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = add_parser(
        "paper-example", help="one-shot reproduction of the counterexample instance"
    )
    p.add_argument("--guard", type=int, default=30)
    p.add_argument("--outdir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_paper_example)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except VerificationRefusal as exc:
        payload = {"refused": True, "reason": str(exc)}
        if exc.report is not None:
            payload["diagnosis"] = exc.report.to_dict()
        print(json.dumps(payload, indent=2))
        return 1
    except TwistcrossError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
