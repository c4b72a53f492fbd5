"""Batch command-line front end: JSON in, JSON (or CSV) out, deterministic.

Exit codes: 0 success, 2 malformed input, 3 on-wall or precondition failure,
4 internal invariant violation.  Set PARAMOD_LOG=debug for diagnostics on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .connection import (
    ConnectionError,
    FlatTriple,
    LogConnection,
    degree_bounds,
    irreducibility_screen,
    solve_connection_space,
    validate_triple,
)
from .exactnum import ExactError, ProjectivePoint, Scalar, sc
from .higgslimit import (
    FixedLocusPoint,
    HiggsError,
    cstar_limit,
    fiber_dimension,
    fixedpoint_canonicalize,
    in_removed_locus,
    special_loci,
)
from .parastruct import (
    B,
    BPRIME,
    BundleSplitType,
    MarkedConfiguration,
    ParabolicStructure,
    StratumError,
    StratumId,
    all_bprime_orbit_labels,
    bprime_generic_representative,
    classify,
)
from .spectra import (
    MCBranch,
    SpectrumError,
    SpectrumRank2,
    character_poly,
    elm_spectrum,
    elm_weight,
    mc_spectrum,
    spectrum_predicates,
)
from .stability import (
    OnWallError,
    WeightVector,
    chamber_classify,
    is_stable,
    no_stable_structure,
    stabilizing_weight,
    weight_is_kostov_generic,
)

log = logging.getLogger("paramod")

EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4

SCHEMA_ERRORS = (ExactError, StratumError, ConnectionError, KeyError, ValueError)
PRECONDITION_ERRORS = (OnWallError, HiggsError, SpectrumError)


def _parse_cfg(args) -> MarkedConfiguration:
    return MarkedConfiguration([Scalar.parse(t) for t in args.z.split(",")])


def _parse_structure(args) -> ParabolicStructure:
    bundle = BundleSplitType.parse(args.bundle)
    return ParabolicStructure(
        bundle, [ProjectivePoint.parse(t) for t in args.u.split(",")]
    )


def _parse_weight(text: str) -> WeightVector:
    return WeightVector([Scalar.parse(t) for t in text.split(",")])


def _parse_spectrum(text: str, d: int) -> SpectrumRank2:
    pairs = []
    for chunk in text.split(";"):
        p, m = chunk.split(",")
        pairs.append((Scalar.parse(p), Scalar.parse(m)))
    return SpectrumRank2(pairs, d)


def _load_json(args):
    with open(args.json, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(args, payload):
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args):
    cfg = _parse_cfg(args)
    s = _parse_structure(args)
    stratum = classify(s, cfg)
    out = {"stratum": stratum.label(), "decomposable": stratum.decomposable}
    if stratum.coords is not None:
        out["coords"] = stratum.coords_str()
    return out


def cmd_stability(args):
    cfg = _parse_cfg(args)
    s = _parse_structure(args)
    w = _parse_weight(args.w)
    return is_stable(s, cfg, w).to_json()


def cmd_counts(args):
    cfg = _parse_cfg(args)
    bundle = BundleSplitType.parse(args.bundle)
    if bundle == BPRIME:
        labels = sorted(set(all_bprime_orbit_labels(cfg)))
        out = {"orbits": len(labels)}
        if args.list:
            out["labels"] = labels
        return out
    raise StratumError("orbit counts are finite for B' only")


def cmd_weights(args):
    if args.json:
        data = _load_json(args)
        label = data["stratum"]
    else:
        label = args.stratum
    stratum = _stratum_from_label(label)
    return stabilizing_weight(stratum).to_json()


def _stratum_from_label(label: str) -> StratumId:
    if label.startswith("U2"):
        return StratumId("U2")
    if label.startswith("U''("):
        idx = tuple(int(t) - 1 for t in label[4:-1].split(","))
        return StratumId("UijDoublePrime", idx)
    if label.startswith("U("):
        idx = tuple(int(t) - 1 for t in label[2:-1].split(","))
        return StratumId("Ui", idx)
    if label == "Bprime-generic-indecomposable":
        return StratumId("BprimeGenericIndec")
    raise StratumError(f"no stabilizing weight for stratum {label!r}")


def cmd_chamber(args):
    w = _parse_weight(args.w)
    desc = chamber_classify(w, args.d)
    out = desc.to_json()
    out["kostov_generic"] = weight_is_kostov_generic(w, args.d)
    return out


def cmd_empty(args):
    w = _parse_weight(args.w)
    bundle = BundleSplitType.parse(args.bundle)
    return {"no_stable_structure": no_stable_structure(w, bundle)}


def cmd_spectrum(args):
    nu = _parse_spectrum(args.nu, args.d)
    return spectrum_predicates(nu)


def cmd_elm_weight(args):
    w = _parse_weight(args.w)
    return elm_weight(w, args.j - 1).to_json()


def cmd_elm_spectrum(args):
    nu = _parse_spectrum(args.nu, args.d)
    return elm_spectrum(nu, args.j - 1).to_json()


def cmd_mc(args):
    nu = _parse_spectrum(args.nu, args.d)
    beta_v = [Scalar.parse(t) for t in args.beta_v.split(",")]
    branch = MCBranch(args.sigma, beta_v, nu)
    return mc_spectrum(nu, branch).to_json()


def cmd_charpoly(args):
    vals = [Scalar.parse(t) for t in args.vals.split(",")]
    if len(vals) != 5:
        raise ExactError("charpoly takes five values")
    return {"value": str(character_poly(*vals))}


def cmd_degree_bounds(args):
    b = degree_bounds(args.d)
    return {
        "lo": b.lo,
        "hi": b.hi,
        "splits": [[s.d0, s.d1] for s in b.splits],
    }


def cmd_solve(args):
    cfg = _parse_cfg(args)
    s = _parse_structure(args)
    nu = _parse_spectrum(args.nu, s.bundle.degree)
    space = solve_connection_space(s, cfg, nu)
    if space is None:
        return {"empty": True}
    out = {
        "empty": False,
        "dim": space.dim,
        "dim_before_gauge": space.dim_before_gauge,
        "dim_mod_gauge": space.dim_mod_gauge,
        "free_labels": ["".join(map(str, lab)) for lab in space.labels],
    }
    if args.params is not None:
        params = [Scalar.parse(t) for t in args.params.split(",")] if args.params else []
        triple = space.triple_at(params)
        out["triple"] = triple.to_json()
        out["irreducibility"] = irreducibility_screen(triple)[0]
    return out


def _triple_from_json(data) -> FlatTriple:
    return FlatTriple(
        ParabolicStructure.from_json(data["structure"]),
        SpectrumRank2.from_json(data["spectrum"]),
        LogConnection.from_json(data["connection"]),
        MarkedConfiguration.from_json(data["cfg"]),
    )


def cmd_validate(args):
    data = _load_json(args)
    triple = _triple_from_json(data.get("triple", data))
    ok, violations = validate_triple(triple)
    return {"valid": ok, "violations": violations}


def cmd_limit(args):
    data = _load_json(args)
    triple = _triple_from_json(data.get("triple", data))
    w = _parse_weight(args.w)
    res = cstar_limit(triple, w)
    return {
        "point": res.point.to_json(triple.cfg),
        "higgs": res.higgs.to_json(),
        "candidates": [
            {"name": c.name, "margin": str(c.margin), "stable": c.stable}
            for c in res.candidates
        ],
    }


def cmd_fiber(args):
    cfg = _parse_cfg(args)
    nu = _parse_spectrum(args.nu, args.d)
    data = _load_json(args)
    point = FixedLocusPoint.from_json(data.get("point", data))
    return {"dim": fiber_dimension(point, cfg, nu)}


def cmd_canonicalize(args):
    cfg = _parse_cfg(args)
    data = _load_json(args)
    point = FixedLocusPoint.from_json(data.get("point", data))
    canon = fixedpoint_canonicalize(point, cfg)
    return {
        "point": canon.to_json(cfg),
        "in_removed_locus": in_removed_locus(canon, cfg),
    }


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def cmd_tables(args):
    cfg = _parse_cfg(args)
    if args.suite == "orbits":
        return _csv(_orbit_rows(cfg))
    if args.suite == "special-loci":
        return _csv(_loci_rows(cfg))
    if args.suite == "chambers":
        return _csv(_chamber_rows())
    if args.suite == "fibers":
        return _csv(_fiber_rows(cfg))
    raise ExactError(f"unknown suite {args.suite!r}")


def _orbit_rows(cfg):
    yield ["label", "representative"]
    from itertools import combinations

    yield [
        classify(bprime_generic_representative(cfg), cfg).label(),
        ",".join(str(u) for u in bprime_generic_representative(cfg).flags),
    ]
    zero = ParabolicStructure(BPRIME, [0, 0, 0, 0, 0])
    yield [classify(zero, cfg).label(), ",".join(str(u) for u in zero.flags)]
    for size in range(1, 6):
        for pattern in combinations(range(5), size):
            flags = ["inf" if i in pattern else "0" for i in range(5)]
            s = ParabolicStructure(BPRIME, flags)
            yield [classify(s, cfg).label(), ",".join(flags)]


def _loci_rows(cfg):
    yield ["kind", "label", "coordinates"]
    loci = special_loci(cfg)
    for (i, j), pt in sorted(loci.points.items()):
        kind = "S2" if i == j else "S1"
        yield [kind, f"tau({i + 1},{j + 1})", ":".join(str(c) for c in pt)]
    for i in sorted(loci.lines):
        dual = loci.lines[i]["dual"]
        yield ["line", f"tau({i + 1})", ":".join(str(c) for c in dual)]


def _chamber_rows():
    yield ["family", "lower", "upper", "witness"]
    yield ["U2", "1/5", "1/3", "4/15,4/15,4/15,4/15,4/15"]
    yield ["Ui", "1/3", "3/5", "7/15,7/15,7/15,7/15,7/15"]
    yield ["Uij", "2/3", "4/5", "11/15,4/15,11/15,11/15,11/15"]


def _fiber_rows(cfg):
    yield ["case", "component", "dim"]
    nu = SpectrumRank2(
        [(sc("1/4"), sc("-1/4"))] * 4 + [(sc("1/4"), sc("-5/4"))], 1
    )
    w = WeightVector(["1/8", "1/9", "1/7", "1/11", "1/13"])
    samples = [
        ("B-generic", ParabolicStructure(B, [1, 2, 3, 5, 7])),
        ("B-with-zero-flag", ParabolicStructure(B, [0, 2, 3, 5, 7])),
        ("Bprime-generic", bprime_generic_representative(cfg)),
    ]
    for name, s in samples:
        space = solve_connection_space(s, cfg, nu)
        if space is None:
            yield [name, "none", "empty"]
            continue
        t = space.triple_at([1] * space.dim)
        res = cstar_limit(t, w)
        dim = fiber_dimension(res.point, cfg, nu)
        yield [name, res.point.component, str(dim)]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="paramod",
        description="exact computations for rank-2 parabolic structures on the "
        "five-punctured line",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *flags):
        if "z" in flags:
            p.add_argument("--z", required=True, help="five marked points, comma separated")
        if "bundle" in flags:
            p.add_argument("--bundle", required=True, help="B or Bprime")
        if "u" in flags:
            p.add_argument("--u", required=True, help="five flags, comma separated ('inf' allowed)")
        if "w" in flags:
            p.add_argument("--w", required=True, help="five weights, comma separated")
        if "nu" in flags:
            p.add_argument("--nu", required=True, help="five eigenvalue pairs 'p,m;p,m;...'")
        if "d" in flags:
            p.add_argument("--d", type=int, required=True, help="degree")
        if "json" in flags:
            p.add_argument("--json", required=True, help="input payload file")
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    common(sub.add_parser("classify"), "z", "bundle", "u").set_defaults(fn=cmd_classify)
    common(sub.add_parser("stability"), "z", "bundle", "u", "w").set_defaults(fn=cmd_stability)
    p = common(sub.add_parser("counts"), "z", "bundle")
    p.add_argument("--list", action="store_true", help="include orbit labels")
    p.set_defaults(fn=cmd_counts)
    p = sub.add_parser("weights")
    p.add_argument("--stratum", help="stratum label from classify")
    p.add_argument("--json", help="classify output file")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_weights)
    common(sub.add_parser("chamber"), "w", "d").set_defaults(fn=cmd_chamber)
    common(sub.add_parser("empty"), "bundle", "w").set_defaults(fn=cmd_empty)
    common(sub.add_parser("spectrum"), "nu", "d").set_defaults(fn=cmd_spectrum)
    p = common(sub.add_parser("elm-weight"), "w")
    p.add_argument("--j", type=int, required=True, help="marked point index, 1-based")
    p.set_defaults(fn=cmd_elm_weight)
    p = common(sub.add_parser("elm-spectrum"), "nu", "d")
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(fn=cmd_elm_spectrum)
    p = common(sub.add_parser("mc"), "nu", "d")
    p.add_argument("--sigma", required=True, help="five signs, e.g. ++-+-")
    p.add_argument("--beta-v", required=True, help="five vertical residues")
    p.set_defaults(fn=cmd_mc)
    p = sub.add_parser("charpoly")
    p.add_argument("--vals", required=True, help="five trace coordinates")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_charpoly)
    common(sub.add_parser("degree-bounds"), "d").set_defaults(fn=cmd_degree_bounds)
    p = common(sub.add_parser("solve"), "z", "bundle", "u", "nu")
    p.add_argument("--params", help="free parameters for an explicit triple")
    p.set_defaults(fn=cmd_solve)
    common(sub.add_parser("validate"), "json").set_defaults(fn=cmd_validate)
    common(sub.add_parser("limit"), "json", "w").set_defaults(fn=cmd_limit)
    common(sub.add_parser("fiber"), "json", "z", "nu", "d").set_defaults(fn=cmd_fiber)
    common(sub.add_parser("canonicalize"), "json", "z").set_defaults(fn=cmd_canonicalize)
    p = sub.add_parser("tables")
    p.add_argument("--suite", required=True, choices=["orbits", "special-loci", "chambers", "fibers"])
    p.add_argument("--z", default="0,1,2,3,4")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_tables)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("PARAMOD_LOG", "warning").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_SCHEMA if e.code not in (0, None) else 0
    try:
        payload = args.fn(args)
    except PRECONDITION_ERRORS as e:
        log.debug("precondition failure", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_PRECONDITION
    except SCHEMA_ERRORS as e:
        log.debug("schema failure", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_SCHEMA
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_SCHEMA
    except Exception as e:  # invariant violation: never expected
        log.debug("internal failure", exc_info=True)
        sys.stderr.write(f"internal error: {e}\n")
        return EXIT_INTERNAL
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
