"""Command-line surface: engines, balls, geodesic enumeration, verdicts, and
the reproduction drivers.

Reports are plain text with stable field ordering and no timestamps, so runs
are byte-identical and suitable for golden-file comparison.  Exit codes:
0 success (including Inconclusive with a warning), 1 a checked property was
refuted, 2 input or format error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .classify import (
    NotPE,
    PE,
    not_pe_from_conjugation,
    pe_check,
    pe_check_bounded,
    recheck_certificate,
)
from .geodesics import (
    ResourceCap,
    ball,
    geodesic_language,
    is_geodesic,
    validate_genset,
)
from .groups import (
    CapExceeded,
    Presentation,
    TableEngine,
    coset_enumerate,
    engine_to_table,
    fingerprint,
)
from .specfile import SpecFileError, load_genset, load_group, load_presentation
from .witnesses import (
    LiftNotGeodesic,
    MismatchedCell,
    SelectionFailed,
    build_quotient_spec,
    cannon_report,
    extension_genset,
    lift_witness,
    q8_survey,
    quotient_family_witness,
    sample_znc2_gensets,
    standard_witnesses,
    table1_report,
    znc2_witness,
)
from .words import (
    GeolangError,
    avoid_language,
    format_word,
    minimal_forbidden_subsequences,
    parse_word,
)

_HEADER = f"# geolang {__version__}"


def _emit(lines, out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    engine = load_group(args.group)
    genset = load_genset(args.genset, engine)
    return engine, genset


# ---------------------------------------------------------------------------
# plain commands


def _cmd_ball(args) -> int:
    _, genset = _load(args)
    dmap = ball(genset, args.radius)
    _emit(list(dmap.export_lines()), args.out)
    return 0


def _cmd_geo_enumerate(args) -> int:
    _, genset = _load(args)
    if args.exact:
        geo = geodesic_language(genset, exact=True)
    else:
        geo = geodesic_language(genset, maxlen=args.maxlen)
    _emit([format_word(w) for w in geo.words()], args.out)
    return 0


def _cmd_geo_check(args) -> int:
    _, genset = _load(args)
    word = parse_word(args.word, genset.alphabet)
    result = is_geodesic(genset, word)
    _emit(
        [_HEADER, f"word: {format_word(word)}", f"geodesic: {str(result).lower()}"],
        args.out,
    )
    return 0


def _verdict_for(args):
    _, genset = _load(args)
    if args.exact:
        verdict = pe_check(geodesic_language(genset, exact=True))
    else:
        verdict = pe_check_bounded(geodesic_language(genset, maxlen=args.maxlen))
    return verdict


def _cmd_pe_check(args) -> int:
    verdict = _verdict_for(args)
    _emit([_HEADER] + list(verdict.report_lines()), args.out)
    return 0


def _cmd_pe_forbidden(args) -> int:
    verdict = _verdict_for(args)
    _emit([_HEADER] + list(verdict.report_lines()), args.out)
    return 0 if isinstance(verdict, PE) else 1


def _cmd_coset(args) -> int:
    presentation = load_presentation(args.presentation)
    table = coset_enumerate(presentation, args.cap)
    _emit(list(table.export_lines()), args.out)
    return 0


def _cmd_fingerprint(args) -> int:
    engine = load_group(args.group)
    if engine.order is None:
        raise SpecFileError("fingerprints need a finite group")
    table = engine.table if isinstance(engine, TableEngine) else engine_to_table(engine)
    fp = fingerprint(table)
    orders = " ".join(f"{o}^{c}" for o, c in fp.element_orders)
    abelianization = (
        " ".join(str(d) for d in fp.abelianization) if fp.abelianization else "trivial"
    )
    _emit(
        [
            _HEADER,
            f"order: {fp.order}",
            f"abelian: {str(fp.abelian).lower()}",
            f"element orders: {orders}",
            f"center order: {fp.center_order}",
            f"abelianization: {abelianization}",
            f"derived order: {fp.derived_order}",
        ],
        args.out,
    )
    return 0


# ---------------------------------------------------------------------------
# reproduction drivers


def _repro_q8(args):
    report = q8_survey()
    lines = [
        f"inverse-closed subsets: {report.total_subsets}",
        f"generating sets: {report.generating_count}",
    ]
    ok = report.generating_count == 8 and report.all_pe
    pe_count = 0
    for entry in report.entries:
        subset = "{" + ", ".join(entry.element_names) + "}"
        if not entry.generating:
            lines.append(f"{subset}: not generating")
            continue
        verdict = "PE" if isinstance(entry.verdict, PE) else "NotPE"
        pe_count += verdict == "PE"
        pairs = "cancellation pairs forbidden" if entry.cancellation_pairs_forbidden else "MISSING cancellation pair"
        ok = ok and entry.cancellation_pairs_forbidden
        lines.append(f"{subset}: {verdict}, {pairs}")
    lines.append(f"{report.generating_count} generating sets, {pe_count} PE")
    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _d8_engine():
    from .groups import presentation_engine

    return presentation_engine(
        Presentation(
            ["a", "b", "t"], ["a a", "b b", "a b a b a b a b", "a b a b t"]
        ),
        1000,
    )


def _repro_d8(args):
    engine = _d8_engine()
    lines = []
    ok = True

    full = validate_genset(engine, [("a", "a"), ("b", "b"), ("t", "t")])
    geo = geodesic_language(full, exact=True)
    expected_words = {"1", "a", "b", "t", "a b", "b a", "a t", "t a", "b t", "t b"}
    words = {format_word(w) for w in geo.words()}
    ok &= words == expected_words
    lines.append(f"letters a b t: {len(geo)} geodesic words, diameter {geo.diameter}")

    verdict = pe_check(geo)
    if isinstance(verdict, PE):
        lines.append("letters a b t: PE")
        for word in verdict.forbidden.sorted_words():
            lines.append(f"forbidden: {format_word(word)}")
        letters = list(full.alphabet)
        coarse = {(x, x) for x in letters} | {
            (x, y, z) for x in letters for y in letters for z in letters
        }
        same = avoid_language(coarse, full.alphabet, 4) == avoid_language(
            verdict.forbidden, full.alphabet, 4
        )
        lines.append(
            "coarse doubled-letter expression agrees to length 4: "
            + str(same).lower()
        )
        ok &= same and len(verdict.forbidden) == 9
    else:
        ok = False
        lines.extend(verdict.report_lines())

    pair = validate_genset(engine, [("a", "a"), ("b", "b")])
    pair_verdict = pe_check(geodesic_language(pair, exact=True))
    lines.append("letters a b:")
    lines.extend(pair_verdict.report_lines())
    ok &= isinstance(pair_verdict, NotPE) and format_word(pair_verdict.witness) == "a b a"

    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _repro_table1(args):
    report = table1_report()
    lines = []
    for cell in report.cells:
        marker = "PASS" if cell.ok and not cell.partial else (
            "PARTIAL" if cell.ok else "FAIL"
        )
        order = "cap" if cell.order is None else str(cell.order)
        gap = f" {cell.gap_id}" if cell.gap_id else ""
        line = (
            f"cell bab^-1={cell.row_word}; aba^-1={cell.col_word}: "
            f"{cell.claim}{gap}, order {order}: {marker}"
        )
        if cell.note:
            line += f" ({cell.note})"
        lines.append(line)
    lines.append(
        "note: the 7x7 frontier of representative words is taken as given"
    )
    lines.append(f"coset cap: {report.cap}")
    lines.append(report.summary())
    total, passed, partial, failed = report.counts()
    return lines, 0 if failed == 0 else 1


def _repro_qxq(args):
    label, genset, verdict = __import__(
        "geolang.witnesses", fromlist=["qxq_witness"]
    ).qxq_witness()
    ok = recheck_certificate(genset, verdict)
    lines = [label]
    lines.extend(verdict.report_lines())
    lines.append(f"independent recheck: {str(ok).lower()}")
    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _repro_extension(args):
    from .groups import cyclic_table, q8_table, s3_table

    cases = [
        ("Z/2 kernel, rank 1", cyclic_table(2), 1, None, 6),
        ("S3 kernel, rank 1", s3_table(), 1, None, 6),
        ("Z/3 kernel with inversion, rank 1", cyclic_table(3), 1, [(0, 2, 1)], 6),
        ("Q8 kernel, rank 2", q8_table(), 2, None, 6),
    ]
    lines = []
    ok = True
    for label, table, rank, actions, bound in cases:
        result = extension_genset(table, rank, actions, bound=bound)
        ok &= result.matches
        lines.append(
            f"{label}: forbidden set size {len(result.forbidden)}, "
            f"geodesics match avoid language to length {bound}: "
            f"{str(result.matches).lower()}"
        )
    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


_ZNC2_COMBOS = (
    (1, ("invert", 1)),
    (2, ("invert", 1)),
    (3, ("invert", 1)),
    (2, ("swap", 1, 2)),
    (3, ("swap", 1, 2)),
)


def _repro_znc2(args):
    from .groups import ZnC2Engine

    samples = args.samples
    seed = args.seed
    lines = []
    ok = True

    worked = [
        (1, ("invert", 1), [("x", "x1"), ("y", "y")]),
        (2, ("swap", 1, 2), [("x1", "x1"), ("x2", "x2"), ("y", "y")]),
        (1, ("invert", 1), [("u", "x1 y"), ("y", "y")]),
    ]
    for n, phi, pairs in worked:
        genset = validate_genset(ZnC2Engine(n, phi), pairs)
        cert = znc2_witness(n, phi, genset)
        lines.append(
            f"worked n={n} {phi[0]}: subcase {cert.subcase}, "
            f"witness {format_word(cert.verdict.witness)}"
        )

    total = 0
    for n, phi in _ZNC2_COMBOS:
        gensets = sample_znc2_gensets(n, phi, count=samples, seed=seed)
        subcases = {}
        for genset in gensets:
            cert = znc2_witness(n, phi, genset)
            subcases[cert.subcase] = subcases.get(cert.subcase, 0) + 1
        total += len(gensets)
        cases = " ".join(f"{k}:{v}" for k, v in sorted(subcases.items()))
        lines.append(f"random n={n} {phi[0]}: {len(gensets)} sets, subcases {cases}")
    lines.append(f"total random selections: {total}, selection failures: 0")
    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _repro_quotients(args):
    lines = []
    ok = True
    for label, genset, item in standard_witnesses():
        verdict = item if isinstance(item, NotPE) else item.verdict
        good = recheck_certificate(genset, verdict) and len(verdict.witness) == 3
        ok &= good
        lines.append(
            f"{label}: witness {format_word(verdict.witness)} at distance 3: "
            + ("verified" if good else "FAILED")
        )
    flagged = quotient_family_witness("BSquot_finite", n=5, m=4)
    lines.append(
        "Z/5 by Z/4 accepted outside the recorded derivation: "
        f"flagged {str(flagged.outside_recorded_derivation).lower()}"
    )
    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _repro_lift(args):
    from .groups import (
        ExtensionEngine,
        ProductEngine,
        ZmSemidirectEngine,
        ZnC2Engine,
        cyclic_table,
        s3_table,
    )
    from .groups import BS12Engine

    lines = []
    ok = True

    s3 = s3_table()
    source = validate_genset(
        ExtensionEngine(s3, 1), [("a", "p021"), ("b", "p102"), ("t", "t")]
    )
    spec = build_quotient_spec(
        source, TableEngine(s3), {"a": "p021", "b": "p102", "t": ""}
    )
    cert = lift_witness(spec, "a b a")
    lines.append(
        f"S3-by-Z onto S3: lifted witness {format_word(cert.lifted)} geodesic"
    )
    ok &= recheck_certificate(source, cert.verdict)

    source = validate_genset(BS12Engine(), [("at", "a t"), ("ta", "t a")])
    spec = build_quotient_spec(
        source, ZmSemidirectEngine(3, 2, None), {"at": "a t", "ta": "t a"}
    )
    cert = lift_witness(spec, "at ta at^-1")
    lines.append(
        f"BS(1,2) onto Z/3-by-Z: lifted witness {format_word(cert.lifted)} geodesic"
    )
    ok &= recheck_certificate(source, cert.verdict)

    phi = ("swap", 1, 2)
    znc2 = ZnC2Engine(2, phi)
    prod = ProductEngine(znc2, TableEngine(cyclic_table(2)))
    source = validate_genset(
        prod, [("x1", "x1_1"), ("x2", "x2_1"), ("y", "y_1"), ("z", "g_2")]
    )
    spec = build_quotient_spec(
        source, znc2, {"x1": "x1", "x2": "x2", "y": "y", "z": ""}
    )
    inner = validate_genset(znc2, [("x1", "x1"), ("x2", "x2"), ("y", "y")])
    witness = znc2_witness(2, phi, inner).verdict.witness
    cert = lift_witness(spec, format_word(witness))
    lines.append(
        "rank-2 swap group times Z/2 onto its swap quotient: lifted witness "
        f"{format_word(cert.lifted)} geodesic"
    )
    ok &= recheck_certificate(source, cert.verdict)

    lines.append("status: PASS" if ok else "status: FAIL")
    return lines, 0 if ok else 1


def _repro_cannon(args):
    report = cannon_report(maxlen=args.maxlen)
    lines = [
        f"rank-2 swap group, strata to length {report.maxlen}",
        "letters a b t: " + " ".join(str(s) for s in report.standard_sizes),
        "letters a c d t (c = a^2, d = ab): "
        + " ".join(str(s) for s in report.extended_sizes),
    ]
    for tag, cert in (
        ("a b t", report.standard_certificate),
        ("a c d t", report.extended_certificate),
    ):
        lines.append(
            f"letters {tag}: subcase {cert.subcase}, NotPE witness "
            f"{format_word(cert.verdict.witness)}"
        )
    lines.append("regularity of these languages is out of scope; data only")
    lines.append("status: PASS")
    return lines, 0


_REPRO = {
    "q8": _repro_q8,
    "d8": _repro_d8,
    "table1": _repro_table1,
    "qxq": _repro_qxq,
    "extension": _repro_extension,
    "znc2": _repro_znc2,
    "quotients": _repro_quotients,
    "lift": _repro_lift,
    "cannon": _repro_cannon,
}


def _cmd_repro(args) -> int:
    if args.name == "all":
        names = [n for n in _REPRO]
        lines = [_HEADER]
        worst = 0
        for name in names:
            lines.append(f"== {name} ==")
            body, code = _REPRO[name](args)
            lines.extend(body)
            worst = max(worst, code)
        lines.append(f"overall: {'PASS' if worst == 0 else 'FAIL'}")
        _emit(lines, args.out)
        return worst
    body, code = _REPRO[args.name](args)
    _emit([_HEADER] + body, args.out)
    return code


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geolang",
        description="Geodesic languages of finitely generated groups and "
        "piecewise-excluding certificates.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="accepted for interface stability; evaluation is sequential and "
        "output never depends on this value",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="word-metric ball export")
    p.add_argument("--group", required=True)
    p.add_argument("--genset", required=True)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_ball)

    geo = sub.add_parser("geo", help="geodesic words")
    geo_sub = geo.add_subparsers(dest="subcommand", required=True)
    p = geo_sub.add_parser("enumerate")
    p.add_argument("--group", required=True)
    p.add_argument("--genset", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--maxlen", type=int)
    mode.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_geo_enumerate)
    p = geo_sub.add_parser("check")
    p.add_argument("--group", required=True)
    p.add_argument("--genset", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_geo_check)

    pe = sub.add_parser("pe", help="piecewise-excluding verdicts")
    pe_sub = pe.add_subparsers(dest="subcommand", required=True)
    p = pe_sub.add_parser("check")
    p.add_argument("--group", required=True)
    p.add_argument("--genset", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--maxlen", type=int)
    mode.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_pe_check)
    p = pe_sub.add_parser("forbidden")
    p.add_argument("--group", required=True)
    p.add_argument("--genset", required=True)
    p.add_argument("--exact", action="store_true", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_pe_forbidden, maxlen=None)

    p = sub.add_parser("coset", help="coset enumeration table export")
    p.add_argument("--presentation", required=True)
    p.add_argument("--cap", type=int, default=20000)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coset)

    p = sub.add_parser("fingerprint", help="finite group fingerprint")
    p.add_argument("--group", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fingerprint)

    p = sub.add_parser("repro", help="reproduction drivers")
    p.add_argument("name", choices=sorted(_REPRO) + ["all"])
    p.add_argument("--maxlen", type=int, default=6)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_repro)

    return parser


def run(argv) -> int:
    """Execute one command line; returns the exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ResourceCap, CapExceeded) as err:
        sys.stderr.write(f"resource cap: {err}\n")
        return 3
    except (SelectionFailed, MismatchedCell, LiftNotGeodesic) as err:
        sys.stderr.write(f"refuted: {err}\n")
        return 1
    except GeolangError as err:
        sys.stderr.write(f"error: {err}\n")
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
