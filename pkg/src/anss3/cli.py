"""Command-line entry point.

Subcommands:
  ext     compute a chart window and write deterministic JSON (optional SVG/TSV)
  deduce  run a deduction script; print the claim report; optional log export
  verify  run the structure-map axiom certification and/or the E-theory checks
  serve   start the local HTTP service backing the chart UI
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def _n_from_modulus(modulus: int) -> int:
    n = 0
    m = modulus
    while m % 3 == 0:
        m //= 3
        n += 1
    if m != 1 or n < 1:
        raise SystemExit(f"modulus must be a positive power of 3, got {modulus}")
    return n


def _build_chart(label: str, s_max: int, f_max: int, N: int = 5, T: int = 52):
    from .cobar import CobarWindow
    from .comodule import presentation_for_label
    from .hopfalg import derive_structure_maps

    maps = derive_structure_maps(T, N)
    com = presentation_for_label(maps, label)
    window = CobarWindow(com, s_max, f_max)
    return window.ext()


def chart_svg(chart_json: dict) -> str:
    """Render a chart as SVG: stems on x, filtration on y.

    Each order-3 summand is a dot, order-9 a double circle, order-27 a box
    containing "3"; fixture classes marked as top-cell render green.
    """
    groups = chart_json.get("groups", [])
    if not groups:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="40" height="40"></svg>'
    s_max = max(g["s"] for g in groups)
    f_max = max(g["f"] for g in groups)
    cell = 22
    pad = 30
    width = pad * 2 + (s_max + 1) * cell
    height = pad * 2 + (f_max + 1) * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for s in range(0, s_max + 1, 4):
        x = pad + s * cell
        parts.append(
            f'<text x="{x}" y="{height - 8}" font-size="9" text-anchor="middle">{s}</text>'
        )
    for f in range(0, f_max + 1, 2):
        y = height - pad - f * cell
        parts.append(f'<text x="8" y="{y + 3}" font-size="9">{f}</text>')
    for g in sorted(groups, key=lambda g: (g["s"], g["f"])):
        x0 = pad + g["s"] * cell
        y0 = height - pad - g["f"] * cell
        for i, order in enumerate(g["orders"]):
            x = x0 + (i % 3) * 7
            y = y0 - (i // 3) * 7
            color = "green" if g.get("cells", [None] * len(g["orders"]))[i] == "top" else "black"
            name = g.get("names", [""] * len(g["orders"]))[i]
            title = f"<title>({g['s']},{g['f']}) {name} order {order}</title>"
            if order == 27:
                parts.append(
                    f'<g>{title}<rect x="{x - 5}" y="{y - 5}" width="10" height="10" '
                    f'fill="none" stroke="{color}"/>'
                    f'<text x="{x}" y="{y + 3}" font-size="8" text-anchor="middle">3</text></g>'
                )
            elif order == 9:
                parts.append(
                    f'<g>{title}<circle cx="{x}" cy="{y}" r="4" fill="none" stroke="{color}"/>'
                    f'<circle cx="{x}" cy="{y}" r="2" fill="{color}"/></g>'
                )
            else:
                parts.append(f'<g>{title}<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/></g>')
    parts.append("</svg>")
    return "\n".join(parts)


def chart_tsv(chart_json: dict) -> str:
    lines = ["s\tf\torders\tnames"]
    for g in sorted(chart_json.get("groups", []), key=lambda g: (g["s"], g["f"])):
        orders = ",".join(str(o) for o in g["orders"])
        names = ",".join(g.get("names", []))
        lines.append(f"{g['s']}\t{g['f']}\t{orders}\t{names}")
    return "\n".join(lines) + "\n"


def cmd_ext(args) -> int:
    chart = _build_chart(
        args.target, args.max_stem, args.max_filt, _n_from_modulus(args.modulus), args.truncation
    )
    text = chart.to_json()
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text)
    data = json.loads(text)
    if args.svg:
        Path(args.svg).write_text(chart_svg(data))
    if args.tsv:
        Path(args.tsv).write_text(chart_tsv(data))
    return 0


def cmd_deduce(args) -> int:
    from .deduce import DeduceChart, run_script_file

    def provider(label, s_max, f_max):
        return DeduceChart.from_ext_chart(_build_chart(label, s_max, f_max))

    engine, report = run_script_file(Path(args.script), chart_provider=provider)
    if args.log:
        Path(args.log).write_text(engine.log_json() + "\n")
    for c in report.claims:
        status = "proven" if c.proven else "unproven"
        flag = f"  [{', '.join(c.flags)}]" if c.flags else ""
        print(f"{status}: {c.line} -- {c.detail}{flag}")
    if report.contradiction:
        print(f"contradiction: {report.contradiction}")
        return 2
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    ok = True
    if args.what in ("axioms", "all"):
        from .hopfalg import axiom_check, derive_structure_maps

        maps = derive_structure_maps(args.truncation, 5)
        report = axiom_check(maps)
        print(f"axioms (T={args.truncation}, N=5): {'pass' if report.ok else 'FAIL'}")
        for failure in report.failures:
            print(f"  {failure}")
        ok = ok and report.ok
    if args.what in ("etheory", "all"):
        from .etheory import verify

        report = verify(1)
        print(f"e-theory congruences: {'pass' if report.ok else 'FAIL'}")
        for c in report.checks:
            print(f"  {'pass' if c.ok else 'FAIL'}: {c.name}")
        if report.ok:
            print(f"  eighth-root exponent used: {report.unit_exponent}")
        ok = ok and report.ok
    return 0 if ok else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(session_file=Path(args.session) if args.session else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="anss3")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("ext", help="compute a chart window")
    p_ext.add_argument("--target", default="S")
    p_ext.add_argument("--max-stem", type=int, required=True)
    p_ext.add_argument("--max-filt", type=int, required=True)
    p_ext.add_argument("--modulus", type=int, default=243)
    p_ext.add_argument("--truncation", type=int, default=52)
    p_ext.add_argument("-o", "--output")
    p_ext.add_argument("--svg")
    p_ext.add_argument("--tsv")
    p_ext.set_defaults(func=cmd_ext)

    p_ded = sub.add_parser("deduce", help="run a deduction script")
    p_ded.add_argument("script")
    p_ded.add_argument("--log")
    p_ded.set_defaults(func=cmd_deduce)

    p_ver = sub.add_parser("verify", help="run certification checks")
    p_ver.add_argument("what", choices=["axioms", "etheory", "all"])
    p_ver.add_argument("--truncation", type=int, default=52)
    p_ver.set_defaults(func=cmd_verify)

    p_srv = sub.add_parser("serve", help="start the local HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8750)
    p_srv.add_argument("--session")
    p_srv.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
