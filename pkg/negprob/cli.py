#!/usr/bin/env python3
"""
negprob command line

Usage:
    negprob check space.json                  # consistency of an observation space
    negprob ground space.json --nonneg        # groundings, nonnegative feasibility
    negprob ground space.json --vertices      # vertices of the nonnegative polytope
    negprob ground space.json --symmetric perm.json
    negprob example hardy > hardy.json        # fixture as a SpaceDocument
    negprob example feynman2 --state 1,1
    negprob ks [--frame frame.json]           # rigid interpretation search
    negprob wigner --state hermite:1 --verify --reconstruct 64

Exit codes: 0 success, 1 negative finding (inconsistent, no grounding,
infeasible, no rigid selection), 2 usage or parse error.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import logs
from .algebra import check_consistency
from .config import CONFIG
from .documents import (
    FrameDocument,
    PermutationDocument,
    ReportDocument,
    SpaceDocument,
    WignerEntry,
    affine_entry,
    consistency_entries,
    feasibility_entry,
    interval_entry,
    ks_entry,
    load_document,
    no_solution_entry,
    vertex_entries,
)
from .errors import NegprobError, ParseError
from .feasibility import nonneg_feasibility, parametric_interval, vertex_enumerate
from .fixtures import FIXTURES, fixture
from .ks import ParityWitness, Selection, cabello_frame, parity_obstruction, rigid_selection_search
from .solver import AffineSolutionSet, NoSolution, apply_constraints, ground, symmetrize
from .wigner import (
    PhaseGrid,
    marginal_density,
    parse_state,
    qm_line_density,
    verify_marginals,
    verify_reconstruction,
    wigner_density,
)

RULE = "-" * 70


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path)


def _load_space(path: str, field: Optional[str]):
    return load_document(SpaceDocument, _read(path), path).to_space(field)


def _emit(args, report: ReportDocument, lines: List[str]) -> int:
    if args.json:
        sys.stdout.write(report.canonical_json())
    else:
        print("\n".join(lines))
    return report.exit_code


def _section(title: str) -> List[str]:
    return ["", title, RULE]


def _affine_lines(s: AffineSolutionSet) -> List[str]:
    f = s.field
    lines = [
        f"  Rank: {s.system.rank} of {s.system.shape[0]} equations",
        f"  Null-space dimension: {s.dimension}",
        "  Particular solution:",
    ]
    lines += [f"    {label}: {f.format(v)}" for label, v in zip(s.labels, s.particular)]
    for k, v in enumerate(s.basis):
        lines.append(f"  Basis vector {k}: ({', '.join(f.format(x) for x in v)})")
    return lines


def _bound(f, value, infinite: str) -> str:
    return infinite if value is None else f.format(value)


def cmd_check(args) -> int:
    os = _load_space(args.file, args.field)
    report = check_consistency(os)
    f = os.field
    lines = _section("🔍 CONSISTENCY")
    if report.consistent:
        lines.append(f"✓ consistent: {os.space.size} points, {len(os.tests)} tests over {f.name}")
    else:
        lines.append(f"✗ inconsistent: {len(report.violations)} violation(s)")
        for v in report.violations:
            atom = "{" + ", ".join(os.space.names(v.atom)) + "}"
            lines.append(
                f"  {v.first} vs {v.second} on {atom}: {f.format(v.first_value)} != {f.format(v.second_value)}"
            )
    doc = ReportDocument(
        command="check",
        field=f.name,
        consistent=report.consistent,
        violations=consistency_entries(os, report),
        exit_code=0 if report.consistent else 1,
    )
    return _emit(args, doc, lines)


def cmd_ground(args) -> int:
    os = _load_space(args.file, args.field)
    f = os.field
    doc = ReportDocument(command="ground", field=f.name, consistent=True)
    lines = _section(f"🧮 GROUNDINGS over {f.name}")

    result = ground(os)
    if isinstance(result, NoSolution):
        doc.no_solution = no_solution_entry(result)
        doc.exit_code = 1
        lines.append("✗ no grounding exists")
        lines.append(f"  Certificate y: ({', '.join(doc.no_solution)}), yᵀA = 0 and yᵀb = 1")
        return _emit(args, doc, lines)

    doc.affine = affine_entry(result)
    lines += _affine_lines(result)
    target = result

    if args.symmetric:
        perm = load_document(PermutationDocument, _read(args.symmetric), args.symmetric).permutation
        symmetrize(result, perm)
        equalities = [(a, b) for a, b in perm.items() if a != b]
        target = apply_constraints(result, equalities)
        lines += _section("🔁 SYMMETRIC GROUNDINGS")
        if isinstance(target, NoSolution):
            doc.no_solution = no_solution_entry(target)
            doc.exit_code = 1
            lines.append("✗ no symmetric grounding exists")
            return _emit(args, doc, lines)
        doc.symmetric = affine_entry(target)
        lines += _affine_lines(target)

    if target.dimension == 1:
        interval = parametric_interval(target)
        entry = interval_entry(interval)
        doc.interval = entry
        lines += _section("📏 CANONICAL INTERVAL")
        lines.append(f"  Interval({_bound(f, interval.m, '-inf')}, {_bound(f, interval.M, 'inf')})")
        if interval.empty:
            lines.append("  empty: no nonnegative grounding on this line")
        for name, point in zip(("m", "M"), entry.endpoints):
            lines.append(f"  Grounding at {name}: ({', '.join(point)})")

    if args.nonneg:
        feasibility = nonneg_feasibility(target)
        doc.feasibility = feasibility_entry(feasibility)
        lines += _section("➕ NONNEGATIVE FEASIBILITY")
        if feasibility.feasible:
            w = feasibility.witness
            lines.append("✓ Feasible")
            lines += [f"    {label}: {f.format(v)}" for label, v in zip(w.labels, w.values)]
        else:
            cert = feasibility.certificate
            doc.exit_code = 1
            lines.append("✗ Infeasible")
            lines.append(f"  Certificate y: ({', '.join(f.format(y) for y in cert.multipliers)})")
            lines.append("  yᵀA >= 0 and yᵀb < 0")

    if args.vertices:
        vertices = vertex_enumerate(target)
        doc.vertices = vertex_entries(vertices)
        lines += _section(f"🔺 VERTICES ({len(vertices)})")
        for v in doc.vertices:
            lines.append(f"  ({', '.join(v)})")
        if not vertices:
            doc.exit_code = 1
            lines.append("✗ no nonnegative grounding")

    return _emit(args, doc, lines)


def cmd_example(args) -> int:
    state = [s.strip() for s in args.state.split(",")] if args.state else None
    fx = fixture(args.name, state)
    text = SpaceDocument.from_space(fx.space).canonical_json()
    if args.out:
        Path(args.out).write_text(text)
        print(f"✓ Wrote {args.name} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_ks(args) -> int:
    frame = load_document(FrameDocument, _read(args.frame), args.frame).to_frame() if args.frame else cabello_frame()
    found = rigid_selection_search(frame)
    parity = parity_obstruction(frame)
    doc = ReportDocument(command="ks", ks=ks_entry(found, parity))
    lines = _section(f"🧩 RIGID SELECTION ({len(frame.bases)} bases, {len(frame.vector_ids)} vectors)")
    if isinstance(found, Selection):
        lines.append("✓ Selection")
        lines += [f"  basis {k}: {v}" for k, v in enumerate(found.chosen)]
    else:
        doc.exit_code = 1
        summary = f"NoneFound ({found.nodes} search nodes)"
        if isinstance(parity, ParityWitness):
            summary = f"{summary}; parity obstruction: {parity.bases} bases, each vector in exactly two bases"
        lines.append(f"✗ {summary}")
    if not isinstance(parity, ParityWitness):
        lines.append(f"  parity argument not applicable: {parity.reason}")
    return _emit(args, doc, lines)


def _parse_pair(text: str):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise ParseError(f"expected a,b got {text!r}", "--marginal")
    return a, b


def cmd_wigner(args) -> int:
    psi = parse_state(args.state, args.hbar)
    grid = PhaseGrid.parse(args.grid)
    field = wigner_density(psi, grid)
    value, x_min, p_min = field.min()
    metrics = {
        "normalization_residual": abs(field.normalization() - 1),
        "imag_residue": field.imag_residue,
        "min_value": value,
        "min_x": x_min,
        "min_p": p_min,
    }
    files = []
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        stem = psi.family.replace(":", "_").replace("/", "_").replace(",", "_")
        path = out / f"{stem}_wigner.txt"
        path.write_text(field.to_text())
        files.append(str(path))

    lines = _section(f"🌀 WIGNER FIELD {psi.family} on {grid.n_x}x{grid.n_p}")
    lines.append(f"  Normalization residual: {metrics['normalization_residual']:.3e}")
    lines.append(f"  Imaginary residue: {metrics['imag_residue']:.3e}")
    lines.append(f"  Min value: {value:.10g} at (x, p) = ({x_min:.4g}, {p_min:.4g})")
    if value < 0:
        lines.append(f"  Negative region present; -1/π = {-1 / math.pi:.10g}")

    if args.origin:
        metrics["origin_value"] = field.value_at(0.0, 0.0)
        lines.append(f"  Origin value: {metrics['origin_value']:.10g}")

    for k, text in enumerate(args.marginal or []):
        a, b = _parse_pair(text)
        g = marginal_density(field, a, b, field.x)
        oracle = qm_line_density(psi, a, b, field.x)
        deviation = float(np.max(np.abs(g.values - oracle.values)))
        metrics[f"marginal_{k}_mass"] = g.mass
        metrics[f"marginal_{k}_deviation"] = deviation
        lines += _section(f"📈 MARGINAL a={a:g}, b={b:g}")
        lines.append(f"  Mass: {g.mass:.10g}")
        lines.append(f"  Max deviation from the quantum density: {deviation:.3e}")
        if out:
            path = out / f"{stem}_marginal_{k}.txt"
            path.write_text(g.to_text())
            files.append(str(path))

    if args.verify:
        checks = verify_marginals(psi, grid, args.directions)
        metrics.update({k: v for k, v in checks.items() if k.endswith(("deviation", "residual"))})
        lines += _section(f"✅ MARGINAL CHECK ({args.directions or CONFIG['wigner']['directions']} directions)")
        lines.append(f"  Max marginal deviation: {checks['max_marginal_deviation']:.3e}")
        lines.append(f"  Field normalization residual: {checks['normalization_residual']:.3e}")
        lines.append(f"  Density normalization residual: {checks['density_normalization_residual']:.3e}")

    if args.reconstruct is not None:
        checks = verify_reconstruction(psi, args.reconstruct, grid)
        metrics["max_reconstruction_deviation"] = checks["max_reconstruction_deviation"]
        metrics["reconstructed_origin_value"] = checks["reconstructed_origin_value"]
        lines += _section(f"🔄 RECONSTRUCTION ({args.reconstruct} rays)")
        lines.append(f"  Max reconstruction deviation: {checks['max_reconstruction_deviation']:.3e}")
        lines.append(f"  Reconstructed origin value: {checks['reconstructed_origin_value']:.10g}")

    for path in files:
        lines.append(f"  📝 {path}")
    doc = ReportDocument(
        command="wigner",
        wigner=WignerEntry(
            state=psi.family,
            hbar=psi.hbar,
            grid=[grid.x_lo, grid.x_hi, grid.n_x, grid.p_lo, grid.p_hi, grid.n_p],
            metrics=metrics,
            files=files,
        ),
    )
    return _emit(args, doc, lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negprob",
        description="Signed groundings of multi-test experiments and phase-space checks.",
    )
    parser.add_argument("--json", action="store_true", help="Print the report as a JSON document")
    parser.add_argument("--field", default=None, help="Override the document field: rational | quadratic:<d> | float")
    parser.add_argument("--log-level", default=None, help="Log level for the stderr event log")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Check the consistency of an observation space")
    p.add_argument("file", help="SpaceDocument JSON file")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("ground", help="Solve for groundings of an observation space")
    p.add_argument("file", help="SpaceDocument JSON file")
    p.add_argument("--nonneg", action="store_true", help="Decide nonnegative feasibility")
    p.add_argument("--vertices", action="store_true", help="Enumerate vertices of the nonnegative polytope")
    p.add_argument("--symmetric", metavar="PERM_FILE", help="Restrict to groundings fixed by a variable permutation")
    p.set_defaults(handler=cmd_ground)

    p = sub.add_parser("example", help="Write a fixture as a SpaceDocument")
    p.add_argument("name", help=f"One of: {', '.join(FIXTURES)}")
    p.add_argument("--state", help="Qubit amplitudes 'a,b' for the feynman fixtures, e.g. 1,1/2+1/2i")
    p.add_argument("--out", help="Output file (default stdout)")
    p.set_defaults(handler=cmd_example)

    p = sub.add_parser("ks", help="Search a measurement frame for a rigid selection")
    p.add_argument("--frame", help="FrameDocument JSON file (default: the 18-vector frame)")
    p.set_defaults(handler=cmd_ks)

    p = sub.add_parser("wigner", help="Compute and verify a Wigner phase-space field")
    p.add_argument("--state", default="gaussian", help="gaussian | hermite:n | coherent:x0,p0 | sampled:<file>")
    p.add_argument("--grid", default="default", help="x_lo,x_hi,n_x,p_lo,p_hi,n_p")
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--marginal", action="append", metavar="A,B", help="Marginal along a*x + b*p (repeatable)")
    p.add_argument("--verify", action="store_true", help="Compare marginals with quantum densities")
    p.add_argument("--directions", type=int, default=None, help="Directions used by --verify")
    p.add_argument("--reconstruct", type=int, metavar="RAYS", help="Rebuild the field from RAYS directions")
    p.add_argument("--origin", action="store_true", help="Report the interpolated value at the origin")
    p.add_argument("--out", help="Directory for field and density files")
    p.set_defaults(handler=cmd_wigner)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logs.configure(args.log_level or CONFIG["log_level"])
    try:
        return args.handler(args)
    except NegprobError as e:
        print(f"❌ {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
