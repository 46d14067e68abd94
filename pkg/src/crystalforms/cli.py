"""Command-line front end.

Usage:
    crystalforms lattice build --builtin hexagonal --out hex.json
    crystalforms lattice check-ee --builtin triangular
    crystalforms lattice abelian-cover seed.json
    crystalforms interaction analyze exclusion.json --json
    crystalforms decompose --lattice "euclidean(2)" --interaction exclusion --form omega.json --window 5,5
    crystalforms verify --suite all --scale small

Exit codes: 0 success, 1 a suite or certificate failed, 2 invalid input,
3 inconclusive (window or cap too small).  Reports are byte-stable; wall
time is only included with --timing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .calculus import Differential, Form, FormSum, InvariantFunction, TabulatedForm, ZeroForm
from .configspace import ConfigSpace
from .crystal import (BUILTIN_NAMES, PeriodicLattice, essentially_euclidean_equivalent, is_essentially_euclidean,
                      maximal_abelian_cover, parse_builtin)
from .errors import CapExceeded, CertificateError, ClosednessError, InconclusiveError, SplittingError, ValidationError
from .interaction import (BUILTINS as INTERACTION_BUILTINS, Interaction, builtin as builtin_interaction, c_phi,
                          conserved_basis, default_locales, irreducibility_evidence, simplicity, violations)
from .linalg import format_q, q
from .multigraph import MultiGraph
from .suites import SCALES, run_suites, suite_names
from .varadhan import AFunction, DecompositionOptions, decompose

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    verdicts: Dict = field(default_factory=dict)
    tables: Dict = field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None
    exit_code: int = EXIT_OK
    lines: List[str] = field(default_factory=list)

    def to_json(self):
        out = {"command": self.command, "inputs": self.inputs, "verdicts": self.verdicts, "tables": self.tables,
               "tool_version": __version__, "threads": os.environ.get("VARADHAN_THREADS", "1")}
        if self.timing is not None:
            out["timing"] = self.timing
        return out


# --- input loading -------------------------------------------------------------


def _digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _read_json(path: str, report: RunReport, key: str):
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"{key} file {path!r} does not exist")
    report.inputs[key] = _digest(p)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{key} file {path!r} is not valid JSON: {exc}") from exc


def load_lattice(spec: str, report: RunReport, key: str = "lattice") -> PeriodicLattice:
    """A builtin spec such as 'euclidean(2)' or a path to lattice JSON."""
    if Path(spec).suffix == ".json" or Path(spec).exists():
        return PeriodicLattice.from_json(_read_json(spec, report, key))
    report.inputs[key] = f"builtin:{spec}"
    return parse_builtin(spec)


def load_interaction(spec: str, report: RunReport) -> Interaction:
    if Path(spec).suffix == ".json" or Path(spec).exists():
        return Interaction.from_json(_read_json(spec, report, "interaction"))
    report.inputs["interaction"] = f"builtin:{spec}"
    name, _, args = spec.partition("(")
    vals = [int(a) for a in args.rstrip(")").split(",") if a.strip()]
    return builtin_interaction(name.strip(), *vals)


def load_form(data, lattice: PeriodicLattice, space: ConfigSpace, radius: Optional[int] = None) -> Form:
    """Form JSON: tabulated orbit data, {"kind": "zero"}, or {"kind": "exact", "g": ..., "zetas": [...]}.

    The exact kind stands for d g + sum_j d A^j_{zeta_j} and is evaluated
    without tabulating the radius-R ball.
    """
    kind = data.get("kind", "tabulated")
    if kind == "tabulated":
        form = TabulatedForm.from_json(data, lattice, space)
    elif kind == "zero":
        form = ZeroForm()
        form.radius = int(data.get("radius", 1))
    elif kind == "exact":
        parts = []
        if data.get("g"):
            g = InvariantFunction.from_json(lattice, space.base, data["g"])
            parts.append((1, Differential(g, space)))
        zetas = data.get("zetas", [])
        if len(zetas) > lattice.rank:
            raise ValidationError(f"{len(zetas)} zetas given for a rank-{lattice.rank} lattice")
        for j, z in enumerate(zetas, start=1):
            xi = {s: q(z.get(s, 0)) for s in space.interaction.states}
            parts.append((1, Differential(AFunction(xi, j, space.base), space)))
        form = FormSum(parts)
        form.radius = int(data.get("radius", 1))
    else:
        raise ValidationError(f"unknown form kind {kind!r}")
    if radius is not None:
        form.radius = int(radius)
    return form


def parse_window(text: str, d: int) -> List[int]:
    try:
        sizes = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"window {text!r} must be comma-separated integers") from exc
    if len(sizes) == 1 and d > 1:
        sizes = sizes * d
    if len(sizes) != d or min(sizes) < 1:
        raise ValidationError(f"window {text!r} needs {d} positive sizes")
    return sizes


# --- commands --------------------------------------------------------------------


def cmd_lattice(args) -> RunReport:
    report = RunReport(f"lattice {args.action}")
    if args.action == "abelian-cover":
        if not args.source:
            raise ValidationError("abelian-cover needs a seed graph JSON file")
        seed = MultiGraph.from_json(_read_json(args.source, report, "seed"))
        lat = maximal_abelian_cover(seed)
        formula = 1 - seed.n_vertices + seed.n_edges // 2
        report.verdicts = {"rank": lat.rank, "rank_formula": formula, "agrees": lat.rank == formula}
        report.tables["lattice"] = lat.to_json()
        report.lines.append(f"rank: {lat.rank} (1 - |V| + |E|/2 = {formula})")
        if args.out:
            Path(args.out).write_text(json.dumps(lat.to_json(), indent=2, sort_keys=True) + "\n")
        return report
    spec = args.builtin or args.source
    if not spec:
        raise ValidationError("give --builtin NAME or a lattice JSON file")
    lat = load_lattice(spec, report)
    if args.action == "build":
        report.tables["lattice"] = lat.to_json()
        report.lines.append(json.dumps(lat.to_json(), sort_keys=True))
        if args.out:
            Path(args.out).write_text(json.dumps(lat.to_json(), indent=2, sort_keys=True) + "\n")
    elif args.action == "check-ee":
        ee = is_essentially_euclidean(lat)
        report.verdicts["essentially_euclidean"] = ee.essentially_euclidean
        report.tables["ee"] = ee.to_json()
        report.lines.append(f"EE: {'true' if ee.essentially_euclidean else 'false'}")
        if not ee.essentially_euclidean:
            eq = essentially_euclidean_equivalent(lat)
            report.tables["equivalent"] = {"C": eq.C, "C_prime": eq.C_prime}
            report.lines.append(f"equivalent lattice constants: C={eq.C} C'={eq.C_prime}")
    elif args.action == "inspect":
        ee = is_essentially_euclidean(lat)
        info = {"name": lat.name, "rank": lat.rank, "base_vertices": lat.n_base, "seed_edges": lat.seed.n_edges,
                "generators": list(lat.generators), "essentially_euclidean": ee.essentially_euclidean,
                "block_steps": [list(v) for v in lat.block_steps]}
        report.tables["lattice"] = info
        report.lines.extend(f"{k}: {v}" for k, v in info.items())
    return report


def cmd_interaction(args) -> RunReport:
    report = RunReport("interaction analyze")
    inter = load_interaction(args.source, report)
    bad = violations(inter)
    if bad:
        report.verdicts["valid"] = False
        report.tables["violations"] = [{"pair": list(p), "phi": list(a), "phi_bar_phi": list(b)} for p, a, b in bad]
        report.lines.append("invalid interaction: phi_bar o phi is not the identity on moved pairs")
        report.lines.extend(f"  {p} -> {a} -> {b}" for p, a, b in bad)
        report.exit_code = EXIT_INPUT
        return report
    basis = conserved_basis(inter)
    simp = simplicity(inter)
    verdicts = irreducibility_evidence(inter, default_locales(args.max_locale), cap=args.cap)
    passed = all(v.passed for v in verdicts)
    report.verdicts = {"valid": True, "c_phi": c_phi(inter), "simple": simp.simple, "monoid": simp.monoid,
                       "irreducibility_evidence": "PASS" if passed else "FAIL"}
    report.tables["conserved_basis"] = [{s: format_q(b[s]) for s in inter.states} for b in basis]
    report.tables["simplicity"] = simp.to_json()
    report.tables["locales"] = [v.to_json() for v in verdicts]
    report.lines += [f"states: {', '.join(inter.states)} (base {inter.base})", f"c_phi={c_phi(inter)}",
                     f"simple={'true' if simp.simple else 'false'}" + (f" ({simp.monoid})" if simp.monoid else ""),
                     f"evidence {'PASS' if passed else 'FAIL'} on {len(verdicts)} paths and cycles"]
    return report


def cmd_decompose(args) -> RunReport:
    report = RunReport("decompose")
    lat = load_lattice(args.lattice, report)
    inter = load_interaction(args.interaction, report)
    space = ConfigSpace(lat, inter)
    form = load_form(_read_json(args.form, report, "form"), lat, space, args.radius)
    sizes = parse_window(args.window, lat.rank)
    window = lat.box_window(sizes)
    opts = DecompositionOptions(cap=args.cap, seed=args.seed)
    t0 = time.perf_counter()
    res = decompose(form, space, window, opts)
    if args.timing:
        report.timing = {"decompose_seconds": round(time.perf_counter() - t0, 3)}
    report.verdicts = {"certificate_residuals": res.certificate["nonzero_residuals"],
                       "window": sizes, "exactness": "exact rational"}
    report.tables = res.to_json()
    report.lines.append(f"window {'x'.join(map(str, sizes))}, R={form.radius}")
    for j, z in enumerate(res.zetas, start=1):
        report.lines.append(f"zeta_{j}: " + ", ".join(f"{s}={format_q(v)}" for s, v in z.items()))
    report.lines.append(f"g: {len(res.g.terms)} orbit terms, expansion radius {res.provenance['expansion']['radius']}")
    report.lines.append(f"certificate: {res.certificate['transitions_checked']} transitions, "
                        f"{res.certificate['nonzero_residuals']} nonzero residuals")
    if args.out:
        Path(args.out).write_text(json.dumps(res.to_json(), indent=2, sort_keys=True) + "\n")
    return report


def cmd_verify(args) -> RunReport:
    report = RunReport(f"verify {args.suite}")
    t0 = time.perf_counter()
    results = run_suites(args.suite, args.scale)
    if args.timing:
        report.timing = {"verify_seconds": round(time.perf_counter() - t0, 3)}
    report.verdicts = {r.name: "PASS" if r.passed else "FAIL" for r in results}
    report.tables["suites"] = [r.to_json() for r in results]
    report.lines = [r.line() for r in results]
    report.lines.append(f"{sum(r.passed for r in results)}/{len(results)} suites passed (scale {args.scale})")
    if not all(r.passed for r in results):
        report.exit_code = EXIT_FAIL
    return report


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crystalforms", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--cap", type=int, default=10**6, help="state-space cap for enumerations")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte stability)")
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", parents=[common], help="build, inspect and classify crystal lattices")
    lat.add_argument("action", choices=["build", "inspect", "check-ee", "abelian-cover"])
    lat.add_argument("source", nargs="?", help="lattice JSON (or seed graph JSON for abelian-cover)")
    lat.add_argument("--builtin", help=f"builtin lattice, one of {', '.join(BUILTIN_NAMES)}; e.g. 'euclidean(2)'")
    lat.add_argument("--out")
    lat.set_defaults(func=cmd_lattice)

    it = sub.add_parser("interaction", parents=[common], help="analyze an interaction table")
    it.add_argument("action", choices=["analyze"])
    it.add_argument("source", help=f"interaction JSON or builtin ({', '.join(sorted(INTERACTION_BUILTINS))})")
    it.add_argument("--max-locale", type=int, default=4, help="largest path or cycle for irreducibility evidence")
    it.set_defaults(func=cmd_interaction)

    dec = sub.add_parser("decompose", parents=[common], help="decompose a closed uniform form")
    dec.add_argument("--lattice", required=True)
    dec.add_argument("--interaction", required=True)
    dec.add_argument("--form", required=True)
    dec.add_argument("--window", default="5", help="cells per direction, e.g. 5,5")
    dec.add_argument("--radius", type=int, help="override the form's uniformity radius")
    dec.add_argument("--seed", type=int, default=0)
    dec.add_argument("--out")
    dec.set_defaults(func=cmd_decompose)

    ver = sub.add_parser("verify", parents=[common], help="run the property suites")
    ver.add_argument("--suite", default="all", help=f"all or one of {', '.join(suite_names())}")
    ver.add_argument("--scale", default="small", choices=SCALES)
    ver.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (ValidationError, ClosednessError, SplittingError) as exc:
        return _fail(exc, EXIT_INPUT, args)
    except (InconclusiveError, CapExceeded) as exc:
        return _fail(exc, EXIT_INCONCLUSIVE, args)
    except CertificateError as exc:
        return _fail(exc, EXIT_FAIL, args)
    except ValueError as exc:
        return _fail(exc, EXIT_INPUT, args)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        print("\n".join(report.lines))
    return report.exit_code


def _fail(exc: Exception, code: int, args) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("witness", "cycle", "defect", "estimate"):
        val = getattr(exc, attr, None)
        if val is not None:
            payload[attr] = _jsonable(val)
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
    return code


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


if __name__ == "__main__":
    sys.exit(main())
