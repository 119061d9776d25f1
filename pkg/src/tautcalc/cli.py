"""Command-line front end: exact formula reports in text, LaTeX or JSON.

Every number in a report is an exact rational string; reports are
byte-identical across runs (timing goes to stderr).  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .scalars import Scalar
from .graded import GradedPoly
from .arakelov import (AbelianTautRing, ArithClass, c1_critical_power,
                       harmonic_substitution, height_polynomial,
                       lagrangian_degree, proportionality_map_check,
                       tautological_ring)
from .verify import run_checks

MAX_DEFAULT_D = 7


@dataclass
class RunConfig:
    d: int
    command: str
    fmt: str = "text"
    invert2: bool = False
    harmonic_mode: str = "exact"
    max_degree: int | None = None
    selection: list[str] | None = None
    audit: bool = False
    extra_k: int = 0


@dataclass
class Report:
    command: str
    params: dict
    lines: list[tuple[str, str, str]] = field(default_factory=list)
    # (label, text rendering, latex rendering)
    data: dict = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)

    def add(self, label: str, text: str, latex: str | None = None,
            payload=None):
        self.lines.append((label, text, latex if latex is not None else text))
        if payload is not None:
            self.data[label] = payload

    def to_text(self) -> str:
        out = [f"# {self.command} " + " ".join(
            f"{k}={v}" for k, v in self.params.items())]
        for label, text, _ in self.lines:
            out.append(f"{label}: {text}")
        for check in self.checks:
            status = "PASS" if check["ok"] else "FAIL"
            out.append(f"[{status}] {check['name']} ({check['source']}): "
                       f"{check['detail']}")
        return "\n".join(out) + "\n"

    def to_latex(self) -> str:
        out = ["% " + self.command]
        for label, _, latex in self.lines:
            out.append(f"% {label}")
            out.append(f"\\[ {latex} \\]")
        for check in self.checks:
            status = "PASS" if check["ok"] else "FAIL"
            out.append(f"% [{status}] {check['name']}: {check['detail']}")
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        doc = {"command": self.command, "params": self.params,
               "results": {label: self.data.get(label, text)
                           for label, text, _ in self.lines},
               "checks": self.checks}
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "latex":
            return self.to_latex()
        return self.to_text()


def _strip_log2(value):
    if isinstance(value, Scalar):
        return value.substitute({"L": Scalar.coerce(0)})
    if isinstance(value, GradedPoly):
        return value.map_coefficients(
            lambda c: c.substitute({"L": Scalar.coerce(0)}))
    return value


def _class_renderings(x: ArithClass, invert2: bool) -> tuple[str, str, dict]:
    if invert2:
        x = ArithClass(x.ring, _strip_log2(x.z), _strip_log2(x.a),
                       _strip_log2(x.g))
    return x.render(False), x.render(True), x.to_json()


def cmd_pontrjagin(config: RunConfig) -> Report:
    ring = AbelianTautRing(config.d, config.max_degree)
    k = config.extra_k
    report = Report("pontrjagin", {"d": config.d, "k": k,
                                   "invert2": config.invert2})
    from .charclasses import ClassVector, pontrjagin_from_c
    classes = ClassVector.standard(ring.zgens, list(ring.zgens.names))
    poly = pontrjagin_from_c(classes, k)[k - 1]
    if poly.is_zero() or poly.max_degree() > ring.cap:
        value = ring.zero()
    else:
        value = ring.reduce(ring.from_z(poly))
    text, latex, payload = _class_renderings(value, config.invert2)
    report.add(f"p^_{k}(E)", text, f"\\hat p_{{{k}}}(\\bar E) = {latex}", payload)
    return report


def cmd_c1_power(config: RunConfig) -> Report:
    result = c1_critical_power(config.d, AbelianTautRing(config.d,
                                                         config.max_degree))
    report = Report("c1-power", {"d": config.d, "invert2": config.invert2})
    text, latex, payload = _class_renderings(result.reduced, config.invert2)
    exp = result.exponent
    report.add(f"c^1^{exp}(E)", text,
               f"\\hat c_1^{{{exp}}}(\\bar E) = {latex}", payload)
    r = _strip_log2(result.r) if config.invert2 else result.r
    report.add("r_d", r.render(), r.render(True), r.to_json())
    anames = result.reduced.ring.display_anames(False)
    report.add("phi", result.phi.render(names=anames),
               result.phi.render(True, result.reduced.ring.display_anames(True)),
               result.phi.to_json())
    report.add("phi (witness basis)", result.phi_raw.render(names=anames),
               result.phi_raw.render(True,
                                     result.reduced.ring.display_anames(True)),
               result.phi_raw.to_json())
    return report


def cmd_ring_info(config: RunConfig) -> Report:
    ring = tautological_ring(config.d, config.max_degree)
    rep = ring.dimension_report()
    report = Report("ring-info", {"d": config.d})
    report.add("dimensions", str(rep.dims), str(rep.dims), rep.dims)
    report.add("total", str(rep.total), str(rep.total), rep.total)
    report.add("socle degree", str(rep.socle_degree), str(rep.socle_degree),
               rep.socle_degree)
    report.add("socle dimension", str(rep.socle_dim), str(rep.socle_dim),
               rep.socle_dim)
    if config.audit:
        report.add("audit", "(json only)", "(json only)", ring.audit_dump())
    return report


def cmd_height_poly(config: RunConfig) -> Report:
    result = height_polynomial(config.d)
    report = Report("height-poly", {"d": config.d, "invert2": config.invert2})
    report.add("height polynomial", result.height.render(),
               result.height.render(True), result.height.to_json())
    sub = _strip_log2(result.substituted) if config.invert2 else result.substituted
    report.add("after substitution (= r_d)", sub.render(), sub.render(True),
               sub.to_json())
    bindings = harmonic_substitution(config.d)
    report.add("substitution",
               "; ".join(f"{k} -> {v.render()}" for k, v in sorted(
                   bindings.items(), key=lambda kv: int(kv[0][1:]))
                   if Scalar.symbol(k).symbols() & result.height.symbols()),
               "", {k: v.to_json() for k, v in bindings.items()})
    return report


def cmd_hmap_check(config: RunConfig) -> Report:
    rep = proportionality_map_check(config.d)
    report = Report("hmap-check", {"d": config.d})
    if rep.form_unit is not None:
        report.add("constant form scale", rep.form_unit.render(),
                   rep.form_unit.render(True), rep.form_unit.to_json())
    for k, image in sorted(rep.generator_images.items()):
        text, latex, payload = _class_renderings(image, False)
        report.add(f"h(C{k})", text, latex, payload)
    for name, residue in rep.relation_residues:
        report.checks.append({"name": f"residue of {name}",
                              "source": "derived",
                              "ok": residue.is_zero(),
                              "detail": "0" if residue.is_zero()
                              else residue.render()})
    if not rep.constructed:
        report.checks.append({"name": "construction", "source": "derived",
                              "ok": False, "detail": rep.diagnosis})
    return report


def cmd_degree(config: RunConfig) -> Report:
    value = lagrangian_degree(config.d)
    report = Report("degree", {"d": config.d})
    report.add(f"deg B_{config.d - 1}", str(value), str(value), value)
    return report


def cmd_verify(config: RunConfig) -> Report:
    results = run_checks(config.selection)
    report = Report("verify", {"only": config.selection or "all"})
    for res in results:
        report.checks.append({"name": res.name, "source": res.source,
                              "ok": res.ok, "detail": res.detail})
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tautcalc",
        description="Exact calculator for tautological rings of Hodge "
                    "bundles and their arithmetic extensions.")
    parser.add_argument("--format", choices=("text", "latex", "json"),
                        default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_k=False):
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--max-degree", type=int, default=None,
                       help="working-degree override (required for d > 7)")
        if need_k:
            p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("pontrjagin", help="lifted Pontrjagin class value")
    common(p, need_k=True)
    p.add_argument("--invert2", action="store_true",
                   help="drop every log 2 term (base change inverting 2)")

    p = sub.add_parser("c1-power", help="critical power of the first class")
    common(p)
    p.add_argument("--invert2", action="store_true")

    p = sub.add_parser("ring-info", help="classical ring dimensions")
    common(p)
    p.add_argument("--audit", action="store_true",
                   help="include per-degree bases and reduction rows (json)")

    p = sub.add_parser("height-poly", help="harmonic height polynomial")
    common(p)
    p.add_argument("--invert2", action="store_true")

    p = sub.add_parser("hmap-check", help="proportionality map residues")
    common(p)

    p = sub.add_parser("degree", help="degree of the Lagrangian Grassmannian")
    common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--only", type=str, default=None,
                   help="comma-separated check names")
    return parser


COMMANDS = {
    "pontrjagin": cmd_pontrjagin,
    "c1-power": cmd_c1_power,
    "ring-info": cmd_ring_info,
    "height-poly": cmd_height_poly,
    "hmap-check": cmd_hmap_check,
    "degree": cmd_degree,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    config = RunConfig(d=getattr(args, "d", 0), command=args.command,
                       fmt=args.format,
                       invert2=getattr(args, "invert2", False),
                       max_degree=getattr(args, "max_degree", None))
    config.audit = getattr(args, "audit", False)
    config.extra_k = getattr(args, "k", 0)
    if args.command == "verify":
        config.selection = (args.only.split(",") if args.only else None)
    else:
        if config.d < 1:
            parser.error("--d must be positive")
        if args.command in ("height-poly", "hmap-check", "degree") and config.d < 2:
            parser.error(f"{args.command} needs --d >= 2")
        if config.d > MAX_DEFAULT_D and config.max_degree is None:
            parser.error(f"--d {config.d} exceeds the default cap "
                         f"{MAX_DEFAULT_D}; pass --max-degree to override")
        if config.d > MAX_DEFAULT_D:
            print(f"warning: d={config.d} builds large exact matrices; "
                  "expect long runtimes", file=sys.stderr)
        if args.command == "pontrjagin" and not 1 <= config.extra_k <= config.d:
            parser.error("--k must satisfy 1 <= k <= d")

    start = time.monotonic()
    try:
        report = COMMANDS[args.command](config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render(config.fmt))
    print(f"elapsed: {time.monotonic() - start:.3f}s", file=sys.stderr)
    if report.checks and not all(c["ok"] for c in report.checks):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
