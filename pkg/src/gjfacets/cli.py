"""Command-line driver.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
data errors.  Function arguments are file paths or the bundled names
``psi``, ``kzh``, ``pi_prime_psi`` and ``kzh_lifted``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable

from . import gallery
from .analysis import Inclusion, compare_additivity, minimality_check
from .diagram import STYLES, dumps_face_dump, face_dump, loads_face_dump, render_svg
from .perturb import NotMinimalError, covered_components, extremality_verdict, pwl_perturbation_space
from .pwl import FunctionFileError, PwlFunction, read_function

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CommandReport:
    command: str
    inputs: list[str]
    verdicts: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "certificates": self.certificates,
            "exit_code": self.exit_code,
        }


# loading --------------------------------------------------------------------------


def load_function(arg: str, data_dir=None) -> PwlFunction:
    path = Path(arg)
    try:
        if path.exists():
            return read_function(path)
        if arg in ("psi", "kzh", "pi_prime_psi"):
            return gallery.load_data_file(arg, data_dir)
    except (FunctionFileError, gallery.PaperDataError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"no such file or bundled function: {arg}")


def load_descriptor(arg: str, data_dir=None) -> gallery.PerturbationDescriptor:
    path = Path(arg)
    if not path.exists() and arg == "kzh_lifted":
        if data_dir is not None:
            path = Path(data_dir) / "kzh_lifted.json"
        else:
            return gallery.kzh_descriptor()
    try:
        return gallery.loads_descriptor(path.read_text())
    except (OSError, gallery.PaperDataError) as exc:
        raise UsageError(str(exc)) from exc


def _is_descriptor(arg: str) -> bool:
    return arg == "kzh_lifted" or arg.endswith(".json")


# commands -------------------------------------------------------------------------


def cmd_check_minimal(file: str) -> CommandReport:
    pi = load_function(file)
    rep = minimality_check(pi)
    out = CommandReport("check-minimal", [file])
    d = rep.to_dict()
    out.verdicts["minimality"] = d["verdict"]
    out.certificates = {"certificate": d["certificate"], "witness": d["witness"]}
    out.lines.append(f"{file}: {d['verdict']}")
    if not rep.minimal:
        out.lines.append(f"  failed: {rep.failure}")
        for k, v in d["witness"].items():
            out.lines.append(f"  {k} = {v}")
        out.exit_code = EXIT_FAIL
    return out


def cmd_check_extreme(file: str) -> CommandReport:
    pi = load_function(file)
    out = CommandReport("check-extreme", [file])
    try:
        v = extremality_verdict(pi)
    except NotMinimalError as exc:
        out.verdicts["extremality"] = "not_minimal"
        out.lines.append(f"{file}: not minimal ({exc})")
        out.exit_code = EXIT_FAIL
        return out
    d = v.to_dict()
    out.verdicts["extremality"] = v.verdict
    out.certificates = d
    out.lines.append(f"{file}: {v.verdict}")
    if v.uncovered:
        out.lines.append("  uncovered: " + " U ".join(f"({a}, {b})" for a, b in v.uncovered))
    if v.witness is not None:
        out.lines.append(f"  eps = {v.eps}")
        out.lines.append("  witness (x left value right):")
        for row in d["witness"]:
            out.lines.append("    " + " ".join(row))
    return out


def cmd_compare_e(file_a: str, file_b: str, mode: str = "sans_limits") -> CommandReport:
    a = load_function(file_a)
    if _is_descriptor(file_b):
        b = gallery.LiftedFunction(a, load_descriptor(file_b))
    else:
        b = load_function(file_b)
    out = CommandReport("compare-e", [file_a, file_b])
    try:
        res = compare_additivity(a, b, mode)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from exc
    out.verdicts["inclusion"] = str(res)
    out.verdicts["mode"] = mode
    out.lines.append(f"E({file_a}) vs E({file_b}) [{mode}]: {res}")
    return out


# verify-paper -----------------------------------------------------------------------


@lru_cache(maxsize=8)
def _verdict(pi: PwlFunction):
    return extremality_verdict(pi)


@lru_cache(maxsize=8)
def _minimal(pi: PwlFunction) -> bool:
    return minimality_check(pi).minimal


Ingredient = tuple[str, Callable[[], tuple[bool, str]]]


def _ingredients(psi: PwlFunction, pi_prime: PwlFunction, kzh: PwlFunction, desc) -> list[Ingredient]:
    special = [(gallery.KZH_L, gallery.KZH_U), (kzh.f - gallery.KZH_U, kzh.f - gallery.KZH_L)]
    lifted = gallery.LiftedFunction(kzh, desc)

    def psi_minimal():
        return _minimal(psi), ""

    def psi_extreme():
        v = _verdict(psi)
        return v.verdict == "extreme", v.verdict

    def pp_minimal():
        ok = _minimal(pi_prime)
        built = gallery.build_pi_prime_psi(psi) if _minimal(psi) else None
        same = built is not None and built.same_as(pi_prime)
        return ok and same, "" if same else "differs from the construction"

    def strict_subset():
        r = compare_additivity(psi, pi_prime, "sans_limits")
        return r is Inclusion.STRICT_SUBSET, str(r)

    def params():
        probs = [p for p in gallery.kzh_data_problems(kzh) if not p.startswith("s-identity")]
        return not probs, "; ".join(probs)

    def s_ident():
        try:
            v = gallery.s_identity(kzh)
        except ValueError as exc:
            return False, str(exc)
        return v == gallery.KZH_S, str(v)

    def kzh_minimal():
        rep = minimality_check(kzh)
        return rep.minimal, rep.failure or ""

    def kzh_trivial():
        sp = pwl_perturbation_space(kzh, check_minimal=False)
        return sp.is_trivial(), f"dimension {sp.dimension}"

    def kzh_uncovered():
        _, unc = covered_components(kzh)
        ok = unc == special
        return ok, " U ".join(f"({a}, {b})" for a, b in unc)

    def kzh_faces():
        fc = gallery.classify_faces_ab(kzh, gallery.KZH_S, special, fail_fast=True)
        if fc.ok:
            c = fc.counts()
            return True, f"a={c.get('a', 0)} b={c.get('b', 0)} n0={c.get('n0', 0)}"
        return False, json.dumps(fc.failures[0])

    def lifted_conditions():
        c = gallery.check_conditions(desc)
        return all(c.values()), " ".join(f"({k})={'ok' if v else 'FAIL'}" for k, v in c.items())

    def lifted_e():
        r = gallery.compare_additivity_lifted(kzh, lifted, "sans_limits")
        return r is Inclusion.EQUAL, str(r)

    def lifted_differs():
        x = gallery.lifted_differs_witness(lifted)
        return x is not None, "" if x is None else f"x = {x}"

    def lifted_pinned():
        p = gallery.pinning_check(desc)
        return p["pinned"], " ".join(k for k, v in p.items() if not v)

    return [
        ("psi minimal", psi_minimal),
        ("psi extreme", psi_extreme),
        ("pi_prime_psi minimal", pp_minimal),
        ("E(psi) strict subset of E(pi_prime_psi)", strict_subset),
        ("kzh parameters f, l, u, x39", params),
        ("kzh s-identity = 19/23998", s_ident),
        ("kzh minimal", kzh_minimal),
        ("kzh piecewise linear perturbation space trivial", kzh_trivial),
        ("kzh uncovered = (l,u) U (f-u,f-l)", kzh_uncovered),
        ("kzh face classification (a)/(b)", kzh_faces),
        ("lifted conditions (i)-(v)", lifted_conditions),
        ("E(lifted) = E(kzh)", lifted_e),
        ("lifted differs from kzh", lifted_differs),
        ("lifted extremality pinning", lifted_pinned),
    ]


def cmd_verify_paper(data_dir=None, fail_fast: bool = False) -> CommandReport:
    psi = load_function("psi", data_dir)
    kzh = load_function("kzh", data_dir)
    try:
        pi_prime = gallery.load_data_file("pi_prime_psi", data_dir)
    except gallery.PaperDataError:
        pi_prime = gallery.build_pi_prime_psi(psi)
    desc = load_descriptor("kzh_lifted", data_dir)
    out = CommandReport("verify-paper", [str(data_dir) if data_dir else "<bundled>"])
    failed = False
    for name, fn in _ingredients(psi, pi_prime, kzh, desc):
        if failed and fail_fast:
            out.verdicts[name] = "SKIP"
            out.lines.append(f"SKIP  {name}")
            continue
        try:
            ok, detail = fn()
        except (ValueError, ArithmeticError) as exc:
            ok, detail = False, f"error: {exc}"
        out.verdicts[name] = "PASS" if ok else "FAIL"
        out.certificates[name] = detail
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        out.lines.append(line)
        failed = failed or not ok
    out.exit_code = EXIT_FAIL if failed else EXIT_OK
    return out


def cmd_diagram(file: str, style: str, out_path: str) -> CommandReport:
    pi = load_function(file)
    special = []
    if style == "nf_colors":
        if not minimality_check(pi).minimal:
            raise UsageError("nf_colors needs a minimal function (uncovered intervals)")
        _, special = covered_components(pi)
    dump = face_dump(pi, special)
    text = dumps_face_dump(dump)
    svg = render_svg(loads_face_dump(text), pi, style)
    out = Path(out_path)
    json_path = out.with_suffix(".json")
    try:
        out.write_text(svg)
        json_path.write_text(text)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    rep = CommandReport("diagram", [file])
    rep.verdicts = {"style": style, "svg": str(out), "json": str(json_path), "faces": len(dump["faces"])}
    rep.lines.append(f"wrote {out} and {json_path} ({len(dump['faces'])} faces)")
    return rep


# entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gjfacets", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="print a machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-minimal", help="decide minimality")
    s.add_argument("file")
    s = sub.add_parser("check-extreme", help="extreme / not_extreme / inconclusive")
    s.add_argument("file")
    s = sub.add_parser("compare-e", help="compare additivity domains")
    s.add_argument("file_a")
    s.add_argument("file_b", help="function file, or a coset perturbation descriptor (.json) lifting file_a")
    s.add_argument("--mode", choices=("sans_limits", "with_limits"), default="sans_limits")
    s = sub.add_parser("verify-paper", help="run every finitely checkable claim on the bundled functions")
    s.add_argument("--data-dir", default=None)
    s.add_argument("--fail-fast", action="store_true")
    s = sub.add_parser("diagram", help="draw the 2D complex as SVG plus a JSON face dump")
    s.add_argument("file")
    s.add_argument("--style", choices=STYLES, default="additive_domain")
    s.add_argument("--out", required=True)
    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return p


def run(argv=None) -> CommandReport:
    args = build_parser().parse_args(argv)
    if args.command == "check-minimal":
        return cmd_check_minimal(args.file)
    if args.command == "check-extreme":
        return cmd_check_extreme(args.file)
    if args.command == "compare-e":
        return cmd_compare_e(args.file_a, args.file_b, args.mode)
    if args.command == "verify-paper":
        if args.data_dir is not None and not Path(args.data_dir).is_dir():
            raise UsageError(f"not a directory: {args.data_dir}")
        return cmd_verify_paper(args.data_dir, args.fail_fast)
    return cmd_diagram(args.file, args.style, args.out)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        rep = run(argv)
    except UsageError as exc:
        if as_json:
            print(json.dumps({"error": str(exc), "exit_code": EXIT_USAGE}))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if as_json:
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    else:
        print("\n".join(rep.lines))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
