"""Command-line surface: validate, hh, generate, cardy, strata (+ fixture).

Reports are deterministic: identical inputs and flags produce
byte-identical stdout (timing goes to stderr).  Exit codes: 0 for a
passing/successful verdict, 1 for a mathematical failure (a violated
equation, a failed comparison, an inconclusive or refuted certificate),
2 for input errors (unreadable files, schema violations, bad flags).
The environment variable AINFCAT_THREADS is accepted for compatibility
with parallel runners and validated, but every computation here is
deterministic and single-threaded regardless of its value.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from . import fixtures as fixture_mod
from .bimodules import RIGHT, LEFT, diagonal_bimodule, hom_complex, tensor_over_category, verify_bimodule, verify_bimodule_hom, yoneda_module
from .cardy import HomotopyWitness, NoIntegralSolution, NoSolution, OpenClosedData, solve_homotopy, telescoping_data, verify_cardy_on_homology, verify_homotopy_equation
from .complexes import BasedComplex, GradedMap
from .core import verify_ainf, with_ring
from .fileformat import (
    InputError,
    category_to_json,
    certificate_to_json,
    load_category,
    load_certificate,
    load_morphism,
    morphism_to_json,
)
from .generation import generation_test, replay_certificate, verify_cohomological_unit
from .hochschild import hochschild_homology, truncated_cc
from .strata import (
    annulus,
    bidisc,
    dimension,
    disc,
    enumerate_codim1,
    interpolation,
    punctured_disc,
    strata_term_bijection,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _check_threads_env():
    val = os.environ.get("AINFCAT_THREADS")
    if val is None:
        return
    try:
        n = int(val)
    except ValueError:
        raise CliError(f"AINFCAT_THREADS must be an integer, got {val!r}")
    if n < 1:
        raise CliError("AINFCAT_THREADS must be >= 1")


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as err:
        raise CliError(f"cannot read {path}: {err}")


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    lines = [f"command: {report['command']}"]
    if report.get("inputs"):
        lines.append(f"inputs: {report['inputs']}")
    for key in sorted(report):
        if key in ("command", "inputs", "verdict", "witnesses"):
            continue
        value = report[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    for w in report.get("witnesses", []):
        lines.append(f"witness: {w}")
    lines.append(f"verdict: {report['verdict']}")
    sys.stdout.write("\n".join(lines) + "\n")


def _witnesses(report) -> list[str]:
    return [str(v) for v in report.violations[:5]]


# ---------------------------------------------------------------------------


def _apply_ring(cat, args):
    if getattr(args, "ring", None) is None:
        return cat
    try:
        return with_ring(cat, args.ring)
    except ValueError as err:
        raise CliError(str(err))


def cmd_validate(args) -> int:
    data = _read(args.path)
    loaded = load_category(data)
    cat = _apply_ring(loaded.category, args)
    report = {"command": "validate", "inputs": loaded.digest, "checks": {}}
    ok = True

    r = verify_ainf(cat, args.depth)
    report["checks"]["structure_relations"] = {"checked": r.checked, "passed": r.passed}
    witnesses = _witnesses(r)
    ok &= r.passed

    if ok:
        rb = verify_bimodule(diagonal_bimodule(cat), max_inputs=args.bimodule_bound)
        report["checks"]["diagonal_bimodule"] = {"checked": rb.checked, "passed": rb.passed}
        witnesses += _witnesses(rb)
        ok &= rb.passed

    for obj in sorted(cat.units):
        ur = verify_cohomological_unit(cat, obj, cat.units[obj])
        report["checks"][f"unit[{obj}]"] = {"passed": ur.passed}
        if not ur.passed:
            witnesses += [str(f) for f in ur.failures[:3]]
        ok &= ur.passed

    for m in loaded.raw.get("morphisms", []):
        phi = load_morphism(loaded, m["name"])
        mr = verify_bimodule_hom(phi, max_inputs=args.bimodule_bound)
        report["checks"][f"morphism[{m['name']}]"] = {"checked": mr.checked, "passed": mr.passed}
        witnesses += _witnesses(mr)
        ok &= mr.passed

    report["witnesses"] = witnesses
    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.json)
    return EXIT_PASS if ok else EXIT_FAIL


def _parse_degree_range(spec: str):
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", spec)
    if not m:
        raise CliError(f"bad degree range {spec!r}; expected a..b")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise CliError("empty degree range")
    return range(a, b + 1)


def cmd_hh(args) -> int:
    data = _read(args.path)
    loaded = load_category(data)
    cat = _apply_ring(loaded.category, args)
    if not verify_ainf(cat, 3).passed:
        raise CliError("category fails the structure relations", code=EXIT_FAIL)
    degrees = _parse_degree_range(args.degrees) if args.degrees else None
    res = hochschild_homology(cat, args.max_length, degrees)
    groups = {str(k): str(res.groups[k]) for k in sorted(res.groups)}
    stable = {str(k): res.stable[k] for k in sorted(res.stable)}
    report = {
        "command": "hh",
        "inputs": loaded.digest,
        "max_length": args.max_length,
        "groups": groups,
        "stable": stable,
        "verdict": "pass",
    }
    _emit(report, args.json)
    return EXIT_PASS


def cmd_generate(args) -> int:
    data = _read(args.path)
    loaded = load_category(data)
    cat = loaded.category
    K = args.object
    if K not in cat.objects:
        raise CliError(f"unknown object {K!r}")
    B = args.subcategory.split(",") if args.subcategory else list(cat.objects)
    for obj in B:
        if obj not in cat.objects:
            raise CliError(f"unknown subcategory object {obj!r}")
    if K not in cat.units:
        raise CliError(f"no unit chain declared for object {K!r}")
    e = cat.units[K]

    if args.replay:
        cert = load_certificate(_read(args.replay), cat)
        out = replay_certificate(cat, cert, e)
        report = {
            "command": "generate",
            "inputs": loaded.digest,
            "mode": "replay",
            "verdict": out.verdict,
            "detail": out.detail,
            "witnesses": [],
        }
        _emit(report, args.json)
        return EXIT_PASS if out.generated else EXIT_FAIL

    cert = generation_test(cat, B, K, e, args.max_length)
    report = {
        "command": "generate",
        "inputs": loaded.digest,
        "object": K,
        "subcategory": sorted(B),
        "max_length": args.max_length,
        "verdict": cert.verdict,
        "rational_only": cert.rational_only,
        "detail": cert.detail,
        "witnesses": [],
    }
    if cert.generated:
        report["tau_terms"] = len(cert.tau)
        report["h_terms"] = len(cert.h)
    if args.emit:
        payload = json.dumps(certificate_to_json(cert, loaded.digest), sort_keys=True, indent=2)
        with open(args.emit, "w") as fh:
            fh.write(payload + "\n")
        report["emitted"] = args.emit
    _emit(report, args.json)
    return EXIT_PASS if cert.generated else EXIT_FAIL


def _closed_complex_from_tables(section, cat) -> BasedComplex:
    basis: dict[int, list] = {}
    names = {}
    for b in section["basis"]:
        if b["name"] in names:
            raise InputError(f"duplicate closed-complex basis name {b['name']}", path="/cardy/closed_complex")
        names[b["name"]] = b["degree"]
        basis.setdefault(b["degree"], []).append(b["name"])
    for k in basis:
        basis[k].sort()
    diff_table: dict[str, dict] = {}
    for t in section["differential"]:
        if t["input"] not in names or t["output"] not in names:
            raise InputError("differential references undeclared basis element", path="/cardy/closed_complex")
        diff_table.setdefault(t["input"], {})[t["output"]] = t["coefficient"]
    cx = BasedComplex(basis, lambda label: diff_table.get(label, {}), ring=cat.ring)
    cx.validate()
    return cx


def cmd_cardy(args) -> int:
    data = _read(args.path)
    loaded = load_category(data)
    cat = loaded.category
    morphisms = loaded.raw.get("morphisms", [])
    name = args.morphism
    if name is None:
        if len(morphisms) != 1:
            raise CliError("specify --morphism; the file declares " + str(len(morphisms)))
        name = morphisms[0]["name"]
    phi = load_morphism(loaded, name)
    mr = verify_bimodule_hom(phi, max_inputs=3)
    if not mr.passed:
        raise CliError(f"morphism {name} fails the bimodule-map equation", code=EXIT_FAIL)
    K = phi.target.left.K
    cc = truncated_cc(cat, args.max_length)
    tcx = tensor_over_category(
        yoneda_module(cat, K, RIGHT), yoneda_module(cat, K, LEFT), args.max_length
    )

    section = loaded.raw.get("cardy")
    H = HomotopyWitness()
    if section and "chain_maps" in section and not args.telescoping:
        closed = _closed_complex_from_tables(section["closed_complex"], cat)
        refs_index = {(g.source, g.target, g.name): g for g in cat.generators()}

        oc_table: dict = {}
        for t in section["chain_maps"].get("oc", []):
            word = tuple(refs_index[tuple(r)] for r in t["word"])
            oc_table.setdefault(word, {})[t["output"]] = t["coefficient"]
        co_table: dict = {}
        for t in section["chain_maps"].get("co", []):
            g = refs_index[tuple(t["output"])]
            co_table.setdefault(t["input"], {})[g] = t["coefficient"]
        hom_cx = hom_complex(cat, K, K)
        data_obj = OpenClosedData(
            cat=cat,
            K=K,
            n=section["degree"],
            closed=closed,
            oc=GradedMap(source=cc, target=closed, shift=section["degree"], apply=lambda w: oc_table.get(w, {})),
            co=GradedMap(source=closed, target=hom_cx, shift=0, apply=lambda lb: co_table.get(lb, {})),
        )
        h_table: dict = {}
        for t in section["chain_maps"].get("homotopy", []):
            word = tuple(refs_index[tuple(r)] for r in t["word"])
            g = refs_index[tuple(t["output"])]
            h_table.setdefault(word, {})[g] = t["coefficient"]
        H = HomotopyWitness(table=h_table)
    else:
        data_obj = telescoping_data(cat, phi, cc, tcx, co_sign=args.co_sign)

    report = {
        "command": "cardy",
        "inputs": loaded.digest,
        "morphism": name,
        "degree": data_obj.n,
        "max_length": args.max_length,
        "witnesses": [],
    }
    ok = True
    if args.solve:
        out = solve_homotopy(data_obj, phi, cc, tcx)
        if isinstance(out, NoSolution):
            report["homotopy"] = "no-solution"
            ok = False
        elif isinstance(out, NoIntegralSolution):
            report["homotopy"] = "no-integral-solution"
            ok = False
        else:
            H = out
            report["homotopy"] = f"solved ({sum(len(v) for v in H.table.values())} entries)"
    hr = verify_homotopy_equation(data_obj, phi, H, cc, tcx)
    report["homotopy_equation"] = {"checked": hr.checked, "passed": hr.passed}
    report["witnesses"] += _witnesses(hr)
    ok &= hr.passed
    cr = verify_cardy_on_homology(data_obj, phi, cc, tcx)
    report["homology_comparison"] = {"checked": cr.checked, "passed": cr.passed}
    report["witnesses"] += _witnesses(cr)
    ok &= cr.passed
    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.json)
    return EXIT_PASS if ok else EXIT_FAIL


_SPACE_RE = re.compile(
    r"^(?:R_?(?P<d>\d+)(?P<punct>\^1)?|R_?\{?(?P<r>\d+)\|1\|(?P<s>\d+)\}?|C_?(?P<cd>\d+)\^?-?|P_?(?P<pd>\d+))$"
)


def parse_space(spec: str):
    m = _SPACE_RE.match(spec)
    if not m:
        raise CliError(
            f"cannot parse space {spec!r}; expected forms like R_4, R_2|1|1, R_3^1, C_2^-, P_3"
        )
    if m.group("r") is not None:
        return bidisc(int(m.group("r")), int(m.group("s")))
    if m.group("d") is not None:
        d = int(m.group("d"))
        return punctured_disc(d) if m.group("punct") else disc(d)
    if m.group("cd") is not None:
        return annulus(int(m.group("cd")))
    return interpolation(int(m.group("pd")))


EQUATION_NAMES = {"ainf", "bimodule_hom", "hochschild", "homotopy"}


def cmd_strata(args) -> int:
    try:
        space = parse_space(args.space)
    except ValueError as err:
        raise CliError(str(err))
    report = {
        "command": "strata",
        "inputs": args.space,
        "space": repr(space),
        "dimension": dimension(space),
        "witnesses": [],
    }
    strata = enumerate_codim1(space)
    report["count"] = len(strata)
    report["strata"] = [
        {
            "family": lab.family,
            "outer": repr(lab.outer) if lab.outer else None,
            "inner": repr(lab.inner) if lab.inner else None,
            "data": list(lab.data),
        }
        for lab in strata
    ]
    ok = True
    if args.equation:
        if args.equation not in EQUATION_NAMES:
            raise CliError(f"unknown equation {args.equation!r}; choose from {sorted(EQUATION_NAMES)}")
        bij = strata_term_bijection(space, args.equation)
        report["bijection"] = {
            "equation": args.equation,
            "matched": len(bij.pairs),
            "strip_terms": len(bij.strip_terms),
            "passed": bij.passed,
        }
        if not bij.passed:
            report["witnesses"].append(bij.mismatch)
        ok = bij.passed
    report["verdict"] = "pass" if ok else "fail"
    _emit(report, args.json)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_fixture(args) -> int:
    if args.name not in fixture_mod.FIXTURES:
        raise CliError(f"unknown fixture {args.name!r}; available: {sorted(fixture_mod.FIXTURES)}")
    cat = fixture_mod.FIXTURES[args.name]()
    tables = []
    for (fname, n) in fixture_mod.SHIPPED_MORPHISMS:
        if fname == args.name:
            phi = fixture_mod.coproduct_morphism(fname, n)
            tables.append(morphism_to_json(f"coproduct_n{n}", fixture_mod.MORPHISM_BASE_OBJECT[fname], phi))
    payload = json.dumps(category_to_json(cat, morphism_tables=tables or None), sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(payload)
        sys.stdout.write(f"wrote {args.output}\n")
    else:
        sys.stdout.write(payload)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ainfcat", description="Exact checker for categories with higher products")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="schema plus structure verification")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=4, help="largest relation arity checked")
    p.add_argument("--bimodule-bound", type=int, default=3, help="bound on bimodule inputs r+s")
    p.add_argument("--ring", choices=("Z", "F2"), help="override the coefficient ring (Z data reduces mod 2)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("hh", help="truncated cyclic homology with stabilization flags")
    p.add_argument("path")
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--degrees", help="inclusive degree range a..b")
    p.add_argument("--ring", choices=("Z", "F2"), help="override the coefficient ring (Z data reduces mod 2)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hh)

    p = sub.add_parser("generate", help="search for a split-generation certificate")
    p.add_argument("path")
    p.add_argument("--object", required=True)
    p.add_argument("--subcategory", help="comma-separated objects (default: all)")
    p.add_argument("--max-length", type=int, default=2)
    p.add_argument("--emit", help="write the certificate to this file")
    p.add_argument("--replay", help="re-verify a previously emitted certificate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("cardy", help="verify the open/closed consistency square")
    p.add_argument("path")
    p.add_argument("--morphism", help="name of the coproduct-type morphism in the file")
    p.add_argument("--max-length", type=int, default=3)
    p.add_argument("--solve", action="store_true", help="solve for the homotopy instead of assuming zero")
    p.add_argument("--co-sign", type=int, default=1, choices=(1, -1))
    p.add_argument("--telescoping", action="store_true", help="force the self-referential configuration even when map tables are present")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cardy)

    p = sub.add_parser("strata", help="boundary strata tables and term bijections")
    p.add_argument("space", help="R_4, R_2|1|1, R_3^1, C_2^-, P_3, ...")
    p.add_argument("--equation", help="ainf | bimodule_hom | hochschild | homotopy")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("fixture", help="emit a shipped example category as JSON")
    p.add_argument("name")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fixture)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        _check_threads_env()
        code = args.func(args)
    except InputError as err:
        sys.stderr.write(f"input error: {err}\n")
        return EXIT_INPUT
    except CliError as err:
        sys.stderr.write(f"error: {err}\n")
        return err.code
    finally:
        sys.stderr.write(f"elapsed: {time.monotonic() - t0:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
