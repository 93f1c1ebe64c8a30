"""Command-line interface.

Every command takes ``--format text|json`` and ``--strict``.  Text output is
rendered from the same payload that ``--format json`` prints, so the two
always agree.  Exit status: 0 pass, 1 verification failure (or a warning
under ``--strict``), 2 structural or parse error.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Callable
from functools import wraps
from pathlib import Path

import click

from dp5cover.analysis import (
    check_theorem1,
    deformations,
    pencil_genus,
    quotient_factorization,
)
from dp5cover.bdfile import ParsedFile, resolve, serialize_bd
from dp5cover.cover import BuildingData, invariants, verify_branch_geometry, verify_pardini
from dp5cover.errors import StructuralError
from dp5cover.group import Character, GroupElement
from dp5cover.lattice import DivisorClass, fibre
from dp5cover.search import SearchConfig, enumerate_building_data

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_STRUCTURAL = 2


def _cls(d: DivisorClass) -> dict:
    return {"coeffs": list(d.coeffs), "expr": d.expression()}


def _mark(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _finish(payload: dict, render: Callable[[dict], list[str]], fmt: str, strict: bool) -> None:
    warnings = payload.setdefault("warnings", [])
    code = EXIT_OK if payload["passed"] else EXIT_FAIL
    if strict and warnings:
        code = EXIT_FAIL
        payload["strict_failure"] = True
    payload["exit_code"] = code
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        lines = render(payload)
        lines += [f"warning: {w}" for w in warnings]
        if payload.get("strict_failure"):
            lines.append(f"strict: {len(warnings)} warning(s) treated as failure")
        click.echo("\n".join(lines))
    sys.exit(code)


def _command(fn):
    """Shared options plus mapping of structural errors to exit status 2."""

    @click.option(
        "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
    )
    @click.option("--strict", is_flag=True, help="Treat any warning as a failure.")
    @wraps(fn)
    def wrapper(*args, fmt: str, strict: bool, **kwargs):
        try:
            payload, render = fn(*args, **kwargs)
        except StructuralError as exc:
            if fmt == "json":
                click.echo(json.dumps({"passed": False, "error": str(exc), "exit_code": EXIT_STRUCTURAL}))
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_STRUCTURAL)
        _finish(payload, render, fmt, strict)

    return wrapper


def _load(path: str) -> tuple[ParsedFile, dict]:
    parsed = resolve(path)
    return parsed, {"file": path, "name": parsed.bd.name, "warnings": list(parsed.warnings)}


# --- payload builders ---------------------------------------------------


def _pardini_payload(bd: BuildingData) -> dict:
    rep = verify_pardini(bd)
    return {
        "passed": rep.passed,
        "reduced": rep.reduced,
        "repeated_curve": rep.repeated_curve.name if rep.repeated_curve else None,
        "trivial_L": [c.label() for c in rep.trivial_L],
        "failures": [c.label() for c in rep.failures()],
        "relations": [
            {
                "chi": r.chi.label(),
                "lhs": _cls(r.lhs),
                "rhs": _cls(r.rhs),
                "sigmas": [s.label() for s in r.sigmas],
                "passed": r.passed,
            }
            for r in rep.relations
        ],
    }


def _branch_payload(bd: BuildingData) -> dict:
    rep = verify_branch_geometry(bd)
    return {
        "passed": rep.passed,
        "violations": list(rep.violations),
        "certificate": rep.certificate.describe() if rep.certificate else None,
    }


def _invariants_payload(bd: BuildingData) -> dict | None:
    try:
        return invariants(bd).as_dict()
    except ArithmeticError:
        return None


def _render_pardini(p: dict) -> list[str]:
    held = sum(r["passed"] for r in p["relations"])
    lines = [f"Pardini relations: {held}/{len(p['relations'])} hold ({_mark(p['passed'])})"]
    for r in p["relations"]:
        over = ", ".join(r["sigmas"])
        if r["passed"]:
            lines.append(f"  chi={r['chi']} ok: 2*L_{r['chi']} = {r['lhs']['expr']} = sum of D over {{{over}}}")
        else:
            lines.append(
                f"  chi={r['chi']} FAIL: 2*L_{r['chi']} = {r['lhs']['expr']} "
                f"but the D sum over {{{over}}} is {r['rhs']['expr']}"
            )
    if p["repeated_curve"]:
        lines.append(f"  branch divisor not reduced: {p['repeated_curve']} is repeated")
    for c in p["trivial_L"]:
        lines.append(f"  L_{c} is trivial")
    return lines


def _render_invariants(inv: dict | None) -> list[str]:
    if inv is None:
        return ["invariants: undefined (some L.(L+K) is odd)"]
    return [
        f"K^2 = {inv['K2']}",
        f"p_g = {inv['pg']}",
        f"q = {inv['q']}",
        f"chi(O_X) = {inv['chi']}",
        f"2K_X = pull-back of {DivisorClass(tuple(inv['two_K_X'])).expression()} {tuple(inv['two_K_X'])}",
    ]


def _header(p: dict, command: str) -> str:
    return f"{command} {p['name'] or p['file']}: {_mark(p['passed'])}"


# --- commands -----------------------------------------------------------


@click.group()
@click.version_option(package_name="artifact", prog_name="dp5cover")
def main() -> None:
    """Building data for Z_2^4-covers of the quintic del Pezzo surface Y4."""


@main.command()
@click.argument("file")
@_command
def verify(file: str):
    """Check the 15 Pardini relations and the branch geometry."""
    parsed, p = _load(file)
    p["pardini"] = _pardini_payload(parsed.bd)
    p["branch"] = _branch_payload(parsed.bd)
    p["passed"] = p["pardini"]["passed"] and p["branch"]["passed"]

    def render(p: dict) -> list[str]:
        b = p["branch"]
        lines = [_header(p, "verify"), *_render_pardini(p["pardini"])]
        lines.append(f"branch geometry: {_mark(b['passed'])}")
        lines += [f"  {v}" for v in b["violations"]]
        if b["certificate"]:
            lines.append(f"  {b['certificate']}")
        return lines

    return p, render


@main.command(name="invariants")
@click.argument("file")
@_command
def invariants_cmd(file: str):
    """K^2, p_g, q and chi(O_X) of the cover."""
    parsed, p = _load(file)
    pardini = verify_pardini(parsed.bd)
    p["pardini_passed"] = pardini.passed
    p["pardini_failures"] = [c.label() for c in pardini.failures()]
    p["invariants"] = _invariants_payload(parsed.bd)
    p["passed"] = pardini.passed and p["invariants"] is not None

    def render(p: dict) -> list[str]:
        lines = [_header(p, "invariants")]
        if not p["pardini_passed"]:
            lines.append("Pardini relations fail at chi=" + ", ".join(p["pardini_failures"] or ["-"]))
        return lines + _render_invariants(p["invariants"])

    return p, render


@main.command()
@click.argument("file")
@_command
def analyze(file: str):
    """Degree-20 criterion, its conclusions and the pencil genera."""
    parsed, p = _load(file)
    bd = parsed.bd
    pardini = verify_pardini(bd)
    report = check_theorem1(bd)
    p.update(report.as_dict())
    p["pardini_passed"] = pardini.passed
    p["pardini_failures"] = [c.label() for c in pardini.failures()]
    p["passed"] = pardini.passed and report.passed
    p["invariants"] = _invariants_payload(bd)
    p["pencil_genera"] = {f"f{i}": pencil_genus(bd, fibre(i)) for i in range(1, 5)}
    if report.conclusions is not None:
        fixed = report.conclusions.fixed_part
        p["fixed_part_description"] = ", ".join(c.describe() for c in fixed) or "empty"

    def render(p: dict) -> list[str]:
        lines = [_header(p, "analyze")]
        if not p["pardini_passed"]:
            lines.append("Pardini relations fail at chi=" + ", ".join(p["pardini_failures"] or ["-"]))
        lines.append("hypotheses:")
        for key, v in p["hypotheses"].items():
            lines.append(f"  {key:<18} {_mark(v['passed'])}  {v['detail']}")
        c = p["conclusions"]
        if c is not None:
            lines.append("conclusions:")
            lines.append(f"  canonical degree d = {c['degree']} (mobile part M^2 = {c['mobile_square']})")
            lines.append(f"  K^2 = {c['K2']}, p_g = {c['pg']}")
            lines.append(f"  fixed part: {p['fixed_part_description']}")
        lines += _render_invariants(p["invariants"])
        genera = " ".join(f"{k}={g}" for k, g in p["pencil_genera"].items())
        lines.append(f"pencil genera: {genera}")
        return lines

    return p, render


@main.command()
@click.argument("file")
@_command
def factorize(file: str):
    """Bidouble cover through which the canonical map factors."""
    parsed, p = _load(file)
    data = quotient_factorization(parsed.bd)
    p.update(data.as_dict())
    p["passed"] = data.all_anticanonical

    def render(p: dict) -> list[str]:
        lines = [_header(p, "factorize")]
        for i in (1, 2, 3):
            d, L = p[f"D{i}"], p[f"L{i}"]
            comps = " + ".join(d["components"]) or "0"
            expr = DivisorClass(tuple(d["class"])).expression()
            lines.append(f"D{i} over {{{', '.join(d['sigmas'])}}} = {comps} ~ {expr} {tuple(d['class'])}")
            expr = DivisorClass(tuple(L["class"])).expression()
            lines.append(f"L{i} = L_{L['chi']} ~ {expr} {tuple(L['class'])}")
        lines.append(f"deg phi_Z = {p['degree_phi_Z']}")
        lines.append(f"all anticanonical: {'yes' if p['all_anticanonical'] else 'no'}")
        return lines

    return p, render


@main.command()
@click.argument("file")
@_command
def deform(file: str):
    """Natural deformations: h0(D_sigma) and h0(D_sigma - L_chi)."""
    parsed, p = _load(file)
    pardini = verify_pardini(parsed.bd)
    p.update(deformations(parsed.bd).as_dict())
    p["pardini_passed"] = pardini.passed
    p["passed"] = pardini.passed

    def render(p: dict) -> list[str]:
        lines = [_header(p, "deform")]
        lines.append("h0(D_sigma): " + " ".join(f"{s}={d}" for s, d in p["h0_D"].items()))
        lines.append("moving sigma: " + (", ".join(p["moving"]) or "none"))
        lines.append(f"base space: {p['base_space']}")
        lines.append(f"sum of h0(D_sigma - L_chi) over chi(sigma) = 1: {p['second_total']}")
        for key, d in p["h0_D_minus_L"].items():
            s, c = key.split(",")
            lines.append(f"  h0(D_{s} - L_{c}) = {d}")
        lines.append(f"galois_only: {'yes' if p['galois_only'] else 'no'}")
        return lines

    return p, render


@main.command()
@click.argument("file")
@_command
def explain(file: str):
    """Spell out the 15 relations 2 L_chi = sum of D_sigma with chi(sigma) = -1."""
    parsed, p = _load(file)
    bd = parsed.bd
    pardini = _pardini_payload(bd)
    for r in pardini["relations"]:
        r["components"] = {
            s: [c.name for c in bd.D[GroupElement.parse(s)].components] for s in r["sigmas"] if bd.D[GroupElement.parse(s)]
        }
        r["L"] = _cls(bd.L[Character.parse(r["chi"])])
    p["relations"] = pardini["relations"]
    p["passed"] = pardini["passed"]

    def render(p: dict) -> list[str]:
        lines = [_header(p, "explain")]
        for r in p["relations"]:
            terms = " + ".join(
                f"D_{s}" + (f" ({' + '.join(names)})" if names else "")
                for s, names in r["components"].items()
            )
            lines.append(
                f"chi = {r['chi']}: 2*L_{r['chi']} = 2*({r['L']['expr']}) = {r['lhs']['expr']}; "
                f"sum over chi(sigma) = -1: {terms or '0'} = {r['rhs']['expr']}; "
                + ("holds" if r["passed"] else "FAILS")
            )
        return lines

    return p, render


def _read_config(path: str) -> SearchConfig:
    p = Path(path)
    if not p.exists():
        raise StructuralError(f"no such config file: {path}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StructuralError(f"config {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise StructuralError(f"config {path}: expected a JSON object")
    try:
        return SearchConfig.from_dict(data)
    except TypeError as exc:
        raise StructuralError(f"config {path}: {exc}") from None


@main.command()
@click.argument("config")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False), help="Output directory.")
@_command
def search(config: str, out_dir: str):
    """Search building data satisfying the degree-20 criterion (JSON CONFIG)."""
    cfg = _read_config(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stream = enumerate_building_data(cfg)
    hits = []
    rows = ["index\tfile\tK2\tfixed_part\tkey"]
    for k, res in enumerate(stream, 1):
        name = f"hit_{k:04d}"
        bd = BuildingData(res.bd.D, res.bd.L, res.bd.n, name)
        (out / f"{name}.bd").write_text(serialize_bd(bd), encoding="utf-8")
        c = res.report.conclusions
        hits.append({"file": f"{name}.bd", "key": res.canonical_form, "K2": c.K2, "fixed_part": len(c.fixed_part)})
        rows.append(f"{k}\t{name}.bd\t{c.K2}\t{len(c.fixed_part)}\t{res.canonical_form}")
    if stream.incomplete:
        rows.append("# incomplete: time budget exhausted")
    (out / "summary.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    p = {
        "config": config,
        "out": str(out),
        "results": len(hits),
        "incomplete": stream.incomplete,
        "stats": dict(stream.stats),
        "hits": hits,
        "passed": True,
        "warnings": ["time budget exhausted; results incomplete"] if stream.incomplete else [],
    }

    def render(p: dict) -> list[str]:
        status = "INCOMPLETE" if p["incomplete"] else "complete"
        lines = [f"search {p['config']}: {p['results']} result(s), {status}; written to {p['out']}"]
        by_k2: dict[int, int] = {}
        for h in p["hits"]:
            by_k2[h["K2"]] = by_k2.get(h["K2"], 0) + 1
        for k2, n in sorted(by_k2.items()):
            lines.append(f"  K^2 = {k2}: {n}")
        return lines

    return p, render


if __name__ == "__main__":  # pragma: no cover
    main()
