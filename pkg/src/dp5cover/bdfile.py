"""Text format for building data and the divisor-class expression parser.

A building-data file looks like::

    surface = "Y4"
    group = "Z2^4"

    [D]
    0101 = h14
    0110 = f3#1, e1

    [L]
    0001 = 2*f1 + f2 - e4
    ...

``[D]`` lists curve names (pencil members carry ``#k``); ``[L]`` holds class
expressions over ``l``, ``e1..e4``, ``f1..f4``, ``h12..h34`` and ``K``.
Elements missing from ``[D]`` have empty divisors.  Every non-trivial
character must appear in ``[L]``.  Comments are whole lines starting with
``#`` (inline ``#`` belongs to pencil member names).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from dp5cover.cover import BuildingData, EffectiveDivisor
from dp5cover.errors import ParseError, StructuralError
from dp5cover.group import N, Character, GroupElement, characters
from dp5cover.lattice import DivisorClass, canonical, exceptional, fibre, line, line_through

IDENTIFIERS: dict[str, DivisorClass] = {"l": line(), "K": canonical()}
for _i in range(1, 5):
    IDENTIFIERS[f"e{_i}"] = exceptional(_i)
    IDENTIFIERS[f"f{_i}"] = fibre(_i)
    for _j in range(_i + 1, 5):
        IDENTIFIERS[f"h{_i}{_j}"] = line_through(_i, _j)

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|([+\-*]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"malformed token {text[start]!r}", start, text)
        num, ident, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("int", num, start))
        elif ident is not None:
            tokens.append(("ident", ident, start))
        else:
            tokens.append(("op", op, start))
        pos = m.end()
    return tokens


class _ExprParser:
    # expr := [sign] term (('+'|'-') term)* ; term := [integer '*'] ident

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of expression", len(self.text), self.text)
        self.i += 1
        return tok

    def parse(self) -> DivisorClass:
        if not self.tokens:
            raise ParseError("empty class expression", 0, self.text)
        sign = 1
        tok = self._peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            sign = -1 if tok[1] == "-" else 1
        total = sign * self._term()
        while self._peek() is not None:
            kind, value, pos = self._next()
            if kind != "op" or value not in "+-":
                raise ParseError(f"expected '+' or '-', got {value!r}", pos, self.text)
            term = self._term()
            total = total + term if value == "+" else total - term
        return total

    def _term(self) -> DivisorClass:
        kind, value, pos = self._next()
        coeff = 1
        if kind == "int":
            coeff = int(value)
            kind2, value2, pos2 = self._next()
            if (kind2, value2) != ("op", "*"):
                raise ParseError(f"expected '*' after coefficient, got {value2!r}", pos2, self.text)
            kind, value, pos = self._next()
        if kind != "ident":
            raise ParseError(f"expected a class name, got {value!r}", pos, self.text)
        if value not in IDENTIFIERS:
            raise ParseError(f"unknown identifier {value!r}", pos, self.text)
        return coeff * IDENTIFIERS[value]


def parse_class_expr(text: str) -> DivisorClass:
    return _ExprParser(text).parse()


@dataclass
class ParsedFile:
    bd: BuildingData
    header: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


_SECTION_RE = re.compile(r"^\[(\w+)\]$")


def parse_bd(text: str, name: str = "") -> ParsedFile:
    header: dict[str, str] = {}
    D: dict[GroupElement, EffectiveDivisor] = {}
    L: dict[Character, DivisorClass] = {}
    warnings: list[str] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line_ = raw.strip()
        if not line_ or line_.startswith("#"):
            continue
        m = _SECTION_RE.match(line_)
        if m:
            section = m.group(1)
            if section not in ("D", "L"):
                raise StructuralError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line_:
            raise StructuralError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line_.split("=", 1))
        if section is None:
            header[key] = value.strip().strip('"')
        elif section == "D":
            try:
                sigma = GroupElement.parse(key)
            except StructuralError as exc:
                raise StructuralError(f"line {lineno}: {exc}") from None
            if sigma.n != N or sigma.is_zero():
                raise StructuralError(f"line {lineno}: D is indexed by non-zero 4-bit elements, got {key}")
            if sigma in D:
                raise StructuralError(f"line {lineno}: D_{key} given twice")
            names = [s for s in (p.strip() for p in value.split(",")) if s]
            try:
                D[sigma] = EffectiveDivisor.parse(names)
            except StructuralError as exc:
                raise StructuralError(f"line {lineno}: D_{key}: {exc}") from None
        else:
            try:
                chi = Character.parse(key)
            except StructuralError as exc:
                raise StructuralError(f"line {lineno}: {exc}") from None
            if chi.n != N or chi.is_trivial():
                raise StructuralError(f"line {lineno}: L is indexed by non-trivial 4-bit characters, got {key}")
            if chi in L:
                raise StructuralError(f"line {lineno}: L_{key} given twice")
            try:
                L[chi] = parse_class_expr(value)
            except ParseError as exc:
                raise ParseError(f"line {lineno}: L_{key}: {exc}") from None
    if header.get("surface", "Y4") != "Y4":
        raise StructuralError(f"unsupported surface {header['surface']!r}")
    if header.get("group", "Z2^4") != "Z2^4":
        raise StructuralError(f"unsupported group {header['group']!r}")
    for key in ("surface", "group"):
        if key not in header:
            warnings.append(f"header field '{key}' missing; assuming default")
    for key in header:
        if key not in ("surface", "group", "name"):
            warnings.append(f"unknown header field '{key}' ignored")
    missing = [c.label() for c in characters(N, nontrivial=True) if c not in L]
    if missing:
        raise StructuralError("[L] is missing characters " + ", ".join(missing))
    bd = BuildingData(D, L, N, header.get("name", name))
    return ParsedFile(bd, header, warnings)


def serialize_bd(bd: BuildingData, expressions: dict[Character, str] | None = None) -> str:
    out = ['surface = "Y4"', 'group = "Z2^4"']
    if bd.name:
        out.append(f'name = "{bd.name}"')
    out += ["", "[D]"]
    for sigma in sorted(bd.D):
        if bd.D[sigma]:
            out.append(f"{sigma} = " + ", ".join(c.name for c in bd.D[sigma].components))
    out += ["", "[L]"]
    for chi in sorted(bd.L):
        expr = (expressions or {}).get(chi) or bd.L[chi].expression()
        if expr == "0":  # the grammar has no bare integers
            expr = "0*l"
        out.append(f"{chi} = {expr}")
    return "\n".join(out) + "\n"


def load_bd(path: str | Path) -> ParsedFile:
    p = Path(path)
    return parse_bd(p.read_text(encoding="utf-8"), name=p.stem)


BUNDLED = ("construction1", "construction2")


def bundled_text(name: str) -> str:
    stem = name[:-3] if name.endswith(".bd") else name
    if stem not in BUNDLED:
        raise StructuralError(f"no bundled dataset {name!r}")
    return resources.files("dp5cover.data").joinpath(f"{stem}.bd").read_text(encoding="utf-8")


def load_bundled(name: str) -> BuildingData:
    stem = name[:-3] if name.endswith(".bd") else name
    return parse_bd(bundled_text(stem), name=stem).bd


def resolve(path: str) -> ParsedFile:
    """Load ``path``; fall back to a bundled dataset of the same name."""
    p = Path(path)
    if p.exists():
        return load_bd(p)
    stem = p.name[:-3] if p.name.endswith(".bd") else p.name
    if stem in BUNDLED and p.parent == Path("."):
        return parse_bd(bundled_text(stem), name=stem)
    raise StructuralError(f"no such file: {path}")
