"""Form text/JSON parsing and exact JSON serialization.

Text format, one form per line:

    quadpoly n=3 G=[[2,0,0],[0,2,0],[0,0,2]] L=[1,1,1] c=0
    tri 1,2,3

G is the stored doubled Gram matrix; L holds the true linear coefficients
(halves like 1/2 are accepted).  The JSON equivalent uses the same field
names, with rationals as [numerator, denominator] pairs, or {"tri": [...]}
for the shorthand.  All numeric output is exact.
"""

import json
from fractions import Fraction
from typing import List, Union

from .lattice import Coset, IntegralLattice
from .padic import LocalVerdict
from .polynomial import AffineTransform, QuadPoly, triangular_polynomial
from .triangular import RegularityVerdict, TriangularForm

Form = Union[QuadPoly, TriangularForm]


class FormParseError(ValueError):
    """Unparseable form text; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _parse_rational(token: str, pos: int) -> Fraction:
    try:
        if "/" in token:
            num, den = token.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(token))
    except (ValueError, ZeroDivisionError):
        raise FormParseError(f"expected a number, got {token!r}", pos)


def _split_top(body: str) -> List[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur))
    return parts


def _parse_bracket_list(raw: str, pos: int) -> list:
    raw = raw.strip()
    if not raw.startswith("[") or not raw.endswith("]"):
        raise FormParseError("expected a bracketed list", pos)
    body = raw[1:-1].strip()
    if not body:
        return []
    out = []
    offset = pos + 1
    for item in _split_top(body):
        item_s = item.strip()
        if item_s.startswith("["):
            out.append(_parse_bracket_list(item_s, offset))
        else:
            out.append(_parse_rational(item_s, offset))
        offset += len(item) + 1
    return out


def _build_quadpoly(g_rows, l_entries, c, n, pos: int) -> QuadPoly:
    if g_rows is None:
        raise FormParseError("missing G=", pos)
    if l_entries is None:
        raise FormParseError("missing L=", pos)
    gram2 = []
    for row in g_rows:
        if not isinstance(row, list):
            raise FormParseError("G must be a matrix", pos)
        r = []
        for e in row:
            if isinstance(e, Fraction) and e.denominator != 1:
                raise FormParseError("G entries must be integers", pos)
            r.append(int(e))
        gram2.append(tuple(r))
    lin2 = []
    for e in l_entries:
        b = Fraction(e) * 2
        if b.denominator != 1:
            raise FormParseError(
                "L entries must be integers or halves", pos
            )
        lin2.append(int(b))
    if n is not None and n != len(gram2):
        raise FormParseError(f"n={n} does not match G size {len(gram2)}", pos)
    try:
        return QuadPoly(gram2=tuple(gram2), lin2=tuple(lin2), c=c)
    except ValueError as exc:
        raise FormParseError(str(exc), pos)


def parse_form(text: str) -> Form:
    """Parse a form; returns TriangularForm for the shorthand, QuadPoly
    otherwise."""
    s = text.strip()
    if not s:
        raise FormParseError("empty form", 0)
    if s.startswith("{"):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as exc:
            raise FormParseError(f"bad JSON: {exc.msg}", exc.pos)
        return form_from_json(data)
    head, _, rest = s.partition(" ")
    if head == "tri":
        base = text.index(rest) if rest else len(text)
        coeffs = []
        for part in rest.split(","):
            v = _parse_rational(part.strip(), base)
            if v.denominator != 1 or v < 1:
                raise FormParseError("tri coefficients must be positive integers", base)
            coeffs.append(int(v))
            base += len(part) + 1
        if not coeffs:
            raise FormParseError("tri needs at least one coefficient", 0)
        return TriangularForm(tuple(coeffs))
    if head == "quadpoly":
        g_rows = l_entries = nval = None
        cval = 0
        for token in rest.split():
            pos = text.index(token)
            key, eq, raw = token.partition("=")
            if not eq:
                raise FormParseError(f"expected key=value, got {token!r}", pos)
            if key == "G":
                g_rows = _parse_bracket_list(raw, pos + 2)
            elif key == "L":
                l_entries = _parse_bracket_list(raw, pos + 2)
            elif key == "c":
                cval = int(_parse_rational(raw, pos + 2))
            elif key == "n":
                nval = int(_parse_rational(raw, pos + 2))
            else:
                raise FormParseError(f"unknown field {key!r}", pos)
        return _build_quadpoly(g_rows, l_entries, cval, nval, 0)
    raise FormParseError(f"unknown form type {head!r}", 0)


def form_from_json(data: dict) -> Form:
    if "tri" in data:
        coeffs = data["tri"]
        if not all(isinstance(c, int) and c >= 1 for c in coeffs):
            raise FormParseError("tri coefficients must be positive integers", 0)
        return TriangularForm(tuple(coeffs))
    g_rows = [[Fraction(e) for e in row] for row in data.get("G", [])] or None
    l_entries = None
    if "L" in data:
        l_entries = [json_to_rational(e) for e in data["L"]]
    return _build_quadpoly(g_rows, l_entries, int(data.get("c", 0)), data.get("n"), 0)


def to_quadpoly(form: Form) -> QuadPoly:
    if isinstance(form, TriangularForm):
        return triangular_polynomial(form.coeffs)
    return form


def json_to_rational(e) -> Fraction:
    if isinstance(e, int):
        return Fraction(e)
    if isinstance(e, str):
        return _parse_rational(e, 0)
    if isinstance(e, list) and len(e) == 2:
        return Fraction(e[0], e[1])
    raise FormParseError(f"bad rational {e!r}", 0)


def rational_json(x) -> Union[int, list]:
    f = Fraction(x)
    return int(f) if f.denominator == 1 else [f.numerator, f.denominator]


def quadpoly_json(f: QuadPoly) -> dict:
    return {
        "n": f.n,
        "G": [list(row) for row in f.gram2],
        "L": [rational_json(Fraction(e, 2)) for e in f.lin2],
        "c": f.c,
    }


def quadpoly_text(f: QuadPoly) -> str:
    def fmt(e: Fraction) -> str:
        return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"

    g = "[" + ",".join("[" + ",".join(str(e) for e in row) + "]" for row in f.gram2) + "]"
    l = "[" + ",".join(fmt(Fraction(e, 2)) for e in f.lin2) + "]"
    return f"quadpoly n={f.n} G={g} L={l} c={f.c}"


def transform_json(t: AffineTransform) -> dict:
    return {"t": [list(r) for r in t.t], "x0": list(t.x0)}


def local_verdict_json(v: LocalVerdict) -> dict:
    out = {"p": v.p, "soluble": v.soluble, "method": v.method, "witness": None}
    if v.witness is not None:
        vec, modulus, kind = v.witness
        out["witness"] = {"x": list(vec), "modulus": modulus, "kind": kind}
    return out


def regularity_json(v: RegularityVerdict) -> dict:
    out = {"status": v.status, "bound": v.bound, "witness": None}
    if v.witness is not None:
        out["witness"] = {
            "m": v.witness.m,
            "search_bound": v.witness.search_bound,
            "local": [local_verdict_json(lv) for _, lv in sorted(v.witness.local.items())],
        }
    return out


def parse_int_vector(text: str) -> tuple:
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError:
        raise FormParseError(f"expected comma-separated integers, got {text!r}", 0)


def parse_shift_vector(text: str) -> tuple:
    return tuple(_parse_rational(p.strip(), 0) for p in text.split(","))


def parse_gram_matrix(text: str) -> IntegralLattice:
    """Doubled Gram matrix as a JSON array (CLI input for cosets)."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormParseError(f"bad gram matrix JSON: {exc.msg}", exc.pos)
    try:
        return IntegralLattice(tuple(tuple(int(e) for e in row) for row in rows))
    except (TypeError, ValueError) as exc:
        raise FormParseError(f"bad gram matrix: {exc}", 0)


def coset_json(cs: Coset) -> dict:
    return {
        "gram2": [list(r) for r in cs.lattice.gram2],
        "shift": [rational_json(s) for s in cs.shift],
    }
