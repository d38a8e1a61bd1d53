"""JSON and CSV interchange.  Output is deterministic: keys and items are sorted."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .cyclo import CycScalar
from .frames import GeneratorSet
from .framelet_sets import BallUnionSet, MultiframeletSet
from .functions import Atom, PFunction
from .padic import Ball, PAdic, check_prime
from .tables import CoefficientTable, Tail


class FieldError(ValueError):
    """Malformed input; ``field`` is a path such as ``atoms[2].ball.gamma``."""

    def __init__(self, field: str, problem: str):
        super().__init__(f"{field}: {problem}")
        self.field = field


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# -- writers ----------------------------------------------------------------


def rational_doc(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def padic_doc(x: PAdic) -> dict:
    return {"u": str(x.u), "v": x.v}


def ball_doc(b: Ball) -> dict:
    return {"gamma": b.gamma, "center": padic_doc(b.center)}


def scalar_doc(c: CycScalar) -> dict:
    return {"terms": [{"q": rational_doc(q), "h": h, "r": rational_doc(r)} for h, r, q in c.terms]}


def function_doc(f: PFunction) -> dict:
    return {
        "p": f.p,
        "atoms": [{"coeff": scalar_doc(at.coeff), "b": padic_doc(at.b), "ball": ball_doc(at.ball)} for at in f.atoms],
    }


def table_doc(t: CoefficientTable) -> dict:
    entries = [
        {"l": i.l, "j": i.j, "a": padic_doc(i.a), "coeff": scalar_doc(c)} for i, c in t.sorted_items()
    ]
    tail = None
    if t.tail is not None:
        terms = []
        for (l, a), amp in t.tail.sorted_items():
            m = amp.abs2()
            q = m.as_fraction()
            terms.append(
                {"l": l, "a": padic_doc(a), "m": rational_doc(q) if q is not None else scalar_doc(m), "amp": scalar_doc(amp)}
            )
        tail = {"j_min": t.tail.j_min, "terms": terms}
    return {"p": t.p, "entries": entries, "tail": tail}


def generators_doc(g: GeneratorSet) -> dict:
    return {"p": g.p, "label": g.label, "generators": [function_doc(f) for f in g.generators]}


def set_doc(s: MultiframeletSet) -> dict:
    return {"p": s.p, "parts": [{"balls": [ball_doc(b) for b in part.balls]} for part in s.parts]}


def table_csv(t: CoefficientTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["l", "j", "a", "coeff_re", "coeff_im", "abs2"])
    for i, c in t.sorted_items():
        z = complex(c)
        w.writerow([i.l, i.j, str(i.a.to_fraction()), repr(z.real), repr(z.imag), repr(float(c.abs2()))])
    return buf.getvalue()


# -- readers ----------------------------------------------------------------


def _get(doc, key, field: str):
    if not isinstance(doc, dict):
        raise FieldError(field, "expected an object")
    if key not in doc:
        raise FieldError(f"{field}.{key}" if field else key, "missing")
    return doc[key]


def _int(x, field: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FieldError(field, f"expected an integer, got {x!r}")
    return x


def _list(x, field: str) -> list:
    if not isinstance(x, list):
        raise FieldError(field, "expected a list")
    return x


def _join(field: str, key: str) -> str:
    return f"{field}.{key}" if field else key


def parse_rational(x, field: str) -> Fraction:
    if isinstance(x, bool):
        raise FieldError(field, "expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise FieldError(field, "expected a rational string 'num/den'")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise FieldError(field, f"bad rational {x!r}") from None


def parse_padic(doc, p: int, field: str) -> PAdic:
    u = _get(doc, "u", field)
    v = _int(_get(doc, "v", field), _join(field, "v"))
    try:
        u = int(u)
    except (TypeError, ValueError):
        raise FieldError(_join(field, "u"), f"expected an integer string, got {u!r}") from None
    return PAdic.make(p, u, v)


def parse_ball(doc, p: int, field: str) -> Ball:
    gamma = _int(_get(doc, "gamma", field), _join(field, "gamma"))
    center = parse_padic(_get(doc, "center", field), p, _join(field, "center"))
    return Ball.make(gamma, center)


def parse_scalar(doc, p: int, field: str) -> CycScalar:
    if isinstance(doc, (int, str)) and not isinstance(doc, bool):
        return CycScalar.rational(p, parse_rational(doc, field))
    terms = _list(_get(doc, "terms", field), _join(field, "terms"))
    items = []
    for i, t in enumerate(terms):
        f = f"{_join(field, 'terms')}[{i}]"
        h = _int(_get(t, "h", f), f + ".h")
        if h not in (0, 1):
            raise FieldError(f + ".h", "must be 0 or 1")
        r = parse_rational(_get(t, "r", f), f + ".r")
        q = parse_rational(_get(t, "q", f), f + ".q")
        items.append((h, r, q))
    try:
        return CycScalar.from_terms(p, items)
    except ValueError as exc:
        raise FieldError(_join(field, "terms"), str(exc)) from None


def parse_prime(doc, field: str = "") -> int:
    p = _int(_get(doc, "p", field), _join(field, "p"))
    try:
        check_prime(p)
    except ValueError as exc:
        raise FieldError(_join(field, "p"), str(exc)) from None
    return p


def parse_function(doc, field: str = "", p: int | None = None) -> PFunction:
    if p is None or (isinstance(doc, dict) and "p" in doc):
        q = parse_prime(doc, field)
        if p is not None and q != p:
            raise FieldError(_join(field, "p"), f"prime {q} differs from {p}")
        p = q
    atoms = []
    for i, a in enumerate(_list(_get(doc, "atoms", field), _join(field, "atoms"))):
        f = f"{_join(field, 'atoms')}[{i}]"
        coeff = parse_scalar(_get(a, "coeff", f), p, f + ".coeff")
        b = parse_padic(a["b"], p, f + ".b") if isinstance(a, dict) and "b" in a else PAdic.zero(p)
        ball = parse_ball(_get(a, "ball", f), p, f + ".ball")
        atoms.append(Atom.make(coeff, b, ball))
    return PFunction(p, atoms)


def parse_table(doc, field: str = "") -> CoefficientTable:
    p = parse_prime(doc, field)
    entries = {}
    for i, e in enumerate(_list(_get(doc, "entries", field), _join(field, "entries"))):
        f = f"{_join(field, 'entries')}[{i}]"
        l = _int(_get(e, "l", f), f + ".l")
        j = _int(_get(e, "j", f), f + ".j")
        a = parse_padic(_get(e, "a", f), p, f + ".a")
        if not a.in_ip():
            raise FieldError(f + ".a", "translation must equal its fractional part")
        entries[(l, j, a)] = parse_scalar(_get(e, "coeff", f), p, f + ".coeff")
    tail = None
    tdoc = doc.get("tail") if isinstance(doc, dict) else None
    if tdoc is not None:
        tf = _join(field, "tail")
        j_min = _int(_get(tdoc, "j_min", tf), tf + ".j_min")
        amps = {}
        for i, t in enumerate(_list(_get(tdoc, "terms", tf), tf + ".terms")):
            f = f"{tf}.terms[{i}]"
            l = _int(_get(t, "l", f), f + ".l")
            a = parse_padic(_get(t, "a", f), p, f + ".a")
            if "amp" not in t:
                raise FieldError(f + ".amp", "missing (the modulus m alone does not determine the tail)")
            amps[(l, a)] = parse_scalar(t["amp"], p, f + ".amp")
        tail = Tail(j_min, amps)
    return CoefficientTable(p, entries, tail)


def parse_generators(doc, field: str = "") -> GeneratorSet:
    p = parse_prime(doc, field)
    gens = [
        parse_function(g, f"{_join(field, 'generators')}[{i}]", p)
        for i, g in enumerate(_list(_get(doc, "generators", field), _join(field, "generators")))
    ]
    if not gens:
        raise FieldError(_join(field, "generators"), "empty")
    return GeneratorSet(p, tuple(gens), str(doc.get("label", "file")))


def parse_set(doc, field: str = "") -> MultiframeletSet:
    p = parse_prime(doc, field)
    parts = []
    for i, part in enumerate(_list(_get(doc, "parts", field), _join(field, "parts"))):
        f = f"{_join(field, 'parts')}[{i}]"
        balls = [parse_ball(b, p, f"{f}.balls[{k}]") for k, b in enumerate(_list(_get(part, "balls", f), f + ".balls"))]
        if not balls:
            raise FieldError(f + ".balls", "part is empty")
        try:
            parts.append(BallUnionSet(p, tuple(balls)))
        except ValueError as exc:
            raise FieldError(f + ".balls", str(exc)) from None
    if not parts:
        raise FieldError(_join(field, "parts"), "no parts")
    return MultiframeletSet(tuple(parts))
