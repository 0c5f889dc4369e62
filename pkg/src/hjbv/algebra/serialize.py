"""Canonical JSON encoding of the exact algebra values.

Rationals are encoded as "p/q" strings so round trips are exact, keys are
sorted, and separators carry no whitespace: equal values always serialize
to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .scalars import GaussRational, Scale
from .series import HbarSeries
from .poly import Poly
from .grassmann import Grassmann
from .states import ExpState


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def to_jsonable(x):
    if isinstance(x, GaussRational):
        return {"im": _frac(x.im), "re": _frac(x.re)}
    if isinstance(x, Scale):
        return {"coef": to_jsonable(x.coef), "hbar": _frac(x.hbar),
                "rad": _frac(x.rad), "twopi": _frac(x.twopi)}
    if isinstance(x, HbarSeries):
        return {"coeffs": {_frac(e): to_jsonable(c)
                           for e, c in sorted(x.coeffs.items())},
                "order": None if x.order is None else _frac(x.order)}
    if isinstance(x, Poly):
        names = x.ctx.even_names
        return [{"coef": to_jsonable(c),
                 "mon": [[names[i], e] for i, e in m]}
                for m, c in sorted(x.terms.items())]
    if isinstance(x, Grassmann):
        names = x.ctx.odd_names
        return [{"coef": to_jsonable(c), "odd": [names[i] for i in m]}
                for m, c in sorted(x.terms.items())]
    if isinstance(x, ExpState):
        c = x.canonical()
        return {"even_deltas": [to_jsonable(d) for d in c.even_deltas],
                "norm": to_jsonable(c.norm),
                "phase": to_jsonable(c.phase),
                "prefactor": to_jsonable(c.prefactor)}
    if isinstance(x, Fraction):
        return _frac(x)
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def canonical_json(x) -> str:
    return json.dumps(to_jsonable(x), sort_keys=True, separators=(",", ":"))


def poly_from_jsonable(ctx, data) -> Poly:
    out = Poly.zero(ctx)
    for term in data:
        c = series_from_jsonable(term["coef"])
        p = Poly.const(ctx, c)
        for name, e in term["mon"]:
            p = p * ctx.var(name) ** e
        out = out + p
    return out


def series_from_jsonable(data) -> HbarSeries:
    order = None if data["order"] is None else _parse_frac(data["order"])
    return HbarSeries({_parse_frac(e): _gauss_from(c)
                       for e, c in data["coeffs"].items()}, order)


def _gauss_from(data) -> GaussRational:
    return GaussRational(_parse_frac(data["re"]), _parse_frac(data["im"]))
