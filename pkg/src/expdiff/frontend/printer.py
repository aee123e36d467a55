"""
printer.py
==========
Render algebra objects in the input grammar, so that printed text parses
back to the same canonical object.  Euler's number prints as ``exp(1)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from expdiff.algebra.ddoperator import LinOp
from expdiff.algebra.exppoly import ExpPoly, ZPoly
from expdiff.algebra.scalars import Scalar, ScalarDomain

__all__ = [
    "format_scalar",
    "format_zpoly",
    "format_exppoly",
    "format_operator",
    "format_equation",
    "join_terms",
]


def _needs_parens(text: str) -> bool:
    """True when ``text`` has a top-level + or - after its first character."""
    depth = 0
    for idx, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and idx > 0:
            return True
    return False


def _wrap(text: str) -> str:
    return f"({text})" if _needs_parens(text) else text


def join_terms(parts: List[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for part in parts[1:]:
        out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return out


def _rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _gaussian(c) -> str:
    re_part = Fraction(int(c.x.numerator), int(c.x.denominator))
    im_part = Fraction(int(c.y.numerator), int(c.y.denominator))
    if im_part == 0:
        return _rational(re_part)
    imag = "i" if im_part == 1 else "-i" if im_part == -1 else f"{_rational(im_part)}*i"
    if re_part == 0:
        return imag
    return join_terms([_rational(re_part), imag])


def _monomial(names: Tuple[str, ...], monom: Tuple[int, ...]) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e)


def _poly(domain: ScalarDomain, poly) -> str:
    parts = []
    for monom, coeff in poly.terms():
        mono = _monomial(domain.names, monom)
        c = _gaussian(coeff)
        if not mono:
            parts.append(c)
        elif c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append(f"-{mono}")
        else:
            parts.append(f"{_wrap(c)}*{mono}")
    return join_terms(parts)


def _frac(domain: ScalarDomain, value) -> str:
    numer = _poly(domain, value.numer)
    if value.denom == value.denom.ring.one:
        return numer
    denom = _poly(domain, value.denom)
    return f"{_wrap(numer)}/({denom})"


def format_scalar(s: Scalar) -> str:
    domain = s.domain
    parts = []
    for arg, coeff in s:
        c = _frac(domain, coeff)
        if not arg:
            parts.append(c)
            continue
        e = f"exp({_frac(domain, arg)})"
        if c == "1":
            parts.append(e)
        elif c == "-1":
            parts.append(f"-{e}")
        else:
            parts.append(f"{_wrap(c)}*{e}")
    return join_terms(sorted(parts, key=lambda p: (p.lstrip("-").startswith("exp"), p.lstrip("-"))))


def format_zpoly(p: ZPoly) -> str:
    parts = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c.is_zero():
            continue
        cs = format_scalar(c)
        zk = "" if k == 0 else "z" if k == 1 else f"z^{k}"
        if not zk:
            parts.append(cs)
        elif cs == "1":
            parts.append(zk)
        elif cs == "-1":
            parts.append(f"-{zk}")
        else:
            parts.append(f"{_wrap(cs)}*{zk}")
    return join_terms(parts)


def _exp_sort_key(item: Tuple[ZPoly, ZPoly]):
    exponent, _ = item
    return -exponent.degree, format_zpoly(exponent)


def format_exppoly(f: ExpPoly) -> str:
    parts = []
    for exponent, coeff in sorted(f.items(), key=_exp_sort_key):
        cs = format_zpoly(coeff)
        if exponent.is_zero():
            parts.append(cs)
            continue
        e = f"exp({format_zpoly(exponent)})"
        if cs == "1":
            parts.append(e)
        elif cs == "-1":
            parts.append(f"-{e}")
        else:
            parts.append(f"{_wrap(cs)}*{e}")
    return join_terms(parts)


def _fterm(shift: Scalar, dorder: int) -> str:
    head = {0: "f", 1: "f'", 2: "f''"}.get(dorder, f"f^({dorder})")
    if shift.is_zero():
        return head if dorder < 3 else f"{head}(z)"
    return f"{head}({join_terms(['z', format_scalar(shift)])})"


def format_operator(L: LinOp) -> str:
    parts = []
    terms = sorted(L.terms, key=lambda t: (t.dorder, format_scalar(t.shift)))
    for term in terms:
        cs = format_exppoly(term.coeff)
        ft = _fterm(term.shift, term.dorder)
        if cs == "1":
            parts.append(ft)
        elif cs == "-1":
            parts.append(f"-{ft}")
        else:
            parts.append(f"{_wrap(cs)}*{ft}")
    if not L.inhom.is_zero():
        parts.append(format_exppoly(L.inhom))
    return join_terms(parts)


def format_equation(eq) -> str:
    """``f^n + L = q*exp(p)`` for an :class:`~expdiff.equations.equation.Equation`."""
    lhs = f"f^{eq.n}"
    if not eq.L.is_zero():
        lhs = join_terms([lhs, format_operator(eq.L)])
    return f"{lhs} = {format_exppoly(eq.rhs())}"
