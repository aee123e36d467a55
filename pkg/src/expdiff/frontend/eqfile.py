"""
eqfile.py
=========
Plain-text equation files: one ``key = value`` assignment per line,
``#`` starts a comment.

    params = eta                  # formal parameters, comma separated
    bindings w = 2*pi*i           # named exact constants (repeatable)
    note = free text

An equation is given in exactly one of three ways:

    n = 2 / L = ... / q = ... / p = ...        (operator form)
    equation = f^2 + ... = q(z)*exp(p(z))      (full form)
    g = ... / h = ... / u = ... / v = ...      (shifted-quadratic form,
    a = ... / b = ... / shift = ...             v optional for synthesis)

``c = ...`` optionally fixes the root of b used by the solver.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from expdiff.algebra.ddoperator import LinOp
from expdiff.algebra.exppoly import ZPoly
from expdiff.algebra.scalars import Scalar
from expdiff.equations.equation import Equation
from expdiff.equations.solver import T31Instance
from expdiff.errors import EquationFileError
from expdiff.frontend.lowering import (
    Session,
    lower_equation,
    lower_operator,
    lower_polynomial,
    lower_scalar,
)
from expdiff.frontend.parser import parse, parse_equation
from expdiff.frontend.printer import format_equation, format_scalar, format_zpoly

__all__ = ["EquationFile", "load_equation_file", "parse_equation_file", "dump_equation_file"]

logger = logging.getLogger(__name__)

OPERATOR_KEYS = ("n", "L", "q", "p")
FULL_KEYS = ("equation",)
QUADRATIC_KEYS = ("g", "h", "u", "v", "a", "b", "shift")
OTHER_KEYS = ("params", "note", "c")
KNOWN_KEYS = OPERATOR_KEYS + FULL_KEYS + QUADRATIC_KEYS + OTHER_KEYS

# (value, line, column of the value)
Entry = Tuple[str, int, int]


@dataclass
class EquationFile:
    """
    A loaded equation file.

    Attributes:
        session:   parameters and bindings declared by the file.
        equation:  the equation, when the file defines one completely.
        instance:  the shifted-quadratic data, for files in that form.
        parts:     g, h, u, a, b, shift of a quadratic-form file (v may be absent).
        c:         optional fixed root of b.
        note:      free-text note, shown in reports.
    """

    session: Session
    equation: Optional[Equation] = None
    instance: Optional[T31Instance] = None
    parts: Dict[str, Union[ZPoly, Scalar]] = field(default_factory=dict)
    c: Optional[Scalar] = None
    note: str = ""
    source: str = "<string>"

    @property
    def is_quadratic_form(self) -> bool:
        return bool(self.parts)

    def require_equation(self) -> Equation:
        if self.equation is None:
            raise EquationFileError(f"{self.source}: no complete equation (is 'v' missing?)")
        return self.equation


def _split(text: str, source: str) -> Tuple[Dict[str, Entry], List[Tuple[str, Entry]]]:
    entries: Dict[str, Entry] = {}
    bindings: List[Tuple[str, Entry]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("bindings ") or stripped.startswith("bindings\t"):
            offset = line.index("bindings") + len("bindings")
            body = line[offset:]
            if "=" not in body:
                raise EquationFileError(f"{source}:{lineno}: expected 'bindings name = value'")
            name, value = body.split("=", 1)
            column = line.index("=", offset) + 2
            bindings.append((name.strip(), (value, lineno, column)))
            continue
        if "=" not in line:
            raise EquationFileError(f"{source}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise EquationFileError(f"{source}:{lineno}: unknown key '{key}'")
        if key in entries:
            raise EquationFileError(f"{source}:{lineno}: duplicate key '{key}'")
        entries[key] = (value, lineno, line.index("=") + 2)
    return entries, bindings


def _params(entries: Dict[str, Entry], source: str) -> List[str]:
    if "params" not in entries:
        return []
    value, lineno, _ = entries["params"]
    names = [name.strip() for name in value.split(",") if name.strip()]
    if len(set(names)) != len(names):
        raise EquationFileError(f"{source}:{lineno}: duplicate parameter in 'params'")
    return names


def parse_equation_file(text: str, source: str = "<string>") -> EquationFile:
    entries, binding_entries = _split(text, source)
    # a bound parameter is a concrete constant, not a formal one
    bound = {name for name, _ in binding_entries}
    params = _params(entries, source)
    for name in params:
        if name in bound:
            logger.info("%s: parameter '%s' is bound to a constant", source, name)
    try:
        session = Session.create([name for name in params if name not in bound])
    except ValueError as exc:
        raise EquationFileError(f"{source}: {exc}") from exc

    for name, (value, lineno, column) in binding_entries:
        if not name.isidentifier():
            raise EquationFileError(f"{source}:{lineno}: invalid binding name '{name}'")
        session.bind(name, lower_scalar(parse(value, lineno, column), session, f"binding '{name}'"))

    def tree(key: str):
        value, lineno, column = entries[key]
        return parse(value, lineno, column)

    note = entries["note"][0].strip() if "note" in entries else ""
    loaded = EquationFile(session=session, note=note, source=source)
    if "c" in entries:
        loaded.c = lower_scalar(tree("c"), session, "c")

    forms = [
        name
        for name, keys in (("operator", OPERATOR_KEYS), ("full", FULL_KEYS), ("quadratic", QUADRATIC_KEYS))
        if any(k in entries for k in keys)
    ]
    if len(forms) > 1:
        raise EquationFileError(f"{source}: mixes the {' and '.join(forms)} forms")
    if not forms:
        raise EquationFileError(f"{source}: no equation given")
    form = forms[0]

    if form == "full":
        value, lineno, column = entries["equation"]
        lhs, rhs = parse_equation(value, lineno, column)
        loaded.equation = lower_equation(lhs, rhs, session, note)

    elif form == "operator":
        missing = [k for k in ("n", "q", "p") if k not in entries]
        if missing:
            raise EquationFileError(f"{source}: missing key(s) {', '.join(missing)}")
        n_text = entries["n"][0].strip()
        if not n_text.isdigit():
            raise EquationFileError(f"{source}:{entries['n'][1]}: n must be an integer, got '{n_text}'")
        L = lower_operator(tree("L"), session) if "L" in entries else None
        loaded.equation = Equation(
            n=int(n_text),
            L=L if L is not None else LinOp.zero(session.domain),
            q=lower_polynomial(tree("q"), session, "q"),
            p=lower_polynomial(tree("p"), session, "p"),
            note=note,
        )

    else:
        domain = session.domain
        missing = [k for k in ("a", "b") if k not in entries]
        if missing:
            raise EquationFileError(f"{source}: missing key(s) {', '.join(missing)}")
        polys = {
            k: lower_polynomial(tree(k), session, k) if k in entries else ZPoly(domain)
            for k in ("g", "h", "u")
        }
        if "shift" in entries:
            shift = lower_scalar(tree("shift"), session, "shift")
        elif polys["g"].is_zero():
            shift = domain.one
        else:
            raise EquationFileError(f"{source}: 'shift' is required when g is nonzero")
        a = lower_scalar(tree("a"), session, "a")
        b = lower_scalar(tree("b"), session, "b")
        loaded.parts = {**polys, "a": a, "b": b, "shift": shift}
        v = lower_polynomial(tree("v"), session, "v") if "v" in entries else None
        if v is not None:
            loaded.instance = T31Instance(g=polys["g"], h=polys["h"], u=polys["u"], v=v, a=a, b=b, shift=shift)
            eq = loaded.instance.equation()
            loaded.equation = Equation(n=eq.n, L=eq.L, q=eq.q, p=eq.p, note=note)

    logger.info("loaded %s (%s form)", source, form)
    return loaded


def load_equation_file(path: Union[str, Path]) -> EquationFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise EquationFileError(f"cannot read {path}: {exc}") from exc
    return parse_equation_file(text, str(path))


def dump_equation_file(loaded: EquationFile) -> str:
    """Canonical text of a loaded file; bindings are already substituted."""
    lines = []
    params = loaded.session.domain.params
    if params:
        lines.append(f"params = {', '.join(params)}")
    if loaded.note:
        lines.append(f"note = {loaded.note}")
    if loaded.equation is not None:
        lines.append(f"equation = {format_equation(loaded.equation)}")
    else:
        for key in ("g", "h", "u"):
            lines.append(f"{key} = {format_zpoly(loaded.parts[key])}")
        for key in ("a", "b", "shift"):
            lines.append(f"{key} = {format_scalar(loaded.parts[key])}")
    if loaded.c is not None:
        lines.append(f"c = {format_scalar(loaded.c)}")
    return "\n".join(lines) + "\n"
