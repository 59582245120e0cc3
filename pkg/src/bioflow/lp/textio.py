"""Human-readable text format for LP models, with an exact round trip.

Layout::

    SENSE minimize
    VARS
    x
    y
    BOUNDS
    x 0 10
    y 0 inf
    CONSTRAINTS
    supply: 1 x + 2.5 y <= 10
    OBJECTIVE
    2 x + 3 y

Numbers are written with 17 significant digits so parse(write(m)) is
bit-exact; variables without a BOUNDS line default to [0, inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ParseError
from .model import INF, LpModel, MAXIMIZE, MINIMIZE, SENSES

_SECTIONS = ("VARS", "BOUNDS", "CONSTRAINTS", "OBJECTIVE")
_OBJ_TERMS_PER_LINE = 6


def _fmt(v: float) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return f"{v:.17g}"


def _terms_text(coeffs: dict[int, float], names: list[str]) -> list[str]:
    tokens: list[str] = []
    first = True
    for j, a in coeffs.items():
        if first:
            tokens += [_fmt(a), names[j]]
            first = False
        elif a >= 0:
            tokens += ["+", _fmt(a), names[j]]
        else:
            tokens += ["-", _fmt(-a), names[j]]
    return tokens


def write_model_text(model: LpModel) -> str:
    model.validate()
    lines = [f"SENSE {model.sense}", "VARS"]
    lines.extend(model.var_names)
    lines.append("BOUNDS")
    for name, lo, hi in zip(model.var_names, model.lb, model.ub):
        lines.append(f"{name} {_fmt(lo)} {_fmt(hi)}")
    lines.append("CONSTRAINTS")
    for row in model.rows:
        tokens = _terms_text(row.coeffs, model.var_names)
        body = " ".join(tokens + [row.sense, _fmt(row.rhs)])
        lines.append(f"{row.name}: {body}")
    lines.append("OBJECTIVE")
    tokens = _terms_text(model.objective, model.var_names)
    for k in range(0, len(tokens), 3 * _OBJ_TERMS_PER_LINE):
        lines.append(" ".join(tokens[k:k + 3 * _OBJ_TERMS_PER_LINE]))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[list[_Token]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = []
        col = 0
        for piece in line.split():
            col = line.index(piece, col)
            tokens.append(_Token(piece, lineno, col + 1))
            col += len(piece)
        if tokens:
            out.append(tokens)
    return out


def _parse_number(tok: _Token) -> float:
    if tok.text == "inf":
        return INF
    if tok.text == "-inf":
        return -INF
    try:
        v = float(tok.text)
    except ValueError:
        raise ParseError(f"expected a number, got {tok.text!r}", tok.line, tok.col)
    if math.isnan(v):
        raise ParseError("NaN is not allowed", tok.line, tok.col)
    return v


def _parse_terms(tokens: list[_Token], model: LpModel) -> dict[int, float]:
    coeffs: dict[int, float] = {}
    k = 0
    sign = 1.0
    expect_term = True
    while k < len(tokens):
        tok = tokens[k]
        if tok.text in ("+", "-"):
            if expect_term and k > 0:
                raise ParseError("dangling sign", tok.line, tok.col)
            sign = 1.0 if tok.text == "+" else -1.0
            expect_term = True
            k += 1
            continue
        coef = sign * _parse_number(tok)
        k += 1
        if k >= len(tokens):
            raise ParseError("coefficient without a variable", tok.line, tok.col)
        vtok = tokens[k]
        try:
            j = model.var_index(vtok.text)
        except KeyError:
            raise ParseError(f"unknown variable {vtok.text!r}", vtok.line, vtok.col)
        coeffs[j] = coeffs.get(j, 0.0) + coef
        sign = 1.0
        expect_term = False
        k += 1
    if expect_term and tokens:
        raise ParseError("dangling sign", tokens[-1].line, tokens[-1].col)
    return {j: a for j, a in coeffs.items() if a != 0.0}


def parse_model_text(text: str) -> LpModel:
    lines = _tokenize(text)
    if not lines:
        raise ParseError("empty document", 1, 1)
    head = lines[0]
    if head[0].text != "SENSE" or len(head) != 2:
        raise ParseError("expected 'SENSE minimize|maximize'", head[0].line, head[0].col)
    if head[1].text not in (MINIMIZE, MAXIMIZE):
        raise ParseError(f"unknown sense {head[1].text!r}", head[1].line, head[1].col)
    model = LpModel(sense=head[1].text)

    section = None
    bounded: set[str] = set()
    pending_bounds: dict[str, tuple[float, float]] = {}
    objective_tokens: list[_Token] = []
    for tokens in lines[1:]:
        first = tokens[0]
        if len(tokens) == 1 and first.text in _SECTIONS:
            idx = -1 if section is None else _SECTIONS.index(section)
            if idx + 1 >= len(_SECTIONS) or _SECTIONS[idx + 1] != first.text:
                raise ParseError(f"section {first.text} out of order",
                                 first.line, first.col)
            section = first.text
            continue
        if section == "VARS":
            if len(tokens) != 1:
                raise ParseError("one variable name per line", tokens[1].line,
                                 tokens[1].col)
            try:
                model.add_var(first.text)
            except Exception as exc:
                raise ParseError(str(exc), first.line, first.col)
        elif section == "BOUNDS":
            if len(tokens) != 3:
                raise ParseError("expected 'name lower upper'", first.line, first.col)
            if first.text not in model._name_index:
                raise ParseError(f"unknown variable {first.text!r}", first.line,
                                 first.col)
            if first.text in bounded:
                raise ParseError(f"duplicate bounds for {first.text!r}", first.line,
                                 first.col)
            bounded.add(first.text)
            pending_bounds[first.text] = (_parse_number(tokens[1]),
                                          _parse_number(tokens[2]))
        elif section == "CONSTRAINTS":
            if not first.text.endswith(":") or len(first.text) < 2:
                raise ParseError("constraint must start with 'name:'", first.line,
                                 first.col)
            body = tokens[1:]
            sense_pos = next((k for k, t in enumerate(body) if t.text in SENSES), None)
            if sense_pos is None or sense_pos != len(body) - 2:
                raise ParseError("constraint must end with '<=|=|>= rhs'",
                                 first.line, first.col)
            coeffs = _parse_terms(body[:sense_pos], model)
            rhs = _parse_number(body[-1])
            if not math.isfinite(rhs):
                raise ParseError("rhs must be finite", body[-1].line, body[-1].col)
            model.add_row(first.text[:-1], coeffs, body[sense_pos].text, rhs)
        elif section == "OBJECTIVE":
            objective_tokens.extend(tokens)
        else:
            raise ParseError(f"unexpected content before any section: {first.text!r}",
                             first.line, first.col)
    if section != "OBJECTIVE":
        raise ParseError("missing sections (document must end in OBJECTIVE)", 1, 1)

    for name, (lo, hi) in pending_bounds.items():
        j = model.var_index(name)
        if lo > hi:
            raise ParseError(f"lower > upper for {name!r}", 1, 1)
        model.lb[j] = lo
        model.ub[j] = hi
    model.set_objective(_parse_terms(objective_tokens, model))
    model.validate()
    return model
