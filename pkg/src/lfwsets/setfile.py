"""Reader and writer for the line-oriented ``.lfw`` set-description format.

::

    file   := fieldline (blank | comment | setblock)*
    field  := "field" "p=" INT "c=" INT "poly=" INT ("," INT)*
    setblock := "set" NAME NEWLINE (ballline)* "end"
    ballline := "ball" "scale=" INT "center=" EXPR
    EXPR   := "0" | monomial ("+" monomial)*
    monomial := "(" INT ("," INT)* ")@" INT

``#`` starts a comment that runs to the end of the line.  The printer emits
one canonical form, so ``print(parse(print(x))) == print(x)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DomainError, SetFileError
from .field import FieldParams, parse_element
from .sets import Ball, ClopenSet

__all__ = ["SetFile", "parse_setfile", "print_setfile", "read_setfile", "write_setfile"]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*")
_KV = re.compile(r"(\w+)=(\S.*?)(?=\s+\w+=|\s*$)")


@dataclass
class SetFile:
    params: FieldParams
    sets: dict[str, ClopenSet] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def family(self, names) -> list[ClopenSet]:
        out = []
        for n in names:
            if n not in self.sets:
                raise DomainError(f"no set named {n!r}; file defines {', '.join(self.sets) or 'none'}")
            out.append(self.sets[n])
        return out

    def __eq__(self, other):
        if not isinstance(other, SetFile):
            return NotImplemented
        return self.params == other.params and list(self.sets.items()) == list(other.sets.items())


def _fields(body: str, lineno: int, offset: int, required: tuple[str, ...]) -> dict[str, tuple[str, int]]:
    found = {}
    for m in _KV.finditer(body):
        found[m.group(1)] = (m.group(2), offset + m.start(2) + 1)
    missing = [k for k in required if k not in found]
    if missing:
        raise SetFileError(f"missing {', '.join(k + '=' for k in missing)}", lineno, offset + 1)
    extra = [k for k in found if k not in required]
    if extra:
        raise SetFileError(f"unexpected key {extra[0]}=", lineno, found[extra[0]][1])
    return found


def _int(text: str, lineno: int, col: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise SetFileError(f"{what} must be an integer, got {text!r}", lineno, col) from None


def _parse_field(body: str, lineno: int, offset: int) -> FieldParams:
    f = _fields(body, lineno, offset, ("p", "c", "poly"))
    p = _int(f["p"][0], lineno, f["p"][1], "p")
    c = _int(f["c"][0], lineno, f["c"][1], "c")
    poly_text, poly_col = f["poly"]
    poly = tuple(_int(d.strip(), lineno, poly_col, "poly coefficient") for d in poly_text.split(","))
    try:
        return FieldParams(p, c, poly)
    except DomainError as e:
        raise SetFileError(str(e), lineno, 1) from None


def parse_setfile(text: str) -> SetFile:
    params = None
    sets: dict[str, ClopenSet] = {}
    warnings: list[str] = []
    current: str | None = None
    balls: list[Ball] = []
    start = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        indent = len(line) - len(stripped)
        word, _, rest = stripped.partition(" ")
        offset = indent + len(word) + 1
        if params is None:
            if word != "field":
                raise SetFileError("file must start with a 'field' line", lineno, indent + 1)
            params = _parse_field(rest, lineno, offset)
            continue
        if word == "field":
            raise SetFileError("duplicate 'field' line", lineno, indent + 1)
        if word == "set":
            if current is not None:
                raise SetFileError(f"set {current!r} opened at line {start} is not closed", lineno, indent + 1)
            name = rest.strip()
            if not _NAME.fullmatch(name):
                raise SetFileError(f"invalid set name {name!r}", lineno, offset + 1)
            if name in sets:
                raise SetFileError(f"duplicate set name {name!r}", lineno, offset + 1)
            current, balls, start = name, [], lineno
        elif word == "ball":
            if current is None:
                raise SetFileError("'ball' outside a set block", lineno, indent + 1)
            f = _fields(rest, lineno, offset, ("scale", "center"))
            scale = _int(f["scale"][0], lineno, f["scale"][1], "scale")
            center = parse_element(f["center"][0], params, column=f["center"][1], line=lineno)
            top = center.top_index
            if top is not None and top >= scale:
                warnings.append(
                    f"line {lineno}: center has digits at index >= scale={scale}; reduced to "
                    f"{center.truncate(scale).to_expr()}"
                )
            balls.append(Ball(center, scale))
        elif word == "end":
            if current is None:
                raise SetFileError("'end' without a matching 'set'", lineno, indent + 1)
            canon = ClopenSet.from_balls(balls, params)
            if list(canon.balls) != balls:
                warnings.append(f"line {lineno}: set {current!r} was not canonical; rewritten")
            sets[current] = canon
            current = None
        else:
            raise SetFileError(f"unknown keyword {word!r}", lineno, indent + 1)
    if params is None:
        raise SetFileError("missing 'field' line", 1, 1)
    if current is not None:
        raise SetFileError(f"set {current!r} opened at line {start} is not closed", start, 1)
    return SetFile(params, sets, warnings)


def print_setfile(sf: SetFile) -> str:
    P = sf.params
    out = [f"field p={P.p} c={P.c} poly={','.join(str(d) for d in P.modulus)}"]
    for name, S in sf.sets.items():
        out.append(f"set {name}")
        out.extend(f"  {b.to_expr()}" for b in S.balls)
        out.append("end")
    return "\n".join(out) + "\n"


def read_setfile(path) -> SetFile:
    with open(path, encoding="utf-8") as fh:
        return parse_setfile(fh.read())


def write_setfile(sf: SetFile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(print_setfile(sf))
