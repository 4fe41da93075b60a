"""Quiver presentations: vertices, arrows, relations, and the file format.

Relation strings compose in function order: in ``g*f`` the path ``f`` acts
first.  A path is stored as a tuple of arrow indices in application order, so
``"l*d*b"`` parses to ``(b, d, l)``.  Every relation is a k-linear combination
of composable paths of length >= 2 sharing one (source, target) pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import tomli


class PresentationError(ValueError):
    """Malformed presentation: unknown names, non-composable or short paths."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class AlgebraPresentation:
    name: str
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    # each relation: tuple of (coeff, path) with path a tuple of arrow indices
    # in application order; coeff a plain int (reduced mod p at build time)
    relations: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]
    relation_strings: tuple[str, ...] = field(default=(), compare=False)
    composition: str = "function"

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise PresentationError(f"unknown arrow name {name!r}")

    def path_source(self, path: tuple[int, ...]) -> int:
        return self.arrows[path[0]].source

    def path_target(self, path: tuple[int, ...]) -> int:
        return self.arrows[path[-1]].target

    def path_name(self, path: tuple[int, ...]) -> str:
        # function-order display: last applied arrow leftmost
        return "*".join(self.arrows[i].name for i in reversed(path)) if path else "e"


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_0-9|]*[A-Za-z_|][A-Za-z_0-9|]*)|(?P<int>\d+)|(?P<op>[*^()+-]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"cannot tokenize relation near {text[pos:]!r}")
        if m.group("name") is not None:
            out.append(("name", m.group("name")))
        elif m.group("int") is not None:
            out.append(("int", int(m.group("int"))))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _RelParser:
    """Grammar: relation := term (('+'|'-') term)*;
    term := [int '*'?] factor ('*' factor)*;
    factor := atom ('^' int)?;  atom := name | '(' product ')'.
    Products are in function order: rightmost factor applies first.
    """

    def __init__(self, pres_arrows: dict[str, tuple[int, int, int]], text: str):
        self.arrows = pres_arrows  # name -> (index, source, target)
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def parse(self):
        terms = []
        sign = 1
        kind, val = self._peek()
        if kind == "op" and val in "+-":
            self._next()
            sign = -1 if val == "-" else 1
        while True:
            coeff, path = self._term()
            terms.append((sign * coeff, path))
            kind, val = self._peek()
            if kind is None:
                break
            if kind == "op" and val in "+-":
                self._next()
                sign = -1 if val == "-" else 1
            else:
                raise PresentationError(f"unexpected token {val!r} in {self.text!r}")
        return terms

    def _term(self):
        coeff = 1
        kind, val = self._peek()
        if kind == "int":
            self._next()
            coeff = val
            kind, val = self._peek()
            if kind == "op" and val == "*":
                self._next()
        factors = [self._factor()]
        while True:
            kind, val = self._peek()
            if kind == "op" and val == "*":
                self._next()
                factors.append(self._factor())
            else:
                break
        # function order: leftmost factor applies last
        path: tuple[int, ...] = ()
        for f in reversed(factors):
            path = self._compose(path, f)
        return coeff, path

    def _factor(self):
        base = self._atom()
        kind, val = self._peek()
        if kind == "op" and val == "^":
            self._next()
            kind, n = self._next()
            if kind != "int" or n < 1:
                raise PresentationError(f"bad exponent in {self.text!r}")
            out: tuple[int, ...] = ()
            for _ in range(n):
                out = self._compose(out, base)
            return out
        return base

    def _atom(self):
        kind, val = self._next()
        if kind == "name":
            if val not in self.arrows:
                raise PresentationError(f"unknown arrow name {val!r} in {self.text!r}")
            return (self.arrows[val][0],)
        if kind == "op" and val == "(":
            # inner product, still function order
            factors = [self._factor()]
            while True:
                kind, val = self._peek()
                if kind == "op" and val == "*":
                    self._next()
                    factors.append(self._factor())
                else:
                    break
            kind, val = self._next()
            if kind != "op" or val != ")":
                raise PresentationError(f"missing ')' in {self.text!r}")
            path: tuple[int, ...] = ()
            for f in reversed(factors):
                path = self._compose(path, f)
            return path
        raise PresentationError(f"unexpected token {val!r} in {self.text!r}")

    def _compose(self, first: tuple[int, ...], then: tuple[int, ...]) -> tuple[int, ...]:
        """Concatenate application-order paths: `first` acts, then `then`."""
        if first and then:
            src_by_idx = {v[0]: (v[1], v[2]) for v in self.arrows.values()}
            t_first = src_by_idx[first[-1]][1]
            s_then = src_by_idx[then[0]][0]
            if t_first != s_then:
                raise PresentationError(
                    f"non-composable path in {self.text!r}: vertex {t_first} != {s_then}"
                )
        return first + then


def make_presentation(
    name: str,
    vertices: list[str],
    arrows: list[tuple[str, str, str]],
    relation_strings: list[str],
    composition: str = "function",
) -> AlgebraPresentation:
    """Resolve names, parse relation strings, and validate admissibility."""
    if composition != "function":
        raise PresentationError(f"unsupported composition convention {composition!r}")
    vtx_index = {v: i for i, v in enumerate(vertices)}
    if len(vtx_index) != len(vertices):
        raise PresentationError("duplicate vertex names")
    arr: list[Arrow] = []
    arr_table: dict[str, tuple[int, int, int]] = {}
    for aname, s, t in arrows:
        if s not in vtx_index or t not in vtx_index:
            raise PresentationError(f"arrow {aname!r} references unknown vertex")
        if aname in arr_table:
            raise PresentationError(f"duplicate arrow name {aname!r}")
        arr_table[aname] = (len(arr), vtx_index[s], vtx_index[t])
        arr.append(Arrow(aname, vtx_index[s], vtx_index[t]))

    relations = []
    for text in relation_strings:
        terms = _RelParser(arr_table, text).parse()
        ends = None
        for coeff, path in terms:
            if len(path) < 2:
                raise PresentationError(f"relation term of length < 2 in {text!r}")
            st = (arr[path[0]].source, arr[path[-1]].target)
            if ends is None:
                ends = st
            elif ends != st:
                raise PresentationError(f"inconsistent endpoints within relation {text!r}")
        relations.append(tuple(terms))

    return AlgebraPresentation(
        name=name,
        vertices=tuple(vertices),
        arrows=tuple(arr),
        relations=tuple(relations),
        relation_strings=tuple(relation_strings),
        composition=composition,
    )


# -- file format -------------------------------------------------------------


def parse_presentation(text: str) -> AlgebraPresentation:
    """Parse the UTF-8 presentation file format (TOML)."""
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as e:
        raise PresentationError(f"presentation file is not valid TOML: {e}") from e
    alg = data.get("algebra", {})
    vertices = [v["name"] for v in data.get("vertex", [])]
    arrows = [(a["name"], a["source"], a["target"]) for a in data.get("arrow", [])]
    rels = alg.get("relations", data.get("relations", []))
    return make_presentation(
        name=alg.get("name", "algebra"),
        vertices=vertices,
        arrows=arrows,
        relation_strings=list(rels),
        composition=alg.get("composition", "function"),
    )


def serialize_presentation(pres: AlgebraPresentation) -> str:
    lines = ["[algebra]"]
    lines.append(f'name = "{pres.name}"')
    lines.append(f'composition = "{pres.composition}"')
    rels = ", ".join(f'"{r}"' for r in pres.relation_strings)
    lines.append(f"relations = [{rels}]")
    for v in pres.vertices:
        lines.append("")
        lines.append("[[vertex]]")
        lines.append(f'name = "{v}"')
    for a in pres.arrows:
        lines.append("")
        lines.append("[[arrow]]")
        lines.append(f'name = "{a.name}"')
        lines.append(f'source = "{pres.vertices[a.source]}"')
        lines.append(f'target = "{pres.vertices[a.target]}"')
    return "\n".join(lines) + "\n"


def load_presentation(path) -> AlgebraPresentation:
    with open(path, "rb") as fh:
        return parse_presentation(fh.read().decode("utf-8"))
