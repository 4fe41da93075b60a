"""The built-in corpus: the dihedral-type families and their expected tables.

Each family builder emits the exact quiver-with-relations presentation; the
named module lists carry the expected (End, stable End, deformation ring)
values with a source tag so a regression failure says which stored fact broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .presentation import AlgebraPresentation, PresentationError, make_presentation
from .algebra import FiniteDimAlgebra, build_algebra
from . import reps as R
from .reps import Representation


class UnknownCorpusEntry(KeyError):
    pass


class InvalidParameters(ValueError):
    pass


def _d3r(a: int, b: int, c: int, d: int) -> AlgebraPresentation:
    if a < 1 or b < 1 or c < 2 or d < 2:
        raise InvalidParameters("D3R needs a,b >= 1 and c,d >= 2")
    if b == 1:
        arrows = [
            ("beta", "0", "1"),
            ("rho", "1", "1"),
            ("delta", "1", "2"),
            ("lambda", "2", "0"),
            ("xi", "2", "2"),
        ]
        rels = [
            "lambda*xi",
            "xi*delta",
            "delta*rho",
            "rho*beta",
            f"rho^{c} - (beta*lambda*delta)^{a}",
            f"xi^{d} - (delta*beta*lambda)^{a}",
        ]
    else:
        arrows = [
            ("alpha", "0", "0"),
            ("beta", "0", "1"),
            ("rho", "1", "1"),
            ("delta", "1", "2"),
            ("lambda", "2", "0"),
            ("xi", "2", "2"),
        ]
        rels = [
            "alpha*lambda",
            "lambda*xi",
            "xi*delta",
            "delta*rho",
            "rho*beta",
            "beta*alpha",
            f"alpha^{b} - (lambda*delta*beta)^{a}",
            f"rho^{c} - (beta*lambda*delta)^{a}",
            f"xi^{d} - (delta*beta*lambda)^{a}",
        ]
    return make_presentation(f"D3R-{a}-{b}-{c}-{d}", ["0", "1", "2"], arrows, rels)


def _d3q(b: int, c: int, d: int) -> AlgebraPresentation:
    if b < 1 or c < 2 or d < 2:
        raise InvalidParameters("D3Q needs b >= 1 and c,d >= 2")
    arrows = [
        ("alpha", "0", "0"),
        ("beta", "0", "1"),
        ("rho", "1", "1"),
        ("delta", "1", "2"),
        ("lambda", "2", "0"),
    ]
    rels = [
        "alpha*lambda",
        "delta*rho",
        "rho*beta",
        "beta*alpha",
        f"alpha^{c} - (lambda*delta*beta)^{b}",
        f"rho^{d} - (beta*lambda*delta)^{b}",
    ]
    return make_presentation(f"D3Q-{b}-{c}-{d}", ["0", "1", "2"], arrows, rels)


def _d3l(c: int, d: int) -> AlgebraPresentation:
    if c < 2 or d < 2:
        raise InvalidParameters("D3L needs c,d >= 2")
    arrows = [
        ("alpha", "0", "0"),
        ("beta", "0", "1"),
        ("delta", "1", "2"),
        ("lambda", "2", "0"),
    ]
    rels = [
        "alpha*lambda",
        "beta*alpha",
        f"alpha^{d} - (lambda*delta*beta)^{c}",
        f"delta*(beta*lambda*delta)^{c}",
    ]
    return make_presentation(f"D3L-{c}-{d}", ["0", "1", "2"], arrows, rels)


def _d3a2(c: int, d: int) -> AlgebraPresentation:
    if not (c >= d >= 2):
        raise InvalidParameters("D3A2 needs c >= d >= 2")
    arrows = [
        ("beta", "1", "0"),
        ("gamma", "0", "1"),
        ("delta", "0", "2"),
        ("eta", "2", "0"),
    ]
    rels = [
        "gamma*eta",
        "delta*beta",
        f"(beta*gamma)^{c} - (eta*delta)^{d}",
    ]
    return make_presentation(f"D3A2-{c}-{d}", ["0", "1", "2"], arrows, rels)


def _d3b2(b: int, c: int, d: int) -> AlgebraPresentation:
    if b < 1 or c < 1 or b + c <= 2 or d < 2:
        raise InvalidParameters("D3B2 needs b,c >= 1 with b+c > 2 and d >= 2")
    arrows = [
        ("alpha", "1", "1"),
        ("beta", "1", "0"),
        ("gamma", "0", "1"),
        ("delta", "0", "2"),
        ("eta", "2", "0"),
    ]
    rels = [
        "alpha*gamma",
        "beta*alpha",
        "gamma*eta",
        "delta*beta",
        f"alpha^{d} - (gamma*beta)^{b}",
        f"(beta*gamma)^{b} - (eta*delta)^{c}",
    ]
    return make_presentation(f"D3B2-{b}-{c}-{d}", ["0", "1", "2"], arrows, rels)


def _d3d2(a: int, b: int, c: int, d: int) -> AlgebraPresentation:
    if a < 1 or b < 1 or c < 2 or d < 2:
        raise InvalidParameters("D3D2 needs a,b >= 1 and c,d >= 2")
    arrows = [
        ("alpha", "1", "1"),
        ("beta", "1", "0"),
        ("gamma", "0", "1"),
        ("delta", "0", "2"),
        ("eta", "2", "0"),
        ("xi", "2", "2"),
    ]
    rels = [
        "alpha*gamma",
        "beta*alpha",
        "gamma*eta",
        "delta*beta",
        "eta*xi",
        "xi*delta",
        f"alpha^{c} - (gamma*beta)^{a}",
        f"(beta*gamma)^{a} - (eta*delta)^{b}",
        f"xi^{d} - (delta*eta)^{b}",
    ]
    return make_presentation(f"D3D2-{a}-{b}-{c}-{d}", ["0", "1", "2"], arrows, rels)


FAMILIES = {
    "D3R": (_d3r, 4),
    "D3Q": (_d3q, 3),
    "D3L": (_d3l, 2),
    "D3A2": (_d3a2, 2),
    "D3B2": (_d3b2, 3),
    "D3D2": (_d3d2, 4),
}

TRIVIAL = ("trivial", None)
T_SQUARED = ("truncated", 2)

# module spec: ("word", text) or ("matrix", dims, {arrow: rows})
_UNISERIAL_D3R = {
    "S0": ("simple", 0),
    "S1": ("simple", 1),
    "S2": ("simple", 2),
    "0/1": ("word", "beta"),
    "1/2": ("word", "delta"),
    "2/0": ("word", "lambda"),
    "0/1/2": ("word", "delta*beta"),
    "1/2/0": ("word", "lambda*delta"),
    "2/0/1": ("word", "beta*lambda"),
}

_MODULES_3B_SHAPE = {
    "S0": ("simple", 0),
    "S1": ("simple", 1),
    "S2": ("simple", 2),
    "0/1": ("word", "gamma"),
    "1/0": ("word", "beta"),
    "0/2": ("word", "delta"),
    "2/0": ("word", "eta"),
    # non-uniserial diagrams ship as explicit matrices, validated by top/socle
    "0/(1+2)": ("matrix", (1, 1, 1), {"gamma": [[1]], "delta": [[1]]}),
    "(1+2)/0": ("matrix", (1, 1, 1), {"beta": [[1]], "eta": [[1]]}),
}


def _expected(table: dict[str, tuple], source: str) -> dict:
    return {
        name: {"end_dim": 1, "stable_end_dim": 1, "verdict": v, "order": o, "source": source}
        for name, (v, o) in table.items()
    }


_EXPECTED_TABLES = {
    ("D3R", (1, 2, 2, 2)): (
        _UNISERIAL_D3R,
        _expected(
            {
                "S0": T_SQUARED,
                "S1": T_SQUARED,
                "S2": T_SQUARED,
                "0/1": TRIVIAL,
                "1/2": TRIVIAL,
                "2/0": TRIVIAL,
                "0/1/2": TRIVIAL,
                "1/2/0": TRIVIAL,
                "2/0/1": TRIVIAL,
            },
            "D(3R)^{1,2,2,2} scalar-endomorphism table: k for length 2 or 3, k[[t]]/(t^2) for simples",
        ),
    ),
    ("D3Q", (2, 2, 2)): (
        _UNISERIAL_D3R,
        _expected(
            {
                "S0": T_SQUARED,
                "S1": T_SQUARED,
                "S2": TRIVIAL,
                "0/1": TRIVIAL,
                "1/2": TRIVIAL,
                "2/0": TRIVIAL,
                "0/1/2": T_SQUARED,
                "1/2/0": T_SQUARED,
                "2/0/1": T_SQUARED,
            },
            "D(3Q)^{2,2,2} scalar-endomorphism table: k for S2 and length 2, k[[t]]/(t^2) for S0, S1 and length 3",
        ),
    ),
    ("D3B2", (2, 2, 2)): (
        _MODULES_3B_SHAPE,
        _expected(
            {
                "S0": TRIVIAL,
                "S1": T_SQUARED,
                "S2": TRIVIAL,
                "0/1": T_SQUARED,
                "1/0": T_SQUARED,
                "0/2": T_SQUARED,
                "2/0": T_SQUARED,
                "0/(1+2)": TRIVIAL,
                "(1+2)/0": TRIVIAL,
            },
            "D(3B)_2^{2,2,2} scalar-endomorphism table: k for S0, S2 and length 3, k[[t]]/(t^2) for S1 and length 2",
        ),
    ),
    ("D3D2", (1, 2, 2, 2)): (
        _MODULES_3B_SHAPE,
        _expected(
            {
                "S0": TRIVIAL,
                "S1": T_SQUARED,
                "S2": T_SQUARED,
                "0/1": TRIVIAL,
                "1/0": TRIVIAL,
                "0/2": T_SQUARED,
                "2/0": T_SQUARED,
                "0/(1+2)": TRIVIAL,
                "(1+2)/0": TRIVIAL,
            },
            "D(3D)_2^{1,2,2,2} scalar-endomorphism table: k for S0, 0/1, 1/0 and length 3, k[[t]]/(t^2) otherwise",
        ),
    ),
}


_ALGEBRA_CACHE: dict[tuple[str, tuple[int, ...], int], FiniteDimAlgebra] = {}


@dataclass
class CorpusEntry:
    family: str
    params: tuple[int, ...]
    presentation: AlgebraPresentation
    module_specs: dict[str, tuple]
    expected: dict[str, dict]

    @property
    def name(self) -> str:
        return f"{self.family}^{{{','.join(map(str, self.params))}}}"

    def algebra(self, p: int = 2) -> FiniteDimAlgebra:
        key = (self.family, self.params, p)
        if key not in _ALGEBRA_CACHE:
            _ALGEBRA_CACHE[key] = build_algebra(self.presentation, p)
        return _ALGEBRA_CACHE[key]

    def build_module(self, algebra: FiniteDimAlgebra, name: str) -> Representation:
        spec = self.module_specs[name]
        if spec[0] == "simple":
            return R.simple(algebra, spec[1])
        if spec[0] == "word":
            return R.string_module(algebra, spec[1])
        _, dims, mats = spec
        m = R.make_rep(algebra, dims, mats)
        _validate_diagram(m, name)
        return m

    def modules(self, algebra: FiniteDimAlgebra) -> dict[str, Representation]:
        return {name: self.build_module(algebra, name) for name in self.module_specs}


def _validate_diagram(m: Representation, name: str):
    """Non-uniserial diagram entries are validated against their top/socle."""
    top, socle, _ = R.top_socle(m)
    if name == "0/(1+2)":
        want = ((1, 0, 0), (0, 1, 1))
    elif name == "(1+2)/0":
        want = ((0, 1, 1), (1, 0, 0))
    else:
        return
    if (top.dims, socle.dims) != want:
        raise AssertionError(f"{name}: top/socle {(top.dims, socle.dims)} != {want}")


def corpus_list() -> list[str]:
    return sorted(FAMILIES)


def corpus_get(family: str, *params: int) -> CorpusEntry:
    if family not in FAMILIES:
        raise UnknownCorpusEntry(f"unknown corpus family {family!r}; know {corpus_list()}")
    builder, arity = FAMILIES[family]
    if len(params) != arity:
        raise InvalidParameters(f"{family} takes {arity} parameters, got {len(params)}")
    pres = builder(*params)
    key = (family, tuple(params))
    if key in _EXPECTED_TABLES:
        specs, expected = _EXPECTED_TABLES[key]
    elif family in ("D3R", "D3Q", "D3L"):
        specs, expected = _UNISERIAL_D3R, {}
    elif family in ("D3B2", "D3D2"):
        specs, expected = _MODULES_3B_SHAPE, {}
    else:
        specs, expected = (
            {f"S{i}": ("simple", i) for i in range(3)},
            {},
        )
    return CorpusEntry(family, tuple(params), pres, dict(specs), dict(expected))


def acceptance_table_entries() -> list[CorpusEntry]:
    """The four algebras whose 9-module tables are pinned."""
    return [corpus_get(f, *ps) for f, ps in _EXPECTED_TABLES]


def small_grid() -> list[CorpusEntry]:
    """Every family at all valid parameter tuples with entries <= 3."""
    out = []
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            for c in (2, 3):
                for d in (2, 3):
                    out.append(corpus_get("D3R", a, b, c, d))
    for b in (1, 2, 3):
        for c in (2, 3):
            for d in (2, 3):
                out.append(corpus_get("D3Q", b, c, d))
    for c in (2, 3):
        for d in (2, 3):
            out.append(corpus_get("D3L", c, d))
    for c in (2, 3):
        for d in (2, 3):
            if c >= d:
                out.append(corpus_get("D3A2", c, d))
    for b in (1, 2, 3):
        for c in (1, 2, 3):
            if b + c <= 2:
                continue
            for d in (2, 3):
                out.append(corpus_get("D3B2", b, c, d))
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            for c in (2, 3):
                for d in (2, 3):
                    out.append(corpus_get("D3D2", a, b, c, d))
    return out
