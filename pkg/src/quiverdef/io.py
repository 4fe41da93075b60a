"""File formats for modules, complexes, and bimodules (TOML, path-relative).

Module files reference an algebra file and give either a string word or an
explicit dimension vector with per-arrow row-major matrices; serialization
round-trips to an equal value.
"""

from __future__ import annotations

import os

import tomli

from .gf import Matrix
from .algebra import FiniteDimAlgebra, build_algebra
from .presentation import PresentationError, load_presentation, serialize_presentation
from . import bimodules as B
from . import complexes as C
from . import reps as R
from .reps import ModuleMap, Representation


class FileFormatError(ValueError):
    pass


_ALGEBRA_CACHE: dict[tuple[str, int], FiniteDimAlgebra] = {}


def load_algebra(path: str, p: int = 2) -> FiniteDimAlgebra:
    key = (os.path.abspath(path), p)
    if key not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[key] = build_algebra(load_presentation(path), p)
    return _ALGEBRA_CACHE[key]


def _read(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomli.load(fh)
    except tomli.TOMLDecodeError as e:
        raise FileFormatError(f"{path}: invalid TOML: {e}") from e


def _resolve(base_path: str, ref: str) -> str:
    return os.path.normpath(os.path.join(os.path.dirname(os.path.abspath(base_path)), ref))


def load_module(path: str, p: int = 2, algebra: FiniteDimAlgebra | None = None) -> Representation:
    data = _read(path)
    sec = data.get("module")
    if sec is None:
        raise FileFormatError(f"{path}: missing [module] section")
    if algebra is None:
        if "algebra" not in sec:
            raise FileFormatError(f"{path}: module file must reference an algebra file")
        algebra = load_algebra(_resolve(path, sec["algebra"]), p)
    if "string" in sec:
        return R.string_module(algebra, sec["string"])
    if "dims" not in sec:
        raise FileFormatError(f"{path}: need either 'string' or 'dims'")
    return R.make_rep(algebra, sec["dims"], data.get("matrices", {}))


def serialize_module(m: Representation, algebra_ref: str, word: str | None = None) -> str:
    lines = ["[module]", f'algebra = "{algebra_ref}"']
    if word is not None:
        lines.append(f'string = "{word}"')
        return "\n".join(lines) + "\n"
    lines.append(f"dims = [{', '.join(str(d) for d in m.dims)}]")
    lines.append("")
    lines.append("[matrices]")
    for a, arrow in enumerate(m.algebra.arrows):
        rows = m.mats[a].a.tolist()
        lines.append(f'"{arrow.name}" = {rows}')
    return "\n".join(lines) + "\n"


def load_complex(path: str, p: int = 2) -> C.BoundedComplex:
    data = _read(path)
    sec = data.get("complex")
    if sec is None or "algebra" not in sec:
        raise FileFormatError(f"{path}: missing [complex] section with an algebra reference")
    algebra = load_algebra(_resolve(path, sec["algebra"]), p)
    terms = {}
    for t in data.get("term", []):
        deg = int(t["degree"])
        if "module" in t:
            terms[deg] = load_module(_resolve(path, t["module"]), p, algebra=None)
        elif "string" in t:
            terms[deg] = R.string_module(algebra, t["string"])
        elif "dims" in t:
            terms[deg] = R.make_rep(algebra, t["dims"], t.get("matrices", {}))
        else:
            raise FileFormatError(f"{path}: term at degree {deg} has no module data")
    diffs = {}
    for d in data.get("differential", []):
        deg = int(d["degree"])
        if deg not in terms or (deg + 1) not in terms:
            raise FileFormatError(f"{path}: differential at {deg} lacks endpoints")
        blocks = [
            Matrix(
                _shape_block(b, terms[deg + 1].dims[i], terms[deg].dims[i]), p
            )
            for i, b in enumerate(d["blocks"])
        ]
        diffs[deg] = ModuleMap(terms[deg], terms[deg + 1], blocks, check=True)
    return C.BoundedComplex(algebra, terms, diffs, check=True)


def _shape_block(raw, rows: int, cols: int):
    import numpy as np

    arr = np.asarray(raw, dtype=np.int64)
    return arr.reshape(rows, cols) if arr.size else np.zeros((rows, cols), dtype=np.int64)


def load_bimodule(path: str, p: int = 2) -> tuple[B.Bimodule, bool]:
    """(bimodule, certify_sides flag)."""
    data = _read(path)
    sec = data.get("bimodule")
    if sec is None:
        raise FileFormatError(f"{path}: missing [bimodule] section")
    left = load_algebra(_resolve(path, sec["left_algebra"]), p)
    right = load_algebra(_resolve(path, sec["right_algebra"]), p)
    env = B.enveloping(left, right)
    rep = R.make_rep(env, sec["dims"], data.get("matrices", {}))
    bim = B.Bimodule(left, right, rep)
    certify = bool(sec.get("certify_sides", False))
    if certify:
        for side in ("left", "right"):
            if not B.one_sided_projective(bim, side):
                raise FileFormatError(f"{path}: {side} restriction is not projective")
    return bim, certify
