"""Locating 3-tube modules: boundary search and successor construction.

Boundary modules are found by an increasing-dimension sweep over string
modules testing for tau-period 3 (periodic modules sit in tubes; deeper tube
modules are strictly larger than their boundary, so the first hit is a
boundary module).  Successors are then built as nonsplit extensions:
0 -> tau U0 -> U1 -> U0 -> 0 and 0 -> tau U1 -> U2 -> U0 -> 0, whose extension
spaces are one-dimensional by AR duality when the stable endomorphism ring is
trivial; both facts are verified at runtime rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import Matrix
from .algebra import FiniteDimAlgebra
from . import homalg as H
from . import reps as R
from .reps import Representation


def iter_string_modules(algebra: FiniteDimAlgebra, max_dim: int):
    """Valid string modules in increasing total dimension, deduplicated by
    walk reversal.  Words that violate a relation are silently skipped."""
    arrows = algebra.arrows
    seen = set()
    frontier = [((), v) for v in range(algebra.n_vertices)]
    for length in range(1, max_dim):
        nxt = []
        batch = []
        for word, endv in frontier:
            for ai, arr in enumerate(arrows):
                if arr.source == endv and not (word and word[-1] == (ai, -1)):
                    nxt.append((word + ((ai, +1),), arr.target))
                if arr.target == endv and not (word and word[-1] == (ai, +1)):
                    nxt.append((word + ((ai, -1),), arr.source))
        frontier = []
        for word, endv in nxt:
            rev = tuple((a, -s) for a, s in reversed(word))
            key = min(word, rev)
            if key in seen:
                continue
            seen.add(key)
            # invalid prefixes can still extend to valid words (binomial
            # relations balance across longer walks), so keep every walk
            frontier.append((word, endv))
            try:
                m = R.string_module(algebra, list(word))
            except (R.RelationViolated, R.WordError):
                continue
            batch.append((word, m))
        batch.sort(key=lambda wm: wm[0])
        yield from batch


def string_words_up_to(algebra: FiniteDimAlgebra, max_dim: int):
    return list(iter_string_modules(algebra, max_dim))


def word_name(algebra: FiniteDimAlgebra, word) -> str:
    return "*".join(
        algebra.arrows[a].name + ("^-" if s < 0 else "") for a, s in reversed(word)
    )


@dataclass
class TubeModules:
    boundary: Representation        # U0
    boundary_word: str
    depth2: Representation          # U1
    depth3: Representation          # U2
    tau_boundary: Representation    # tau U0


def find_tube_boundary(
    algebra: FiniteDimAlgebra, max_dim: int = 12, seed: int = 0
) -> tuple[Representation, str]:
    """First tau-period-3 string module in increasing total dimension."""
    for word, m in iter_string_modules(algebra, max_dim):
        core = H.strip_projectives(m).core
        if core.total_dim != m.total_dim:
            continue
        try:
            rep = H.orbit_probe(m, "tau", cap=4, seed=seed)
        except H.OrbitInconclusive:
            continue
        if rep.period == 3 and rep.preperiod == 0 and H.stable_end_dim(m) == 1:
            return m, word_name(algebra, word)
    raise RuntimeError(f"no tau-period-3 boundary module of dim <= {max_dim} found")


def nonsplit_extension(top: Representation, sub: Representation, seed: int = 0) -> Representation:
    """The extension 0 -> sub -> E -> top -> 0 for the unique Ext^1 class.

    Requires dim Ext^1(top, sub) = 1 so that E is well-defined up to
    isomorphism; built as the pushout of the projective presentation of top.
    """
    dim, basis = H.ext_dim(top, sub, 1, want_basis=True)
    if dim != 1:
        raise RuntimeError(f"Ext^1(top, sub) has dimension {dim}, expected 1")
    f = basis[0]  # a map Omega(top) -> sub
    pp = H.projective_cover(top)
    # E = (cover (+) sub) / {(incl(x), -f(x))}
    total = R.direct_sum(pp.cover, sub)
    p = top.algebra.p
    spans = []
    for i in range(top.algebra.n_vertices):
        inc = pp.inclusion.blocks[i].a
        fb = f.blocks[i].a
        col = np.vstack([inc, (-fb) % p])
        spans.append(col)
    quo, _ = R.quotient_representation(total, spans)
    quo.check_relations()
    expected = tuple(a + b for a, b in zip(top.dims, sub.dims))
    if quo.dims != expected:
        raise AssertionError(f"extension dims {quo.dims} != {expected}")
    return quo


def tube_modules(algebra: FiniteDimAlgebra, max_dim: int = 12, seed: int = 0) -> TubeModules:
    u0, word = find_tube_boundary(algebra, max_dim, seed)
    tau_u0 = H.ar_translate(u0)
    u1 = nonsplit_extension(u0, tau_u0, seed)
    tau_u1 = H.ar_translate(u1)
    u2 = nonsplit_extension(u0, tau_u1, seed)
    for name, m in (("U1", u1), ("U2", u2)):
        if H.stable_end_dim(m) != 1:
            raise AssertionError(f"{name} does not have trivial stable endomorphisms")
        rep = H.orbit_probe(m, "tau", cap=4, seed=seed)
        if rep.period != 3 or rep.preperiod != 0:
            raise AssertionError(f"{name} is not tau-periodic of period 3")
    return TubeModules(u0, word, u1, u2, tau_u0)


def omega_leaves_tau_orbit(u0: Representation, seed: int = 0) -> bool:
    """Omega maps the tube to the other one: Omega(U0) avoids U0's tau-orbit."""
    omega = H.syzygy(u0, 1)
    cur = u0
    for _ in range(3):
        verdict, _ = R.is_isomorphic(omega, cur, seed=seed)
        if verdict == "yes":
            return False
        if verdict == "unknown":
            raise H.OrbitInconclusive("iso test inconclusive in tube separation check")
        cur = H.ar_translate(cur)
    return True
