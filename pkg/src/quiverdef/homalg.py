"""Projective covers, syzygies, Ext groups, stable Hom, and AR machinery.

Ext is taken off minimal projective resolutions (covers of tops), which keeps
the corpus computations small.  The stable-category syzygy strips projective
summands at every stage; the internal resolution used for Ext does not strip
(the covers stay minimal either way, the kernels are just carried whole).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import Matrix, kernel, rank
from .algebra import FiniteDimAlgebra
from . import reps as R
from .reps import ModuleMap, Representation


class NotSelfInjective(RuntimeError):
    pass


class OrbitInconclusive(RuntimeError):
    """An isomorphism test came back unknown during an orbit probe."""


@dataclass
class ProjectivePresentation:
    module: Representation
    cover: Representation
    surjection: ModuleMap           # cover -> module
    inclusion: ModuleMap            # syzygy -> cover
    syzygy: Representation
    multiplicities: tuple[int, ...]  # copies of projective(i) in the cover


def _generators_of_top(m: Representation) -> list[tuple[int, np.ndarray]]:
    """Per-vertex preimages of a top basis: (vertex, coordinate vector).

    Complement coordinates of the radical span are the deterministic choice.
    """
    rad = R.radical_spans(m)
    gens = []
    for i in range(m.algebra.n_vertices):
        piv = R.rref(rad[i].T, m.algebra.p)[1] if rad[i].size else ()
        comp = [j for j in range(m.dims[i]) if j not in set(piv)]
        for j in comp:
            v = np.zeros(m.dims[i], dtype=np.int64)
            v[j] = 1
            gens.append((i, v))
    return gens


def projective_cover(m: Representation) -> ProjectivePresentation:
    algebra = m.algebra
    p = algebra.p
    gens = _generators_of_top(m)
    mult = [0] * algebra.n_vertices
    for i, _ in gens:
        mult[i] += 1
    # cover = direct sum of projective(i), one copy per generator, in gens order
    projs = [R.projective(algebra, i) for i, _ in gens]
    cover = None
    for pr in projs:
        cover = pr if cover is None else R.direct_sum(cover, pr)
    if cover is None:
        cover = R.zero_rep(algebra)
    # surjection blocks: generator of each copy -> chosen preimage, extended by paths
    basis_by_vertex = [[] for _ in range(algebra.n_vertices)]  # (copy, algebra basis idx)
    offsets = []
    for c, (i, _) in enumerate(gens):
        for j in range(algebra.dim):
            if int(algebra.basis_source[j]) == i:
                basis_by_vertex[int(algebra.basis_target[j])].append((c, j))
    blocks = []
    for v in range(algebra.n_vertices):
        cols = []
        for c, j in basis_by_vertex[v]:
            i, gen = gens[c]
            x = gen
            for a in algebra.basis_paths[j][1]:
                x = m.mats[a].apply(x)
            cols.append(x)
        arr = (
            np.stack(cols, axis=1) % p
            if cols
            else np.zeros((m.dims[v], 0), dtype=np.int64)
        )
        blocks.append(Matrix(arr, p))
    pi = ModuleMap(cover, m, blocks, check=True)
    if not pi.is_surjective():
        raise AssertionError("projective cover surjection failed")
    ker_spans = [b.kernel().a for b in pi.blocks]
    syz, incl = R.sub_representation(cover, ker_spans)
    return ProjectivePresentation(m, cover, pi, incl, syz, tuple(mult))


def resolution(m: Representation, n: int) -> list[ProjectivePresentation]:
    """Minimal resolution stages P_0 -> ... with kernels carried whole."""
    out = []
    cur = m
    for _ in range(n):
        pp = projective_cover(cur)
        out.append(pp)
        cur = pp.syzygy
    return out


@dataclass
class StripResult:
    core: Representation
    summands: list[int]  # vertex indices of split projective summands


def strip_projectives(m: Representation) -> StripResult:
    """Split off projective summands via the top-pairing, to a fixed point."""
    algebra = m.algebra
    summands: list[int] = []
    cur = m
    while True:
        hit = None
        for i in range(algebra.n_vertices):
            pi = R.projective(algebra, i)
            if pi.total_dim == 0:
                continue
            fs = R.hom_space(pi, cur)
            if not fs:
                continue
            gs = R.hom_space(cur, pi)
            if not gs:
                continue
            gen_pos = R.projective_generator_position(algebra, i)
            found = None
            for f in fs:
                for g in gs:
                    comp = g.compose(f)  # End(P_i)
                    lam = int(comp.blocks[i].a[gen_pos, gen_pos])
                    if lam % algebra.p:
                        found = (f, g)
                        break
                if found:
                    break
            if found:
                hit = (i, found)
                break
        if hit is None:
            return StripResult(cur, summands)
        i, (f, g) = hit
        gf = g.compose(f)
        gf_inv = ModuleMap(
            gf.source, gf.target, [b.inverse() for b in gf.blocks], check=False
        )
        # e = f (g f)^{-1} g is an idempotent with image a copy of P_i
        e = f.compose(gf_inv).compose(g)
        ker_spans = [b.kernel().a for b in e.blocks]
        cur, _ = R.sub_representation(cur, ker_spans)
        summands.append(i)


def syzygy(m: Representation, n: int = 1) -> Representation:
    """Omega^n m in the stable category: strip projective summands each stage."""
    cur = strip_projectives(m).core
    for _ in range(n):
        if cur.total_dim == 0:
            return cur
        pp = projective_cover(cur)
        cur = strip_projectives(pp.syzygy).core
    return cur


def ext_dim(m: Representation, n: Representation, deg: int, want_basis: bool = False):
    """dim Ext^deg(m, n); for deg = 1 optionally coset representatives.

    Ext^deg = Hom(Omega^deg m, n) modulo restrictions along Omega^deg m -> P_{deg-1}.
    """
    if deg < 0:
        raise ValueError("degree must be >= 0")
    if deg == 0:
        d = R.hom_dim(m, n)
        return (d, []) if want_basis else d
    stages = resolution(m, deg)
    omega = stages[-1].syzygy
    incl = stages[-1].inclusion
    h1 = R.hom_space(omega, n)
    if not h1:
        return (0, []) if want_basis else 0
    h0 = R.hom_space(stages[-1].cover, n)
    restricted = np.stack([g.compose(incl).vec() for g in h0], axis=1) if h0 else None
    p = m.algebra.p
    if restricted is None:
        dim = len(h1)
        reps_idx = list(range(len(h1)))
    else:
        sub_rank = rank(restricted, p)
        dim = len(h1) - sub_rank
        vecs = np.stack([f.vec() for f in h1], axis=1)
        from .gf import quotient_representatives

        reps_idx = quotient_representatives(restricted, vecs, p)
    if want_basis:
        return dim, [h1[j] for j in reps_idx]
    return dim


def stable_hom_dim(m: Representation, n: Representation) -> int:
    """dim of Hom(m, n) modulo maps factoring through a projective."""
    homs = R.hom_space(m, n)
    if not homs:
        return 0
    pp = projective_cover(n)
    lifts = R.hom_space(m, pp.cover)
    if not lifts:
        return len(homs)
    p = m.algebra.p
    through = np.stack([pp.surjection.compose(f).vec() for f in lifts], axis=1)
    return len(homs) - rank(through, p)


def stable_end_dim(m: Representation) -> int:
    return stable_hom_dim(m, m)


# -- Nakayama, self-injectivity, AR translate ---------------------------------


def _hom_to_regular_as_opposite_module(m: Representation):
    """Hom(m, Lambda) as a representation of the opposite algebra."""
    algebra = m.algebra
    p = algebra.p
    reg = R.regular_left(algebra)
    positions = R.regular_positions(algebra)
    homs = R.hom_space(m, reg)
    opp = algebra.opposite()
    if not homs:
        return R.zero_rep(opp)
    nh = len(homs)
    hom_cols = np.stack([f.vec() for f in homs], axis=1)

    def post_compose_matrix(op: ModuleMap) -> np.ndarray:
        cols = []
        for f in homs:
            g = op.compose(f)
            coords = R.solve(hom_cols, g.vec(), p)
            if coords is None:
                raise AssertionError("hom space not closed under postcomposition")
            cols.append(coords)
        return np.stack(cols, axis=1) % p

    # right multiplication by e_i on the regular module selects source-i basis
    rm = algebra.right_mult_matrices()
    comp_basis = []
    for i in range(algebra.n_vertices):
        blocks = []
        for v in range(algebra.n_vertices):
            rows = positions[v]
            sel = np.diag(
                [1 if int(algebra.basis_source[j]) == i else 0 for j in rows]
            ).astype(np.int64)
            blocks.append(Matrix(sel, p))
        t_i = post_compose_matrix(ModuleMap(reg, reg, blocks, check=False))
        comp_basis.append(kernel((t_i - np.eye(nh, dtype=np.int64)) % p, p))
    dims = [b.shape[1] for b in comp_basis]

    arrow_ops = []
    for a, arrow in enumerate(algebra.arrows):
        blocks = []
        for v in range(algebra.n_vertices):
            rows = positions[v]
            sub = rm[a].a[np.ix_(rows, rows)]
            blocks.append(Matrix(sub, p))
        arrow_ops.append(post_compose_matrix(ModuleMap(reg, reg, blocks, check=False)))

    mats = []
    for a, arrow in enumerate(algebra.arrows):
        # opposite arrow a: target(a) -> source(a)
        src_b = comp_basis[arrow.target]
        tgt_b = comp_basis[arrow.source]
        img = (arrow_ops[a] @ src_b) % p
        coords = R._solve_matrix(tgt_b, img, p)
        if coords is None:
            raise AssertionError("right action leaves the component grading")
        mats.append(Matrix(coords, p))
    return Representation(opp, dims, mats, check=False)


def nakayama(m: Representation) -> Representation:
    """The Nakayama functor: dual of Hom(m, regular module)."""
    return R.dual(_hom_to_regular_as_opposite_module(m))


def injective(algebra: FiniteDimAlgebra, i: int) -> Representation:
    """Injective envelope of the simple at i: dual of the opposite projective."""
    return R.dual(R.projective(algebra.opposite(), i))


def is_self_injective(algebra: FiniteDimAlgebra, seed: int = 0) -> bool:
    def compute():
        for j in range(algebra.n_vertices):
            inj = injective(algebra, j)
            ok = False
            for i in range(algebra.n_vertices):
                verdict, _ = R.is_isomorphic(inj, R.projective(algebra, i), seed=seed)
                if verdict == "yes":
                    ok = True
                    break
            if not ok:
                return False
        return True

    return algebra.cache("self_injective", compute)


def ar_translate(m: Representation) -> Representation:
    """tau = Omega^2 of the Nakayama transform, projectives stripped."""
    if not is_self_injective(m.algebra):
        raise NotSelfInjective("AR translate requires a self-injective algebra")
    return syzygy(nakayama(m), 2)


@dataclass
class OrbitReport:
    preperiod: int | None
    period: int | None
    reached_zero: bool = False
    cap: int = 0

    @property
    def repeated(self) -> bool:
        return self.period is not None


def orbit_probe(m: Representation, functor: str = "omega", cap: int = 24, seed: int = 0) -> OrbitReport:
    """Apply omega or tau repeatedly; report (preperiod, period) or no repetition."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if functor not in ("omega", "tau"):
        raise ValueError("functor must be 'omega' or 'tau'")
    step = (lambda x: syzygy(x, 1)) if functor == "omega" else ar_translate
    seen = [strip_projectives(m).core]
    cur = seen[0]
    for k in range(1, cap + 1):
        cur = step(cur)
        if cur.total_dim == 0:
            return OrbitReport(preperiod=k, period=0, reached_zero=True, cap=cap)
        for j, prev in enumerate(seen):
            verdict, _ = R.is_isomorphic(prev, cur, seed=seed + k)
            if verdict == "unknown":
                raise OrbitInconclusive(
                    f"iso test inconclusive at step {k} against step {j}"
                )
            if verdict == "yes":
                return OrbitReport(preperiod=j, period=k - j, cap=cap)
        seen.append(cur)
    return OrbitReport(preperiod=None, period=None, cap=cap)
