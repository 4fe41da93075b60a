"""Bimodules as modules over enveloping algebras, tensor functors, stable
equivalences of Morita type, and deformation-invariant transfer checks.

A (Gamma, Lambda)-bimodule is a representation of Gamma (x) Lambda^op whose
vertex (i, j) component is e_i X e_j; one code path (homalg over the
enveloping algebra) serves Hom/Ext/syzygy for bimodules unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import Matrix
from .algebra import FiniteDimAlgebra, tensor_algebras
from . import homalg as H
from . import reps as R
from .reps import ModuleMap, Representation


def enveloping(gamma: FiniteDimAlgebra, lam: FiniteDimAlgebra) -> FiniteDimAlgebra:
    """Gamma (x) Lambda^op, cached per ordered pair."""
    key = ("enveloping", id(lam))
    return gamma.cache(key, lambda: tensor_algebras(gamma, lam.opposite()))


@dataclass
class Bimodule:
    left: FiniteDimAlgebra
    right: FiniteDimAlgebra
    rep: Representation            # over enveloping(left, right)

    def __post_init__(self):
        if self.rep.algebra is not enveloping(self.left, self.right):
            raise ValueError("representation is not over the declared enveloping algebra")

    # -- index plumbing ------------------------------------------------------

    def vertex(self, i: int, j: int) -> int:
        return i * self.right.n_vertices + j

    def comp_dim(self, i: int, j: int) -> int:
        return self.rep.dims[self.vertex(i, j)]

    def left_arrow(self, a: int, j: int) -> int:
        return a * self.right.n_vertices + j

    def right_arrow(self, i: int, b: int) -> int:
        off = len(self.left.arrows) * self.right.n_vertices
        return off + b * self.left.n_vertices + i

    @property
    def total_dim(self) -> int:
        return self.rep.total_dim

    # -- restrictions ----------------------------------------------------------

    def restrict_left(self) -> Representation:
        """Forget the right action: a left module over `left`."""
        return _restrict(self, side="left")

    def restrict_right(self) -> Representation:
        """Forget the left action: a left module over `right.opposite()`."""
        return _restrict(self, side="right")


def _restrict(x: Bimodule, side: str) -> Representation:
    p = x.rep.algebra.p
    if side == "left":
        alg = x.left
        outer, inner = x.left.n_vertices, x.right.n_vertices
        comp = lambda o, i: x.comp_dim(o, i)
        arrow_idx = lambda a, i: x.left_arrow(a, i)
    else:
        alg = x.right.opposite()
        outer, inner = x.right.n_vertices, x.left.n_vertices
        comp = lambda o, i: x.comp_dim(i, o)
        arrow_idx = lambda b, i: x.right_arrow(i, b)
    dims = [sum(comp(o, i) for i in range(inner)) for o in range(outer)]
    offsets = [np.concatenate([[0], np.cumsum([comp(o, i) for i in range(inner)])]) for o in range(outer)]
    mats = []
    for a, arrow in enumerate(alg.arrows):
        m = np.zeros((dims[arrow.target], dims[arrow.source]), dtype=np.int64)
        for i in range(inner):
            blk = x.rep.mats[arrow_idx(a, i)].a
            r0 = int(offsets[arrow.target][i])
            c0 = int(offsets[arrow.source][i])
            m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        mats.append(Matrix(m, p))
    return Representation(alg, dims, mats, check=False)


def one_sided_projective(x: Bimodule, side: str) -> bool:
    """Certify projectivity of the one-sided restriction by full stripping."""
    restricted = _restrict(x, side)
    return H.strip_projectives(restricted).core.total_dim == 0


# -- constructions --------------------------------------------------------------


def regular_bimodule(algebra: FiniteDimAlgebra) -> Bimodule:
    """The algebra over its enveloping algebra: components e_i A e_j."""
    env = enveloping(algebra, algebra)
    n = algebra.n_vertices
    positions = [
        [
            [
                k
                for k in range(algebra.dim)
                if int(algebra.basis_target[k]) == i and int(algebra.basis_source[k]) == j
            ]
            for j in range(n)
        ]
        for i in range(n)
    ]
    dims = [len(positions[v // n][v % n]) for v in range(n * n)]
    mats = []
    rm = algebra.right_mult_matrices()
    for arrow in env.arrows:
        mats.append(None)
    # left arrows: a acting on the target index
    n_arr = len(algebra.arrows)
    for a, arrow in enumerate(algebra.arrows):
        for j in range(n):
            rows = positions[arrow.target][j]
            cols = positions[arrow.source][j]
            blk = algebra.left_mult[a].a[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
            mats[a * n + j] = Matrix(blk, algebra.p)
    # right arrows: b^op acting on the source index, component (i, t(b)) -> (i, s(b))
    for b, arrow in enumerate(algebra.arrows):
        for i in range(n):
            rows = positions[i][arrow.source]
            cols = positions[i][arrow.target]
            blk = rm[b].a[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
            mats[n_arr * n + b * n + i] = Matrix(blk, algebra.p)
    rep = Representation(env, dims, mats, check=True)
    return Bimodule(algebra, algebra, rep)


def bimodule_from_rep(left: FiniteDimAlgebra, right: FiniteDimAlgebra, rep: Representation) -> Bimodule:
    return Bimodule(left, right, rep)


def bimodule_syzygy(algebra: FiniteDimAlgebra) -> Bimodule:
    """Syzygy of the regular bimodule over the enveloping algebra, stripped."""
    if not H.is_self_injective(algebra):
        raise H.NotSelfInjective("bimodule syzygy transfer needs a self-injective algebra")
    reg = regular_bimodule(algebra)
    pp = H.projective_cover(reg.rep)
    core = H.strip_projectives(pp.syzygy).core
    return Bimodule(algebra, algebra, core)


def inverse_bimodule_syzygy(algebra: FiniteDimAlgebra) -> Bimodule:
    """Cosyzygy of the regular bimodule: the syzygy over the opposite pairing."""
    if not H.is_self_injective(algebra):
        raise H.NotSelfInjective("needs a self-injective algebra")
    reg = regular_bimodule(algebra)
    d = R.dual(reg.rep)
    pp = H.projective_cover(d)
    core = H.strip_projectives(pp.syzygy).core
    back = R.dual(core)
    return Bimodule(algebra, algebra, H.strip_projectives(back).core)


# -- tensor functors -------------------------------------------------------------


def tensor_bimodule_module(x: Bimodule, m: Representation) -> Representation:
    """X (x)_Lambda M: the coequalizer of the middle action, a left module."""
    if m.algebra is not x.right:
        raise ValueError("module is not over the bimodule's right algebra")
    lam = x.right
    gam = x.left
    p = m.algebra.p
    n_l, n_r = gam.n_vertices, lam.n_vertices
    # base space at Gamma-vertex i: sum over j of X_(i,j) (x) M_j
    pair_dims = [[x.comp_dim(i, j) * m.dims[j] for j in range(n_r)] for i in range(n_l)]
    offsets = [np.concatenate([[0], np.cumsum(pair_dims[i])]) for i in range(n_l)]
    base = [int(offsets[i][-1]) for i in range(n_l)]
    spans = [np.zeros((base[i], 0), dtype=np.int64) for i in range(n_l)]
    rel_cols = [[] for _ in range(n_l)]
    for b, arrow in enumerate(lam.arrows):
        j, j2 = arrow.source, arrow.target  # b: j -> j2
        for i in range(n_l):
            xb = x.rep.mats[x.right_arrow(i, b)].a       # X_(i,j2) -> X_(i,j): x -> x.b
            mb = m.mats[b].a                              # M_j -> M_j2
            dx2, dm = x.comp_dim(i, j2), m.dims[j]
            if dx2 * dm == 0:
                continue
            # (x.b) (x) m  -  x (x) (b.m) over basis pairs of X_(i,j2) x M_j
            cols = np.zeros((base[i], dx2 * dm), dtype=np.int64)
            blk_a = np.kron(xb, np.eye(dm, dtype=np.int64))           # into (j, M_j) slot
            blk_b = np.kron(np.eye(dx2, dtype=np.int64), mb)          # into (j2, M_j2) slot
            cols[int(offsets[i][j]) : int(offsets[i][j + 1]), :] += blk_a
            cols[int(offsets[i][j2]) : int(offsets[i][j2 + 1]), :] -= blk_b
            rel_cols[i].append(cols % p)
    for i in range(n_l):
        if rel_cols[i]:
            spans[i] = np.hstack(rel_cols[i])
    total_dims = base
    projs, secs, qdims = [], [], []
    for i in range(n_l):
        pr, sec = R._quotient_projection(spans[i] % p, base[i], p)
        projs.append(pr)
        secs.append(sec)
        qdims.append(pr.shape[0])
    mats = []
    for g, arrow in enumerate(gam.arrows):
        i, i2 = arrow.source, arrow.target
        big = np.zeros((base[i2], base[i]), dtype=np.int64)
        for j in range(n_r):
            ga = x.rep.mats[x.left_arrow(g, j)].a  # X_(i,j) -> X_(i2,j)
            if ga.size == 0:
                continue
            blk = np.kron(ga, np.eye(m.dims[j], dtype=np.int64))
            big[
                int(offsets[i2][j]) : int(offsets[i2][j + 1]),
                int(offsets[i][j]) : int(offsets[i][j + 1]),
            ] = blk
        mats.append(Matrix((projs[i2] @ big @ secs[i]) % p, p))
    out = Representation(gam, qdims, mats, check=True)
    return out


def _tensor_module_data(x: Bimodule, m: Representation):
    """Shared layout for X (x)_Lambda M: offsets, projections, sections."""
    lam, gam = x.right, x.left
    p = lam.p
    n_l, n_r = gam.n_vertices, lam.n_vertices
    pair_dims = [[x.comp_dim(i, j) * m.dims[j] for j in range(n_r)] for i in range(n_l)]
    offsets = [np.concatenate([[0], np.cumsum(pair_dims[i])]) for i in range(n_l)]
    base = [int(offsets[i][-1]) for i in range(n_l)]
    rel_cols = [[] for _ in range(n_l)]
    for b, arrow in enumerate(lam.arrows):
        j, j2 = arrow.source, arrow.target
        for i in range(n_l):
            xb = x.rep.mats[x.right_arrow(i, b)].a
            mb = m.mats[b].a
            dx2, dm = x.comp_dim(i, j2), m.dims[j]
            if dx2 * dm == 0:
                continue
            cols = np.zeros((base[i], dx2 * dm), dtype=np.int64)
            cols[int(offsets[i][j]) : int(offsets[i][j + 1]), :] += np.kron(
                xb, np.eye(dm, dtype=np.int64)
            )
            cols[int(offsets[i][j2]) : int(offsets[i][j2 + 1]), :] -= np.kron(
                np.eye(dx2, dtype=np.int64), mb
            )
            rel_cols[i].append(cols % p)
    projs, secs = [], []
    for i in range(n_l):
        sp = np.hstack(rel_cols[i]) if rel_cols[i] else np.zeros((base[i], 0), dtype=np.int64)
        pr, sec = R._quotient_projection(sp % p, base[i], p)
        projs.append(pr)
        secs.append(sec)
    return offsets, base, projs, secs


def tensor_bimodule_map(x: Bimodule, f: ModuleMap) -> ModuleMap:
    """X (x)_Lambda f for a map of left modules over the right algebra."""
    src = tensor_bimodule_module(x, f.source)
    tgt = tensor_bimodule_module(x, f.target)
    p = x.left.p
    n_l, n_r = x.left.n_vertices, x.right.n_vertices
    off_s, base_s, projs_s, secs_s = _tensor_module_data(x, f.source)
    off_t, base_t, projs_t, secs_t = _tensor_module_data(x, f.target)
    blocks = []
    for i in range(n_l):
        big = np.zeros((base_t[i], base_s[i]), dtype=np.int64)
        for j in range(n_r):
            dx = x.comp_dim(i, j)
            if dx == 0 or f.source.dims[j] * f.target.dims[j] == 0:
                continue
            blk = np.kron(np.eye(dx, dtype=np.int64), f.blocks[j].a)
            big[
                int(off_t[i][j]) : int(off_t[i][j + 1]),
                int(off_s[i][j]) : int(off_s[i][j + 1]),
            ] = blk
        blocks.append(Matrix((projs_t[i] @ big @ secs_s[i]) % p, p))
    return ModuleMap(src, tgt, blocks, check=True)


def tensor_bimodules(x: Bimodule, y: Bimodule) -> Bimodule:
    """X (x)_middle Y for X: (A, G), Y: (G, B); the result is an (A, B)-bimodule."""
    if x.right is not y.left:
        raise ValueError("middle algebras do not match")
    a_alg, g_alg, b_alg = x.left, x.right, y.right
    p = a_alg.p
    env = enveloping(a_alg, b_alg)
    n_a, n_g, n_b = a_alg.n_vertices, g_alg.n_vertices, b_alg.n_vertices
    pair_dims = [
        [[x.comp_dim(i, j) * y.comp_dim(j, k) for j in range(n_g)] for k in range(n_b)]
        for i in range(n_a)
    ]
    offsets = [
        [np.concatenate([[0], np.cumsum(pair_dims[i][k])]) for k in range(n_b)]
        for i in range(n_a)
    ]
    base = [[int(offsets[i][k][-1]) for k in range(n_b)] for i in range(n_a)]
    spans = [[[] for _ in range(n_b)] for _ in range(n_a)]
    for g, arrow in enumerate(g_alg.arrows):
        j, j2 = arrow.source, arrow.target
        for i in range(n_a):
            xg = x.rep.mats[x.right_arrow(i, g)].a    # X_(i,j2) -> X_(i,j)
            for k in range(n_b):
                yg = y.rep.mats[y.left_arrow(g, k)].a  # Y_(j,k) -> Y_(j2,k)
                dx2 = x.comp_dim(i, j2)
                dy = y.comp_dim(j, k)
                if dx2 * dy == 0:
                    continue
                cols = np.zeros((base[i][k], dx2 * dy), dtype=np.int64)
                blk_a = np.kron(xg, np.eye(dy, dtype=np.int64))
                blk_b = np.kron(np.eye(dx2, dtype=np.int64), yg)
                o = offsets[i][k]
                cols[int(o[j]) : int(o[j + 1]), :] += blk_a
                cols[int(o[j2]) : int(o[j2 + 1]), :] -= blk_b
                spans[i][k].append(cols % p)
    projs = {}
    secs = {}
    qdims = [0] * (n_a * n_b)
    for i in range(n_a):
        for k in range(n_b):
            sp = np.hstack(spans[i][k]) if spans[i][k] else np.zeros((base[i][k], 0), dtype=np.int64)
            pr, sec = R._quotient_projection(sp % p, base[i][k], p)
            projs[(i, k)] = pr
            secs[(i, k)] = sec
            qdims[i * n_b + k] = pr.shape[0]
    mats: list = [None] * len(env.arrows)
    # A-side arrows act on the X factor
    for a, arrow in enumerate(a_alg.arrows):
        i, i2 = arrow.source, arrow.target
        for k in range(n_b):
            big = np.zeros((base[i2][k], base[i][k]), dtype=np.int64)
            for j in range(n_g):
                ga = x.rep.mats[x.left_arrow(a, j)].a
                dy = y.comp_dim(j, k)
                if ga.size == 0 or dy == 0:
                    continue
                blk = np.kron(ga, np.eye(dy, dtype=np.int64))
                big[
                    int(offsets[i2][k][j]) : int(offsets[i2][k][j + 1]),
                    int(offsets[i][k][j]) : int(offsets[i][k][j + 1]),
                ] = blk
            mats[a * n_b + k] = Matrix((projs[(i2, k)] @ big @ secs[(i, k)]) % p, p)
    # B-side arrows act on the Y factor (right action)
    off = len(a_alg.arrows) * n_b
    for b, arrow in enumerate(b_alg.arrows):
        for i in range(n_a):
            big = np.zeros((base[i][arrow.source], base[i][arrow.target]), dtype=np.int64)
            for j in range(n_g):
                yb = y.rep.mats[y.right_arrow(j, b)].a  # Y_(j,t(b)) -> Y_(j,s(b))
                dx = x.comp_dim(i, j)
                if yb.size == 0 or dx == 0:
                    continue
                blk = np.kron(np.eye(dx, dtype=np.int64), yb)
                big[
                    int(offsets[i][arrow.source][j]) : int(offsets[i][arrow.source][j + 1]),
                    int(offsets[i][arrow.target][j]) : int(offsets[i][arrow.target][j + 1]),
                ] = blk
            mats[off + b * n_a + i] = Matrix(
                (projs[(i, arrow.source)] @ big @ secs[(i, arrow.target)]) % p, p
            )
    rep = Representation(env, qdims, mats, check=True)
    return Bimodule(a_alg, b_alg, rep)


# -- verification ----------------------------------------------------------------


@dataclass
class StableMoritaReport:
    projectivities: dict[str, bool]
    yx_matches_regular: str        # yes / no / inconclusive
    xy_matches_regular: str
    stripped_yx_summands: int = 0
    stripped_xy_summands: int = 0

    @property
    def ok(self) -> bool:
        return (
            all(self.projectivities.values())
            and self.yx_matches_regular == "yes"
            and self.xy_matches_regular == "yes"
        )

    @property
    def inconclusive(self) -> bool:
        return "unknown" in (self.yx_matches_regular, self.xy_matches_regular)


def _matches_regular_up_to_projectives(m: Representation, algebra: FiniteDimAlgebra, seed: int) -> str:
    """Does m split as (regular bimodule) (+) projective, over the enveloping?

    Over a self-injective enveloping algebra the syzygy kills projective
    summands and is a stable equivalence, so compare Omega(m) with Omega of
    the regular bimodule instead of stripping the large tensor product.
    (The regular bimodule of a connected non-semisimple algebra is projective-
    free and the top dimensions pin the projective complement.)
    """
    reg = regular_bimodule(algebra)
    lhs = H.syzygy(m, 1)
    rhs = H.syzygy(reg.rep, 1)
    verdict, _ = R.is_isomorphic(lhs, rhs, seed=seed)
    return verdict


def verify_stable_morita(x: Bimodule, y: Bimodule, seed: int = 0) -> StableMoritaReport:
    """Check the stable-Morita axioms: one-sided projectivity and both
    tensor products splitting as regular bimodule plus projectives."""
    if not (H.is_self_injective(x.left) and H.is_self_injective(x.right)):
        raise H.NotSelfInjective("stable equivalences of Morita type need self-injective algebras")
    projs = {
        "x_left": one_sided_projective(x, "left"),
        "x_right": one_sided_projective(x, "right"),
        "y_left": one_sided_projective(y, "left"),
        "y_right": one_sided_projective(y, "right"),
    }
    yx = tensor_bimodules(y, x)
    verdict_yx = _matches_regular_up_to_projectives(yx.rep, x.right, seed)
    xy = tensor_bimodules(x, y)
    verdict_xy = _matches_regular_up_to_projectives(xy.rep, x.left, seed)
    return StableMoritaReport(projs, verdict_yx, verdict_xy)


@dataclass
class TransferReport:
    left_invariants: dict
    right_invariants: dict
    matches: dict[str, bool]

    @property
    def invariants_equal(self) -> bool:
        """Equality of the fields the transfer theorem actually preserves."""
        return all(
            self.matches[k] for k in ("stable_end_dim", "tangent_dim", "verdict", "order", "universal")
        )


def transfer_invariants(
    x: Bimodule, v: Representation, max_order: int = 8, morita_checked: bool = False, seed: int = 0
) -> TransferReport:
    """Compare deformation invariants of v and of the core of X (x) v."""
    from . import deform as D

    if not morita_checked:
        raise ValueError("verify_stable_morita must be confirmed for the pair first")
    v_core = H.strip_projectives(v).core
    image = tensor_bimodule_module(x, v)
    image_core = H.strip_projectives(image).core

    def invs(m, name):
        rep = D.versal_classify(m, max_order=max_order, module_name=name)
        return {
            "end_dim": R.end_dim(m),
            "stable_end_dim": H.stable_end_dim(m),
            "tangent_dim": rep.tangent_dim,
            "verdict": rep.verdict,
            "order": rep.order,
            "universal": rep.universal,
        }

    left = invs(v_core, "V")
    right = invs(image_core, "X(x)V")
    matches = {k: left[k] == right[k] for k in left}
    return TransferReport(left, right, matches)


# -- nice two-sided tilting -------------------------------------------------------


def dual_bimodule(x: Bimodule) -> Bimodule:
    """Hom over the left algebra into it: a (right, left)-bimodule."""
    gam, lam = x.left, x.right
    p = gam.p
    restricted = x.restrict_left()
    reg = R.regular_left(gam)
    positions = R.regular_positions(gam)
    homs = R.hom_space(restricted, reg)
    env = enveloping(lam, gam)
    n_out = lam.n_vertices * gam.n_vertices
    if not homs:
        return Bimodule(lam, gam, R.zero_rep(env))
    nh = len(homs)
    hom_cols = np.stack([f.vec() for f in homs], axis=1)

    def post_compose(op: ModuleMap) -> np.ndarray:
        cols = []
        for f in homs:
            coords = R.solve(hom_cols, op.compose(f).vec(), p)
            if coords is None:
                raise AssertionError("hom space not closed under postcomposition")
            cols.append(coords)
        return np.stack(cols, axis=1) % p

    def pre_compose(op: ModuleMap) -> np.ndarray:
        cols = []
        for f in homs:
            coords = R.solve(hom_cols, f.compose(op).vec(), p)
            if coords is None:
                raise AssertionError("hom space not closed under precomposition")
            cols.append(coords)
        return np.stack(cols, axis=1) % p

    rm = gam.right_mult_matrices()

    def right_mult_map(op_matrix: np.ndarray) -> ModuleMap:
        blocks = []
        for v in range(gam.n_vertices):
            rows = positions[v]
            blocks.append(Matrix(op_matrix[np.ix_(rows, rows)], p))
        return ModuleMap(reg, reg, blocks, check=False)

    # component (j, i): maps killed by precomposition with (1 - right-e_j on X)
    # and postcomposition with right multiplication by e_i on Gamma
    t_right = []
    for i in range(gam.n_vertices):
        sel = np.diag((gam.basis_source == i).astype(np.int64))
        t_right.append(post_compose(right_mult_map(sel)))
    t_left = []
    for j in range(lam.n_vertices):
        # right action of e_j on X: block-diagonal projection onto (_, j) parts
        blocks = []
        for gv in range(gam.n_vertices):
            d = restricted.dims[gv]
            diag = np.zeros(d, dtype=np.int64)
            off = 0
            for jj in range(lam.n_vertices):
                c = x.comp_dim(gv, jj)
                if jj == j:
                    diag[off : off + c] = 1
                off += c
            blocks.append(Matrix(np.diag(diag), p))
        t_left.append(pre_compose(ModuleMap(restricted, restricted, blocks, check=False)))

    comp_basis = {}
    dims = [0] * n_out
    from .gf import kernel as gkernel

    for j in range(lam.n_vertices):
        for i in range(gam.n_vertices):
            both = np.vstack(
                [
                    (t_left[j] - np.eye(nh, dtype=np.int64)) % p,
                    (t_right[i] - np.eye(nh, dtype=np.int64)) % p,
                ]
            )
            comp_basis[(j, i)] = gkernel(both, p)
            dims[j * gam.n_vertices + i] = comp_basis[(j, i)].shape[1]

    mats = [None] * len(env.arrows)
    # left (Lambda) arrows: (lam.arrow b)|i-column: (b|i): component (s(b), i) -> (t(b), i)
    for b, arrow in enumerate(lam.arrows):
        op = pre_compose(_right_action_on_restriction(x, b))
        for i in range(gam.n_vertices):
            src = comp_basis[(arrow.source, i)]
            tgt = comp_basis[(arrow.target, i)]
            img = (op @ src) % p
            coords = R._solve_matrix(tgt, img, p)
            if coords is None:
                raise AssertionError("left action leaves the component grading")
            mats[b * gam.n_vertices + i] = Matrix(coords, p)
    # right (Gamma^op) arrows: postcompose right multiplication by the arrow
    off = len(lam.arrows) * gam.n_vertices
    for g, arrow in enumerate(gam.arrows):
        op = post_compose(right_mult_map(rm[g].a))
        for j in range(lam.n_vertices):
            src = comp_basis[(j, arrow.target)]
            tgt = comp_basis[(j, arrow.source)]
            img = (op @ src) % p
            coords = R._solve_matrix(tgt, img, p)
            if coords is None:
                raise AssertionError("right action leaves the component grading")
            mats[off + g * lam.n_vertices + j] = Matrix(coords, p)
    rep = Representation(env, dims, mats, check=True)
    return Bimodule(lam, gam, rep)


def _right_action_on_restriction(x: Bimodule, b: int) -> ModuleMap:
    """Right multiplication by the arrow b of the right algebra, as an
    endomorphism-shaped map of the left restriction."""
    gam, lam = x.left, x.right
    p = gam.p
    restricted = x.restrict_left()
    arrow = lam.arrows[b]
    blocks = []
    for gv in range(gam.n_vertices):
        d = restricted.dims[gv]
        m = np.zeros((d, d), dtype=np.int64)
        offs = np.concatenate([[0], np.cumsum([x.comp_dim(gv, j) for j in range(lam.n_vertices)])])
        blk = x.rep.mats[x.right_arrow(gv, b)].a  # X_(gv, t(b)) -> X_(gv, s(b))
        r0, c0 = int(offs[arrow.source]), int(offs[arrow.target])
        m[r0 : r0 + blk.shape[0], c0 : c0 + blk.shape[1]] = blk
        blocks.append(Matrix(m, p))
    return ModuleMap(restricted, restricted, blocks, check=False)


@dataclass
class TiltingReport:
    dual_tensor_p: str           # cohomology of P~ (x) P concentrated + regular?
    p_tensor_dual: str
    degree_found: tuple

    @property
    def ok(self) -> bool:
        return self.dual_tensor_p == "yes" and self.p_tensor_dual == "yes"

    @property
    def inconclusive(self) -> bool:
        return "unknown" in (self.dual_tensor_p, self.p_tensor_dual)


def verify_nice_tilting(terms: dict[int, Bimodule], seed: int = 0) -> TiltingReport:
    """One- or few-term complexes of bimodules: checks that tensoring with the
    degreewise dual recovers the regular bimodules in a single degree.

    Differentials are not supported (the corpus checks use one-term complexes
    and shifts); multi-term inputs are treated as complexes with zero
    differential, which a nonzero differential input must first be reduced to.
    """
    degs = sorted(terms)
    gam = terms[degs[0]].left
    lam = terms[degs[0]].right
    duals = {-n: dual_bimodule(t) for n, t in terms.items()}

    def total_tensor(xs: dict[int, Bimodule], ys: dict[int, Bimodule], reg: Bimodule):
        prods = {}
        for i, xi in xs.items():
            for j, yj in ys.items():
                t = tensor_bimodules(xi, yj)
                if t.rep.total_dim == 0:
                    continue
                if (i + j) in prods:
                    prods[i + j] = R.direct_sum(prods[i + j], t.rep)
                else:
                    prods[i + j] = t.rep
        nonzero = {n: t for n, t in prods.items() if t.total_dim}
        concentrated = [n for n in nonzero]
        if len(concentrated) != 1:
            return "no", tuple(concentrated)
        n0 = concentrated[0]
        verdict, _ = R.is_isomorphic(nonzero[n0], reg.rep, seed=seed)
        return verdict, (n0,)

    v1, d1 = total_tensor(duals, terms, regular_bimodule(lam))
    v2, d2 = total_tensor(terms, duals, regular_bimodule(gam))
    return TiltingReport(v1, v2, (d1, d2))
