"""Bounded complexes of representations: cones, shifts, cohomology, projective
resolutions, derived Hom, first-order quasi-lifts and proflat checks.

Every derived computation reduces to finite linear algebra through
`resolve_complex`, which builds a termwise-projective complex with a
quasi-isomorphism onto the input, degree by degree from the top via projective
covers of pullbacks; the range where cohomology is certified is explicit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import Matrix, kernel, rank, rref, solve, quotient_representatives
from . import homalg as H
from . import reps as R
from .reps import ModuleMap, Representation


class NotAChainMap(ValueError):
    pass


class BoundedComplex:
    """Cochain complex, finitely many nonzero terms, delta^n: C^n -> C^{n+1}."""

    def __init__(self, algebra, terms: dict[int, Representation], diffs: dict[int, ModuleMap], check: bool = True):
        self.algebra = algebra
        self.terms = {n: t for n, t in terms.items() if t.total_dim > 0}
        self.diffs = {}
        for n, f in diffs.items():
            if f is not None and not f.is_zero():
                self.diffs[n] = f
        if check:
            self.validate()

    @classmethod
    def one_term(cls, m: Representation, degree: int = 0) -> "BoundedComplex":
        return cls(m.algebra, {degree: m}, {}, check=False)

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def n_min(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def n_max(self) -> int:
        return max(self.terms) if self.terms else 0

    def term(self, n: int) -> Representation:
        t = self.terms.get(n)
        return t if t is not None else R.zero_rep(self.algebra)

    def diff(self, n: int) -> ModuleMap:
        d = self.diffs.get(n)
        return d if d is not None else ModuleMap.zero(self.term(n), self.term(n + 1))

    def validate(self):
        for n, f in self.diffs.items():
            f.verify()
            if f.source.dims != self.term(n).dims or f.target.dims != self.term(n + 1).dims:
                raise ValueError(f"differential at {n} has wrong endpoints")
            nxt = self.diffs.get(n + 1)
            if nxt is not None and not nxt.compose(f).is_zero():
                raise ValueError(f"delta o delta != 0 at degree {n}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * t.total_dim for n, t in self.terms.items())


@dataclass
class ChainMap:
    source: BoundedComplex
    target: BoundedComplex
    maps: dict[int, ModuleMap]

    def component(self, n: int) -> ModuleMap:
        f = self.maps.get(n)
        return f if f is not None else ModuleMap.zero(self.source.term(n), self.target.term(n))

    def verify(self):
        degs = set(self.source.terms) | set(self.target.terms)
        for n in degs:
            left = self.target.diff(n).compose(self.component(n))
            right = self.component(n + 1).compose(self.source.diff(n))
            if not all(a == b for a, b in zip(left.blocks, right.blocks)):
                raise NotAChainMap(f"square at degree {n} does not commute")


def shift(c: BoundedComplex, i: int) -> BoundedComplex:
    """C[i]: degree n term C^{n+i}, differential (-1)^i delta^{n+i}."""
    terms = {n - i: t for n, t in c.terms.items()}
    sign = -1 if i % 2 else 1
    diffs = {n - i: f.scale(sign) for n, f in c.diffs.items()}
    return BoundedComplex(c.algebra, terms, diffs, check=False)


def cone(f: ChainMap) -> BoundedComplex:
    """Mapping cone: C(f)^i = A^{i+1} (+) B^i with the block differential."""
    f.verify()
    a, b = f.source, f.target
    degs = range(min(a.n_min - 1, b.n_min) - 1, max(a.n_max, b.n_max) + 1)
    terms = {}
    sums = {}
    for i in degs:
        s, ia, ib, pa, pb = R.direct_sum_with_maps(a.term(i + 1), b.term(i))
        sums[i] = (s, ia, ib, pa, pb)
        terms[i] = s
    diffs = {}
    for i in degs:
        if i + 1 not in sums:
            continue
        s, ia, ib, pa, pb = sums[i]
        s1, ia1, ib1, _, _ = sums[i + 1]
        if s.total_dim == 0 or s1.total_dim == 0:
            continue
        d = (
            ia1.compose(a.diff(i + 1).scale(-1)).compose(pa)
            + ib1.compose(f.component(i + 1)).compose(pa)
            + ib1.compose(b.diff(i)).compose(pb)
        )
        diffs[i] = d
    return BoundedComplex(a.algebra, terms, diffs)


def cone_of_module_map(g: ModuleMap, deg: int = 0) -> BoundedComplex:
    """Two-term complex from a module map, source in degree deg - 1."""
    return BoundedComplex(
        g.source.algebra, {deg - 1: g.source, deg: g.target}, {deg - 1: g}
    )


# -- cohomology ----------------------------------------------------------------


@dataclass
class CohomologyData:
    cycles: Representation
    cycle_inclusion: ModuleMap      # Z -> C^n
    homology: Representation
    class_projection: ModuleMap     # Z -> H


def cohomology_data(c: BoundedComplex, n: int) -> CohomologyData:
    p = c.algebra.p
    term = c.term(n)
    d_out = c.diff(n)
    z_spans = [blk.kernel().a for blk in d_out.blocks]
    z, z_incl = R.sub_representation(term, z_spans)
    d_in = c.diff(n - 1)
    b_in_z = []
    for i in range(c.algebra.n_vertices):
        img = d_in.blocks[i].a
        coords = R._solve_matrix(z_incl.blocks[i].a, img % p, p)
        if coords is None:
            raise AssertionError("boundaries do not lie inside cycles")
        b_in_z.append(coords)
    h, proj = R.quotient_representation(z, b_in_z)
    return CohomologyData(z, z_incl, h, proj)


def cohomology(c: BoundedComplex) -> list[tuple[int, Representation]]:
    out = []
    for n in range(c.n_min, c.n_max + 1):
        h = cohomology_data(c, n).homology
        if h.total_dim:
            out.append((n, h))
    return out


def cohomology_dims(c: BoundedComplex) -> dict[int, int]:
    return {n: h.total_dim for n, h in cohomology(c)}


def _classes_matrix(src: CohomologyData, from_cycles: Matrix, p: int) -> Matrix:
    """Factor a map defined on source cycles through source classes."""
    proj = _stack_blocks(src.class_projection)
    if proj.rows == 0:
        return Matrix.zeros(from_cycles.rows, 0, p)
    sec = R._solve_matrix(proj.a, np.eye(proj.rows, dtype=np.int64), p)
    if sec is None:
        raise AssertionError("class projection is not surjective")
    return Matrix((from_cycles.a @ sec) % p, p)


def induced_cohomology_matrix(f: ChainMap, n: int) -> Matrix:
    """Matrix of H^n(f): classes of the source to classes of the target."""
    p = f.source.algebra.p
    src = cohomology_data(f.source, n)
    tgt = cohomology_data(f.target, n)
    # cycles map to cycles; express through the target's cycle inclusion
    comp = f.component(n).compose(src.cycle_inclusion)
    coords = []
    for i in range(f.source.algebra.n_vertices):
        x = R._solve_matrix(tgt.cycle_inclusion.blocks[i].a, comp.blocks[i].a, p)
        if x is None:
            raise AssertionError("chain map does not preserve cycles")
        coords.append(Matrix(x, p))
    to_z = ModuleMap(src.cycles, tgt.cycles, coords, check=False)
    on_cycles = _stack_blocks(tgt.class_projection.compose(to_z))
    return _classes_matrix(src, on_cycles, p)


def _stack_blocks(f: ModuleMap) -> Matrix:
    from .gf import block_diag

    return block_diag(list(f.blocks), f.source.algebra.p)


def is_quasi_isomorphism(f: ChainMap, degrees) -> bool:
    for n in degrees:
        m = induced_cohomology_matrix(f, n)
        if m.rows != m.cols or not m.is_invertible():
            if m.rows == m.cols == 0:
                continue
            return False
    return True


# -- resolution ----------------------------------------------------------------


@dataclass
class ResolvedComplex:
    complex: BoundedComplex          # termwise projective, degrees [n_min, n2]
    qis: ChainMap                    # onto the input, surjective on terms
    certified_from: int              # cohomology iso certified for degrees >= this


def resolve_complex(c: BoundedComplex, depth: int = 4) -> ResolvedComplex:
    if depth < 2:
        raise ValueError("depth must be >= 2")
    if not c.terms:
        empty = BoundedComplex(c.algebra, {}, {}, check=False)
        return ResolvedComplex(empty, ChainMap(empty, c, {}), 0)
    n2 = c.n_max
    n1 = min(n for n, h in cohomology(c)) if cohomology(c) else c.n_min
    bottom = n1 - depth
    p_terms: dict[int, Representation] = {}
    p_diffs: dict[int, ModuleMap] = {}
    q_maps: dict[int, ModuleMap] = {}
    p = c.algebra.p
    for n in range(n2, bottom - 1, -1):
        cn = c.term(n)
        pn1 = p_terms.get(n + 1)
        if pn1 is None or pn1.total_dim == 0:
            # no projective term above: W = ker(delta_C^n)
            dlt_c = c.diff(n)
            spans = [blk.kernel().a for blk in dlt_c.blocks]
            w, w_incl = R.sub_representation(cn, spans)
            pair = None
        else:
            total, i_c, i_p, pr_c, pr_p = R.direct_sum_with_maps(cn, pn1)
            spans = []
            dlt_c = c.diff(n)
            dlt_p = p_diffs.get(n + 1)
            q1 = q_maps[n + 1]
            for i in range(c.algebra.n_vertices):
                top_row = np.hstack([dlt_c.blocks[i].a, (-q1.blocks[i].a) % p])
                if dlt_p is not None:
                    bot_row = np.hstack(
                        [
                            np.zeros(
                                (dlt_p.blocks[i].rows, cn.dims[i]), dtype=np.int64
                            ),
                            dlt_p.blocks[i].a,
                        ]
                    )
                    stacked = np.vstack([top_row, bot_row])
                else:
                    stacked = top_row
                spans.append(kernel(stacked, p))
            w, w_incl_total = R.sub_representation(total, spans)
            w_incl = w_incl_total
            pair = (pr_c, pr_p)
        if w.total_dim == 0:
            continue
        pp = H.projective_cover(w)
        p_terms[n] = pp.cover
        lift = w_incl.compose(pp.surjection)
        if pair is None:
            q_maps[n] = lift
        else:
            pr_c, pr_p = pair
            q_maps[n] = pr_c.compose(lift)
            p_diffs[n] = pr_p.compose(lift)
    pc = BoundedComplex(c.algebra, p_terms, p_diffs)
    qis = ChainMap(pc, c, q_maps)
    qis.verify()
    certified = bottom + 1
    if not is_quasi_isomorphism(qis, range(certified, n2 + 1)):
        raise AssertionError("resolution failed its quasi-isomorphism certificate")
    return ResolvedComplex(pc, qis, certified)


# -- total Hom complex ---------------------------------------------------------


@dataclass
class HomComplexDegree:
    slots: list[int]                      # source degrees j contributing
    bases: dict[int, list[ModuleMap]]     # j -> basis of Hom(P^j, W^{j+n})
    offsets: dict[int, int]
    dim: int


class HomComplex:
    """Total Hom complex of (P, W) with explicit bases in a degree window."""

    def __init__(self, p_cx: BoundedComplex, w_cx: BoundedComplex, n_lo: int, n_hi: int):
        self.p_cx = p_cx
        self.w_cx = w_cx
        self.p = p_cx.algebra.p
        self.data: dict[int, HomComplexDegree] = {}
        for n in range(n_lo, n_hi + 1):
            slots, bases, offsets = [], {}, {}
            dim = 0
            for j in sorted(p_cx.terms):
                if (j + n) not in w_cx.terms:
                    continue
                basis = R.hom_space(p_cx.term(j), w_cx.term(j + n))
                if not basis:
                    continue
                slots.append(j)
                bases[j] = basis
                offsets[j] = dim
                dim += len(basis)
            self.data[n] = HomComplexDegree(slots, bases, offsets, dim)

    def coords(self, n: int, j: int, f: ModuleMap) -> np.ndarray:
        basis = self.data[n].bases[j]
        c = R.coordinates_in_hom_basis(basis, f)
        if c is None:
            raise AssertionError("map outside its hom space")
        return c

    def differential(self, n: int) -> np.ndarray:
        """Matrix of d: Hom^n -> Hom^{n+1}; (dg)^j = dW g^j - (-1)^n g^{j+1} dP."""
        src = self.data[n]
        tgt = self.data.get(n + 1)
        if tgt is None:
            raise KeyError(f"degree {n+1} not materialized")
        out = np.zeros((tgt.dim, src.dim), dtype=np.int64)
        sign = -1 if n % 2 else 1
        for j in src.slots:
            for k, f in enumerate(src.bases[j]):
                col = src.offsets[j] + k
                # term into slot j of degree n+1
                if j in tgt.bases:
                    g = self.w_cx.diff(j + n).compose(f)
                    if not g.is_zero():
                        c = self.coords(n + 1, j, g)
                        out[tgt.offsets[j] : tgt.offsets[j] + len(c), col] += c
                # term into slot j-1 of degree n+1
                if (j - 1) in tgt.bases:
                    g = f.compose(self.p_cx.diff(j - 1)).scale(-sign)
                    if not g.is_zero():
                        c = self.coords(n + 1, j - 1, g)
                        out[
                            tgt.offsets[j - 1] : tgt.offsets[j - 1] + len(c), col
                        ] += c
        return out % self.p

    def element(self, n: int, coords: np.ndarray) -> dict[int, ModuleMap]:
        d = self.data[n]
        out = {}
        for j in d.slots:
            fs = d.bases[j]
            f = None
            for k, g in enumerate(fs):
                c = int(coords[d.offsets[j] + k]) % self.p
                if c:
                    f = g.scale(c) if f is None else f + g.scale(c)
            if f is not None:
                out[j] = f
        return out


def hom_complex_cohomology_dim(hc: HomComplex, n: int) -> int:
    d_n = hc.differential(n)
    d_prev = hc.differential(n - 1)
    p = hc.p
    return (hc.data[n].dim - rank(d_n, p)) - rank(d_prev, p)


def derived_ext_dim(v: BoundedComplex, w: BoundedComplex, i: int, depth: int | None = None, check_two_depths: bool = True) -> int:
    """dim Hom_{D^-}(V, W[i]) via the total Hom complex of a resolution of V."""
    if depth is None:
        depth = abs(i) + 3
    if v.terms and w.terms:
        hcoh = cohomology_dims(v)
        n1 = min(hcoh) if hcoh else v.n_min
        # the resolution must reach below every W-slot the window can touch
        depth = max(depth, n1 - w.n_min + abs(i) + 3)
    val = _derived_ext_at_depth(v, w, i, depth)
    if check_two_depths:
        val2 = _derived_ext_at_depth(v, w, i, depth + 1)
        if val != val2:
            raise AssertionError(
                f"derived Ext dimension unstable across depths: {val} vs {val2}"
            )
    return val


def _derived_ext_at_depth(v: BoundedComplex, w: BoundedComplex, i: int, depth: int) -> int:
    res = resolve_complex(v, depth)
    if not res.complex.terms or not w.terms:
        return 0
    hc = HomComplex(res.complex, w, i - 1, i + 1)
    return hom_complex_cohomology_dim(hc, i)


def derived_hom_dim(v: BoundedComplex, w: BoundedComplex) -> int:
    return derived_ext_dim(v, w, 0)


# -- tangent spaces ------------------------------------------------------------


@dataclass
class ComplexTangent:
    t_f: int
    t_f_flat: int


def complex_tangent(v: BoundedComplex, depth: int = 4) -> ComplexTangent:
    """(dim t_F, dim t_F^fl): derived self-Ext^1 and its cohomologically
    trivial subspace (classes inducing zero on every H^i -> H^{i+1}).

    Classes are taken in Hom(P, V) with P the resolution: using the truncated
    P on both sides would pick up spurious classes at the truncation edge.
    """
    res = resolve_complex(v, depth)
    pc = res.complex
    if not pc.terms or not v.terms:
        return ComplexTangent(0, 0)
    hc = HomComplex(pc, v, -1, 2)
    p = pc.algebra.p
    d1 = hc.differential(1)
    d0 = hc.differential(0)
    z_basis = kernel(d1, p)
    b_basis = _column_basis(d0, p)
    reps_idx = quotient_representatives(b_basis, z_basis, p)
    t_f = len(reps_idx)
    if t_f == 0:
        return ComplexTangent(0, 0)
    hdims = cohomology_dims(v)
    if not hdims:
        return ComplexTangent(t_f, t_f)
    n1, n2 = min(hdims), max(hdims)
    src_data = {n: cohomology_data(pc, n) for n in range(n1, n2 + 1)}
    tgt_data = {n: cohomology_data(v, n) for n in range(n1 + 1, n2 + 2)}
    rows = []
    for j in reps_idx:
        fam = hc.element(1, z_basis[:, j])
        flat = []
        for n in range(n1, n2 + 1):
            # H^n(P) = H^n(V) in this window, so vanishing of the induced map
            # H^n(P) -> H^{n+1}(V) is the flatness condition itself
            if src_data[n].homology.total_dim == 0 or tgt_data[n + 1].homology.total_dim == 0:
                continue
            mat = _induced_on_cohomology(pc, fam, src_data[n], tgt_data[n + 1], n)
            flat.append(mat.a.reshape(-1))
        rows.append(np.concatenate(flat) if flat else np.zeros(0, dtype=np.int64))
    if not rows or rows[0].size == 0:
        return ComplexTangent(t_f, t_f)
    constraint = np.stack(rows, axis=1) % p
    flat_dim = constraint.shape[1] - rank(constraint, p)
    return ComplexTangent(t_f, flat_dim)


def _induced_on_cohomology(pc, fam: dict[int, ModuleMap], src: CohomologyData, tgt: CohomologyData, n: int) -> Matrix:
    p = pc.algebra.p
    f = fam.get(n)
    if f is None:
        return Matrix.zeros(tgt.homology.total_dim, src.homology.total_dim, p)
    comp = f.compose(src.cycle_inclusion)
    coords = []
    for i in range(pc.algebra.n_vertices):
        x = R._solve_matrix(tgt.cycle_inclusion.blocks[i].a, comp.blocks[i].a, p)
        if x is None:
            raise AssertionError("cocycle does not send cycles to cycles")
        coords.append(Matrix(x, p))
    to_z = ModuleMap(src.cycles, tgt.cycles, coords, check=False)
    on_cycles = _stack_blocks(tgt.class_projection.compose(to_z))
    return _classes_matrix(src, on_cycles, p)


def _column_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    _, piv = rref(a, p)
    return a[:, list(piv)]


def self_ext_cocycles(pc: BoundedComplex) -> list[dict[int, ModuleMap]]:
    """Basis of 1-cocycles of Hom(P, P): raw material for quasi-lifts."""
    hc = HomComplex(pc, pc, 1, 2)
    z = kernel(hc.differential(1), pc.algebra.p)
    return [hc.element(1, z[:, j]) for j in range(z.shape[1])]


# -- first-order quasi-lifts ---------------------------------------------------


@dataclass
class FirstOrderQuasiLift:
    complex: BoundedComplex
    eps: dict[int, ModuleMap]       # the square-zero action on each term
    reduction: ChainMap             # onto the resolved base complex
    base: BoundedComplex

    def check_invariants(self):
        for n, e in self.eps.items():
            if not e.compose(e).is_zero():
                raise AssertionError("eps^2 != 0")
        for n in self.complex.terms:
            e = self.eps.get(n)
            e_next = self.eps.get(n + 1)
            d = self.complex.diff(n)
            left = d.compose(e) if e else None
            right = e_next.compose(d) if e_next else None
            if left is not None or right is not None:
                lz = left.is_zero() if left is not None else True
                if left is not None and right is not None:
                    if not all(a == b for a, b in zip(left.blocks, right.blocks)):
                        raise AssertionError("eps does not commute with the differential")
                elif not (left.is_zero() if left is not None else right.is_zero()):
                    raise AssertionError("eps does not commute with the differential")
        self.reduction.verify()
        for n in self.complex.terms:
            phi = self.reduction.component(n)
            if not phi.is_surjective():
                raise AssertionError("reduction is not surjective on terms")
            e = self.eps.get(n)
            img_rank = e.rank() if e else 0
            ker_rank = sum(b.cols - b.rank() for b in phi.blocks)
            if img_rank != ker_rank:
                raise AssertionError("ker(reduction) != im(eps)")
            if e is not None and not phi.compose(e).is_zero():
                raise AssertionError("reduction does not kill eps")


def first_order_quasilift(resolved: BoundedComplex, alpha: dict[int, ModuleMap]) -> FirstOrderQuasiLift:
    """Cone of alpha[-1] with the square-zero action eps(a, b) = (0, a).

    `alpha` must be a 1-cocycle family alpha^j: P^j -> P^{j+1} on a termwise
    projective complex (anticommuting with the differential).
    """
    pc = resolved
    p = pc.algebra.p
    slots = set(alpha) | {j - 1 for j in alpha}
    for j in slots:
        f_j = alpha.get(j)
        f_next = alpha.get(j + 1)
        anti = None
        if f_j is not None:
            anti = pc.diff(j + 1).compose(f_j)
        if f_next is not None:
            term = f_next.compose(pc.diff(j))
            anti = term if anti is None else anti + term
        if anti is not None and not anti.is_zero():
            raise NotAChainMap("alpha is not a 1-cocycle of the Hom complex")
    terms = {}
    sums = {}
    for n in pc.terms:
        s, i1, i2, p1, p2 = R.direct_sum_with_maps(pc.term(n), pc.term(n))
        sums[n] = (s, i1, i2, p1, p2)
        terms[n] = s
    diffs = {}
    eps = {}
    red = {}
    for n, (s, i1, i2, p1, p2) in sums.items():
        eps[n] = i2.compose(p1)
        red[n] = p1
        if (n + 1) in sums:
            s1, j1, j2, _, _ = sums[n + 1]
            d = j1.compose(pc.diff(n)).compose(p1) + j2.compose(pc.diff(n)).compose(p2)
            a_n = alpha.get(n)
            if a_n is not None:
                d = d + j2.compose(a_n).compose(p1)
            diffs[n] = d
    m = BoundedComplex(pc.algebra, terms, diffs)
    lift = FirstOrderQuasiLift(m, eps, ChainMap(m, pc, red), pc)
    lift.check_invariants()
    return lift


def connecting_class(lift: FirstOrderQuasiLift) -> dict[int, ModuleMap]:
    """Recover the tangent cocycle from the lift: delta_M s - s delta_P through eps."""
    pc = lift.base
    out = {}
    for n in pc.terms:
        if (n + 1) not in lift.complex.terms:
            continue
        s_n = _section(lift, n)
        s_n1 = _section(lift, n + 1)
        diff = lift.complex.diff(n).compose(s_n) - s_n1.compose(pc.diff(n))
        # diff lands in eps(M) = second copy; read it off through the projection
        _, i1, i2, p1, p2 = _sum_maps(lift, n + 1)
        val = p2.compose(diff)
        if not val.is_zero():
            out[n] = val
    return out


def _sum_maps(lift: FirstOrderQuasiLift, n: int):
    pc = lift.base
    return R.direct_sum_with_maps(pc.term(n), pc.term(n))


def _section(lift: FirstOrderQuasiLift, n: int) -> ModuleMap:
    _, i1, _, _, _ = _sum_maps(lift, n)
    return i1


# -- proflat check -------------------------------------------------------------


def proflat_check(m: BoundedComplex, t_maps: dict[int, ModuleMap], order: int) -> bool:
    """True iff every cohomology group is free over k[t]/(t^order)."""
    for n in m.terms:
        t = t_maps.get(n)
        if t is None:
            raise ValueError(f"term at degree {n} has no t-action")
        d = m.diff(n)
        t_next = t_maps.get(n + 1)
        left = d.compose(t)
        right = t_next.compose(d) if t_next is not None else None
        if right is None:
            if not left.is_zero():
                raise ValueError("t-action does not commute with differentials")
        elif not all(a == b for a, b in zip(left.blocks, right.blocks)):
            raise ValueError("t-action does not commute with differentials")
        power = t
        for _ in range(order - 1):
            power = power.compose(t)
        if not power.is_zero():
            raise ValueError(f"t^{order} != 0 on the term at degree {n}")
        if not _is_free_module(_stack_blocks(t), m.term(n).total_dim, order):
            raise ValueError(f"term at degree {n} is not free over k[t]/(t^{order})")
    p = m.algebra.p
    for n in range(m.n_min, m.n_max + 1):
        data = cohomology_data(m, n)
        h = data.homology
        if h.total_dim == 0:
            continue
        t = t_maps.get(n)
        # induce t on H: lift classes through cycles
        comp = t.compose(data.cycle_inclusion)
        coords = []
        for i in range(m.algebra.n_vertices):
            x = R._solve_matrix(data.cycle_inclusion.blocks[i].a, comp.blocks[i].a, p)
            if x is None:
                raise AssertionError("t does not preserve cycles")
            coords.append(Matrix(x, p))
        on_z = ModuleMap(data.cycles, data.cycles, coords, check=False)
        # H-level matrix: project classes along a section of the projection
        t_h = _endo_on_quotient(data, on_z, p)
        if not _is_free_module(t_h, h.total_dim, order):
            return False
    return True


def _endo_on_quotient(data: CohomologyData, on_z: ModuleMap, p: int) -> Matrix:
    from .gf import block_diag

    proj = _stack_blocks(data.class_projection)
    zmat = _stack_blocks(on_z)
    # section: solve proj @ s = id
    n_h = proj.rows
    sec = R._solve_matrix(proj.a, np.eye(n_h, dtype=np.int64), p)
    if sec is None:
        raise AssertionError("class projection is not surjective")
    return Matrix((proj.a @ zmat.a @ sec) % p, p)


def _is_free_module(t_mat: Matrix, total_dim: int, order: int) -> bool:
    """Free over k[t]/(t^order) iff dim = order * dim ker(t)."""
    ker_dim = t_mat.cols - t_mat.rank()
    return total_dim == order * ker_dim


def reduction_mod_t(m: BoundedComplex, t_maps: dict[int, ModuleMap]) -> BoundedComplex:
    """The complex M/tM with its induced differentials."""
    terms = {}
    projs = {}
    for n, term in m.terms.items():
        spans = [b.a for b in t_maps[n].blocks]
        q, proj = R.quotient_representation(term, spans)
        terms[n] = q
        projs[n] = proj
    diffs = {}
    p = m.algebra.p
    for n, d in m.diffs.items():
        if n not in terms or (n + 1) not in terms:
            continue
        blocks = []
        for i in range(m.algebra.n_vertices):
            # induced map: proj_{n+1} o d o section_n
            pr = projs[n].blocks[i].a
            sec = R._solve_matrix(pr, np.eye(pr.shape[0], dtype=np.int64), p)
            blocks.append(Matrix((projs[n + 1].blocks[i].a @ d.blocks[i].a @ sec) % p, p))
        diffs[n] = ModuleMap(terms[n], terms[n + 1], blocks, check=False)
    return BoundedComplex(m.algebra, terms, diffs)


def chain_maps(c: BoundedComplex, d: BoundedComplex) -> list[ChainMap]:
    """Basis of degree-0 chain maps c -> d (0-cocycles of the Hom complex)."""
    hc = HomComplex(c, d, -1, 1)
    p = c.algebra.p
    z = kernel(hc.differential(0), p)
    return [ChainMap(c, d, hc.element(0, z[:, j])) for j in range(z.shape[1])]


def is_chain_isomorphic(c: BoundedComplex, d: BoundedComplex, seed: int = 0):
    """('yes', witness chain iso) / ('no', None) / ('unknown', None), termwise."""
    if sorted(c.terms) != sorted(d.terms):
        return "no", None
    for n in c.terms:
        if c.term(n).dims != d.term(n).dims:
            return "no", None
    maps = chain_maps(c, d)
    if not maps and any(t.total_dim for t in c.terms.values()):
        return "no", None
    rng = np.random.default_rng(seed)
    p = c.algebra.p

    def invertible(f: ChainMap) -> bool:
        return all(f.component(n).is_invertible() for n in c.terms)

    for _ in range(R.ISO_RANDOM_SAMPLES):
        coeffs = rng.integers(0, p, size=len(maps))
        fam = {}
        for cf, g in zip(coeffs, maps):
            if cf % p == 0:
                continue
            for n, comp in g.maps.items():
                fam[n] = fam.get(n) + comp.scale(int(cf)) if n in fam else comp.scale(int(cf))
        f = ChainMap(c, d, fam)
        if invertible(f):
            return "yes", f
    if p ** len(maps) <= R.ISO_EXHAUSTION_CAP:
        counters = np.zeros(len(maps), dtype=np.int64)
        while True:
            k = 0
            while k < len(maps) and counters[k] == p - 1:
                counters[k] = 0
                k += 1
            if k == len(maps):
                return "no", None
            counters[k] += 1
            fam = {}
            for cf, g in zip(counters, maps):
                if cf % p == 0:
                    continue
                for n, comp in g.maps.items():
                    fam[n] = fam.get(n) + comp.scale(int(cf)) if n in fam else comp.scale(int(cf))
            f = ChainMap(c, d, fam)
            if invertible(f):
                return "yes", f
    return "unknown", None


# -- two-term analysis ---------------------------------------------------------


@dataclass
class TwoTermReport:
    ext_n: int
    ext_n_plus_1: int
    scalar_endomorphisms_possible: bool


def two_term_analysis(u0: Representation, u_minus_n: Representation, n: int) -> TwoTermReport:
    """Remark-style check for two-term complexes with scalar endomorphism ends."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if R.end_dim(u0) != 1 or R.end_dim(u_minus_n) != 1:
        raise ValueError("both modules must have scalar endomorphism rings")
    e_n = H.ext_dim(u0, u_minus_n, n)
    e_n1 = H.ext_dim(u0, u_minus_n, n + 1)
    return TwoTermReport(e_n, e_n1, e_n == 0 and e_n1 > 0)
