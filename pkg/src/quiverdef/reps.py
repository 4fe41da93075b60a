"""Quiver representations: finitely generated left modules and their maps.

A representation assigns dims[i] to vertex i and a (dims[target] x dims[source])
matrix to every arrow; paths act in application order.  Maps are vertex-wise
matrices satisfying the naturality squares.  Sub- and quotient representations
are built from explicit spanning columns and carry their inclusion/projection.
"""

from __future__ import annotations

import numpy as np

from .gf import Matrix, block_diag, kernel, rref, solve
from .algebra import FiniteDimAlgebra


class RelationViolated(ValueError):
    def __init__(self, relation: str, vertex: str, witness_column: int):
        self.relation = relation
        self.vertex = vertex
        self.witness_column = witness_column
        super().__init__(
            f"relation {relation} violated at vertex {vertex} (witness column {witness_column})"
        )


class Representation:
    __slots__ = ("algebra", "dims", "mats")

    def __init__(self, algebra: FiniteDimAlgebra, dims, mats, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise ValueError("dimension vector length != number of vertices")
        mats = list(mats)
        if len(mats) != len(algebra.arrows):
            raise ValueError("need one matrix per arrow")
        for a, arrow in enumerate(algebra.arrows):
            m = mats[a]
            want = (self.dims[arrow.target], self.dims[arrow.source])
            if m.shape != want:
                raise ValueError(f"arrow {arrow.name}: matrix shape {m.shape} != {want}")
        self.mats = tuple(mats)
        if check:
            self.check_relations()

    # -- basics --------------------------------------------------------------

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Representation)
            and self.algebra is other.algebra
            and self.dims == other.dims
            and all(a == b for a, b in zip(self.mats, other.mats))
        )

    def __repr__(self) -> str:
        return f"Representation(dims={self.dims})"

    def path_action(self, path: tuple[int, ...]) -> Matrix:
        """Matrix of the path acting M_source -> M_target (application order)."""
        arrows = self.algebra.arrows
        src = arrows[path[0]].source
        m = Matrix.identity(self.dims[src], self.algebra.p)
        for a in path:
            m = self.mats[a] @ m
        return m

    def check_relations(self):
        arrows = self.algebra.arrows
        for ri, rel in enumerate(self.algebra.pres.relations):
            src = arrows[rel[0][1][0]].source
            tgt = arrows[rel[0][1][-1]].target
            acc = np.zeros((self.dims[tgt], self.dims[src]), dtype=np.int64)
            for coeff, path in rel:
                acc = (acc + coeff * self.path_action(path).a) % self.algebra.p
            if acc.any():
                col = int(np.nonzero(acc.any(axis=0))[0][0])
                name = (
                    self.algebra.pres.relation_strings[ri]
                    if ri < len(self.algebra.pres.relation_strings)
                    else f"#{ri}"
                )
                raise RelationViolated(name, self.algebra.pres.vertices[tgt], col)


def make_rep(algebra: FiniteDimAlgebra, dims, matrices: dict[str, list]) -> Representation:
    """Build a representation from raw per-arrow integer matrices (row-major)."""
    mats = []
    p = algebra.p
    dims = tuple(int(d) for d in dims)
    for arrow in algebra.arrows:
        raw = matrices.get(arrow.name)
        shape = (dims[arrow.target], dims[arrow.source])
        if raw is None:
            mats.append(Matrix.zeros(*shape, p))
        else:
            arr = np.asarray(raw, dtype=np.int64).reshape(shape)
            mats.append(Matrix(arr, p))
    return Representation(algebra, dims, mats)


def zero_rep(algebra: FiniteDimAlgebra) -> Representation:
    dims = [0] * algebra.n_vertices
    mats = [
        Matrix.zeros(0, 0, algebra.p)
        for _ in algebra.arrows
    ]
    return Representation(algebra, dims, mats, check=False)


def simple(algebra: FiniteDimAlgebra, i: int) -> Representation:
    dims = [1 if v == i else 0 for v in range(algebra.n_vertices)]
    mats = [
        Matrix.zeros(dims[a.target], dims[a.source], algebra.p) for a in algebra.arrows
    ]
    return Representation(algebra, dims, mats, check=False)


def _basis_positions(algebra: FiniteDimAlgebra, select):
    """Per-vertex (by target) index lists of algebra basis elements passing `select`."""
    per_vertex = [[] for _ in range(algebra.n_vertices)]
    for j in range(algebra.dim):
        if select(j):
            per_vertex[int(algebra.basis_target[j])].append(j)
    return per_vertex


def _action_block(algebra: FiniteDimAlgebra, a: int, rows: list[int], cols: list[int]) -> Matrix:
    m = algebra.left_mult[a].a
    return Matrix(m[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64), algebra.p)


def projective(algebra: FiniteDimAlgebra, i: int) -> Representation:
    """The projective left module on vertex i: basis paths with source i."""
    per_vertex = _basis_positions(algebra, lambda j: int(algebra.basis_source[j]) == i)
    dims = [len(ix) for ix in per_vertex]
    mats = []
    for a, arrow in enumerate(algebra.arrows):
        mats.append(_action_block(algebra, a, per_vertex[arrow.target], per_vertex[arrow.source]))
    return Representation(algebra, dims, mats, check=False)


def projective_generator_position(algebra: FiniteDimAlgebra, i: int) -> int:
    """Row index of the idempotent path inside projective(i)'s vertex-i component."""
    per = [j for j in range(algebra.dim) if int(algebra.basis_source[j]) == i and int(algebra.basis_target[j]) == i]
    return per.index(algebra.idempotent_index[i])


def regular_left(algebra: FiniteDimAlgebra) -> Representation:
    """The left regular module: all basis elements, graded by target vertex."""
    def build():
        per_vertex = _basis_positions(algebra, lambda j: True)
        dims = [len(ix) for ix in per_vertex]
        mats = []
        for a, arrow in enumerate(algebra.arrows):
            mats.append(_action_block(algebra, a, per_vertex[arrow.target], per_vertex[arrow.source]))
        rep = Representation(algebra, dims, mats, check=False)
        return rep, per_vertex
    return algebra.cache("regular_left", build)[0]


def regular_positions(algebra: FiniteDimAlgebra) -> list[list[int]]:
    regular_left(algebra)
    return algebra._caches["regular_left"][1]


def dual(m: Representation) -> Representation:
    """k-dual, a module over the opposite algebra (same arrow order)."""
    opp = m.algebra.opposite()
    mats = [mat.transpose() for mat in m.mats]
    return Representation(opp, m.dims, mats, check=False)


def direct_sum(m: Representation, n: Representation) -> Representation:
    if m.algebra is not n.algebra:
        raise ValueError("direct sum over different algebras")
    dims = [a + b for a, b in zip(m.dims, n.dims)]
    mats = []
    for a in range(len(m.algebra.arrows)):
        mats.append(block_diag_pair(m.mats[a], n.mats[a]))
    return Representation(m.algebra, dims, mats, check=False)


def direct_sum_with_maps(m: Representation, n: Representation):
    """(m (+) n, incl_m, incl_n, proj_m, proj_n)."""
    s = direct_sum(m, n)
    p = m.algebra.p
    incl_m, incl_n, proj_m, proj_n = [], [], [], []
    for i in range(len(m.dims)):
        dm, dn = m.dims[i], n.dims[i]
        top = np.hstack([np.eye(dm, dtype=np.int64), np.zeros((dm, dn), dtype=np.int64)])
        bot = np.hstack([np.zeros((dn, dm), dtype=np.int64), np.eye(dn, dtype=np.int64)])
        incl_m.append(Matrix(top.T, p))
        incl_n.append(Matrix(bot.T, p))
        proj_m.append(Matrix(top, p))
        proj_n.append(Matrix(bot, p))
    return (
        s,
        ModuleMap(m, s, incl_m, check=False),
        ModuleMap(n, s, incl_n, check=False),
        ModuleMap(s, m, proj_m, check=False),
        ModuleMap(s, n, proj_n, check=False),
    )


def block_diag_pair(a: Matrix, b: Matrix) -> Matrix:
    return block_diag([a, b], a.p)


class ModuleMap:
    __slots__ = ("source", "target", "blocks")

    def __init__(self, source: Representation, target: Representation, blocks, check: bool = True):
        self.source = source
        self.target = target
        blocks = list(blocks)
        for i in range(source.algebra.n_vertices):
            want = (target.dims[i], source.dims[i])
            if blocks[i].shape != want:
                raise ValueError(f"block {i} shape {blocks[i].shape} != {want}")
        self.blocks = tuple(blocks)
        if check:
            self.verify()

    def verify(self):
        for a, arrow in enumerate(self.source.algebra.arrows):
            left = self.blocks[arrow.target] @ self.source.mats[a]
            right = self.target.mats[a] @ self.blocks[arrow.source]
            if not left == right:
                raise ValueError(f"naturality fails at arrow {arrow.name}")

    @classmethod
    def zero(cls, source: Representation, target: Representation) -> "ModuleMap":
        p = source.algebra.p
        return cls(
            source,
            target,
            [Matrix.zeros(target.dims[i], source.dims[i], p) for i in range(len(source.dims))],
            check=False,
        )

    @classmethod
    def identity(cls, m: Representation) -> "ModuleMap":
        return cls(m, m, [Matrix.identity(d, m.algebra.p) for d in m.dims], check=False)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ValueError("composition mismatch")
        return ModuleMap(
            other.source,
            self.target,
            [a @ b for a, b in zip(self.blocks, other.blocks)],
            check=False,
        )

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(
            self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)], check=False
        )

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(
            self.source, self.target, [a - b for a, b in zip(self.blocks, other.blocks)], check=False
        )

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [b.scale(c) for b in self.blocks], check=False)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_invertible(self) -> bool:
        return self.source.dims == self.target.dims and all(
            b.is_invertible() for b in self.blocks
        )

    def is_surjective(self) -> bool:
        return all(b.rank() == b.rows for b in self.blocks)

    def is_injective(self) -> bool:
        return all(b.rank() == b.cols for b in self.blocks)

    def rank(self) -> int:
        return sum(b.rank() for b in self.blocks)

    def vec(self) -> np.ndarray:
        return np.concatenate([b.a.reshape(-1) for b in self.blocks]) if self.blocks else np.zeros(0, dtype=np.int64)

    def kernel_columns(self) -> list[np.ndarray]:
        return [b.kernel().a for b in self.blocks]


def map_from_vec(source: Representation, target: Representation, v: np.ndarray) -> ModuleMap:
    p = source.algebra.p
    blocks = []
    off = 0
    for i in range(len(source.dims)):
        r, c = target.dims[i], source.dims[i]
        blocks.append(Matrix(v[off : off + r * c].reshape(r, c), p))
        off += r * c
    return ModuleMap(source, target, blocks, check=False)


def hom_space(m: Representation, n: Representation) -> list[ModuleMap]:
    """Basis of Hom(m, n): solutions of the naturality linear system."""
    if m.algebra is not n.algebra:
        raise ValueError("hom over different algebras")
    p = m.algebra.p
    sizes = [n.dims[i] * m.dims[i] for i in range(len(m.dims))]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    if total == 0:
        return []
    rows = []
    for a, arrow in enumerate(m.algebra.arrows):
        s, t = arrow.source, arrow.target
        r = n.dims[t] * m.dims[s]
        if r == 0:
            continue
        # int8 keeps the large naturality systems compact; entries stay < p
        block = np.zeros((r, total), dtype=np.int8)
        # f_t @ M_a - N_a @ f_s = 0; row-major vec(A X B) = (A kron B^T) vec(X)
        if sizes[t]:
            block[:, offsets[t] : offsets[t + 1]] += np.kron(
                np.eye(n.dims[t], dtype=np.int8), m.mats[a].a.T.astype(np.int8)
            )
        if sizes[s]:
            block[:, offsets[s] : offsets[s + 1]] -= np.kron(
                n.mats[a].a.astype(np.int8), np.eye(m.dims[s], dtype=np.int8)
            )
        rows.append(block % p)
    if not rows:
        mat = np.zeros((0, total), dtype=np.int8)
    else:
        mat = np.vstack(rows)
    basis = kernel(mat, p)
    return [map_from_vec(m, n, basis[:, j]) for j in range(basis.shape[1])]


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_space(m, n))


def end_dim(m: Representation) -> int:
    return len(hom_space(m, m))


def coordinates_in_hom_basis(maps: list[ModuleMap], f: ModuleMap) -> np.ndarray | None:
    """Coordinates of f in the span of `maps`, or None if outside."""
    if not maps:
        return None if not f.is_zero() else np.zeros(0, dtype=np.int64)
    p = f.source.algebra.p
    cols = np.stack([g.vec() for g in maps], axis=1)
    return solve(cols, f.vec(), p)


# -- sub/quotient -------------------------------------------------------------


def column_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Deterministic basis of the column space: the pivot columns of a."""
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    _, piv = rref(a, p)
    return a[:, list(piv)]


def sub_representation(m: Representation, spans: list[np.ndarray]) -> tuple[Representation, ModuleMap]:
    """Subrepresentation on per-vertex column spans (must be arrow-stable)."""
    p = m.algebra.p
    bases = [column_space_basis(np.asarray(s, dtype=np.int64) % p, p) for s in spans]
    dims = [b.shape[1] for b in bases]
    mats = []
    for a, arrow in enumerate(m.algebra.arrows):
        s, t = arrow.source, arrow.target
        img = (m.mats[a].a @ bases[s]) % p
        coords = _solve_matrix(bases[t], img, p)
        if coords is None:
            raise ValueError(f"spans not stable under arrow {m.algebra.arrows[a].name}")
        mats.append(Matrix(coords, p))
    sub = Representation(m.algebra, dims, mats, check=False)
    incl = ModuleMap(sub, m, [Matrix(b, p) for b in bases], check=False)
    return sub, incl


def quotient_representation(m: Representation, spans: list[np.ndarray]) -> tuple[Representation, ModuleMap]:
    """Quotient by the subrepresentation spanned by per-vertex columns."""
    p = m.algebra.p
    projs = []
    secs = []
    dims = []
    for i, s in enumerate(spans):
        s = np.asarray(s, dtype=np.int64)
        s = s.reshape(m.dims[i], 0) if s.size == 0 else s.reshape(m.dims[i], -1)
        s = s % p
        pr, sec = _quotient_projection(s, m.dims[i], p)
        projs.append(pr)
        secs.append(sec)
        dims.append(pr.shape[0])
    mats = []
    for a, arrow in enumerate(m.algebra.arrows):
        s, t = arrow.source, arrow.target
        mats.append(Matrix((projs[t] @ m.mats[a].a @ secs[s]) % p, p))
    quo = Representation(m.algebra, dims, mats, check=False)
    proj = ModuleMap(m, quo, [Matrix(pr, p) for pr in projs], check=False)
    return quo, proj


def _quotient_projection(span: np.ndarray, d: int, p: int):
    """(projection q x d with kernel = colspan, section d x q with proj@sec = I)."""
    r, piv = rref(span.T, p)
    piv = list(piv)
    comp = [j for j in range(d) if j not in piv]
    # x -> x - sum_j x[p_j] * r_j zeroes all pivot coordinates and kills the span
    corr = np.eye(d, dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    for row, pj in enumerate(piv):
        corr = (corr - np.outer(r[row], eye[pj])) % p
    sel = eye[comp, :]
    proj = (sel @ corr) % p
    sec = eye[:, comp]
    return proj, sec


def _solve_matrix(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """X with a @ X = b (column-wise exact solve), or None."""
    if b.shape[1] == 0:
        return np.zeros((a.shape[1], 0), dtype=np.int64)
    if a.shape[1] == 0:
        return None if b.any() else np.zeros((0, b.shape[1]), dtype=np.int64)
    aug = np.hstack([a, b])
    r, piv = rref(aug, p)
    n = a.shape[1]
    if piv and piv[-1] >= n:
        return None
    out = np.zeros((n, b.shape[1]), dtype=np.int64)
    for row, pj in enumerate(piv):
        out[pj] = r[row, n:]
    return out


# -- structure: radical, top, socle -------------------------------------------


def radical_spans(m: Representation) -> list[np.ndarray]:
    spans = []
    for i in range(m.algebra.n_vertices):
        cols = [m.mats[a].a for a, arr in enumerate(m.algebra.arrows) if arr.target == i]
        cols = [c for c in cols if c.shape[1]]
        spans.append(
            np.hstack(cols) if cols else np.zeros((m.dims[i], 0), dtype=np.int64)
        )
    return spans


def top_socle(m: Representation):
    """(top, socle, (radical subrep, inclusion)) of m."""
    p = m.algebra.p
    rad = radical_spans(m)
    top, _ = quotient_representation(m, rad)
    soc_spans = []
    for i in range(m.algebra.n_vertices):
        outs = [m.mats[a].a for a, arr in enumerate(m.algebra.arrows) if arr.source == i]
        outs = [o for o in outs if o.shape[0]]
        if outs:
            soc_spans.append(kernel(np.vstack(outs), p))
        else:
            soc_spans.append(np.eye(m.dims[i], dtype=np.int64))
    socle, _ = sub_representation(m, soc_spans)
    radical = sub_representation(m, rad)
    return top, socle, radical


def top_dims(m: Representation) -> tuple[int, ...]:
    return top_socle(m)[0].dims


# -- isomorphism testing -------------------------------------------------------

ISO_RANDOM_SAMPLES = 64
ISO_EXHAUSTION_CAP = 2**20


def is_isomorphic(m: Representation, n: Representation, seed: int = 0):
    """('yes', witness) / ('no', None) / ('unknown', None)."""
    if m.algebra is not n.algebra:
        raise ValueError("iso test over different algebras")
    if m.dims != n.dims:
        return "no", None
    if m.total_dim == 0:
        return "yes", ModuleMap.zero(m, n)
    maps_mn = hom_space(m, n)
    h = len(maps_mn)
    if h != len(hom_space(n, m)):
        return "no", None
    if len(hom_space(m, m)) != len(hom_space(n, n)):
        return "no", None
    if top_dims(m) != top_dims(n):
        return "no", None
    if h == 0:
        return "no", None
    p = m.algebra.p
    rng = np.random.default_rng(seed)
    for _ in range(ISO_RANDOM_SAMPLES):
        coeffs = rng.integers(0, p, size=h)
        f = _combine(maps_mn, coeffs)
        if f is not None and f.is_invertible():
            return "yes", f
    if p**h <= ISO_EXHAUSTION_CAP:
        for f in _all_combinations(maps_mn, p):
            if f.is_invertible():
                return "yes", f
        return "no", None
    return "unknown", None


def _combine(maps, coeffs) -> ModuleMap | None:
    f = None
    for c, g in zip(coeffs, maps):
        if c % g.source.algebra.p == 0:
            continue
        term = g.scale(int(c))
        f = term if f is None else f + term
    return f


def _all_combinations(maps, p):
    h = len(maps)
    counters = np.zeros(h, dtype=np.int64)
    while True:
        k = 0
        while k < h and counters[k] == p - 1:
            counters[k] = 0
            k += 1
        if k == h:
            return
        counters[k] += 1
        f = _combine(maps, counters)
        if f is not None:
            yield f


# -- string modules ------------------------------------------------------------


class WordError(ValueError):
    pass


def parse_word(algebra: FiniteDimAlgebra, text: str) -> list[tuple[int, int]]:
    """Word letters in walk order: 'd*b' means b then d; 'a^-' inverts a."""
    letters = []
    for tok in reversed([t.strip() for t in text.split("*")]):
        if not tok:
            raise WordError(f"empty letter in word {text!r}")
        if tok.endswith("^-"):
            letters.append((algebra.pres.arrow_index(tok[:-2]), -1))
        else:
            letters.append((algebra.pres.arrow_index(tok), +1))
    return letters


def string_module(algebra: FiniteDimAlgebra, word) -> Representation:
    """Module of a walk: direct letters step forward, inverse letters backward."""
    if isinstance(word, str):
        letters = parse_word(algebra, word)
    else:
        letters = [
            (algebra.pres.arrow_index(a) if isinstance(a, str) else a, s) for a, s in word
        ]
    arrows = algebra.arrows
    if not letters:
        raise WordError("empty word: use simple(i) for a vertex module")
    # walk vertices x_0 .. x_n
    first, fs = letters[0]
    verts = [arrows[first].source if fs > 0 else arrows[first].target]
    for a, s in letters:
        arr = arrows[a]
        cur = verts[-1]
        if s > 0:
            if arr.source != cur:
                raise WordError(f"letter {arr.name} not composable at vertex {cur}")
            verts.append(arr.target)
        else:
            if arr.target != cur:
                raise WordError(f"letter {arr.name}^- not composable at vertex {cur}")
            verts.append(arr.source)
    for (a1, s1), (a2, s2) in zip(letters, letters[1:]):
        if a1 == a2 and s1 != s2:
            raise WordError("immediate backtrack in word")
    dims = [verts.count(v) for v in range(algebra.n_vertices)]
    pos = {}
    counters = [0] * algebra.n_vertices
    for k, v in enumerate(verts):
        pos[k] = counters[v]
        counters[v] += 1
    mats = [np.zeros((dims[a.target], dims[a.source]), dtype=np.int64) for a in arrows]
    for k, (a, s) in enumerate(letters):
        if s > 0:
            mats[a][pos[k + 1], pos[k]] = 1  # x_k -> x_{k+1}
        else:
            mats[a][pos[k], pos[k + 1]] = 1  # x_{k+1} -> x_k
    rep = Representation(algebra, dims, [Matrix(m, algebra.p) for m in mats], check=True)
    return rep


def random_invertible(d: int, p: int, rng) -> Matrix:
    while True:
        m = Matrix(rng.integers(0, p, size=(d, d)), p)
        if m.is_invertible():
            return m


def conjugate(m: Representation, basis_change: list[Matrix]) -> Representation:
    """Same module in new per-vertex bases g: matrices become g_t M g_s^{-1}."""
    invs = [g.inverse() for g in basis_change]
    mats = []
    for a, arrow in enumerate(m.algebra.arrows):
        mats.append(basis_change[arrow.target] @ m.mats[a] @ invs[arrow.source])
    return Representation(m.algebra, m.dims, mats, check=False)
