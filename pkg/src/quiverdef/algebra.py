"""Finite-dimensional path algebra quotients kQ/I.

The builder runs a vector enumeration: candidate paths spawn only from
surviving basis elements, relation instances r*w are imposed as linear vectors
once every monomial of r*w fits inside the explored tree, and eliminating a
path re-imposes coincidences for its already-spawned children.  The procedure
stops successfully once two consecutive lengths produce no new basis vectors
and no instance is pending; the resulting left-multiplication matrices are
then certified directly against every defining relation, which pins the
dimension from both sides (the enumeration quotient surjects onto the algebra,
and the certified matrices make it a genuine module over it).

`saturation_dimension` is the independent oracle: a literal dense saturation
of the ideal inside the span of all paths up to a length cap.
"""

from __future__ import annotations

import heapq

import numpy as np

from .gf import Matrix, check_prime
from .presentation import AlgebraPresentation, Arrow, PresentationError, make_presentation


class NotFiniteDimensional(RuntimeError):
    """Saturation did not stabilize below the length cap."""


class OracleBudgetExceeded(RuntimeError):
    """The dense path-space oracle would exceed its path budget."""


def default_max_len(pres: AlgebraPresentation) -> int:
    longest = max((max(len(p) for _, p in r) for r in pres.relations), default=1)
    return max(4 * longest, 16)


class _Enumerator:
    """Vector enumeration of kQ/I acting on the tree of paths."""

    def __init__(self, pres: AlgebraPresentation, p: int, max_len: int):
        self.pres = pres
        self.p = p
        self.max_len = max_len
        self.paths: list[tuple[int, tuple[int, ...]]] = []  # (source vertex, arrows)
        self.index: dict[tuple[int, tuple[int, ...]], int] = {}
        self.key: list[tuple] = []  # (length, arrow-name tuple) for elimination order
        self.target: list[int] = []
        self.reprs: list[dict[int, int] | None] = []  # None while basic
        self.children: list[dict[int, int]] = []  # arrow index -> child path index
        self.queue: list[tuple[int, int, int]] = []  # (due length, path idx, relation idx)
        self.rel_span = [max(len(path) for _, path in r) for r in pres.relations]
        self.new_basic_at: dict[int, int] = {}  # length -> count of still-basic survivors
        self.expr_cache: dict[int, dict[int, int]] = {}  # reduced class vectors

    # -- path bookkeeping --------------------------------------------------

    def _spawn(self, source: int, arrows: tuple[int, ...]) -> int:
        key = (source, arrows)
        if key in self.index:
            return self.index[key]
        idx = len(self.paths)
        self.paths.append(key)
        self.index[key] = idx
        names = tuple(self.pres.arrows[i].name for i in arrows)
        self.key.append((len(arrows), names))
        self.target.append(self.pres.arrows[arrows[-1]].target if arrows else source)
        self.reprs.append(None)
        self.children.append({})
        for ri, rel in enumerate(self.pres.relations):
            if self.pres.arrows[rel[0][1][0]].source == self.target[idx]:
                heapq.heappush(self.queue, (len(arrows) + self.rel_span[ri], idx, ri))
        return idx

    def _unit(self, idx: int) -> dict[int, int]:
        return {idx: 1}

    def _reduce(self, vec: dict[int, int]) -> dict[int, int]:
        while True:
            hit = None
            for idx in vec:
                if self.reprs[idx] is not None:
                    hit = idx
                    break
            if hit is None:
                return {i: c for i, c in vec.items() if c % self.p}
            c = vec.pop(hit)
            rep = self._compressed(hit)
            for j, cj in rep.items():
                vec[j] = (vec.get(j, 0) + c * cj) % self.p
            vec = {i: c for i, c in vec.items() if c % self.p}

    def _compressed(self, idx: int) -> dict[int, int]:
        rep = self.reprs[idx]
        if any(self.reprs[j] is not None for j in rep):
            rep = self._reduce(dict(rep))
            self.reprs[idx] = rep
        return rep

    def _expr(self, idx: int) -> dict[int, int]:
        """Reduced class vector of a path, cached while its support stays basic."""
        reprs = self.reprs
        cached = self.expr_cache.get(idx)
        if cached is not None and all(reprs[j] is None for j in cached):
            return cached
        v = self._reduce(self._unit(idx))
        self.expr_cache[idx] = v
        return v

    def _mult_arrow(self, vec: dict[int, int], a: int) -> dict[int, int]:
        arrow = self.pres.arrows[a]
        reprs = self.reprs
        if any(reprs[i] is not None for i in vec):
            vec = self._reduce(dict(vec))
        out: dict[int, int] = {}
        p = self.p
        for idx, c in vec.items():
            if self.target[idx] != arrow.source:
                continue  # non-composable: the product is zero
            child = self.children[idx].get(a)
            if child is None:
                src, arrows = self.paths[idx]
                child = self._spawn(src, arrows + (a,))
                self.children[idx][a] = child
            for j, cj in self._expr(child).items():
                out[j] = (out.get(j, 0) + c * cj) % p
        return {i: c for i, c in out.items() if c}

    def _mult_path(self, vec: dict[int, int], path: tuple[int, ...]) -> dict[int, int]:
        for a in path:
            if not vec:
                return vec
            vec = self._mult_arrow(vec, a)
        return vec

    # -- imposition --------------------------------------------------------

    def _impose(self, vec: dict[int, int]):
        stack = [vec]
        while stack:
            v = self._reduce(stack.pop())
            if not v:
                continue
            lead = max(v, key=lambda i: self.key[i])
            inv = pow(v[lead], self.p - 2, self.p)
            rest = {j: (-inv * c) % self.p for j, c in v.items() if j != lead and c % self.p}
            self.reprs[lead] = rest
            length = self.key[lead][0]
            if length in self.new_basic_at:
                self.new_basic_at[length] -= 1
            for a, child in list(self.children[lead].items()):
                w = self._mult_arrow(dict(rest), a)
                w[child] = (w.get(child, 0) - 1) % self.p
                stack.append(w)

    def _drain(self, due_cap: int | None):
        while self.queue and (due_cap is None or self.queue[0][0] <= due_cap):
            _, idx, ri = heapq.heappop(self.queue)
            if self.reprs[idx] is not None:
                continue  # instance on an eliminated path is a consequence
            acc: dict[int, int] = {}
            for coeff, path in self.pres.relations[ri]:
                part = self._mult_path(self._unit(idx), path)
                for j, cj in part.items():
                    acc[j] = (acc.get(j, 0) + coeff * cj) % self.p
            self._impose(acc)

    # -- main loop ----------------------------------------------------------

    def run(self):
        for v in range(len(self.pres.vertices)):
            self._spawn(v, ())
        level = 0
        while True:
            level += 1
            if level > self.max_len:
                raise NotFiniteDimensional(
                    f"not finite-dimensional within max_len={self.max_len}"
                )
            self.new_basic_at[level] = 0
            for idx in range(len(self.paths)):
                if self.reprs[idx] is None and self.key[idx][0] == level - 1:
                    src, arrows = self.paths[idx]
                    for a, arrow in enumerate(self.pres.arrows):
                        if arrow.source == self.target[idx] and a not in self.children[idx]:
                            child = self._spawn(src, arrows + (a,))
                            self.children[idx][a] = child
                            self.new_basic_at[level] += 1
            self._drain(level)
            empty_now = self.new_basic_at.get(level, 0) <= 0
            empty_prev = level >= 2 and self.new_basic_at.get(level - 1, 0) <= 0
            if empty_now and empty_prev and not self.queue:
                # recount honestly: eliminations may have emptied earlier levels
                lengths = {self.key[i][0] for i in range(len(self.paths)) if self.reprs[i] is None}
                top = max(lengths)
                if top <= level - 2:
                    self._finalize()
                    return

    def _finalize(self):
        """Totalize the action and sweep remaining instances to a fixed point.

        Cascade-created basis paths can miss the level spawn step and the
        instance queue may still hold late entries; this sweep closes both.
        """
        while True:
            spawned = False
            for idx in range(len(self.paths)):
                if self.reprs[idx] is not None:
                    continue
                src, arrows = self.paths[idx]
                for a, arrow in enumerate(self.pres.arrows):
                    if arrow.source == self.target[idx] and a not in self.children[idx]:
                        child = self._spawn(src, arrows + (a,))
                        self.children[idx][a] = child
                        spawned = True
            had_queue = bool(self.queue)
            self._drain(None)
            if not spawned and not had_queue and not self.queue:
                return


class FiniteDimAlgebra:
    """kQ/I with a computed basis of path normal forms and exact structure data."""

    def __init__(self, pres: AlgebraPresentation, p: int, enum: _Enumerator):
        self.pres = pres
        self.p = p
        basic = [i for i in range(len(enum.paths)) if enum.reprs[i] is None]
        basic.sort(key=lambda i: (enum.key[i][0], enum.key[i][1], enum.paths[i][0]))
        self.basis_paths = [enum.paths[i] for i in basic]
        self.dim = len(self.basis_paths)
        self.basis_source = np.array([s for s, _ in self.basis_paths], dtype=np.int64)
        self.basis_target = np.array([enum.target[i] for i in basic], dtype=np.int64)
        self.idempotent_index = {}
        for j, (s, arrows) in enumerate(self.basis_paths):
            if not arrows:
                self.idempotent_index[s] = j
        pos = {i: j for j, i in enumerate(basic)}
        mats = []
        for a, arrow in enumerate(self.pres.arrows):
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            for j, i in enumerate(basic):
                if enum.target[i] != arrow.source:
                    continue
                child = enum.children[i][a]
                for idx, c in enum._reduce({child: 1}).items():
                    m[pos[idx], j] = c
            mats.append(Matrix(m, p))
        self.left_mult = mats
        self._certify()
        self._opposite: FiniteDimAlgebra | None = None
        self._right_mult: list[Matrix] | None = None
        self._caches: dict = {}
        self.tensor_factors: tuple | None = None

    # -- structure ----------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.pres.vertices)

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.pres.arrows

    def radical_indices(self) -> list[int]:
        return [j for j, (_, arrows) in enumerate(self.basis_paths) if arrows]

    def path_matrix(self, path: tuple[int, ...]) -> Matrix:
        """Left multiplication by the class of a path, on the whole basis."""
        m = Matrix.identity(self.dim, self.p)
        for a in path:
            m = self.left_mult[a] @ m
        return m

    def element_vector(self, path: tuple[int, ...], source: int) -> np.ndarray:
        """Class of the path (starting at `source`) as a basis coordinate vector."""
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.idempotent_index[source]] = 1
        for a in path:
            v = self.left_mult[a].apply(v)
        return v

    def right_mult_matrices(self) -> list[Matrix]:
        """Right multiplication by each arrow, on the basis."""
        if self._right_mult is None:
            out = []
            for a, arrow in enumerate(self.pres.arrows):
                m = np.zeros((self.dim, self.dim), dtype=np.int64)
                av = self.element_vector((a,), arrow.source)
                for j, (src, arrows) in enumerate(self.basis_paths):
                    if src != arrow.target:
                        continue  # basis_j * a needs source(basis_j) = target(a)
                    v = av.copy()
                    for b in arrows:
                        v = self.left_mult[b].apply(v)
                    m[:, j] = v
                out.append(Matrix(m, self.p))
            self._right_mult = out
        return self._right_mult

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product x*y of two basis-coordinate vectors (y acts first)."""
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            src_i, arrows_i = self.basis_paths[i]
            v = np.where(self.basis_target == src_i, y, 0)  # e_{src_i} * y
            for a in arrows_i:
                v = self.left_mult[a].apply(v)
            out = (out + int(x[i]) * v) % self.p
        return out

    def _certify(self):
        for rel in self.pres.relations:
            acc = np.zeros((self.dim, self.dim), dtype=np.int64)
            for coeff, path in rel:
                acc = (acc + coeff * self.path_matrix(path).a) % self.p
            if acc.any():
                raise AssertionError("relation certificate failed on built algebra")

    # -- derived algebras ----------------------------------------------------

    def opposite(self) -> "FiniteDimAlgebra":
        if self._opposite is None:
            pres = opposite_presentation(self.pres)
            opp = build_algebra(pres, self.p)
            opp._opposite = self
            self._opposite = opp
        return self._opposite

    def cache(self, key, fn):
        if key not in self._caches:
            self._caches[key] = fn()
        return self._caches[key]


def build_algebra(pres: AlgebraPresentation, p: int, max_len: int | None = None) -> FiniteDimAlgebra:
    check_prime(p)
    if max_len is None:
        max_len = default_max_len(pres)
    enum = _Enumerator(pres, p, max_len)
    enum.run()
    return FiniteDimAlgebra(pres, p, enum)


def opposite_presentation(pres: AlgebraPresentation) -> AlgebraPresentation:
    arrows = [(a.name, pres.vertices[a.target], pres.vertices[a.source]) for a in pres.arrows]
    rel_strings = []
    for rel in pres.relations:
        # reversed path displayed in function order = original application order
        parts = [(coeff, "*".join(pres.arrows[i].name for i in path)) for coeff, path in rel]
        rel_strings.append(_signed(parts))
    return make_presentation(
        name=pres.name + "^op",
        vertices=list(pres.vertices),
        arrows=arrows,
        relation_strings=rel_strings,
        composition=pres.composition,
    )


def tensor_algebras(a: FiniteDimAlgebra, b: FiniteDimAlgebra) -> FiniteDimAlgebra:
    """A (x) B presented on the product quiver with commuting-square relations."""
    if a.p != b.p:
        raise PresentationError(f"characteristic mismatch GF({a.p}) vs GF({b.p})")
    pa, pb = a.pres, b.pres
    vertices = [f"{u}|{v}" for u in pa.vertices for v in pb.vertices]

    def vtx(i, j):
        return f"{pa.vertices[i]}|{pb.vertices[j]}"

    arrows = []
    left_name = {}
    right_name = {}
    for ai, arr in enumerate(pa.arrows):
        for j in range(len(pb.vertices)):
            nm = f"{arr.name}|{pb.vertices[j]}"
            left_name[(ai, j)] = nm
            arrows.append((nm, vtx(arr.source, j), vtx(arr.target, j)))
    for bi, arr in enumerate(pb.arrows):
        for i in range(len(pa.vertices)):
            nm = f"{pa.vertices[i]}|{arr.name}"
            right_name[(i, bi)] = nm
            arrows.append((nm, vtx(i, arr.source), vtx(i, arr.target)))

    def lift_left(path, j):
        return [left_name[(ai, j)] for ai in path]

    def lift_right(path, i):
        return [right_name[(i, bi)] for bi in path]

    rels = []
    for rel in pa.relations:
        for j in range(len(pb.vertices)):
            parts = []
            for coeff, path in rel:
                word = "*".join(reversed(lift_left(path, j)))
                parts.append((coeff, word))
            rels.append(_signed(parts))
    for rel in pb.relations:
        for i in range(len(pa.vertices)):
            parts = []
            for coeff, path in rel:
                word = "*".join(reversed(lift_right(path, i)))
                parts.append((coeff, word))
            rels.append(_signed(parts))
    for ai, arr_a in enumerate(pa.arrows):
        for bi, arr_b in enumerate(pb.arrows):
            first_b = f"{right_name[(arr_a.source, bi)]}"
            then_a = f"{left_name[(ai, arr_b.target)]}"
            first_a = f"{left_name[(ai, arr_b.source)]}"
            then_b = f"{right_name[(arr_a.target, bi)]}"
            rels.append(f"{then_a}*{first_b} - {then_b}*{first_a}")

    pres = make_presentation(
        name=f"{pa.name}(x){pb.name}", vertices=vertices, arrows=arrows, relation_strings=rels
    )
    alg = build_algebra(pres, a.p)
    if alg.dim != a.dim * b.dim:
        raise AssertionError(
            f"tensor algebra dimension {alg.dim} != {a.dim}*{b.dim}"
        )
    alg.tensor_factors = (a, b)
    return alg


def _signed(parts: list[tuple[int, str]]) -> str:
    s = ""
    for k, (coeff, word) in enumerate(parts):
        if k == 0:
            prefix = "" if coeff >= 0 else "-"
        else:
            prefix = " + " if coeff >= 0 else " - "
        c = abs(coeff)
        body = word if c == 1 else f"{c}*{word}"
        s += f"{prefix}{body}"
    return s


# -- independent oracle -------------------------------------------------------


def saturation_dimension(
    pres: AlgebraPresentation,
    p: int,
    window: int,
    overshoot: int = 4,
    budget: int = 8000,
) -> int:
    """Dense path-space oracle: dim of span(paths of length <= window) mod I.

    Saturates the two-sided ideal inside the span of all paths of length
    <= cap = window + overshoot (multiples whose monomials overflow the cap
    are dropped whole), then intersects with the window span by a rank
    computation.  The result is an upper bound on the span of the length
    filtration in kQ/I that stabilizes at the exact value once the overshoot
    clears every needed rewriting instance; run at two overshoots and compare.
    """
    check_prime(p)
    cap = window + overshoot
    paths: list[tuple[int, tuple[int, ...]]] = [(v, ()) for v in range(len(pres.vertices))]
    frontier = list(paths)
    for _ in range(cap):
        nxt = []
        for src, arrows in frontier:
            tgt = pres.arrows[arrows[-1]].target if arrows else src
            for a, arrow in enumerate(pres.arrows):
                if arrow.source == tgt:
                    nxt.append((src, arrows + (a,)))
        paths.extend(nxt)
        frontier = nxt
        if len(paths) > budget:
            raise OracleBudgetExceeded(f"path count exceeds budget {budget}")

    n_vert = len(pres.vertices)

    def tail(pk):
        src, arrows = pk
        return pres.arrows[arrows[-1]].target if arrows else src

    # per-(source, target) blocks; short paths get low in-block positions
    paths.sort(key=lambda pk: (len(pk[1]), pk[1]))
    block_paths: dict[tuple[int, int], list] = {}
    block_pos: dict[tuple[int, tuple], tuple[tuple[int, int], int]] = {}
    for pk in paths:
        blk = (pk[0], tail(pk))
        lst = block_paths.setdefault(blk, [])
        block_pos[pk] = (blk, len(lst))
        lst.append(pk)
    long_mask = {
        blk: sum(1 << i for i, pk in enumerate(lst) if len(pk[1]) > window)
        for blk, lst in block_paths.items()
    }
    window_count = {
        blk: sum(1 for pk in lst if len(pk[1]) <= window) for blk, lst in block_paths.items()
    }

    n_arrows = len(pres.arrows)
    use_bits = p == 2
    echelons: dict[tuple[int, int], dict[int, object]] = {blk: {} for blk in block_paths}
    rows_by_block: dict[tuple[int, int], list] = {blk: [] for blk in block_paths}

    def to_row(blk, entries):
        if use_bits:
            row = 0
            for pos, c in entries:
                if c % 2:
                    row ^= 1 << pos
            return row
        row = np.zeros(len(block_paths[blk]), dtype=np.int64)
        for pos, c in entries:
            row[pos] = (row[pos] + c) % p
        return row

    def lead_of(blk, row):
        if use_bits:
            return (row & -row).bit_length() - 1 if row else -1
        nz = np.nonzero(row)[0]
        return int(nz[0]) if nz.size else -1

    def reduce_row(blk, row):
        table = echelons[blk]
        while True:
            lead = lead_of(blk, row)
            if lead < 0 or lead not in table:
                return row, lead
            if use_bits:
                row ^= table[lead]
            else:
                row = (row - row[lead] * table[lead]) % p

    def mult(blk, row, a, left: bool):
        """Left or right arrow product of a row; None when zero or overflowing."""
        s, t = blk
        arrow = pres.arrows[a]
        if left:
            if arrow.source != t:
                return None, None  # zero product
            nblk = (s, arrow.target)
        else:
            if arrow.target != s:
                return None, None
            nblk = (arrow.source, t)
        lst = block_paths[blk]
        if use_bits:
            positions = [i for i in range(row.bit_length()) if (row >> i) & 1]
            coeffs = [1] * len(positions)
        else:
            positions = list(np.nonzero(row)[0])
            coeffs = [int(row[i]) for i in positions]
        entries = []
        for pos, c in zip(positions, coeffs):
            src, arrows = lst[pos]
            key = (src, arrows + (a,)) if left else (arrow.source, (a,) + arrows)
            hit = block_pos.get(key)
            if hit is None:
                return None, None  # a monomial overflows the cap: drop the instance
            entries.append((hit[1], c))
        if not entries:
            return None, None
        return nblk, to_row(nblk, entries)

    work: list[tuple[tuple[int, int], object]] = []
    for rel in pres.relations:
        src = pres.arrows[rel[0][1][0]].source
        tgt = pres.arrows[rel[0][1][-1]].target
        blk = (src, tgt)
        entries = [(block_pos[(src, path)][1], coeff) for coeff, path in rel]
        work.append((blk, to_row(blk, entries)))

    while work:
        blk, row = work.pop()
        row, lead = reduce_row(blk, row)
        if lead < 0:
            continue
        if not use_bits:
            row = (row * pow(int(row[lead]), p - 2, p)) % p
        echelons[blk][lead] = row
        rows_by_block[blk].append(row)
        for a in range(n_arrows):
            for left in (True, False):
                nblk, prod = mult(blk, row, a, left)
                if prod is not None:
                    work.append((nblk, prod))

    dim = 0
    for blk, lst in block_paths.items():
        rows = rows_by_block[blk]
        total_rank = len(rows)
        if use_bits:
            mask = long_mask[blk]
            restricted = [r & mask for r in rows]
            long_rank = _bit_rank(restricted)
        else:
            long_cols = [i for i, pk in enumerate(lst) if len(pk[1]) > window]
            if rows and long_cols:
                from .gf import rank as _rank

                long_rank = _rank(np.stack(rows)[:, long_cols], p)
            else:
                long_rank = 0
        dim += window_count[blk] - (total_rank - long_rank)
    return dim


def relation_length_jump(pres: AlgebraPresentation) -> int:
    """Largest monomial-length gap inside one relation (rewriting overshoot)."""
    delta = 0
    for rel in pres.relations:
        lens = [len(path) for _, path in rel]
        if len(lens) > 1:
            delta = max(delta, max(lens) - min(lens))
    return delta


def oracle_certified_dimension(
    pres: AlgebraPresentation, p: int, window: int, budget: int = 6000, rounds: int = 4
) -> int | None:
    """Windowed saturation dimension certified by two-overshoot agreement.

    Returns None when the path budget is exhausted before two consecutive
    overshoots agree; the caller then falls back to builder-level two-cap
    agreement.
    """
    base = relation_length_jump(pres) + 3
    prev = None
    for k in range(rounds):
        try:
            cur = saturation_dimension(pres, p, window, base + k, budget=budget)
        except OracleBudgetExceeded:
            return None
        if prev is not None and cur == prev:
            return cur
        prev = cur
    return None


def _bit_rank(rows: list[int]) -> int:
    table: dict[int, int] = {}
    for row in rows:
        while row:
            lead = (row & -row).bit_length() - 1
            if lead not in table:
                table[lead] = row
                break
            row ^= table[lead]
    return len(table)
