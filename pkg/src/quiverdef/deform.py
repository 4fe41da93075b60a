"""Obstruction calculus for module deformations over k[t]/(t^n).

A truncated lift keeps one matrix per arrow with entries in k[t]/(t^n),
reducing to the base module at t = 0.  Extending a lift one order means
solving D x = -defect where D is the linearized relation map at the base
module; the kernel of D is the cocycle space, the conjugation coboundaries
form the gauge subspace inside it, and branch enumeration runs over gauge
cosets with full backtracking.  Classification for one-dimensional tangent
space reads the obstruction order off the deepest branch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .gf import Matrix, check_prime, kernel, quotient_representatives, rank, rref, solve
from . import homalg as H
from . import reps as R
from .reps import Representation


class SearchBudgetExceeded(RuntimeError):
    pass


class BruteForceBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TruncatedCoefficientRing:
    """k[t]/(t^order); order 2 is the ring of dual numbers."""

    order: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if self.order < 1:
            raise ValueError("order must be >= 1")


class TruncatedLift:
    """Arrow matrices X_a = sum_k t^k X_a[k] over k[t]/(t^order), X_a[0] = base."""

    def __init__(self, base: Representation, order: int, coeffs: dict[int, list[Matrix]]):
        self.base = base
        self.order = order
        self.coeffs = coeffs
        for a, mats in coeffs.items():
            if len(mats) != order:
                raise ValueError("need one matrix per t-power below the order")
            if not mats[0] == base.mats[a]:
                raise ValueError("reduction mod t must equal the base module")

    @classmethod
    def trivial(cls, base: Representation, order: int) -> "TruncatedLift":
        coeffs = {}
        for a, m in enumerate(base.mats):
            coeffs[a] = [m] + [Matrix.zeros(m.rows, m.cols, base.algebra.p) for _ in range(order - 1)]
        return cls(base, order, coeffs)

    def first_order_part(self) -> dict[int, Matrix]:
        return {a: mats[1] for a, mats in self.coeffs.items()}

    def extended_by_zero(self) -> "TruncatedLift":
        coeffs = {
            a: mats + [Matrix.zeros(mats[0].rows, mats[0].cols, self.base.algebra.p)]
            for a, mats in self.coeffs.items()
        }
        return TruncatedLift(self.base, self.order + 1, coeffs)

    def relation_values(self, upto: int | None = None) -> list[np.ndarray]:
        """Each relation evaluated over k[t]/(t^upto): array (upto, rows, cols)."""
        if upto is None:
            upto = self.order
        algebra = self.base.algebra
        p = algebra.p
        out = []
        for rel in algebra.pres.relations:
            src = algebra.arrows[rel[0][1][0]].source
            tgt = algebra.arrows[rel[0][1][-1]].target
            acc = np.zeros((upto, self.base.dims[tgt], self.base.dims[src]), dtype=np.int64)
            for coeff, path in rel:
                term = _poly_identity(self.base.dims[algebra.arrows[path[0]].source], upto)
                for a in path:
                    term = _poly_matmul(
                        np.stack([m.a for m in self.coeffs[a]])[:upto], term, p
                    )
                acc = (acc + coeff * term) % p
            out.append(acc)
        return out

    def is_valid(self) -> bool:
        return all(not v.any() for v in self.relation_values())

    def check_valid(self):
        if not self.is_valid():
            raise ValueError("relations do not vanish over the truncated ring")


def _poly_identity(d: int, upto: int) -> np.ndarray:
    out = np.zeros((upto, d, d), dtype=np.int64)
    out[0] = np.eye(d, dtype=np.int64)
    return out


def _poly_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Truncated product of polynomial matrices (power, rows, cols)."""
    upto = max(a.shape[0], b.shape[0])
    out = np.zeros((upto, a.shape[1], b.shape[2]), dtype=np.int64)
    for i in range(min(a.shape[0], upto)):
        for j in range(min(b.shape[0], upto - i)):
            out[i + j] = (out[i + j] + a[i] @ b[j]) % p
    return out


# -- linearized relation data --------------------------------------------------


@dataclass
class DeformationSetup:
    module: Representation
    offsets: np.ndarray            # unknown layout: per-arrow slices of vec(E_a)
    d_matrix: np.ndarray           # linearized relations, rows x unknowns
    cocycles: np.ndarray           # kernel basis of d_matrix (columns)
    gauge: np.ndarray              # coboundary columns inside the cocycle space
    tangent_reps: list[int]        # cocycle column indices spanning Z/B

    @property
    def tangent_dim(self) -> int:
        return len(self.tangent_reps)


def deformation_setup(m: Representation) -> DeformationSetup:
    algebra = m.algebra
    p = algebra.p
    sizes = [m.dims[a.target] * m.dims[a.source] for a in algebra.arrows]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    rows = []
    for rel in algebra.pres.relations:
        src = algebra.arrows[rel[0][1][0]].source
        tgt = algebra.arrows[rel[0][1][-1]].target
        block = np.zeros((m.dims[tgt] * m.dims[src], total), dtype=np.int64)
        for coeff, path in rel:
            for k, a in enumerate(path):
                if sizes[a] == 0:
                    continue
                pre = _pre_matrix(m, path, k)
                post = _post_matrix(m, path, k)
                block[:, offsets[a] : offsets[a + 1]] += coeff * np.kron(post, pre.T)
        rows.append(block % p)
    d_matrix = np.vstack(rows) if rows else np.zeros((0, total), dtype=np.int64)
    cocycles = kernel(d_matrix, p) if total else np.zeros((0, 0), dtype=np.int64)

    # gauge: E_a = h_t M_a - M_a h_s for vertex-wise h
    hsizes = [d * d for d in m.dims]
    hoffsets = np.concatenate([[0], np.cumsum(hsizes)])
    g = np.zeros((total, int(hoffsets[-1])), dtype=np.int64)
    for a, arrow in enumerate(algebra.arrows):
        s, t = arrow.source, arrow.target
        if sizes[a] == 0:
            continue
        if hsizes[t]:
            g[offsets[a] : offsets[a + 1], hoffsets[t] : hoffsets[t + 1]] += np.kron(
                np.eye(m.dims[t], dtype=np.int64), m.mats[a].a.T
            )
        if hsizes[s]:
            g[offsets[a] : offsets[a + 1], hoffsets[s] : hoffsets[s + 1]] -= np.kron(
                m.mats[a].a, np.eye(m.dims[s], dtype=np.int64)
            )
    g %= p
    gauge = _column_basis(g, p)
    if d_matrix.size and gauge.size:
        if (d_matrix @ gauge % p).any():
            raise AssertionError("gauge subspace escapes the cocycle kernel")
    reps_idx = quotient_representatives(gauge, cocycles, p)
    return DeformationSetup(m, offsets, d_matrix, cocycles, gauge, reps_idx)


def _pre_matrix(m: Representation, path: tuple[int, ...], k: int) -> np.ndarray:
    """Action of the path segment applied before position k."""
    if k == 0:
        d = m.dims[m.algebra.arrows[path[0]].source]
        return np.eye(d, dtype=np.int64)
    return m.path_action(path[:k]).a


def _post_matrix(m: Representation, path: tuple[int, ...], k: int) -> np.ndarray:
    """Action of the path segment applied after position k."""
    if k == len(path) - 1:
        d = m.dims[m.algebra.arrows[path[k]].target]
        return np.eye(d, dtype=np.int64)
    return m.path_action(path[k + 1 :]).a


def _column_basis(a: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    _, piv = rref(a, p)
    return a[:, list(piv)]


def vec_to_coeffs(m: Representation, offsets: np.ndarray, v: np.ndarray) -> dict[int, Matrix]:
    out = {}
    for a, arrow in enumerate(m.algebra.arrows):
        r, c = m.dims[arrow.target], m.dims[arrow.source]
        out[a] = Matrix(v[int(offsets[a]) : int(offsets[a + 1])].reshape(r, c), m.algebra.p)
    return out


def lift_with_first_order(m: Representation, e_vec: np.ndarray, setup: DeformationSetup) -> TruncatedLift:
    coeffs = {}
    e = vec_to_coeffs(m, setup.offsets, e_vec)
    for a, mat in enumerate(m.mats):
        coeffs[a] = [mat, e[a]]
    return TruncatedLift(m, 2, coeffs)


def first_order_lifts(m: Representation, setup: DeformationSetup | None = None) -> list[TruncatedLift]:
    """One order-2 lift per basis vector of cocycles modulo coboundaries."""
    setup = setup or deformation_setup(m)
    lifts = []
    for j in setup.tangent_reps:
        lifts.append(lift_with_first_order(m, setup.cocycles[:, j], setup))
    return lifts


@dataclass
class ExtensionFamily:
    particular: TruncatedLift       # one extension to the next order
    kernel_basis: np.ndarray        # columns: all homogeneous solutions
    gauge_basis: np.ndarray         # columns: the coboundary subspace
    free_reps: list[int]            # kernel columns spanning kernel/gauge


def extend_lift(lift: TruncatedLift, setup: DeformationSetup | None = None):
    """Solve for the next coefficient; None when the extension is obstructed."""
    m = lift.base
    setup = setup or deformation_setup(m)
    p = m.algebra.p
    ext = lift.extended_by_zero()
    defects = ext.relation_values()
    b = np.concatenate([(-v[lift.order]).reshape(-1) % p for v in defects]) if defects else np.zeros(0, dtype=np.int64)
    x = solve(setup.d_matrix, b, p) if setup.d_matrix.size else (np.zeros(0, dtype=np.int64) if not b.any() else None)
    if x is None:
        return None
    xc = vec_to_coeffs(m, setup.offsets, x)
    coeffs = {a: mats + [xc[a]] for a, mats in lift.coeffs.items()}
    particular = TruncatedLift(m, lift.order + 1, coeffs)
    free = quotient_representatives(setup.gauge, setup.cocycles, p)
    return ExtensionFamily(particular, setup.cocycles, setup.gauge, free)


def _bump_top(lift: TruncatedLift, setup: DeformationSetup, delta: np.ndarray) -> TruncatedLift:
    m = lift.base
    d = vec_to_coeffs(m, setup.offsets, delta)
    coeffs = {a: mats[:-1] + [mats[-1] + d[a]] for a, mats in lift.coeffs.items()}
    return TruncatedLift(m, lift.order, coeffs)


@dataclass
class VersalReport:
    tangent_dim: int
    verdict: str                   # trivial | truncated | smooth_to_order | tangent_dim_at_least_2
    order: int | None              # m for truncated, N for smooth_to_order
    certified_order: int
    universal: bool
    branches_explored: int = 0
    elapsed_ms: int = 0
    field_p: int = 2
    module: str = ""

    def ring_description(self) -> str:
        if self.verdict == "trivial":
            return "k"
        if self.verdict == "truncated":
            return f"k[[t]]/(t^{self.order})"
        if self.verdict == "smooth_to_order":
            return f"k[[t]] (unobstructed through order {self.order})"
        return f"tangent dimension {self.tangent_dim} >= 2 (no presentation attempted)"

    def invariant_fields(self) -> tuple:
        return (self.tangent_dim, self.verdict, self.order, self.universal)

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "field": self.field_p,
            "tangent_dim": self.tangent_dim,
            "verdict": self.verdict,
            "order": self.order,
            "ring": self.ring_description(),
            "universal": self.universal,
            "branches_explored": self.branches_explored,
            "elapsed_ms": self.elapsed_ms,
        }


def _is_universal(m: Representation) -> bool:
    # dim End = 1 makes the deformation ring universal; over a self-injective
    # algebra stable End = 1 suffices as well (and survives adding projective
    # summands), and a projective module itself has universal ring k
    if R.end_dim(m) == 1:
        return True
    if not H.is_self_injective(m.algebra):
        return False
    if H.stable_end_dim(m) == 1:
        return True
    return H.strip_projectives(m).core.total_dim == 0


def versal_classify(
    m: Representation,
    max_order: int = 8,
    branch_cap: int = 4096,
    module_name: str = "",
    first_order_scale: int = 1,
) -> VersalReport:
    if max_order < 3:
        raise ValueError("max_order must be >= 3")
    t0 = time.monotonic()
    setup = deformation_setup(m)
    d = setup.tangent_dim
    universal = _is_universal(m)
    p = m.algebra.p

    def report(verdict, order, branches):
        return VersalReport(
            tangent_dim=d,
            verdict=verdict,
            order=order,
            certified_order=max_order,
            universal=universal,
            branches_explored=branches,
            elapsed_ms=int((time.monotonic() - t0) * 1000),
            field_p=p,
            module=module_name,
        )

    if d == 0:
        return report("trivial", None, 0)
    if d >= 2:
        return report("tangent_dim_at_least_2", None, 0)

    scale = first_order_scale % p
    if scale == 0:
        raise ValueError("first_order_scale must be nonzero in the field")
    e_vec = (setup.cocycles[:, setup.tangent_reps[0]] * scale) % p
    first = lift_with_first_order(m, e_vec, setup)
    first.check_valid()
    max_reached = 2
    branches = 0
    stack = [first]
    while stack:
        lift = stack.pop()
        branches += 1
        if branches > branch_cap:
            raise SearchBudgetExceeded(f"branch cap {branch_cap} exceeded")
        max_reached = max(max_reached, lift.order)
        if lift.order >= max_order:
            continue
        fam = extend_lift(lift, setup)
        if fam is None:
            continue
        free_cols = [fam.kernel_basis[:, j] for j in fam.free_reps]
        # gauge cosets: particular + span of the free representatives
        for combo in _coset_shifts(free_cols, p):
            stack.append(_bump_top(fam.particular, setup, combo) if combo is not None else fam.particular)
    if max_reached >= max_order:
        return report("smooth_to_order", max_order, branches)
    return report("truncated", max_reached, branches)


def _coset_shifts(cols: list[np.ndarray], p: int):
    if not cols:
        yield None
        return
    # all GF(p) combinations of the free columns (d = 1 in practice: p shifts)
    counters = np.zeros(len(cols), dtype=np.int64)
    yield None  # the zero shift
    while True:
        k = 0
        while k < len(cols) and counters[k] == p - 1:
            counters[k] = 0
            k += 1
        if k == len(cols):
            return
        counters[k] += 1
        shift = sum(int(c) * col for c, col in zip(counters, cols)) % p
        yield shift


# -- brute-force oracle --------------------------------------------------------


def brute_force_obstruction_order(
    m: Representation, n_small: int = 4, entry_budget_bits: int = 24
) -> int | None:
    """Enumerate all truncated lifts naively; the independent deformation oracle.

    Returns the largest order <= n_small admitting a lift with nontrivial
    first-order part, or None when no such order-2 lift exists at all.
    """
    algebra = m.algebra
    p = algebra.p
    sizes = [m.dims[a.target] * m.dims[a.source] for a in algebra.arrows]
    entries = int(sum(sizes))
    setup = deformation_setup(m)
    best: int | None = None
    for order in range(2, n_small + 1):
        nbits = entries * (order - 1)
        if p**nbits > 2**entry_budget_bits:
            raise BruteForceBudgetExceeded(
                f"{p}^{nbits} assignments exceed the 2^{entry_budget_bits} budget"
            )
        if _exists_nontrivial_lift(m, setup, order, entries, sizes):
            best = order
        elif order == 2:
            return None  # no nontrivial first-order lift exists at all
        else:
            break
    return best


def _exists_nontrivial_lift(m, setup, order, entries, sizes) -> bool:
    algebra = m.algebra
    p = algebra.p
    nfree = entries * (order - 1)
    total = p**nfree
    chunk = 1 << 14
    gauge = setup.gauge
    gauge_rank = rank(gauge, p) if gauge.size else 0
    base = np.concatenate([[0], np.cumsum(sizes)])
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((idx.size, nfree), dtype=np.int64)
        rem = idx.copy()
        for k in range(nfree):
            digits[:, k] = rem % p
            rem //= p
        # digits layout: (order-1) blocks of `entries`, power 1 first
        ok = np.ones(idx.size, dtype=bool)
        coeff_arrays = {}
        for a, arrow in enumerate(algebra.arrows):
            r, c = m.dims[arrow.target], m.dims[arrow.source]
            mats = np.zeros((idx.size, order, r, c), dtype=np.int64)
            mats[:, 0] = m.mats[a].a
            for k in range(1, order):
                sl = digits[:, (k - 1) * entries + base[a] : (k - 1) * entries + base[a + 1]]
                mats[:, k] = sl.reshape(idx.size, r, c)
            coeff_arrays[a] = mats
        for rel in algebra.pres.relations:
            src = algebra.arrows[rel[0][1][0]].source
            tgt = algebra.arrows[rel[0][1][-1]].target
            acc = np.zeros((idx.size, order, m.dims[tgt], m.dims[src]), dtype=np.int64)
            for coeff, path in rel:
                d0 = m.dims[algebra.arrows[path[0]].source]
                term = np.zeros((idx.size, order, d0, d0), dtype=np.int64)
                term[:, 0] = np.eye(d0, dtype=np.int64)
                for a in path:
                    nxt = np.zeros(
                        (idx.size, order, m.dims[algebra.arrows[a].target], term.shape[3]),
                        dtype=np.int64,
                    )
                    for i in range(order):
                        for j in range(order - i):
                            nxt[:, i + j] = (
                                nxt[:, i + j]
                                + np.einsum(
                                    "brc,bcd->brd", coeff_arrays[a][:, i], term[:, j]
                                )
                            ) % p
                    term = nxt
                acc = (acc + coeff * term) % p
            ok &= ~acc.reshape(idx.size, -1).any(axis=1)
            if not ok.any():
                break
        if not ok.any():
            continue
        # nontrivial first-order part: E_1 outside the gauge column span
        e1 = digits[ok, :entries]
        if gauge_rank == 0:
            if e1.any():
                return True
            continue
        for row in e1:
            if not row.any():
                continue
            if rank(np.hstack([gauge, row.reshape(-1, 1)]), p) > gauge_rank:
                return True
    return False


def oracle_agrees(report: VersalReport, oracle: int | None, n_small: int = 4) -> bool:
    """Compare versal_classify's obstruction order with the brute-force oracle."""
    if report.verdict == "trivial":
        return oracle is None
    if report.verdict == "truncated":
        return oracle == min(report.order, n_small)
    if report.verdict == "smooth_to_order":
        return oracle == n_small
    return True  # tangent dim >= 2: oracle compares first-order existence only
