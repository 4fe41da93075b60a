"""Command-line front end.

Exit codes: 0 all checks pass, 1 a regression row fails, 2 usage or IO error,
3 budget exhausted or an inconclusive isomorphism test.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import bimodules as B
from . import complexes as C
from . import deform as D
from . import homalg as H
from . import io as qio
from . import reps as R
from . import report as REP
from .algebra import NotFiniteDimensional, OracleBudgetExceeded
from .corpus import InvalidParameters, UnknownCorpusEntry, corpus_get, corpus_list
from .presentation import PresentationError, load_presentation


class _Ctx:
    def __init__(self, p, seed, as_json):
        self.p = p
        self.seed = seed
        self.json = as_json


def _emit(ctx: _Ctx, payload: dict, text: str):
    if ctx.json:
        click.echo(json.dumps(payload, indent=2, default=str))
    else:
        click.echo(text)


def _fail(ctx: _Ctx, code: int, kind: str, message: str):
    if ctx.json:
        click.echo(json.dumps({"error": {"kind": kind, "message": message}}))
    else:
        click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(ctx: _Ctx, fn):
    try:
        return fn()
    except (
        PresentationError,
        qio.FileFormatError,
        UnknownCorpusEntry,
        InvalidParameters,
        R.WordError,
        R.RelationViolated,
        FileNotFoundError,
        ValueError,
    ) as e:
        _fail(ctx, 2, type(e).__name__, str(e))
    except (
        D.SearchBudgetExceeded,
        D.BruteForceBudgetExceeded,
        OracleBudgetExceeded,
        H.OrbitInconclusive,
        NotFiniteDimensional,
    ) as e:
        _fail(ctx, 3, type(e).__name__, str(e))


@click.group()
@click.option("--field", "-p", default=2, show_default=True, help="prime field characteristic")
@click.option("--seed", default=0, show_default=True, help="seed for randomized searches")
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.pass_context
def main(ctx, field, seed, as_json):
    """Exact deformation-theory toolkit for quiver algebra modules and complexes."""
    ctx.obj = _Ctx(field, seed, as_json)


@main.group()
def algebra():
    """Algebra presentation commands."""


@algebra.command("check")
@click.argument("path", type=click.Path(exists=True))
@click.pass_obj
def algebra_check(obj, path):
    """Parse and build an algebra file, reporting its dimension."""

    def run():
        alg = qio.load_algebra(path, obj.p)
        payload = {
            "name": alg.pres.name,
            "field": obj.p,
            "vertices": len(alg.pres.vertices),
            "arrows": len(alg.pres.arrows),
            "relations": len(alg.pres.relations),
            "dim": alg.dim,
            "radical_dim": len(alg.radical_indices()),
            "self_injective": H.is_self_injective(alg, seed=obj.seed),
        }
        _emit(
            obj,
            payload,
            f"{alg.pres.name}: dim {alg.dim} over GF({obj.p}), "
            f"{payload['vertices']} vertices, {payload['arrows']} arrows, "
            f"self-injective: {payload['self_injective']}",
        )

    _guard(obj, run)


@main.group()
def module():
    """Module file commands."""


@module.command("info")
@click.argument("path", type=click.Path(exists=True))
@click.pass_obj
def module_info(obj, path):
    def run():
        m = qio.load_module(path, obj.p)
        top, socle, _ = R.top_socle(m)
        payload = {
            "dims": list(m.dims),
            "total_dim": m.total_dim,
            "top": list(top.dims),
            "socle": list(socle.dims),
            "end_dim": R.end_dim(m),
            "stable_end_dim": H.stable_end_dim(m),
        }
        _emit(
            obj,
            payload,
            f"dims {m.dims} top {top.dims} socle {socle.dims} "
            f"End {payload['end_dim']} stable End {payload['stable_end_dim']}",
        )

    _guard(obj, run)


@main.command("hom")
@click.argument("m_path", type=click.Path(exists=True))
@click.argument("n_path", type=click.Path(exists=True))
@click.pass_obj
def hom_cmd(obj, m_path, n_path):
    """Dimension of the homomorphism space between two module files."""

    def run():
        m = qio.load_module(m_path, obj.p)
        n = qio.load_module(n_path, obj.p)
        d = R.hom_dim(m, n)
        _emit(obj, {"hom_dim": d}, f"dim Hom = {d}")

    _guard(obj, run)


@main.command("ext")
@click.argument("m_path", type=click.Path(exists=True))
@click.argument("n_path", type=click.Path(exists=True))
@click.option("--degree", "-n", default=1, show_default=True)
@click.pass_obj
def ext_cmd(obj, m_path, n_path, degree):
    def run():
        m = qio.load_module(m_path, obj.p)
        n = qio.load_module(n_path, obj.p)
        d = H.ext_dim(m, n, degree)
        _emit(obj, {"ext_dim": d, "degree": degree}, f"dim Ext^{degree} = {d}")

    _guard(obj, run)


@main.command("syzygy")
@click.argument("m_path", type=click.Path(exists=True))
@click.option("--power", "-n", default=1, show_default=True)
@click.pass_obj
def syzygy_cmd(obj, m_path, power):
    def run():
        m = qio.load_module(m_path, obj.p)
        s = H.syzygy(m, power)
        _emit(obj, {"dims": list(s.dims), "total_dim": s.total_dim}, f"Omega^{power}: dims {s.dims}")

    _guard(obj, run)


@main.command("stable-end")
@click.argument("m_path", type=click.Path(exists=True))
@click.pass_obj
def stable_end_cmd(obj, m_path):
    def run():
        m = qio.load_module(m_path, obj.p)
        d = H.stable_end_dim(m)
        _emit(obj, {"stable_end_dim": d}, f"dim stable End = {d}")

    _guard(obj, run)


@main.command("versal")
@click.argument("m_path", type=click.Path(exists=True))
@click.option("--max-order", "-N", default=8, show_default=True)
@click.pass_obj
def versal_cmd(obj, m_path, max_order):
    """Classify the versal deformation ring of a module file."""

    def run():
        m = qio.load_module(m_path, obj.p)
        v = D.versal_classify(m, max_order=max_order, module_name=os.path.basename(m_path))
        _emit(
            obj,
            v.to_json(),
            f"tangent {v.tangent_dim}; R = {v.ring_description()}; universal: {v.universal} "
            f"({v.branches_explored} branches, {v.elapsed_ms} ms)",
        )

    _guard(obj, run)


@main.group("complex")
def complex_group():
    """Bounded complex commands."""


@complex_group.command("tangent")
@click.argument("path", type=click.Path(exists=True))
@click.option("--depth", default=4, show_default=True)
@click.pass_obj
def complex_tangent_cmd(obj, path, depth):
    def run():
        cx = qio.load_complex(path, obj.p)
        tg = C.complex_tangent(cx, depth)
        _emit(
            obj,
            {"t_f": tg.t_f, "t_f_flat": tg.t_f_flat},
            f"t_F = {tg.t_f}, t_F^fl = {tg.t_f_flat}",
        )

    _guard(obj, run)


@main.command("orbit")
@click.argument("m_path", type=click.Path(exists=True))
@click.option("--functor", type=click.Choice(["omega", "tau"]), default="omega", show_default=True)
@click.option("--cap", default=24, show_default=True)
@click.pass_obj
def orbit_cmd(obj, m_path, functor, cap):
    def run():
        m = qio.load_module(m_path, obj.p)
        rep = H.orbit_probe(m, functor, cap=cap, seed=obj.seed)
        if rep.repeated:
            text = f"preperiod {rep.preperiod}, period {rep.period}"
            if rep.reached_zero:
                text += " (collapsed to 0)"
        else:
            text = f"no repetition within cap {cap}"
        _emit(
            obj,
            {
                "functor": functor,
                "preperiod": rep.preperiod,
                "period": rep.period,
                "reached_zero": rep.reached_zero,
                "cap": cap,
            },
            text,
        )

    _guard(obj, run)


@main.group("bimodule")
def bimodule_group():
    """Bimodule commands."""


@bimodule_group.command("verify")
@click.argument("x_path", type=click.Path(exists=True))
@click.option("--partner", type=click.Path(exists=True), help="verify a stable Morita pair")
@click.option("--tilting", is_flag=True, help="verify the one-term nice tilting condition")
@click.pass_obj
def bimodule_verify(obj, x_path, partner, tilting):
    def run():
        x, _ = qio.load_bimodule(x_path, obj.p)
        payload = {
            "dims": list(x.rep.dims),
            "left_projective": B.one_sided_projective(x, "left"),
            "right_projective": B.one_sided_projective(x, "right"),
        }
        text = (
            f"bimodule dim {x.total_dim}; left projective: {payload['left_projective']}, "
            f"right projective: {payload['right_projective']}"
        )
        if partner:
            y, _ = qio.load_bimodule(partner, obj.p)
            rep = B.verify_stable_morita(x, y, seed=obj.seed)
            payload["stable_morita"] = {
                "ok": rep.ok,
                "projectivities": rep.projectivities,
                "yx": rep.yx_matches_regular,
                "xy": rep.xy_matches_regular,
            }
            if rep.inconclusive:
                _emit(obj, payload, text + "; stable Morita: inconclusive")
                sys.exit(3)
            text += f"; stable Morita: {rep.ok}"
        if tilting:
            rep = B.verify_nice_tilting({0: x}, seed=obj.seed)
            payload["nice_tilting"] = {"ok": rep.ok, "degrees": rep.degree_found}
            if rep.inconclusive:
                _emit(obj, payload, text + "; nice tilting: inconclusive")
                sys.exit(3)
            text += f"; nice tilting: {rep.ok}"
        _emit(obj, payload, text)

    _guard(obj, run)


@main.command("transfer")
@click.argument("x_path", type=click.Path(exists=True))
@click.argument("v_path", type=click.Path(exists=True))
@click.option("--partner", type=click.Path(exists=True), required=True,
              help="the inverse bimodule, needed to certify the stable equivalence")
@click.option("--max-order", "-N", default=8, show_default=True)
@click.pass_obj
def transfer_cmd(obj, x_path, v_path, partner, max_order):
    """Compare deformation invariants across a stable equivalence."""

    def run():
        x, _ = qio.load_bimodule(x_path, obj.p)
        y, _ = qio.load_bimodule(partner, obj.p)
        morita = B.verify_stable_morita(x, y, seed=obj.seed)
        if morita.inconclusive:
            _fail(obj, 3, "Inconclusive", "stable Morita verification inconclusive")
        if not morita.ok:
            _fail(obj, 1, "NotStableMorita", "the pair is not a stable equivalence of Morita type")
        v = qio.load_module(v_path, obj.p)
        tr = B.transfer_invariants(x, v, max_order=max_order, morita_checked=True, seed=obj.seed)
        payload = {
            "left": tr.left_invariants,
            "right": tr.right_invariants,
            "matches": tr.matches,
            "invariants_equal": tr.invariants_equal,
        }
        _emit(
            obj,
            payload,
            f"transfer invariants equal: {tr.invariants_equal} (per-field: {tr.matches})",
        )
        if not tr.invariants_equal:
            sys.exit(1)

    _guard(obj, run)


@main.group("corpus")
def corpus_group():
    """Built-in corpus of dihedral-type families."""


@corpus_group.command("list")
@click.pass_obj
def corpus_list_cmd(obj):
    names = corpus_list()
    _emit(obj, {"families": names}, "\n".join(names))


@corpus_group.command("report")
@click.argument("family")
@click.option("--params", help="comma-separated family parameters, e.g. 1,2,2,2")
@click.option("--max-order", "-N", default=8, show_default=True)
@click.option("--figures", type=click.Path(), help="directory for summary PNGs")
@click.pass_obj
def corpus_report_cmd(obj, family, params, max_order, figures):
    """Run the regression table for one corpus entry."""

    def run():
        ps = tuple(int(x) for x in params.split(",")) if params else ()
        entry = corpus_get(family, *ps)
        rep = REP.run_report(entry, p=obj.p, max_order=max_order, seed=obj.seed)
        if figures:
            os.makedirs(figures, exist_ok=True)
            out = os.path.join(figures, f"{entry.family}-{'-'.join(map(str, entry.params))}.png")
            REP.render_figure(rep, out)
        if obj.json:
            click.echo(REP.report_json_text(rep))
        else:
            click.echo(rep.to_tsv())
        if rep.any_error:
            sys.exit(3)
        if rep.any_fail:
            sys.exit(1)

    _guard(obj, run)


if __name__ == "__main__":
    main()
