"""Command-line entry point. Output is TSV (or ASCII art) on standard output.

Exit codes: 0 success, 1 input or usage error, 2 budget exhausted (partial
output is still written). ``SFTENT_STATE_LIMIT`` overrides the default
state/explosion limit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .basex import LevelColoring, build_x_pattern, column_frequency, delta_exact
from .core import (
    DEFAULT_STATE_LIMIT,
    Alphabet,
    BlockMap,
    BudgetExceeded,
    SFTError,
    lift_dimension,
    load_syntax,
    product,
    recode_one_step,
    syntax_to_json,
)
from .counting import (
    CountResult,
    count_1d,
    count_rect,
    sofic_image_count,
    spectral_entropy_1d,
    upper_entropy_terms,
)
from .core import Filler, rect
from .geometry import board, board_density, board_size, i_set, residue_positions
from .irreducible import SqueezeBudget, entropy_to_precision
from .machine import Infeasible, RSeq, board_superimpose, load_machine, prune_run, run_bounded
from .numerics import Interval, fmt_decimal, fmt_rational
from .realization import TargetSpec, density_realization_report, entropy_bracket, surviving_levels
from .substitution import board_mismatches, check_unique_derivation, expand, load_rule, zero_entropy_bound

ENV_LIMIT = "SFTENT_STATE_LIMIT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# output helpers

class Out:
    def __init__(self, stream):
        self.stream = stream

    def meta(self, key: str, value) -> None:
        self.stream.write(f"# {key}: {value}\n")

    def row(self, *cols) -> None:
        self.stream.write("\t".join(str(c) for c in cols) + "\n")

    def text(self, s: str) -> None:
        self.stream.write(s.rstrip("\n") + "\n")


def _rat(q) -> tuple[str, str]:
    return fmt_rational(q), fmt_decimal(q)


def _interval_cols(iv: Interval) -> list[str]:
    return [fmt_rational(iv.lo), fmt_rational(iv.hi), fmt_decimal(iv.lo), fmt_decimal(iv.hi)]


def _input_hash(*specs: str) -> str:
    h = hashlib.sha256()
    for spec in specs:
        if spec and os.path.isfile(spec):
            with open(spec, "rb") as f:
                h.update(f.read())
        else:
            h.update(str(spec).encode())
        h.update(b"\0")
    return h.hexdigest()


def _header(out: Out, args, *inputs: str) -> None:
    out.meta("tool", f"sftent {__version__}")
    out.meta("command", " ".join(args.command_path))
    out.meta("input-sha256", _input_hash(*inputs))


def _state_limit(args) -> int:
    if getattr(args, "state_limit", None):
        return args.state_limit
    env = os.environ.get(ENV_LIMIT)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{ENV_LIMIT} must be an integer") from None
    return DEFAULT_STATE_LIMIT


def _ints(text: str) -> list[int]:
    """``3`` or ``1,2,5`` or ``1-6``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _bits(text: str) -> list[int]:
    if not set(text) <= {"0", "1"}:
        raise UsageError(f"expected a 0/1 string, got {text!r}")
    return [int(c) for c in text]


# --------------------------------------------------------------------------
# sft

def cmd_sft_count(args, out: Out) -> int:
    s = load_syntax(args.defn)
    limit = _state_limit(args)
    _header(out, args, args.defn)
    out.meta("state-limit", limit)
    out.row("n", "m", "count", "log2_per_site_lo", "log2_per_site_hi", "lo_decimal", "hi_decimal")
    for n in _ints(args.n):
        if s.dim == 1:
            res, m = CountResult.of((n,), count_1d(s, n)), 1
        elif s.dim == 2:
            m = args.m or n
            res = count_rect(s, n, m, limit)
        else:
            m = n
            res = CountResult.of((n,) * s.dim, Filler(s, rect(*(n,) * s.dim)).count(limit=limit))
        out.row(n, m, res.count, *_interval_cols(res.log2_per_site))
    return 0


def cmd_sft_entropy_upper(args, out: Out) -> int:
    s = load_syntax(args.defn)
    limit = _state_limit(args)
    _header(out, args, args.defn)
    out.meta("state-limit", limit)
    seq = upper_entropy_terms(s, args.n_max, limit)
    out.row("n", "u_lo", "u_hi", "u_lo_decimal", "u_hi_decimal")
    for n, iv in seq.terms:
        out.row(n, *_interval_cols(iv))
    if seq.truncated:
        out.meta("truncated", seq.truncated)
        return 2
    return 0


def cmd_sft_entropy_1d(args, out: Out) -> int:
    s = load_syntax(args.defn)
    _header(out, args, args.defn)
    tol = _frac(args.tol)
    out.meta("tolerance", fmt_rational(tol))
    iv = spectral_entropy_1d(s, tol)
    out.row("h_lo", "h_hi", "h_lo_decimal", "h_hi_decimal")
    out.row(*_interval_cols(iv))
    return 0


def cmd_sft_entropy_irreducible(args, out: Out) -> int:
    s = load_syntax(args.defn)
    budget = SqueezeBudget(k_max=args.budget, N_max=args.N_max, r_max=args.r_max, state_limit=_state_limit(args))
    _header(out, args, args.defn)
    out.meta("budget", f"k_max={budget.k_max} N_max={budget.N_max} r_max={budget.r_max}")
    res = entropy_to_precision(s, args.precision, budget)
    out.row("precision", "lower", "upper", "lower_decimal", "upper_decimal", "width_decimal", "k_lower", "r_prime", "k_upper")
    out.row(res.n, fmt_rational(res.s_n), fmt_rational(res.u), fmt_decimal(res.s_n), fmt_decimal(res.u),
            fmt_decimal(res.width), res.k_lower, res.r, res.k_upper)
    if res.note:
        out.meta("note", res.note)
    return 0 if res.ok else 2


def _parse_map(text: str, source: Alphabet) -> BlockMap:
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as f:
            obj = json.load(f)
        return BlockMap.from_dict(source, obj["target"], obj["map"])
    mapping = dict(part.split("=", 1) for part in text.split(","))
    target = sorted(set(mapping.values()))
    return BlockMap.from_dict(source, target, mapping)


def cmd_sft_sofic_count(args, out: Out) -> int:
    s = load_syntax(args.defn)
    try:
        m = _parse_map(args.map, s.alphabet)
    except ValueError as e:
        raise UsageError(f"bad block map: {e}") from None
    _header(out, args, args.defn, args.map)
    out.row("n", "count", "log2_per_site_lo", "log2_per_site_hi", "lo_decimal", "hi_decimal")
    for n in _ints(args.n):
        res = sofic_image_count(s, m, n, _state_limit(args))
        out.row(n, res.count, *_interval_cols(res.log2_per_site))
    return 0


def _emit_syntax(out: Out, s) -> None:
    out.text(json.dumps(syntax_to_json(s), ensure_ascii=False, sort_keys=True))


def cmd_sft_product(args, out: Out) -> int:
    a, b = load_syntax(args.defn), load_syntax(args.other)
    _header(out, args, args.defn, args.other)
    _emit_syntax(out, product(a, b))
    return 0


def cmd_sft_lift(args, out: Out) -> int:
    s = load_syntax(args.defn)
    _header(out, args, args.defn)
    _emit_syntax(out, lift_dimension(s))
    return 0


def cmd_sft_recode(args, out: Out) -> int:
    s = load_syntax(args.defn)
    _header(out, args, args.defn)
    rec, win = recode_one_step(s)
    out.meta("window-sides", ",".join(map(str, win.sides)))
    _emit_syntax(out, rec)
    return 0


# --------------------------------------------------------------------------
# subst

def cmd_subst_expand(args, out: Out) -> int:
    rule = load_rule(args.rule)
    blk = expand(rule, args.seed, args.n)
    _header(out, args, args.rule)
    out.meta("seed", args.seed)
    out.meta("level", args.n)
    out.text(blk.pattern.to_grid_text())
    return 0


def cmd_subst_check(args, out: Out) -> int:
    rule = load_rule(args.rule)
    d = check_unique_derivation(rule, args.depth)
    _header(out, args, args.rule)
    out.row("depth", "verdict")
    out.row(d.depth, "unique" if d.unique else "ambiguous")
    if d.witness is not None:
        out.meta("witness", "central square below has more than one derivation")
        out.text(d.witness.to_grid_text())
    return 0


def cmd_subst_zero_bound(args, out: Out) -> int:
    rule = load_rule(args.rule)
    iv = zero_entropy_bound(rule, args.n, args.m)
    _header(out, args, args.rule)
    out.row("n", "m", "bound_lo", "bound_hi", "lo_decimal", "hi_decimal")
    out.row(args.n, args.m, *_interval_cols(iv))
    return 0


def cmd_subst_check_board(args, out: Out) -> int:
    rule = load_rule(args.rule)
    bad = board_mismatches(rule, args.seed, args.n, args.limit)
    _header(out, args, args.rule)
    out.meta("verdict", "matches the board" if not bad else "differs from the board")
    out.row("x", "y", "found", "expected")
    for x, y, f, e in bad:
        out.row(x, y, f, e)
    return 0


# --------------------------------------------------------------------------
# geom

def cmd_geom_iset(args, out: Out) -> int:
    _header(out, args, f"iset:{args.n}")
    out.row("k", "i_k")
    for k, v in enumerate(i_set(args.n), 1):
        out.row(k, v)
    return 0


def cmd_geom_board(args, out: Out) -> int:
    b = board(args.n)
    _header(out, args, f"board:{args.n}")
    out.meta("cells", len(b.cells))
    out.meta("nodes", len(b.nodes))
    if args.format == "ascii":
        out.text(b.render())
    else:
        out.row("x", "y", "symbol", "node")
        for x, y in sorted(b.cells, key=lambda c: (c[1], c[0])):
            out.row(x, y, b.symbol((x, y)), int(b.is_node((x, y))))
    return 0


def cmd_geom_mseq(args, out: Out) -> int:
    rp = residue_positions(args.N)
    _header(out, args, f"mseq:{args.N}")
    out.meta("q", rp.q)
    try:
        values, idx = rp.values(), rp.indices()
    except BudgetExceeded:
        values = idx = None
    res = rp.residues()
    out.row("t", "position", "index", "residue")
    for t, r in enumerate(res, 1):
        out.row(t, values[t - 1] if values else "-", idx[t - 1] if idx else "-", r)
    return 0 if values else 2


def cmd_geom_density(args, out: Out) -> int:
    _header(out, args, f"density:{args.n}")
    out.row("n", "cells", "density", "density_decimal")
    for n in _ints(args.n):
        out.row(n, board_size(n), *_rat(board_density(n)))
    return 0


# --------------------------------------------------------------------------
# base

def cmd_base_build(args, out: Out) -> int:
    rho = LevelColoring.parse(args.levels)
    p = build_x_pattern(rho, args.n)
    _header(out, args, f"levels:{rho}")
    if args.format == "ascii":
        out.text(p.render())
    else:
        out.row("x", "y", "net", "bit", "arrow")
        for y in range(1, p.height + 1):
            for x in range(1, p.width + 1):
                net, bit, arrow = p.cell(x, y)
                out.row(x, y, int(net), bit, arrow)
    return 0


def cmd_base_delta(args, out: Out) -> int:
    rho = LevelColoring.parse(args.levels)
    _header(out, args, f"levels:{rho}")
    out.row("levels", "delta", "delta_decimal")
    out.row(rho, *_rat(delta_exact(rho)))
    return 0


def cmd_base_freq(args, out: Out) -> int:
    rho = LevelColoring.parse(args.levels)
    _header(out, args, f"levels:{rho}")
    out.row("n", "frequency", "frequency_decimal")
    for n in _ints(args.n):
        out.row(n, *_rat(column_frequency(rho, n)))
    return 0


# --------------------------------------------------------------------------
# tm, prune, realize

def cmd_tm_run(args, out: Out) -> int:
    m = load_machine(args.machine)
    bits = _bits(args.input)
    res = run_bounded(m, bits, args.steps, history=args.trace)
    _header(out, args, args.machine, args.input)
    out.row("status", "t")
    out.row("halted" if res.halted else "running", res.t)
    if args.trace:
        out.meta("trace", "one configuration per line, head cell shown as data@state")
        for cfg in res.configs:
            out.text(" ".join(map(str, cfg)))
    return 0


def cmd_tm_board(args, out: Out) -> int:
    m = load_machine(args.machine)
    bits = _bits(args.input)
    b = board(args.n)
    res = board_superimpose(m, b, bits)
    _header(out, args, args.machine, args.input)
    if isinstance(res, Infeasible):
        out.row("status", "halt_step")
        out.row("infeasible", res.halt_step)
        return 0
    out.row("x", "y", "kind", "value")
    for (x, y) in sorted(res.cells, key=lambda c: (c[1], c[0])):
        v = res.cells[(x, y)]
        kind = type(v).__name__.lower()
        if kind == "pair":
            text = f"{v.left}|{v.right}"
        elif kind == "triple":
            text = f"{v.u or '_'}|{v.v}|{v.w or '_'}"
        else:
            text = str(v)
        out.row(x, y, "node" if kind == "cellconfig" else kind, text)
    return 0


def _rseq(text: str) -> RSeq:
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as f:
            return RSeq.from_json(json.load(f))
    return RSeq.parse(text)


def cmd_prune_run(args, out: Out) -> int:
    rho = LevelColoring.parse(args.levels)
    r = _rseq(args.r)
    _header(out, args, f"levels:{rho}", str(r))
    res = prune_run(rho, r, args.max_N)
    out.meta("verdict", res.verdict)
    out.row("N", "r", "delta", "threshold", "delta_decimal", "rho_prime", "identity", "halt")
    for st in res.trace:
        thr = st.r + Fraction(1, 2**st.N)
        out.row(st.N, fmt_rational(st.r), fmt_rational(st.delta), fmt_rational(thr), fmt_decimal(st.delta),
                st.rho_prime, "ok" if st.identity_ok else "FAIL", int(st.delta > thr))
    return 0


def cmd_realize(args, out: Out) -> int:
    r = _rseq(args.target)
    h = _frac(args.h) if args.h is not None else None
    t = TargetSpec(r, h)
    _header(out, args, args.target, str(h))
    out.meta("L", args.L)
    out.meta("N", args.N)
    out.meta("lower", "witness-certified: free-layer count over one surviving base pattern")
    out.meta("upper", "asymptotic form h + 2^(-n+1)" if h is not None else "r(N) + 2^(-n+1) + 2^(-N+1)")
    surv = surviving_levels(args.L, t, args.N)
    out.meta("survivors", len(surv))
    out.row("n", "lower", "upper", "lower_decimal", "upper_decimal", "witness", "gap_to_h")
    for n in _ints(args.n):
        b = entropy_bracket(t, n, args.L, args.N, surv)
        gap = "-" if h is None else fmt_rational(h - b.lower)
        out.row(n, fmt_rational(b.lower), fmt_rational(b.upper), fmt_decimal(b.lower), fmt_decimal(b.upper),
                b.witness, gap)
    if args.report:
        out.meta("density report", "max surviving column frequency per n")
        for row in density_realization_report(t, _ints(args.n), args.L, args.N):
            out.meta(f"n={row.n}", f"{fmt_rational(row.max_frequency)} via {row.witness}")
    return 0


# --------------------------------------------------------------------------
# parser

def _add(sub, name: str, help_text: str, func: Callable, path: Sequence[str]) -> argparse.ArgumentParser:
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.set_defaults(func=func, command_path=list(path))
    return p


def _def_arg(p):
    p.add_argument("--def", dest="defn", required=True,
                   help="SFT definition: JSON file or builtin:NAME (golden-mean, hard-squares, full-shift:K[:D], constant:K[:D])")


def _limit_arg(p):
    p.add_argument("--state-limit", type=int, default=None,
                   help=f"explosion/state limit (default {DEFAULT_STATE_LIMIT}, or ${ENV_LIMIT})")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="sftent", description=__doc__.splitlines()[0])
    root.add_argument("--version", action="version", version=f"sftent {__version__}")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    sft = groups.add_parser("sft", help="shifts of finite type: counting and entropy bounds")
    ss = sft.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(ss, "count", "exact locally admissible counts on n x m rectangles", cmd_sft_count, ["sft", "count"])
    _def_arg(p)
    p.add_argument("--n", required=True, help="side(s): 4, 1,2,3 or 1-6")
    p.add_argument("--m", type=int, default=None, help="second side for 2D (default n)")
    _limit_arg(p)
    p = _add(ss, "entropy-upper", "one-sided upper entropy terms from cube counts", cmd_sft_entropy_upper,
             ["sft", "entropy-upper"])
    _def_arg(p)
    p.add_argument("--n-max", type=int, required=True)
    _limit_arg(p)
    p = _add(ss, "entropy-1d", "1D entropy as log2 of a certified Perron root", cmd_sft_entropy_1d,
             ["sft", "entropy-1d"])
    _def_arg(p)
    p.add_argument("--tol", default="1/1000000000", help="interval width bound (rational)")
    p = _add(ss, "entropy-irreducible", "two-sided entropy squeeze for irreducible SFTs",
             cmd_sft_entropy_irreducible, ["sft", "entropy-irreducible"])
    _def_arg(p)
    p.add_argument("--precision", type=int, required=True, help="stop once the bracket is narrower than 1/n")
    p.add_argument("--budget", type=int, default=6, help="largest cube index k tried")
    p.add_argument("--N-max", dest="N_max", type=int, default=8, help="admissibility search depth")
    p.add_argument("--r-max", dest="r_max", type=int, default=4, help="largest gap tried")
    _limit_arg(p)
    p = _add(ss, "sofic-count", "distinct one-block images of locally admissible cubes", cmd_sft_sofic_count,
             ["sft", "sofic-count"])
    _def_arg(p)
    p.add_argument("--map", required=True, help="a=x,b=y or JSON file {target: [...], map: {...}}")
    p.add_argument("--n", required=True)
    _limit_arg(p)
    p = _add(ss, "product", "product syntax over the pair alphabet (JSON)", cmd_sft_product, ["sft", "product"])
    _def_arg(p)
    p.add_argument("--other", required=True, help="second SFT definition")
    p = _add(ss, "lift", "add one dimension with independent layers (JSON)", cmd_sft_lift, ["sft", "lift"])
    _def_arg(p)
    p = _add(ss, "recode", "higher-block recoding onto the unit cube (JSON)", cmd_sft_recode, ["sft", "recode"])
    _def_arg(p)

    sub = groups.add_parser("subst", help="substitution systems")
    su = sub.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(su, "expand", "level-n block of a seed symbol (grid text, top row first)", cmd_subst_expand,
             ["subst", "expand"])
    p.add_argument("--rule", default="2net", help="rule JSON file or builtin 2net")
    p.add_argument("--seed", required=True)
    p.add_argument("--n", type=int, required=True)
    p = _add(su, "check-derivation", "unique derivation of central squares at a finite depth", cmd_subst_check,
             ["subst", "check-derivation"])
    p.add_argument("--rule", default="2net")
    p.add_argument("--depth", type=int, default=3)
    p = _add(su, "zero-bound", "counting bound showing zero entropy of a substitution system",
             cmd_subst_zero_bound, ["subst", "zero-bound"])
    p.add_argument("--rule", default="2net")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = _add(su, "check-board", "compare the blocks of a user 5x5 rule with the n-board",
             cmd_subst_check_board, ["subst", "check-board"])
    p.add_argument("--rule", required=True, help="rule JSON file whose symbols include box characters")
    p.add_argument("--seed", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=20, help="most mismatching cells listed")

    geo = groups.add_parser("geom", help="2-nets, base-5 boards and residue positions")
    ge = geo.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(ge, "iset", "the line set I_n of the n-board", cmd_geom_iset, ["geom", "iset"])
    p.add_argument("--n", type=int, required=True)
    p = _add(ge, "board", "the n-board with its direction symbols", cmd_geom_board, ["geom", "board"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["ascii", "tsv"], default="ascii")
    p = _add(ge, "mseq", "positions in I covering every residue mod 2^N once", cmd_geom_mseq, ["geom", "mseq"])
    p.add_argument("--N", type=int, required=True)
    p = _add(ge, "density", "share of the 5^n-square covered by the n-board", cmd_geom_density,
             ["geom", "density"])
    p.add_argument("--n", required=True)

    base = groups.add_parser("base", help="the 0/1 column layer over the 2-net")
    ba = base.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(ba, "build", "n x n base pattern for given level bits", cmd_base_build, ["base", "build"])
    p.add_argument("--levels", required=True, help="bits rho_1..rho_L, e.g. 101 (- for none)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["ascii", "tsv"], default="ascii")
    p = _add(ba, "delta", "exact density of 1s for given level bits", cmd_base_delta, ["base", "delta"])
    p.add_argument("--levels", required=True)
    p = _add(ba, "freq", "share of 1-columns among the first n", cmd_base_freq, ["base", "freq"])
    p.add_argument("--levels", required=True)
    p.add_argument("--n", required=True)

    tm = groups.add_parser("tm", help="Turing machines")
    tt = tm.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(tt, "run", "bounded simulation on a one-sided tape", cmd_tm_run, ["tm", "run"])
    p.add_argument("--machine", required=True, help="machine JSON file or builtin name")
    p.add_argument("--input", required=True, help="input bits, e.g. 0010")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--trace", action="store_true")
    p = _add(tt, "board", "lay a run over the n-board (TSV of cell contents)", cmd_tm_board, ["tm", "board"])
    p.add_argument("--machine", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", required=True, help="4^n input bits")

    pr = groups.add_parser("prune", help="the pruning loop on level bits")
    pp = pr.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = _add(pp, "run", "trace delta_N against r(N) + 2^-N", cmd_prune_run, ["prune", "run"])
    p.add_argument("--levels", required=True)
    p.add_argument("--r", required=True, help="const:p/q, list:a,b,... or a target JSON file")
    p.add_argument("--max-N", dest="max_N", type=int, default=8)

    p = groups.add_parser("realize", help="entropy brackets around a target number",
                          description="entropy brackets around a target number: witnessed lower ends, asymptotic upper ends")
    p.set_defaults(func=cmd_realize, command_path=["realize"])
    p.add_argument("--target", required=True, help="const:p/q, list:a,b,... or a target JSON file")
    p.add_argument("--h", default=None, help="claimed limit of the target sequence")
    p.add_argument("--L", type=int, default=4, help="longest level coloring enumerated")
    p.add_argument("--N", type=int, default=8, help="pruning iterations")
    p.add_argument("--n", default="4,8,16", help="square sides")
    p.add_argument("--report", action="store_true", help="also print the density report as metadata")
    return root


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(f"{e}\n")
        return 1
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    out = Out(stdout)
    try:
        return args.func(args, out)
    except BudgetExceeded as e:
        out.meta("budget-exhausted", str(e))
        stderr.write(f"budget exhausted: {e}\n")
        return 2
    except (UsageError, SFTError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        stderr.write(f"error: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
