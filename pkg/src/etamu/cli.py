"""Command-line front end: ``etamu <subcommand> [options]``.

Every evaluating subcommand writes a CSV (header plus one row per grid
point) to ``--output`` or stdout and can also render the same series to an
image with ``--figure``.  Exit status: 0 success, 2 bad parameters,
3 numerical convergence failure (no partial output is left behind).

Environment variables ``ETAMU_NODES``, ``ETAMU_TOL`` and ``ETAMU_METHOD``
override the default contour node count, absolute tolerance and method;
explicit flags override the environment.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
import tempfile
from typing import Optional, Sequence

import numpy as np

from .errors import ConvergenceFailure, ParameterOutOfRange
from .inversion import ENV_METHOD, ENV_NODES, ENV_TOL, InversionConfig, Method
from .modulation import PRESETS, ModulationScheme
from .montecarlo import RngStream, simulate_mrc
from .params import FadingBranch, FadingFormat, MrcChannel, db_to_linear, validate_branch
from .performance import avg_ber_contour, avg_ber_quadrature, ber_curve, outage
from .stats import SnrGrid, cdf_sum, pdf_sum

EXIT_OK, EXIT_PARAM, EXIT_CONVERGENCE = 0, 2, 3


class UsageError(Exception):
    """A bad command-line value; ``flag`` names the offending option."""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


# ---------------------------------------------------------------- formatting

def _num(x) -> str:
    """Shortest round-trip decimal; independent of the process locale."""
    x = float(x)
    if x == 0.0:
        return "0"
    return repr(x)


def _grid_num(x) -> str:
    # grid abscissae are generated as start + i*step; print them tidily
    return format(float(x), ".12g")


def _csv(header: Sequence[str], rows) -> str:
    out = io.StringIO(newline="")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------- parsing

def parse_branch(text: str, fmt: FadingFormat) -> FadingBranch:
    """``eta=<v>,mu=<v>[,snr=<linear>|snr_db=<dB>]``; average SNR defaults to 1."""
    fields = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("eta", "mu", "snr", "snr_db"):
            raise UsageError("--branch", f"cannot parse {part!r} in {text!r}; "
                             "expected eta=<v>,mu=<v>[,snr=<v>|snr_db=<v>]")
        if key in fields:
            raise UsageError("--branch", f"{key} given twice in {text!r}")
        try:
            fields[key] = float(value)
        except ValueError:
            raise UsageError("--branch", f"{key}={value!r} is not a number") from None
    for key in ("eta", "mu"):
        if key not in fields:
            raise UsageError("--branch", f"missing {key}= in {text!r}")
    if "snr" in fields and "snr_db" in fields:
        raise UsageError("--branch", f"give snr or snr_db, not both, in {text!r}")
    snr = db_to_linear(fields["snr_db"]) if "snr_db" in fields else fields.get("snr", 1.0)
    try:
        return validate_branch(FadingBranch(fmt, fields["eta"], fields["mu"], snr))
    except ParameterOutOfRange as exc:
        raise UsageError("--branch", str(exc)) from None


def _channel(args) -> MrcChannel:
    if not args.branch:
        raise UsageError("--branch", "at least one branch is required")
    fmt = FadingFormat.parse(args.format)
    return MrcChannel(tuple(parse_branch(b, fmt) for b in args.branch))


def _grid(args, need_positive: bool = False) -> np.ndarray:
    try:
        pts = SnrGrid.parse(args.grid).points()
    except ValueError as exc:
        raise UsageError("--grid", str(exc)) from None
    if need_positive and pts[0] <= 0:
        raise UsageError("--grid", "the density is evaluated at y > 0 only; start the grid above 0")
    return pts


def _db_grid(args) -> np.ndarray:
    parts = args.grid.split(":")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError("--grid", f"expected start:stop:step in dB, got {args.grid!r}") from None
    if not (stop >= start and step > 0):
        raise UsageError("--grid", f"invalid dB grid {args.grid!r}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


def _mods(args, default_all: bool) -> list[ModulationScheme]:
    texts = args.mod or (list(PRESETS) if default_all else [])
    if not texts:
        raise UsageError("--mod", "at least one modulation is required")
    out = []
    for t in texts:
        try:
            out.append(ModulationScheme.parse(t))
        except ParameterOutOfRange as exc:
            raise UsageError("--mod", str(exc)) from None
    return out


def _config(args) -> InversionConfig:
    for env, conv in ((ENV_NODES, int), (ENV_TOL, float), (ENV_METHOD, Method)):
        if os.environ.get(env):
            try:
                conv(os.environ[env])
            except ValueError:
                raise UsageError(env, f"cannot parse {os.environ[env]!r}") from None
    try:
        return InversionConfig.from_env(nodes=args.nodes, target_abs_tol=args.tol, method=args.method)
    except ValueError as exc:
        msg = str(exc)
        if "nodes" in msg:
            flag = "--nodes" if args.nodes is not None else ENV_NODES
        elif "tol" in msg:
            flag = "--tol" if args.tol is not None else ENV_TOL
        else:
            flag = "--method" if args.method is not None else ENV_METHOD
        raise UsageError(flag, msg) from None


# ---------------------------------------------------------------- subcommands

def _cmd_pdf(args):
    ch, cfg = _channel(args), _config(args)
    y = _grid(args, need_positive=True)
    r = pdf_sum(ch, y, cfg)
    rows = [(_grid_num(a), _num(b), _num(c)) for a, b, c in zip(y, r.value, r.abs_err_est)]
    fig = dict(x=y, series={"pdf": r.value}, xlabel="y", ylabel="pdf", title=f"L = {len(ch)}")
    return _csv(("y", "pdf", "abs_err_est"), rows), fig


def _cmd_cdf(args, column="cdf", xname="y", fn=cdf_sum):
    ch, cfg = _channel(args), _config(args)
    y = _grid(args)
    r = fn(ch, y, cfg)
    rows = [(_grid_num(a), _num(b), _num(c)) for a, b, c in zip(y, r.value, r.abs_err_est)]
    fig = dict(x=y, series={column: r.value}, xlabel=xname, ylabel=column,
               title=f"L = {len(ch)}", logy=args.logy)
    return _csv((xname, column, "abs_err_est"), rows), fig


def _cmd_outage(args):
    return _cmd_cdf(args, column="outage", xname="y_th", fn=outage)


def _cmd_ber(args):
    ch, cfg = _channel(args), _config(args)
    rows = []
    for mod in _mods(args, default_all=True):
        quad = avg_ber_quadrature(ch, mod, cfg)
        cont = avg_ber_contour(ch, mod, cfg)
        rows.append((mod.name, _num(mod.p), _num(mod.q), _num(quad.value), _num(quad.abs_err_est),
                     _num(cont.value), _num(cont.abs_err_est)))
    header = ("mod", "p", "q", "ber", "abs_err_est", "ber_contour", "contour_abs_err_est")
    return _csv(header, rows), None


def _cmd_ber_curve(args):
    ch, cfg = _channel(args), _config(args)
    grid = _db_grid(args)
    mods = _mods(args, default_all=True)
    curves = {m.name: [pt.ber for pt in ber_curve(ch, m, grid, cfg, method=args.ber_method)]
              for m in mods}
    rows = [(_grid_num(g),) + tuple(_num(curves[m.name][i]) for m in mods)
            for i, g in enumerate(grid)]
    fig = dict(x=grid, series=curves, xlabel="average SNR per branch (dB)",
               ylabel="average BER", title=f"L = {len(ch)}", logy=True, markers=True)
    return _csv(("snr_db",) + tuple(m.name for m in mods), rows), fig


def _cmd_simulate(args):
    ch, cfg = _channel(args), _config(args)
    y = _grid(args, need_positive=True)
    if args.samples < 2:
        raise UsageError("--samples", "need at least 2 samples")
    if args.workers < 1:
        raise UsageError("--workers", "must be >= 1")
    sim = simulate_mrc(ch, args.samples, RngStream(args.seed, args.stream), workers=args.workers)
    ecdf = sim.ecdf(y)
    # histogram density on bins of one grid step centred at each grid point
    step = float(y[1] - y[0]) if len(y) > 1 else 1.0
    lo = np.searchsorted(sim.samples, y - step / 2.0, side="left")
    hi = np.searchsorted(sim.samples, y + step / 2.0, side="left")
    hist = (hi - lo) / (sim.n * step)
    rows = [(_grid_num(a), _num(b), _num(c)) for a, b, c in zip(y, ecdf, hist)]
    summary = (f"n={sim.n} mean={_num(sim.mean)} variance={_num(sim.variance)} "
               f"std_err={_num(sim.std_err)} seed={args.seed} stream={args.stream}")
    print(summary, file=sys.stderr)
    fig = None
    if args.figure:
        fig = dict(simulation=True, y=y, ecdf=ecdf, hist=hist,
                   analytic_cdf=cdf_sum(ch, y, cfg).value,
                   analytic_pdf=pdf_sum(ch, y, cfg).value, title=f"L = {len(ch)}, n = {sim.n}")
    return _csv(("y", "ecdf", "pdf_hist"), rows), fig


def _cmd_selftest(args):
    from . import selftest

    cfg = _config(args)
    results = list(selftest.run(cfg))
    text = "".join(r.line() + "\n" for r in results)
    return text, None, all(r.passed for r in results)


COMMANDS = {
    "pdf": _cmd_pdf,
    "cdf": _cmd_cdf,
    "outage": _cmd_outage,
    "ber": _cmd_ber,
    "ber-curve": _cmd_ber_curve,
    "simulate": _cmd_simulate,
    "selftest": _cmd_selftest,
}


# ---------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("channel")
    g.add_argument("--format", choices=("1", "2"), default="1",
                   help="eta parameterisation: 1 = power ratio, 2 = correlation (default 1)")
    g.add_argument("--branch", action="append", metavar="SPEC",
                   help="one branch as eta=<v>,mu=<v>[,snr=<linear>|snr_db=<dB>]; repeat per branch")
    n = common.add_argument_group("numerics")
    n.add_argument("--nodes", type=int, help=f"contour nodes (env {ENV_NODES}, default 32)")
    n.add_argument("--tol", type=float, help=f"absolute error target (env {ENV_TOL}, default 1e-9)")
    n.add_argument("--method", choices=[m.value for m in Method],
                   help=f"inversion contour (env {ENV_METHOD}, default talbot)")
    o = common.add_argument_group("output")
    o.add_argument("-o", "--output", metavar="PATH", help="CSV destination (default stdout)")
    o.add_argument("--figure", metavar="PATH", help="also render the series to an image (png/pdf/svg)")

    # argparse exits 2 on its own errors, which matches the parameter-error code
    p = argparse.ArgumentParser(prog="etamu", description="Exact MRC statistics over independent eta-mu fading.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_, grid_help=None):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if grid_help:
            sp.add_argument("--grid", required=True, metavar="START:STOP:STEP", help=grid_help)
        return sp

    add("pdf", "density of the combiner output SNR", "y grid (linear SNR, start > 0)")
    for name, help_ in (("cdf", "distribution function of the combiner output SNR"),
                        ("outage", "outage probability versus threshold")):
        sp = add(name, help_, "y grid (linear SNR)")
        sp.add_argument("--logy", action="store_true", help="log-scale y axis in --figure")
    sp = add("ber", "average BER of one or more binary schemes at the branch SNRs given")
    sp.add_argument("--mod", action="append", metavar="MOD",
                    help="cbfsk|cbpsk|nbfsk|dbpsk|p,q; repeatable (default: all four presets)")
    sp = add("ber-curve", "average BER versus common per-branch SNR", "per-branch SNR grid in dB")
    sp.add_argument("--mod", action="append", metavar="MOD",
                    help="cbfsk|cbpsk|nbfsk|dbpsk|p,q; repeatable (default: all four presets)")
    sp.add_argument("--ber-method", choices=("quadrature", "contour"), default="quadrature",
                    help="averaging route (default quadrature)")
    sp = add("simulate", "Monte Carlo empirical CDF and histogram", "y grid (linear SNR, start > 0)")
    sp.add_argument("--samples", type=int, default=1_000_000, help="number of draws (default 1e6)")
    sp.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    sp.add_argument("--stream", type=int, default=0, help="stream index (default 0)")
    sp.add_argument("--workers", type=int, default=1, help="threads; output does not depend on it")
    add("selftest", "run the oracle-equivalence and identity checks")
    return p


def _render(path: str, fig: dict) -> None:
    from . import plotting

    if fig.get("simulation"):
        plotting.plot_simulation(path, fig["y"], fig["analytic_cdf"], fig["ecdf"],
                                 fig["analytic_pdf"], fig["hist"], title=fig["title"])
    else:
        plotting.plot_series(path, fig["x"], fig["series"], xlabel=fig["xlabel"],
                             ylabel=fig["ylabel"], title=fig.get("title", ""),
                             logy=fig.get("logy", False), markers=fig.get("markers", False))


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".etamu-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        ok = True
        if len(result) == 3:
            text, fig, ok = result
        else:
            text, fig = result
        if args.figure and fig is not None:
            _render(args.figure, fig)
    except UsageError as exc:
        print(f"etamu {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except ConvergenceFailure as exc:
        # nothing has been written yet: the CSV is only emitted once complete
        print(f"etamu {args.command}: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        print(f"etamu {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    if args.output:
        _write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else 1


if __name__ == "__main__":
    sys.exit(main())
