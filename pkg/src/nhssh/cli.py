"""``nhssh`` command line: every computation with reproducible file outputs.

Each command writes its data under an output stem (``--out``), an optional
SVG next to it (``--plot``) and ``<out>.manifest.json``.  Exit codes: 0
success, 2 invalid arguments, 3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NumericalError
from .io import (
    RunManifest,
    invariant_record,
    write_csv,
    write_json,
    with_suffix,
)
from .model import ModelKind, make_params
from .spectral import (
    Boundary,
    dense_pbc_spectrum,
    gap_classify,
    obc_spectrum,
    pbc_spectrum,
    zero_modes,
)
from .skin import localization_profile, verdict_from_profile
from .sweep import (
    sweep_delta_plane,
    sweep_nu_line,
    sweep_nu_prime,
    sweep_reality,
    sweep_u_t2,
)
from .topology import (
    complex_berry_phase,
    phi_imag_closure,
    reality_interval,
    winding_nu,
    winding_nu_h2,
    winding_nu_oracle,
    winding_nu_prime,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _range(text: str) -> tuple[float, float]:
    """Parse ``LO:HI`` (or a single value for a degenerate range)."""
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}; expected LO:HI") from None
    if len(values) == 1:
        values = values * 2
    if len(values) != 2 or not all(np.isfinite(values)):
        raise argparse.ArgumentTypeError(f"malformed range {text!r}; expected LO:HI")
    if values[1] < values[0]:
        raise argparse.ArgumentTypeError(f"range {text!r} is reversed")
    return values[0], values[1]


class _Run:
    """Collects outputs of one command and writes its manifest."""

    def __init__(self, args, argv, params=None):
        self.args = args
        self.argv = list(argv)
        self.params = params
        self.outputs: list[Path] = []

    def path(self, suffix: str) -> Path:
        return with_suffix(self.args.out, suffix)

    def csv(self, suffix, header, rows):
        self.outputs.append(write_csv(self.path(suffix), header, rows))

    def json(self, suffix, obj):
        self.outputs.append(write_json(self.path(suffix), obj))

    def plot(self, suffix, func, *fargs, **kwargs):
        if self.args.plot:
            self.outputs.append(func(*fargs, path=self.path(suffix), **kwargs))

    def finish(self):
        settings = {k: v for k, v in sorted(vars(self.args).items())
                    if k not in ("func", "out") and not callable(v)}
        manifest = RunManifest(
            command=self.args.command if self.args.command != "phase"
            else f"phase {self.args.kind}",
            params=self.params.as_dict() if self.params is not None else None,
            settings={"argv": self.argv, **settings},
            seed=getattr(self.args, "seed", None),
            output_paths=[str(p) for p in self.outputs],
        )
        manifest.write(self.args.out)


def _params(args):
    return make_params(ModelKind.parse(args.model), args.t1, args.t2,
                       delta1=args.d1, delta2=args.d2, u=args.u)


def _plotting():
    from . import plotting
    return plotting


# ---------------------------------------------------------------- commands


def cmd_band(args, run: _Run):
    sol = pbc_spectrum(run.params, np.linspace(-np.pi, np.pi, args.nk))
    rows = [(k, ep.real, ep.imag, em.real, em.imag) for k, ep, em in sol]
    run.csv(".csv", ["k", "reE_plus", "imE_plus", "reE_minus", "imE_minus"], rows)
    run.plot(".svg", _plotting().band_plot, sol.k, sol.e_plus, sol.e_minus,
             title=_title(run.params))


def cmd_spectrum(args, run: _Run):
    if args.boundary == Boundary.PBC.value:
        e = dense_pbc_spectrum(run.params, args.nk).eigenvalues
        e = e[np.lexsort((e.imag, e.real))]
        run.csv(".csv", ["index", "re_E", "im_E"],
                [(i, z.real, z.imag) for i, z in enumerate(e)])
        summary = {"boundary": "pbc", "n_k": args.nk}
    else:
        sol = obc_spectrum(run.params, args.cells)
        e = sol.eigenvalues
        weight = localization_profile(sol).edge_weight
        run.csv(".csv", ["index", "re_E", "im_E", "edge_weight"],
                [(i, z.real, z.imag, w) for i, (z, w) in enumerate(zip(e, weight))])
        summary = {
            "boundary": "obc",
            "n_cells": args.cells,
            "residual": sol.residual,
            "n_defective": int(sol.defective.sum()),
            "zero_modes": len(zero_modes(sol)),
        }
    summary.update(max_abs_im=float(np.abs(e.imag).max()), params=run.params.as_dict())
    run.json(".json", summary)
    run.plot(".svg", _plotting().spectrum_plot, e,
             title=f"{_title(run.params)} {args.boundary.upper()}")


def cmd_skin(args, run: _Run):
    sol = obc_spectrum(run.params, args.cells)
    profile = localization_profile(sol)
    verdict = verdict_from_profile(profile)
    run.csv(".csv", ["site", "density"],
            [(i + 1, d) for i, d in enumerate(profile.site_density)])
    run.json(".json", {
        "params": run.params.as_dict(),
        "n_cells": args.cells,
        "edge_sites": profile.edge_sites,
        "present": verdict.present,
        "side": verdict.side,
        "localized_fraction": verdict.localized_fraction,
        "n_left": verdict.n_left,
        "n_right": verdict.n_right,
    })
    run.plot(".svg", _plotting().density_plot, profile.site_density, title=_title(run.params))


def cmd_berry(args, run: _Run):
    result = complex_berry_phase(run.params, args.nk)
    run.json(".json", {
        "params": run.params.as_dict(),
        "n_k": result.n_k,
        "q_plus": result.q_plus,
        "q_minus": result.q_minus,
        "q_global": result.q_global,
        "q_global_over_2pi": result.q_global / (2.0 * np.pi),
        "min_gap": result.min_gap,
        "residue": result.residue,
    })


def cmd_invariants(args, run: _Run):
    p = run.params
    records = []
    if p.kind is ModelKind.NON_RECIPROCAL:
        w = winding_nu(p, args.nk)
        records.append(invariant_record(p, "nu", w.nu, args.nk, w.flags))
        records.append(invariant_record(p, "nu1", w.nu1, args.nk))
        records.append(invariant_record(p, "nu2", w.nu2, args.nk))
        records.append(invariant_record(p, "nu_oracle", winding_nu_oracle(p)))
        records.append(invariant_record(p, "phi_imag_closure", phi_imag_closure(p, args.nk), args.nk))
    else:
        records.append(invariant_record(p, "nu_h2", winding_nu_h2(p, args.nk), args.nk))
        records.append(invariant_record(p, "nu_prime", winding_nu_prime(p)))
        records.append(invariant_record(p, "reality_interval", reality_interval(p)))
    gap = gap_classify(dense_pbc_spectrum(p, max(args.nk, 401)))
    records.append(invariant_record(p, "gap_class", gap.kind, max(args.nk, 401)))
    run.json(".json", records)


def _grid_outputs(run: _Run, grid, suffix: str, title: str):
    xs, ys = grid.x_axis.values, grid.y_axis.values
    rows = [(xs[ix], ys[iy], grid.values[iy, ix])
            for iy in range(grid.y_axis.n) for ix in range(grid.x_axis.n)]
    run.csv(suffix + ".csv", ["x", "y", "value"], rows)
    run.json(suffix + ".json", grid.header())
    run.plot(suffix + ".svg", _plotting().heatmap, grid, title=title)


def cmd_phase(args, run: _Run):
    kind = args.kind
    if kind == "delta-plane":
        grid = sweep_delta_plane(args.t1, args.t2, args.x_range, args.y_range, args.n,
                                 seed=args.seed, n_k=args.nk, numeric=args.numeric)
        _grid_outputs(run, grid, "", f"nu, t1={args.t1:g}, t2={args.t2:g}")
    elif kind == "nu-line":
        curve = sweep_nu_line(args.t1, args.t2, args.d1, args.range, args.n, n_k=args.nk)
        run.csv(".csv", ["delta2", "nu"], list(curve))
        run.json(".json", {"x": "delta2", "y": "nu", "jumps": list(curve.jumps)})
        run.plot(".svg", _plotting().line_plot, curve.x, {"nu": curve.y},
                 xlabel="delta2", ylabel="nu", step=True)
    elif kind == "u-t2":
        zero, nu = sweep_u_t2(args.t1, args.x_range, args.y_range, args.n, args.cells,
                              n_k=args.nk)
        _grid_outputs(run, zero, ".zero_modes", f"zero modes, t1={args.t1:g}")
        _grid_outputs(run, nu, ".nu", f"nu, t1={args.t1:g}")
    elif kind == "nu-prime":
        curve = sweep_nu_prime(args.t1, args.t2, args.range, args.n)
        run.csv(".csv", ["u", "nu_prime"], list(curve))
        run.plot(".svg", _plotting().line_plot, curve.x, {"nu'": curve.y},
                 xlabel="u", ylabel="nu'")
    elif kind == "reality":
        sweep = sweep_reality(args.t1, args.t2, args.range, args.n, n_k=args.nk)
        rows = [(u, r.n_real, r.n_imaginary, r.n_complex) for u, r in sweep]
        run.csv(".csv", ["u", "n_real", "n_imaginary", "n_complex"], rows)
        run.json(".json", {"t1": args.t1, "t2": args.t2, "n_k": args.nk,
                           "u_low": sweep.u_low, "u_high": sweep.u_high})
        counts = np.array([r[1:] for r in rows], dtype=float)
        run.plot(".svg", _plotting().line_plot, sweep.u,
                 {"real": counts[:, 0], "imaginary": counts[:, 1], "complex": counts[:, 2]},
                 xlabel="u", ylabel="count")


def _title(p) -> str:
    if p.kind is ModelKind.NON_RECIPROCAL:
        return f"t1={p.t1:g} t2={p.t2:g} d1={p.delta1:g} d2={p.delta2:g}"
    return f"t1={p.t1:g} t2={p.t2:g} u={p.u:g}"


def cmd_replay(args, _run):
    manifest = json.loads(Path(args.manifest).read_text())
    try:
        argv = manifest["settings"]["argv"]
    except (KeyError, TypeError):
        raise ValueError(f"{args.manifest} records no command line") from None
    return main(argv)


def cmd_cookbook(args, _run):
    from .cookbook import run_cookbook
    failures = run_cookbook(args.out_dir, figures=args.figure, reduced=args.reduced,
                            plot=args.plot)
    return EXIT_NUMERICAL if failures else EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p, model=True, seed=False):
    p.add_argument("--out", default="nhssh_out", help="output stem (default: nhssh_out)")
    p.add_argument("--plot", action="store_true", help="also write an SVG figure")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if model:
        p.add_argument("--model", default="nonreciprocal",
                       help="nonreciprocal (h1) or imaginary (h2, pt)")
        p.add_argument("--t1", type=float, default=1.0)
        p.add_argument("--t2", type=float, default=2.0)
        p.add_argument("--d1", type=float, default=0.0, help="intra-cell non-reciprocity")
        p.add_argument("--d2", type=float, default=0.0, help="inter-cell non-reciprocity")
        p.add_argument("--u", type=float, default=0.0, help="imaginary potential strength")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nhssh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nhssh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("band", help="Bloch bands E(k)")
    _common(p)
    p.add_argument("--nk", type=int, default=401)
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("spectrum", help="eigenvalues under periodic or open boundaries")
    _common(p)
    p.add_argument("--boundary", choices=[b.value for b in Boundary], default="pbc")
    p.add_argument("--cells", type=int, default=50)
    p.add_argument("--nk", type=int, default=200)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("skin", help="open-chain site density and skin-effect verdict")
    _common(p)
    p.add_argument("--cells", type=int, default=50)
    p.set_defaults(func=cmd_skin)

    p = sub.add_parser("berry", help="complex Berry phase of the imaginary-potential chain")
    _common(p)
    p.add_argument("--nk", type=int, default=4096)
    p.set_defaults(func=cmd_berry, model="imaginary")

    p = sub.add_parser("invariants", help="winding numbers and gap class as JSON records")
    _common(p)
    p.add_argument("--nk", type=int, default=4096)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("phase", help="parameter sweeps")
    phase = p.add_subparsers(dest="kind", required=True)

    q = phase.add_parser("delta-plane", help="nu over (delta1, delta2)")
    _common(q, model=False, seed=True)
    q.add_argument("--t1", type=float, default=1.0)
    q.add_argument("--t2", type=float, default=2.0)
    q.add_argument("--x-range", type=_range, default=(-2.0, 2.0), help="delta1 LO:HI")
    q.add_argument("--y-range", type=_range, default=(-2.0, 2.0), help="delta2 LO:HI")
    q.add_argument("--n", type=int, default=100)
    q.add_argument("--nk", type=int, default=4096)
    q.add_argument("--numeric", action="store_true", help="integrate every cell")

    q = phase.add_parser("nu-line", help="nu along delta2 at fixed delta1")
    _common(q, model=False)
    q.add_argument("--t1", type=float, default=1.0)
    q.add_argument("--t2", type=float, default=2.0)
    q.add_argument("--d1", type=float, default=0.5)
    q.add_argument("--range", type=_range, default=(0.0, 1.5), help="delta2 LO:HI")
    q.add_argument("--n", type=int, default=400)
    q.add_argument("--nk", type=int, default=4096)

    q = phase.add_parser("u-t2", help="zero-mode count and nu over (u, t2)")
    _common(q, model=False)
    q.add_argument("--t1", type=float, default=1.0)
    q.add_argument("--x-range", type=_range, default=(0.0, 3.0), help="u LO:HI")
    q.add_argument("--y-range", type=_range, default=(0.0, 3.0), help="t2 LO:HI")
    q.add_argument("--n", type=int, default=50)
    q.add_argument("--cells", type=int, default=50)
    q.add_argument("--nk", type=int, default=4096)

    q = phase.add_parser("nu-prime", help="arc winding nu' versus u")
    _common(q, model=False)
    q.add_argument("--t1", type=float, default=1.0)
    q.add_argument("--t2", type=float, default=2.0)
    q.add_argument("--range", type=_range, default=(0.0, 4.0), help="u LO:HI")
    q.add_argument("--n", type=int, default=500)

    q = phase.add_parser("reality", help="real / imaginary / complex counts versus u")
    _common(q, model=False)
    q.add_argument("--t1", type=float, default=1.0)
    q.add_argument("--t2", type=float, default=2.0)
    q.add_argument("--range", type=_range, default=(0.0, 4.0), help="u LO:HI")
    q.add_argument("--n", type=int, default=400)
    q.add_argument("--nk", type=int, default=1024)
    for q in phase.choices.values():
        q.set_defaults(func=cmd_phase)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("cookbook", help="regenerate the figure set")
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--figure", action="append", help="figure key, repeatable (default: all)")
    p.add_argument("--reduced", action="store_true", help="minimum allowed resolutions")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_cookbook)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command in ("replay", "cookbook"):
            return args.func(args, None)
        params = _params(args) if hasattr(args, "model") else None
        run = _Run(args, argv, params)
        args.func(args, run)
        run.finish()
    except NumericalError as exc:
        print(f"nhssh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"nhssh: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"nhssh: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
