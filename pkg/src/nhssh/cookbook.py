"""Command lines that regenerate every figure panel.

``FIGURES`` maps a figure key to ``(panel, argv)`` pairs.  Resolution flags
are filled from ``FULL`` or ``REDUCED``; the reduced set uses the smallest
resolutions the sweeps accept.
"""
from __future__ import annotations

import sys
from pathlib import Path

FULL = {"plane": "100", "line": "400", "ut2": "50", "prime": "500", "real": "400",
        "nk": "4096", "bands": "401", "pbc": "200"}
REDUCED = {"plane": "50", "line": "200", "ut2": "50", "prime": "500", "real": "200",
           "nk": "1024", "bands": "101", "pbc": "100"}


def _h1(t1, t2, d1, d2):
    return ["--model", "nonreciprocal", "--t1", str(t1), "--t2", str(t2),
            "--d1", str(d1), "--d2", str(d2)]


def _h2(t1, t2, u):
    return ["--model", "imaginary", "--t1", str(t1), "--t2", str(t2), "--u", str(u)]


def _spectra(label, params):
    panels = []
    for name, p in params:
        panels.append((f"{label}_{name}_pbc", ["spectrum", *p, "--boundary", "pbc", "--nk", "{pbc}"]))
        panels.append((f"{label}_{name}_obc", ["spectrum", *p, "--boundary", "obc", "--cells", "50"]))
    return panels


FIGURES: dict[str, list[tuple[str, list[str]]]] = {
    "fig3": [
        ("fig3a", ["phase", "delta-plane", "--t1", "1", "--t2", "2", "--n", "{plane}"]),
        ("fig3b", ["phase", "delta-plane", "--t1", "1", "--t2", "0.5", "--n", "{plane}"]),
        ("fig3c", ["phase", "nu-line", "--t1", "1", "--t2", "2", "--d1", "0.5",
                   "--range", "0:1.5", "--n", "{line}"]),
        ("fig3d", ["phase", "nu-line", "--t1", "1", "--t2", "0.5", "--d1", "0.25",
                   "--range", "0:1", "--n", "{line}"]),
    ],
    "fig4": [
        (f"fig4_{i}", ["band", *_h1(*p), "--nk", "{bands}"])
        for i, p in enumerate([(1, 2, 0.1, 0.1), (1, 2, 0.1, 1.2),
                               (1, 0.5, 0.3, 0.1), (1, 0.5, 0.3, 0.45)], start=1)
    ],
    "fig5": _spectra("fig5", [("nu1", _h1(1, 2, 0.5, 0.3)), ("nu05", _h1(1, 2, 0.6, 1.3))]),
    "fig6": _spectra("fig6", [("nu0", _h1(1, 0.5, 0.3, 0.15)), ("nu05", _h1(1, 0.5, 0.5, 0.3))]),
    "fig7": [
        ("fig7a", ["skin", *_h1(1, 2, 0.5, 1.3), "--cells", "50"]),
        ("fig7b", ["skin", *_h1(1, 0.5, 0.5, 0.3), "--cells", "50"]),
    ],
    "fig8": [
        ("fig8d", ["phase", "nu-prime", "--t1", "1", "--t2", "2", "--range", "0:4",
                   "--n", "{prime}"]),
    ],
    "fig9": [
        ("fig9", ["phase", "u-t2", "--t1", "1", "--x-range", "0:3", "--y-range", "0:3",
                  "--n", "{ut2}", "--cells", "50", "--nk", "{nk}"]),
    ],
    "fig10": [
        (f"fig10_t2_{t2}_u_{u}", ["band", *_h2(1, t2, u), "--nk", "{bands}"])
        for t2, us in ((2, (0.5, 2, 3.5)), (0.5, (0.25, 1, 1.75))) for u in us
    ],
    "fig11": _spectra("fig11", [(f"u_{u}", _h2(1, 2, u)) for u in (0.5, 2, 3.5)])
    + _spectra("fig11b", [(f"u_{u}", _h2(1, 0.5, u)) for u in (0.25, 1, 1.75)]),
    "fig12": [
        ("fig12_t2_2", ["phase", "reality", "--t1", "1", "--t2", "2", "--range", "0:4",
                        "--n", "{real}"]),
        ("fig12_t2_0.5", ["phase", "reality", "--t1", "1", "--t2", "0.5", "--range", "0:4",
                          "--n", "{real}"]),
    ],
    "fig13": [
        ("fig13a", ["skin", *_h2(1, 2, 2), "--cells", "50"]),
        ("fig13b", ["skin", *_h2(1, 0.5, 1), "--cells", "50"]),
    ],
    "berry": [
        ("berry_topological", ["berry", *_h2(1, 2, 0.5), "--nk", "{nk}"]),
        ("berry_trivial", ["berry", *_h2(1, 0.5, 0.2), "--nk", "{nk}"]),
    ],
}


def invocations(figures=None, reduced: bool = False):
    """Yield ``(panel, argv)`` with resolution placeholders filled in."""
    values = REDUCED if reduced else FULL
    keys = list(FIGURES) if not figures else list(figures)
    for key in keys:
        if key not in FIGURES:
            raise ValueError(f"unknown figure {key!r}; choose from {', '.join(FIGURES)}")
        for panel, argv in FIGURES[key]:
            yield panel, [a.format(**values) for a in argv]


def run_cookbook(out_dir, figures=None, reduced: bool = False, plot: bool = False) -> list[str]:
    """Run the selected panels; returns the names of panels that failed."""
    from .cli import main

    out = Path(out_dir)
    failures = []
    for panel, argv in invocations(figures, reduced):
        full = [*argv, "--out", str(out / panel)] + (["--plot"] if plot else [])
        code = main(full)
        print(f"{panel}: {'ok' if code == 0 else f'exit {code}'}", file=sys.stderr)
        if code != 0:
            failures.append(panel)
    return failures
