"""Static SVG figures.  Output is reproducible: fixed hash salt, no date stamp."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

plt.rcParams["svg.hashsalt"] = "nhssh"
plt.rcParams["svg.fonttype"] = "none"

# white / sky blue / light magenta for nu = 0, 1/2, 1
NU_COLORS = ListedColormap(["#ffffff", "#87ceeb", "#f4a6f4"])


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def band_plot(k, e_plus, e_minus, path, title=""):
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.plot(k, np.real(e_plus), lw=1.2, label="Re E+")
    ax.plot(k, np.real(e_minus), lw=1.2, label="Re E-")
    ax.set_xlabel("k")
    ax.set_ylabel("Re E")
    ax.set_xlim(-np.pi, np.pi)
    ax.set_title(title, fontsize=8)
    ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def spectrum_plot(eigenvalues, path, title=""):
    e = np.asarray(eigenvalues)
    fig, ax = plt.subplots(figsize=(3.5, 3.5))
    ax.scatter(e.real, e.imag, s=6)
    ax.axhline(0, color="0.7", lw=0.5)
    ax.axvline(0, color="0.7", lw=0.5)
    ax.set_xlabel("Re E")
    ax.set_ylabel("Im E")
    ax.set_title(title, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def heatmap(grid, path, title=""):
    fig, ax = plt.subplots(figsize=(4, 3.5))
    extent = (grid.x_axis.min, grid.x_axis.max, grid.y_axis.min, grid.y_axis.max)
    cmap = NU_COLORS if grid.observable.value == "nu" else "viridis"
    kwargs = {"vmin": 0, "vmax": 1} if grid.observable.value == "nu" else {}
    im = ax.imshow(grid.values, origin="lower", extent=extent, aspect="auto",
                   cmap=cmap, interpolation="nearest", **kwargs)
    fig.colorbar(im, ax=ax)
    ax.set_xlabel(grid.x_axis.name)
    ax.set_ylabel(grid.y_axis.name)
    ax.set_title(title, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def line_plot(x, ys: dict, path, xlabel="", ylabel="", title="", step=False):
    fig, ax = plt.subplots(figsize=(4, 3))
    for label, y in ys.items():
        if step:
            ax.step(x, y, where="mid", label=label)
        else:
            ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=8)
    if len(ys) > 1:
        ax.legend(fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def density_plot(density, path, title=""):
    fig, ax = plt.subplots(figsize=(4, 3))
    sites = np.arange(1, len(density) + 1)
    ax.plot(sites, density, lw=1.2)
    ax.set_xlabel("site")
    ax.set_ylabel("sum of |psi|^2")
    ax.set_title(title, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)
