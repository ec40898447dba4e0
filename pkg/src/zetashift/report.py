"""Matplotlib companions to the CSV/JSON/PPM outputs."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .plots import ImageBuffer, PlotSpec  # noqa: E402

_META = {"Software": None}


def _titles(spec: PlotSpec) -> str:
    if spec.function == "reference_pole":
        return "1/(s-1)"
    if spec.function == "truncated_G":
        return f"G_{spec.N}(s, {spec.a:g})"
    return f"G_{spec.N}(s, {spec.a:g}) - 1/(s-1)"


def figure_png(spec: PlotSpec, buf: ImageBuffer, path) -> str:
    """Image with labelled axes over the plotted region."""
    re0, re1, im0, im1 = spec.region
    fig, ax = plt.subplots(figsize=(5, 5), dpi=100)
    ax.imshow(buf.array(), extent=(re0, re1, im0, im1), origin="upper", interpolation="nearest")
    ax.set_xlabel("Re s")
    ax.set_ylabel("Im s")
    ax.set_title(_titles(spec))
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return str(path)


def diagnostics_png(diag, path, title: str = "") -> str:
    """|partial sum| and |term| against n, with the term-ratio trace underneath."""
    n = np.arange(len(diag.partial_sums))
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 6), dpi=100, sharex=True)
    with np.errstate(divide="ignore"):
        ps = np.abs(np.array(diag.partial_sums, dtype=complex))
        ts = np.abs(np.array(diag.terms, dtype=complex))
    top.semilogy(n, np.where(ps > 0, ps, np.nan), label="|partial sum|")
    top.semilogy(n, np.where(ts > 0, ts, np.nan), ".", ms=3, label="|term|")
    top.legend(loc="best")
    top.set_title(title or diag.verdict.label)
    ratios = np.array([r if r is not None and math.isfinite(r) else np.nan for r in diag.term_ratios], dtype=float)
    bottom.plot(np.arange(len(ratios)) * diag.ratio_stride, ratios, ".-", ms=3)
    bottom.set_xlabel("n")
    bottom.set_ylabel(f"term ratio (stride {diag.ratio_stride})")
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return str(path)


def residuals_png(reports, path, tol: float | None = None) -> str:
    """Residual of each identity check on a log scale."""
    res = [max(r.residual, 1e-300) for r in reports]
    fig, ax = plt.subplots(figsize=(6, 3.5), dpi=100)
    ax.semilogy(range(len(res)), res, "o", ms=4)
    if tol is not None:
        ax.axhline(tol, color="r", lw=1, label=f"tol {tol:g}")
        ax.legend(loc="best")
    ax.set_xlabel("grid point")
    ax.set_ylabel("|residual|")
    if reports:
        ax.set_title(reports[0].identity)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return str(path)
