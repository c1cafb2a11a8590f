"""Matplotlib renderings of the CSV reports; file output only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lin_report(report, path, title: str = "") -> None:
    """Lin function over its grid, log-x, with the verdict in the title."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(report.grid, report.lin_values, "o-", ms=3, lw=1.0)
    if report.monotone_violations:
        idx = [i for i, _ in report.monotone_violations]
        ax.plot(report.grid[idx], report.lin_values[idx], "rv", ms=6,
                label="monotonicity violation")
        ax.legend()
    ax.set_xlabel("x")
    ax.set_ylabel("L(x)")
    ax.set_title(f"{title}  [{report.summary_line()}]".strip())
    ax.grid(True, which="both", alpha=0.3)
    _finish(fig, path)


def render_product_table(rows, path, title: str = "") -> None:
    """Product Lin forms and the half-min lower bound on one log-x panel."""
    xs = np.array([r["x"] for r in rows])
    fig, (ax1, ax2) = plt.subplots(
        2, 1, figsize=(6.0, 6.0), sharex=True,
        gridspec_kw={"height_ratios": [2, 1]},
    )
    ax1.semilogx(xs, [r["lin_A"] for r in rows], "o-", ms=3, lw=1.0,
                 label="L_g (form A)")
    ax1.semilogx(xs, [r["lin_B"] for r in rows], "x--", ms=4, lw=0.8,
                 label="L_g (form B)")
    ax1.semilogx(xs, [r["bound_rhs"] for r in rows], ":", lw=1.2,
                 label="lower bound")
    ax1.set_ylabel("Lin function of the product")
    ax1.legend()
    ax1.grid(True, which="both", alpha=0.3)
    ax1.set_title(title)
    ax2.loglog(xs, [max(r["g"], 1e-320) for r in rows], "-", lw=1.0)
    ax2.set_xlabel("x")
    ax2.set_ylabel("g(x)")
    ax2.grid(True, which="both", alpha=0.3)
    _finish(fig, path)


def render_window(analysis, path, title: str = "") -> None:
    """g, g' and L_g across one oscillation window."""
    z = analysis.z_samples
    fig, axes = plt.subplots(3, 1, figsize=(6.5, 7.5), sharex=True)
    axes[0].plot(z, analysis.g_samples, lw=0.8)
    axes[0].set_ylabel("g(z)")
    axes[1].plot(z, analysis.g_prime_samples, lw=0.8)
    axes[1].axhline(analysis.slope_at_star, color="g", ls=":", lw=0.8)
    axes[1].axhline(analysis.slope_at_star_star, color="r", ls=":", lw=0.8)
    axes[1].plot([analysis.z_star], [analysis.slope_at_star], "g^", ms=6)
    axes[1].plot([analysis.z_star_star], [analysis.slope_at_star_star], "rv", ms=6)
    axes[1].set_ylabel("g'(z)")
    axes[2].plot(z, analysis.lin_samples, lw=0.8)
    axes[2].axhline(0.0, color="k", lw=0.6)
    axes[2].set_ylabel("L_g(z)")
    axes[2].set_xlabel("z")
    for ax in axes:
        ax.grid(True, alpha=0.3)
    axes[0].set_title(f"{title}  nu={analysis.nu:.6g}".strip())
    _finish(fig, path)


def render_demo_summary(analyses, path, title: str = "") -> None:
    """Escalation of the window Lin extremes across the square sequence."""
    n = np.arange(1, len(analyses) + 1)
    hi = np.array([a.lin_max for a in analyses])
    lo = np.array([a.lin_min for a in analyses])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(n, hi, "g^-", label="max L_g per window")
    ax.semilogy(n, -lo, "rv-", label="-min L_g per window")
    ax.set_xlabel("window index")
    ax.set_ylabel("|L_g| extremes")
    ax.set_xticks(n)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    ax.set_title(title)
    _finish(fig, path)
