"""Figure rendering for the CLI report paths.

Each function takes the already-computed report data and writes one PNG
next to the delimited output. Uses the Agg backend so the CLI never needs
a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_hierarchy(stats, path) -> None:
    """Level sizes (log scale) and coarsening rates."""
    levels = [s.level for s in stats]
    sizes = [s.n for s in stats]
    rates = [s.rate for s in stats if s.rate is not None]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ax1.semilogy(levels, sizes, "o-")
    ax1.set_xlabel("level")
    ax1.set_ylabel("vertices")
    ax1.set_title("level sizes")
    if rates:
        ax2.plot(levels[:len(rates)], rates, "s-")
        ax2.axhline(0.5, color="gray", linestyle="--", linewidth=0.8)
        ax2.set_ylim(0, 0.6)
    ax2.set_xlabel("level")
    ax2.set_ylabel("coarsening rate")
    ax2.set_title("rates (cap 0.5)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bench(records, path) -> None:
    """Run time and residual per benchmark graph."""
    done = [r for r in records if r.get("converged") is not None]
    names = [r["name"] for r in done]
    times = [r["time_s"] for r in done]
    residuals = [r["residual"] for r in done]

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(max(6, 0.6 * len(names)), 6),
                                   sharex=True)
    x = range(len(names))
    ax1.bar(x, times, color="steelblue")
    ax1.set_ylabel("solve time [s]")
    ax2.bar(x, residuals, color="indianred")
    ax2.set_yscale("log")
    ax2.set_ylabel("residual")
    ax2.set_xticks(list(x))
    ax2.set_xticklabels(names, rotation=45, ha="right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_gcmg(report, path) -> None:
    """Per-level eigenvalue errors before and after smoothing."""
    rows = report.refined_rows()
    idx = [r.index for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.semilogy(idx, [r.err_pre for r in rows], "o-", label="after prolongation")
    ax.semilogy(idx, [r.err_post for r in rows], "s-", label="after smoothing")
    ax.invert_xaxis()  # coarse on the left, finest (0) on the right
    ax.set_xlabel("level (coarse to fine)")
    ax.set_ylabel("eigenvalue error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_rates(table, path) -> None:
    """Log-log error versus mesh size with the fitted order."""
    h = [p.h0 for p in table.points]
    e = [p.error for p in table.points]
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(h, e, "o", label="measured")
    ref = [e[0] * (x / h[0]) ** table.fitted_order for x in h]
    ax.loglog(h, ref, "--", label=f"fit: order {table.fitted_order:.2f}")
    ax.set_xlabel("finest mesh size h")
    ax.set_ylabel("final eigenvalue error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
