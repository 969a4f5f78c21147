"""Figure rendering for the bench and estimator report paths.

Figures are written to files next to the CSV output; nothing here is
interactive. matplotlib is imported lazily with the Agg backend so the
CLI works headless.
"""

__all__ = ["render_bench_figure", "render_estimate_figure"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_bench_figure(records, path) -> None:
    """Wall time and witness degree against m, one marker per record."""
    plt = _pyplot()
    ms = [rec.m for rec in records]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    ax1.plot(ms, [rec.wall_ms for rec in records], "o-", color="tab:red")
    ax1.set_ylabel("wall time (ms)")
    ax1.set_yscale("log")
    ax1.grid(True, which="both", alpha=0.3)
    ax2.plot(ms, [rec.max_degree for rec in records], "s-", color="tab:blue", label="max degree")
    ax2.plot(ms, [rec.p_max for rec in records], "^--", color="tab:green", label="largest prime")
    ax2.set_xlabel("m (entries)")
    ax2.set_ylabel("degree / ring size")
    ax2.set_xscale("log")
    ax2.set_yscale("log")
    ax2.grid(True, which="both", alpha=0.3)
    ax2.legend()
    r = records[0].r if records else "?"
    ax1.set_title(f"search cost vs array length (r = {r})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_estimate_figure(points, steps, r, path) -> None:
    """Predicted time curve over a sweep of m, with prime-set step points
    marked; points is a list of (m, predicted_ms)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot([m for m, _ in points], [t for _, t in points], color="tab:red", lw=1.5)
    for i, sm in enumerate(steps):
        ax.axvline(sm, color="tab:blue", ls=":", alpha=0.6,
                   label="prime-set step" if i == 0 else None)
    ax.set_xlabel("m (entries)")
    ax.set_ylabel("predicted time (ms)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.set_title(f"estimated search time (r = {r})")
    if steps:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
