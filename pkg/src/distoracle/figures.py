"""Figure rendering for audit and benchmark reports (writes PNG files)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def render_stretch_figure(report, path, guarantee=None) -> None:
    """Two panels from an audit: estimate vs truth, and the stretch histogram.

    `guarantee` is an optional (alpha, beta) pair; when given, the allowed
    region boundary est = alpha * d + beta is drawn alongside est = d.
    """
    pairs = [(d, est) for d, est in report.samples if d > 0 and est < float("inf")]
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4.2))
    if pairs:
        ds = [d for d, _ in pairs]
        ests = [e for _, e in pairs]
        left.scatter(ds, ests, s=12, alpha=0.6, edgecolors="none", label="sampled pairs")
        lo, hi = min(ds), max(ds)
        left.plot([lo, hi], [lo, hi], "k--", linewidth=1, label="est = d")
        if guarantee is not None:
            a, b = guarantee
            left.plot([lo, hi], [a * lo + b, a * hi + b], "r-", linewidth=1,
                      label=f"est = {a}d + {b}")
        ratios = [e / d for d, e in pairs]
        right.hist(ratios, bins=30, color="#4878cf", edgecolor="white")
        right.axvline(1.0, color="k", linestyle="--", linewidth=1)
        if guarantee is not None and guarantee[1] == 0:
            right.axvline(guarantee[0], color="r", linewidth=1)
    left.set_xlabel("exact distance")
    left.set_ylabel("oracle estimate")
    left.set_title(f"{report.kind}: {report.pairs_checked} pairs, "
                   f"{report.violations} violations")
    if pairs:
        left.legend(loc="upper left", fontsize=8)
    right.set_xlabel("est / d")
    right.set_ylabel("pairs")
    right.set_title("stretch distribution")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_bench_figure(report, path) -> None:
    """Horizontal bars: median milliseconds per build phase with IQR whiskers."""
    names = sorted(report.phase_ms) + ["total build"]
    stats = [report.phase_ms[n] for n in sorted(report.phase_ms)] + [report.build_ms]
    medians = [s[1] for s in stats]
    errs = [[max(0.0, s[1] - s[0]) for s in stats], [max(0.0, s[2] - s[1]) for s in stats]]
    fig, ax = plt.subplots(figsize=(8, 0.6 * len(names) + 1.8))
    ypos = range(len(names))
    ax.barh(ypos, medians, xerr=errs, color="#4878cf", edgecolor="white", capsize=3)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names)
    ax.invert_yaxis()
    ax.set_xlabel("milliseconds (median, IQR whiskers)")
    ax.set_title(f"{report.algo} k={report.k} on n={report.n} m={report.m} "
                 f"({report.reps} reps)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
