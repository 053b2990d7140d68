"""Report figures rendered next to the delimited outputs."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_trace(trace, path, title=None):
    """Residual/update norm and test error against the iteration step."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(trace.steps, trace.residuals, "o-", ms=3, color="tab:blue",
                label="residual / update norm")
    ax.set_xlabel("iteration $t$")
    ax.set_ylabel("norm", color="tab:blue")
    known = [(t, e) for t, e in zip(trace.steps, trace.errors) if e is not None]
    if known:
        ax2 = ax.twinx()
        ax2.plot(*zip(*known), "s-", ms=3, color="tab:red", label=r"test error $\eta$")
        ax2.set_ylabel(r"$\eta$", color="tab:red")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_confusion(report, path, title=None):
    """Row-percentage confusion matrix heatmap."""
    percent = np.asarray(report.confusion_percent)
    k = percent.shape[0]
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    im = ax.imshow(percent, cmap="viridis", vmin=0.0, vmax=100.0)
    fig.colorbar(im, ax=ax, label="% of true class")
    ax.set_xticks(range(k))
    ax.set_yticks(range(k))
    ax.set_xlabel("predicted class")
    ax.set_ylabel("true class")
    if k <= 12:
        thresh = 50.0
        for i in range(k):
            for j in range(k):
                ax.text(j, i, f"{percent[i, j]:.1f}", ha="center", va="center",
                        fontsize=7,
                        color="white" if percent[i, j] < thresh else "black")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
