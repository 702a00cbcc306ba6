"""Static figure rendering for the CLI report paths (SVG via matplotlib)."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_annulus_figure(prediction, path, eigenvalues=None, lam=None, title=None):
    """Draw the predicted spectral annuli and optional eigenvalue scatter.

    The outer band [inner_lower, outer_upper] must contain the spectrum; the
    shaded band [inclusion_inner, inclusion_outer] is the certified inclusion
    (and universality window) when nonempty.
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    theta = np.linspace(0.0, 2.0 * np.pi, 512)
    circle = np.exp(1j * theta)

    def ring(r, style, color, label=None):
        if r > 0:
            ax.plot(r * circle.real, r * circle.imag, style, color=color, lw=1.2, label=label)

    if prediction.universality_window_nonempty:
        ax.fill(
            np.concatenate([prediction.inclusion_outer * circle.real,
                            prediction.inclusion_inner * circle.real[::-1]]),
            np.concatenate([prediction.inclusion_outer * circle.imag,
                            prediction.inclusion_inner * circle.imag[::-1]]),
            color="tab:orange", alpha=0.15, label="inclusion annulus",
        )
    ring(prediction.outer_upper, "-", "tab:blue", "containment bounds")
    ring(prediction.inner_lower, "-", "tab:blue")
    ring(prediction.inclusion_inner, "--", "tab:orange")
    ring(prediction.inclusion_outer, "--", "tab:orange")
    if eigenvalues is not None and len(eigenvalues):
        ev = np.asarray(eigenvalues)
        ax.plot(ev.real, ev.imag, ".", color="0.3", ms=3, alpha=0.6,
                label="finite-section eigenvalues")
    if lam is not None:
        ax.plot([complex(lam).real], [complex(lam).imag], "*", color="tab:red",
                ms=12, label="lambda")
    lim = 1.15 * max(prediction.outer_upper, abs(complex(lam)) if lam else 0.0, 1e-3)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.85", lw=0.5)
    ax.axvline(0.0, color="0.85", lw=0.5)
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(title or "predicted spectral annuli")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)


def save_gelfand_figure(sequences, references, path, title=None):
    """Plot root-test sequences against their predicted limits.

    ``sequences`` maps labels to 1-d arrays; ``references`` maps labels to
    horizontal reference values.
    """
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, values in sequences.items():
        n = np.arange(1, len(values) + 1)
        ax.plot(n, values, "-", lw=1.4, label=label)
    for label, value in references.items():
        ax.axhline(value, ls=":", color="0.4", lw=1.0)
        ax.annotate(label, xy=(1.0, value), fontsize=8, color="0.3",
                    xytext=(2, 2), textcoords="offset points")
    ax.set_xlabel("iteration n")
    ax.set_ylabel(r"growth estimate")
    ax.legend(fontsize=8)
    ax.set_title(title or "Gelfand radius estimates")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
