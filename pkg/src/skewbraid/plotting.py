"""Matplotlib figures written next to the CSV outputs of the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .monodromy import BraidGeometry  # noqa: E402


def plot_braid(g: BraidGeometry, path, projection_angle: float = 0.0, title: str | None = None) -> None:
    """Strands in the w-plane (left) and their projection against t (right)."""
    comps = g.permutation.cycles()
    colour_of = {}
    cmap = plt.get_cmap("tab10")
    for k, comp in enumerate(comps):
        for lab in comp:
            colour_of[lab] = cmap(k % 10)
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4.5))
    proj = (np.exp(1j * projection_angle) * g.W).real
    for i in range(g.strand_count):
        col = colour_of[i + 1]
        ax0.plot(g.W[:, i].real, g.W[:, i].imag, color=col, lw=1.2)
        ax0.plot(g.W[0, i].real, g.W[0, i].imag, "o", color=col, ms=4)
        ax0.annotate(str(i + 1), (g.W[0, i].real, g.W[0, i].imag), textcoords="offset points", xytext=(4, 4))
        ax1.plot(g.t, proj[:, i], color=col, lw=1.2)
    ax0.set_aspect("equal", adjustable="datalim")
    ax0.set_xlabel("Re w")
    ax0.set_ylabel("Im w")
    ax0.set_title("strands over the circle")
    ax1.set_xlabel("t")
    ax1.set_ylabel(f"Re(exp({projection_angle:.3g} i) w)")
    ax1.set_title("projection")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_discriminant_roots(rts, path, circle_tol: float = 1e-6, title: str | None = None) -> None:
    """Zeros of the discriminant polynomial with the unit circle for reference."""
    rts = np.asarray(rts, dtype=complex)
    fig, ax = plt.subplots(figsize=(5, 5))
    th = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(th), np.sin(th), color="0.6", lw=1)
    if rts.size:
        on = np.abs(np.abs(rts) - 1) <= circle_tol
        ax.plot(rts[~on].real, rts[~on].imag, "o", color="tab:blue", label="off circle")
        ax.plot(rts[on].real, rts[on].imag, "x", color="tab:red", ms=9, label="on circle")
        ax.legend(loc="upper right")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(title or "discriminant zeros")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
