"""Optional figure rendering for the CLI's --figures flag.

matplotlib is imported lazily (Agg backend) so that library users and the
default data-only CLI paths never pay for it; every function writes a PNG
next to the delimited artifact and returns the path.
"""

from __future__ import annotations

import os


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_eval_figure(path: str, theta, columns: dict, subtitle: str) -> str:
    """Overlay the evaluated representations over colatitude."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, values in columns.items():
        ax.plot(theta, values, lw=1.2, label=label)
    ax.set_xlabel(r"colatitude $\theta$")
    ax.set_ylabel("wavelet value")
    ax.set_title(subtitle)
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)


def save_transform_figure(path: str, a_nodes, theta, samples, subtitle: str) -> str:
    """Scale-colatitude heat map of the transform samples (rows = scales)."""
    plt = _pyplot()
    import numpy as np

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    mesh = ax.pcolormesh(theta, np.log10(a_nodes), samples, shading="auto", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label="W f(a, theta)")
    ax.set_xlabel(r"colatitude $\theta$")
    ax.set_ylabel(r"$\log_{10} a$")
    ax.set_title(subtitle)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)


def save_invert_figure(path: str, degrees, ratio, predicted, subtitle: str) -> str:
    """Per-degree reconstruction ratio against the incomplete-Gamma prediction."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(degrees, ratio, "o", ms=4, label="measured")
    ax.plot(degrees, predicted, "-", lw=1.2, label="predicted")
    ax.set_xlabel("degree l")
    ax.set_ylabel("reconstructed / original")
    ax.set_ylim(0.0, 1.1)
    ax.set_title(subtitle)
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)


def save_euclid_figure(path: str, s, profile, rescaled: dict, subtitle: str) -> str:
    """Limit profile with the rescaled wavelets approaching it."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, values in rescaled.items():
        ax.plot(s, values, lw=1.0, alpha=0.8, label=label)
    ax.plot(s, profile, "k--", lw=1.6, label="limit profile")
    ax.set_xlabel("s")
    ax.set_ylabel("value")
    ax.set_title(subtitle)
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return os.path.abspath(path)
