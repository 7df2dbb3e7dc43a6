"""Matplotlib figure rendering for the CLI report paths (headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .riemann1d import ClassicalSolution1D, sample_profile
from .verify import DissipationReport


def save_profile_figure(
    sol: ClassicalSolution1D, t: float, n: int, path: str
) -> str:
    """Stacked rho/v1/v2 profiles of a classical fan at time t."""
    speeds = [w.speed for w in sol.waves]
    span = max([abs(s) for s in speeds] + [1.0 / sol.data.left.rho, 1.0 / sol.data.right.rho])
    xs = np.linspace(-1.6 * span * t, 1.6 * span * t, n)
    states = [sample_profile(sol, sol.data, t, float(x)) for x in xs]
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(7.0, 7.5))
    labels = (r"$\varrho$", r"$v_1$", r"$v_2$")
    series = (
        [s.rho for s in states],
        [s.v1 for s in states],
        [s.v2 for s in states],
    )
    for ax, label, ys in zip(axes, labels, series):
        ax.step(xs, ys, where="post", lw=1.5)
        for speed in speeds:
            ax.axvline(speed * t, color="0.6", ls="--", lw=0.8)
        ax.set_ylabel(label)
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel(r"$x_2$")
    axes[0].set_title(f"classical contact fan at t = {t:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(rows: list[dict], path: str) -> str:
    """epsilon_1, the epsilon_2 bound, and the interface speeds over a rho1 grid."""
    rho1 = [r["rho1"] for r in rows]
    fig, (ax_eps, ax_nu) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 6.5))
    ax_eps.plot(rho1, [r["eps1"] for r in rows], "o-", label=r"$\epsilon_1$")
    ax_eps.plot(
        rho1, [r["eps2_bound"] for r in rows], "s-", label=r"$\epsilon_2$ bound"
    )
    ax_eps.axhline(0.0, color="k", lw=0.8)
    feasible = [r["rho1"] for r in rows if r["feasible"]]
    if feasible:
        ax_eps.axvspan(min(feasible), max(feasible), color="tab:green", alpha=0.12)
    ax_eps.set_ylabel("kinetic slack")
    ax_eps.legend()
    ax_eps.grid(alpha=0.3)
    for key, label in (("nu_minus", r"$\nu_-$"), ("beta", r"$\beta$"), ("nu_plus", r"$\nu_+$")):
        ax_nu.plot(rho1, [r[key] for r in rows], "o-", label=label)
    ax_nu.set_xlabel(r"$\varrho_1$")
    ax_nu.set_ylabel("interface speeds")
    ax_nu.legend()
    ax_nu.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_dissipation_figure(report: DissipationReport, path: str) -> str:
    """Per-interface dissipation bars for the subsolution (and classical fan)."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    n_sub = len(report.sub_d)
    xs = np.arange(n_sub)
    ax.bar(xs - 0.18, report.sub_d, width=0.36, label="subsolution")
    if report.classical_d is not None:
        xc = np.arange(len(report.classical_d))
        ax.bar(xc + 0.18, report.classical_d, width=0.36, label="classical fan")
        ax.set_title(
            f"$D_L$ difference (sub - classical) = {report.difference:.6g} at L = {report.L:g}"
        )
    else:
        ax.set_title(f"delta-shock regime, $D_L$(sub) = {report.sub_rate:.6g}")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xticks(xs)
    ax.set_xticklabels([f"interface {i}" for i in range(n_sub)])
    ax.set_ylabel("dissipation line density d")
    ax.legend()
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
