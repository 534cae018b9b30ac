"""Figure rendering for search reports and represented-value density."""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .triangular import TriangularForm, represented_set


def save_report_figure(report, directory: str) -> str:
    """Render a report overview PNG into the directory; returns the path."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{report.kind}_report.png")
    fig, ax = plt.subplots(figsize=(7, 4))
    accepted = [e for e in report.entries if e.get("accepted")]
    rejected = [e for e in report.entries if not e.get("accepted")]
    if rejected:
        ax.scatter(
            [e["disc"] for e in rejected],
            [max(e["coeffs"]) for e in rejected],
            marker="x", color="0.6", label="rejected",
        )
    if accepted:
        ax.scatter(
            [e["disc"] for e in accepted],
            [max(e["coeffs"]) for e in accepted],
            marker="o", color="tab:blue", label="accepted",
        )
        for e in accepted:
            ax.annotate(
                ",".join(str(c) for c in e["coeffs"]),
                (e["disc"], max(e["coeffs"])),
                textcoords="offset points", xytext=(4, 4), fontsize=7,
            )
    ax.set_xlabel("discriminant")
    ax.set_ylabel("largest coefficient")
    title = {
        "universal": "universal ternary candidates (escalator sweep)",
        "regular": f"regularity sweep survivors (N={report.config.get('verify_n', '?')})",
    }.get(report.kind, report.kind)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_density_figure(form: TriangularForm, bound: int, directory: str) -> str:
    """Cumulative represented-value density of a triangular form."""
    os.makedirs(directory, exist_ok=True)
    name = "tri_" + "_".join(str(c) for c in form.coeffs) + "_density.png"
    path = os.path.join(directory, name)
    mask = represented_set(form, bound)
    xs, ys, hit = [], [], 0
    for m in range(bound + 1):
        hit += (mask >> m) & 1
        xs.append(m)
        ys.append(hit / (m + 1))
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(xs, ys, lw=1.2)
    ax.set_xlabel("m")
    ax.set_ylabel("fraction represented <= m")
    ax.set_ylim(0, 1.05)
    ax.set_title("represented density of tri " + ",".join(str(c) for c in form.coeffs))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
