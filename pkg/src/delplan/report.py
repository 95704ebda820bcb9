"""Report rendering: tab-separated tables plus matplotlib figures.

Every report writes a .tsv and a .png side by side so results can be
diffed textually and eyeballed graphically.  Rendering is headless and
deterministic (fixed figure sizes, no timestamps).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .satcompile import BlowupReport
from .structure import RegularRepresentation


def write_blowup_report(report: BlowupReport, out_dir: str | Path, stem: str = "blowup") -> list[Path]:
    """Per-knowledge-level state counts, as TSV and a grouped bar chart."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tsv_path = out / f"{stem}.tsv"
    tsv_path.write_text(report.to_tsv())

    levels = list(range(len(report.pre_minimization)))
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.38
    ax.bar(
        [x - width / 2 for x in levels],
        report.pre_minimization,
        width,
        label="before minimization",
        color="#4878b0",
    )
    ax.bar(
        [x + width / 2 for x in levels],
        report.minimized,
        width,
        label="after minimization",
        color="#e1812c",
    )
    ax.set_xlabel("knowledge nesting level")
    ax.set_ylabel("automaton states")
    ax.set_title("State blowup per knowledge level")
    ax.set_xticks(levels)
    ax.legend()
    fig.tight_layout()
    png_path = out / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [tsv_path, png_path]


def write_size_report(rep: RegularRepresentation, out_dir: str | Path, stem: str = "sizes") -> list[Path]:
    """Component sizes of a representation, as TSV and a bar chart."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tsv_path = out / f"{stem}.tsv"
    tsv_path.write_text(rep.size_report())

    labels = ["domain"]
    transitions = [rep.domain.n_transitions]
    for p, d in rep.valuations.items():
        labels.append(f"val[{p}]")
        transitions.append(d.n_transitions)
    for i, t in rep.relations.items():
        labels.append(f"rel[{i}]")
        transitions.append(t.n_transitions)

    fig, ax = plt.subplots(figsize=(max(6, 0.8 * len(labels)), 4))
    ax.bar(range(len(labels)), transitions, color="#4878b0")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("transitions")
    ax.set_title("Representation component sizes")
    fig.tight_layout()
    png_path = out / f"{stem}.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [tsv_path, png_path]
