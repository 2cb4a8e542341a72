"""Reports: one row per check, written as TSV and JSON next to matplotlib
figures.  Timings go to a separate file so the reports themselves are
byte-identical between runs."""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .disks import word_str  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
    "svg.hashsalt": "ktcube",
}

PASS, FAIL, INFO, SKIP = "PASS", "FAIL", "INFO", "SKIP"


def _clean(s) -> str:
    return str(s).replace("\t", " ").replace("\n", " ")


class Report:
    def __init__(self, command, config=None):
        self.command = command
        self.config = dict(config or {})
        self.rows = []
        self.data = {}
        self.figures = {}     # file name -> callable(ax-free) drawing into a new figure
        self.timings = {}

    def add(self, section, item, ok=None, detail="", verdict=None):
        if verdict is None:
            verdict = INFO if ok is None else (PASS if ok else FAIL)
        self.rows.append({"section": section, "item": item, "verdict": verdict, "detail": _clean(detail)})
        return verdict

    def extend(self, section, checks):
        for c in checks:
            self.add(section, c.name, c.ok, getattr(c, "detail", ""))

    def figure(self, name, draw):
        self.figures[name] = draw

    @property
    def failures(self):
        return [r for r in self.rows if r["verdict"] == FAIL]

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        counts = {}
        for r in self.rows:
            counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
        return counts

    def to_json(self):
        return {"command": self.command, "config": self.config, "ok": self.ok,
                "summary": self.summary(), "rows": self.rows, "data": self.data}

    def tsv(self) -> str:
        lines = ["section\titem\tverdict\tdetail"]
        lines += [f"{r['section']}\t{r['item']}\t{r['verdict']}\t{r['detail']}" for r in self.rows]
        return "\n".join(lines) + "\n"

    def write(self, out):
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.tsv").write_text(self.tsv())
        (out / "report.json").write_text(json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n")
        if self.timings:
            (out / "timings.json").write_text(json.dumps(self.timings, indent=1, sort_keys=True) + "\n")
        written = []
        with plt.rc_context(STYLE):
            for name, draw in sorted(self.figures.items()):
                fig = draw()
                path = out / name
                fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
                plt.close(fig)
                written.append(path)
        return written

    def print_table(self, stream=None, failures_only=False):
        import sys
        stream = stream or sys.stdout
        for r in self.rows:
            if failures_only and r["verdict"] != FAIL:
                continue
            print(f"{r['verdict']:4}  {r['section']:10}  {r['item']}" + (f"  [{r['detail']}]" if r["detail"] else ""),
                  file=stream)


# ---------------------------------------------------------------------------
# figures

def bar_sizes(title, names, values, log=True):
    def draw():
        fig, ax = plt.subplots(figsize=(6.4, 0.25 * len(names) + 1.2))
        ax.barh(range(len(names)), values, color="#4878a8")
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names)
        ax.invert_yaxis()
        if log and values and max(values) > 0:
            ax.set_xscale("log")
        ax.set_xlabel("cells")
        ax.set_title(title)
        fig.tight_layout()
        return fig
    return draw


def ledger_plot(rows, bound_fn, title):
    """Tracked duality dimension per stage against the stated bound."""
    def draw():
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ks = [r["stage"] for r in rows]
        ax.plot(ks, [r["duality"] for r in rows], "o-", label="tracked")
        ax.plot(ks, [bound_fn(k) for k in ks], "s--", color="#c44e52", label="10m - 7")
        ax.set_xlabel("simplices attached (m)")
        ax.set_ylabel("duality dimension")
        ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        return fig
    return draw


def polyomino_plot(disks, title):
    """The tesselated disks with their boundary words."""
    def draw():
        n = len(disks)
        cols = min(n, 3)
        rows = (n + cols - 1) // cols
        fig, axes = plt.subplots(rows, cols, figsize=(3 * cols, 2.6 * rows), squeeze=False)
        for ax in axes.flat:
            ax.set_axis_off()
        for ax, d in zip(axes.flat, disks):
            for (x, y) in sorted(d.squares):
                ax.add_patch(plt.Rectangle((x, y), 1, 1, facecolor="#dde7f1", edgecolor="#4878a8", lw=0.8))
            cyc = d.cycle()
            ax.plot([p[0] for p in cyc + cyc[:1]], [p[1] for p in cyc + cyc[:1]], color="k", lw=1.2)
            starts = [cyc[(d.offset + k * d.side_length) % len(cyc)] for k in range(len(d.word))]
            ax.plot([p[0] for p in starts], [p[1] for p in starts], "o", color="#c44e52", ms=3)
            ax.set_aspect("equal")
            ax.autoscale_view()
            ax.set_title(word_str(d.word), fontsize=8)
        fig.suptitle(title)
        fig.tight_layout()
        return fig
    return draw


def homology_table_plot(labels, left, right, title, left_name="H(X)", right_name="H(L(X))"):
    def draw():
        fig, ax = plt.subplots(figsize=(6, 0.3 * len(labels) + 1))
        ax.set_axis_off()
        cells = [[lab, str(a), str(b), "=" if a == b else "differs"] for lab, a, b in zip(labels, left, right)]
        t = ax.table(cellText=cells, colLabels=["complex", left_name, right_name, ""], loc="center")
        t.auto_set_font_size(False)
        t.set_fontsize(8)
        ax.set_title(title)
        fig.tight_layout()
        return fig
    return draw
