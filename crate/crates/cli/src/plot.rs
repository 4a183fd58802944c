//! Generates a standalone matplotlib script for an experiment's CSVs.

use std::fmt::Write as _;

/// One subplot.
#[derive(Clone, Debug, PartialEq)]
pub enum Panel {
    /// One line per `y` column against column `x`.
    Columns { csv: String, x: String, ys: Vec<String>, title: String, ylabel: String, log: bool },
    /// Long-format table: one line per distinct value of `group`.
    Grouped { csv: String, group: String, x: String, y: String, title: String, hline: Option<(f64, String)> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub panels: Vec<Panel>,
    pub output: String,
}

fn py_str(s: &str) -> String {
    format!("{:?}", s)
}

fn py_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| py_str(s)).collect();
    format!("[{}]", quoted.join(", "))
}

/// Python source plotting the panels of `spec`; CSVs are read relative to
/// the script's own directory.
pub fn emit_plot_script(spec: &PlotSpec) -> String {
    let mut out = String::new();
    out.push_str(
        r#"#!/usr/bin/env python3
# Generated by `dbi run`; re-running the experiment regenerates this file.
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        return list(csv.DictReader(fh))


def num(value):
    return float(value) if value != "" else float("nan")


"#,
    );
    let n = spec.panels.len().max(1);
    writeln!(out, "fig, axes = plt.subplots(1, {n}, figsize=({}, 4), squeeze=False)", 5 * n).unwrap();
    writeln!(out, "fig.suptitle({})", py_str(&spec.title)).unwrap();
    for (i, panel) in spec.panels.iter().enumerate() {
        writeln!(out, "\nax = axes[0][{i}]").unwrap();
        match panel {
            Panel::Columns { csv, x, ys, title, ylabel, log } => {
                writeln!(out, "rows = load({})", py_str(csv)).unwrap();
                writeln!(out, "for col in {}:", py_list(ys)).unwrap();
                writeln!(out, "    ax.plot([num(r[{}]) for r in rows], [num(r[col]) for r in rows], label=col)", py_str(x))
                    .unwrap();
                if *log {
                    out.push_str("ax.set_xscale(\"log\")\nax.set_yscale(\"log\")\n");
                }
                writeln!(out, "ax.set_xlabel({})", py_str(x)).unwrap();
                writeln!(out, "ax.set_ylabel({})", py_str(ylabel)).unwrap();
                writeln!(out, "ax.set_title({})", py_str(title)).unwrap();
            }
            Panel::Grouped { csv, group, x, y, title, hline } => {
                writeln!(out, "rows = load({})", py_str(csv)).unwrap();
                out.push_str("groups = {}\n");
                writeln!(out, "for r in rows:\n    groups.setdefault(r[{}], []).append(r)", py_str(group)).unwrap();
                out.push_str("for name, series in groups.items():\n");
                writeln!(out, "    ax.plot([num(r[{}]) for r in series], [num(r[{}]) for r in series], marker=\".\", label=name)", py_str(x), py_str(y))
                    .unwrap();
                if let Some((value, label)) = hline {
                    writeln!(out, "ax.axhline({value:?}, color=\"grey\", linestyle=\":\", label={})", py_str(label)).unwrap();
                }
                writeln!(out, "ax.set_xlabel({})", py_str(x)).unwrap();
                writeln!(out, "ax.set_ylabel({})", py_str(y)).unwrap();
                writeln!(out, "ax.set_title({})", py_str(title)).unwrap();
            }
        }
        out.push_str("if ax.get_legend_handles_labels()[0]:\n    ax.legend(fontsize=\"small\")\n");
    }
    writeln!(out, "\nfig.tight_layout()\nfig.savefig(os.path.join(HERE, {}), dpi=150)", py_str(&spec.output)).unwrap();
    out
}
