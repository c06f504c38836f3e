use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{ResultTable, ScenarioKind};
use crate::{Error, Result};

struct Layout {
    x: &'static str,
    y: &'static str,
    /// Third axis for surface plots.
    z: Option<&'static str>,
    log_x: bool,
    log_y: bool,
    x_label: &'static str,
    y_label: &'static str,
}

fn layout(kind: ScenarioKind) -> Layout {
    let plain = |x, y, x_label, y_label| Layout {
        x,
        y,
        z: None,
        log_x: false,
        log_y: false,
        x_label,
        y_label,
    };
    match kind {
        ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid => Layout {
            z: Some("N"),
            ..plain("n1", "n2", "n1", "n2")
        },
        ScenarioKind::ConvergenceRatio => plain("n1", "ratio", "n1", "N(n1,n2) / N(inf,inf)"),
        ScenarioKind::EnergyVsNegativity => Layout {
            log_x: true,
            ..plain("alpha", "ratio", "alpha", "energy per oscillator / 2^N")
        },
        ScenarioKind::EvenOddScaling => plain("n", "N", "n", "log-negativity"),
        ScenarioKind::SeparationScan => Layout {
            log_y: true,
            ..plain("separation", "N", "separation", "log-negativity")
        },
        ScenarioKind::ClassicalCorrelations => Layout {
            log_y: true,
            ..plain("j", "correlation", "oscillator j", "<X_1 X_j>")
        },
        ScenarioKind::ThermalScan => plain("temperature", "N", "T", "log-negativity"),
        ScenarioKind::QSpectrumScan => Layout {
            log_x: true,
            log_y: true,
            ..plain("alpha", "q_minus_1", "alpha", "eigenvalues of Q - 1")
        },
    }
}

fn quote(path: &str) -> String {
    format!("'{}'", path.replace('\'', "''"))
}

/// Gnuplot script plotting `table` from the CSV at `csv_path`.
pub fn plot_script(table: &ResultTable, csv_path: &str) -> Result<String> {
    let kind = match table.metadata_value("kind") {
        None => return Err(Error::Scenario("table metadata has no scenario kind".into())),
        Some(k) => k.parse::<ScenarioKind>()?,
    };
    let l = layout(kind);
    for col in [Some(l.x), Some(l.y), l.z].into_iter().flatten() {
        if table.column_index(col).is_none() {
            return Err(Error::Scenario(format!(
                "{kind} table has no {col:?} column to plot"
            )));
        }
    }

    let mut s = String::new();
    let _ = writeln!(s, "# {kind}");
    for (k, v) in table.metadata() {
        if k != "kind" {
            let _ = writeln!(s, "# {k} = {v}");
        }
    }
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    let _ = writeln!(s, "set xlabel '{}'", l.x_label);
    let _ = writeln!(s, "set ylabel '{}'", l.y_label);
    if l.log_x {
        s.push_str("set logscale x\n");
    }
    if l.log_y {
        s.push_str("set logscale y\n");
    }
    let file = quote(csv_path);
    match l.z {
        Some(z) => {
            let _ = writeln!(s, "set zlabel '{z}'");
            s.push_str("set ticslevel 0\n");
            let _ = writeln!(
                s,
                "splot {file} using '{}':'{}':'{z}' with points pointtype 7 pointsize 0.5",
                l.x, l.y
            );
        }
        None => {
            let _ = writeln!(
                s,
                "plot {file} using '{}':'{}' with linespoints pointtype 7 pointsize 0.5",
                l.x, l.y
            );
        }
    }
    s.push_str("pause mouse close\n");
    Ok(s)
}

/// Writes [`plot_script`] for `table` to `destination`.
pub fn emit_plot_script(table: &ResultTable, csv_path: &Path, destination: &Path) -> Result<()> {
    let script = plot_script(table, &csv_path.to_string_lossy())?;
    fs::write(destination, script)?;
    Ok(())
}
