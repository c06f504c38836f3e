//! Declarative parameter sweeps producing [`ResultTable`]s.
//!
//! A [`ScenarioConfig`] names a sweep kind, a chain template and the grids
//! to scan. [`run_scenario`] evaluates every grid point (in parallel) and
//! assembles the rows in grid order, so output is byte-identical between
//! runs. Grid points whose chain is invalid or unstable are kept as rows
//! with a nonzero `status` and `NaN` results.

mod plot;
mod runner;
mod table;

pub use plot::{emit_plot_script, plot_script};
pub use runner::run_scenario;
pub use table::{format_number, write_csv, write_csv_to, ResultTable};

use std::fmt;
use std::str::FromStr;

use crate::chain::Topology;
use crate::{Error, Result};

/// Row status codes written to the `status` column.
pub mod status {
    pub const OK: f64 = 0.0;
    /// Invalid chain, unstable couplings or an invalid selection.
    pub const INVALID: f64 = 1.0;
    /// The numerics failed (no convergence, quadrature failure).
    pub const NUMERICAL: f64 = 2.0;
    /// A reference value needed for the row is zero or undefined.
    pub const UNDEFINED: f64 = 3.0;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    BisectionGrid,
    ConvergenceRatio,
    EnergyVsNegativity,
    EvenOddScaling,
    SeparationScan,
    ClassicalCorrelations,
    ThermalScan,
    QSpectrumScan,
    TerminatedGrid,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::BisectionGrid,
        ScenarioKind::ConvergenceRatio,
        ScenarioKind::EnergyVsNegativity,
        ScenarioKind::EvenOddScaling,
        ScenarioKind::SeparationScan,
        ScenarioKind::ClassicalCorrelations,
        ScenarioKind::ThermalScan,
        ScenarioKind::QSpectrumScan,
        ScenarioKind::TerminatedGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BisectionGrid => "BisectionGrid",
            ScenarioKind::ConvergenceRatio => "ConvergenceRatio",
            ScenarioKind::EnergyVsNegativity => "EnergyVsNegativity",
            ScenarioKind::EvenOddScaling => "EvenOddScaling",
            ScenarioKind::SeparationScan => "SeparationScan",
            ScenarioKind::ClassicalCorrelations => "ClassicalCorrelations",
            ScenarioKind::ThermalScan => "ThermalScan",
            ScenarioKind::QSpectrumScan => "QSpectrumScan",
            ScenarioKind::TerminatedGrid => "TerminatedGrid",
        }
    }

    /// snake_case name used for output files.
    pub fn file_stem(self) -> &'static str {
        match self {
            ScenarioKind::BisectionGrid => "bisection_grid",
            ScenarioKind::ConvergenceRatio => "convergence_ratio",
            ScenarioKind::EnergyVsNegativity => "energy_vs_negativity",
            ScenarioKind::EvenOddScaling => "even_odd_scaling",
            ScenarioKind::SeparationScan => "separation_scan",
            ScenarioKind::ClassicalCorrelations => "classical_correlations",
            ScenarioKind::ThermalScan => "thermal_scan",
            ScenarioKind::QSpectrumScan => "q_spectrum_scan",
            ScenarioKind::TerminatedGrid => "terminated_grid",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.file_stem() == s)
            .ok_or_else(|| Error::Scenario(format!("unknown scenario kind {s:?}")))
    }
}

/// Inclusive integer range with a positive step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl IntRange {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end, step: 1 }
    }

    pub fn with_step(start: usize, end: usize, step: usize) -> Self {
        Self { start, end, step }
    }

    pub fn single(value: usize) -> Self {
        Self::new(value, value)
    }

    pub fn values(&self) -> Vec<usize> {
        if self.step == 0 || self.start > self.end {
            return Vec::new();
        }
        (self.start..=self.end).step_by(self.step).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.step == 1 {
            write!(f, "{}..={}", self.start, self.end)
        } else {
            write!(f, "{}..={} step {}", self.start, self.end, self.step)
        }
    }
}

/// Chain parameters shared by every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTemplate {
    /// Chain length for kinds with a fixed chain.
    pub n: Option<usize>,
    /// Coupling vectors to sweep; `[α]` is nearest neighbour.
    pub coupling_sets: Vec<Vec<f64>>,
    pub topology: Topology,
    /// Temperature for kinds that do not scan it; 0 is the ground state.
    pub temperature: f64,
}

/// Named grids. Which ones a kind reads is listed on [`ScenarioConfig::new`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioRanges {
    pub n: Option<IntRange>,
    pub n1: Option<IntRange>,
    pub n2: Option<IntRange>,
    pub temperatures: Option<Vec<f64>>,
    pub group_sizes: Option<Vec<usize>>,
    pub separations: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub chain: ChainTemplate,
    pub ranges: ScenarioRanges,
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn logspace(lo_exp: f64, hi_exp: f64, count: usize) -> Vec<f64> {
    linspace(lo_exp, hi_exp, count)
        .into_iter()
        .map(|e| 10f64.powf(e))
        .collect()
}

impl ScenarioConfig {
    /// Default sweep for `kind`. Grids read per kind:
    ///
    /// | kind | grids |
    /// |---|---|
    /// | BisectionGrid, TerminatedGrid | `n1`, `n2`, optional `n` (total length filter) |
    /// | ConvergenceRatio | `n1`, `n2` |
    /// | EnergyVsNegativity, ClassicalCorrelations, QSpectrumScan | `chain.n` |
    /// | EvenOddScaling | `n` |
    /// | SeparationScan | `chain.n`, `group_sizes`, `separations` |
    /// | ThermalScan | `n`, `temperatures` |
    ///
    /// All kinds sweep `chain.coupling_sets`.
    pub fn new(kind: ScenarioKind) -> Self {
        let nn = |alphas: &[f64]| alphas.iter().map(|&a| vec![a]).collect::<Vec<_>>();
        let mut chain = ChainTemplate {
            n: None,
            coupling_sets: nn(&[20.0]),
            topology: Topology::Ring,
            temperature: 0.0,
        };
        let mut ranges = ScenarioRanges::default();
        match kind {
            ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid => {
                ranges.n1 = Some(IntRange::new(1, 30));
                ranges.n2 = Some(IntRange::new(1, 30));
                if kind == ScenarioKind::TerminatedGrid {
                    chain.topology = Topology::Terminated;
                }
            }
            ScenarioKind::ConvergenceRatio => {
                chain.coupling_sets = nn(&[0.5, 1.0, 5.0, 20.0, 100.0]);
                ranges.n1 = Some(IntRange::new(1, 60));
                ranges.n2 = Some(IntRange::single(20));
            }
            ScenarioKind::EnergyVsNegativity => {
                chain.n = Some(20);
                let mut alphas = vec![0.0];
                alphas.extend(logspace(-2.0, 6.0, 33));
                chain.coupling_sets = nn(&alphas);
            }
            ScenarioKind::EvenOddScaling => {
                ranges.n = Some(IntRange::with_step(4, 100, 2));
            }
            ScenarioKind::SeparationScan => {
                chain.n = Some(40);
                ranges.group_sizes = Some((1..=8).collect());
                ranges.separations = Some((0..=16).collect());
            }
            ScenarioKind::ClassicalCorrelations => {
                chain.n = Some(40);
            }
            ScenarioKind::ThermalScan => {
                ranges.n = Some(IntRange::with_step(4, 40, 4));
                ranges.temperatures = Some(linspace(0.0, 10.0, 51));
            }
            ScenarioKind::QSpectrumScan => {
                chain.n = Some(20);
                chain.coupling_sets = nn(&logspace(-2.0, 2.0, 41));
            }
        }
        Self {
            kind,
            chain,
            ranges,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Scenario(msg));
        if self.chain.coupling_sets.is_empty() {
            return fail("alpha: coupling list is empty".into());
        }
        for (i, set) in self.chain.coupling_sets.iter().enumerate() {
            if let Some(x) = set.iter().find(|x| !x.is_finite()) {
                return fail(format!("alpha[{i}]: coupling {x} is not finite"));
            }
        }
        if !(self.chain.temperature.is_finite() && self.chain.temperature >= 0.0) {
            return fail(format!(
                "temperature: must be finite and nonnegative, got {}",
                self.chain.temperature
            ));
        }
        let need_n = |name: &str| -> Result<usize> {
            match self.chain.n {
                Some(0) => Err(Error::Scenario(format!("n: must be positive for {name}"))),
                Some(n) => Ok(n),
                None => Err(Error::Scenario(format!("n: required for {name}"))),
            }
        };
        let need_range = |field: &str, r: &Option<IntRange>| -> Result<()> {
            match r {
                None => Err(Error::Scenario(format!("{field}: required for {}", self.kind))),
                Some(r) if r.is_empty() => Err(Error::Scenario(format!("{field}: range {r} is empty"))),
                Some(_) => Ok(()),
            }
        };
        match self.kind {
            ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid | ScenarioKind::ConvergenceRatio => {
                need_range("n1_range", &self.ranges.n1)?;
                need_range("n2_range", &self.ranges.n2)?;
                if let Some(r) = &self.ranges.n {
                    if r.is_empty() {
                        return fail(format!("n_range: range {r} is empty"));
                    }
                }
                if self.ranges.n1.iter().chain(&self.ranges.n2).any(|r| r.start == 0) {
                    return fail("n1_range/n2_range: group sizes start at 1".into());
                }
                if self.grid_size() == 0 {
                    return fail("n_range: no (n1, n2) pair has a total length inside the range".into());
                }
            }
            ScenarioKind::EnergyVsNegativity
            | ScenarioKind::ClassicalCorrelations
            | ScenarioKind::QSpectrumScan => {
                let n = need_n(self.kind.name())?;
                if self.kind != ScenarioKind::ClassicalCorrelations && n % 2 != 0 {
                    return fail(format!("n: {} needs an even chain length, got {n}", self.kind));
                }
                if self.chain.temperature != 0.0 {
                    return fail(format!(
                        "temperature: {} is a ground-state quantity, got T = {}",
                        self.kind, self.chain.temperature
                    ));
                }
            }
            ScenarioKind::EvenOddScaling => need_range("n_range", &self.ranges.n)?,
            ScenarioKind::SeparationScan => {
                let n = need_n(self.kind.name())?;
                let sizes = self.ranges.group_sizes.as_deref().unwrap_or(&[]);
                let seps = self.ranges.separations.as_deref().unwrap_or(&[]);
                if sizes.is_empty() {
                    return fail("group_sizes: list is empty".into());
                }
                if seps.is_empty() {
                    return fail("separations: list is empty".into());
                }
                if sizes.contains(&0) {
                    return fail("group_sizes: sizes must be positive".into());
                }
                if self.grid_size() == 0 {
                    return fail(format!(
                        "separations: no group size / separation pair fits in a chain of {n}"
                    ));
                }
            }
            ScenarioKind::ThermalScan => {
                need_range("n_range", &self.ranges.n)?;
                match &self.ranges.temperatures {
                    None => return fail("temperature_range: required for ThermalScan".into()),
                    Some(t) if t.is_empty() => return fail("temperature_range: empty".into()),
                    Some(t) => {
                        if let Some(x) = t.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                            return fail(format!(
                                "temperature_range: temperature {x} must be finite and nonnegative"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of grid points (rows, except for kinds emitting one row per
    /// oscillator or eigenvalue).
    pub fn grid_size(&self) -> usize {
        runner::grid_len(self)
    }

    /// Human-readable `key = value` echo of every parameter.
    pub fn describe(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("kind".to_string(), self.kind.name().to_string()),
            ("topology".to_string(), self.chain.topology.as_str().to_string()),
            ("alpha".to_string(), format!("{:?}", self.chain.coupling_sets)),
            ("temperature".to_string(), format_number(self.chain.temperature)),
        ];
        if let Some(n) = self.chain.n {
            out.push(("n".into(), n.to_string()));
        }
        let r = &self.ranges;
        for (name, range) in [("n_range", &r.n), ("n1_range", &r.n1), ("n2_range", &r.n2)] {
            if let Some(range) = range {
                out.push((name.into(), range.to_string()));
            }
        }
        if let Some(t) = r.temperatures.as_ref().filter(|t| !t.is_empty()) {
            out.push(("temperatures".into(), format!("{} points in [{}, {}]", t.len(), format_number(t[0]), format_number(t[t.len() - 1]))));
        }
        if let Some(g) = &r.group_sizes {
            out.push(("group_sizes".into(), format!("{g:?}")));
        }
        if let Some(s) = &r.separations {
            out.push(("separations".into(), format!("{s:?}")));
        }
        out
    }
}
