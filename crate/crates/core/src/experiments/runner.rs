use rayon::prelude::*;

use super::{status, ResultTable, ScenarioConfig, ScenarioKind};
use crate::chain::{build_potential, chain_covariance, classical_correlations, ground_energy, ChainSpec, Topology};
use crate::negativity::{
    bipartite_log_negativity, even_odd_rate, nn_closed_form, q_spectrum, GroupSelection,
};
use crate::{Error, Result};

/// Half-length of the ring used as the plateau reference for couplings
/// without a closed form.
pub const PLATEAU_HALF_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy)]
enum Point {
    Bisection { set: usize, n1: usize, n2: usize },
    Fixed { set: usize },
    Length { set: usize, n: usize },
    Separation { set: usize, size: usize, separation: usize },
    Thermal { set: usize, n: usize, temperature: f64 },
}

fn points(cfg: &ScenarioConfig) -> Vec<Point> {
    let r = &cfg.ranges;
    let sets = 0..cfg.chain.coupling_sets.len();
    let mut out = Vec::new();
    match cfg.kind {
        ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid | ScenarioKind::ConvergenceRatio => {
            let n1s = r.n1.map(|x| x.values()).unwrap_or_default();
            let n2s = r.n2.map(|x| x.values()).unwrap_or_default();
            let totals = r.n.map(|x| x.values());
            for set in sets {
                for &n1 in &n1s {
                    for &n2 in &n2s {
                        if totals.as_ref().map_or(true, |t| t.contains(&(n1 + n2))) {
                            out.push(Point::Bisection { set, n1, n2 });
                        }
                    }
                }
            }
        }
        ScenarioKind::EnergyVsNegativity | ScenarioKind::ClassicalCorrelations | ScenarioKind::QSpectrumScan => {
            out.extend(sets.map(|set| Point::Fixed { set }));
        }
        ScenarioKind::EvenOddScaling => {
            let ns = r.n.map(|x| x.values()).unwrap_or_default();
            for set in sets {
                out.extend(ns.iter().map(|&n| Point::Length { set, n }));
            }
        }
        ScenarioKind::SeparationScan => {
            let n = cfg.chain.n.unwrap_or(0);
            let sizes = r.group_sizes.clone().unwrap_or_default();
            let seps = r.separations.clone().unwrap_or_default();
            for set in sets {
                for &size in &sizes {
                    for &separation in &seps {
                        // the separation must be the smaller of the two gaps
                        if 2 * size + 2 * separation <= n {
                            out.push(Point::Separation { set, size, separation });
                        }
                    }
                }
            }
        }
        ScenarioKind::ThermalScan => {
            let ns = r.n.map(|x| x.values()).unwrap_or_default();
            let temps = r.temperatures.clone().unwrap_or_default();
            for set in sets {
                for &n in &ns {
                    for &temperature in &temps {
                        out.push(Point::Thermal { set, n, temperature });
                    }
                }
            }
        }
    }
    out
}

pub(super) fn grid_len(cfg: &ScenarioConfig) -> usize {
    points(cfg).len()
}

fn coupling_columns(cfg: &ScenarioConfig) -> Vec<String> {
    let width = coupling_width(cfg);
    if width == 1 {
        vec!["alpha".into()]
    } else {
        (1..=width).map(|k| format!("alpha{k}")).collect()
    }
}

fn coupling_width(cfg: &ScenarioConfig) -> usize {
    cfg.chain.coupling_sets.iter().map(Vec::len).max().unwrap_or(1).max(1)
}

fn result_columns(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid => &["n1", "n2", "N"],
        ScenarioKind::ConvergenceRatio => &["n1", "n2", "N", "N_inf", "ratio"],
        ScenarioKind::EnergyVsNegativity => &["energy_per_osc", "negativity", "ratio", "N"],
        ScenarioKind::EvenOddScaling => &["n", "N", "N_per_n", "rate"],
        ScenarioKind::SeparationScan => &["group_size", "separation", "N"],
        ScenarioKind::ClassicalCorrelations => &["j", "correlation"],
        ScenarioKind::ThermalScan => &["n", "temperature", "beta", "N"],
        ScenarioKind::QSpectrumScan => &["k", "q", "q_minus_1"],
    }
}

fn status_of(e: &Error) -> f64 {
    if e.is_numerical() {
        status::NUMERICAL
    } else {
        status::INVALID
    }
}

struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    width: usize,
}

impl Ctx<'_> {
    fn couplings(&self, set: usize) -> &[f64] {
        &self.cfg.chain.coupling_sets[set]
    }

    fn spec(&self, n: usize, set: usize, temperature: f64) -> Result<ChainSpec<f64>> {
        ChainSpec::new(n, self.couplings(set).to_vec(), self.cfg.chain.topology)?
            .with_temperature(temperature)
    }

    fn negativity(&self, n: usize, set: usize, temperature: f64, sel: &GroupSelection) -> Result<f64> {
        let cov = chain_covariance(&self.spec(n, set, temperature)?)?;
        Ok(bipartite_log_negativity(&cov, sel)?.log_negativity)
    }

    /// Coupling values padded with zeros to the table width.
    fn prefix(&self, set: usize) -> Vec<f64> {
        let mut v = self.couplings(set).to_vec();
        v.resize(self.width, 0.0);
        v
    }

    fn row(&self, set: usize, values: &[f64], code: f64) -> Vec<f64> {
        let mut row = self.prefix(set);
        row.extend_from_slice(values);
        row.push(code);
        row
    }

    /// Row with the grid coordinates kept and every result set to NaN.
    fn failed(&self, set: usize, coords: &[f64], e: &Error) -> Vec<f64> {
        let mut values = coords.to_vec();
        values.resize(result_columns(self.cfg.kind).len(), f64::NAN);
        self.row(set, &values, status_of(e))
    }

    fn plateau(&self, set: usize) -> Result<f64> {
        let alphas = self.couplings(set);
        let nearest = alphas.iter().skip(1).all(|&a| a == 0.0);
        if nearest && self.cfg.chain.temperature == 0.0 && self.cfg.chain.topology == Topology::Ring {
            let alpha = alphas.first().copied().unwrap_or(0.0);
            if 1.0 + 4.0 * alpha <= 0.0 {
                return Err(Error::UnstableChain {
                    min_eigenvalue: 1.0 + 4.0 * alpha,
                });
            }
            return Ok(nn_closed_form(alpha));
        }
        let m = PLATEAU_HALF_LENGTH;
        let sel = GroupSelection::symmetric_bisection(2 * m)?;
        let spec = ChainSpec::new(2 * m, alphas.to_vec(), Topology::Ring)?
            .with_temperature(self.cfg.chain.temperature)?;
        Ok(bipartite_log_negativity(&chain_covariance(&spec)?, &sel)?.log_negativity)
    }

    fn evaluate(&self, p: Point, plateaus: &[Result<f64>]) -> Vec<Vec<f64>> {
        let temperature = self.cfg.chain.temperature;
        match p {
            Point::Bisection { set, n1, n2 } => {
                let coords = [n1 as f64, n2 as f64];
                let n = GroupSelection::bisection(n1, n2)
                    .and_then(|sel| self.negativity(n1 + n2, set, temperature, &sel));
                let n = match n {
                    Ok(n) => n,
                    Err(e) => return vec![self.failed(set, &coords, &e)],
                };
                if self.cfg.kind != ScenarioKind::ConvergenceRatio {
                    return vec![self.row(set, &[coords[0], coords[1], n], status::OK)];
                }
                match &plateaus[set] {
                    Ok(inf) if *inf > 0.0 && inf.is_finite() => {
                        vec![self.row(set, &[coords[0], coords[1], n, *inf, n / inf], status::OK)]
                    }
                    Ok(inf) => vec![self.row(
                        set,
                        &[coords[0], coords[1], n, *inf, f64::NAN],
                        status::UNDEFINED,
                    )],
                    Err(e) => vec![self.row(
                        set,
                        &[coords[0], coords[1], n, f64::NAN, f64::NAN],
                        status_of(e),
                    )],
                }
            }
            Point::Fixed { set } => self.fixed(set),
            Point::Length { set, n } => {
                let coords = [n as f64];
                let res = GroupSelection::even_odd(n)
                    .and_then(|sel| self.negativity(n, set, temperature, &sel));
                match res {
                    Ok(neg) => {
                        let alphas = self.couplings(set);
                        let nearest = alphas.iter().skip(1).all(|&a| a == 0.0);
                        let rate = match alphas.first() {
                            Some(&a) if nearest && a > 0.0 => match even_odd_rate(a) {
                                Ok(c) => c,
                                Err(e) => {
                                    return vec![self.row(
                                        set,
                                        &[coords[0], neg, neg / n as f64, f64::NAN],
                                        status_of(&e),
                                    )]
                                }
                            },
                            _ => f64::NAN,
                        };
                        vec![self.row(set, &[coords[0], neg, neg / n as f64, rate], status::OK)]
                    }
                    Err(e) => vec![self.failed(set, &coords, &e)],
                }
            }
            Point::Separation { set, size, separation } => {
                let coords = [size as f64, separation as f64];
                let n = self.cfg.chain.n.unwrap_or(0);
                let res = GroupSelection::separated(size, separation, n)
                    .and_then(|sel| self.negativity(n, set, temperature, &sel));
                match res {
                    Ok(neg) => vec![self.row(set, &[coords[0], coords[1], neg], status::OK)],
                    Err(e) => vec![self.failed(set, &coords, &e)],
                }
            }
            Point::Thermal { set, n, temperature } => {
                let beta = if temperature == 0.0 {
                    f64::INFINITY
                } else {
                    temperature.recip()
                };
                let coords = [n as f64, temperature, beta];
                let res = GroupSelection::symmetric_bisection(n)
                    .and_then(|sel| self.negativity(n, set, temperature, &sel));
                match res {
                    Ok(neg) => vec![self.row(set, &[coords[0], coords[1], coords[2], neg], status::OK)],
                    Err(e) => vec![self.failed(set, &coords, &e)],
                }
            }
        }
    }

    fn fixed(&self, set: usize) -> Vec<Vec<f64>> {
        let n = self.cfg.chain.n.unwrap_or(0);
        let res: Result<Vec<Vec<f64>>> = (|| {
            let spec = self.spec(n, set, 0.0)?;
            let v = build_potential(&spec)?;
            Ok(match self.cfg.kind {
                ScenarioKind::EnergyVsNegativity => {
                    let energy = ground_energy(&v)? / n as f64;
                    let sel = GroupSelection::symmetric_bisection(n)?;
                    let neg = bipartite_log_negativity(&chain_covariance(&spec)?, &sel)?.log_negativity;
                    let negativity = neg.exp2();
                    vec![self.row(set, &[energy, negativity, energy / negativity, neg], status::OK)]
                }
                ScenarioKind::ClassicalCorrelations => classical_correlations(&v)?
                    .into_iter()
                    .enumerate()
                    .map(|(j, c)| self.row(set, &[(j + 1) as f64, c], status::OK))
                    .collect(),
                ScenarioKind::QSpectrumScan => q_spectrum(&v, true)?
                    .into_iter()
                    .enumerate()
                    .map(|(k, q)| self.row(set, &[(k + 1) as f64, q, q - 1.0], status::OK))
                    .collect(),
                _ => unreachable!("not a fixed-length kind"),
            })
        })();
        res.unwrap_or_else(|e| vec![self.failed(set, &[], &e)])
    }
}

/// Evaluates every grid point of `cfg`; rows come back in grid order.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let ctx = Ctx {
        cfg,
        width: coupling_width(cfg),
    };
    let plateaus: Vec<Result<f64>> = if cfg.kind == ScenarioKind::ConvergenceRatio {
        (0..cfg.chain.coupling_sets.len())
            .into_par_iter()
            .map(|set| ctx.plateau(set))
            .collect()
    } else {
        Vec::new()
    };
    let rows: Vec<Vec<Vec<f64>>> = points(cfg)
        .into_par_iter()
        .map(|p| ctx.evaluate(p, &plateaus))
        .collect();

    let mut columns = coupling_columns(cfg);
    columns.extend(result_columns(cfg.kind).iter().map(|c| c.to_string()));
    columns.push("status".into());
    let mut table = ResultTable::new(columns, cfg.describe());
    for row in rows.into_iter().flatten() {
        table.push_row(row)?;
    }
    Ok(table)
}
