//! JSON scenario files.
//!
//! ```json
//! {"kind": "ThermalScan", "n": 20, "alpha": [20.0], "temperature_range": [0.0, 50.0, 51]}
//! ```
//!
//! Missing fields take the defaults of [`ScenarioConfig::new`]. Every
//! error message starts with the path of the offending field.

use std::fs;
use std::path::Path;

use harmonic_chain::experiments::{linspace, IntRange, ScenarioConfig, ScenarioKind};
use harmonic_chain::{Error, Topology};
use serde_json::Value;

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Invalid(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Io(m) | LoadError::Invalid(m) => f.write_str(m),
        }
    }
}

type Result<T> = std::result::Result<T, LoadError>;

fn invalid<T>(path: &str, msg: impl std::fmt::Display) -> Result<T> {
    Err(LoadError::Invalid(format!("{path}: {msg}")))
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

const COMMON: &[&str] = &["kind", "alpha", "couplings", "topology", "temperature"];

fn allowed(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid | ScenarioKind::ConvergenceRatio => {
            &["n", "n_range", "n1_range", "n2_range", "n2"]
        }
        ScenarioKind::EnergyVsNegativity
        | ScenarioKind::ClassicalCorrelations
        | ScenarioKind::QSpectrumScan => &["n"],
        ScenarioKind::EvenOddScaling => &["n", "n_range"],
        ScenarioKind::SeparationScan => &["n", "group_sizes", "separations"],
        ScenarioKind::ThermalScan => &["n", "n_range", "temperature_range", "temperatures"],
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| LoadError::Invalid(format!("$: malformed JSON: {e}")))?;
    let obj = match doc.as_object() {
        Some(o) => o,
        None => return invalid("$", "scenario must be a JSON object"),
    };
    let kind = match obj.get("kind") {
        None => return invalid("kind", "missing required field"),
        Some(Value::String(s)) => match s.parse::<ScenarioKind>() {
            Ok(k) => k,
            Err(_) => {
                let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                return invalid("kind", format!("unknown kind {s:?}; expected one of {}", names.join(", ")));
            }
        },
        Some(_) => return invalid("kind", "must be a string"),
    };
    for key in obj.keys() {
        let k = key.as_str();
        if !COMMON.contains(&k) && !allowed(kind).contains(&k) {
            return invalid(k, format!("field not recognised for {kind}"));
        }
    }
    if kind == ScenarioKind::ThermalScan && obj.contains_key("temperature") {
        return invalid("temperature", "ThermalScan scans temperature; use temperature_range or temperatures");
    }

    let mut cfg = ScenarioConfig::new(kind);
    let fixed_length = matches!(
        kind,
        ScenarioKind::EnergyVsNegativity
            | ScenarioKind::ClassicalCorrelations
            | ScenarioKind::QSpectrumScan
            | ScenarioKind::SeparationScan
    );
    let bisection = matches!(
        kind,
        ScenarioKind::BisectionGrid | ScenarioKind::TerminatedGrid | ScenarioKind::ConvergenceRatio
    );

    if let Some(v) = obj.get("n") {
        let n = positive(v, "n")?;
        if fixed_length {
            cfg.chain.n = Some(n);
        } else {
            cfg.ranges.n = Some(IntRange::single(n));
        }
    }
    if let Some(v) = obj.get("n_range") {
        if obj.contains_key("n") {
            return invalid("n_range", "give either n or n_range, not both");
        }
        cfg.ranges.n = Some(int_range(v, "n_range")?);
    }
    if bisection {
        if let Some(total) = cfg.ranges.n {
            // default group ranges cover every split of the requested lengths
            let widest = IntRange::new(1, total.end.saturating_sub(1).max(1));
            cfg.ranges.n1 = Some(widest);
            cfg.ranges.n2 = Some(widest);
        }
        if let Some(v) = obj.get("n1_range") {
            cfg.ranges.n1 = Some(int_range(v, "n1_range")?);
        }
        if let Some(v) = obj.get("n2") {
            if obj.contains_key("n2_range") {
                return invalid("n2", "give either n2 or n2_range, not both");
            }
            cfg.ranges.n2 = Some(IntRange::single(positive(v, "n2")?));
        }
        if let Some(v) = obj.get("n2_range") {
            cfg.ranges.n2 = Some(int_range(v, "n2_range")?);
        }
    }

    match (obj.get("alpha"), obj.get("couplings")) {
        (Some(_), Some(_)) => return invalid("couplings", "give either alpha or couplings, not both"),
        (Some(v), None) => {
            cfg.chain.coupling_sets = number_list(v, "alpha")?.into_iter().map(|a| vec![a]).collect();
        }
        (None, Some(v)) => {
            let outer = array(v, "couplings")?;
            cfg.chain.coupling_sets = outer
                .iter()
                .enumerate()
                .map(|(i, set)| number_list(set, &format!("couplings[{i}]")))
                .collect::<Result<_>>()?;
            if let Some(i) = cfg.chain.coupling_sets.iter().position(Vec::is_empty) {
                return invalid(&format!("couplings[{i}]"), "coupling vector is empty");
            }
        }
        (None, None) => {}
    }
    if cfg.chain.coupling_sets.is_empty() {
        let field = if obj.contains_key("couplings") { "couplings" } else { "alpha" };
        return invalid(field, "list is empty");
    }

    if let Some(v) = obj.get("topology") {
        let t = match v.as_str() {
            Some(s) => s
                .parse::<Topology>()
                .or_else(|_| invalid("topology", format!("expected \"ring\" or \"terminated\", got {s:?}")))?,
            None => return invalid("topology", "must be a string"),
        };
        if kind == ScenarioKind::TerminatedGrid && t != Topology::Terminated {
            return invalid("topology", "TerminatedGrid always uses the terminated topology");
        }
        if kind == ScenarioKind::ClassicalCorrelations && t != Topology::Ring {
            return invalid("topology", "ClassicalCorrelations needs a ring");
        }
        cfg.chain.topology = t;
    }
    if let Some(v) = obj.get("temperature") {
        cfg.chain.temperature = nonnegative(v, "temperature")?;
    }

    match (obj.get("temperature_range"), obj.get("temperatures")) {
        (Some(_), Some(_)) => {
            return invalid("temperatures", "give either temperature_range or temperatures, not both")
        }
        (Some(v), None) => {
            let items = array(v, "temperature_range")?;
            if items.len() != 3 {
                return invalid("temperature_range", "expected [lo, hi, count]");
            }
            let lo = nonnegative(&items[0], "temperature_range[0]")?;
            let hi = nonnegative(&items[1], "temperature_range[1]")?;
            if hi < lo {
                return invalid("temperature_range", format!("upper bound {hi} is below lower bound {lo}"));
            }
            let count = positive(&items[2], "temperature_range[2]")?;
            cfg.ranges.temperatures = Some(linspace(lo, hi, count));
        }
        (None, Some(v)) => {
            let temps = number_list(v, "temperatures")?;
            for (i, &t) in temps.iter().enumerate() {
                if t < 0.0 {
                    return invalid(&format!("temperatures[{i}]"), format!("{t} is negative"));
                }
            }
            cfg.ranges.temperatures = Some(temps);
        }
        (None, None) => {}
    }
    if let Some(v) = obj.get("group_sizes") {
        cfg.ranges.group_sizes = Some(int_list(v, "group_sizes")?);
    }
    if let Some(v) = obj.get("separations") {
        cfg.ranges.separations = Some(int_list(v, "separations")?);
    }

    cfg.validate().map_err(|e| match e {
        Error::Scenario(m) => LoadError::Invalid(m),
        other => LoadError::Invalid(other.to_string()),
    })?;
    Ok(cfg)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .map_or_else(|| invalid(path, "must be an array"), Ok)
}

fn number(v: &Value, path: &str) -> Result<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => invalid(path, format!("expected a finite number, got {v}")),
    }
}

fn nonnegative(v: &Value, path: &str) -> Result<f64> {
    let x = number(v, path)?;
    if x < 0.0 {
        return invalid(path, format!("{x} is negative"));
    }
    Ok(x)
}

fn integer(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .map_or_else(|| invalid(path, format!("expected a nonnegative integer, got {v}")), Ok)
}

fn positive(v: &Value, path: &str) -> Result<usize> {
    match integer(v, path)? {
        0 => invalid(path, "must be positive"),
        n => Ok(n),
    }
}

fn number_list(v: &Value, path: &str) -> Result<Vec<f64>> {
    if v.is_number() {
        return Ok(vec![number(v, path)?]);
    }
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

fn int_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
        .collect()
}

fn int_range(v: &Value, path: &str) -> Result<IntRange> {
    let items = array(v, path)?;
    if !(2..=3).contains(&items.len()) {
        return invalid(path, "expected [lo, hi] or [lo, hi, step]");
    }
    let lo = integer(&items[0], &format!("{path}[0]"))?;
    let hi = integer(&items[1], &format!("{path}[1]"))?;
    let step = match items.get(2) {
        Some(s) => positive(s, &format!("{path}[2]"))?,
        None => 1,
    };
    if hi < lo {
        return invalid(path, format!("upper bound {hi} is below lower bound {lo}"));
    }
    Ok(IntRange::with_step(lo, hi, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        parse_scenario(text).unwrap_err().to_string()
    }

    #[test]
    fn bisection_over_total_length() {
        let cfg = parse_scenario(r#"{"kind":"BisectionGrid","n_range":[2,60],"alpha":[20.0],"topology":"ring"}"#)
            .unwrap();
        assert_eq!(cfg.ranges.n, Some(IntRange::new(2, 60)));
        // every (n1, n2) with n1 + n2 <= 60
        assert_eq!(cfg.grid_size(), 59 * 60 / 2);
    }

    #[test]
    fn thermal_scan_points() {
        let cfg = parse_scenario(r#"{"kind":"ThermalScan","n":20,"alpha":[20.0],"temperature_range":[0.0,50.0,51]}"#)
            .unwrap();
        assert_eq!(cfg.grid_size(), 51);
        assert_eq!(cfg.ranges.temperatures.as_ref().unwrap()[50], 50.0);
    }

    #[test]
    fn missing_kind() {
        assert!(err(r#"{"alpha":[1.0]}"#).starts_with("kind:"));
    }

    #[test]
    fn errors_name_the_field() {
        assert!(err(r#"{"kind":"Histogram"}"#).starts_with("kind:"));
        assert!(err(r#"{"kind":"BisectionGrid","alpha":[1.0,"x"]}"#).starts_with("alpha[1]:"));
        assert!(err(r#"{"kind":"BisectionGrid","n_range":[10,2]}"#).starts_with("n_range:"));
        assert!(err(r#"{"kind":"BisectionGrid","colour":"red"}"#).starts_with("colour:"));
        assert!(err(r#"{"kind":"ThermalScan","temperature_range":[0,1]}"#).starts_with("temperature_range:"));
        assert!(err(r#"{"kind":"SeparationScan","n":4,"group_sizes":[3]}"#).starts_with("separations:"));
        assert!(err(r#"{"kind":"EnergyVsNegativity","n":9}"#).starts_with("n:"));
        assert!(err(r#"{"kind":"QSpectrumScan","temperature":1.0}"#).starts_with("temperature:"));
        assert!(err(r#"{"kind":"EvenOddScaling","couplings":[[1.0],[]]}"#).starts_with("couplings[1]:"));
        assert!(err("[1,2").starts_with("$:"));
    }

    #[test]
    fn general_couplings() {
        let cfg = parse_scenario(r#"{"kind":"EvenOddScaling","couplings":[[1.0,0.5],[2.0]],"n_range":[8,16,4]}"#)
            .unwrap();
        assert_eq!(cfg.chain.coupling_sets, vec![vec![1.0, 0.5], vec![2.0]]);
        assert_eq!(cfg.grid_size(), 6);
    }
}
