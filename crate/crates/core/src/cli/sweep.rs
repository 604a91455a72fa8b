use std::fs;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::output::format_float;
use super::run::simulate;
use super::CliError;

/// Inclusive, evenly spaced range `lo:step:hi`; a single number is a
/// one-point range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl ParamRange {
    /// `-3:0.1:3`, 61 points.
    pub fn full_grid() -> Self {
        Self {
            lo: -3.0,
            hi: 3.0,
            count: 61,
        }
    }

    pub fn single(x: f64) -> Self {
        Self { lo: x, hi: x, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| (self.lo * (n - k as f64) + self.hi * k as f64) / n)
            .collect()
    }
}

impl FromStr for ParamRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("invalid range '{s}', expected lo:step:hi"));
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if parts.iter().any(|x| !x.is_finite()) {
            return Err(bad());
        }
        match parts[..] {
            [x] => Ok(Self::single(x)),
            [lo, step, hi] => {
                if !(step > 0.0) || hi < lo {
                    return Err(bad());
                }
                let n = (hi - lo) / step;
                let count = n.round();
                if (n - count).abs() > 1e-9 * (1.0 + n) {
                    return Err(CliError::Config(format!(
                        "range '{s}': step does not divide the interval"
                    )));
                }
                Ok(Self {
                    lo,
                    hi,
                    count: count as usize + 1,
                })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a1: f64,
    pub a2: f64,
    /// NaN when the scenario has no exact solution or the run failed.
    pub max_error: f64,
    pub entropy_drift: f64,
    pub min_h: f64,
    pub status: String,
}

fn sweep_point(base: &RunConfig, a1: f64, a2: f64) -> SweepRow {
    let cfg = RunConfig {
        a1: Some(a1),
        a2: Some(a2),
        ..base.clone()
    };
    let result = cfg.resolve().and_then(|r| simulate(&r));
    match result {
        Ok(sim) => SweepRow {
            a1,
            a2,
            max_error: sim.max_error().unwrap_or(f64::NAN),
            entropy_drift: sim.entropy_drift(),
            min_h: sim.min_h(),
            status: "ok".into(),
        },
        Err(e) => SweepRow {
            a1,
            a2,
            max_error: f64::NAN,
            entropy_drift: f64::NAN,
            min_h: f64::NAN,
            status: format!("failed: {e}"),
        },
    }
}

/// Runs every `(a1, a2)` pair, rows ordered by `a1` then `a2`, and writes
/// `sweep.csv` into the output root. Failed runs become rows with a status.
pub fn sweep(config: &RunConfig, a1: &ParamRange, a2: &ParamRange) -> Result<Vec<SweepRow>, CliError> {
    config.resolve()?;
    let grid: Vec<(f64, f64)> = a1
        .values()
        .into_iter()
        .flat_map(|x| a2.values().into_iter().map(move |y| (x, y)))
        .collect();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(x, y)| sweep_point(config, x, y))
        .collect();

    let dir = config.output_root();
    fs::create_dir_all(&dir)?;
    let mut w = csv::Writer::from_path(dir.join("sweep.csv"))?;
    w.write_record(["a1", "a2", "max_error", "entropy_drift", "min_h", "status"])?;
    for r in &rows {
        w.write_record([
            format_float(r.a1),
            format_float(r.a2),
            format_float(r.max_error),
            format_float(r.entropy_drift),
            format_float(r.min_h),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ranges() {
        let r: ParamRange = "-3:0.1:3".parse().unwrap();
        assert_eq!(r, ParamRange::full_grid());
        let v = r.values();
        assert_eq!(v.len(), 61);
        assert_eq!(v[0], -3.0);
        assert_eq!(v[30], 0.0);
        assert_eq!(v[60], 3.0);
        assert!((v[1] + 2.9).abs() < 1e-15);
        assert_eq!("0.5".parse::<ParamRange>().unwrap().values(), vec![0.5]);
        assert_eq!("1:1:1".parse::<ParamRange>().unwrap().values(), vec![1.0]);
        for bad in ["", "a:b:c", "1:0:2", "2:1:1", "0:0.3:1", "1:2", "0:nan:1"] {
            assert!(bad.parse::<ParamRange>().is_err(), "{bad}");
        }
    }
}
