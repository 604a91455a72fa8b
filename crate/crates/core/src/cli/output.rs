use std::io::Write;

use crate::sbp::SbpOperator;
use crate::semidisc::{Mesh, SolutionField};
use crate::time::StepRecord;

use super::CliError;

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_solution_csv<W: Write>(
    out: W,
    state: &SolutionField,
    mesh: &Mesh,
    op: &SbpOperator,
    h_dry: f64,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["element", "node", "x", "b", "h", "hv", "v"])?;
    let x = mesh.node_coordinates(op);
    let n = op.len();
    for (i, &xi) in x.iter().enumerate() {
        let (h, hv) = (state.h[i], state.hv[i]);
        let v = if h > h_dry { hv / h } else { 0.0 };
        w.write_record([
            (i / n).to_string(),
            (i % n).to_string(),
            format_float(xi),
            format_float(state.b[i]),
            format_float(h),
            format_float(hv),
            format_float(v),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_diagnostics_csv<W: Write>(out: W, records: &[StepRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "step",
        "t",
        "dt",
        "mass",
        "momentum",
        "entropy",
        "entropy_rate",
        "min_h",
        "n_subcell_elements",
    ])?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            format_float(r.t),
            format_float(r.dt),
            format_float(r.mass),
            format_float(r.momentum),
            format_float(r.entropy),
            format_float(r.entropy_rate),
            format_float(r.min_h),
            r.n_subcell_elements.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
