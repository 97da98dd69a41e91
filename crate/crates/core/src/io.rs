//! Plot-ready text formats: the JSA CSV (header block, axis vectors,
//! row-major amplitude table) and the HOM curve CSV.
//!
//! Numbers are written as locale-independent decimal text with 9
//! significant digits, so re-running a command reproduces files
//! byte-for-byte.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interference::HomCurve;
use crate::jsa::JsaGrid;

/// 9 significant digits, scientific notation.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Serialize a grid: `# key: value` header lines, the two axis vectors, then
/// the amplitude rows (one row per signal node, idler varying across).
/// `extra` entries are appended to the header in the given order.
pub fn jsa_to_csv(grid: &JsaGrid, extra: &[(String, String)]) -> Result<String> {
    if !grid.is_real() {
        return Err(Error::Grid(
            "CSV export stores the flat-phase (real) amplitude; grid has complex entries".into(),
        ));
    }
    let mut out = String::new();
    if let Some(config) = &grid.config {
        out.push_str(&format!("# crystal: {}\n", config.crystal.name));
        out.push_str(&format!("# plane: {}\n", config.geometry.plane.name()));
        out.push_str(&format!("# lambda_p_nm: {}\n", fmt9(config.lambda_p_nm)));
        out.push_str(&format!("# lambda_s_nm: {}\n", fmt9(config.lambda_s_nm)));
        out.push_str(&format!("# lambda_i_nm: {}\n", fmt9(config.lambda_i_nm)));
        out.push_str(&format!("# delta_lambda_nm: {}\n", fmt9(config.pump_bandwidth_nm)));
        out.push_str(&format!("# length_mm: {}\n", fmt9(config.length_mm)));
        let angle_name = if config.geometry.plane.tunes_phi() { "phi_deg" } else { "theta_deg" };
        out.push_str(&format!(
            "# {angle_name}: {}\n",
            fmt9(config.geometry.tuning_angle_deg())
        ));
        out.push_str(&format!(
            "# polarization: pump={} signal={} idler={}\n",
            config.polarization.pump.short(),
            config.polarization.signal.short(),
            config.polarization.idler.short()
        ));
    }
    out.push_str(&format!(
        "# grid: {}x{}\n",
        grid.signal_axis_nm.len(),
        grid.idler_axis_nm.len()
    ));
    for (key, value) in extra {
        out.push_str(&format!("# {key}: {value}\n"));
    }
    let join = |axis: &[f64]| axis.iter().map(|x| fmt9(*x)).collect::<Vec<_>>().join(",");
    out.push_str(&format!("signal_axis_nm,{}\n", join(&grid.signal_axis_nm)));
    out.push_str(&format!("idler_axis_nm,{}\n", join(&grid.idler_axis_nm)));
    for s in 0..grid.signal_axis_nm.len() {
        let row: Vec<String> =
            (0..grid.idler_axis_nm.len()).map(|i| fmt9(grid.amplitude[[s, i]].re)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Parse a JSA CSV back into a normalized grid plus its header entries.
/// The engine configuration is not reconstructed; interference only needs
/// axes and amplitude.
pub fn jsa_from_csv(text: &str) -> Result<(JsaGrid, BTreeMap<String, String>)> {
    let mut header = BTreeMap::new();
    let mut signal_axis: Option<Vec<f64>> = None;
    let mut idler_axis: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let parse_axis = |line: &str| -> Result<Vec<f64>> {
        line.split(',')
            .skip(1)
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Grid(format!("bad axis value '{tok}': {e}")))
            })
            .collect()
    };
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((key, value)) = rest.split_once(':') {
                header.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        if line.starts_with("signal_axis_nm") {
            signal_axis = Some(parse_axis(line)?);
        } else if line.starts_with("idler_axis_nm") {
            idler_axis = Some(parse_axis(line)?);
        } else {
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Grid(format!("bad amplitude '{tok}': {e}")))
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
    }
    let signal_axis = signal_axis.ok_or_else(|| Error::Grid("missing signal axis".into()))?;
    let idler_axis = idler_axis.ok_or_else(|| Error::Grid("missing idler axis".into()))?;
    if rows.len() != signal_axis.len() || rows.iter().any(|r| r.len() != idler_axis.len()) {
        return Err(Error::Grid(format!(
            "amplitude table {}x{} does not match axes {}x{}",
            rows.len(),
            rows.first().map_or(0, Vec::len),
            signal_axis.len(),
            idler_axis.len()
        )));
    }
    let mut amplitude = Array2::<Complex64>::zeros((signal_axis.len(), idler_axis.len()));
    for (s, row) in rows.iter().enumerate() {
        for (i, value) in row.iter().enumerate() {
            amplitude[[s, i]] = Complex64::new(*value, 0.0);
        }
    }
    let grid = JsaGrid::from_amplitude(signal_axis, idler_axis, amplitude)?;
    Ok((grid, header))
}

/// HOM curve CSV: metric header, then `tau_fs,probability` rows.
pub fn hom_to_csv(curve: &HomCurve, extra: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# baseline: {}\n", fmt9(curve.baseline)));
    out.push_str(&format!("# visibility: {}\n", fmt9(curve.visibility)));
    out.push_str(&format!("# fwhm_fs: {}\n", fmt9(curve.fwhm_fs)));
    for (key, value) in extra {
        out.push_str(&format!("# {key}: {value}\n"));
    }
    out.push_str("tau_fs,probability\n");
    for (tau, p) in curve.tau_fs.iter().zip(&curve.probability) {
        out.push_str(&format!("{},{}\n", fmt9(*tau), fmt9(*p)));
    }
    out
}
