//! WebAssembly bindings for the browser demo (`www/index.html`).
//!
//! Three interactive operations, all JSON-in/JSON-out so the page stays a
//! single static file with no framework:
//!
//! - [`Engine::solve`]: GVM operating point for a crystal/plane/condition,
//! - [`Engine::jsa`]: JSA heatmap grid with Schmidt purity,
//! - [`Engine::hom`]: HOM dip curve for the same scenario.
//!
//! Build with `wasm-pack build crates/wasm --target web` (see README).

use serde::Serialize;
use wasm_bindgen::prelude::*;

use biborate::crystal::{load_default, AxisClass, CrystalSet};
use biborate::interference::{hom_independent, hom_same_source};
use biborate::jsa::{compute_jsa_grid, optimize_bandwidth, schmidt_purity};
use biborate::phasematch::{solve_gvm_degenerate, GvmCondition, GvmSolution, SolveOptions};
use biborate::refraction::Plane;

#[derive(Serialize)]
struct SolveView {
    crystal: String,
    plane: String,
    condition: String,
    satisfied: bool,
    lambda_p_nm: Option<f64>,
    lambda_s_nm: Option<f64>,
    lambda_i_nm: Option<f64>,
    angle_deg: Option<f64>,
    angle_kind: String,
    pump_pol: Option<String>,
    signal_pol: Option<String>,
    idler_pol: Option<String>,
    d_eff_pmv: Option<f64>,
}

#[derive(Serialize)]
struct JsaView {
    signal_axis_nm: Vec<f64>,
    idler_axis_nm: Vec<f64>,
    /// |f| normalized to max 1, row-major over (signal, idler).
    magnitude: Vec<f64>,
    purity: f64,
    schmidt_number: f64,
    delta_lambda_nm: f64,
    length_mm: f64,
    lambda_p_nm: f64,
    angle_deg: f64,
}

#[derive(Serialize)]
struct HomView {
    tau_fs: Vec<f64>,
    probability: Vec<f64>,
    visibility: f64,
    fwhm_fs: f64,
    baseline: f64,
}

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(err)
}

/// The design engine with the embedded crystal set.
#[wasm_bindgen]
pub struct Engine {
    set: CrystalSet,
}

#[wasm_bindgen]
impl Engine {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Engine, JsValue> {
        Ok(Engine { set: load_default().map_err(err)? })
    }

    /// JSON list of crystal names with their applicable planes.
    pub fn crystals(&self) -> Result<String, JsValue> {
        #[derive(Serialize)]
        struct Entry {
            name: String,
            planes: Vec<&'static str>,
        }
        let list: Vec<Entry> = self
            .set
            .iter()
            .map(|c| Entry {
                name: c.name.clone(),
                planes: match c.axis_class {
                    AxisClass::Uniaxial => vec!["uniaxial"],
                    AxisClass::Biaxial => vec!["xz", "yz", "xy"],
                },
            })
            .collect();
        json(&list)
    }

    fn solve_point(
        &self,
        crystal: &str,
        plane: &str,
        condition: &str,
        length_mm: f64,
    ) -> Result<Option<GvmSolution>, JsValue> {
        let crystal = self.set.get(crystal).map_err(err)?;
        let plane = Plane::parse(plane).map_err(err)?;
        let condition = GvmCondition::parse(condition).map_err(err)?;
        let options = SolveOptions { length_mm, ..SolveOptions::default() };
        let outcome = solve_gvm_degenerate(crystal, plane, condition, &options).map_err(err)?;
        Ok(outcome.best().cloned())
    }

    /// Solve one degenerate GVM operating point.
    pub fn solve(&self, crystal: &str, plane: &str, condition: &str) -> Result<String, JsValue> {
        let solution = self.solve_point(crystal, plane, condition, 10.0)?;
        let plane_parsed = Plane::parse(plane).map_err(err)?;
        let view = match solution {
            Some(s) => SolveView {
                crystal: s.config.crystal.name.clone(),
                plane: plane.to_string(),
                condition: condition.to_string(),
                satisfied: true,
                lambda_p_nm: Some(s.config.lambda_p_nm),
                lambda_s_nm: Some(s.config.lambda_s_nm),
                lambda_i_nm: Some(s.config.lambda_i_nm),
                angle_deg: Some(s.angle_deg()),
                angle_kind: if plane_parsed.tunes_phi() { "phi" } else { "theta" }.to_string(),
                pump_pol: Some(s.config.polarization.pump.short().to_string()),
                signal_pol: Some(s.config.polarization.signal.short().to_string()),
                idler_pol: Some(s.config.polarization.idler.short().to_string()),
                d_eff_pmv: s.d_eff_pmv,
            },
            None => SolveView {
                crystal: crystal.to_string(),
                plane: plane.to_string(),
                condition: condition.to_string(),
                satisfied: false,
                lambda_p_nm: None,
                lambda_s_nm: None,
                lambda_i_nm: None,
                angle_deg: None,
                angle_kind: if plane_parsed.tunes_phi() { "phi" } else { "theta" }.to_string(),
                pump_pol: None,
                signal_pol: None,
                idler_pol: None,
                d_eff_pmv: None,
            },
        };
        json(&view)
    }

    /// JSA heatmap for a solved operating point. `delta_lambda_nm = 0` runs
    /// the bandwidth optimizer.
    pub fn jsa(
        &self,
        crystal: &str,
        plane: &str,
        condition: &str,
        delta_lambda_nm: f64,
        length_mm: f64,
        grid: usize,
    ) -> Result<String, JsValue> {
        let solution = self
            .solve_point(crystal, plane, condition, length_mm)?
            .ok_or_else(|| err("GVM condition not satisfied for this crystal/plane"))?;
        let mut config = solution.config.clone();
        let delta = if delta_lambda_nm > 0.0 {
            delta_lambda_nm
        } else {
            optimize_bandwidth(&config, grid.max(64), None).map_err(err)?.delta_lambda_nm
        };
        config.pump_bandwidth_nm = delta;
        let jsa = compute_jsa_grid(&config, grid.max(64), None).map_err(err)?;
        let schmidt = schmidt_purity(&jsa).map_err(err)?;
        let peak = jsa
            .amplitude
            .iter()
            .map(|a| a.norm())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let view = JsaView {
            signal_axis_nm: jsa.signal_axis_nm.clone(),
            idler_axis_nm: jsa.idler_axis_nm.clone(),
            magnitude: jsa.amplitude.iter().map(|a| a.norm() / peak).collect(),
            purity: schmidt.purity,
            schmidt_number: schmidt.schmidt_number,
            delta_lambda_nm: delta,
            length_mm: config.length_mm,
            lambda_p_nm: config.lambda_p_nm,
            angle_deg: config.geometry.tuning_angle_deg(),
        };
        json(&view)
    }

    /// HOM dip for a solved operating point: `mode` is "same-source"
    /// (signal/idler of one pair) or "independent" (two identical heralded
    /// sources).
    #[allow(clippy::too_many_arguments)]
    pub fn hom(
        &self,
        crystal: &str,
        plane: &str,
        condition: &str,
        mode: &str,
        delta_lambda_nm: f64,
        length_mm: f64,
        grid: usize,
        samples: usize,
    ) -> Result<String, JsValue> {
        let solution = self
            .solve_point(crystal, plane, condition, length_mm)?
            .ok_or_else(|| err("GVM condition not satisfied for this crystal/plane"))?;
        let mut config = solution.config.clone();
        let delta = if delta_lambda_nm > 0.0 {
            delta_lambda_nm
        } else {
            optimize_bandwidth(&config, grid.max(64), None).map_err(err)?.delta_lambda_nm
        };
        config.pump_bandwidth_nm = delta;
        let jsa = compute_jsa_grid(&config, grid.max(64), None).map_err(err)?;
        let curve = match mode {
            "same-source" => hom_same_source(&jsa, None, samples.max(41)),
            "independent" => hom_independent(&jsa, &jsa, None, samples.max(41)),
            other => return Err(err(format!("unknown mode '{other}'"))),
        }
        .map_err(err)?;
        json(&HomView {
            tau_fs: curve.tau_fs,
            probability: curve.probability,
            visibility: curve.visibility,
            fwhm_fs: curve.fwhm_fs,
            baseline: curve.baseline,
        })
    }
}
