//! Browser bindings for the trajectory-density engine.
//!
//! Three interactive operations are exposed, each returning a JSON payload
//! the demo page renders: branch-chain exploration from a chosen start,
//! the stopping-time distribution F(k), and the rising-fraction densities.
//! Exact values travel as decimal strings; `f64` fields are for plotting.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use collatz_spectra::families::{cumulative_sl, pp_distribution_table, rising_fraction};
use collatz_spectra::maps::MapId;
use collatz_spectra::numtheory::BigInt;
use collatz_spectra::render::{approx_f64, to_sig_decimal};
use collatz_spectra::stopping::{build_triangle, Flavor};
use collatz_spectra::trees::chain_from;
use collatz_spectra::Result;

pub fn parse_map(name: &str) -> Option<MapId> {
    Some(match name {
        "c3" => MapId::C3,
        "t3" => MapId::T3,
        "u3" => MapId::U3Full,
        "u3g" => MapId::U3Grouped,
        "fraku3" => MapId::FrakU3,
        "c5" => MapId::C5,
        "t5" => MapId::T5,
        "u5" => MapId::U5Full,
        "u5g" => MapId::U5Grouped,
        "fraku5" => MapId::FrakU5,
        _ => return None,
    })
}

#[derive(Serialize)]
pub struct ChainLevelDto {
    pub level: u32,
    pub start: String,
    pub end: String,
    pub length: u32,
    pub direction: Option<String>,
    pub vs_origin: Option<String>,
    pub values: Vec<String>,
}

#[derive(Serialize)]
pub struct ChainDto {
    pub map: String,
    pub origin: String,
    pub status: String,
    pub levels: Vec<ChainLevelDto>,
}

pub fn chain_payload(map: MapId, start: i64, levels: u32, budget: usize) -> Result<ChainDto> {
    let chain = chain_from(map, &BigInt::from(start), levels, budget)?;
    let status = match chain.status {
        collatz_spectra::trees::ChainStatus::Completed => "completed",
        collatz_spectra::trees::ChainStatus::BudgetExhausted => "budget-exhausted",
        collatz_spectra::trees::ChainStatus::CycleDetected => "cycle",
    };
    Ok(ChainDto {
        map: format!("{map:?}"),
        origin: chain.origin.to_string(),
        status: status.to_string(),
        levels: chain
            .levels
            .iter()
            .enumerate()
            .map(|(i, level)| ChainLevelDto {
                level: i as u32 + 1,
                start: level.branch.start.to_string(),
                end: level.branch.end().to_string(),
                length: level.branch.length(),
                direction: level.vs_level_start.map(|d| d.to_string()),
                vs_origin: level.vs_origin.map(|d| d.to_string()),
                values: level.branch.values().iter().map(|v| v.to_string()).collect(),
            })
            .collect(),
    })
}

#[derive(Serialize)]
pub struct StoppingRowDto {
    pub k: u32,
    pub f_strict: String,
    pub f_strict_value: f64,
    pub f_terras: String,
    pub f_terras_value: f64,
}

#[derive(Serialize)]
pub struct StoppingDto {
    pub map: String,
    pub rows: Vec<StoppingRowDto>,
}

pub fn stopping_payload(map: MapId, k_max: u32) -> Result<StoppingDto> {
    let strict = build_triangle(map, k_max, Flavor::Strict)?;
    let terras = build_triangle(map, k_max, Flavor::Terras)?;
    let rows = (0..=k_max)
        .map(|k| {
            let fs = strict.distribution_f(k);
            let ft = terras.distribution_f(k);
            StoppingRowDto {
                k,
                f_strict: to_sig_decimal(&fs, 7),
                f_strict_value: approx_f64(&fs),
                f_terras: to_sig_decimal(&ft, 7),
                f_terras_value: approx_f64(&ft),
            }
        })
        .collect();
    Ok(StoppingDto {
        map: format!("{map:?}"),
        rows,
    })
}

#[derive(Serialize)]
pub struct DensityDto {
    pub map: String,
    pub lmax: u32,
    /// Smaller than `lmax` when the request was clamped.
    pub achieved_lmax: u32,
    /// Rising fraction per level, exact decimal and plot value.
    pub fractions: Vec<String>,
    pub fraction_values: Vec<f64>,
    /// Cumulative rising density by length at the first level.
    pub rising_curve: Vec<CurvePointDto>,
    /// Cumulative coverage S_L by length.
    pub coverage_curve: Vec<CurvePointDto>,
}

#[derive(Serialize)]
pub struct CurvePointDto {
    pub l: u32,
    pub value: f64,
}

pub fn density_payload(map: MapId, lmax: u32, levels: u32) -> Result<DensityDto> {
    let report = rising_fraction(map, lmax, levels)?;
    let achieved = report.achieved_lmax;
    let rising_curve = pp_distribution_table(map, 2, achieved)?
        .into_iter()
        .map(|row| CurvePointDto {
            l: row.l,
            value: approx_f64(&row.cumulative),
        })
        .collect();
    let coverage_curve = (2..=achieved)
        .map(|l| {
            Ok(CurvePointDto {
                l,
                value: approx_f64(&cumulative_sl(map, l)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityDto {
        map: format!("{map:?}"),
        lmax,
        achieved_lmax: achieved,
        fractions: report.rendered(7),
        fraction_values: report
            .fractions
            .iter()
            .map(approx_f64)
            .collect(),
        rising_curve,
        coverage_curve,
    })
}

fn to_js<T: Serialize>(payload: T) -> std::result::Result<String, JsValue> {
    serde_json::to_string(&payload).map_err(|e| JsValue::from_str(&e.to_string()))
}

fn map_or_err(name: &str) -> std::result::Result<MapId, JsValue> {
    parse_map(name).ok_or_else(|| JsValue::from_str(&format!("unknown map `{name}`")))
}

/// Branch chain from a starting integer, as JSON.
#[wasm_bindgen]
pub fn chain_json(map: &str, start: i64, levels: u32, budget: usize) -> std::result::Result<String, JsValue> {
    let payload = chain_payload(map_or_err(map)?, start, levels, budget)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    to_js(payload)
}

/// Stopping-time distribution F(k) for k = 0..=k_max, as JSON.
#[wasm_bindgen]
pub fn stopping_json(map: &str, k_max: u32) -> std::result::Result<String, JsValue> {
    let payload = stopping_payload(map_or_err(map)?, k_max)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    to_js(payload)
}

/// Rising-fraction densities, as JSON.
#[wasm_bindgen]
pub fn density_json(map: &str, lmax: u32, levels: u32) -> std::result::Result<String, JsValue> {
    let payload = density_payload(map_or_err(map)?, lmax, levels)
        .map_err(|e| JsValue::from_str(&e.to_string()))?;
    to_js(payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_payload_levels() {
        let dto = chain_payload(MapId::FrakU5, 4, 3, 1_000_000).unwrap();
        assert_eq!(dto.status, "completed");
        let lengths: Vec<u32> = dto.levels.iter().map(|l| l.length).collect();
        assert_eq!(lengths, vec![30, 22, 19]);
        let ends: Vec<&str> = dto.levels.iter().map(|l| l.end.as_str()).collect();
        assert_eq!(ends, vec!["248678", "5392358", "59867203"]);

        let json = serde_json::to_string(&dto).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["levels"][0]["vs_origin"], "PP");
    }

    #[test]
    fn stopping_payload_rows() {
        let dto = stopping_payload(MapId::T3, 10).unwrap();
        assert_eq!(dto.rows.len(), 11);
        assert_eq!(dto.rows[2].f_strict, "0.25");
        assert_eq!(dto.rows[2].f_terras, "0.5");
        assert!((dto.rows[10].f_strict_value - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn density_payload_values() {
        let dto = density_payload(MapId::FrakU3, 20, 1).unwrap();
        assert_eq!(dto.fractions, vec!["0.1198839"]);
        let last = dto.rising_curve.last().unwrap();
        assert_eq!(last.l, 20);
        assert!((last.value - 0.1198839).abs() < 1e-6);
        assert!((dto.coverage_curve.last().unwrap().value - 0.99577).abs() < 1e-4);
    }

    #[test]
    fn map_names_parse() {
        for name in ["c3", "t3", "u3", "u3g", "fraku3", "c5", "t5", "u5", "u5g", "fraku5"] {
            assert!(parse_map(name).is_some());
        }
        assert!(parse_map("nope").is_none());
    }
}
