//! Browser bindings: ball growth, ledger checks and the torus census, each
//! returning a JSON string for the page in `www/`.

use growthlab::census::torus_conjugate_census;
use growthlab::enumerate::{enumerate_group, EnumMethod, Limits};
use growthlab::escape::prime_power;
use growthlab::growth::ball_sizes;
use growthlab::ledger::{c1, verify_recurrences, DEFAULT_DELTA_CAP, DEFAULT_D_GRID};
use growthlab::varieties::{diagonal_torus, nonregular_locus};
use growthlab::{make_field, make_group, Embedding, Family, GroupSpec, LedgerTerm};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest group the page will enumerate.
pub const MAX_ORDER: usize = 200_000;

fn spec(family: &str, rank: u32, q: u32) -> Result<GroupSpec, String> {
    let (p, k) = prime_power(q as u64).ok_or(format!("{q} is not a prime power"))?;
    let field = make_field(p, k).map_err(|e| e.to_string())?;
    let family: Family = family.parse().map_err(|e: growthlab::Error| e.to_string())?;
    make_group(family, rank, &field, Embedding::Usual).map_err(|e| e.to_string())
}

pub fn ball_growth_json(family: &str, rank: u32, q: u32, radius: u32) -> Result<String, String> {
    let g = spec(family, rank, q)?;
    let a = g.standard_generators_unverified().map_err(|e| e.to_string())?;
    let mut tracked = vec![nonregular_locus(&g)];
    if g.family != Family::SUTwisted {
        tracked.insert(0, diagonal_torus(&g));
    }
    let p = ball_sizes(&g, &a, radius, &tracked, &Limits::elements(MAX_ORDER)).map_err(|e| e.to_string())?;
    serde_json::to_string(&p).map_err(|e| e.to_string())
}

pub fn ledger_json(d: u64, big_d: u64, delta: u64) -> Result<String, String> {
    if big_d == 0 {
        return Err("D must be positive".into());
    }
    let c = c1(d, &LedgerTerm::from_u64(big_d), delta).map_err(|e| e.to_string())?;
    let rec = verify_recurrences(delta, &DEFAULT_D_GRID, DEFAULT_DELTA_CAP).map_err(|e| e.to_string())?;
    let failing: Vec<_> = rec.checks.iter().filter(|c| !c.holds).collect();
    Ok(json!({
        "c1": c.to_string(),
        "log10_c1": c.log10(),
        "recurrences_checked": rec.checks.len(),
        "recurrences_pass": rec.all_pass,
        "failing": failing,
    })
    .to_string())
}

pub fn torus_census_json(family: &str, rank: u32, q: u32) -> Result<String, String> {
    let g = spec(family, rank, q)?;
    let pts = enumerate_group(&g, EnumMethod::BfsClosure, MAX_ORDER).map_err(|e| e.to_string())?;
    let t = torus_conjugate_census(&g, &pts).map_err(|e| e.to_string())?;
    serde_json::to_string(&t).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn ball_growth(family: &str, rank: u32, q: u32, radius: u32) -> Result<String, JsError> {
    ball_growth_json(family, rank, q, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ledger_check(d: u32, big_d: u32, delta: u32) -> Result<String, JsError> {
    ledger_json(d as u64, big_d as u64, delta as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn torus_census(family: &str, rank: u32, q: u32) -> Result<String, JsError> {
    torus_census_json(family, rank, q).map_err(|e| JsError::new(&e))
}
