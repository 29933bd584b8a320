//! Browser bindings: each function returns a JSON string.

use serde_json::json;
use wasm_bindgen::prelude::*;

use rspin::spin::{count_by_arf, orbit_partition};
use rspin::thurston_veech::{prototype, prototype_checks};

fn err(e: rspin::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Number of r-spin structures in genus g, split by Arf invariant.
#[wasm_bindgen]
pub fn count(g: u32, r: u32) -> Result<String, JsError> {
    let c = count_by_arf(g as usize, r as i64).map_err(err)?;
    Ok(json!({
        "total": c.total.to_string(),
        "even": c.even.map(|v| v.to_string()),
        "odd": c.odd.map(|v| v.to_string()),
        "enumerated": c.enumerated,
    })
    .to_string())
}

/// Prototype origami for a comma-separated partition; `arf` < 0 means none.
#[wasm_bindgen(js_name = buildPrototype)]
pub fn build_prototype(kappa: &str, arf: i32) -> Result<String, JsError> {
    let kappa: Vec<usize> = kappa
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| JsError::new(&format!("cannot read {kappa:?} as a partition")))?;
    let a = if arf < 0 { None } else { Some(arf as u8) };
    let p = prototype(&kappa, a).map_err(err)?;
    let o = &p.built.origami;
    let checks: Vec<_> = prototype_checks(&p).into_iter().map(|(n, ok)| json!({ "name": n, "pass": ok })).collect();
    Ok(json!({
        "template": p.system.name,
        "case": p.choice.case,
        "squares": o.n(),
        "stratum": o.stratum(),
        "genus": o.genus(),
        "sigma_h": o.sigma_h(),
        "sigma_v": o.sigma_v(),
        "text": o.to_text(),
        "checks": checks,
    })
    .to_string())
}

/// Orbit sizes of the twist action on all r^(2g) chain states.
#[wasm_bindgen]
pub fn orbits(g: u32, r: u32) -> Result<String, JsError> {
    let sizes = orbit_partition(g as usize, r as i64).map_err(err)?;
    Ok(json!({ "sizes": sizes }).to_string())
}
