//! Browser bindings: each export returns a JSON string for `www/index.html`.

use joints_core::algorithms::{sample_survival, slope_partition_choice, theorem1_bound};
use joints_core::field::FieldSpec;
use joints_core::generators::{
    axis_with_planar_pencil, generic_star, grid, plane_with_verticals, random_lines,
};
use joints_core::geometry::{is_generic, joints, LineCollection};
use joints_core::io::Ratio;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn field(p: u32) -> Result<FieldSpec, String> {
    FieldSpec::prime(p as u64).map_err(|e| e.to_string())
}

fn build(family: &str, param: u32, p: u32, seed: u32) -> Result<LineCollection, String> {
    let spec = field(p)?;
    let c = match family {
        "grid" => grid(3, param as u64, spec),
        "star" => generic_star(3, param as usize, spec, seed as u64),
        "plane" => plane_with_verticals(p as u64),
        "pencil" => axis_with_planar_pencil(param as u64, spec),
        "random" => random_lines(3, param as usize, spec, seed as u64),
        other => return Err(format!("unknown family {other:?}")),
    };
    c.map_err(|e| e.to_string())
}

/// Joints of a configuration in `F_p^3` against the explicit bound.
#[wasm_bindgen]
pub fn joints_vs_bound(family: &str, param: u32, p: u32, seed: u32) -> Result<String, String> {
    let c = build(family, param, p, seed)?;
    let records = joints(&c).map_err(|e| e.to_string())?;
    let (l, j) = (c.len() as u64, records.len() as u64);
    let generic = is_generic(&c).map_err(|e| e.to_string())?;
    let ratio = Ratio::new(j, l, 3);
    let mut hist = std::collections::BTreeMap::new();
    for r in &records {
        *hist.entry(r.multiplicity).or_insert(0u64) += 1;
    }
    let hist: Vec<_> = hist
        .into_iter()
        .map(|(m, count)| json!({"multiplicity": m, "joints": count}))
        .collect();
    Ok(json!({
        "lines": l,
        "joints": j,
        "bound": theorem1_bound(l, 3),
        "ratio": ratio.decimal,
        "ratio_power_form": ratio.power_form,
        "generic": generic.generic,
        "multiplicities": hist,
    })
    .to_string())
}

/// The slope-block assignment over `F_p`: choices per point and choosers per line.
#[wasm_bindgen]
pub fn slope_partition_table(p: u32, k: u32) -> Result<String, String> {
    let s = slope_partition_choice(p as u64, k as u64).map_err(|e| e.to_string())?;
    let blocks: Vec<_> = s
        .blocks
        .iter()
        .map(|b| {
            let lines: Vec<usize> = (0..s.collection.len())
                .filter(|&l| s.slope(l).is_some_and(|v| b.contains(&v)))
                .collect();
            let choosers = lines
                .iter()
                .map(|&l| s.chooser_counts[l])
                .max()
                .unwrap_or(0);
            json!({
                "residues": b,
                "choices_per_point": b.iter().filter(|&&v| v != 0).count(),
                "max_choosers_per_line": choosers,
            })
        })
        .collect();
    Ok(json!({
        "p": p,
        "k": k,
        "m": s.m,
        "blocks": blocks,
        "max_choosers_nonzero_slope": s.max_choosers_nonzero_slope(),
    })
    .to_string())
}

/// Samples a generic star of `lines` lines over `F_101` with `lambda = N(0)`.
#[wasm_bindgen]
pub fn sample_star(lines: u32, trials: u32, seed: u32) -> Result<String, String> {
    let c = generic_star(3, lines as usize, field(101)?, seed as u64).map_err(|e| e.to_string())?;
    let lambda = joints(&c)
        .map_err(|e| e.to_string())?
        .first()
        .map(|j| j.multiplicity)
        .ok_or("a star needs at least 3 lines")?;
    let r = sample_survival(&c, lambda, trials as usize, seed as u64).map_err(|e| e.to_string())?;
    let mut kept_hist = vec![0u32; lines as usize + 1];
    for &k in &r.kept_counts {
        kept_hist[k] += 1;
    }
    Ok(json!({
        "lambda": lambda,
        "keep_probability": r.keep_probability,
        "expected_kept": r.expected_kept(),
        "mean_kept": r.mean_kept(),
        "standard_error": r.standard_error(),
        "survival_frequency": r.survival_frequency(),
        "kept_histogram": kept_hist,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_report() {
        let v: serde_json::Value =
            serde_json::from_str(&joints_vs_bound("grid", 3, 101, 0).unwrap()).unwrap();
        assert_eq!(v["joints"], 27);
        assert_eq!(v["lines"], 27);
        assert_eq!(v["ratio_power_form"], "1/27");
        assert!(joints_vs_bound("cube", 3, 101, 0).is_err());
        assert!(joints_vs_bound("grid", 3, 100, 0).is_err());
    }

    #[test]
    fn slope_table() {
        let v: serde_json::Value =
            serde_json::from_str(&slope_partition_table(11, 3).unwrap()).unwrap();
        assert_eq!(v["blocks"].as_array().unwrap().len(), 3);
        assert_eq!(v["blocks"][0]["choices_per_point"], 3);
        assert!(slope_partition_table(11, 0).is_err());
    }

    #[test]
    fn sampling() {
        let v: serde_json::Value = serde_json::from_str(&sample_star(10, 200, 1).unwrap()).unwrap();
        assert_eq!(v["lambda"], 720);
        let total: u64 = v["kept_histogram"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .sum();
        assert_eq!(total, 200);
        assert!(sample_star(2, 10, 1).is_err());
    }
}
