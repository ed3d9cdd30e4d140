//! Browser bindings. Every export takes a JSON string and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use std::sync::Arc;

use ideal_spaces::encoding::{finset_decode, pair_decode, seq_decode};
use ideal_spaces::metric::{
    ball_encode, ideal_from_cauchy, rational_index, FastCauchy, MetricOracle, RationalsOracle,
};
use ideal_spaces::powerspace::{finite_catalogue, FiniteSpace};
use ideal_spaces::relation::QueryResult;
use ideal_spaces::spec::Loader;
use ideal_spaces::Nat;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_FUEL: u64 = 1 << 14;
const MAX_COUNT: u64 = 500;

type Out = Result<Value, String>;

fn respond(out: Out) -> String {
    match out {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse(input: &str) -> Out {
    serde_json::from_str(input).map_err(|e| format!("malformed JSON: {e}"))
}

fn uint(v: &Value, key: &str, default: u64, max: u64) -> Result<u64, String> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(x) => x
            .as_u64()
            .filter(|n| *n <= max)
            .ok_or_else(|| format!("`{key}` must be a natural number at most {max}")),
    }
}

fn rational(v: &Value, key: &str) -> Result<BigRational, String> {
    let text = match v.get(key) {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => return Err(format!("`{key}` must be a rational like \"7/5\"")),
    };
    text.trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a rational"))
}

fn query_json(result: QueryResult) -> Value {
    match result {
        QueryResult::Yes { witness_stage } => json!({ "answer": "Yes", "stage": witness_stage }),
        QueryResult::Unknown => json!({ "answer": "Unknown", "stage": null }),
    }
}

/// `lo < √2 < hi`, decided with exact squares.
fn sqrt2_between(lo: &BigRational, hi: &BigRational) -> bool {
    let two = BigRational::from_integer(2.into());
    let above_lo = *lo < BigRational::zero() || lo * lo < two;
    let below_hi = *hi > BigRational::zero() && hi * hi > two;
    above_lo && below_hi
}

/// `{"point": "sqrt2" | "p/q", "center": "p/q", "exponent": n, "fuel": n}`.
/// Semidecides whether the ball `<center, 2^-exponent>` belongs to the ideal
/// of the point, and reports the exact answer alongside.
#[wasm_bindgen(js_name = ballMembership)]
pub fn ball_membership(input: &str) -> String {
    respond(parse(input).and_then(|v| {
        let center = rational(&v, "center")?;
        let exponent = uint(&v, "exponent", 0, 64)?;
        let fuel = uint(&v, "fuel", 256, MAX_FUEL)?;
        let radius = BigRational::one() / BigRational::from_integer((1u64 << exponent).into());
        let (lo, hi) = (&center - &radius, &center + &radius);
        let oracle: Arc<dyn MetricOracle> = Arc::new(RationalsOracle);
        let (seq, exact) = match v.get("point").and_then(Value::as_str) {
            Some("sqrt2") => (FastCauchy::sqrt2(), sqrt2_between(&lo, &hi)),
            _ => {
                let q = rational(&v, "point")?;
                let inside = lo < q && q < hi;
                (FastCauchy::constant(rational_index(&q)), inside)
            }
        };
        let ideal = ideal_from_cauchy(oracle, &seq);
        let ball = ball_encode(&rational_index(&center), exponent);
        let mut out = query_json(ideal.member(&ball, fuel));
        out["fuel"] = json!(fuel);
        out["ball"] = json!(ball.to_string());
        out["exact"] = json!(exact);
        Ok(out)
    }))
}

fn view(relation: &str, n: &Nat) -> String {
    if relation == "strict_prefix" {
        let s: Vec<String> = seq_decode(n).iter().map(|x| x.to_string()).collect();
        format!("[{}]", s.join(", "))
    } else if relation == "finite_subset" || relation.starts_with("lower(") || relation.starts_with("upper(") {
        format!("{:?}", finset_decode(n))
    } else if relation.starts_with("product(") {
        let (a, b) = pair_decode(n);
        format!("<{a}, {b}>")
    } else {
        n.to_string()
    }
}

/// `{"ideal": <ideal spec>, "count": n, "fuel": n}`. Lists elements in
/// discovery order with the stage each first appeared.
#[wasm_bindgen(js_name = enumerateIdeal)]
pub fn enumerate_ideal(input: &str) -> String {
    respond(parse(input).and_then(|v| {
        let spec = v.get("ideal").ok_or("missing `ideal`")?;
        let count = uint(&v, "count", 20, MAX_COUNT)? as usize;
        let fuel = uint(&v, "fuel", 256, MAX_FUEL)?;
        let ideal = Loader::new().ideal(spec, "$.ideal").map_err(|e| e.to_string())?;
        let rel = ideal.relation().name().to_string();
        let elements: Vec<Value> = ideal
            .enumerate(count, fuel)
            .iter()
            .map(|(s, n)| json!({ "stage": s, "element": n.to_string(), "view": view(&rel, n) }))
            .collect();
        Ok(json!({ "label": ideal.label(), "relation": rel, "elements": elements }))
    }))
}

fn members(mask: u64, width: usize) -> Vec<usize> {
    (0..width).filter(|i| mask & (1 << i) != 0).collect()
}

fn space_from(v: &Value) -> Result<FiniteSpace, String> {
    if let Some(name) = v.get("preset").and_then(Value::as_str) {
        return finite_catalogue()
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| format!("no preset named `{name}`"));
    }
    let size = uint(v, "size", 0, 5)? as usize;
    let pairs = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or("missing `pairs`")?
        .iter()
        .map(|p| match p.as_array().map(|a| a.as_slice()) {
            Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                _ => Err(format!("bad pair {p}")),
            },
            _ => Err(format!("bad pair {p}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
    FiniteSpace::new(name, size, &pairs).map_err(|e| e.to_string())
}

/// `{"preset": name}` or `{"size": n, "pairs": [[a, b], ...]}` with
/// `n <= 5`. Returns the transitive closure, all ideals, closed sets and
/// saturated compacts, the images under `f_L` and `f_U`, and the outcome of
/// the exhaustive check.
#[wasm_bindgen(js_name = explorePoset)]
pub fn explore_poset(input: &str) -> String {
    respond(parse(input).and_then(|v| {
        let space = space_from(&v)?;
        let n = space.size();
        let ideals = space.ideals();
        let width = ideals.len();
        let ideal_lists: Vec<Vec<usize>> = ideals.iter().map(|&i| members(i as u64, n)).collect();
        let finite_sets = |mask: u64| -> Vec<Vec<usize>> {
            (0..1u64 << n)
                .filter(|f| mask & (1 << f) != 0)
                .map(|f| members(f, n))
                .collect()
        };
        let lower: Vec<Value> = space
            .closed_sets()
            .into_iter()
            .map(|a| json!({ "closed": members(a, width), "f_lower": finite_sets(space.f_l(&ideals, a)) }))
            .collect();
        let upper: Vec<Value> = space
            .saturated_compacts()
            .into_iter()
            .map(|k| json!({ "compact": members(k, width), "f_upper": finite_sets(space.f_u(&ideals, k)) }))
            .collect();
        let report = space.verify();
        Ok(json!({
            "name": space.name(),
            "size": n,
            "relation": space.pairs(),
            "ideals": ideal_lists,
            "lower": lower,
            "upper": upper,
            "verified": report.passed(),
            "failures": report.failures,
        }))
    }))
}

/// Names accepted by `explorePoset` as `preset`.
#[wasm_bindgen(js_name = posetPresets)]
pub fn poset_presets() -> String {
    let names: Vec<String> = finite_catalogue().iter().map(|s| s.name().to_string()).collect();
    json!(names).to_string()
}
