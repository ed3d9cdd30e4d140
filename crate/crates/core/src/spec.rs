//! JSON descriptions of relations, ideals, codes, metric oracles and triple
//! sets.
//!
//! Anywhere a spec is expected, a string may stand in for it:
//!
//! * `builtin:NAME` names a built-in relation;
//! * `derived:OP(ARG, ...)` builds a relation from others, with `OP` one of
//!   `product`, `coproduct`, `lower`, `upper`, `balls`;
//! * `@NAME` refers to an entry of the loaded [`Workspace`].
//!
//! Errors carry the JSON path of the offending value, e.g.
//! `$.data.generators[2]`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use crate::codes::{
    code_from_preimage_family, compose_codes, empty_code, identity_code, FnCode, Pi2Code,
};
use crate::comptop::{complete_space, s_from_relation, TripleSet};
use crate::constructions::{
    coproduct_relation, equalizer_pi2, inj1_code, inj2_code, pair_ideals, pi2_relation,
    product_relation, proj1_code, proj2_code,
};
use crate::codes::apply_code;
use crate::error::{Error, Result};
use crate::ideal::{ideal_from_chain, Chain, FinGenSpec, IdealStream};
use crate::metric::{
    ball_relation, ideal_from_cauchy, rational_index, FastCauchy, IntervalOracle, MetricOracle,
    RationalsOracle, RealPoint,
};
use crate::powerspace::{f_lower, f_upper, f_upper_of_empty, lower_relation, upper_relation, IdealFamily};
use crate::relation::{self, builtin, staggered, transitive_closure, StagedRelation};
use crate::staged::{StagedFamily, StagedSet};
use crate::Nat;

const CATEGORIES: [&str; 5] = ["relations", "ideals", "codes", "oracles", "triples"];

/// Named specs, one table per kind of object:
/// `{"relations": {...}, "ideals": {...}, "codes": {...}, "oracles": {...},
/// "triples": {...}}`.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    tables: BTreeMap<String, BTreeMap<String, Value>>,
}

impl Workspace {
    pub fn from_json(doc: &Value) -> Result<Self> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::spec("$", "workspace must be an object"))?;
        let mut tables = BTreeMap::new();
        for (key, table) in obj {
            if !CATEGORIES.contains(&key.as_str()) {
                return Err(Error::spec(
                    format!("$.{key}"),
                    format!("unknown section; expected one of {}", CATEGORIES.join(", ")),
                ));
            }
            let entries = table
                .as_object()
                .ok_or_else(|| Error::spec(format!("$.{key}"), "section must be an object"))?;
            tables.insert(
                key.clone(),
                entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            );
        }
        Ok(Workspace { tables })
    }

    pub fn names(&self, category: &str) -> Vec<String> {
        self.tables
            .get(category)
            .map(|t| t.keys().cloned().collect())
            .unwrap_or_default()
    }

    fn get(&self, category: &str, name: &str) -> Option<&Value> {
        self.tables.get(category)?.get(name)
    }
}

/// Turns specs into library objects, resolving workspace references and
/// rejecting reference cycles.
#[derive(Debug, Default)]
pub struct Loader {
    workspace: Workspace,
    resolving: RefCell<Vec<String>>,
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::spec(path, format!("missing field `{key}`")))
}

fn kind<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    field(v, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::spec(format!("{path}.kind"), "expected a string"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::spec(path, "expected an array"))
}

pub fn parse_nat(v: &Value, path: &str) -> Result<Nat> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(Nat::from)
            .ok_or_else(|| Error::spec(path, "expected a natural number")),
        Value::String(s) => {
            Nat::from_str(s).map_err(|_| Error::spec(path, format!("`{s}` is not a natural number")))
        }
        _ => Err(Error::spec(path, "expected a natural number")),
    }
}

fn parse_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::spec(path, "expected a small natural number"))
}

fn parse_nats(v: &Value, path: &str) -> Result<Vec<Nat>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_nat(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_u64s(v: &Value, path: &str) -> Result<Vec<u64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_u64(x, &format!("{path}[{i}]")))
        .collect()
}

/// `[a, b]` or `[a, b, stage]`.
fn parse_staged_pairs(v: &Value, path: &str) -> Result<Vec<(Nat, Nat, u64)>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let here = format!("{path}[{i}]");
            let items = array(p, &here)?;
            if items.len() != 2 && items.len() != 3 {
                return Err(Error::spec(here, "expected [a, b] or [a, b, stage]"));
            }
            let a = parse_nat(&items[0], &format!("{here}[0]"))?;
            let b = parse_nat(&items[1], &format!("{here}[1]"))?;
            let s = match items.get(2) {
                Some(x) => parse_u64(x, &format!("{here}[2]"))?,
                None => 0,
            };
            Ok((a, b, s))
        })
        .collect()
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::spec(path, "expected an integer or \"p/q\"")),
        Value::String(s) => BigRational::from_str(s.trim())
            .map_err(|_| Error::spec(path, format!("`{s}` is not a rational \"p/q\""))),
        _ => Err(Error::spec(path, "expected an integer or \"p/q\"")),
    }
}

/// Splits `op(a, b(c, d))` into `op` and its top-level arguments.
fn split_call<'a>(text: &'a str, path: &str) -> Result<(&'a str, Vec<&'a str>)> {
    let open = text
        .find('(')
        .ok_or_else(|| Error::spec(path, format!("expected OP(...) in `{text}`")))?;
    if !text.ends_with(')') {
        return Err(Error::spec(path, format!("unbalanced parentheses in `{text}`")));
    }
    let op = text[..open].trim();
    let inner = &text[open + 1..text.len() - 1];
    let mut args = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                args.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::spec(path, format!("unbalanced parentheses in `{text}`")));
        }
    }
    if depth != 0 {
        return Err(Error::spec(path, format!("unbalanced parentheses in `{text}`")));
    }
    if !inner.trim().is_empty() {
        args.push(inner[start..].trim());
    }
    Ok((op, args))
}

fn want_args(op: &str, args: &[&str], n: usize, path: &str) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::spec(
            path,
            format!("`{op}` takes {n} argument(s), got {}", args.len()),
        ))
    }
}

impl Loader {
    pub fn new() -> Self {
        Loader::default()
    }

    pub fn with_workspace(workspace: Workspace) -> Self {
        Loader {
            workspace,
            resolving: RefCell::new(Vec::new()),
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.workspace
    }

    /// Resolves `@name` in `category` and hands the entry to `load`.
    fn named<T>(
        &self,
        category: &str,
        name: &str,
        path: &str,
        load: impl FnOnce(&Value, &str) -> Result<T>,
    ) -> Result<T> {
        let key = format!("{category}.{name}");
        if self.resolving.borrow().contains(&key) {
            return Err(Error::spec(path, format!("reference cycle through @{name}")));
        }
        let v = self
            .workspace
            .get(category, name)
            .ok_or_else(|| Error::spec(path, format!("no {category} entry named `{name}`")))?
            .clone();
        self.resolving.borrow_mut().push(key);
        let out = load(&v, &format!("$.{category}.{name}"));
        self.resolving.borrow_mut().pop();
        out
    }

    pub fn relation(&self, v: &Value, path: &str) -> Result<StagedRelation> {
        match v {
            Value::String(s) => self.relation_ref(s, path),
            Value::Object(_) => match kind(v, path)? {
                "builtin" => {
                    let name = field(v, "name", path)?
                        .as_str()
                        .ok_or_else(|| Error::spec(format!("{path}.name"), "expected a string"))?;
                    builtin(name).map_err(|e| Error::spec(format!("{path}.name"), e.to_string()))
                }
                "finite" => {
                    let pairs = parse_staged_pairs(field(v, "pairs", path)?, &format!("{path}.pairs"))?;
                    let close = v
                        .get("transitive_closure")
                        .and_then(Value::as_bool)
                        .unwrap_or(false);
                    let pairs = if close { transitive_closure(&pairs) } else { pairs };
                    let name = v.get("name").and_then(Value::as_str).unwrap_or("finite");
                    Ok(relation::finite(name, &pairs))
                }
                "derived" => {
                    let d = field(v, "derivation", path)?;
                    self.derivation(d, &format!("{path}.derivation"))
                }
                other => Err(Error::spec(
                    format!("{path}.kind"),
                    format!("unknown relation kind `{other}`"),
                )),
            },
            _ => Err(Error::spec(path, "expected a relation spec")),
        }
    }

    fn relation_ref(&self, s: &str, path: &str) -> Result<StagedRelation> {
        if let Some(name) = s.strip_prefix("builtin:") {
            return builtin(name).map_err(|e| Error::spec(path, e.to_string()));
        }
        if let Some(name) = s.strip_prefix('@') {
            return self.named("relations", name, path, |v, p| self.relation(v, p));
        }
        if let Some(expr) = s.strip_prefix("derived:") {
            let (op, args) = split_call(expr, path)?;
            let arg = |i: usize| self.relation(&Value::String(args[i].to_string()), path);
            return match op {
                "product" | "coproduct" => {
                    want_args(op, &args, 2, path)?;
                    let (a, b) = (arg(0)?, arg(1)?);
                    Ok(if op == "product" {
                        product_relation(&a, &b)
                    } else {
                        coproduct_relation(&a, &b)
                    })
                }
                "lower" | "upper" => {
                    want_args(op, &args, 1, path)?;
                    let a = arg(0)?;
                    Ok(if op == "lower" {
                        lower_relation(&a)
                    } else {
                        upper_relation(&a)
                    })
                }
                "balls" => {
                    want_args(op, &args, 1, path)?;
                    let o = self.oracle(&Value::String(args[0].to_string()), path)?;
                    Ok(ball_relation(o))
                }
                other => Err(Error::spec(path, format!("unknown derivation `{other}`"))),
            };
        }
        Err(Error::spec(
            path,
            format!("`{s}` is not a reference; use builtin:, derived: or @name"),
        ))
    }

    fn derivation(&self, d: &Value, path: &str) -> Result<StagedRelation> {
        let op = field(d, "op", path)?
            .as_str()
            .ok_or_else(|| Error::spec(format!("{path}.op"), "expected a string"))?;
        let rel = |key: &str| self.relation(field(d, key, path)?, &format!("{path}.{key}"));
        match op {
            "product" => Ok(product_relation(&rel("left")?, &rel("right")?)),
            "coproduct" => Ok(coproduct_relation(&rel("left")?, &rel("right")?)),
            "lower" => Ok(lower_relation(&rel("of")?)),
            "upper" => Ok(upper_relation(&rel("of")?)),
            "staggered" => {
                let spread = parse_u64(field(d, "spread", path)?, &format!("{path}.spread"))?;
                Ok(staggered(&rel("of")?, spread))
            }
            "balls" => Ok(ball_relation(
                self.oracle(field(d, "oracle", path)?, &format!("{path}.oracle"))?,
            )),
            "pi2" => {
                let base = rel("relation")?;
                let code = self.pi2_code(&base, d, path)?;
                pi2_relation(&base, &code).map_err(|e| Error::spec(path, e.to_string()))
            }
            "equalizer" => {
                let left = self.code(field(d, "left", path)?, &format!("{path}.left"))?;
                let right = self.code(field(d, "right", path)?, &format!("{path}.right"))?;
                let code = equalizer_pi2(&left, &right).map_err(|e| Error::spec(path, e.to_string()))?;
                pi2_relation(left.source(), &code).map_err(|e| Error::spec(path, e.to_string()))
            }
            "complete" => {
                let s = self.triples(field(d, "triples", path)?, &format!("{path}.triples"))?;
                let overt = match d.get("overt") {
                    Some(e) => Some(StagedSet::finite(parse_nats(e, &format!("{path}.overt"))?)),
                    None => None,
                };
                complete_space(&s, overt.as_ref())
                    .map(|sp| sp.relation)
                    .map_err(|e| Error::spec(path, e.to_string()))
            }
            other => Err(Error::spec(
                format!("{path}.op"),
                format!("unknown derivation `{other}`"),
            )),
        }
    }

    /// `{"pairs": [{"u": [...], "v": [...]}, ...]}` on `base`.
    pub fn pi2_code(&self, base: &StagedRelation, d: &Value, path: &str) -> Result<Pi2Code> {
        let pairs = array(field(d, "pairs", path)?, &format!("{path}.pairs"))?;
        let mut out = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            let here = format!("{path}.pairs[{i}]");
            let u = parse_nats(field(p, "u", &here)?, &format!("{here}.u"))?;
            let v = parse_nats(field(p, "v", &here)?, &format!("{here}.v"))?;
            out.push((StagedSet::finite(u), StagedSet::finite(v)));
        }
        Ok(Pi2Code::listed("listed", base.clone(), out))
    }

    pub fn oracle(&self, v: &Value, path: &str) -> Result<Arc<dyn MetricOracle>> {
        match v {
            Value::String(s) if s == "rationals" => Ok(Arc::new(RationalsOracle)),
            Value::String(s) if s.starts_with('@') => {
                self.named("oracles", &s[1..], path, |v, p| self.oracle(v, p))
            }
            Value::Object(_) => match kind(v, path)? {
                "rationals" => Ok(Arc::new(RationalsOracle)),
                "interval-script" => {
                    let pts = array(field(v, "points", path)?, &format!("{path}.points"))?;
                    let mut points = Vec::new();
                    for (i, p) in pts.iter().enumerate() {
                        let here = format!("{path}.points[{i}]");
                        let point = match p.as_str().and_then(|s| s.strip_prefix("sqrt:")) {
                            Some(q) => {
                                let q = parse_rational(&Value::String(q.into()), &here)?;
                                if q < BigRational::from_integer(0.into()) {
                                    return Err(Error::spec(here, "square root of a negative number"));
                                }
                                RealPoint::Sqrt(q)
                            }
                            None => RealPoint::Rational(parse_rational(p, &here)?),
                        };
                        points.push(point);
                    }
                    Ok(Arc::new(IntervalOracle::new(points)))
                }
                other => Err(Error::spec(
                    format!("{path}.kind"),
                    format!("unknown oracle kind `{other}`"),
                )),
            },
            _ => Err(Error::spec(path, "expected an oracle spec")),
        }
    }

    pub fn ideal(&self, v: &Value, path: &str) -> Result<IdealStream> {
        if let Value::String(s) = v {
            if let Some(name) = s.strip_prefix('@') {
                return self.named("ideals", name, path, |v, p| self.ideal(v, p));
            }
            return Err(Error::spec(path, "expected an ideal spec or @name"));
        }
        let rel = || self.relation(field(v, "relation", path)?, &format!("{path}.relation"));
        let data_path = format!("{path}.data");
        match kind(v, path)? {
            "fingen" => {
                let data = field(v, "data", path)?;
                match data.get("preset").and_then(Value::as_str) {
                    Some("naturals") => Ok(FinGenSpec::naturals().stream()),
                    Some("baire") => {
                        let prefix = parse_u64s(field(data, "prefix", &data_path)?, &format!("{data_path}.prefix"))?;
                        let cycle = parse_u64s(field(data, "cycle", &data_path)?, &format!("{data_path}.cycle"))?;
                        if cycle.is_empty() {
                            return Err(Error::spec(format!("{data_path}.cycle"), "cycle must be nonempty"));
                        }
                        Ok(FinGenSpec::baire_point(prefix, cycle).stream())
                    }
                    Some("subsets") => {
                        let elems = parse_u64s(field(data, "elements", &data_path)?, &format!("{data_path}.elements"))?;
                        let label = format!("subsets{elems:?}");
                        Ok(FinGenSpec::subsets_of(label, move |e| elems.contains(&e)).stream())
                    }
                    Some(other) => Err(Error::spec(
                        format!("{data_path}.preset"),
                        format!("unknown preset `{other}`"),
                    )),
                    None => {
                        let gens = parse_nats(
                            field(data, "generators", &data_path)?,
                            &format!("{data_path}.generators"),
                        )?;
                        let reflexive = data.get("reflexive").and_then(Value::as_bool).unwrap_or(false);
                        FinGenSpec::generators(rel()?, gens, reflexive)
                            .map(|g| g.stream())
                            .map_err(|e| Error::spec(&data_path, e.to_string()))
                    }
                }
            }
            "chain" => {
                let data = field(v, "data", path)?;
                if data.get("preset").and_then(Value::as_str) == Some("naturals") {
                    return Ok(ideal_from_chain(&Chain::naturals()));
                }
                let elems = parse_nats(
                    field(data, "elements", &data_path)?,
                    &format!("{data_path}.elements"),
                )?;
                if elems.is_empty() {
                    return Err(Error::spec(format!("{data_path}.elements"), "chain needs an element"));
                }
                let rel = rel()?;
                let label = format!("chain{}", elems.len());
                let chain = Chain::new(rel, label, move |i| {
                    elems[(i as usize).min(elems.len() - 1)].clone()
                });
                Ok(ideal_from_chain(&chain))
            }
            "enum-script" => {
                let data = array(field(v, "data", path)?, &data_path)?;
                let stages = data
                    .iter()
                    .enumerate()
                    .map(|(i, b)| parse_nats(b, &format!("{data_path}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(IdealStream::enum_script(rel()?, stages))
            }
            "cauchy" => {
                let oracle = self.oracle(field(v, "oracle", path)?, &format!("{path}.oracle"))?;
                let seq = field(v, "sequence", path)?;
                let sp = format!("{path}.sequence");
                let cauchy = if let Some(c) = seq.get("constant") {
                    FastCauchy::constant(parse_nat(c, &format!("{sp}.constant"))?)
                } else if let Some(q) = seq.get("rational") {
                    FastCauchy::constant(rational_index(&parse_rational(q, &format!("{sp}.rational"))?))
                } else if let Some(q) = seq.get("approaching") {
                    FastCauchy::approaching(parse_rational(q, &format!("{sp}.approaching"))?)
                } else if seq.as_str() == Some("sqrt2") {
                    FastCauchy::sqrt2()
                } else {
                    return Err(Error::spec(
                        sp,
                        "expected {\"constant\": i}, {\"rational\": q}, {\"approaching\": q} or \"sqrt2\"",
                    ));
                };
                Ok(ideal_from_cauchy(oracle, &cauchy))
            }
            "pair" => {
                let a = self.ideal(field(v, "left", path)?, &format!("{path}.left"))?;
                let b = self.ideal(field(v, "right", path)?, &format!("{path}.right"))?;
                Ok(pair_ideals(&a, &b))
            }
            "apply" => {
                let code = self.code(field(v, "code", path)?, &format!("{path}.code"))?;
                let ideal = self.ideal(field(v, "ideal", path)?, &format!("{path}.ideal"))?;
                apply_code(&code, &ideal).map_err(|e| Error::spec(path, e.to_string()))
            }
            "f-lower" => {
                let rel = rel()?;
                let list = self.ideal_list(field(v, "ideals", path)?, &format!("{path}.ideals"))?;
                f_lower(&rel, &IdealFamily::listed(list)).map_err(|e| Error::spec(path, e.to_string()))
            }
            "f-upper" => {
                let rel = rel()?;
                let list = self.ideal_list(field(v, "ideals", path)?, &format!("{path}.ideals"))?;
                if list.is_empty() {
                    return Ok(f_upper_of_empty(&rel));
                }
                f_upper(&rel, &list).map_err(|e| Error::spec(path, e.to_string()))
            }
            other => Err(Error::spec(
                format!("{path}.kind"),
                format!("unknown ideal kind `{other}`"),
            )),
        }
    }

    pub fn ideal_list(&self, v: &Value, path: &str) -> Result<Vec<IdealStream>> {
        array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, x)| self.ideal(x, &format!("{path}[{i}]")))
            .collect()
    }

    pub fn code(&self, v: &Value, path: &str) -> Result<FnCode> {
        if let Value::String(s) = v {
            if let Some(name) = s.strip_prefix('@') {
                return self.named("codes", name, path, |v, p| self.code(v, p));
            }
            return Err(Error::spec(path, "expected a code spec or @name"));
        }
        let rel = |key: &str| self.relation(field(v, key, path)?, &format!("{path}.{key}"));
        match kind(v, path)? {
            "pairs" => {
                let pairs = parse_staged_pairs(field(v, "pairs", path)?, &format!("{path}.pairs"))?;
                Ok(FnCode::from_pairs("pairs", rel("source")?, rel("target")?, &pairs))
            }
            "preimage-family" => {
                let fp = format!("{path}.family");
                let sets = array(field(v, "family", path)?, &fp)?
                    .iter()
                    .enumerate()
                    .map(|(i, u)| parse_nats(u, &format!("{fp}[{i}]")).map(StagedSet::finite))
                    .collect::<Result<Vec<_>>>()?;
                Ok(code_from_preimage_family(
                    &StagedFamily::listed(sets),
                    &rel("source")?,
                    &rel("target")?,
                ))
            }
            "composed" => {
                let first = self.code(field(v, "first", path)?, &format!("{path}.first"))?;
                let second = self.code(field(v, "second", path)?, &format!("{path}.second"))?;
                compose_codes(&first, &second).map_err(|e| Error::spec(path, e.to_string()))
            }
            "derived" => {
                let op = field(v, "op", path)?
                    .as_str()
                    .ok_or_else(|| Error::spec(format!("{path}.op"), "expected a string"))?;
                match op {
                    "identity" => Ok(identity_code(&rel("relation")?)),
                    "proj1" => Ok(proj1_code(&rel("left")?, &rel("right")?)),
                    "proj2" => Ok(proj2_code(&rel("left")?, &rel("right")?)),
                    "inj1" => Ok(inj1_code(&rel("left")?, &rel("right")?)),
                    "inj2" => Ok(inj2_code(&rel("left")?, &rel("right")?)),
                    "empty" => Ok(empty_code(&rel("source")?, &rel("target")?)),
                    other => Err(Error::spec(
                        format!("{path}.op"),
                        format!("unknown code derivation `{other}`"),
                    )),
                }
            }
            other => Err(Error::spec(
                format!("{path}.kind"),
                format!("unknown code kind `{other}`"),
            )),
        }
    }

    pub fn triples(&self, v: &Value, path: &str) -> Result<TripleSet> {
        if let Value::String(s) = v {
            if let Some(name) = s.strip_prefix('@') {
                return self.named("triples", name, path, |v, p| self.triples(v, p));
            }
            return Err(Error::spec(path, "expected a triple-set spec or @name"));
        }
        match kind(v, path)? {
            "triples" => {
                let tp = format!("{path}.triples");
                let mut out = Vec::new();
                for (i, t) in array(field(v, "triples", path)?, &tp)?.iter().enumerate() {
                    let here = format!("{tp}[{i}]");
                    let items = array(t, &here)?;
                    if items.len() != 3 && items.len() != 4 {
                        return Err(Error::spec(here, "expected [n, m, k] or [n, m, k, stage]"));
                    }
                    let n = parse_nat(&items[0], &format!("{here}[0]"))?;
                    let m = parse_nat(&items[1], &format!("{here}[1]"))?;
                    let k = parse_nat(&items[2], &format!("{here}[2]"))?;
                    let s = match items.get(3) {
                        Some(x) => parse_u64(x, &format!("{here}[3]"))?,
                        None => 0,
                    };
                    out.push((n, m, k, s));
                }
                Ok(TripleSet::listed(out))
            }
            "from-relation" => {
                let rel = self.relation(field(v, "relation", path)?, &format!("{path}.relation"))?;
                Ok(s_from_relation(&rel))
            }
            other => Err(Error::spec(
                format!("{path}.kind"),
                format!("unknown triple-set kind `{other}`"),
            )),
        }
    }

    /// A finite set of naturals: `[n, ...]`.
    pub fn staged_set(&self, v: &Value, path: &str) -> Result<StagedSet> {
        parse_nats(v, path).map(StagedSet::finite)
    }
}

/// Reads a command-line argument as JSON. Bare `builtin:`, `derived:`,
/// `@name` and `rationals` references are accepted unquoted.
pub fn parse_argument(text: &str) -> Result<Value> {
    let t = text.trim();
    let bare = ["builtin:", "derived:", "@"].iter().any(|p| t.starts_with(p)) || t == "rationals";
    if bare {
        return Ok(Value::String(t.to_string()));
    }
    serde_json::from_str(t).map_err(|e| Error::spec("$", format!("malformed JSON: {e}")))
}
