//! `ideals`: fuel-bounded queries over spaces of ideals.
//!
//! Exit status is 0 for Yes or success, 2 for Unknown at the given fuel and
//! 1 for errors and failed checks.

mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use ideal_spaces::check::{self, sample_fingen, CheckConfig};
use ideal_spaces::comptop::{complete_space, s_from_relation, x_conditions, PointSample};
use ideal_spaces::encoding::{finset_decode, nat, triple_decode};
use ideal_spaces::ideal::{extract_chain, validate_prefix, IdealStream};
use ideal_spaces::metric::{ball_encode, rational_index};
use ideal_spaces::powerspace::{
    f_lower, f_upper, f_upper_of_empty, g_lower_meets, g_upper_covered, lower_relation,
    upper_relation, IdealFamily,
};
use ideal_spaces::relation::StagedRelation;
use ideal_spaces::spec::{parse_argument, Loader, Workspace};
use ideal_spaces::{codes::apply_code, Nat};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::{nat_json, Outcome, Report};

const DEFAULT_FUEL: u64 = 256;
const DEFAULT_BOUND: u64 = 64;
const DEFAULT_COUNT: usize = 20;

#[derive(Parser, Debug)]
#[command(name = "ideals", version, about = "Fuel-bounded queries over spaces of ideals")]
struct Cli {
    /// Stage budget for semidecisions.
    #[arg(long, global = true, env = "IDEALS_FUEL")]
    fuel: Option<u64>,
    /// Largest element inspected by scans.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Number of elements to list.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// One JSON record per command instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file of named specs, referenced as `@name`.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Staged relations.
    #[command(subcommand)]
    Rel(RelCmd),
    /// Ideals given as enumerations.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Codes of computable maps.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Derived spaces.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Formal balls of a metric oracle.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Spaces from a c.e. triple set.
    #[command(subcommand)]
    Comptop(ComptopCmd),
    /// Lower and upper powerspaces.
    #[command(subcommand)]
    Power(PowerCmd),
    /// Runs a named property suite, or `all`.
    Check {
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum RelCmd {
    /// Semidecides `a ≺ b`.
    Holds { rel: String, a: String, b: String },
    /// Searches for transitivity violations below `--bound`.
    CheckTrans { rel: String },
}

#[derive(Subcommand, Debug)]
enum IdealCmd {
    /// Lists elements in discovery order.
    Enum { ideal: String },
    /// Semidecides `n ∈ I`.
    Member { ideal: String, n: String },
    /// Looks for violations of the ideal axioms.
    Validate {
        ideal: String,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Extracts a cofinal chain; each step may use up to `--fuel` stages.
    Chain { ideal: String },
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Lists elements of the image of an ideal.
    Apply { code: String, ideal: String },
}

#[derive(Subcommand, Debug)]
enum SpaceCmd {
    /// Prints the relation spec of a derived space.
    #[command(subcommand)]
    Derive(DeriveCmd),
}

#[derive(Subcommand, Debug)]
enum DeriveCmd {
    Product { left: String, right: String },
    Coproduct { left: String, right: String },
    /// `PAIRS` is `[{"u": [...], "v": [...]}, ...]`.
    Pi2 { rel: String, pairs: String },
    Equalizer { left: String, right: String },
}

#[derive(Subcommand, Debug)]
enum MetricCmd {
    /// Semidecides `<center, n> ∈ I`. With the rationals oracle the centre
    /// may be written `p/q`.
    BallMember {
        oracle: String,
        ideal: String,
        center: String,
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ComptopCmd {
    /// The triple set `{<n,m,k> | n ≺ k and m ≺ k}`.
    FromRel { rel: String },
    /// The relation whose ideals form the space of a triple set.
    Complete {
        triples: String,
        #[arg(long)]
        overt: Option<String>,
    },
    /// Compares conditions (i)-(iii) with the ideal axioms on samples.
    Verify {
        rel: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PowerCmd {
    LowerRel { rel: String },
    UpperRel { rel: String },
    /// The point of the lower powerspace for a list of ideals.
    FLower {
        ideals: String,
        #[arg(long)]
        relation: Option<String>,
    },
    /// Semidecides whether `g_L(J)` meets the basic open of `m`.
    GLowerMeets { j: String, m: String },
    /// The point of the upper powerspace for a list of ideals.
    FUpper {
        ideals: String,
        #[arg(long)]
        relation: Option<String>,
    },
    /// Semidecides whether `g_U(J)` lies inside the union of the listed opens.
    GUpperCovered { j: String, cover: String },
}

struct Ctx {
    loader: Loader,
    fuel: u64,
    bound: u64,
    count: usize,
    seed: u64,
    cli_fuel: Option<u64>,
    cli_bound: Option<u64>,
}

/// A spec argument: an inline reference, inline JSON, or a file holding JSON.
fn spec_value(text: &str) -> Result<Value> {
    let t = text.trim();
    let inline = t.starts_with(['{', '[', '"', '@']) || t.contains(':') || t == "rationals";
    if !inline && Path::new(t).is_file() {
        let body = std::fs::read_to_string(t).with_context(|| format!("reading {t}"))?;
        return Ok(parse_argument(&body).with_context(|| format!("in {t}"))?);
    }
    Ok(parse_argument(t)?)
}

fn parse_nat(text: &str) -> Result<Nat> {
    text.trim()
        .parse::<Nat>()
        .map_err(|_| anyhow!("`{text}` is not a natural number"))
}

fn listing(items: &[(u64, Nat)]) -> (Value, Vec<String>) {
    let witness = items
        .iter()
        .map(|(s, n)| json!({ "stage": s, "element": nat_json(n) }))
        .collect();
    let lines = items.iter().map(|(s, n)| format!("{n}\t(stage {s})")).collect();
    (witness, lines)
}

fn set_listing(items: &[(u64, Nat)]) -> (Value, Vec<String>) {
    let witness = items
        .iter()
        .map(|(s, n)| json!({ "stage": s, "element": nat_json(n), "set": finset_decode(n) }))
        .collect();
    let lines = items
        .iter()
        .map(|(s, n)| format!("{n}\t{:?}\t(stage {s})", finset_decode(n)))
        .collect();
    (witness, lines)
}

impl Ctx {
    fn relation(&self, text: &str) -> Result<StagedRelation> {
        Ok(self.loader.relation(&spec_value(text)?, "$")?)
    }

    fn ideal(&self, text: &str) -> Result<IdealStream> {
        Ok(self.loader.ideal(&spec_value(text)?, "$")?)
    }

    fn enumerate(&self, query: String, ideal: &IdealStream, sets: bool) -> Report {
        let items = ideal.enumerate(self.count, self.fuel);
        let (witness, lines) = if sets { set_listing(&items) } else { listing(&items) };
        Report::new(query, format!("listed {}", items.len()), Outcome::Yes)
            .fuel(self.fuel)
            .witness(witness)
            .lines(lines)
    }

    fn pairs(&self, query: String, rel: &StagedRelation, spec: Value) -> Report {
        let pairs: Vec<(Nat, Nat)> = rel
            .enumerate_pairs(self.fuel, self.bound)
            .into_iter()
            .take(self.count)
            .collect();
        let mut lines = vec![spec.to_string()];
        lines.extend(pairs.iter().map(|(a, b)| format!("{a} ≺ {b}")));
        let listed: Vec<Value> = pairs.iter().map(|(a, b)| json!([nat_json(a), nat_json(b)])).collect();
        Report::new(query, rel.name(), Outcome::Yes)
            .fuel(self.fuel)
            .witness(json!({ "spec": spec, "pairs": listed }))
            .lines(lines)
    }

    fn run(&self, command: &Command) -> Result<Report> {
        match command {
            Command::Rel(cmd) => self.rel(cmd),
            Command::Ideal(cmd) => self.ideal_cmd(cmd),
            Command::Code(CodeCmd::Apply { code, ideal }) => {
                let c = self.loader.code(&spec_value(code)?, "$")?;
                let out = apply_code(&c, &self.ideal(ideal)?)?;
                Ok(self.enumerate(format!("code apply {}", out.label()), &out, false))
            }
            Command::Space(SpaceCmd::Derive(cmd)) => self.derive(cmd),
            Command::Metric(MetricCmd::BallMember { oracle, ideal, center, n }) => {
                let oracle_spec = spec_value(oracle)?;
                self.loader.oracle(&oracle_spec, "$")?;
                let centre = if oracle_spec == json!("rationals") && !center.chars().all(|c| c.is_ascii_digit()) {
                    let q: BigRational = center.parse().map_err(|_| anyhow!("`{center}` is not a rational"))?;
                    rational_index(&q)
                } else {
                    parse_nat(center)?
                };
                let i = self.ideal(ideal)?;
                let result = i.member(&ball_encode(&centre, *n), self.fuel);
                Ok(Report::query(format!("metric ball-member <{center}, {n}>"), result, self.fuel))
            }
            Command::Comptop(cmd) => self.comptop(cmd),
            Command::Power(cmd) => self.power(cmd),
            Command::Check { suite, samples } => {
                let config = CheckConfig {
                    seed: self.seed,
                    samples: *samples,
                    bound: self.cli_bound,
                    fuel: self.cli_fuel,
                };
                let reports = check::run(suite, &config)?;
                let passed = reports.iter().all(|r| r.passed());
                let lines = reports.iter().flat_map(|r| r.lines()).collect();
                let outcome = if passed { Outcome::Yes } else { Outcome::Failed };
                Ok(Report::new(format!("check {suite}"), if passed { "pass" } else { "FAIL" }, outcome)
                    .witness(serde_json::to_value(&reports)?)
                    .lines(lines))
            }
        }
    }

    fn rel(&self, cmd: &RelCmd) -> Result<Report> {
        match cmd {
            RelCmd::Holds { rel, a, b } => {
                let r = self.relation(rel)?;
                let result = r.holds(&parse_nat(a)?, &parse_nat(b)?, self.fuel);
                Ok(Report::query(format!("rel holds {} {a} {b}", r.name()), result, self.fuel))
            }
            RelCmd::CheckTrans { rel } => {
                let r = self.relation(rel)?;
                let bad = r.check_transitivity(self.bound, self.fuel);
                let query = format!("rel check-trans {}", r.name());
                let witness: Vec<Value> = bad
                    .iter()
                    .map(|(a, b, c)| json!([nat_json(a), nat_json(b), nat_json(c)]))
                    .collect();
                let report = if bad.is_empty() {
                    Report::new(query, "no violation", Outcome::Yes)
                        .lines(vec![format!("no violation below {}", self.bound)])
                } else {
                    let (a, b, c) = &bad[0];
                    Report::new(query, "violated", Outcome::Failed).lines(vec![format!(
                        "{} violations; first: {a} ≺ {b} ≺ {c} but {a} ≺ {c} unknown",
                        bad.len()
                    )])
                };
                Ok(report.fuel(self.fuel).witness(Value::Array(witness)))
            }
        }
    }

    fn ideal_cmd(&self, cmd: &IdealCmd) -> Result<Report> {
        match cmd {
            IdealCmd::Enum { ideal } => {
                let i = self.ideal(ideal)?;
                Ok(self.enumerate(format!("ideal enum {}", i.label()), &i, false))
            }
            IdealCmd::Member { ideal, n } => {
                let i = self.ideal(ideal)?;
                let result = i.member(&parse_nat(n)?, self.fuel);
                Ok(Report::query(format!("ideal member {} {n}", i.label()), result, self.fuel))
            }
            IdealCmd::Validate { ideal, depth } => {
                let i = self.ideal(ideal)?;
                let d = validate_prefix(&i, *depth, self.fuel);
                let query = format!("ideal validate {}", i.label());
                let mut lines = Vec::new();
                if d.empty {
                    lines.push("nothing enumerated".to_string());
                }
                lines.extend(d.not_directed.iter().map(|(a, b)| format!("no upper bound for {a}, {b}")));
                lines.extend(d.not_lower.iter().map(|(n, a)| format!("{n} ≺ {a} but {n} missing")));
                let witness = json!({
                    "inspected": d.inspected.iter().map(nat_json).collect::<Vec<_>>(),
                    "empty": d.empty,
                    "not_directed": d.not_directed.iter().map(|(a, b)| json!([nat_json(a), nat_json(b)])).collect::<Vec<_>>(),
                    "not_lower": d.not_lower.iter().map(|(n, a)| json!([nat_json(n), nat_json(a)])).collect::<Vec<_>>(),
                });
                let report = if d.is_clean() {
                    lines.push(format!("no violation among {} elements", d.inspected.len()));
                    Report::new(query, "no violation", Outcome::Yes)
                } else {
                    Report::new(query, "not an ideal", Outcome::Failed)
                };
                Ok(report.fuel(self.fuel).witness(witness).lines(lines))
            }
            IdealCmd::Chain { ideal } => {
                let i = self.ideal(ideal)?;
                let query = format!("ideal chain {}", i.label());
                match extract_chain(&i, self.count as u64, self.fuel) {
                    Ok(chain) => Ok(Report::new(query, format!("chain of {}", chain.len()), Outcome::Yes)
                        .fuel(self.fuel)
                        .witness(Value::Array(chain.iter().map(nat_json).collect()))
                        .lines(chain.iter().map(|n| n.to_string()).collect())),
                    Err(e) => Ok(Report::new(query, "Unknown", Outcome::Unknown)
                        .fuel(self.fuel)
                        .witness(json!(e.to_string()))
                        .lines(vec![e.to_string()])),
                }
            }
        }
    }

    fn derive(&self, cmd: &DeriveCmd) -> Result<Report> {
        let (op, derivation) = match cmd {
            DeriveCmd::Product { left, right } => (
                "product",
                json!({"op": "product", "left": spec_value(left)?, "right": spec_value(right)?}),
            ),
            DeriveCmd::Coproduct { left, right } => (
                "coproduct",
                json!({"op": "coproduct", "left": spec_value(left)?, "right": spec_value(right)?}),
            ),
            DeriveCmd::Pi2 { rel, pairs } => (
                "pi2",
                json!({"op": "pi2", "relation": spec_value(rel)?, "pairs": spec_value(pairs)?}),
            ),
            DeriveCmd::Equalizer { left, right } => (
                "equalizer",
                json!({"op": "equalizer", "left": spec_value(left)?, "right": spec_value(right)?}),
            ),
        };
        let spec = json!({"kind": "derived", "derivation": derivation});
        let rel = self.loader.relation(&spec, "$")?;
        Ok(Report::new(format!("space derive {op}"), rel.name(), Outcome::Yes)
            .witness(spec.clone())
            .lines(vec![serde_json::to_string_pretty(&spec)?]))
    }

    fn comptop(&self, cmd: &ComptopCmd) -> Result<Report> {
        match cmd {
            ComptopCmd::FromRel { rel } => {
                let spec = json!({"kind": "from-relation", "relation": spec_value(rel)?});
                let s = self.loader.triples(&spec, "$")?;
                let found: Vec<(Nat, Nat, Nat)> = (0..=self.bound.pow(2))
                    .map(nat)
                    .filter(|c| s.contains_code_at(c, self.fuel))
                    .map(|c| triple_decode(&c))
                    .take(self.count)
                    .collect();
                let mut lines = vec![spec.to_string()];
                lines.extend(found.iter().map(|(n, m, k)| format!("<{n}, {m}, {k}>")));
                let listed: Vec<Value> = found
                    .iter()
                    .map(|(n, m, k)| json!([nat_json(n), nat_json(m), nat_json(k)]))
                    .collect();
                Ok(Report::new("comptop from-rel", s.name(), Outcome::Yes)
                    .fuel(self.fuel)
                    .witness(json!({"spec": spec, "triples": listed}))
                    .lines(lines))
            }
            ComptopCmd::Complete { triples, overt } => {
                let mut derivation = json!({"op": "complete", "triples": spec_value(triples)?});
                if let Some(e) = overt {
                    derivation["overt"] = spec_value(e)?;
                }
                let spec = json!({"kind": "derived", "derivation": derivation});
                let s = self.loader.triples(&derivation["triples"], "$.triples")?;
                let overt_set = match overt {
                    Some(_) => Some(self.loader.staged_set(&derivation["overt"], "$.overt")?),
                    None => None,
                };
                let space = complete_space(&s, overt_set.as_ref())?;
                Ok(self.pairs("comptop complete".into(), &space.relation, spec))
            }
            ComptopCmd::Verify { rel, samples } => self.comptop_verify(rel, *samples),
        }
    }

    /// Samples genuine ideals (presets for the builtins, principal ideals of
    /// reflexive elements otherwise) and random finite sets, and checks that
    /// (i)-(iii) hold exactly on the ideals.
    fn comptop_verify(&self, text: &str, samples: usize) -> Result<Report> {
        let rel = self.relation(text)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let bound = self.bound.min(32);
        let s = s_from_relation(&rel);
        let preset = ["equality", "less_than", "strict_prefix"]
            .iter()
            .position(|n| *n == rel.name());
        let reflexive: Vec<Nat> = (0..=bound)
            .map(nat)
            .filter(|b| rel.holds_at(b, b, self.fuel))
            .collect();
        let mut cases: Vec<(PointSample, bool)> = Vec::new();
        for _ in 0..samples {
            if let Some(which) = preset {
                let spec = sample_fingen(&mut rng, which, bound);
                cases.push((PointSample::ideal(&spec, bound, self.fuel), true));
            } else if !reflexive.is_empty() {
                let b = &reflexive[rng.gen_range(0..reflexive.len())];
                let set: BTreeSet<Nat> = rel.lower_at(b, self.fuel).into_iter().collect();
                cases.push((PointSample::finite(format!("↓{b}"), set), true));
            }
            let set: BTreeSet<Nat> = (0..rng.gen_range(0..4))
                .map(|_| nat(rng.gen_range(0..=bound)))
                .collect();
            let ideal = self.finite_is_ideal(&rel, &set);
            cases.push((PointSample::finite(format!("{set:?}"), set), ideal));
        }
        let mut disagreements = Vec::new();
        for (x, expected) in &cases {
            let got = x_conditions(&s, x, bound, self.fuel).in_x();
            if got != *expected {
                disagreements.push(format!("{}: ideal {expected}, (i)-(iii) {got}", x.label));
            }
        }
        let query = format!("comptop verify {}", rel.name());
        let mut lines = vec![format!(
            "{} samples, {} disagreements",
            cases.len(),
            disagreements.len()
        )];
        lines.extend(disagreements.iter().take(5).cloned());
        let (answer, outcome) = if disagreements.is_empty() {
            ("agree", Outcome::Yes)
        } else {
            ("disagree", Outcome::Failed)
        };
        Ok(Report::new(query, answer, outcome)
            .fuel(self.fuel)
            .witness(json!({"samples": cases.len(), "disagreements": disagreements}))
            .lines(lines))
    }

    fn finite_is_ideal(&self, rel: &StagedRelation, set: &BTreeSet<Nat>) -> bool {
        let f = self.fuel;
        let lower = set
            .iter()
            .all(|b| rel.lower_at(b, f).iter().all(|a| set.contains(a)));
        let directed = set.iter().all(|a| {
            set.iter()
                .all(|b| set.iter().any(|c| rel.holds_at(a, c, f) && rel.holds_at(b, c, f)))
        });
        !set.is_empty() && lower && directed
    }

    fn power(&self, cmd: &PowerCmd) -> Result<Report> {
        match cmd {
            PowerCmd::LowerRel { rel } | PowerCmd::UpperRel { rel } => {
                let lower = matches!(cmd, PowerCmd::LowerRel { .. });
                let base = self.relation(rel)?;
                let (op, derived) = if lower {
                    ("lower", lower_relation(&base))
                } else {
                    ("upper", upper_relation(&base))
                };
                let spec = json!({"kind": "derived", "derivation": {"op": op, "of": spec_value(rel)?}});
                Ok(self.pairs(format!("power {op}-rel"), &derived, spec))
            }
            PowerCmd::FLower { ideals, relation } | PowerCmd::FUpper { ideals, relation } => {
                let lower = matches!(cmd, PowerCmd::FLower { .. });
                let list = self.loader.ideal_list(&spec_value(ideals)?, "$")?;
                let rel = match (relation, list.first()) {
                    (Some(r), _) => self.relation(r)?,
                    (None, Some(first)) => first.relation().clone(),
                    (None, None) => bail!("an empty list needs --relation"),
                };
                let out = if lower {
                    f_lower(&rel, &IdealFamily::listed(list))?
                } else if list.is_empty() {
                    f_upper_of_empty(&rel)
                } else {
                    f_upper(&rel, &list)?
                };
                let op = if lower { "f-lower" } else { "f-upper" };
                Ok(self.enumerate(format!("power {op} {}", out.label()), &out, true))
            }
            PowerCmd::GLowerMeets { j, m } => {
                let jj = self.ideal(j)?;
                let result = g_lower_meets(&jj, &parse_nat(m)?, self.fuel);
                Ok(Report::query(format!("power g-lower-meets {} {m}", jj.label()), result, self.fuel))
            }
            PowerCmd::GUpperCovered { j, cover } => {
                let jj = self.ideal(j)?;
                let set = self.loader.staged_set(&spec_value(cover)?, "$")?;
                let result = g_upper_covered(&jj, &set, self.fuel);
                Ok(Report::query(format!("power g-upper-covered {} {cover}", jj.label()), result, self.fuel))
            }
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    let workspace = match &cli.workspace {
        Some(path) => {
            let body = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let doc: Value = serde_json::from_str(&body).with_context(|| format!("parsing {}", path.display()))?;
            Workspace::from_json(&doc)?
        }
        None => Workspace::default(),
    };
    let ctx = Ctx {
        loader: Loader::with_workspace(workspace),
        fuel: cli.fuel.unwrap_or(DEFAULT_FUEL),
        bound: cli.bound.unwrap_or(DEFAULT_BOUND),
        count: cli.count.unwrap_or(DEFAULT_COUNT),
        seed: cli.seed,
        cli_fuel: cli.fuel,
        cli_bound: cli.bound,
    };
    ctx.run(&cli.command)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(report) => {
            report.print(as_json);
            ExitCode::from(report.outcome.code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
