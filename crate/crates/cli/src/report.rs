use ideal_spaces::relation::QueryResult;
use ideal_spaces::Nat;
use serde::Serialize;
use serde_json::{json, Value};

/// How a command ended; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes,
    Unknown,
    Failed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Yes => 0,
            Outcome::Unknown => 2,
            Outcome::Failed => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Record {
    pub query: String,
    pub answer: String,
    pub fuel: Option<u64>,
    pub witness: Value,
}

/// A finished command: the machine-readable record plus the lines shown in
/// text mode.
#[derive(Debug)]
pub struct Report {
    pub record: Record,
    pub lines: Vec<String>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(query: impl Into<String>, answer: impl Into<String>, outcome: Outcome) -> Self {
        Report {
            record: Record {
                query: query.into(),
                answer: answer.into(),
                fuel: None,
                witness: Value::Null,
            },
            lines: Vec::new(),
            outcome,
        }
    }

    pub fn fuel(mut self, fuel: u64) -> Self {
        self.record.fuel = Some(fuel);
        self
    }

    pub fn witness(mut self, witness: Value) -> Self {
        self.record.witness = witness;
        self
    }

    pub fn lines(mut self, lines: Vec<String>) -> Self {
        self.lines = lines;
        self
    }

    /// A semidecision at `fuel`; the witness is the least stage.
    pub fn query(query: impl Into<String>, result: QueryResult, fuel: u64) -> Self {
        match result {
            QueryResult::Yes { witness_stage } => Report::new(query, "Yes", Outcome::Yes)
                .witness(json!({ "stage": witness_stage }))
                .lines(vec![format!("Yes (stage {witness_stage})")]),
            QueryResult::Unknown => Report::new(query, "Unknown", Outcome::Unknown)
                .lines(vec![format!("Unknown at fuel {fuel}")]),
        }
        .fuel(fuel)
    }

    pub fn print(&self, as_json: bool) {
        if as_json {
            println!("{}", serde_json::to_string(&self.record).expect("records serialize"));
        } else {
            for line in &self.lines {
                println!("{line}");
            }
        }
    }
}

/// Naturals that fit a machine word are JSON numbers, larger ones strings.
pub fn nat_json(n: &Nat) -> Value {
    match u64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}
