//! Worked examples of derived-natural involutions, loaded from
//! `data/known_examples.json`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

const DATA: &str = include_str!("../data/known_examples.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownExample {
    pub degree: u64,
    pub points: u64,
    pub name: String,
    pub biregular: bool,
    pub autoequivalence: String,
    pub notation: String,
}

impl KnownExample {
    pub fn t(&self) -> u64 {
        self.degree / 2
    }

    pub fn description(&self) -> String {
        format!(
            "{} on S^[{}], degree {}: induced by {} ({})",
            self.name, self.points, self.degree, self.autoequivalence, self.notation
        )
    }
}

#[derive(Debug, Deserialize)]
struct Table {
    version: u32,
    examples: Vec<KnownExample>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(DATA).expect("embedded example table is valid JSON"))
}

pub fn table_version() -> u32 {
    table().version
}

pub fn known_examples() -> &'static [KnownExample] {
    &table().examples
}

pub fn lookup(t: u64, n: u64) -> Option<&'static KnownExample> {
    known_examples()
        .iter()
        .find(|e| e.t() == t && e.points == n)
}

pub fn known_examples_lookup(t: u64, n: u64) -> Option<String> {
    lookup(t, n).map(KnownExample::description)
}
