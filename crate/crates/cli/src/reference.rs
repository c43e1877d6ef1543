//! Reference spectra, embedded as CSV.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

const INDEX: &str = include_str!("../data/tables.csv");
const TABLES: [&str; 4] = [
    include_str!("../data/table1.csv"),
    include_str!("../data/table2.csv"),
    include_str!("../data/table3.csv"),
    include_str!("../data/table4.csv"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub ell: u32,
    pub n: usize,
    /// Complex-scaling value, where the table has one.
    pub csm: Option<f64>,
    /// Reference AIM value.
    pub aim: f64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub id: u8,
    pub v0: f64,
    pub gamma: f64,
    pub lambda_sq: f64,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn ells(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.rows.iter().map(|r| r.ell).collect();
        out.dedup();
        out
    }

    pub fn row(&self, ell: u32, n: usize) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.ell == ell && r.n == n)
    }
}

#[derive(Deserialize)]
struct IndexRow {
    table: u8,
    v0: f64,
    gamma: f64,
    lambda_sq: f64,
}

pub fn load(id: u8) -> Result<ReferenceTable> {
    let body = *TABLES.get(usize::from(id).wrapping_sub(1)).ok_or_else(|| anyhow!("no table {id}; choose 1-4"))?;
    let meta = csv::Reader::from_reader(INDEX.as_bytes())
        .deserialize::<IndexRow>()
        .collect::<Result<Vec<_>, _>>()
        .context("reading table index")?
        .into_iter()
        .find(|r| r.table == id)
        .ok_or_else(|| anyhow!("table {id} missing from index"))?;
    let rows = csv::Reader::from_reader(body.as_bytes())
        .deserialize::<ReferenceRow>()
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("reading table {id}"))?;
    if rows.is_empty() {
        bail!("table {id} is empty");
    }
    Ok(ReferenceTable { id, v0: meta.v0, gamma: meta.gamma, lambda_sq: meta.lambda_sq, rows })
}
