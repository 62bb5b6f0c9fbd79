//! Summary statistics of an orbit database.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::json;

use crate::scalar::Scalar;

use super::{OrbitDatabase, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub group: String,
    pub orbit_count: usize,
    pub processed: usize,
    pub total_facets: BigUint,
    pub incidence_histogram: BTreeMap<usize, usize>,
    pub stabilizer_histogram: BTreeMap<BigUint, usize>,
    /// Only over records that carry a rank.
    pub rank_histogram: BTreeMap<usize, usize>,
}

pub fn report<F: Scalar>(db: &OrbitDatabase<F>) -> Report {
    let mut r = Report {
        group: db.meta.group.clone(),
        orbit_count: db.len(),
        processed: 0,
        total_facets: BigUint::default(),
        incidence_histogram: BTreeMap::new(),
        stabilizer_histogram: BTreeMap::new(),
        rank_histogram: BTreeMap::new(),
    };
    for rec in db.records() {
        if rec.status == Status::Processed {
            r.processed += 1;
        }
        r.total_facets += &rec.orbit_size;
        *r.incidence_histogram.entry(rec.incidence_count()).or_default() += 1;
        *r.stabilizer_histogram.entry(rec.stabilizer_order.clone()).or_default() += 1;
        if let Some(k) = rec.rank {
            *r.rank_histogram.entry(k).or_default() += 1;
        }
    }
    r
}

fn map_text<K: ToString>(m: impl IntoIterator<Item = (K, usize)>) -> String {
    let parts: Vec<String> = m.into_iter().map(|(k, v)| format!("{}: {v}", k.to_string())).collect();
    format!("{{{}}}", parts.join(", "))
}

fn table<K: ToString>(out: &mut String, title: &str, m: impl IntoIterator<Item = (K, usize)>) {
    let rows: Vec<(String, String)> = m.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    let w1 = rows.iter().map(|r| r.0.len()).chain([title.len()]).max().unwrap_or(0);
    let w2 = rows.iter().map(|r| r.1.len()).chain(["orbits".len()]).max().unwrap_or(0);
    let _ = writeln!(out, "{title:>w1$}  {:>w2$}", "orbits");
    for (k, v) in rows {
        let _ = writeln!(out, "{k:>w1$}  {v:>w2$}");
    }
}

impl Report {
    /// Every histogram accounts for every orbit exactly once. The rank
    /// histogram is only checked when it is nonempty.
    pub fn histograms_consistent(&self) -> bool {
        let inc: usize = self.incidence_histogram.values().sum();
        let stab: usize = self.stabilizer_histogram.values().sum();
        let rank: usize = self.rank_histogram.values().sum();
        inc == self.orbit_count && stab == self.orbit_count && (rank == 0 || rank == self.orbit_count)
    }

    pub fn incidence_summary(&self) -> String {
        map_text(self.incidence_histogram.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn stabilizer_summary(&self) -> String {
        map_text(self.stabilizer_histogram.iter().map(|(k, v)| (k, *v)))
    }

    pub fn rank_summary(&self) -> String {
        map_text(self.rank_histogram.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "group {}", self.group);
        let _ = writeln!(
            s,
            "orbits {} (processed {}, unprocessed {})",
            self.orbit_count,
            self.processed,
            self.orbit_count - self.processed
        );
        let _ = writeln!(s, "total facets {}", self.total_facets);
        let _ = writeln!(s, "incidence histogram {}", self.incidence_summary());
        let _ = writeln!(s, "stabilizer histogram {}", self.stabilizer_summary());
        let _ = writeln!(s, "rank histogram {}", self.rank_summary());
        let _ = writeln!(s);
        table(&mut s, "incidence", self.incidence_histogram.iter().map(|(k, v)| (*k, *v)));
        let _ = writeln!(s);
        table(&mut s, "stabilizer", self.stabilizer_histogram.iter().map(|(k, v)| (k, *v)));
        if !self.rank_histogram.is_empty() {
            let _ = writeln!(s);
            table(&mut s, "rank", self.rank_histogram.iter().map(|(k, v)| (*k, *v)));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let obj = |m: Vec<(String, usize)>| -> serde_json::Map<String, serde_json::Value> {
            m.into_iter().map(|(k, v)| (k, json!(v))).collect()
        };
        json!({
            "group": self.group,
            "orbit_count": self.orbit_count,
            "processed": self.processed,
            "total_facets": self.total_facets.to_string(),
            "incidence_histogram": obj(self.incidence_histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
            "stabilizer_histogram": obj(self.stabilizer_histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
            "rank_histogram": obj(self.rank_histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect()),
            "histograms_consistent": self.histograms_consistent(),
        })
    }
}
