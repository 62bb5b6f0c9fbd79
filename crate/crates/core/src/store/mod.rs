//! Orbit database: one record per facet orbit, keyed by canonical incidence.

mod checkpoint;
mod report;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::group::PermGroup;
use crate::linalg::rank;
use crate::polytope::{Facet, VPolytope};
use crate::scalar::Scalar;

pub use checkpoint::{from_text, load_checkpoint, read_metadata, save_checkpoint, to_text, CheckpointError, FORMAT_VERSION};
pub use report::{report, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Unprocessed,
    Processed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Unprocessed => "unprocessed",
            Status::Processed => "processed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord<F: Scalar> {
    /// Canonical image of the incidence set; also the incidence of the
    /// representative facet.
    pub key: Vec<u32>,
    pub normal: Vec<F>,
    pub rhs: F,
    pub stabilizer_order: BigUint,
    pub orbit_size: BigUint,
    /// Rank of the facet matrix, for polytopes of matrices.
    pub rank: Option<usize>,
    pub status: Status,
}

impl<F: Scalar> OrbitRecord<F> {
    pub fn incidence_count(&self) -> usize {
        self.key.len()
    }

    pub fn facet(&self) -> Facet<F> {
        Facet { normal: self.normal.clone(), rhs: self.rhs.clone(), incidence: self.key.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub group: String,
    pub radicand: Option<u32>,
    pub symmetry_order: BigUint,
    pub ambient_dim: usize,
    pub full_dim: usize,
    pub vertex_count: usize,
    /// Free-form `key=value` settings the database was produced with.
    pub config: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDatabase<F: Scalar> {
    pub meta: Metadata,
    records: BTreeMap<(usize, Vec<u32>), OrbitRecord<F>>,
}

impl<F: Scalar> OrbitDatabase<F> {
    pub fn new(meta: Metadata) -> Self {
        OrbitDatabase { meta, records: BTreeMap::new() }
    }

    /// An empty database for a polytope and its symmetry group.
    pub fn for_polytope(group: &str, poly: &VPolytope<F>, sym: &PermGroup) -> Self {
        OrbitDatabase::new(Metadata {
            group: group.to_string(),
            radicand: F::RADICAND,
            symmetry_order: sym.order(),
            ambient_dim: poly.ambient_dim(),
            full_dim: poly.full_dim(),
            vertex_count: poly.vertex_count(),
            config: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in (incidence count, key) order.
    pub fn records(&self) -> impl Iterator<Item = &OrbitRecord<F>> {
        self.records.values()
    }

    pub fn get(&self, key: &[u32]) -> Option<&OrbitRecord<F>> {
        self.records.get(&(key.len(), key.to_vec()))
    }

    pub fn set_status(&mut self, key: &[u32], status: Status) {
        if let Some(r) = self.records.get_mut(&(key.len(), key.to_vec())) {
            r.status = status;
        }
    }

    /// The first unprocessed record in (incidence count, key) order.
    pub fn next_unprocessed(&self) -> Option<&OrbitRecord<F>> {
        self.records.values().find(|r| r.status == Status::Unprocessed)
    }

    pub fn unprocessed_facets(&self) -> BigUint {
        self.records.values().filter(|r| r.status == Status::Unprocessed).map(|r| &r.orbit_size).sum()
    }

    pub fn total_facets(&self) -> BigUint {
        self.records.values().map(|r| &r.orbit_size).sum()
    }

    /// Inserts a record as given. Returns false if its key already exists.
    pub fn insert_record(&mut self, record: OrbitRecord<F>) -> bool {
        let k = (record.key.len(), record.key.clone());
        if self.records.contains_key(&k) {
            return false;
        }
        self.records.insert(k, record);
        true
    }

    /// Inserts the orbit of `facet` unless already present.
    pub fn insert_or_find(&mut self, facet: &Facet<F>, sym: &PermGroup, poly: &VPolytope<F>) -> (&OrbitRecord<F>, bool) {
        let key = sym.canonical_image(&facet.incidence);
        self.insert_canonical(key, sym, poly)
    }

    /// Like [`insert_or_find`](Self::insert_or_find) for an incidence set
    /// that is already canonical.
    pub fn insert_canonical(&mut self, key: Vec<u32>, sym: &PermGroup, poly: &VPolytope<F>) -> (&OrbitRecord<F>, bool) {
        let k = (key.len(), key);
        if self.records.contains_key(&k) {
            return (&self.records[&k], false);
        }
        let record = new_record(k.1.clone(), sym, poly);
        self.records.insert(k.clone(), record);
        (&self.records[&k], true)
    }

    /// Checks every invariant that does not need the group itself.
    pub fn validate(&self) -> Result<(), String> {
        let m = &self.meta;
        for r in self.records.values() {
            if r.key.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("key of an orbit with incidence {} is not strictly increasing", r.key.len()));
            }
            if r.key.last().is_some_and(|&x| x as usize >= m.vertex_count) {
                return Err("key refers to a vertex out of range".into());
            }
            if r.normal.len() != m.full_dim {
                return Err(format!("normal has length {}, expected {}", r.normal.len(), m.full_dim));
            }
            if r.stabilizer_order.is_zero() || &r.orbit_size * &r.stabilizer_order != m.symmetry_order {
                return Err(format!(
                    "orbit size {} times stabilizer order {} differs from the symmetry order {}",
                    r.orbit_size, r.stabilizer_order, m.symmetry_order
                ));
            }
        }
        Ok(())
    }

    /// Checks every record against the polytope and group: the stored
    /// representative is a facet with the stored key, the key is canonical
    /// and the stabilizer order is right.
    pub fn verify_against(&self, sym: &PermGroup, poly: &VPolytope<F>) -> Result<(), String> {
        self.validate()?;
        for r in self.records.values() {
            let f = r.facet();
            if !poly.check_facet(&f) {
                return Err(format!("record with incidence {} is not a facet", r.key.len()));
            }
            if sym.canonical_image(&r.key) != r.key {
                return Err(format!("record with incidence {} has a non-canonical key", r.key.len()));
            }
            if sym.stabilizer_order(&r.key) != r.stabilizer_order {
                return Err(format!("record with incidence {} has a wrong stabilizer order", r.key.len()));
            }
        }
        Ok(())
    }
}

/// A fresh unprocessed record for a canonical key.
pub fn new_record<F: Scalar>(key: Vec<u32>, sym: &PermGroup, poly: &VPolytope<F>) -> OrbitRecord<F> {
    let facet = poly.facet_from_incidence(&key).expect("canonical key is a facet incidence");
    let stabilizer_order = sym.stabilizer_order(&key);
    let orbit_size = sym.order() / &stabilizer_order;
    let rank = poly.facet_matrix(&facet).map(|(a, _)| rank(&a));
    OrbitRecord { key, normal: facet.normal, rhs: facet.rhs, stabilizer_order, orbit_size, rank, status: Status::Unprocessed }
}
