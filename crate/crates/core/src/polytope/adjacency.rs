//! Recursive adjacency decomposition: facet orbits are discovered by
//! flipping representative ridges of already known orbits.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::group::PermGroup;
use crate::scalar::Scalar;
use crate::store::{CheckpointError, OrbitDatabase, Status};

use super::dd::{direct_dual_description_capped, DdError, DEFAULT_RAY_CAP};
use super::{Facet, VPolytope};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Facets with more vertices than this get their ridges by recursion;
    /// `None` means four times the dimension of the polytope at hand.
    pub recursion_threshold: Option<usize>,
    pub early_termination: bool,
    pub seed: u64,
    pub ray_cap: usize,
    pub max_depth: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            recursion_threshold: None,
            early_termination: true,
            seed: 0x5eed,
            ray_cap: DEFAULT_RAY_CAP,
            max_depth: 6,
        }
    }
}

impl EnumerationConfig {
    pub fn threshold_for(&self, full_dim: usize) -> usize {
        self.recursion_threshold.unwrap_or(4 * full_dim).max(full_dim)
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        vec![
            (
                "recursion_threshold".into(),
                self.recursion_threshold.map_or_else(|| "auto".to_string(), |t| t.to_string()),
            ),
            ("early_termination".into(), self.early_termination.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EnumerationError {
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("no initial facet found")]
    NoInitialFacet,
    #[error("database does not belong to this polytope: {0}")]
    Mismatch(String),
}

/// How an enumeration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    /// Every orbit was processed.
    Complete,
    /// The remaining orbits are too few to hide an undiscovered one.
    EarlyTerminated,
    /// `Control::should_stop` asked to stop.
    Interrupted,
    /// The per-run orbit budget was used up.
    Budget,
}

impl Stop {
    pub fn is_finished(self) -> bool {
        matches!(self, Stop::Complete | Stop::EarlyTerminated)
    }
}

/// Progress information passed to [`Control::orbit_done`].
#[derive(Debug, Clone)]
pub struct Progress {
    pub orbits: usize,
    pub processed: usize,
    pub ridges: usize,
    pub incidence: usize,
}

/// Hooks for the top-level run.
pub trait Control<F: Scalar> {
    fn should_stop(&self) -> bool {
        false
    }
    /// Maximum number of orbits to process in this run.
    fn budget(&self) -> Option<usize> {
        None
    }
    fn orbit_done(&mut self, _db: &OrbitDatabase<F>, _p: &Progress) -> Result<(), EnumerationError> {
        Ok(())
    }
}

/// A control that never interrupts.
pub struct NoControl;

impl<F: Scalar> Control<F> for NoControl {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RidgeMode {
    Direct,
    Recursive,
}

/// True when processing may stop: either nothing is left, or fewer facets
/// than the dimension remain unprocessed, so by the connectivity of the
/// ridge graph every facet is adjacent to a processed one.
pub fn early_termination_check<F: Scalar>(db: &OrbitDatabase<F>, full_dim: usize) -> bool {
    let processed = db.records().any(|r| r.status == Status::Processed);
    let remaining = db.unprocessed_facets();
    remaining == BigUint::default() || (processed && remaining < BigUint::from(full_dim))
}

/// Runs the decomposition until complete or stopped. `db` may already hold
/// orbits (resume); it is updated in place.
pub fn adjacency_decomposition<F: Scalar>(
    poly: &VPolytope<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
    db: &mut OrbitDatabase<F>,
    ctl: &mut dyn Control<F>,
) -> Result<Stop, EnumerationError> {
    decompose(poly, sym, cfg, db, ctl, 0)
}

fn decompose<F: Scalar>(
    poly: &VPolytope<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
    db: &mut OrbitDatabase<F>,
    ctl: &mut dyn Control<F>,
    depth: usize,
) -> Result<Stop, EnumerationError> {
    let d = poly.full_dim();
    if db.meta.vertex_count != poly.vertex_count() || db.meta.full_dim != d {
        return Err(EnumerationError::Mismatch("vertex count or dimension differs".into()));
    }
    if d == 0 {
        return Ok(Stop::Complete);
    }
    if db.is_empty() {
        let f = poly.initial_facet(cfg.seed).ok_or(EnumerationError::NoInitialFacet)?;
        db.insert_or_find(&f, sym, poly);
    }
    let mut done_this_run = 0;
    loop {
        let Some(rec) = db.next_unprocessed().cloned() else {
            return Ok(Stop::Complete);
        };
        if cfg.early_termination && early_termination_check(db, d) {
            return Ok(Stop::EarlyTerminated);
        }
        if ctl.should_stop() {
            return Ok(Stop::Interrupted);
        }
        if ctl.budget().is_some_and(|b| done_this_run >= b) {
            return Ok(Stop::Budget);
        }
        let facet = rec.facet();
        let (sub, reps) = ridge_representatives(poly, &facet, sym, cfg, depth)?;
        let keys: Vec<Vec<u32>> = reps
            .par_iter()
            .map(|r| {
                let g = poly.flip_across(&facet, &sub, r);
                debug_assert!(poly.check_facet(&g));
                sym.canonical_image(&g.incidence)
            })
            .collect();
        for key in keys {
            db.insert_canonical(key, sym, poly);
        }
        db.set_status(&rec.key, Status::Processed);
        done_this_run += 1;
        let progress = Progress {
            orbits: db.len(),
            processed: db.records().filter(|r| r.status == Status::Processed).count(),
            ridges: reps.len(),
            incidence: rec.key.len(),
        };
        ctl.orbit_done(db, &progress)?;
    }
}

/// The facet's sub-polytope and one ridge per orbit of the facet's
/// stabilizer, as facets of the sub-polytope.
fn ridge_representatives<F: Scalar>(
    poly: &VPolytope<F>,
    facet: &Facet<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
    depth: usize,
) -> Result<(VPolytope<F>, Vec<Facet<F>>), EnumerationError> {
    let sub = poly.sub_polytope(&facet.incidence);
    let local = local_group(sym, &facet.incidence);
    let recurse = facet.incidence.len() > cfg.threshold_for(poly.full_dim()) && depth + 1 < cfg.max_depth;
    let reps = if recurse {
        let mut sub_db = OrbitDatabase::for_polytope("", &sub, &local);
        decompose(&sub, &local, cfg, &mut sub_db, &mut NoControl, depth + 1)?;
        sub_db.records().map(|r| r.facet()).collect()
    } else {
        let all = direct_dual_description_capped(&sub, cfg.ray_cap)?;
        let mut by_key: BTreeMap<Vec<u32>, ()> = BTreeMap::new();
        let keys: Vec<Vec<u32>> = all.par_iter().map(|f| local.canonical_image(&f.incidence)).collect();
        for k in keys {
            by_key.insert(k, ());
        }
        // Each canonical key is itself the incidence of a listed facet.
        let index: std::collections::HashMap<&[u32], &Facet<F>> =
            all.iter().map(|f| (f.incidence.as_slice(), f)).collect();
        by_key.keys().map(|k| index[k.as_slice()].clone()).collect()
    };
    Ok((sub, reps))
}

/// The stabilizer of `set` acting on it, relabelled to `0..set.len()`.
fn local_group(sym: &PermGroup, set: &[u32]) -> PermGroup {
    let stab = sym.set_stabilizer(set);
    PermGroup::restricted(set, &stab.generators)
}

/// Orbit representatives of the ridges of `facet` under its stabilizer,
/// as vertex sets of the polytope.
pub fn ridge_orbits<F: Scalar>(
    poly: &VPolytope<F>,
    facet: &Facet<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
) -> Result<Vec<Vec<u32>>, EnumerationError> {
    let (_, reps) = ridge_representatives(poly, facet, sym, cfg, 0)?;
    Ok(reps.iter().map(|r| r.incidence.iter().map(|&k| facet.incidence[k as usize]).collect()).collect())
}

/// Every ridge of `facet`, as sorted vertex sets of the polytope.
pub fn ridges_of_facet<F: Scalar>(
    poly: &VPolytope<F>,
    facet: &Facet<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
    mode: RidgeMode,
) -> Result<Vec<Vec<u32>>, EnumerationError> {
    let sub = poly.sub_polytope(&facet.incidence);
    let mut local_sets: Vec<Vec<u32>> = match mode {
        RidgeMode::Direct => direct_dual_description_capped(&sub, cfg.ray_cap)?.into_iter().map(|f| f.incidence).collect(),
        RidgeMode::Recursive => {
            let local = local_group(sym, &facet.incidence);
            let mut sub_db = OrbitDatabase::for_polytope("", &sub, &local);
            decompose(&sub, &local, cfg, &mut sub_db, &mut NoControl, 1)?;
            sub_db.records().flat_map(|r| local.set_orbit(&r.key)).collect()
        }
    };
    local_sets.sort();
    Ok(local_sets.into_iter().map(|s| s.iter().map(|&k| facet.incidence[k as usize]).collect()).collect())
}

/// Enumerates every facet directly and groups them into orbits.
pub fn direct_decomposition<F: Scalar>(
    poly: &VPolytope<F>,
    sym: &PermGroup,
    cfg: &EnumerationConfig,
    db: &mut OrbitDatabase<F>,
) -> Result<Stop, EnumerationError> {
    let facets = direct_dual_description_capped(poly, cfg.ray_cap)?;
    let keys: Vec<Vec<u32>> = facets.par_iter().map(|f| sym.canonical_image(&f.incidence)).collect();
    for key in keys {
        let k = key.clone();
        db.insert_canonical(key, sym, poly);
        db.set_status(&k, Status::Processed);
    }
    Ok(Stop::Complete)
}
