//! The permutation action of the symmetries of conv(G) on its vertices.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::linalg::{inverse, kernel_basis, Matrix};
use crate::scalar::Scalar;

use super::matgroup::MatGroup;
use super::perm::Perm;
use super::permgroup::PermGroup;
use super::GroupError;

/// Which symmetries of conv(G) to include beyond `X ↦ g·X·h⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryOptions {
    /// `X ↦ Xᵀ`.
    pub transpose: bool,
    /// `X ↦ n·X·n⁻¹` for matrices `n` normalizing G but outside it.
    pub normalizer: bool,
    pub seed: u64,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        SymmetryOptions { transpose: true, normalizer: true, seed: 0x5eed }
    }
}

/// Permutation generators of the action, grouped by kind.
#[derive(Debug, Clone)]
pub struct ActionGenerators {
    pub left: Vec<Perm>,
    pub right: Vec<Perm>,
    pub transpose: Option<Perm>,
    pub normalizer: Vec<Perm>,
    /// Conjugation by each generator; these fix the identity vertex.
    pub conjugation: Vec<Perm>,
}

impl ActionGenerators {
    pub fn all(&self) -> Vec<Perm> {
        let mut out = self.left.clone();
        out.extend(self.right.iter().cloned());
        out.extend(self.transpose.iter().cloned());
        out.extend(self.normalizer.iter().cloned());
        out
    }

    fn identity_stabilizer(&self) -> Vec<Perm> {
        let mut out = self.conjugation.clone();
        out.extend(self.transpose.iter().cloned());
        out.extend(self.normalizer.iter().cloned());
        out
    }
}

pub fn action_generators<F: Scalar>(g: &MatGroup<F>, opts: SymmetryOptions) -> Result<ActionGenerators, GroupError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut conjugation = Vec::new();
    for s in g.generators() {
        let l = g.left_perm(s).ok_or(GroupError::NotClosed)?;
        let r = g.right_inverse_perm(s).ok_or(GroupError::NotClosed)?;
        conjugation.push(l.then(&r));
        left.push(l);
        right.push(r);
    }
    let transpose = if opts.transpose {
        Some(g.transpose_perm().ok_or(GroupError::TransposeNotClosed)?)
    } else {
        None
    };
    let normalizer = if opts.normalizer { outer_normalizer_perms(g) } else { Vec::new() };
    Ok(ActionGenerators { left, right, transpose, normalizer, conjugation })
}

/// The symmetry group as a permutation group on vertex indices, with exact order.
pub fn build_symmetry_action<F: Scalar>(g: &MatGroup<F>, opts: SymmetryOptions) -> Result<PermGroup, GroupError> {
    let gens = action_generators(g, opts)?;
    let order = symmetry_order(g, &gens);
    Ok(PermGroup::with_order(g.order(), &gens.all(), &order, opts.seed))
}

/// |G| times the size of the stabilizer of the identity vertex. Every element
/// of that stabilizer is an automorphism or anti-automorphism of G, so it is
/// determined by the images of the generators and their pairwise products.
pub fn symmetry_order<F: Scalar>(g: &MatGroup<F>, gens: &ActionGenerators) -> BigUint {
    let stab = gens.identity_stabilizer();
    let mut tuple: Vec<u32> = Vec::new();
    for (i, a) in g.generators().iter().enumerate() {
        tuple.push(g.index_of(a).expect("generator is an element"));
        for (j, b) in g.generators().iter().enumerate() {
            if i != j {
                tuple.push(g.index_of(&a.mul(b)).expect("closed"));
            }
        }
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::from([tuple.clone()]);
    let mut queue = vec![tuple];
    while let Some(t) = queue.pop() {
        for p in &stab {
            let img: Vec<u32> = t.iter().map(|&x| p.apply(x)).collect();
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    BigUint::from(g.order()) * BigUint::from(seen.len())
}

/// Conjugations by matrices normalizing G that induce automorphisms not
/// already produced by G itself. One per outer class found.
pub fn outer_normalizer_perms<F: Scalar>(g: &MatGroup<F>) -> Vec<Perm> {
    let gens = g.generators();
    if gens.is_empty() {
        return Vec::new();
    }
    let n = g.dim();
    let traces: Vec<F> = g.elements().iter().map(Matrix::trace).collect();
    let classes = conjugacy_class_ids(g);
    let gen_idx: Vec<u32> = gens.iter().map(|s| g.index_of(s).expect("element")).collect();

    // Candidate images: for the first generator one element per class of the
    // right trace; for the others every element of the right trace.
    let mut choices: Vec<Vec<u32>> = Vec::new();
    for (k, s) in gens.iter().enumerate() {
        let tr = s.trace();
        let mut c: Vec<u32> =
            (0..g.order() as u32).filter(|&i| traces[i as usize] == tr).collect();
        if k == 0 {
            let mut seen = HashSet::new();
            c.retain(|&i| seen.insert(classes[i as usize]));
        }
        choices.push(c);
    }
    let pair_traces: Vec<(usize, usize, F)> = (0..gens.len())
        .flat_map(|i| (0..gens.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, gens[i].mul(&gens[j]).trace()))
        .collect();

    let inner = ConjugationCheck::new(g);
    let mut found: Vec<Perm> = Vec::new();
    let mut reached = inner.images_under(&gen_idx, &[]);
    let mut images = vec![0u32; gens.len()];
    let search = |images: &[u32], found: &mut Vec<Perm>, reached: &mut HashSet<Vec<u32>>| {
        if reached.contains(images) {
            return;
        }
        for &(i, j, ref t) in &pair_traces {
            if g.element(images[i]).mul(g.element(images[j])).trace() != *t {
                return;
            }
        }
        let Some(m) = intertwiner(gens, &images.iter().map(|&i| g.element(i).clone()).collect::<Vec<_>>(), n) else {
            return;
        };
        let Some(p) = g.conjugation_perm(&m) else { return };
        found.push(p);
        *reached = inner.images_under(&gen_idx, found);
    };
    enumerate_tuples(&choices, 0, &mut images, &mut |t| search(t, &mut found, &mut reached));
    found
}

fn enumerate_tuples(choices: &[Vec<u32>], k: usize, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if k == choices.len() {
        f(cur);
        return;
    }
    for &c in &choices[k] {
        cur[k] = c;
        enumerate_tuples(choices, k + 1, cur, f);
    }
}

/// An invertible `m` with `m·sᵢ = yᵢ·m` for all i, if one exists.
fn intertwiner<F: Scalar>(s: &[Matrix<F>], y: &[Matrix<F>], n: usize) -> Option<Matrix<F>> {
    // Unknowns m[a][b] at index a*n+b; each equation (m sᵢ - yᵢ m)[r][c] = 0.
    let mut rows: Vec<F> = Vec::new();
    let mut count = 0;
    for (si, yi) in s.iter().zip(y) {
        for r in 0..n {
            for c in 0..n {
                let mut row = vec![F::zero(); n * n];
                for k in 0..n {
                    // (m s)[r][c] = Σ_k m[r][k] s[k][c]
                    row[r * n + k] = row[r * n + k].clone() + si.get(k, c);
                    // (y m)[r][c] = Σ_k y[r][k] m[k][c]
                    row[k * n + c] = row[k * n + c].clone() - yi.get(r, k);
                }
                rows.extend(row);
                count += 1;
            }
        }
    }
    let system = Matrix::new(count, n * n, rows).expect("shape");
    let kernel = kernel_basis(&system);
    let to_mat = |v: &[F]| Matrix::new(n, n, v.to_vec()).expect("shape");
    for v in &kernel {
        let m = to_mat(v);
        if inverse(&m).is_some() {
            return Some(m);
        }
    }
    // A combination of basis vectors with small integer weights.
    if kernel.len() > 1 {
        for w in 1..=kernel.len() as i64 + 2 {
            let mut v = vec![F::zero(); n * n];
            for (k, b) in kernel.iter().enumerate() {
                let coeff = F::from_i64((k as i64 + 1) * w + k as i64 * k as i64);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() + &(coeff.clone() * y);
                }
            }
            let m = to_mat(&v);
            if inverse(&m).is_some() {
                return Some(m);
            }
        }
    }
    None
}

/// Conjugacy class id (the least index in the class) of every element.
fn conjugacy_class_ids<F: Scalar>(g: &MatGroup<F>) -> Vec<u32> {
    let conj: Vec<Perm> = g.generators().iter().filter_map(|s| g.conjugation_perm(s)).collect();
    super::chain::orbit_minima(g.order(), &conj)
}

/// Orbits of generator tuples under conjugation by elements of G.
struct ConjugationCheck {
    conj: Vec<Perm>,
}

impl ConjugationCheck {
    fn new<F: Scalar>(g: &MatGroup<F>) -> Self {
        ConjugationCheck { conj: g.generators().iter().filter_map(|s| g.conjugation_perm(s)).collect() }
    }

    /// Orbit of a tuple under inner conjugations plus `extra`.
    fn images_under(&self, tuple: &[u32], extra: &[Perm]) -> HashSet<Vec<u32>> {
        let gens: Vec<&Perm> = self.conj.iter().chain(extra).collect();
        let mut seen = HashSet::from([tuple.to_vec()]);
        let mut queue = vec![tuple.to_vec()];
        while let Some(t) = queue.pop() {
            for p in &gens {
                let img: Vec<u32> = t.iter().map(|&x| p.apply(x)).collect();
                if seen.insert(img.clone()) {
                    queue.push(img);
                }
            }
        }
        seen
    }
}
