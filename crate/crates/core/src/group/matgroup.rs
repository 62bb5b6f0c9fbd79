use std::collections::HashMap;
use std::collections::VecDeque;

use crate::linalg::{inverse, Matrix};
use crate::scalar::Scalar;

use super::perm::Perm;
use super::GroupError;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// A finite matrix group with its elements listed in lexicographic order of
/// their row-major entries.
#[derive(Clone, Debug)]
pub struct MatGroup<F: Scalar> {
    dim: usize,
    generators: Vec<Matrix<F>>,
    elements: Vec<Matrix<F>>,
    index: HashMap<Matrix<F>, u32>,
}

impl<F: Scalar> MatGroup<F> {
    /// Closure of `generators` under multiplication.
    pub fn generate(dim: usize, generators: Vec<Matrix<F>>, cap: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(GroupError::Shape { dim });
            }
            if inverse(g).is_none() {
                return Err(GroupError::Singular);
            }
        }
        let id = Matrix::identity(dim);
        let mut seen: HashMap<Matrix<F>, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        let mut all = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.mul(g);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
            all.push(x);
        }
        all.sort_by(|a, b| a.entries().cmp(b.entries()));
        let index = all.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        Ok(MatGroup { dim, generators, elements: all, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix<F>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix<F>] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Matrix<F> {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, m: &Matrix<F>) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn identity_index(&self) -> u32 {
        self.index_of(&Matrix::identity(self.dim)).expect("identity is an element")
    }

    /// The vertex permutation `X ↦ f(X)` for a map that preserves the group.
    pub fn induced_perm(&self, f: impl Fn(&Matrix<F>) -> Matrix<F>) -> Option<Perm> {
        let mut images = Vec::with_capacity(self.order());
        for x in &self.elements {
            images.push(self.index_of(&f(x))?);
        }
        Perm::from_images(images).ok()
    }

    /// `X ↦ g·X`.
    pub fn left_perm(&self, g: &Matrix<F>) -> Option<Perm> {
        self.induced_perm(|x| g.mul(x))
    }

    /// `X ↦ X·h⁻¹`.
    pub fn right_inverse_perm(&self, h: &Matrix<F>) -> Option<Perm> {
        let hinv = inverse(h)?;
        self.induced_perm(|x| x.mul(&hinv))
    }

    /// `X ↦ Xᵀ`.
    pub fn transpose_perm(&self) -> Option<Perm> {
        self.induced_perm(Matrix::transpose)
    }

    /// `X ↦ n·X·n⁻¹`.
    pub fn conjugation_perm(&self, n: &Matrix<F>) -> Option<Perm> {
        let ninv = inverse(n)?;
        self.induced_perm(|x| n.mul(x).mul(&ninv))
    }

    /// True when every element's transpose is again an element.
    pub fn closed_under_transpose(&self) -> bool {
        self.elements.iter().all(|x| self.index.contains_key(&x.transpose()))
    }
}
