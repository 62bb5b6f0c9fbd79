//! Checking a candidate inequality `Tr(X·A) ≤ rhs` against a matrix group.

use crate::linalg::{rank, Matrix};
use crate::scalar::Scalar;

use super::VPolytope;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport<F> {
    /// Holds for every group element.
    pub valid: bool,
    /// Elements with `Tr(X·A) = rhs`, in group order.
    pub incidence: Vec<u32>,
    pub violations: usize,
    pub max_value: F,
    /// Valid and tight on a facet of the convex hull.
    pub is_facet: bool,
    pub rank_of_a: usize,
}

impl<F> InequalityReport<F> {
    pub fn incidence_count(&self) -> usize {
        self.incidence.len()
    }
}

/// `Tr(X·A) = Σ X_ij A_ji` for every vertex of a matrix polytope.
pub fn verify_inequality<F: Scalar>(poly: &VPolytope<F>, a: &Matrix<F>, rhs: &F) -> Option<InequalityReport<F>> {
    let n = poly.matrix_dim()?;
    if a.rows() != n || a.cols() != n {
        return None;
    }
    let at = a.transpose();
    let mut incidence = Vec::new();
    let mut violations = 0;
    let mut max_value: Option<F> = None;
    for (i, x) in poly.vertices().iter().enumerate() {
        let v = crate::linalg::dot(x, at.entries());
        match v.cmp(rhs) {
            std::cmp::Ordering::Equal => incidence.push(i as u32),
            std::cmp::Ordering::Greater => violations += 1,
            std::cmp::Ordering::Less => {}
        }
        if max_value.as_ref().is_none_or(|m| &v > m) {
            max_value = Some(v);
        }
    }
    let valid = violations == 0;
    let is_facet = valid && poly.is_facet_set(&incidence);
    Some(InequalityReport {
        valid,
        incidence,
        violations,
        max_value: max_value.unwrap_or_else(F::zero),
        is_facet,
        rank_of_a: rank(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::MatGroup;
    use crate::scalar::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn sign_matrices_of_order_four() {
        // {diag(±1, ±1)}: the hull is a square in the diagonal plane.
        let g = MatGroup::generate(
            2,
            vec![
                Matrix::from_rows(vec![vec![q(-1), q(0)], vec![q(0), q(1)]]).unwrap(),
                Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]).unwrap(),
            ],
            100,
        )
        .unwrap();
        let p = VPolytope::from_group(&g);
        let a = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
        let r = verify_inequality(&p, &a, &q(1)).unwrap();
        assert!(r.valid && r.is_facet);
        assert_eq!(r.incidence_count(), 2);
        assert_eq!(r.rank_of_a, 1);
        let r = verify_inequality(&p, &a, &q(0)).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations, 2);
        let id = Matrix::<Rational>::identity(2);
        let r = verify_inequality(&p, &id, &q(2)).unwrap();
        assert!(r.valid && !r.is_facet);
        assert_eq!(r.incidence_count(), 1);
    }
}
