//! Vertex-described polytopes and their facets.

mod adjacency;
mod dd;
mod verify;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::MatGroup;
use crate::linalg::{affine_hull, affine_rank, dot, lp_solve, solve, Constraint, LpStatus, Matrix, Sense, Solution};
use crate::scalar::{Rational, Scalar};

pub use adjacency::{
    adjacency_decomposition, direct_decomposition, early_termination_check, ridge_orbits, ridges_of_facet, Control,
    EnumerationConfig, EnumerationError, NoControl, Progress, RidgeMode, Stop,
};
pub use dd::{direct_dual_description, direct_dual_description_capped, DdError, DEFAULT_RAY_CAP};
pub use verify::{verify_inequality, InequalityReport};

/// A polytope given by its vertices, with coordinates on its affine hull
/// centred at the vertex barycentre.
#[derive(Clone, Debug)]
pub struct VPolytope<F: Scalar> {
    ambient_dim: usize,
    vertices: Vec<Vec<F>>,
    barycenter: Vec<F>,
    /// Row-reduced basis of the linear span of the centred vertices.
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
    reduced: Vec<Vec<F>>,
    /// Side length when the vertices are flattened square matrices.
    matrix_dim: Option<usize>,
}

/// A facet `⟨normal, v⟩ ≤ rhs` in reduced coordinates, with its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet<F: Scalar> {
    pub normal: Vec<F>,
    pub rhs: F,
    pub incidence: Vec<u32>,
}

impl<F: Scalar> VPolytope<F> {
    /// Builds the polytope of the given points; duplicates are removed
    /// keeping the first occurrence.
    pub fn from_points(points: Vec<Vec<F>>) -> Self {
        let ambient_dim = points.first().map_or(0, Vec::len);
        let mut seen = HashSet::new();
        let vertices: Vec<Vec<F>> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();
        if vertices.is_empty() {
            return VPolytope {
                ambient_dim,
                vertices,
                barycenter: vec![F::zero(); ambient_dim],
                basis: Vec::new(),
                pivots: Vec::new(),
                reduced: Vec::new(),
                matrix_dim: None,
            };
        }
        let n = F::from_i64(vertices.len() as i64);
        let mut barycenter = vec![F::zero(); ambient_dim];
        for v in &vertices {
            for (b, x) in barycenter.iter_mut().zip(v) {
                *b = b.clone() + x;
            }
        }
        let barycenter: Vec<F> = barycenter.into_iter().map(|b| b.checked_div(&n).expect("nonzero")).collect();
        let hull = affine_hull(&vertices);
        let reduced = vertices
            .iter()
            .map(|v| hull.pivots.iter().map(|&p| v[p].clone() - &barycenter[p]).collect())
            .collect();
        VPolytope {
            ambient_dim,
            vertices,
            barycenter,
            basis: hull.basis,
            pivots: hull.pivots,
            reduced,
            matrix_dim: None,
        }
    }

    /// conv(G): each element flattened row-major.
    pub fn from_group(g: &MatGroup<F>) -> Self {
        let points = g.elements().iter().map(|m| m.entries().to_vec()).collect();
        let mut p = VPolytope::from_points(points);
        p.matrix_dim = Some(g.dim());
        p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn full_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<F>] {
        &self.vertices
    }

    pub fn reduced_vertices(&self) -> &[Vec<F>] {
        &self.reduced
    }

    pub fn reduced(&self, i: u32) -> &[F] {
        &self.reduced[i as usize]
    }

    pub fn barycenter(&self) -> &[F] {
        &self.barycenter
    }

    pub fn span_basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn matrix_dim(&self) -> Option<usize> {
        self.matrix_dim
    }

    /// Maps reduced coordinates back to the ambient space.
    pub fn reconstruct(&self, coords: &[F]) -> Vec<F> {
        let mut out = self.barycenter.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.clone() + &(c.clone() * x);
            }
        }
        out
    }

    /// The sub-polytope spanned by the vertices `indices` (sorted), with
    /// vertex `k` of the result being `indices[k]` here.
    pub fn sub_polytope(&self, indices: &[u32]) -> VPolytope<F> {
        VPolytope::from_points(indices.iter().map(|&i| self.reduced[i as usize].clone()).collect())
    }

    /// Value `rhs − ⟨normal, v⟩` for vertex `i`.
    pub fn slack(&self, normal: &[F], rhs: &F, i: u32) -> F {
        rhs.clone() - &dot(normal, self.reduced(i))
    }

    /// Indices of the vertices on which `⟨normal, v⟩ = rhs`.
    pub fn tight_set(&self, normal: &[F], rhs: &F) -> Vec<u32> {
        (0..self.vertices.len() as u32).filter(|&i| self.slack(normal, rhs, i).is_zero()).collect()
    }

    /// True when the vertex set `incidence` spans a hyperplane of the hull.
    pub fn is_facet_set(&self, incidence: &[u32]) -> bool {
        let d = self.full_dim();
        if d == 0 {
            return false;
        }
        let pts: Vec<&[F]> = incidence.iter().map(|&i| self.reduced(i)).collect();
        !pts.is_empty() && affine_rank(&pts) + 1 == d
    }

    /// The facet whose vertex set is `incidence`, normalized. `None` when
    /// the set does not span a hyperplane or the hyperplane is not supporting.
    pub fn facet_from_incidence(&self, incidence: &[u32]) -> Option<Facet<F>> {
        let d = self.full_dim();
        if !self.is_facet_set(incidence) {
            return None;
        }
        // The barycentre is interior, so a facet never passes through it and
        // `⟨a, v⟩ = 1` on the incidence set has a unique solution.
        let rows: Vec<Vec<F>> = incidence.iter().map(|&i| self.reduced(i).to_vec()).collect();
        let m = Matrix::from_row_slices(&rows, d).ok()?;
        let Solution::Consistent(a) = solve(&m, &vec![F::one(); rows.len()]) else {
            return None;
        };
        let facet = self.normalized(a, F::one());
        (facet.incidence == incidence).then_some(facet)
    }

    /// Normalizes `⟨normal, v⟩ ≤ rhs` and attaches its tight set. Returns a
    /// facet with possibly wrong incidence if the inequality is not valid.
    fn normalized(&self, mut normal: Vec<F>, mut rhs: F) -> Facet<F> {
        if !rhs.is_zero() {
            let s = rhs.abs().recip().expect("nonzero");
            normal.iter_mut().for_each(|x| *x = x.clone() * &s);
            rhs = rhs * &s;
        } else {
            F::normalize_ray(&mut normal);
            if let Some(first) = normal.iter().find(|x| !x.is_zero()) {
                let s = first.abs().recip().expect("nonzero");
                normal.iter_mut().for_each(|x| *x = x.clone() * &s);
            }
        }
        let valid = (0..self.vertex_count() as u32).all(|i| self.slack(&normal, &rhs, i).sign() >= 0);
        let incidence = if valid { self.tight_set(&normal, &rhs) } else { Vec::new() };
        Facet { normal, rhs, incidence }
    }

    /// Checks validity, exact incidence and the facet rank condition.
    pub fn check_facet(&self, f: &Facet<F>) -> bool {
        let mut tight = Vec::new();
        for i in 0..self.vertex_count() as u32 {
            match self.slack(&f.normal, &f.rhs, i).sign() {
                -1 => return false,
                0 => tight.push(i),
                _ => {}
            }
        }
        tight == f.incidence && self.is_facet_set(&tight)
    }

    /// A first facet: the optimum of a generic objective over the polar
    /// `{a : ⟨a, v⟩ ≤ 1}` is a vertex of the polar, i.e. a facet.
    pub fn initial_facet(&self, seed: u64) -> Option<Facet<F>> {
        let d = self.full_dim();
        if d == 0 {
            return None;
        }
        let constraints: Vec<Constraint<F>> =
            self.reduced.iter().map(|v| Constraint { coeffs: v.clone(), bound: F::one() }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let objective: Vec<F> = (0..d)
                .map(|_| F::from_rational(Rational::new(rng.gen_range(-1_000_000..=1_000_000), 999_983).expect("nonzero")))
                .collect();
            let res = lp_solve(&constraints, &objective, Sense::Max);
            if res.status != LpStatus::Optimal {
                continue;
            }
            let a = res.witness.expect("optimal witness");
            let facet = self.normalized(a, F::one());
            if self.is_facet_set(&facet.incidence) && self.check_facet(&facet) {
                return Some(facet);
            }
        }
        None
    }

    /// The facet `f` rotated about `ridge` (a ridge of `f`, given as the
    /// tight set of the affine function `g` with `g ≥ 0` on `f`).
    pub fn flip(&self, f: &Facet<F>, g_const: &F, g_lin: &[F]) -> Facet<F> {
        // f(v) = rhs - ⟨n, v⟩ ≥ 0 vanishing on the facet; g(v) = c + ⟨l, v⟩.
        // h = g + μ f with μ = max over v off the facet of −g(v)/f(v).
        let mut mu: Option<F> = None;
        let in_f: HashSet<u32> = f.incidence.iter().copied().collect();
        for i in 0..self.vertex_count() as u32 {
            if in_f.contains(&i) {
                continue;
            }
            let fv = self.slack(&f.normal, &f.rhs, i);
            let gv = g_const.clone() + &dot(g_lin, self.reduced(i));
            let ratio = (-gv).checked_div(&fv).expect("vertex off the facet");
            if mu.as_ref().is_none_or(|m| ratio > *m) {
                mu = Some(ratio);
            }
        }
        let mu = mu.expect("polytope has a vertex off the facet");
        // h(v) = (c + μ rhs) + ⟨l − μ n, v⟩ ≥ 0  ⇔  ⟨μ n − l, v⟩ ≤ c + μ rhs.
        let normal: Vec<F> = g_lin.iter().zip(&f.normal).map(|(l, n)| mu.clone() * n - l).collect();
        let rhs = g_const.clone() + &(mu * &f.rhs);
        self.normalized(normal, rhs)
    }

    /// Flips `f` across the ridge given as a facet of the facet's
    /// sub-polytope: `sub_facet` lives in the coordinates of `sub`, which
    /// must be `self.sub_polytope(&f.incidence)`.
    pub fn flip_across(&self, f: &Facet<F>, sub: &VPolytope<F>, sub_facet: &Facet<F>) -> Facet<F> {
        // Sub coordinates: u(v) = v[pivots] − bary[pivots] (affine in v).
        // g(v) = rhs' − ⟨c, u(v)⟩ = (rhs' + ⟨c, bary_p⟩) − Σ c_k v[p_k].
        let mut g_lin = vec![F::zero(); self.full_dim()];
        let mut g_const = sub_facet.rhs.clone();
        for (k, &p) in sub.pivots.iter().enumerate() {
            let c = &sub_facet.normal[k];
            g_lin[p] = g_lin[p].clone() - c;
            g_const = g_const + &(c.clone() * &sub.barycenter[p]);
        }
        self.flip(f, &g_const, &g_lin)
    }

    /// The facet inequality in ambient coordinates: `⟨w, x⟩ ≤ rhs`.
    pub fn ambient_inequality(&self, f: &Facet<F>) -> (Vec<F>, F) {
        let mut w = vec![F::zero(); self.ambient_dim];
        for (k, &p) in self.pivots.iter().enumerate() {
            w[p] = f.normal[k].clone();
        }
        let rhs = f.rhs.clone() + &dot(&w, &self.barycenter);
        (w, rhs)
    }

    /// For matrix polytopes: the matrix `A` with `Tr(X·A) ≤ rhs` describing
    /// the facet, where `Tr(XA) = Σ X_ij A_ji`.
    pub fn facet_matrix(&self, f: &Facet<F>) -> Option<(Matrix<F>, F)> {
        let n = self.matrix_dim?;
        let (w, rhs) = self.ambient_inequality(f);
        let flat = Matrix::new(n, n, w).ok()?;
        Some((flat.transpose(), rhs))
    }

    /// Reduced-coordinate normal of an ambient functional `⟨w, x⟩`.
    pub fn reduce_functional(&self, w: &[F]) -> Vec<F> {
        self.basis.iter().map(|b| dot(w, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| Rational::from(x)).collect()).collect()
    }

    #[test]
    fn square_initial_facet_and_flip() {
        let p = VPolytope::from_points(pts(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]));
        assert_eq!(p.full_dim(), 2);
        let f = p.initial_facet(1).unwrap();
        assert_eq!(f.incidence.len(), 2);
        assert!(p.check_facet(&f));
        let sub = p.sub_polytope(&f.incidence);
        assert_eq!(sub.full_dim(), 1);
        let ridges = direct_dual_description(&sub).unwrap();
        assert_eq!(ridges.len(), 2);
        for r in &ridges {
            let g = p.flip_across(&f, &sub, r);
            assert!(p.check_facet(&g));
            assert_ne!(g.incidence, f.incidence);
            let shared: Vec<u32> = r.incidence.iter().map(|&k| f.incidence[k as usize]).collect();
            assert!(shared.iter().all(|v| g.incidence.contains(v)));
        }
    }

    #[test]
    fn duplicate_points_are_removed() {
        let p = VPolytope::from_points(pts(&[&[0, 0], &[1, 0], &[0, 0]]));
        assert_eq!(p.vertex_count(), 2);
        assert_eq!(p.full_dim(), 1);
    }

    #[test]
    fn single_point_has_no_facets() {
        let p = VPolytope::from_points(pts(&[&[3, 4]]));
        assert_eq!(p.full_dim(), 0);
        assert!(p.initial_facet(0).is_none());
    }
}
