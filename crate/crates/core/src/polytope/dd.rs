//! Facet enumeration by the double description method.

use rayon::prelude::*;

use crate::linalg::{dot, inverse, rank_of_rows, Matrix};
use crate::scalar::Scalar;

use super::{Facet, VPolytope};

pub const DEFAULT_RAY_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DdError {
    #[error("double description exceeded {0} intermediate rays")]
    RayCap(usize),
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn and_assign(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= b);
    }
    fn and_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn ones(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| (w * 64 + b) as u32)
        })
    }
}

struct Ray<F> {
    y: Vec<F>,
    zeros: Bits,
}

/// Transposes the zero sets: entry `v` holds the rays vanishing on vertex `v`.
fn zero_columns<F>(rays: &[Ray<F>], n: usize) -> Vec<Bits> {
    let mut col = vec![Bits::new(rays.len()); n];
    for (k, r) in rays.iter().enumerate() {
        for v in r.zeros.ones() {
            col[v as usize].set(k);
        }
    }
    col
}

/// All facets of `p`, sorted by incidence.
///
/// Works on the cone `{y : y₀ + ⟨v, y'⟩ ≥ 0 for every vertex v}`, whose
/// extreme rays are the facets `⟨−y', x⟩ ≤ y₀`.
pub fn direct_dual_description<F: Scalar>(p: &VPolytope<F>) -> Result<Vec<Facet<F>>, DdError> {
    direct_dual_description_capped(p, DEFAULT_RAY_CAP)
}

pub fn direct_dual_description_capped<F: Scalar>(p: &VPolytope<F>, cap: usize) -> Result<Vec<Facet<F>>, DdError> {
    let d = p.full_dim();
    let n = p.vertex_count();
    if d == 0 {
        return Ok(Vec::new());
    }
    // Rows are scaled to primitive integer vectors; a positive factor
    // changes neither signs nor zero sets, and keeps arithmetic on the
    // integer fast path.
    let rows_all: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut r = Vec::with_capacity(d + 1);
            r.push(F::one());
            r.extend(p.reduced_vertices()[i].iter().cloned());
            F::normalize_ray(&mut r);
            r
        })
        .collect();
    let row = |i: usize| -> Vec<F> { rows_all[i].clone() };

    // Initial simplex: the first d+1 affinely independent vertices.
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<F>> = Vec::new();
    for i in 0..n {
        rows.push(row(i));
        if rank_of_rows(&rows, d + 1) == rows.len() {
            chosen.push(i);
            if chosen.len() == d + 1 {
                break;
            }
        } else {
            rows.pop();
        }
    }
    let m = Matrix::from_row_slices(&rows, d + 1).expect("square");
    let minv = inverse(&m).expect("affinely independent vertices");
    let mut rays: Vec<Ray<F>> = (0..=d)
        .map(|j| {
            let mut y: Vec<F> = (0..=d).map(|r| minv.get(r, j).clone()).collect();
            F::normalize_ray(&mut y);
            let mut zeros = Bits::new(n);
            for (k, &c) in chosen.iter().enumerate() {
                if k != j {
                    zeros.set(c);
                }
            }
            Ray { y, zeros }
        })
        .collect();

    let mut is_chosen = vec![false; n];
    chosen.iter().for_each(|&c| is_chosen[c] = true);
    for i in (0..n).filter(|&i| !is_chosen[i]) {
        let h = row(i);
        let vals: Vec<F> = rays.iter().map(|r| dot(&h, &r.y)).collect();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (k, v) in vals.iter().enumerate() {
            match v.sign() {
                1 => pos.push(k),
                -1 => neg.push(k),
                _ => {}
            }
        }
        if neg.is_empty() {
            for (k, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    rays[k].zeros.set(i);
                }
            }
            continue;
        }
        // For every inserted vertex, the rays vanishing on it.
        let col = zero_columns(&rays, n);
        let new_rays: Vec<Ray<F>> = pos
            .par_iter()
            .flat_map_iter(|&a| {
                let (rays, vals, col) = (&rays, &vals, &col);
                neg.iter().filter_map(move |&b| {
                    if rays[a].zeros.and_count(&rays[b].zeros) + 1 < d {
                        return None;
                    }
                    let common = rays[a].zeros.and(&rays[b].zeros);
                    // Adjacent iff no other ray vanishes on `common`.
                    let mut ones = common.ones();
                    let first = ones.next()? as usize;
                    let mut acc = col[first].clone();
                    let mut adjacent = acc.count() == 2;
                    for v in ones {
                        if adjacent {
                            break;
                        }
                        acc.and_assign(&col[v as usize]);
                        adjacent = acc.count() == 2;
                    }
                    if !adjacent {
                        return None;
                    }
                    // vals[a] > 0 > vals[b]: vals[a]·y_b − vals[b]·y_a vanishes on h.
                    let mut y: Vec<F> = rays[b]
                        .y
                        .iter()
                        .zip(&rays[a].y)
                        .map(|(yb, ya)| vals[a].clone() * yb - &(vals[b].clone() * ya))
                        .collect();
                    F::normalize_ray(&mut y);
                    let mut zeros = common;
                    zeros.set(i);
                    Some(Ray { y, zeros })
                })
            })
            .collect();
        let mut kept: Vec<Ray<F>> = Vec::with_capacity(rays.len() + new_rays.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            match vals[k].sign() {
                -1 => continue,
                0 => r.zeros.set(i),
                _ => {}
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        if kept.len() > cap {
            return Err(DdError::RayCap(cap));
        }
        rays = kept;
    }

    let mut facets: Vec<Facet<F>> = rays
        .into_iter()
        .map(|r| {
            let y0 = r.y[0].clone();
            let normal: Vec<F> = r.y[1..].iter().map(|x| -x.clone()).collect();
            let incidence: Vec<u32> = r.zeros.ones().collect();
            p.normalized_with_incidence(normal, y0, incidence)
        })
        .collect();
    facets.sort_by(|a, b| a.incidence.cmp(&b.incidence));
    Ok(facets)
}

impl<F: Scalar> VPolytope<F> {
    fn normalized_with_incidence(&self, mut normal: Vec<F>, mut rhs: F, incidence: Vec<u32>) -> Facet<F> {
        if !rhs.is_zero() {
            let s = rhs.abs().recip().expect("nonzero");
            normal.iter_mut().for_each(|x| *x = x.clone() * &s);
            rhs = rhs * &s;
        } else if let Some(first) = normal.iter().find(|x| !x.is_zero()) {
            let s = first.abs().recip().expect("nonzero");
            normal.iter_mut().for_each(|x| *x = x.clone() * &s);
        }
        Facet { normal, rhs, incidence }
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
    fn square_has_four_edges() {
        let p = VPolytope::from_points(pts(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]]));
        let f = direct_dual_description(&p).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|x| x.incidence.len() == 2 && p.check_facet(x)));
    }

    #[test]
    fn cross_polytope_and_cube() {
        let cross = VPolytope::from_points(pts(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]));
        let f = direct_dual_description(&cross).unwrap();
        assert_eq!(f.len(), 8);
        assert!(f.iter().all(|x| x.incidence.len() == 3));
        let mut cube = Vec::new();
        for m in 0..8i64 {
            cube.push(vec![Rational::from(2 * (m & 1) - 1), Rational::from((m & 2) - 1), Rational::from((m & 4) / 2 - 1)]);
        }
        let f = direct_dual_description(&VPolytope::from_points(cube)).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.incidence.len() == 4));
    }

    #[test]
    fn non_full_dimensional_input() {
        // A triangle in the plane z = 1 inside R³.
        let p = VPolytope::from_points(pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(p.full_dim(), 2);
        assert_eq!(direct_dual_description(&p).unwrap().len(), 3);
    }

    #[test]
    fn segment() {
        let p = VPolytope::from_points(pts(&[&[0], &[2], &[1]]));
        let f = direct_dual_description(&p).unwrap();
        assert_eq!(f.iter().map(|x| x.incidence.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
    }
}
