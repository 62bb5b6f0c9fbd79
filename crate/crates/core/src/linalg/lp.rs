//! Exact two-phase simplex with Bland's rule.
//!
//! Problems are stated over free variables as `max/min ⟨c, x⟩` subject to
//! `⟨a_i, x⟩ ≤ b_i`. They are solved through the dual standard form
//! `min ⟨b, y⟩, Aᵀy = c, y ≥ 0`, which has one row per variable and one
//! column per constraint; the primal optimum is read off the simplex
//! multipliers.

use crate::scalar::Scalar;

use super::dot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// The constraint `⟨coeffs, x⟩ ≤ bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub bound: F,
}

impl<F: Scalar> Constraint<F> {
    pub fn new(coeffs: Vec<F>, bound: F) -> Self {
        Constraint { coeffs, bound }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult<F> {
    pub status: LpStatus,
    /// Objective value at the witness, when optimal.
    pub optimum: Option<F>,
    /// Optimal point, or an improving ray when unbounded.
    pub witness: Option<Vec<F>>,
    /// Nonnegative constraint multipliers `y` with `Σ y_i c_i = ±objective`
    /// and `Σ y_i β_i = ±optimum`, the sign being `−` for minimization.
    pub dual: Option<Vec<F>>,
    /// Constraints whose dual variable is basic at the optimum.
    pub basis: Vec<usize>,
}

/// Result of the standard-form solver `min ⟨c, y⟩, A·y = b, y ≥ 0`.
pub(crate) enum Standard<F> {
    Optimal { y: Vec<F>, multipliers: Vec<F>, basis: Vec<usize> },
    /// Farkas certificate `ρ` with `ρᵀA ≤ 0` and `ρᵀb > 0`.
    Infeasible { certificate: Vec<F> },
    Unbounded,
}

struct Tableau<F> {
    /// `rows × (vars + rows + 1)`: structural columns, artificial columns,
    /// then the right-hand side.
    t: Vec<Vec<F>>,
    basis: Vec<usize>,
    vars: usize,
}

impl<F: Scalar> Tableau<F> {
    fn width(&self) -> usize {
        self.vars + self.t.len()
    }

    fn rhs(&self, r: usize) -> &F {
        &self.t[r][self.width()]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip().expect("nonzero pivot");
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * &inv;
            }
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = x.clone() - &(f.clone() * p);
                }
            }
        }
        self.basis[r] = c;
    }

    /// Simplex multipliers `c_Bᵀ B⁻¹`, read from the artificial columns.
    fn multipliers(&self, cost: &dyn Fn(usize) -> F) -> Vec<F> {
        let m = self.t.len();
        (0..m)
            .map(|j| {
                let col = self.vars + j;
                let mut acc = F::zero();
                for (r, &b) in self.basis.iter().enumerate() {
                    let cb = cost(b);
                    if !cb.is_zero() && !self.t[r][col].is_zero() {
                        acc = acc + &(cb * &self.t[r][col]);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Solves `min ⟨c, y⟩, A·y = b, y ≥ 0` where `a` holds the rows of `A`.
pub(crate) fn solve_standard<F: Scalar>(a: &[Vec<F>], b: &[F], c: &[F]) -> Standard<F> {
    let m = a.len();
    let n = c.len();
    let mut signs = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let s = if b[i].sign() < 0 { -1 } else { 1 };
        signs.push(s);
        let mut tr: Vec<F> = row.iter().map(|x| if s < 0 { -x.clone() } else { x.clone() }).collect();
        for k in 0..m {
            tr.push(if k == i { F::one() } else { F::zero() });
        }
        tr.push(if s < 0 { -b[i].clone() } else { b[i].clone() });
        t.push(tr);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), vars: n };
    let original: Vec<Vec<F>> = tab.t.iter().map(|r| r[..n].to_vec()).collect();

    // Phase 1: minimize the sum of artificials.
    let phase1_cost = |j: usize| if j >= n { F::one() } else { F::zero() };
    run(&mut tab, &original, n + m, &phase1_cost);
    let infeasibility = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .fold(F::zero(), |acc, (r, _)| acc + tab.rhs(r));
    if infeasibility.sign() > 0 {
        let pi = tab.multipliers(&phase1_cost);
        let certificate = pi
            .into_iter()
            .zip(&signs)
            .map(|(p, &s)| if s < 0 { -p } else { p })
            .collect();
        return Standard::Infeasible { certificate };
    }
    // Drive remaining artificials out of the basis where possible.
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[r][j].is_zero() && !tab.basis.contains(&j)) {
                tab.pivot(r, j);
            }
        }
    }
    let phase2_cost = |j: usize| if j < n { c[j].clone() } else { F::zero() };
    if !run(&mut tab, &original, n, &phase2_cost) {
        return Standard::Unbounded;
    }
    let mut y = vec![F::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            y[bv] = tab.rhs(r).clone();
        }
    }
    let pi = tab.multipliers(&phase2_cost);
    let multipliers = pi
        .into_iter()
        .zip(&signs)
        .map(|(p, &s)| if s < 0 { -p } else { p })
        .collect();
    let mut basis: Vec<usize> = tab.basis.iter().copied().filter(|&b| b < n).collect();
    basis.sort_unstable();
    Standard::Optimal { y, multipliers, basis }
}

/// Bland's rule loop using the original (sign-adjusted) columns for reduced
/// costs. Returns false when unbounded.
fn run<F: Scalar>(tab: &mut Tableau<F>, original: &[Vec<F>], allowed: usize, cost: &dyn Fn(usize) -> F) -> bool {
    let n = tab.vars;
    loop {
        let pi = tab.multipliers(cost);
        let mut entering = None;
        for j in 0..allowed {
            if tab.basis.contains(&j) {
                continue;
            }
            let col_dot = if j < n {
                let mut acc = F::zero();
                for (r, p) in pi.iter().enumerate() {
                    if !p.is_zero() && !original[r][j].is_zero() {
                        acc = acc + &(p.clone() * &original[r][j]);
                    }
                }
                acc
            } else {
                pi[j - n].clone()
            };
            if (cost(j) - &col_dot).sign() < 0 {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else {
            return true;
        };
        let mut leave: Option<(usize, F)> = None;
        for r in 0..tab.t.len() {
            let a = &tab.t[r][e];
            if a.sign() <= 0 {
                continue;
            }
            let ratio = tab.rhs(r).clone() / a;
            let better = match &leave {
                None => true,
                Some((lr, best)) => match ratio.cmp(best) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => tab.basis[r] < tab.basis[*lr],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        match leave {
            None => return false,
            Some((r, _)) => tab.pivot(r, e),
        }
    }
}

/// Optimizes `⟨objective, x⟩` over `{x : ⟨c_i, x⟩ ≤ β_i}` with `x` free.
///
/// # Panics
/// Panics when a constraint's length differs from the objective's.
pub fn lp_solve<F: Scalar>(constraints: &[Constraint<F>], objective: &[F], sense: Sense) -> LpResult<F> {
    let n = objective.len();
    assert!(constraints.iter().all(|c| c.coeffs.len() == n), "constraint dimension mismatch");
    let obj: Vec<F> = match sense {
        Sense::Max => objective.to_vec(),
        Sense::Min => objective.iter().map(|x| -x.clone()).collect(),
    };
    // Dual: rows are variables, columns are constraints.
    let at: Vec<Vec<F>> = (0..n)
        .map(|i| constraints.iter().map(|c| c.coeffs[i].clone()).collect())
        .collect();
    let bounds: Vec<F> = constraints.iter().map(|c| c.bound.clone()).collect();
    match solve_standard(&at, &obj, &bounds) {
        Standard::Optimal { y, multipliers, basis } => {
            let x = multipliers;
            let optimum = dot(objective, &x);
            LpResult { status: LpStatus::Optimal, optimum: Some(optimum), witness: Some(x), dual: Some(y), basis }
        }
        Standard::Unbounded => infeasible(),
        Standard::Infeasible { certificate } => {
            // `certificate` is a ray: A·ρ ≤ 0 and ⟨obj, ρ⟩ > 0. It proves
            // unboundedness only if the primal is feasible.
            if primal_feasible(&at, &bounds) {
                LpResult { status: LpStatus::Unbounded, optimum: None, witness: Some(certificate), dual: None, basis: Vec::new() }
            } else {
                infeasible()
            }
        }
    }
}

fn infeasible<F>() -> LpResult<F> {
    LpResult { status: LpStatus::Infeasible, optimum: None, witness: None, dual: None, basis: Vec::new() }
}

/// Farkas test: `{x : A x ≤ b}` is empty iff `min ⟨b, y⟩, Aᵀy = 0, y ≥ 0`
/// is unbounded.
fn primal_feasible<F: Scalar>(at: &[Vec<F>], bounds: &[F]) -> bool {
    let zero = vec![F::zero(); at.len()];
    !matches!(solve_standard(at, &zero, bounds), Standard::Unbounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn bounded_interval() {
        let cs = vec![Constraint::new(vec![r(1)], r(1)), Constraint::new(vec![r(-1)], r(0))];
        let res = lp_solve(&cs, &[r(1)], Sense::Max);
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.optimum, Some(r(1)));
        let res = lp_solve(&cs, &[r(1)], Sense::Min);
        assert_eq!(res.optimum, Some(r(0)));
    }

    #[test]
    fn unbounded_ray() {
        let cs = vec![Constraint::new(vec![r(-1)], r(0))];
        let res = lp_solve(&cs, &[r(1)], Sense::Max);
        assert_eq!(res.status, LpStatus::Unbounded);
        let ray = res.witness.unwrap();
        assert!(ray[0].sign() > 0);
    }

    #[test]
    fn infeasible_system() {
        let cs = vec![Constraint::new(vec![r(1)], r(-1)), Constraint::new(vec![r(-1)], r(0))];
        assert_eq!(lp_solve(&cs, &[r(1)], Sense::Max).status, LpStatus::Infeasible);
        assert_eq!(lp_solve(&cs, &[r(0)], Sense::Max).status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_redundant_rows() {
        // max x + y over x + y <= 2, x - y <= 0, -x <= 5, duplicated row.
        let cs = vec![
            Constraint::new(vec![r(1), r(1)], r(2)),
            Constraint::new(vec![r(1), r(1)], r(2)),
            Constraint::new(vec![r(1), r(-1)], r(0)),
            Constraint::new(vec![r(-1), r(0)], r(5)),
        ];
        let res = lp_solve(&cs, &[r(1), r(1)], Sense::Max);
        assert_eq!(res.optimum, Some(r(2)));
        let x = res.witness.unwrap();
        for c in &cs {
            assert!((c.bound.clone() - dot(&c.coeffs, &x)).sign() >= 0);
        }
    }

    #[test]
    fn degenerate_cross_polytope() {
        // Every sign pattern three times: 48 constraints ±x1±x2±x3±x4 ≤ 1.
        // The maximum of ⟨c, x⟩ over the cross-polytope is max |c_i|.
        let mut cs = Vec::new();
        for _ in 0..3 {
            for m in 0..16 {
                let coeffs = (0..4).map(|i| if m >> i & 1 == 1 { r(-1) } else { r(1) }).collect();
                cs.push(Constraint::new(coeffs, r(1)));
            }
        }
        assert_eq!(cs.len(), 48);
        for obj in [[3, -7, 2, 5], [1, 1, 1, 1], [0, 0, -4, 4], [-2, 9, -9, 0]] {
            let c: Vec<Rational> = obj.iter().map(|&x| r(x)).collect();
            let best = obj.iter().map(|x: &i64| x.abs()).max().unwrap();
            let res = lp_solve(&cs, &c, Sense::Max);
            assert_eq!(res.optimum, Some(r(best)));
            let y = res.dual.unwrap();
            assert!(y.iter().all(|v| v.sign() >= 0));
            let combo: Vec<Rational> = (0..4).map(|i| cs.iter().zip(&y).fold(r(0), |acc, (k, v)| acc + &(k.coeffs[i].clone() * v))).collect();
            assert_eq!(combo, c);
            let res = lp_solve(&cs, &c, Sense::Min);
            assert_eq!(res.optimum, Some(r(-best)));
        }
    }
}
