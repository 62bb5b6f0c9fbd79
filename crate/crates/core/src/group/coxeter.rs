//! Named finite reflection groups.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{dot, Matrix};
use crate::scalar::{Rational, Scalar, Sqrt2, Sqrt3, Sqrt5};

use super::matgroup::{MatGroup, DEFAULT_ELEMENT_CAP};
use super::GroupError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterName {
    A(usize),
    B(usize),
    D(usize),
    F4,
    H3,
    H4,
    I2(usize),
}

impl fmt::Display for CoxeterName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterName::A(n) => write!(f, "A{n}"),
            CoxeterName::B(n) => write!(f, "B{n}"),
            CoxeterName::D(n) => write!(f, "D{n}"),
            CoxeterName::F4 => write!(f, "F4"),
            CoxeterName::H3 => write!(f, "H3"),
            CoxeterName::H4 => write!(f, "H4"),
            CoxeterName::I2(n) => write!(f, "I2_{n}"),
        }
    }
}

impl FromStr for CoxeterName {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GroupError::UnknownGroup(s.to_string());
        let t = s.trim().to_ascii_uppercase();
        if let Some(rest) = t.strip_prefix("I2") {
            let n = rest
                .strip_prefix('_')
                .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                .ok_or_else(unknown)?;
            return n.parse().map(CoxeterName::I2).map_err(|_| unknown());
        }
        match t.as_str() {
            "F4" => return Ok(CoxeterName::F4),
            "H3" => return Ok(CoxeterName::H3),
            "H4" => return Ok(CoxeterName::H4),
            _ => {}
        }
        let (family, rank) = t.split_at(1.min(t.len()));
        let n: usize = rank.parse().map_err(|_| unknown())?;
        match family {
            "A" if n >= 1 => Ok(CoxeterName::A(n)),
            "B" if n >= 1 => Ok(CoxeterName::B(n)),
            "D" if n >= 2 => Ok(CoxeterName::D(n)),
            _ => Err(unknown()),
        }
    }
}

/// A matrix group over whichever field its realization needs.
#[derive(Clone, Debug)]
pub enum AnyMatGroup {
    Rational(MatGroup<Rational>),
    Sqrt2(MatGroup<Sqrt2>),
    Sqrt3(MatGroup<Sqrt3>),
    Sqrt5(MatGroup<Sqrt5>),
}

/// Runs `$body` with `$g` bound to the concrete group inside an [`AnyMatGroup`].
#[macro_export]
macro_rules! with_group {
    ($any:expr, $g:ident => $body:expr) => {
        match $any {
            $crate::group::AnyMatGroup::Rational($g) => $body,
            $crate::group::AnyMatGroup::Sqrt2($g) => $body,
            $crate::group::AnyMatGroup::Sqrt3($g) => $body,
            $crate::group::AnyMatGroup::Sqrt5($g) => $body,
        }
    };
}

impl AnyMatGroup {
    pub fn order(&self) -> usize {
        with_group!(self, g => g.order())
    }

    pub fn dim(&self) -> usize {
        with_group!(self, g => g.dim())
    }

    pub fn field_name(&self) -> String {
        match self {
            AnyMatGroup::Rational(_) => Rational::field_name(),
            AnyMatGroup::Sqrt2(_) => Sqrt2::field_name(),
            AnyMatGroup::Sqrt3(_) => Sqrt3::field_name(),
            AnyMatGroup::Sqrt5(_) => Sqrt5::field_name(),
        }
    }

    pub fn radicand(&self) -> Option<u32> {
        match self {
            AnyMatGroup::Rational(_) => None,
            AnyMatGroup::Sqrt2(_) => Some(2),
            AnyMatGroup::Sqrt3(_) => Some(3),
            AnyMatGroup::Sqrt5(_) => Some(5),
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn mat<F: Scalar>(rows: Vec<Vec<F>>) -> Matrix<F> {
    Matrix::from_rows(rows).expect("rectangular")
}

fn int_mat(rows: &[&[i64]], denom: i64) -> Matrix<Rational> {
    mat(rows.iter().map(|r| r.iter().map(|&x| q(x, denom)).collect()).collect())
}

fn permutation_matrix(n: usize, images: &[usize]) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for (c, &r) in images.iter().enumerate() {
        m.set(r, c, Rational::one());
    }
    m
}

fn transposition(n: usize, i: usize) -> Matrix<Rational> {
    let mut images: Vec<usize> = (0..n).collect();
    images.swap(i, i + 1);
    permutation_matrix(n, &images)
}

/// Orthogonal reflection in the hyperplane normal to `v`.
pub fn reflection<F: Scalar>(v: &[F]) -> Matrix<F> {
    let n = v.len();
    let two_over = F::from_i64(2).checked_div(&dot(v, v)).expect("nonzero normal");
    let mut m = Matrix::<F>::identity(n);
    for r in 0..n {
        for c in 0..n {
            let x = m.get(r, c).clone() - &(v[r].clone() * &v[c] * &two_over);
            m.set(r, c, x);
        }
    }
    m
}

fn f4_generators() -> Vec<Matrix<Rational>> {
    vec![
        int_mat(&[&[1, -1, 1, 1], &[-1, -1, -1, 1], &[1, 1, -1, 1], &[1, -1, -1, -1]], 2),
        int_mat(&[&[-1, 1, -1, -1], &[1, -1, -1, -1], &[-1, -1, 1, -1], &[1, 1, 1, -1]], 2),
    ]
}

fn h4_generators() -> Vec<Matrix<Sqrt5>> {
    let a = [[1, -2, -1, 0], [2, 2, -2, 2], [1, -2, 0, 1], [0, -2, -1, 1]];
    let b = [[1, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 1], [0, 0, -1, -1]];
    let first = mat((0..4)
        .map(|r| (0..4).map(|c| Sqrt5::new(q(a[r][c], 4), q(b[r][c], 4))).collect())
        .collect());
    let p = [[-1, 0, 0, 0], [0, 0, 0, -1], [0, -1, 0, 0], [0, 0, 1, 0]];
    let second = mat(p.iter().map(|r| r.iter().map(|&x| Sqrt5::from_ints(x, 0)).collect()).collect());
    vec![first, second]
}

/// τ = (1+√5)/2.
fn golden() -> Sqrt5 {
    Sqrt5::new(q(1, 2), q(1, 2))
}

/// Two unit roots of H3 at angle 4π/5, and a third at angle 2π/3 to the second.
fn h3_roots() -> [Vec<Sqrt5>; 3] {
    let half = Sqrt5::from_rational(q(1, 2));
    let tau = golden();
    let r2 = vec![-(tau.clone() * &half), half.clone(), (tau - &Sqrt5::one()) * &half];
    let e1 = vec![Sqrt5::one(), Sqrt5::zero(), Sqrt5::zero()];
    let e2 = vec![Sqrt5::zero(), -Sqrt5::one(), Sqrt5::zero()];
    [e1, r2, e2]
}

fn rotation_reflection<F: Scalar>(cos: F, sin: F) -> Vec<Matrix<F>> {
    let rot = mat(vec![vec![cos.clone(), -sin.clone()], vec![sin, cos]]);
    let refl = mat(vec![vec![F::one(), F::zero()], vec![F::zero(), -F::one()]]);
    vec![rot, refl]
}

/// The named group with the default element cap.
pub fn coxeter_group(name: CoxeterName) -> Result<AnyMatGroup, GroupError> {
    coxeter_group_capped(name, DEFAULT_ELEMENT_CAP)
}

pub fn coxeter_group_capped(name: CoxeterName, cap: usize) -> Result<AnyMatGroup, GroupError> {
    use AnyMatGroup as G;
    Ok(match name {
        CoxeterName::A(n) => {
            let dim = n + 1;
            let gens = (0..n).map(|i| transposition(dim, i)).collect();
            G::Rational(MatGroup::generate(dim, gens, cap)?)
        }
        CoxeterName::B(n) => {
            let mut gens: Vec<_> = (0..n - 1).map(|i| transposition(n, i)).collect();
            let mut flip = Matrix::identity(n);
            flip.set(n - 1, n - 1, -Rational::one());
            gens.push(flip);
            G::Rational(MatGroup::generate(n, gens, cap)?)
        }
        CoxeterName::D(n) => {
            let mut gens: Vec<_> = (0..n - 1).map(|i| transposition(n, i)).collect();
            let mut m = Matrix::identity(n);
            m.set(n - 2, n - 2, Rational::zero());
            m.set(n - 1, n - 1, Rational::zero());
            m.set(n - 2, n - 1, -Rational::one());
            m.set(n - 1, n - 2, -Rational::one());
            gens.push(m);
            G::Rational(MatGroup::generate(n, gens, cap)?)
        }
        CoxeterName::F4 => G::Rational(MatGroup::generate(4, f4_generators(), cap)?),
        CoxeterName::H4 => G::Sqrt5(MatGroup::generate(4, h4_generators(), cap)?),
        CoxeterName::H3 => {
            let gens = h3_roots().iter().map(|r| reflection(r)).collect();
            G::Sqrt5(MatGroup::generate(3, gens, cap)?)
        }
        CoxeterName::I2(n) => match n {
            2 => G::Rational(MatGroup::generate(2, rotation_reflection(q(-1, 1), q(0, 1)), cap)?),
            4 => G::Rational(MatGroup::generate(2, rotation_reflection(q(0, 1), q(1, 1)), cap)?),
            3 => G::Sqrt3(MatGroup::generate(
                2,
                rotation_reflection(Sqrt3::from_rational(q(-1, 2)), Sqrt3::new(q(0, 1), q(1, 2))),
                cap,
            )?),
            6 => G::Sqrt3(MatGroup::generate(
                2,
                rotation_reflection(Sqrt3::from_rational(q(1, 2)), Sqrt3::new(q(0, 1), q(1, 2))),
                cap,
            )?),
            8 => G::Sqrt2(MatGroup::generate(
                2,
                rotation_reflection(Sqrt2::new(q(0, 1), q(1, 2)), Sqrt2::new(q(0, 1), q(1, 2))),
                cap,
            )?),
            5 => {
                // sin(2π/5) is not in Q(√5); use the rank-two parabolic
                // subgroup of H3 instead, which fixes a line.
                let [e1, r2, _] = h3_roots();
                G::Sqrt5(MatGroup::generate(3, vec![reflection(&e1), reflection(&r2)], cap)?)
            }
            _ => return Err(GroupError::UnsupportedParameter(format!("I2_{n}"))),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in ["A3", "B4", "D4", "F4", "H3", "H4", "I2_5"] {
            assert_eq!(s.parse::<CoxeterName>().unwrap().to_string(), s);
        }
        assert_eq!("I2(6)".parse::<CoxeterName>().unwrap(), CoxeterName::I2(6));
        assert!("X9".parse::<CoxeterName>().is_err());
        assert!("A0".parse::<CoxeterName>().is_err());
    }

    #[test]
    fn small_orders() {
        let cases = [
            (CoxeterName::A(2), 6),
            (CoxeterName::A(3), 24),
            (CoxeterName::B(3), 48),
            (CoxeterName::D(4), 192),
            (CoxeterName::H3, 120),
            (CoxeterName::I2(2), 4),
            (CoxeterName::I2(3), 6),
            (CoxeterName::I2(4), 8),
            (CoxeterName::I2(5), 10),
            (CoxeterName::I2(6), 12),
            (CoxeterName::I2(8), 16),
        ];
        for (name, order) in cases {
            assert_eq!(coxeter_group(name).unwrap().order(), order, "{name}");
        }
        assert!(coxeter_group(CoxeterName::I2(7)).is_err());
    }
}
