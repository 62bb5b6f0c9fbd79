//! Exact ordered fields: the rationals and real quadratic extensions Q(√d).

mod quad;
mod rational;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

pub use quad::{QuadExt, Sqrt2, Sqrt3, Sqrt5};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed scalar `{0}`")]
    Parse(String),
    #[error("scalar uses sqrt({found}) but the field is Q(sqrt({expected}))")]
    FieldMismatch { expected: u32, found: u32 },
}

/// An exact ordered field with decidable sign.
///
/// All algorithms in the crate are generic over this trait. Division through
/// the operators panics on a zero divisor; use [`Scalar::checked_div`] when
/// the divisor is not known to be nonzero.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr<Err = ScalarError>
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// The squarefree radicand `d` for Q(√d), `None` for Q.
    const RADICAND: Option<u32>;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    /// -1, 0 or +1.
    fn sign(&self) -> i8;
    fn recip(&self) -> Result<Self, ScalarError>;
    fn to_f64(&self) -> f64;
    /// True when the value lies in Q.
    fn is_rational(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * &rhs.recip()?)
    }

    fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Rescales a vector by a positive factor to a normal form that keeps
    /// entries small. The zero vector is left untouched.
    fn normalize_ray(v: &mut [Self]) {
        if let Some(pivot) = v.iter().find(|x| !x.is_zero()) {
            let scale = pivot.abs().recip().expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = x.clone() * &scale;
            }
        }
    }

    /// Human-readable field name.
    fn field_name() -> String {
        match Self::RADICAND {
            None => "Q".to_string(),
            Some(d) => format!("Q(sqrt {d})"),
        }
    }
}

impl Scalar for Rational {
    const RADICAND: Option<u32> = None;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn sign(&self) -> i8 {
        self.signum()
    }
    fn recip(&self) -> Result<Self, ScalarError> {
        Rational::recip(self)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn is_rational(&self) -> bool {
        true
    }
    fn normalize_ray(v: &mut [Self]) {
        Rational::make_primitive(v)
    }
}

impl<const D: u32> Scalar for QuadExt<D> {
    const RADICAND: Option<u32> = Some(D);

    fn zero() -> Self {
        QuadExt::from_rational(Rational::zero())
    }
    fn one() -> Self {
        QuadExt::from_rational(Rational::one())
    }
    fn from_rational(r: Rational) -> Self {
        QuadExt::from_rational(r)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn sign(&self) -> i8 {
        QuadExt::sign(self)
    }
    fn recip(&self) -> Result<Self, ScalarError> {
        QuadExt::recip(self)
    }
    fn to_f64(&self) -> f64 {
        QuadExt::to_f64(self)
    }
    fn is_rational(&self) -> bool {
        self.sqrt_part().is_zero()
    }
    fn normalize_ray(v: &mut [Self]) {
        // Rational rescaling alone cannot remove unit factors such as powers
        // of the golden ratio, so first divide by the leading magnitude.
        let Some(lead) = v.iter().find(|x| !x.is_zero()) else {
            return;
        };
        if !lead.is_rational() {
            let s = lead.abs().recip().expect("nonzero");
            v.iter_mut().for_each(|x| *x = x.clone() * &s);
        }
        // Clear denominators of both parts jointly.
        let mut parts: Vec<Rational> = Vec::with_capacity(2 * v.len());
        for x in v.iter() {
            parts.push(x.rational_part().clone());
            parts.push(x.sqrt_part().clone());
        }
        if parts.iter().all(|p| p.is_zero()) {
            return;
        }
        // Positive rational scaling, so the direction is preserved.
        Rational::make_primitive(&mut parts);
        for (x, pair) in v.iter_mut().zip(parts.chunks(2)) {
            *x = QuadExt::new(pair[0].clone(), pair[1].clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rejects_sqrt_terms() {
        // Only the plain rational grammar is accepted by Q.
        assert!("1+1*sqrt(5)".parse::<Rational>().is_err());
    }

    #[test]
    fn quad_normalize_ray_keeps_direction() {
        let mut v = vec![Sqrt5::from_ints(0, 0), Sqrt5::new(Rational::new(-1, 2).unwrap(), Rational::new(1, 4).unwrap())];
        let orig = v.clone();
        Sqrt5::normalize_ray(&mut v);
        assert_eq!(v[1], Sqrt5::from_ints(1, 0));
        assert_eq!(v[1].sign(), orig[1].sign());
    }
}
