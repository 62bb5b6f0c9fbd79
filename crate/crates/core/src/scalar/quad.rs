use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::{Rational, ScalarError};

const fn is_squarefree(d: u32) -> bool {
    let mut p = 2u32;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Element `a + b·√D` of the real quadratic field Q(√D).
///
/// `D` is fixed per type so that values from different fields cannot be
/// mixed; it must be squarefree and at least 2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<const D: u32> {
    a: Rational,
    b: Rational,
}

/// Q(√5), the field needed for the H3 and H4 groups.
pub type Sqrt5 = QuadExt<5>;
/// Q(√3), used by the dihedral groups of order 6 and 12.
pub type Sqrt3 = QuadExt<3>;
/// Q(√2), used by the dihedral group of order 16.
pub type Sqrt2 = QuadExt<2>;

impl<const D: u32> QuadExt<D> {
    const VALID_RADICAND: () = assert!(D >= 2 && is_squarefree(D), "radicand must be squarefree and >= 2");

    pub fn new(a: Rational, b: Rational) -> Self {
        let () = Self::VALID_RADICAND;
        QuadExt { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self::new(a, Rational::zero())
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(Rational::from_integer(a), Rational::from_integer(b))
    }

    /// `√D` itself.
    pub fn sqrt_d() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand() -> u32 {
        D
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a² − D·b²`.
    pub fn norm(&self) -> Rational {
        &self.a.square() - &(&Rational::from_integer(D as i64) * &self.b.square())
    }

    /// Exact sign of `a + b√D`.
    ///
    /// When `a` and `b` have opposite strict signs, `a + b√D` and its
    /// conjugate `a − b√D` multiply to the norm, and the conjugate's sign is
    /// that of `a`. So the sign is `sign(a) · sign(a² − D·b²)`.
    pub fn sign(&self) -> i8 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        match (sa, sb) {
            (0, 0) => 0,
            _ if sa >= 0 && sb >= 0 => 1,
            _ if sa <= 0 && sb <= 0 => -1,
            _ => sa * self.norm().signum(),
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // The norm of a nonzero element is nonzero because √D is irrational.
        let n = self.norm().recip()?;
        Ok(Self::new(&self.a * &n, -(&self.b * &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (D as f64).sqrt()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        Self::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        Self::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Self::from_rational(&self.a * &rhs.a);
        }
        let d = Rational::from_integer(D as i64);
        let a = &(&self.a * &rhs.a) + &(&d * &(&self.b * &rhs.b));
        let b = &(&self.a * &rhs.b) + &(&rhs.a * &self.b);
        Self::new(a, b)
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("quadratic field division by zero")
    }
}

impl<const D: u32> Ord for QuadExt<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        self.sub_ref(other).sign().cmp(&0)
    }
}

impl<const D: u32> PartialOrd for QuadExt<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const D: u32> fmt::Display for QuadExt<D> {
    /// Canonical form: `a`, `b*sqrt(D)` or `a±b*sqrt(D)` with reduced
    /// fractions and no spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if self.b.signum() > 0 {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt({})", self.b, D)
    }
}

impl<const D: u32> fmt::Debug for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One signed term of the scalar grammar: either `p/q` or `p/q*sqrt(d)`.
pub(crate) struct Term {
    pub coeff: Rational,
    pub radicand: Option<u32>,
}

/// Splits text of the form `[±] term {± term}` into terms, where a term is
/// `p`, `p/q`, `p*sqrt(d)` or `p/q*sqrt(d)`. Whitespace is ignored.
pub(crate) fn parse_terms(text: &str) -> Result<Vec<Term>, ScalarError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ScalarError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    pieces.push(&s[start..]);
    let mut terms = Vec::new();
    for piece in pieces {
        let (coeff, radicand) = match piece.split_once('*') {
            Some((c, r)) => {
                let inner = r
                    .strip_prefix("sqrt(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                if inner.is_empty() || !inner.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                (c, Some(inner.parse::<u32>().map_err(|_| bad())?))
            }
            None => (piece, None),
        };
        let coeff: Rational = coeff.parse().map_err(|e| match e {
            ScalarError::DivisionByZero => ScalarError::DivisionByZero,
            _ => bad(),
        })?;
        terms.push(Term { coeff, radicand });
    }
    Ok(terms)
}

impl<const D: u32> FromStr for QuadExt<D> {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut a: Option<Rational> = None;
        let mut b: Option<Rational> = None;
        for term in parse_terms(s)? {
            let slot = match term.radicand {
                None => &mut a,
                Some(d) if d == D => &mut b,
                Some(d) => return Err(ScalarError::FieldMismatch { expected: D, found: d }),
            };
            if slot.is_some() {
                return Err(ScalarError::Parse(s.to_string()));
            }
            *slot = Some(term.coeff);
        }
        Ok(Self::new(
            a.unwrap_or_else(Rational::zero),
            b.unwrap_or_else(Rational::zero),
        ))
    }
}

macro_rules! forward_quad_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl<const D: u32> $trait<&QuadExt<D>> for &QuadExt<D> {
            type Output = QuadExt<D>;
            fn $method(self, rhs: &QuadExt<D>) -> QuadExt<D> {
                self.$imp(rhs)
            }
        }
        impl<const D: u32> $trait<QuadExt<D>> for QuadExt<D> {
            type Output = QuadExt<D>;
            fn $method(self, rhs: QuadExt<D>) -> QuadExt<D> {
                (&self).$imp(&rhs)
            }
        }
        impl<const D: u32> $trait<&QuadExt<D>> for QuadExt<D> {
            type Output = QuadExt<D>;
            fn $method(self, rhs: &QuadExt<D>) -> QuadExt<D> {
                (&self).$imp(rhs)
            }
        }
    };
}

forward_quad_binop!(Add, add, add_ref);
forward_quad_binop!(Sub, sub, sub_ref);
forward_quad_binop!(Mul, mul, mul_ref);
forward_quad_binop!(Div, div, div_ref);

impl<const D: u32> Neg for QuadExt<D> {
    type Output = QuadExt<D>;
    fn neg(self) -> QuadExt<D> {
        Self::new(-self.a, -self.b)
    }
}

impl<const D: u32> Neg for &QuadExt<D> {
    type Output = QuadExt<D>;
    fn neg(self) -> QuadExt<D> {
        QuadExt::new(-&self.a, -&self.b)
    }
}
