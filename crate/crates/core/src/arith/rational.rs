use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

/// Exact rational scalar. `BigRational` keeps the denominator positive and the
/// fraction reduced, with zero stored as 0/1.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn rat_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `"n/d"`, the JSON exchange form.
pub fn rat_to_json(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        Some(Rational::from_integer(s.parse().ok()?))
    }
}

/// Coefficient field interface used by the polynomial and Groebner layers.
/// Method names avoid clashing with `std::ops`.
pub trait Coeff: Clone + PartialEq + Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_is_one(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    /// Panics on zero; callers test first.
    fn c_inv(&self) -> Self;
    fn c_div(&self, o: &Self) -> Self {
        self.c_mul(&o.c_inv())
    }
    fn from_rational(q: &Rational) -> Self;
}

impl Coeff for Rational {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn c_is_one(&self) -> bool {
        One::is_one(self)
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_inv(&self) -> Self {
        self.recip()
    }
    fn c_div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
