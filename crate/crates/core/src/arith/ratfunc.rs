use super::gcd::{gcd, int_primitive};
use super::poly::MPoly;
use super::rational::{Coeff, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Reduced fraction of polynomials over Q.
///
/// Canonical form: gcd(num, den) = 1, both integral with joint coefficient
/// content 1, and the grevlex-leading coefficient of `den` positive. Zero is
/// 0/1. Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

/// Makes the integral content joint and moves the sign to the numerator.
fn content_normalize(n: MPoly, d: MPoly) -> RatFunc {
    if n.is_zero() {
        return RatFunc::zero();
    }
    let (cn, pn) = int_primitive(&n);
    let (cd, pd) = int_primitive(&d);
    let r = cn / cd;
    let num = pn.scale(&Rational::from_integer(r.numer().clone()));
    let den = pd.scale(&Rational::from_integer(r.denom().clone()));
    RatFunc { num, den }
}

impl RatFunc {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            return content_normalize(num, den);
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            content_normalize(num, den)
        } else {
            content_normalize(num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        content_normalize(p, MPoly::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_poly(MPoly::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn var(i: usize) -> Self {
        RatFunc { num: MPoly::var(i), den: MPoly::one() }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MPoly, MPoly) {
        (self.num, self.den)
    }

    /// Numerator and denominator scaled so the denominator is monic-free of
    /// integer content games: returns (num/den_const, 1) when den is constant.
    pub fn as_poly(&self) -> Option<MPoly> {
        let d = self.den.constant_value()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn has_var(&self, i: usize) -> bool {
        self.num.has_var(i) || self.den.has_var(i)
    }

    pub fn diff(&self, i: usize) -> Self {
        if !self.has_var(i) {
            return Self::zero();
        }
        if self.den.is_constant() {
            return content_normalize(self.num.diff(i), self.den.clone());
        }
        let n = &(&self.num.diff(i) * &self.den) - &(&self.num * &self.den.diff(i));
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) }.renormalized())
    }

    fn renormalized(self) -> Self {
        content_normalize(self.num, self.den)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(content_normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.c_mul(&o.inv()?))
    }

    /// Substitutes for variables; `f(i)` returns `None` to keep x_i.
    pub fn subst(&self, f: &dyn Fn(usize) -> Option<RatFunc>) -> Result<Self> {
        let n = subst_poly(&self.num, f);
        let d = subst_poly(&self.den, f);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.div(&d)
    }

    pub fn subst_map(&self, m: &HashMap<usize, RatFunc>) -> Result<Self> {
        self.subst(&|i| m.get(&i).cloned())
    }

    /// Evaluates at rational values; unassigned variables persist.
    pub fn evaluate(&self, m: &HashMap<usize, Rational>) -> Result<Self> {
        self.subst(&|i| m.get(&i).map(|q| RatFunc::from_rational(q.clone())))
    }

    pub fn remap(&self, f: &dyn Fn(usize) -> usize) -> Self {
        Self::reduce(self.num.remap(f), self.den.remap(f))
    }

    /// Max of numerator and denominator total degree.
    pub fn total_degree(&self) -> i64 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

/// Substitution into a polynomial, staying polynomial when all images are.
pub fn subst_poly(p: &MPoly, f: &dyn Fn(usize) -> Option<RatFunc>) -> RatFunc {
    let vars = p.vars();
    let imgs: HashMap<usize, RatFunc> = vars.iter().filter_map(|&i| f(i).map(|r| (i, r))).collect();
    if imgs.is_empty() {
        return RatFunc::from_poly(p.clone());
    }
    if imgs.values().all(|r| r.is_poly()) {
        let polys: HashMap<usize, MPoly> = imgs.iter().map(|(&i, r)| (i, r.as_poly().unwrap())).collect();
        return RatFunc::from_poly(p.compose(&|i| polys.get(&i).cloned()));
    }
    // common denominator: D = prod den_i^{max deg}
    let mut den = MPoly::one();
    let mut maxdeg: HashMap<usize, u32> = HashMap::new();
    for &i in imgs.keys() {
        maxdeg.insert(i, p.degree_in(i));
    }
    for (&i, r) in &imgs {
        den = &den * &r.den.pow(maxdeg[&i]);
    }
    // each term: c * kept * prod num_i^e den_i^(maxdeg - e)
    let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
    let mut acc: Vec<(super::mono::Mono, Rational)> = Vec::new();
    for (m, c) in p.terms() {
        let mut kept = super::mono::Mono::one();
        let mut prod = MPoly::constant(c.clone());
        for (i, r) in &imgs {
            let e = m.exp(*i);
            let part = cache
                .entry((*i, e))
                .or_insert_with(|| &r.num.pow(e) * &r.den.pow(maxdeg[i] - e))
                .clone();
            prod = &prod * &part;
        }
        for (i, e) in m.iter() {
            if !imgs.contains_key(&i) {
                kept = kept.mul(&super::mono::Mono::var(i, e));
            }
        }
        acc.extend(prod.mul_term(&kept, &Rational::one()).into_terms());
    }
    RatFunc::reduce(MPoly::from_terms(acc), den)
}

impl Coeff for RatFunc {
    fn c_zero() -> Self {
        RatFunc { num: MPoly::zero(), den: MPoly::one() }
    }
    fn c_one() -> Self {
        RatFunc { num: MPoly::one(), den: MPoly::one() }
    }
    fn c_is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn c_is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn c_add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.constant_value(), o.constant_value()) {
            return Self::from_rational(a + b);
        }
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_constant() && o.den.is_constant() {
            let n = &(&self.num * &o.den) + &(&o.num * &self.den);
            return content_normalize(n, &self.den * &o.den);
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            // coprime denominators keep the sum reduced
            let n = &(&self.num * &o.den) + &(&o.num * &self.den);
            return content_normalize(n, &self.den * &o.den);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = &(&self.num * &d1) + &(&o.num * &b1);
        Self::reduce(n, &self.den * &d1)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.c_add(&o.c_neg())
    }
    fn c_mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.constant_value(), o.constant_value()) {
            return Self::from_rational(a * b);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), o.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), o.den.div_exact(&g1).unwrap())
        };
        let (c, b) = if g2.is_one() {
            (o.num.clone(), self.den.clone())
        } else {
            (o.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        content_normalize(&a * &c, &b * &d)
    }
    fn c_neg(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
    fn c_inv(&self) -> Self {
        self.inv().expect("inverse of zero rational function")
    }
    fn from_rational(q: &Rational) -> Self {
        RatFunc::from_rational(q.clone())
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        <Self as Coeff>::c_zero()
    }
    pub fn one() -> Self {
        <Self as Coeff>::c_one()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        <Self as Coeff>::c_is_one(self)
    }
    pub fn add(&self, o: &Self) -> Self {
        self.c_add(o)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.c_sub(o)
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.c_mul(o)
    }
    pub fn neg(&self) -> Self {
        self.c_neg()
    }
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        content_normalize(self.num.scale(q), self.den.clone())
    }
    pub fn is_unit_rational(&self) -> bool {
        self.constant_value().map(|q| !Zero::is_zero(&q) && One::is_one(&q)).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn c(n: i64) -> MPoly {
        MPoly::from_int(n)
    }

    #[test]
    fn normalize_examples() {
        let r = RatFunc::new(&x().pow(2) - &c(1), &x() - &c(1)).unwrap();
        assert_eq!(r.num(), &(&x() + &c(1)));
        assert!(r.den().is_one());
        let r = RatFunc::new(MPoly::zero(), x()).unwrap();
        assert!(r.is_zero() && r.den().is_one());
        let r = RatFunc::new(x().scale(&int(2)), c(4)).unwrap();
        assert_eq!(r.num(), &x());
        assert_eq!(r.den(), &c(2));
        assert_eq!(RatFunc::new(x(), MPoly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn sign_lives_in_numerator() {
        let r = RatFunc::new(x(), -&x().pow(2)).unwrap();
        assert_eq!(r.num(), &c(-1));
        assert_eq!(r.den(), &x());
        let half = RatFunc::from_rational(rat(-1, 2));
        assert_eq!(half.num(), &c(-1));
        assert_eq!(half.den(), &c(2));
    }

    #[test]
    fn field_ops() {
        let a = RatFunc::new(MPoly::one(), x()).unwrap();
        let b = RatFunc::new(MPoly::one(), &x() + &c(1)).unwrap();
        let s = a.add(&b);
        let expect = RatFunc::new(&x().scale(&int(2)) + &c(1), &x().pow(2) + &x()).unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.sub(&b), a);
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn evaluation() {
        let u = MPoly::var(1);
        let f = RatFunc::new(u, x()).unwrap();
        let m: HashMap<usize, Rational> = [(1, int(1))].into_iter().collect();
        assert_eq!(f.evaluate(&m).unwrap(), RatFunc::new(MPoly::one(), x()).unwrap());
        let g = RatFunc::new(&x().pow(2) - &c(1), &x() - &c(1)).unwrap();
        let m: HashMap<usize, Rational> = [(0, int(1))].into_iter().collect();
        assert_eq!(g.evaluate(&m).unwrap(), RatFunc::from_int(2));
        let h = RatFunc::new(MPoly::one(), x()).unwrap();
        let m: HashMap<usize, Rational> = [(0, int(0))].into_iter().collect();
        assert_eq!(h.evaluate(&m), Err(Error::ZeroDenominator));
    }

    #[test]
    fn derivative() {
        let f = RatFunc::new(MPoly::one(), x()).unwrap();
        assert_eq!(f.diff(0), RatFunc::new(c(-1), x().pow(2)).unwrap());
    }
}
