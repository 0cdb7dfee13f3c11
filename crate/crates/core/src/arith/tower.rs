//! Arithmetic in Q(h)[alpha]/(m(alpha)), with elements stored in the power
//! basis 1, alpha, ..., alpha^(n-1).

use super::poly::MPoly;
use super::ratfunc::RatFunc;
use super::rational::Coeff;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q(h), lowest degree first, no trailing zeros.
pub type UPoly = Vec<RatFunc>;

pub fn utrim(p: &mut UPoly) {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
}

pub fn udeg(p: &UPoly) -> i64 {
    p.len() as i64 - 1
}

pub fn uadd(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut r: UPoly = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.c_add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            _ => unreachable!(),
        })
        .collect();
    utrim(&mut r);
    r
}

pub fn uscale(a: &UPoly, c: &RatFunc) -> UPoly {
    let mut r: UPoly = a.iter().map(|x| x.c_mul(c)).collect();
    utrim(&mut r);
    r
}

pub fn usub(a: &UPoly, b: &UPoly) -> UPoly {
    uadd(a, &b.iter().map(|x| x.c_neg()).collect())
}

pub fn umul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = r[i + j].c_add(&x.c_mul(y));
        }
    }
    utrim(&mut r);
    r
}

/// Euclidean division over the field Q(h).
pub fn udivrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.clone();
    utrim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].c_inv();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![RatFunc::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1].c_mul(&inv);
        for (j, y) in b.iter().enumerate() {
            r[k + j] = r[k + j].c_sub(&c.c_mul(y));
        }
        q[k] = c;
        r.pop();
        utrim(&mut r);
    }
    utrim(&mut q);
    (q, r)
}

/// Returns (g, s) with s*a = g mod b and g = gcd(a, b) made monic.
pub fn uext_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let (mut r0, mut r1) = (b.clone(), a.clone());
    let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![RatFunc::one()]);
    utrim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = udivrem(&r0, &r1);
        let s = usub(&s0, &umul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.is_empty() {
        return (r0, s0);
    }
    let inv = r0.last().unwrap().c_inv();
    (uscale(&r0, &inv), uscale(&s0, &inv))
}

/// Splits an MPoly into its coefficients in variable `v`.
pub fn to_upoly(p: &MPoly, v: usize) -> UPoly {
    let mut r: UPoly = p.coeffs_in(v).into_iter().map(RatFunc::from_poly).collect();
    utrim(&mut r);
    r
}

pub fn ratfunc_to_upoly(f: &RatFunc, v: usize) -> Result<UPoly> {
    if f.den().has_var(v) {
        return Err(Error::Precondition("denominator depends on the algebraic generator".into()));
    }
    let d = RatFunc::from_poly(f.den().clone()).c_inv();
    Ok(uscale(&to_upoly(f.num(), v), &d))
}

pub fn from_upoly(p: &UPoly, v: usize) -> RatFunc {
    let mut acc = RatFunc::zero();
    let x = RatFunc::var(v);
    for c in p.iter().rev() {
        acc = acc.c_mul(&x).c_add(c);
    }
    acc
}

/// The algebraic generator alpha with its monic minimal polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaGen {
    pub var: usize,
    /// Coefficients of the monic minimal polynomial, lowest first; length n+1.
    pub min_poly: UPoly,
}

impl AlphaGen {
    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }
}

/// Q subset Q(h) subset Q(h)(alpha).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldTower {
    /// Generator variables h_1..h_k with their definitions in the parameters.
    pub transcendentals: Vec<(usize, RatFunc)>,
    pub alpha: Option<AlphaGen>,
    /// Each original parameter in the power basis over Q(h).
    pub params: Vec<(usize, UPoly)>,
}

impl FieldTower {
    pub fn degree(&self) -> usize {
        self.alpha.as_ref().map(|a| a.degree()).unwrap_or(1)
    }

    fn alpha_gen(&self) -> Result<&AlphaGen> {
        self.alpha.as_ref().ok_or(Error::NoAlgebraicGenerator)
    }

    /// Reduces a power-basis coefficient vector modulo the minimal polynomial.
    /// Without an algebraic generator the basis is {1} and nothing reduces.
    pub fn reduce_coeffs(&self, p: &UPoly) -> Result<UPoly> {
        match &self.alpha {
            Some(a) => Ok(udivrem(p, &a.min_poly).1),
            None => Ok(p.clone()),
        }
    }

    pub fn mul(&self, a: &UPoly, b: &UPoly) -> Result<UPoly> {
        self.reduce_coeffs(&umul(a, b))
    }

    /// Inverse in Q(h)(alpha) by the extended Euclidean algorithm.
    pub fn inv(&self, a: &UPoly) -> Result<UPoly> {
        if a.len() == 1 {
            return Ok(vec![a[0].c_inv()]);
        }
        let m = &self.alpha_gen()?.min_poly;
        let (g, s) = uext_gcd(a, m);
        if g.len() != 1 {
            return Err(Error::ZeroDenominator);
        }
        self.reduce_coeffs(&s)
    }
}

impl FieldTower {
    fn param_image(&self, v: usize) -> Option<&UPoly> {
        self.params.iter().find(|(p, _)| *p == v).map(|(_, e)| e)
    }

    fn pow(&self, a: &UPoly, mut k: u32) -> Result<UPoly> {
        let mut acc: UPoly = vec![RatFunc::one()];
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Image of a polynomial under c -> its power-basis element and, through
    /// `extra`, any further variables (e.g. states written in the basis).
    /// Other variables stay in the coefficients.
    pub fn poly_element(&self, p: &MPoly, extra: &dyn Fn(usize) -> Option<UPoly>) -> Result<UPoly> {
        let mut acc: UPoly = Vec::new();
        let mut cache: std::collections::HashMap<(usize, u32), UPoly> = Default::default();
        for (m, c) in p.terms() {
            let mut t: UPoly = vec![RatFunc::from_rational(c.clone())];
            let mut scalar = super::mono::Mono::one();
            for (v, e) in m.iter() {
                let img = extra(v).or_else(|| self.param_image(v).cloned());
                match img {
                    Some(x) => {
                        let xe = match cache.get(&(v, e)) {
                            Some(y) => y.clone(),
                            None => {
                                let y = self.pow(&x, e)?;
                                cache.insert((v, e), y.clone());
                                y
                            }
                        };
                        t = self.mul(&t, &xe)?;
                    }
                    None => scalar = scalar.mul(&super::mono::Mono::var(v, e)),
                }
            }
            if !scalar.is_one() {
                t = uscale(&t, &RatFunc::from_poly(MPoly::term(scalar, num_traits::One::one())));
            }
            acc = uadd(&acc, &t);
        }
        Ok(acc)
    }

    /// Image of a fraction: numerator times the inverse of the denominator.
    pub fn element(&self, f: &RatFunc, extra: &dyn Fn(usize) -> Option<UPoly>) -> Result<UPoly> {
        let n = self.poly_element(f.num(), extra)?;
        let d = self.poly_element(f.den(), extra)?;
        if d.is_empty() {
            return Err(Error::ZeroDenominator);
        }
        if d.len() == 1 {
            let inv = d[0].c_inv();
            return Ok(uscale(&n, &inv));
        }
        self.mul(&n, &self.inv(&d)?)
    }
}

/// Reduces `p` (alpha a variable, coefficients rational in h) to alpha-degree
/// below n. Ring homomorphism from Q(h)[alpha] onto the power basis.
pub fn reduce_mod_minpoly(p: &RatFunc, tower: &FieldTower) -> Result<RatFunc> {
    let a = tower.alpha_gen()?;
    let up = ratfunc_to_upoly(p, a.var)?;
    Ok(from_upoly(&tower.reduce_coeffs(&up)?, a.var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::text::parse_expr;

    fn tower(minpoly: &str) -> (FieldTower, Vec<&'static str>) {
        let names = vec!["alpha", "h", "p1", "p3"];
        let ns = names.clone();
        let m = parse_expr(minpoly, &move |s| ns.iter().position(|n| *n == s)).unwrap();
        let up = ratfunc_to_upoly(&m, 0).unwrap();
        (FieldTower { alpha: Some(AlphaGen { var: 0, min_poly: up }), ..Default::default() }, names)
    }

    fn p(s: &str, names: &[&str]) -> RatFunc {
        parse_expr(s, &|x| names.iter().position(|n| *n == x)).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let (t, n) = tower("alpha^2 - 2");
        assert_eq!(reduce_mod_minpoly(&p("alpha^2", &n), &t).unwrap(), RatFunc::from_int(2));
        let (t, n) = tower("alpha^3 - h");
        assert_eq!(reduce_mod_minpoly(&p("alpha^3", &n), &t).unwrap(), p("h", &n));
        let (t, n) = tower("alpha^2 - (p1+p3)*alpha + p1*p3");
        assert_eq!(reduce_mod_minpoly(&p("alpha^2", &n), &t).unwrap(), p("(p1+p3)*alpha - p1*p3", &n));
    }

    #[test]
    fn no_alpha() {
        let t = FieldTower::default();
        assert_eq!(reduce_mod_minpoly(&RatFunc::one(), &t), Err(Error::NoAlgebraicGenerator));
    }

    #[test]
    fn inverse() {
        let (t, n) = tower("alpha^3 - h");
        let a = ratfunc_to_upoly(&p("alpha + 1", &n), 0).unwrap();
        let ai = t.inv(&a).unwrap();
        let one = t.mul(&a, &ai).unwrap();
        assert_eq!(one, vec![RatFunc::one()]);
    }
}
