use super::mono::Mono;
use super::poly::MPoly;
use super::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Splits `p = q * prim` with `prim` integral, coefficient gcd 1 and a positive
/// leading coefficient. The zero polynomial yields (0, 0).
pub fn int_primitive(p: &MPoly) -> (Rational, MPoly) {
    if p.is_zero() {
        return (Rational::zero(), MPoly::zero());
    }
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        l = l.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        let n = c.numer() * (&l / c.denom());
        g = g.gcd(&n);
    }
    if p.lc().is_negative() {
        g = -g;
    }
    let q = Rational::new(g, l);
    let inv = q.recip();
    (q, p.scale(&inv))
}

pub fn normalize(p: &MPoly) -> MPoly {
    int_primitive(p).1
}

/// Content of `p` viewed in Q[others][x_v].
pub fn content_in(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return MPoly::zero();
    }
    let c = content_in(p, v);
    normalize(&p.div_exact(&c).expect("content divides"))
}

/// Pseudo-remainder of `a` by `b` with respect to x_v.
pub fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let n = b.degree_in(v);
    if n == 0 {
        return MPoly::zero();
    }
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= n {
        let d = r.degree_in(v);
        let lr = r.lc_in(v);
        let shifted = &lr.mul_term(&Mono::var(v, d - n), &Rational::one()) * b;
        r = &(&lb * &r) - &shifted;
    }
    r
}

fn mono_gcd_with(m: &Mono, p: &MPoly) -> MPoly {
    let mut g = m.clone();
    for (t, _) in p.terms() {
        g = g.gcd(t);
        if g.is_one() {
            break;
        }
    }
    MPoly::term(g, Rational::one())
}

/// Greatest common divisor over Q, normalized as in [`int_primitive`].
/// gcd(0, 0) = 0.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a.len() == 1 {
        return mono_gcd_with(a.lm().unwrap(), b);
    }
    if b.len() == 1 {
        return mono_gcd_with(b.lm().unwrap(), a);
    }
    let (na, nb) = (normalize(a), normalize(b));
    if na == nb {
        return na;
    }
    let (va, vb) = (na.vars(), nb.vars());
    // a variable present on one side only can be removed through the content
    if let Some(&w) = va.iter().find(|w| !vb.contains(w)) {
        return gcd(&content_in(&na, w), &nb);
    }
    if let Some(&w) = vb.iter().find(|w| !va.contains(w)) {
        return gcd(&na, &content_in(&nb, w));
    }
    // same variable set from here on
    let v = *va.iter().min_by_key(|&&v| (na.degree_in(v).max(nb.degree_in(v)), v)).unwrap();
    let (ca, cb) = (content_in(&na, v), content_in(&nb, v));
    let c = gcd(&ca, &cb);
    let mut p = normalize(&na.div_exact(&ca).unwrap());
    let mut q = normalize(&nb.div_exact(&cb).unwrap());
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        if q.is_zero() {
            break p;
        }
        if q.degree_in(v) == 0 {
            break MPoly::one();
        }
        let r = prem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { primitive_in(&r, v) };
    };
    normalize(&(&c * &primitive_in(&g, v)))
}

pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    normalize(&(&a.div_exact(&g).unwrap() * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }
    fn z() -> MPoly {
        MPoly::var(2)
    }
    fn c(n: i64) -> MPoly {
        MPoly::from_int(n)
    }

    #[test]
    fn primitive_normalization() {
        let p = (&x() * &c(-4)) + c(6);
        let (q, pp) = int_primitive(&p);
        assert_eq!(q, int(-2));
        assert_eq!(pp, &(&x() * &c(2)) - &c(3));
    }

    #[test]
    fn univariate_gcd() {
        let a = &x().pow(2) - &c(1);
        let b = &x().pow(2) - &(&x() * &c(2)) + c(1);
        assert_eq!(gcd(&a, &b), &x() - &c(1));
    }

    #[test]
    fn multivariate_gcd() {
        let g = &(&x() * &y()) + &z();
        let a = &g * &(&x() + &c(1));
        let b = &g * &(&y() - &z());
        assert_eq!(gcd(&a, &b), normalize(&g));
        assert_eq!(gcd(&(&x() * &y()), &(&x() * &z())), x());
        assert!(gcd(&(&x() + &y()), &(&x() - &y())).is_one());
    }

    #[test]
    fn gcd_with_content() {
        let a = &(&y() * &x()) + &y();
        let b = &(&y() * &y()) * &(&x() - &c(1));
        assert_eq!(gcd(&a, &b), y());
    }
}
