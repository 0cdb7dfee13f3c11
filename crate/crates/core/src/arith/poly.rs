use super::mono::Mono;
use super::rational::{Coeff, Rational};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse polynomial; terms are sorted strictly descending in grevlex and
/// never carry a zero coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    terms: Vec<(Mono, C)>,
}

/// Polynomial with rational coefficients over the global variable universe.
pub type MPoly = Poly<Rational>;

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::c_one())
    }

    pub fn constant(c: C) -> Self {
        if c.c_is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(Mono::var(i, 1), C::c_one())] }
    }

    pub fn term(m: Mono, c: C) -> Self {
        if c.c_is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(mut t: Vec<(Mono, C)>) -> Self {
        t.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, C)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = last.1.c_add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.c_is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.c_is_one()
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::c_zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => C::c_zero(),
        }
    }

    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> C {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(C::c_zero)
    }

    pub fn coeff_of(&self, m: &Mono) -> C {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::c_zero(),
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.iter().map(|t| t.0.degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(i)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(i)).min().unwrap_or(0)
    }

    pub fn has_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.0.exp(i) > 0)
    }

    /// Sorted list of variables occurring.
    pub fn vars(&self) -> Vec<usize> {
        let w = self.terms.iter().map(|t| t.0.width()).max().unwrap_or(0);
        let mut seen = vec![false; w];
        for (m, _) in &self.terms {
            for (i, _) in m.iter() {
                seen[i] = true;
            }
        }
        (0..w).filter(|&i| seen[i]).collect()
    }

    pub fn width(&self) -> usize {
        self.terms.iter().map(|t| t.0.width()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.c_is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.c_mul(c))).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &C) -> Self {
        if c.c_is_zero() {
            return Self::zero();
        }
        // multiplying by a monomial preserves grevlex order
        Poly { terms: self.terms.iter().map(|(a, x)| (a.mul(m), x.c_mul(c))).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().c_inv();
        self.scale(&inv)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn diff(&self, i: usize) -> Self {
        let t: Vec<(Mono, C)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                let nm = m.div(&Mono::var(i, 1)).unwrap();
                (nm, c.c_mul(&C::from_rational(&Rational::from_integer(e.into()))))
            })
            .collect();
        Self::from_terms(t)
    }

    /// Coefficients in variable `i`: entry k is the coefficient of x_i^k.
    pub fn coeffs_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Mono, C)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            // removing one variable can reorder terms, so rebuild via from_terms
            buckets[m.exp(i) as usize].push((m.without(i), c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    pub fn from_coeffs_in(i: usize, cs: &[Self]) -> Self {
        let mut t = Vec::new();
        for (k, c) in cs.iter().enumerate() {
            let xm = Mono::var(i, k as u32);
            for (m, a) in &c.terms {
                t.push((m.mul(&xm), a.clone()));
            }
        }
        Self::from_terms(t)
    }

    /// Leading coefficient with respect to variable `i`.
    pub fn lc_in(&self, i: usize) -> Self {
        let d = self.degree_in(i);
        Self::from_terms(
            self.terms.iter().filter(|(m, _)| m.exp(i) == d).map(|(m, c)| (m.without(i), c.clone())).collect(),
        )
    }

    /// Substitutes polynomials for variables; `f(i)` returns `None` to keep x_i.
    pub fn compose(&self, f: &dyn Fn(usize) -> Option<Self>) -> Self {
        let mut cache: std::collections::HashMap<(usize, u32), Self> = Default::default();
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Mono::one();
            let mut prod = Self::constant(c.clone());
            for (i, e) in m.iter() {
                match f(i) {
                    Some(img) => {
                        let p = cache.entry((i, e)).or_insert_with(|| img.pow(e)).clone();
                        prod = &prod * &p;
                    }
                    None => kept = kept.mul(&Mono::var(i, e)),
                }
            }
            acc = &acc + &prod.mul_term(&kept, &C::c_one());
        }
        acc
    }

    pub fn remap(&self, f: &dyn Fn(usize) -> usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.remap(f), c.clone())).collect())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: &dyn Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Multivariate division by a single divisor in grevlex; returns (q, r).
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = (d.terms[0].0.clone(), d.terms[0].1.clone());
        let mut p = self.clone();
        let mut q = Vec::new();
        let mut r = Vec::new();
        while let Some((m, c)) = p.terms.first().cloned() {
            if let Some(qm) = m.div(&dm) {
                let qc = c.c_div(&dc);
                p = &p - &d.mul_term(&qm, &qc);
                q.push((qm, qc));
            } else {
                r.push((m, c));
                p.terms.remove(0);
            }
        }
        (Self::from_terms(q), Self::from_terms(r))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.c_inv()));
        }
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.c_neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.c_sub(&b[j].1) } else { a[i].1.c_add(&b[j].1) };
                    if !c.c_is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { t.1.c_neg() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }
}

impl MPoly {
    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }
}

impl<'a, C: Coeff> Add for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: Self) -> Poly<C> {
        self.merge(o, false)
    }
}

impl<'a, C: Coeff> Sub for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: Self) -> Poly<C> {
        self.merge(o, true)
    }
}

impl<'a, C: Coeff> Neg for &'a Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.c_neg())).collect() }
    }
}

impl<'a, C: Coeff> Mul for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: Self) -> Poly<C> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                t.push((a.mul(b), x.c_mul(y)));
            }
        }
        Poly::from_terms(t)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, o: Self) -> Poly<C> {
                (&self).$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}
