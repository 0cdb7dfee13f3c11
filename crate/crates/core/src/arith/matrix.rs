//! Dense matrices over the rational function field with exact elimination.

use super::ratfunc::RatFunc;
use super::rational::{Coeff, Rational};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

pub type Matrix = Vec<Vec<RatFunc>>;

fn rank_exact(m: &Matrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].c_inv();
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].c_mul(&inv);
            for k in c..cols {
                let t = a[rank][k].c_mul(&f);
                a[r][k] = a[r][k].c_sub(&t);
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_rational(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !Coeff::c_is_zero(&a[r][c])) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].c_inv();
        for r in rank + 1..rows {
            if Coeff::c_is_zero(&a[r][c]) {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..cols {
                let t = &a[rank][k] * &f;
                a[r][k] -= t;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank over the fraction field. A specialization at a fixed pseudo
/// random point is tried first: the specialized rank never exceeds the true
/// one, so reaching the maximum there is a certificate.
pub fn rank(m: &Matrix) -> usize {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let full = rows.min(cols);
    if full == 0 {
        return 0;
    }
    let mut vars: Vec<usize> = m.iter().flatten().flat_map(|f| f.vars()).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let point: HashMap<usize, Rational> =
        vars.iter().map(|&v| (v, Rational::new(rng.gen_range(-97i64..=97).into(), rng.gen_range(1i64..=13).into()))).collect();
    let special: Option<Vec<Vec<Rational>>> = m
        .iter()
        .map(|r| r.iter().map(|f| f.evaluate(&point).ok().and_then(|g| g.constant_value())).collect())
        .collect();
    if let Some(s) = special {
        if rank_rational(&s) == full {
            return full;
        }
    }
    rank_exact(m)
}

pub fn det(m: &Matrix) -> RatFunc {
    let n = m.len();
    let mut a = m.clone();
    let mut d = RatFunc::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return RatFunc::zero() };
        if p != c {
            a.swap(c, p);
            d = d.c_neg();
        }
        d = d.c_mul(&a[c][c]);
        let inv = a[c][c].c_inv();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].c_mul(&inv);
            for k in c..n {
                let t = a[c][k].c_mul(&f);
                a[r][k] = a[r][k].c_sub(&t);
            }
        }
    }
    d
}

/// Solves the square system m x = b.
pub fn solve(m: &Matrix, b: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let n = m.len();
    let mut a: Matrix = m.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularSubstitution)?;
        a.swap(c, p);
        let inv = a[c][c].c_inv();
        for k in c..=n {
            a[c][k] = a[c][k].c_mul(&inv);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in c..=n {
                let t = a[c][k].c_mul(&f);
                a[r][k] = a[r][k].c_sub(&t);
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n].clone()).collect())
}
