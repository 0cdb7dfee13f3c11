//! Factorization over Q sufficient for component splitting: monomial and
//! content extraction, square-free splitting, and a search for factors of
//! degree one in some variable. Remaining factors of degree at most three in
//! a variable are provably irreducible; anything else is reported as an
//! uncertified factor.

use super::gcd::{content_in, gcd, int_primitive, normalize};
use super::mono::Mono;
use super::poly::MPoly;
use super::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Distinct irreducible factors; `certified` is false when some returned
/// factor could not be proven irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub factors: Vec<(MPoly, u32)>,
    pub certified: bool,
}

const MAX_CANDIDATES: usize = 20_000;
const MAX_TRIAL_PRIME: u64 = 1_000_000;

/// Prime factorization of a positive integer by trial division; `None` when
/// the cofactor left after the trial bound is not provably prime.
fn int_factor(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut p = 2u64;
    while p <= MAX_TRIAL_PRIME {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let b = BigInt::from(MAX_TRIAL_PRIME);
        if n > &b * &b {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// All divisors, up to sign, of a polynomial with integral coefficients.
fn divisors(p: &MPoly) -> Option<Vec<MPoly>> {
    let (c, prim) = int_primitive(p);
    if c.is_zero() {
        return None;
    }
    let mut atoms: Vec<(MPoly, u32)> = int_factor(c.numer())?
        .into_iter()
        .map(|(q, e)| (MPoly::constant(Rational::from_integer(q)), e))
        .collect();
    if !prim.is_constant() {
        let f = factor(&prim);
        if !f.certified {
            return None;
        }
        atoms.extend(f.factors);
    }
    let mut out = vec![MPoly::one()];
    for (a, e) in atoms {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = &cur * &a;
                next.push(cur.clone());
            }
        }
        out = next;
        if out.len() > MAX_CANDIDATES {
            return None;
        }
    }
    Some(out)
}

/// Looks for a factor `a*x_v + b`. `Err(())` means the search was too big.
fn linear_factor_in(q: &MPoly, v: usize) -> Result<Option<MPoly>, ()> {
    let cs = q.coeffs_in(v);
    let lc = cs.last().unwrap();
    let tc = &cs[0];
    if tc.is_zero() {
        return Ok(Some(MPoly::var(v)));
    }
    let da = divisors(lc).ok_or(())?;
    let db = divisors(tc).ok_or(())?;
    if da.len() * db.len() * 2 > MAX_CANDIDATES {
        return Err(());
    }
    let xv = MPoly::var(v);
    for a in &da {
        let ax = a * &xv;
        for b in &db {
            for cand in [&ax + b, &ax - b] {
                if q.div_exact(&cand).is_some() {
                    return Ok(Some(normalize(&cand)));
                }
            }
        }
    }
    Ok(None)
}

/// Factorization over Q with multiplicities; numeric content is dropped.
pub fn factor(p: &MPoly) -> Factorization {
    let mut certified = true;
    let mut out: Vec<(MPoly, u32)> = Vec::new();
    if p.is_zero() {
        return Factorization { factors: out, certified };
    }
    let mut p = normalize(p);
    for v in p.vars() {
        let e = p.min_degree_in(v);
        if e > 0 {
            out.push((MPoly::var(v), e));
            p = p.div_exact(&MPoly::term(Mono::var(v, e), Rational::one())).unwrap();
        }
    }
    let mut work = vec![(p, 1u32)];
    'outer: while let Some((q, mult)) = work.pop() {
        if q.is_constant() {
            continue;
        }
        let q = normalize(&q);
        let vars = q.vars();
        for &v in &vars {
            let c = content_in(&q, v);
            if !c.is_constant() {
                let rest = q.div_exact(&c).unwrap();
                work.push((c, mult));
                work.push((rest, mult));
                continue 'outer;
            }
        }
        let v0 = vars[0];
        let d = gcd(&q, &q.diff(v0));
        if !d.is_constant() {
            let rest = q.div_exact(&d).unwrap();
            work.push((d, mult));
            work.push((rest, mult));
            continue;
        }
        if vars.iter().any(|&v| q.degree_in(v) == 1) {
            out.push((q, mult));
            continue;
        }
        let v = *vars.iter().min_by_key(|&&v| (q.degree_in(v), v)).unwrap();
        match linear_factor_in(&q, v) {
            Ok(Some(l)) => {
                let rest = q.div_exact(&l).unwrap();
                work.push((l, mult));
                work.push((rest, mult));
            }
            Ok(None) => {
                if q.degree_in(v) > 3 {
                    certified = false;
                }
                out.push((q, mult));
            }
            Err(()) => {
                certified = false;
                out.push((q, mult));
            }
        }
    }
    // merge duplicates produced by separate branches
    let mut merged: Vec<(MPoly, u32)> = Vec::new();
    for (f, e) in out {
        let f = normalize(&f);
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += e,
            None => merged.push((f, e)),
        }
    }
    merged.sort_by(|a, b| a.0.lm().cmp(&b.0.lm()).then(a.0.len().cmp(&b.0.len())));
    Factorization { factors: merged, certified }
}

/// Distinct irreducible factors of `p` as a polynomial over Q(field vars) in
/// the variables selected by `is_ring`; factors free of ring variables are
/// units and dropped.
pub fn ring_factors(p: &MPoly, is_ring: &dyn Fn(usize) -> bool) -> Factorization {
    let f = factor(p);
    let factors = f.factors.into_iter().filter(|(g, _)| g.vars().iter().any(|&v| is_ring(v))).collect();
    Factorization { factors, certified: f.certified }
}

/// Integer value of a small rational, for diagnostics.
pub fn small_int(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}
