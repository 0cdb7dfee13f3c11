use super::buchberger::{groebner, is_groebner, reduce, sort_terms, Budget, Terms};
use super::order::{MonomialOrder, TermOrder};
use crate::arith::gcd::{lcm, normalize};
use crate::arith::{MPoly, Mono, RatFunc, Rational};
use crate::error::{Error, Result};
use num_traits::One;
use std::collections::HashMap;

/// Resource and checking options shared by all ideal computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbOptions {
    /// Reduction-step limit per Groebner basis.
    pub budget: u64,
    /// Re-check Buchberger's criterion on every basis computed. On by
    /// default in debug builds, so every basis computed under test is checked.
    pub verify: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { budget: 1_000_000, verify: cfg!(debug_assertions) }
    }
}

/// Ideal of Q(F)[ring] where F is every variable not listed in `ring`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    pub ring: Vec<usize>,
    pub gens: Vec<MPoly>,
}

impl Ideal {
    pub fn new(ring: Vec<usize>, gens: Vec<MPoly>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring, gens }
    }

    pub fn with(&self, extra: &[MPoly]) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().filter(|g| !g.is_zero()).cloned());
        Ideal { ring: self.ring.clone(), gens }
    }

    pub fn is_ring_var(&self, v: usize) -> bool {
        self.ring.contains(&v)
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub ring: Vec<usize>,
    pub order: MonomialOrder,
    perm: Vec<usize>,
    inv: HashMap<usize, usize>,
    tord: TermOrder,
    polys: Vec<Terms<RatFunc>>,
    opts: GbOptions,
}

struct Layout<'a> {
    perm: &'a [usize],
    inv: &'a HashMap<usize, usize>,
    ord: &'a TermOrder,
}

impl Layout<'_> {
    fn to_local(&self, p: &MPoly) -> Terms<RatFunc> {
        let mut groups: HashMap<Mono, Vec<(Mono, Rational)>> = HashMap::new();
        for (m, c) in p.terms() {
            let mut ring_e: Vec<u32> = vec![0; self.perm.len()];
            let mut field = Mono::one();
            for (i, e) in m.iter() {
                match self.inv.get(&i) {
                    Some(&l) => ring_e[l] = e,
                    None => field = field.mul(&Mono::var(i, e)),
                }
            }
            groups.entry(Mono::from_exps(&ring_e)).or_default().push((field, c.clone()));
        }
        let terms = groups.into_iter().map(|(m, t)| (m, RatFunc::from_poly(MPoly::from_terms(t)))).collect();
        sort_terms(terms, self.ord)
    }

    fn global_mono(&self, m: &Mono) -> Mono {
        m.remap(&|i| self.perm[i])
    }

    /// Sum of the terms as one global fraction.
    fn to_global(&self, t: &Terms<RatFunc>) -> RatFunc {
        if t.is_empty() {
            return RatFunc::zero();
        }
        let mut den = MPoly::one();
        for (_, c) in t {
            den = lcm(&den, c.den());
        }
        let mut acc: Vec<(Mono, Rational)> = Vec::new();
        for (m, c) in t {
            let scale = den.div_exact(c.den()).unwrap();
            let gm = self.global_mono(m);
            acc.extend((&scale * c.num()).mul_term(&gm, &Rational::one()).into_terms());
        }
        RatFunc::new(MPoly::from_terms(acc), den).unwrap()
    }
}

impl GroebnerBasis {
    fn layout(&self) -> Layout<'_> {
        Layout { perm: &self.perm, inv: &self.inv, ord: &self.tord }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p[0].0.is_one())
    }

    /// Basis elements with denominators cleared, as integral primitive
    /// polynomials in global variables.
    pub fn polys(&self) -> Vec<MPoly> {
        self.polys.iter().map(|t| normalize(self.layout().to_global(t).num())).collect()
    }

    /// Terms of element `i`: (global ring monomial, coefficient in Q(F)).
    pub fn element_terms(&self, i: usize) -> Vec<(Mono, RatFunc)> {
        self.polys[i].iter().map(|(m, c)| (self.layout().global_mono(m), c.clone())).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.polys.iter().map(|p| self.layout().global_mono(&p[0].0)).collect()
    }

    /// Normal form of `p` as a global fraction (denominators only in F).
    pub fn normal_form(&self, p: &MPoly) -> Result<RatFunc> {
        let l = self.layout();
        let refs: Vec<&Terms<RatFunc>> = self.polys.iter().collect();
        let r = reduce(l.to_local(p), &refs, &self.tord, &mut Budget::new(self.opts.budget))?;
        Ok(l.to_global(&r))
    }

    /// Normal form of a fraction whose denominator is a unit modulo the ideal
    /// only through F; the numerator is reduced.
    pub fn normal_form_rf(&self, f: &RatFunc) -> Result<RatFunc> {
        let n = self.normal_form(f.num())?;
        let d = RatFunc::from_poly(f.den().clone());
        n.div(&d)
    }

    pub fn contains(&self, p: &MPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    fn lead_masks(&self) -> Vec<u64> {
        self.polys.iter().map(|p| p[0].0.iter().fold(0u64, |acc, (i, _)| acc | (1 << i))).collect()
    }

    /// Krull dimension: size of a largest set of ring variables containing no
    /// leading-monomial support. -1 for the unit ideal.
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let n = self.perm.len();
        assert!(n <= 64, "too many ring variables for dimension computation");
        let masks = self.lead_masks();
        let mut best = 0usize;
        fn rec(i: usize, n: usize, set: u64, size: usize, masks: &[u64], best: &mut usize) {
            if size + (n - i) <= *best {
                return;
            }
            if i == n {
                *best = size;
                return;
            }
            let with = set | (1 << i);
            if !masks.iter().any(|&m| m & !with == 0) {
                rec(i + 1, n, with, size + 1, masks, best);
            }
            rec(i + 1, n, set, size, masks, best);
        }
        rec(0, n, 0, 0, &masks, &mut best);
        best as i64
    }

    /// Standard monomials (global indices) when the quotient is finite.
    pub fn standard_monomials(&self) -> Option<Vec<Mono>> {
        if self.is_unit() {
            return Some(Vec::new());
        }
        let n = self.perm.len();
        let leads: Vec<&Mono> = self.polys.iter().map(|p| &p[0].0).collect();
        let mut bound = vec![u32::MAX; n];
        for m in &leads {
            let support: Vec<(usize, u32)> = m.iter().collect();
            if support.len() == 1 {
                let (i, e) = support[0];
                bound[i] = bound[i].min(e);
            }
        }
        if bound.iter().any(|&b| b == u32::MAX) {
            return None;
        }
        let mut out = Vec::new();
        let mut stack = vec![Mono::one()];
        let mut seen = std::collections::HashSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m.clone()) || leads.iter().any(|l| l.divides(&m)) {
                continue;
            }
            for i in 0..n {
                if m.exp(i) + 1 < bound[i] {
                    stack.push(m.mul(&Mono::var(i, 1)));
                }
            }
            out.push(m);
        }
        let mut g: Vec<Mono> = out.iter().map(|m| self.layout().global_mono(m)).collect();
        g.sort();
        Some(g)
    }

    pub fn quotient_dim(&self) -> Option<usize> {
        self.standard_monomials().map(|s| s.len())
    }

    /// True when every generator of `other` lies in this ideal.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal { ring: self.ring.clone(), gens: self.polys() }
    }

    /// Buchberger criterion on the stored basis.
    pub fn verify(&self) -> bool {
        is_groebner(&self.polys, &self.tord)
    }
}

/// Reduced Groebner basis of `ideal` under `order`.
pub fn groebner_basis(ideal: &Ideal, order: &MonomialOrder, opts: &GbOptions) -> Result<GroebnerBasis> {
    let (perm, tord) = order.layout(&ideal.ring);
    let inv: HashMap<usize, usize> = perm.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let layout = Layout { perm: &perm, inv: &inv, ord: &tord };
    let gens: Vec<Terms<RatFunc>> = ideal.gens.iter().map(|g| layout.to_local(g)).collect();
    let polys = groebner(gens.clone(), &tord, &mut Budget::new(opts.budget))?;
    let gb = GroebnerBasis { ring: ideal.ring.clone(), order: order.clone(), perm, inv, tord, polys, opts: *opts };
    if opts.verify {
        if !gb.verify() {
            return Err(Error::EliminationFailed("Buchberger criterion violated".into()));
        }
        for g in &ideal.gens {
            if !gb.contains(g)? {
                return Err(Error::EliminationFailed("generator does not reduce to zero".into()));
            }
        }
    }
    Ok(gb)
}

/// Generators of the ideal intersected with the subring without `front`.
pub fn eliminate(ideal: &Ideal, front: &[usize], opts: &GbOptions) -> Result<Vec<MPoly>> {
    let gb = groebner_basis(ideal, &MonomialOrder::BlockElim(front.to_vec()), opts)?;
    Ok(gb.polys().into_iter().filter(|p| front.iter().all(|&v| !p.has_var(v))).collect())
}

fn max_var(ideal: &Ideal, f: &MPoly) -> usize {
    let mut m = ideal.ring.iter().copied().max().unwrap_or(0);
    for g in ideal.gens.iter().chain([f]) {
        m = m.max(g.width());
    }
    m
}

/// I : f^infinity through t*f - 1 and elimination of t.
pub fn saturate(ideal: &Ideal, f: &MPoly, opts: &GbOptions) -> Result<Ideal> {
    assert!(!f.is_zero(), "saturation by zero");
    if !f.vars().iter().any(|v| ideal.is_ring_var(*v)) {
        // f is a unit of the coefficient field
        return Ok(ideal.clone());
    }
    let t = max_var(ideal, f) + 1;
    let mut ring = ideal.ring.clone();
    ring.push(t);
    let tf = &(&MPoly::var(t) * f) - &MPoly::one();
    let big = Ideal { ring, gens: ideal.gens.iter().cloned().chain([tf]).collect() };
    let gens = eliminate(&big, &[t], opts)?;
    Ok(Ideal { ring: ideal.ring.clone(), gens })
}

pub fn ideal_dimension(ideal: &Ideal, opts: &GbOptions) -> Result<i64> {
    let gb = groebner_basis(ideal, &MonomialOrder::GrevLex, opts)?;
    if gb.is_unit() {
        return Err(Error::EmptyVariety);
    }
    Ok(gb.dimension())
}

pub fn ideal_membership(f: &MPoly, ideal: &Ideal, opts: &GbOptions) -> Result<bool> {
    groebner_basis(ideal, &MonomialOrder::GrevLex, opts)?.contains(f)
}
