//! Buchberger's algorithm with sugar or normal pair selection and the
//! Gebauer-Moeller criteria, over any coefficient field. Polynomials are term
//! lists sorted descending in the supplied order.

use super::order::TermOrder;
use crate::arith::{Coeff, Mono};
use crate::error::{Error, Result};
use std::cmp::Ordering;

pub type Terms<C> = Vec<(Mono, C)>;

/// Counts reduction steps; exceeding the limit aborts the computation.
#[derive(Clone, Debug)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    #[inline]
    fn step(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExhausted(self.limit))
        } else {
            Ok(())
        }
    }
}

pub fn sort_terms<C: Coeff>(mut t: Terms<C>, ord: &TermOrder) -> Terms<C> {
    t.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    let mut out: Terms<C> = Vec::with_capacity(t.len());
    for (m, c) in t {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 = last.1.c_add(&c),
            _ => out.push((m, c)),
        }
    }
    out.retain(|t| !t.1.c_is_zero());
    out
}

pub fn make_monic<C: Coeff>(p: &mut Terms<C>) {
    if let Some((_, lc)) = p.first() {
        if lc.c_is_one() {
            return;
        }
        let inv = lc.c_inv();
        for t in p.iter_mut() {
            t.1 = t.1.c_mul(&inv);
        }
    }
}

/// a - c * m * b for term lists already stripped of their cancelling heads.
fn sub_mul<C: Coeff>(a: &[(Mono, C)], c: &C, m: &Mono, b: &[(Mono, C)], ord: &TermOrder) -> Terms<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let next = |j: usize| b.get(j).map(|(bm, bc)| (bm.mul(m), bc.c_mul(c)));
    let (mut i, mut j) = (0, 0);
    let mut cur = next(0);
    while i < a.len() {
        let Some((bm, bc)) = cur.take() else { break };
        match ord.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
                cur = Some((bm, bc));
            }
            Ordering::Less => {
                out.push((bm, bc.c_neg()));
                j += 1;
                cur = next(j);
            }
            Ordering::Equal => {
                let v = a[i].1.c_sub(&bc);
                if !v.c_is_zero() {
                    out.push((bm, v));
                }
                i += 1;
                j += 1;
                cur = next(j);
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    if let Some((bm, bc)) = cur {
        out.push((bm, bc.c_neg()));
        for (bm, bc) in &b[j + 1..] {
            out.push((bm.mul(m), bc.c_mul(c).c_neg()));
        }
    }
    out
}

/// Full reduction of `p` against monic `basis`.
pub fn reduce<C: Coeff>(p: Terms<C>, basis: &[&Terms<C>], ord: &TermOrder, budget: &mut Budget) -> Result<Terms<C>> {
    let mut p = p;
    let mut start = 0;
    let mut rem: Terms<C> = Vec::new();
    while start < p.len() {
        let (m, c) = (&p[start].0, &p[start].1);
        let hit = basis.iter().find(|g| g[0].0.divides(m));
        match hit {
            Some(g) => {
                budget.step()?;
                let q = m.div(&g[0].0).unwrap();
                let c = c.clone();
                p = sub_mul(&p[start + 1..], &c, &q, &g[1..], ord);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(rem)
}

fn spoly<C: Coeff>(f: &Terms<C>, g: &Terms<C>, ord: &TermOrder) -> Terms<C> {
    // f, g monic
    let l = f[0].0.lcm(&g[0].0);
    let mf = l.div(&f[0].0).unwrap();
    let mg = l.div(&g[0].0).unwrap();
    let a: Terms<C> = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_mul(&a, &C::c_one(), &mg, &g[1..], ord)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: i64,
}

struct State<C> {
    polys: Vec<Terms<C>>,
    sugar: Vec<i64>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<C: Coeff> State<C> {
    /// Gebauer-Moeller update with new basis element `h`.
    fn update(&mut self, h: Terms<C>, sugar: i64) {
        let hi = self.polys.len();
        let lh = h[0].0.clone();
        self.polys.push(h);
        self.sugar.push(sugar);
        let mut cands: Vec<(usize, Mono, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lg = &self.polys[g][0].0;
                (g, lg.lcm(&lh), lg.is_coprime(&lh))
            })
            .collect();
        let mut kept: Vec<(usize, Mono, bool)> = Vec::new();
        while let Some((g, l, coprime)) = cands.pop() {
            let dominated = cands.iter().chain(kept.iter()).any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((g, l, coprime));
            }
        }
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let li = polys[p.i][0].0.lcm(&lh);
            let lj = polys[p.j][0].0.lcm(&lh);
            !(lh.divides(&p.lcm) && li != p.lcm && lj != p.lcm)
        });
        for (g, l, coprime) in kept {
            if coprime {
                continue;
            }
            let dl = l.degree() as i64;
            let s = (self.sugar[g] - self.polys[g][0].0.degree() as i64).max(sugar - lh.degree() as i64) + dl;
            self.pairs.push(Pair { i: g, j: hi, lcm: l, sugar: s });
        }
        let polys = &self.polys;
        self.active.retain(|&g| !lh.divides(&polys[g][0].0));
        self.active.push(hi);
    }

    fn basis(&self) -> Vec<&Terms<C>> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }
}

fn local_degree<C>(p: &Terms<C>) -> i64 {
    p.iter().map(|t| t.0.degree() as i64).max().unwrap_or(0)
}

/// Reduced Groebner basis, sorted ascending by leading monomial. The unit
/// ideal yields `[1]`.
pub fn groebner<C: Coeff>(gens: Vec<Terms<C>>, ord: &TermOrder, budget: &mut Budget) -> Result<Vec<Terms<C>>> {
    let mut gens: Vec<Terms<C>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
    gens.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0).then(a.len().cmp(&b.len())));
    let mut st = State { polys: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in gens {
        let s = local_degree(&g);
        let mut h = reduce(g, &st.basis(), ord, budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        st.update(h, s);
    }
    while !st.pairs.is_empty() {
        // sugar for degree orders; elimination orders swell coefficients
        // under sugar, so they take the smallest lcm first
        let by_sugar = ord.blocks.len() == 1;
        let k = (0..st.pairs.len())
            .min_by(|&a, &b| {
                let (p, q) = (&st.pairs[a], &st.pairs[b]);
                let (s, l) = (p.sugar.cmp(&q.sugar), ord.cmp(&p.lcm, &q.lcm));
                let key = if by_sugar { s.then(l) } else { l.then(s) };
                key.then((p.i, p.j).cmp(&(q.i, q.j)))
            })
            .unwrap();
        let pair = st.pairs.swap_remove(k);
        let s = spoly(&st.polys[pair.i], &st.polys[pair.j], ord);
        let mut h = reduce(s, &st.basis(), ord, budget)?;
        if h.is_empty() {
            continue;
        }
        make_monic(&mut h);
        if h[0].0.is_one() {
            return Ok(vec![h]);
        }
        let s = pair.sugar.max(local_degree(&h));
        st.update(h, s);
    }
    // interreduce the minimal basis
    let mut g: Vec<Terms<C>> = st.active.iter().map(|&i| st.polys[i].clone()).collect();
    g.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    for k in 0..g.len() {
        let others: Vec<&Terms<C>> = g.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
        let tail = reduce(g[k][1..].to_vec(), &others, ord, budget)?;
        let mut r = vec![g[k][0].clone()];
        r.extend(tail);
        g[k] = r;
    }
    Ok(g)
}

/// Buchberger's criterion checked directly on every pair.
pub fn is_groebner<C: Coeff>(g: &[Terms<C>], ord: &TermOrder) -> bool {
    let mut budget = Budget::new(u64::MAX);
    let monic: Vec<Terms<C>> = g
        .iter()
        .map(|p| {
            let mut q = p.clone();
            make_monic(&mut q);
            q
        })
        .collect();
    let refs: Vec<&Terms<C>> = monic.iter().collect();
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            if monic[i][0].0.is_coprime(&monic[j][0].0) {
                // product criterion: always reduces to zero
                continue;
            }
            let s = spoly(&monic[i], &monic[j], ord);
            match reduce(s, &refs, ord, &mut budget) {
                Ok(r) if r.is_empty() => {}
                _ => return false,
            }
        }
    }
    true
}
