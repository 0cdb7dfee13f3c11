//! Factor-and-branch splitting: factor basis elements over Q(F), branch on
//! each factor, recurse, then mark leaves containing another leaf as
//! embedded.

use super::ideal::{groebner_basis, GbOptions, GroebnerBasis, Ideal};
use super::order::MonomialOrder;
use crate::arith::factor::ring_factors;
use crate::arith::MPoly;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Component {
    /// Generated by its reduced grevlex basis.
    pub ideal: Ideal,
    pub dim: i64,
    /// False when primality could not be certified.
    pub certified: bool,
    /// True when the variety lies inside another returned component.
    pub embedded: bool,
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub components: Vec<Component>,
    /// Set when some branch is not certified prime.
    pub incomplete: bool,
}

impl SplitResult {
    /// Components not contained in another one.
    pub fn maximal(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.embedded)
    }
}

fn ring_degree(p: &MPoly, ideal: &Ideal) -> u32 {
    p.terms().iter().map(|(m, _)| m.iter().filter(|(v, _)| ideal.is_ring_var(*v)).map(|(_, e)| e).sum()).max().unwrap_or(0)
}

const MAX_BRANCHES: usize = 4096;

pub fn split_components(ideal: &Ideal, opts: &GbOptions) -> Result<SplitResult> {
    let mut stack = vec![(ideal.clone(), true)];
    let mut leaves: Vec<(GroebnerBasis, bool)> = Vec::new();
    let mut visited = 0usize;
    while let Some((cur, cert)) = stack.pop() {
        visited += 1;
        let gb = groebner_basis(&cur, &MonomialOrder::GrevLex, opts)?;
        if gb.is_unit() {
            continue;
        }
        let polys = gb.polys();
        let mut branched = false;
        let mut leaf_cert = cert;
        for p in &polys {
            let f = ring_factors(p, &|v| cur.is_ring_var(v));
            if !f.certified {
                leaf_cert = false;
            }
            let reducible = f.factors.len() > 1 || f.factors.iter().any(|(_, e)| *e > 1);
            if reducible && visited < MAX_BRANCHES {
                for (g, _) in f.factors.iter().rev() {
                    let next = Ideal::new(cur.ring.clone(), polys.iter().cloned().chain([g.clone()]).collect());
                    stack.push((next, cert && f.certified));
                }
                branched = true;
                break;
            }
        }
        if branched {
            continue;
        }
        if polys.iter().any(|p| ring_degree(p, &cur) > 2) {
            leaf_cert = false;
        }
        let gens = gb.polys();
        if leaves.iter().any(|(l, _)| l.polys() == gens) {
            continue;
        }
        leaves.push((gb, leaf_cert));
    }
    let mut comps: Vec<Component> = Vec::new();
    for (i, (gb, cert)) in leaves.iter().enumerate() {
        let mine = gb.to_ideal();
        let mut embedded = false;
        for (j, (other, _)) in leaves.iter().enumerate() {
            if i != j && gb.contains_ideal(&other.to_ideal())? && !other.contains_ideal(&mine)? {
                embedded = true;
                break;
            }
        }
        comps.push(Component { ideal: mine, dim: gb.dimension(), certified: *cert, embedded });
    }
    comps.sort_by(|a, b| {
        (b.dim, a.ideal.gens.len()).cmp(&(a.dim, b.ideal.gens.len())).then_with(|| {
            let la: Vec<_> = a.ideal.gens.iter().map(|g| g.lm().cloned()).collect();
            let lb: Vec<_> = b.ideal.gens.iter().map(|g| g.lm().cloned()).collect();
            lb.cmp(&la)
        })
    });
    let incomplete = comps.iter().any(|c| !c.certified);
    Ok(SplitResult { components: comps, incomplete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::text::parse_expr;

    const NAMES: [&str; 4] = ["x", "y", "z", "h"];

    fn p(s: &str) -> MPoly {
        parse_expr(s, &|n| NAMES.iter().position(|m| *m == n)).unwrap().as_poly().unwrap()
    }

    #[test]
    fn principal_product() {
        let i = Ideal::new(vec![0, 1], vec![p("x*y")]);
        let s = split_components(&i, &GbOptions::default()).unwrap();
        let gens: Vec<Vec<MPoly>> = s.maximal().map(|c| c.ideal.gens.clone()).collect();
        assert_eq!(gens.len(), 2);
        assert!(gens.contains(&vec![p("x")]) && gens.contains(&vec![p("y")]));
        assert!(!s.incomplete);
    }

    #[test]
    fn embedded_point() {
        let i = Ideal::new(vec![0, 1], vec![p("x^2"), p("x*y")]);
        let s = split_components(&i, &GbOptions::default()).unwrap();
        let max: Vec<_> = s.maximal().collect();
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].ideal.gens, vec![p("x")]);
    }

    #[test]
    fn parametric_quadratic_is_prime() {
        let i = Ideal::new(vec![0, 1, 2], vec![p("z"), p("h*y^2 + 3*x^2")]);
        let s = split_components(&i, &GbOptions::default()).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].dim, 1);
        assert!(s.components[0].certified);
    }
}
