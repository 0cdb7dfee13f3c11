//! The alpha-witness variety: write each state as sum_j z_{i,j} alpha^j, keep
//! the alpha-coefficients j >= 1 of every parametrization component, close
//! off the denominator locus, and decompose.

use crate::arith::gcd::{int_primitive, lcm};
use crate::arith::tower::UPoly;
use crate::arith::{MPoly, RatFunc, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::field::TowerReport;
use crate::groebner::{ideal_dimension, saturate, split_components, GbOptions, Ideal};
use crate::io_elim::signal_coefficients;
use crate::model::Parametrization;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct WitnessData {
    /// Parametrization universe extended by the z variables.
    pub universe: VarUniverse,
    /// z[i][j] is the coefficient of alpha^j in state i.
    pub z: Vec<Vec<usize>>,
    pub h_polys: Vec<MPoly>,
    pub delta: MPoly,
    /// Saturation of <h_polys> by delta; ring variables are the z.
    pub ideal: Ideal,
    pub target_dim: usize,
}

impl WitnessData {
    pub fn z_flat(&self) -> Vec<usize> {
        self.z.iter().flatten().copied().collect()
    }
}

#[derive(Clone, Debug)]
pub struct WitnessComponent {
    /// Generated by its reduced grevlex basis.
    pub ideal: Ideal,
    pub dim: i64,
    pub linear: bool,
    /// Contained in another returned component.
    pub embedded: bool,
    pub certified: bool,
}

fn z_name(d: usize, i: usize, j: usize) -> String {
    if d == 1 {
        format!("z{j}")
    } else {
        format!("z{}{}", i + 1, j)
    }
}

/// Builds the witness ideal of `p` over the tower. The parametrization
/// universe must already contain the tower variables.
pub fn witness_ideal(p: &Parametrization, tower: &TowerReport, opts: &GbOptions) -> Result<WitnessData> {
    let n = tower.degree;
    if n < 2 {
        return Err(Error::DegreeOneExtension);
    }
    let mut u = p.universe.clone();
    let d = p.states.len();
    let z: Vec<Vec<usize>> = (0..d).map(|i| (0..n).map(|j| u.fresh(&z_name(d, i, j), Role::Auxiliary)).collect()).collect();
    let images: HashMap<usize, UPoly> =
        p.states.iter().zip(&z).map(|(&x, zs)| (x, zs.iter().map(|&v| RatFunc::var(v)).collect())).collect();
    let extra = |v: usize| images.get(&v).cloned();
    let mut coeffs: Vec<RatFunc> = Vec::new();
    let mut delta = MPoly::one();
    let zflat: Vec<usize> = z.iter().flatten().copied().collect();
    for comp in p.flat() {
        let e = tower.tower.element(comp, &extra)?;
        for (j, c) in e.iter().enumerate() {
            if zflat.iter().any(|&v| c.den().has_var(v)) {
                delta = lcm(&delta, c.den());
            }
            if j >= 1 && !c.is_zero() {
                coeffs.push(c.clone());
            }
        }
    }
    // H must vanish for every input trajectory: split by input monomials
    let mut h_polys: Vec<MPoly> = Vec::new();
    for c in &coeffs {
        for (_, g) in signal_coefficients(&u, c.num()) {
            let g = int_primitive(&g).1;
            if !g.is_zero() && !h_polys.contains(&g) {
                h_polys.push(g);
            }
        }
    }
    let ideal = saturate(&Ideal::new(zflat, h_polys.clone()), &delta, opts)?;
    Ok(WitnessData { universe: u, z, h_polys, delta, ideal, target_dim: d })
}

fn ring_degree(p: &MPoly, ring: &[usize]) -> u32 {
    p.terms().iter().map(|(m, _)| m.iter().filter(|(v, _)| ring.contains(v)).map(|(_, e)| e).sum()).max().unwrap_or(0)
}

/// Irreducible components, highest dimension first, then fewest generators.
/// The flag is set when some branch could not be certified prime.
pub fn witness_components(w: &WitnessData, opts: &GbOptions) -> Result<(Vec<WitnessComponent>, bool)> {
    let split = split_components(&w.ideal, opts)?;
    let mut out = Vec::new();
    for c in split.components {
        let dim = ideal_dimension(&c.ideal, opts)?;
        let linear = c.ideal.gens.iter().all(|g| ring_degree(g, &c.ideal.ring) <= 1);
        out.push(WitnessComponent { ideal: c.ideal, dim, linear, embedded: c.embedded, certified: c.certified });
    }
    // ties go to the component involving the earliest z variables
    let key = |c: &WitnessComponent| {
        let names = |i: usize| format!("v{i:05}");
        let text: Vec<String> = c.ideal.gens.iter().map(|g| crate::arith::text::poly_to_string(g, &names)).collect();
        let mut zs: Vec<usize> = c.ideal.gens.iter().flat_map(|g| g.vars()).filter(|v| c.ideal.ring.contains(v)).collect();
        zs.sort_unstable();
        zs.dedup();
        (-c.dim, c.ideal.gens.len(), zs, text)
    };
    out.sort_by_key(key);
    Ok((out, split.incomplete))
}

/// True iff the component is a line defined over the coefficient field.
pub fn line_check(c: &WitnessComponent) -> bool {
    c.dim == 1 && c.linear
}

/// Affine parametrization of a linear component.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearParam {
    /// Image of each z variable, in the order of `WitnessData::z_flat`.
    pub images: Vec<RatFunc>,
    /// Fresh variables standing for the free z, in order of the z they replace.
    pub free: Vec<usize>,
}

fn linear_parts(g: &MPoly, ring: &[usize]) -> Result<(HashMap<usize, RatFunc>, RatFunc)> {
    let mut coef: HashMap<usize, Vec<_>> = HashMap::new();
    let mut constant = Vec::new();
    for (m, c) in g.terms() {
        let zs: Vec<(usize, u32)> = m.iter().filter(|(v, _)| ring.contains(v)).collect();
        let rest = ring.iter().fold(m.clone(), |acc, v| acc.without(*v));
        match zs.as_slice() {
            [] => constant.push((rest, c.clone())),
            [(v, 1)] => coef.entry(*v).or_default().push((rest, c.clone())),
            _ => return Err(Error::NonLinearComponent),
        }
    }
    let coef = coef.into_iter().map(|(v, t)| (v, RatFunc::from_poly(MPoly::from_terms(t)))).collect();
    Ok((coef, RatFunc::from_poly(MPoly::from_terms(constant))))
}

/// Solves the linear generators for pivot variables, preferring a rational
/// constant coefficient and then the earliest variable. Free variables are
/// replaced by fresh ones named s1, s2, ...
pub fn parametrize_linear_component(
    c: &WitnessComponent,
    z: &[usize],
    field: &[usize],
    u: &mut VarUniverse,
) -> Result<LinearParam> {
    let ring = &c.ideal.ring;
    let mut rows = Vec::new();
    for g in &c.ideal.gens {
        if let Some(v) = g.vars().into_iter().find(|v| !ring.contains(v) && !field.contains(v)) {
            return Err(Error::CoefficientsOutsideField(u.display(v)));
        }
        rows.push(linear_parts(g, ring)?);
    }
    let mut solved: Vec<(usize, RatFunc)> = Vec::new();
    for k in 0..rows.len() {
        let (coef, cst) = rows[k].clone();
        let mut vars: Vec<usize> = coef.iter().filter(|(_, c)| !c.is_zero()).map(|(v, _)| *v).collect();
        if vars.is_empty() {
            if cst.is_zero() {
                continue;
            }
            return Err(Error::EmptyVariety);
        }
        vars.sort_by_key(|v| (!coef[v].is_constant(), z.iter().position(|x| x == v)));
        let pv = vars[0];
        // pv = -(cst + sum_{v != pv} c_v v) / c_pv
        let mut expr = cst.neg();
        for (&v, cv) in &coef {
            if v != pv {
                expr = expr.sub(&cv.mul(&RatFunc::var(v)));
            }
        }
        let expr = expr.div(&coef[&pv])?;
        let sub = HashMap::from([(pv, expr.clone())]);
        for (_, e) in solved.iter_mut() {
            *e = e.subst_map(&sub)?;
        }
        for r in rows.iter_mut().skip(k + 1) {
            if let Some(cp) = r.0.remove(&pv) {
                for (&v, cv) in &coef {
                    if v != pv {
                        let add = cp.mul(cv).div(&coef[&pv])?;
                        let e = r.0.entry(v).or_insert_with(RatFunc::zero);
                        *e = e.sub(&add);
                    }
                }
                r.1 = r.1.sub(&cp.mul(&cst).div(&coef[&pv])?);
            }
        }
        solved.push((pv, expr));
    }
    let mut rename = HashMap::new();
    let mut free = Vec::new();
    for &v in z {
        if !solved.iter().any(|(p, _)| *p == v) {
            let k = free.len() + 1;
            let s = u.fresh(&format!("s{k}"), Role::State);
            rename.insert(v, RatFunc::var(s));
            free.push(s);
        }
    }
    let mut images = Vec::new();
    for &v in z {
        let e = match solved.iter().find(|(p, _)| *p == v) {
            Some((_, e)) => e.subst_map(&rename)?,
            None => rename[&v].clone(),
        };
        images.push(e);
    }
    let at: HashMap<usize, RatFunc> = z.iter().copied().zip(images.iter().cloned()).collect();
    for g in &c.ideal.gens {
        if !RatFunc::from_poly(g.clone()).subst_map(&at)?.is_zero() {
            return Err(Error::NonLinearComponent);
        }
    }
    Ok(LinearParam { images, free })
}

#[cfg(test)]
mod tests;
