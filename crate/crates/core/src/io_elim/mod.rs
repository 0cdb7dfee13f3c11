//! IO-equations by eliminating the states from the Lie relations
//! Y_j den(P_j) - num(P_j), and identifiable generators from their
//! normalized coefficients.

use crate::arith::factor::ring_factors;
use crate::arith::gcd::{int_primitive, lcm};
use crate::arith::matrix::rank;
use crate::arith::text::{namer, poly_to_string};
use crate::arith::{MPoly, Mono, RatFunc, Rational, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::field::{in_field, transcendence_basis};
use crate::groebner::{groebner_basis, GbOptions, Ideal, MonomialOrder};
use crate::model::OdeModel;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq)]
pub struct IoEquation {
    /// Polynomial in output and input derivatives with coefficients in Q[c].
    pub poly: MPoly,
    pub output_index: usize,
    pub order: usize,
    /// Signal monomial whose coefficient is the normalizing unit.
    pub leading: Mono,
    /// Remaining coefficients divided by the leading one, in ranking order.
    pub normalized_coeffs: Vec<RatFunc>,
    /// False when the elimination ideal needed more than one generator.
    pub principal: bool,
}

/// IO-equations with the universe holding their output-derivative variables.
#[derive(Clone, Debug, PartialEq)]
pub struct IoSystem {
    pub universe: VarUniverse,
    pub params: Vec<usize>,
    pub equations: Vec<IoEquation>,
}

impl IoSystem {
    pub fn show(&self, i: usize) -> String {
        poly_to_string(&self.equations[i].poly, &namer(&self.universe))
    }

    /// All normalized coefficients, in equation order.
    pub fn coefficients(&self) -> Vec<RatFunc> {
        self.equations.iter().flat_map(|e| e.normalized_coeffs.iter().cloned()).collect()
    }
}

fn is_signal(u: &VarUniverse, v: usize) -> bool {
    matches!(u.role(v), Role::Input(_) | Role::Output(_))
}

/// Ranking key: highest output derivative, its exponent, signal degree, then
/// grevlex.
fn rank_key(u: &VarUniverse, m: &Mono) -> (i64, u32, u32, Mono) {
    let mut best = (-1i64, 0u32);
    for (v, e) in m.iter() {
        if let Role::Output(k) = u.role(v) {
            if (k as i64, e) > best {
                best = (k as i64, e);
            }
        }
    }
    (best.0, best.1, m.degree(), m.clone())
}

/// Coefficients of `p` grouped by signal monomial.
pub fn signal_coefficients(u: &VarUniverse, p: &MPoly) -> BTreeMap<Mono, MPoly> {
    let mut out: BTreeMap<Mono, Vec<(Mono, Rational)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut sig = Mono::one();
        let mut rest = Mono::one();
        for (v, e) in m.iter() {
            if is_signal(u, v) {
                sig = sig.mul(&Mono::var(v, e));
            } else {
                rest = rest.mul(&Mono::var(v, e));
            }
        }
        out.entry(sig).or_default().push((rest, c.clone()));
    }
    out.into_iter().map(|(k, t)| (k, MPoly::from_terms(t))).collect()
}

/// Fixes the sign and returns (leading signal monomial, normalized coefficients).
fn normalize(u: &VarUniverse, p: MPoly) -> (MPoly, Mono, Vec<RatFunc>) {
    let groups = signal_coefficients(u, &p);
    let mut keys: Vec<&Mono> = groups.keys().collect();
    keys.sort_by(|a, b| rank_key(u, b).cmp(&rank_key(u, a)));
    let lead = keys[0].clone();
    let negative = groups[&lead].lc() < Rational::from_integer(0.into());
    let lcr = RatFunc::from_poly(groups[&lead].clone());
    // ratios are invariant under the sign flip
    let coeffs = keys[1..].iter().map(|k| RatFunc::from_poly(groups[*k].clone()).div(&lcr).unwrap()).collect();
    let p = if negative { -p } else { p };
    (p, lead, coeffs)
}

/// Orders from the rank-stop rule applied to each output on its own.
fn own_orders(model: &OdeModel) -> Vec<usize> {
    let d = model.dim();
    let mut m = model.clone();
    let mut out = Vec::new();
    for g in &model.g {
        let mut rows: Vec<Vec<RatFunc>> = Vec::new();
        let mut p = g.clone();
        let mut n = 0;
        loop {
            rows.push(model.states.iter().map(|&x| p.diff(x)).collect());
            if rank(&rows) < rows.len() || n > d {
                break;
            }
            p = m.lie_derivative(&p);
            n += 1;
        }
        out.push(n);
    }
    out
}

/// One IO-equation per output, each from its own Lie relations.
pub fn io_equations(model: &OdeModel, opts: &GbOptions) -> Result<IoSystem> {
    let orders = own_orders(model);
    let param = model.build_parametrization(Some(&orders));
    let mut u = param.universe.clone();
    let mut equations = Vec::new();
    for (i, row) in param.components.iter().enumerate() {
        let y = model.outputs[i];
        let ys: Vec<usize> = (0..row.len()).map(|j| if j == 0 { y } else { u.derivative(y, j as u32) }).collect();
        let mut gens: Vec<MPoly> = row.iter().zip(&ys).map(|(p, &v)| &(&MPoly::var(v) * p.den()) - p.num()).collect();
        let mut den = MPoly::one();
        for p in row {
            if model.states.iter().any(|&x| p.den().has_var(x)) {
                den = lcm(&den, p.den());
            }
        }
        let mut elim = model.states.clone();
        let mut ring = model.states.clone();
        if !den.is_constant() {
            let t = u.fresh("t", Role::Auxiliary);
            gens.push(&(&MPoly::var(t) * &den) - &MPoly::one());
            elim.insert(0, t);
            ring.insert(0, t);
        }
        ring.extend(&ys);
        let gb = groebner_basis(&Ideal::new(ring, gens), &MonomialOrder::BlockElim(elim.clone()), opts)?;
        let mut found: Vec<MPoly> = gb.polys().into_iter().filter(|p| elim.iter().all(|&v| !p.has_var(v))).collect();
        if found.is_empty() {
            return Err(Error::EliminationFailed(format!("no relation for output {}", u.display(y))));
        }
        let principal = found.len() == 1;
        found.sort_by(|a, b| (a.total_degree(), a.len()).cmp(&(b.total_degree(), b.len())));
        let subst: HashMap<usize, RatFunc> = ys.iter().copied().zip(row.iter().cloned()).collect();
        let vanishes = |f: &MPoly| RatFunc::from_poly(f.clone()).subst_map(&subst).map(|r| r.is_zero()).unwrap_or(false);
        let fac = ring_factors(&found[0], &|v| ys.contains(&v));
        let poly = fac
            .factors
            .into_iter()
            .map(|(f, _)| f)
            .find(|f| vanishes(f))
            .ok_or_else(|| Error::EliminationFailed("no irreducible factor vanishes on the parametrization".into()))?;
        let poly = int_primitive(&poly).1;
        let (poly, leading, normalized_coeffs) = normalize(&u, poly);
        let order = ys.iter().rposition(|&v| poly.has_var(v)).unwrap_or(0);
        equations.push(IoEquation { poly, output_index: i, order, leading, normalized_coeffs, principal });
    }
    Ok(IoSystem { universe: u, params: model.params.clone(), equations })
}

/// Removes a rational factor: numerator and denominator integral primitive.
pub fn strip_constant(f: &RatFunc) -> RatFunc {
    RatFunc::new(int_primitive(f.num()).1, int_primitive(f.den()).1).unwrap()
}

/// (total degree, denominator degree, term count, text); polynomials win ties.
fn complexity(f: &RatFunc) -> (i64, i64, usize, String) {
    let names = |i: usize| format!("v{i:04}");
    let text = crate::arith::text::ratfunc_to_string(f, &names);
    (f.num().total_degree() + f.den().total_degree(), f.den().total_degree(), f.num().len() + f.den().len(), text)
}

fn cmp_simple(a: &RatFunc, b: &RatFunc) -> Ordering {
    complexity(a).cmp(&complexity(b))
}

/// Generators of the field spanned by the coefficients: candidates are the
/// coefficients and their pairwise products and ratios, taken simplest
/// first and kept when not already in the field of those kept.
pub fn identifiable_generators(coeffs: &[RatFunc], params: &[usize], opts: &GbOptions) -> Result<Vec<RatFunc>> {
    let mut base: Vec<RatFunc> = Vec::new();
    for c in coeffs {
        if c.is_constant() {
            continue;
        }
        let s = strip_constant(c);
        if !base.contains(&s) {
            base.push(s);
        }
    }
    if base.is_empty() {
        return Ok(Vec::new());
    }
    let cap = base.iter().map(|f| complexity(f).0).max().unwrap();
    let mut pool = base.clone();
    for i in 0..base.len() {
        for j in 0..base.len() {
            let mut cands = vec![base[i].div(&base[j])?];
            if i < j {
                cands.push(base[i].mul(&base[j]));
            }
            for c in cands {
                if c.is_constant() {
                    continue;
                }
                let s = strip_constant(&c);
                if complexity(&s).0 <= cap && !pool.contains(&s) {
                    pool.push(s);
                }
            }
        }
    }
    pool.sort_by(cmp_simple);
    let trdeg = transcendence_basis(&base, params).len();
    let mut chosen: Vec<RatFunc> = Vec::new();
    for cand in pool {
        if in_field(&cand, &chosen, params, opts)? {
            continue;
        }
        chosen.push(cand);
        if chosen.len() >= trdeg {
            let mut all = true;
            for b in &base {
                if !in_field(b, &chosen, params, opts)? {
                    all = false;
                    break;
                }
            }
            if all {
                break;
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests;
