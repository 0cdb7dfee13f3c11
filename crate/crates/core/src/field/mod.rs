//! The tower Q(h) = F, F(residual transcendentals), F(...)(alpha): field
//! membership, minimal polynomials, primitive elements, evaluation of the
//! transcendental residue, and rewriting in the power basis of alpha.

mod evaluation;

pub use evaluation::{suitable_evaluation, Evaluation, EvaluationRequest};

use crate::arith::gcd::lcm;
use crate::arith::matrix::rank;
use crate::arith::tower::{from_upoly, to_upoly, uscale, AlphaGen, UPoly};
use crate::arith::{Coeff, FieldTower, MPoly, RatFunc, Rational, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, GbOptions, Ideal, MonomialOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Product of the denominator parts that involve `params`.
fn common_den(fs: &[&RatFunc], params: &[usize]) -> MPoly {
    let mut d = MPoly::one();
    for f in fs {
        if f.den().vars().iter().any(|v| params.contains(v)) {
            d = lcm(&d, f.den());
        }
    }
    d
}

/// Scratch variable allocator above every index in use.
struct Scratch(usize);

impl Scratch {
    fn new(params: &[usize], fs: &[&RatFunc], extra: &[usize]) -> Self {
        let mut m = params.iter().chain(extra).copied().max().map(|x| x + 1).unwrap_or(0);
        for f in fs {
            m = m.max(f.num().width()).max(f.den().width());
        }
        Scratch(m)
    }

    fn take(&mut self) -> usize {
        self.0 += 1;
        self.0 - 1
    }
}

/// Ideal of the graph of c -> (defs(c)) over Q(field vars), with the
/// denominators inverted through an extra variable.
struct Graph {
    ring: Vec<usize>,
    gens: Vec<MPoly>,
    elim: Vec<usize>,
}

fn graph(params: &[usize], defs: &[(usize, &RatFunc)], scratch: &mut Scratch) -> Graph {
    let fs: Vec<&RatFunc> = defs.iter().map(|(_, f)| *f).collect();
    let mut gens: Vec<MPoly> = defs.iter().map(|(v, f)| &(&MPoly::var(*v) * f.den()) - f.num()).collect();
    let mut ring = params.to_vec();
    let mut elim = params.to_vec();
    let d = common_den(&fs, params);
    if !d.is_constant() {
        let w = scratch.take();
        gens.push(&(&MPoly::var(w) * &d) - &MPoly::one());
        ring.push(w);
        elim.push(w);
    }
    Graph { ring, gens, elim }
}

/// Indices of a transcendence basis among `gens` (greedy, Jacobian rank).
pub fn transcendence_basis(gens: &[RatFunc], params: &[usize]) -> Vec<usize> {
    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        rows.push(params.iter().map(|&c| g.diff(c)).collect());
        if rank(&rows) == rows.len() {
            out.push(i);
        } else {
            rows.pop();
        }
    }
    out
}

/// Minimal polynomial of `target` over Q(h) where the h are algebraically
/// independent and given as (variable, definition). Coefficients are in the
/// h variables, lowest degree first, monic. `None` when transcendental.
pub fn min_poly_over(target: &RatFunc, hs: &[(usize, RatFunc)], params: &[usize], opts: &GbOptions) -> Result<Option<UPoly>> {
    let fs: Vec<&RatFunc> = hs.iter().map(|(_, f)| f).chain([target]).collect();
    let hv: Vec<usize> = hs.iter().map(|(v, _)| *v).collect();
    let mut sc = Scratch::new(params, &fs, &hv);
    let local: Vec<usize> = hs.iter().map(|_| sc.take()).collect();
    let x = sc.take();
    let mut defs: Vec<(usize, &RatFunc)> = local.iter().copied().zip(hs.iter().map(|(_, f)| f)).collect();
    defs.push((x, target));
    let g = graph(params, &defs, &mut sc);
    let mut ring = g.ring.clone();
    ring.push(x);
    let gb = groebner_basis(&Ideal::new(ring, g.gens), &MonomialOrder::BlockElim(g.elim.clone()), opts)?;
    if gb.is_unit() {
        return Err(Error::Precondition("generators are algebraically dependent".into()));
    }
    let back: HashMap<usize, usize> = local.iter().copied().zip(hv.iter().copied()).collect();
    let Some(p) = gb.polys().into_iter().find(|p| g.elim.iter().all(|&v| !p.has_var(v))) else {
        return Ok(None);
    };
    let p = p.remap(&|v| back.get(&v).copied().unwrap_or(v));
    let mut u = to_upoly(&p, x);
    let inv = u.last().unwrap().c_inv();
    u = uscale(&u, &inv);
    Ok(Some(u))
}

/// Result of the algebraicity test for a single parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebraicity {
    pub algebraic: bool,
    pub min_poly: Option<UPoly>,
}

/// Eliminates W and the other parameters from
/// <W*H(c) - 1, den(h_i) h_i - num(h_i), X - c>.
pub fn is_algebraic_over(c: usize, hs: &[(usize, RatFunc)], params: &[usize], opts: &GbOptions) -> Result<Algebraicity> {
    let m = min_poly_over(&RatFunc::var(c), hs, params, opts)?;
    Ok(Algebraicity { algebraic: m.is_some(), min_poly: m })
}

/// Whether `target` lies in Q(gens). The generators may be dependent: a
/// transcendence basis goes to the coefficient field and the rest stay in
/// the ring below X, so membership shows up as a basis element led by X.
pub fn in_field(target: &RatFunc, gens: &[RatFunc], params: &[usize], opts: &GbOptions) -> Result<bool> {
    if target.vars().iter().all(|v| !params.contains(v)) {
        return Ok(true);
    }
    let basis = transcendence_basis(gens, params);
    let fs: Vec<&RatFunc> = gens.iter().chain([target]).collect();
    let mut sc = Scratch::new(params, &fs, &[]);
    let vars: Vec<usize> = gens.iter().map(|_| sc.take()).collect();
    let x = sc.take();
    let mut defs: Vec<(usize, &RatFunc)> = vars.iter().copied().zip(gens.iter()).collect();
    defs.push((x, target));
    let g = graph(params, &defs, &mut sc);
    let dependent: Vec<usize> = (0..gens.len()).filter(|i| !basis.contains(i)).map(|i| vars[i]).collect();
    let mut ring = g.ring.clone();
    ring.push(x);
    ring.extend(&dependent);
    let order = MonomialOrder::Blocks(vec![g.elim.clone(), vec![x]]);
    let gb = groebner_basis(&Ideal::new(ring, g.gens), &order, opts)?;
    let xm = crate::arith::Mono::var(x, 1);
    Ok(gb.leading_monomials().iter().any(|m| *m == xm))
}

/// The tower together with where its pieces came from.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerReport {
    /// Identifiable generators (variable, definition in the parameters).
    pub generators: Vec<(usize, RatFunc)>,
    /// Parameters transcendental over the previous field, adjoined as is.
    pub residual: Vec<usize>,
    /// alpha as a combination of parameters.
    pub alpha_def: Option<RatFunc>,
    pub tower: FieldTower,
    pub degree: usize,
}

impl TowerReport {
    /// Field generators of the top of the transcendental part.
    pub fn base_field(&self) -> Vec<(usize, RatFunc)> {
        self.tower.transcendentals.clone()
    }

    pub fn alpha_var(&self) -> Option<usize> {
        self.tower.alpha.as_ref().map(|a| a.var)
    }

    /// Back-substitution h -> h(c), alpha -> alpha(c).
    pub fn to_params(&self, f: &RatFunc) -> Result<RatFunc> {
        let mut m: HashMap<usize, RatFunc> = self.tower.transcendentals.iter().cloned().collect();
        if let (Some(a), Some(d)) = (self.alpha_var(), &self.alpha_def) {
            m.insert(a, d.clone());
        }
        f.subst_map(&m)
    }

    /// Variables of the identifiable field only (no residual, no alpha).
    pub fn identifiable_vars(&self) -> Vec<usize> {
        self.generators.iter().map(|(v, _)| *v).collect()
    }
}

/// Name for a generator: a bare parameter keeps its variable.
fn generator_var(def: &RatFunc, params: &[usize], u: &mut VarUniverse) -> usize {
    if let Some(p) = def.as_poly() {
        if p.len() == 1 && p.total_degree() == 1 && p.lc() == Rational::from_integer(1.into()) {
            let v = p.vars()[0];
            if params.contains(&v) {
                return v;
            }
        }
    }
    u.fresh("h", Role::Parameter)
}

/// Power-basis images of every parameter, from the normal forms modulo the
/// graph ideal of (h, alpha) under an order eliminating the parameters.
fn param_images(
    params: &[usize],
    hs: &[(usize, RatFunc)],
    alpha: Option<(usize, &RatFunc, usize)>,
    opts: &GbOptions,
) -> Result<Vec<(usize, UPoly)>> {
    let mut fs: Vec<&RatFunc> = hs.iter().map(|(_, f)| f).collect();
    if let Some((_, d, _)) = alpha {
        fs.push(d);
    }
    let hv: Vec<usize> = hs.iter().map(|(v, _)| *v).chain(alpha.map(|a| a.0)).collect();
    let mut sc = Scratch::new(params, &fs, &hv);
    let local: Vec<usize> = hs.iter().map(|_| sc.take()).collect();
    let a = sc.take();
    let mut defs: Vec<(usize, &RatFunc)> = local.iter().copied().zip(hs.iter().map(|(_, f)| f)).collect();
    if let Some((_, d, _)) = alpha {
        defs.push((a, d));
    }
    let g = graph(params, &defs, &mut sc);
    let mut ring = g.ring.clone();
    if alpha.is_some() {
        ring.push(a);
    }
    let gb = groebner_basis(&Ideal::new(ring, g.gens), &MonomialOrder::BlockElim(g.elim.clone()), opts)?;
    let mut back: HashMap<usize, usize> = local.iter().copied().zip(hs.iter().map(|(v, _)| *v)).collect();
    let av = alpha.map(|x| x.0).unwrap_or(a);
    back.insert(a, av);
    let mut out = Vec::new();
    for &c in params {
        let nf = gb.normal_form(&MPoly::var(c))?;
        if nf.vars().iter().any(|v| g.elim.contains(v)) {
            return Err(Error::NotInTower(format!("parameter index {c}")));
        }
        let nf = nf.remap(&|v| back.get(&v).copied().unwrap_or(v));
        let up = crate::arith::tower::ratfunc_to_upoly(&nf, av)?;
        if let Some((_, _, n)) = alpha {
            if up.len() > n {
                return Err(Error::NotInTower(format!("parameter index {c}")));
            }
        }
        out.push((c, up));
    }
    Ok(out)
}

/// Options for the primitive element search.
#[derive(Clone, Copy, Debug)]
pub struct TowerOptions {
    pub seed: u64,
    pub max_draws: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions { seed: 0, max_draws: 32 }
    }
}

/// Builds Q(h) subset Q(h, residual) subset Q(h, residual)(alpha) = Q(c).
pub fn build_field_tower(
    u: &mut VarUniverse,
    params: &[usize],
    gens: &[RatFunc],
    topts: &TowerOptions,
    opts: &GbOptions,
) -> Result<TowerReport> {
    let generators: Vec<(usize, RatFunc)> = gens.iter().map(|g| (generator_var(g, params, u), g.clone())).collect();
    let mut field = generators.clone();
    let mut residual = Vec::new();
    let mut degrees: Vec<(usize, usize)> = Vec::new();
    for &c in params {
        if field.iter().any(|(v, _)| *v == c) {
            continue;
        }
        match is_algebraic_over(c, &field, params, opts)?.min_poly {
            None => {
                residual.push(c);
                field.push((c, RatFunc::var(c)));
            }
            Some(m) => degrees.push((c, m.len() - 1)),
        }
    }
    let outside: Vec<usize> = degrees.iter().filter(|(_, d)| *d > 1).map(|(c, _)| *c).collect();
    let defs: Vec<RatFunc> = field.iter().map(|(_, f)| f.clone()).collect();
    if outside.is_empty() {
        let images = param_images(params, &field, None, opts)?;
        let tower = FieldTower { transcendentals: field, alpha: None, params: images };
        return Ok(TowerReport { generators, residual, alpha_def: None, tower, degree: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(topts.seed);
    let mut candidates: Vec<RatFunc> = outside.iter().map(|&c| RatFunc::var(c)).collect();
    let mut draws = 0;
    let mut k = 0;
    loop {
        if k == candidates.len() {
            if draws >= topts.max_draws {
                return Err(Error::PrimitiveSearchExhausted(draws));
            }
            draws += 1;
            let combo: Vec<i64> = outside.iter().map(|_| rng.gen_range(-10i64..=10)).collect();
            if combo.iter().filter(|&&r| r != 0).count() < 2 {
                continue;
            }
            let p = MPoly::from_terms(
                outside.iter().zip(&combo).map(|(&c, &r)| (crate::arith::Mono::var(c, 1), Rational::from_integer(r.into()))).collect(),
            );
            candidates.push(RatFunc::from_poly(p));
        }
        let cand = candidates[k].clone();
        k += 1;
        let Some(m) = min_poly_over(&cand, &field, params, opts)? else { continue };
        let mut with_alpha = defs.clone();
        with_alpha.push(cand.clone());
        let mut ok = true;
        for &c in &outside {
            if !in_field(&RatFunc::var(c), &with_alpha, params, opts)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let var = u.fresh("alpha", Role::TowerGen);
        let n = m.len() - 1;
        let images = param_images(params, &field, Some((var, &cand, n)), opts)?;
        let tower = FieldTower { transcendentals: field, alpha: Some(AlphaGen { var, min_poly: m }), params: images };
        let report = TowerReport { generators, residual, alpha_def: Some(cand), tower, degree: n };
        for &c in params {
            let e = express_in_tower(&RatFunc::var(c), &report)?;
            debug_assert!(e.len() <= n);
        }
        return Ok(report);
    }
}

/// f written as sum q_j(h) alpha^j with j < n, verified by substituting the
/// definitions back.
pub fn express_in_tower(f: &RatFunc, t: &TowerReport) -> Result<UPoly> {
    let e = t.tower.element(f, &|_| None)?;
    let back = match t.alpha_var() {
        Some(a) => from_upoly(&e, a),
        None => e.first().cloned().unwrap_or_else(RatFunc::zero),
    };
    if t.to_params(&back)? != *f {
        return Err(Error::NotInTower(format!("{f:?}")));
    }
    Ok(e)
}

/// Like `express_in_tower` but requires alpha-degree 0.
pub fn express_in_base(f: &RatFunc, t: &TowerReport) -> Result<RatFunc> {
    let e = express_in_tower(f, t)?;
    match e.len() {
        0 => Ok(RatFunc::zero()),
        1 => Ok(e[0].clone()),
        _ => Err(Error::CoefficientsOutsideField(format!("alpha-degree {}", e.len() - 1))),
    }
}
