//! ODE models x' = f(u, c, x), y = g(u, c, x), their Lie-derivative
//! parametrizations, Jacobians, and the realization criterion.

use crate::arith::matrix::{det, rank, solve, Matrix};
use crate::arith::text::{namer, ratfunc_to_string};
use crate::arith::{MPoly, RatFunc, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, saturate, GbOptions, Ideal, MonomialOrder};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq)]
pub struct OdeModel {
    pub universe: VarUniverse,
    pub states: Vec<usize>,
    pub params: Vec<usize>,
    /// Order-zero input variables.
    pub inputs: Vec<usize>,
    /// Order-zero output variables.
    pub outputs: Vec<usize>,
    /// One right-hand side per state.
    pub f: Vec<RatFunc>,
    /// One expression per output.
    pub g: Vec<RatFunc>,
}

/// D_u(P) = sum over input derivatives v in P of dP/dv * v'.
pub fn input_shift(u: &mut VarUniverse, p: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero();
    for v in p.vars() {
        if let Role::Input(_) = u.role(v) {
            let next = u.derivative(v, 1);
            acc = acc.add(&p.diff(v).mul(&RatFunc::var(next)));
        }
    }
    acc
}

fn lie(u: &mut VarUniverse, states: &[usize], f: &[RatFunc], p: &RatFunc) -> RatFunc {
    let mut acc = input_shift(u, p);
    for (x, fx) in states.iter().zip(f) {
        if p.has_var(*x) {
            acc = acc.add(&p.diff(*x).mul(fx));
        }
    }
    acc
}

impl OdeModel {
    /// Validates arities and that f, g mention no derivatives or outputs.
    pub fn new(
        universe: VarUniverse,
        states: Vec<usize>,
        params: Vec<usize>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        f: Vec<RatFunc>,
        g: Vec<RatFunc>,
    ) -> Result<Self> {
        if f.len() != states.len() {
            return Err(Error::Precondition("one right-hand side per state required".into()));
        }
        if g.len() != outputs.len() || g.is_empty() {
            return Err(Error::Precondition("one expression per output required".into()));
        }
        for e in f.iter().chain(&g) {
            for v in e.vars() {
                match universe.role(v) {
                    Role::Input(k) if k > 0 => {
                        return Err(Error::Precondition(format!("{} appears in a right-hand side", universe.display(v))))
                    }
                    Role::Output(_) => {
                        return Err(Error::Precondition(format!("output {} appears in a right-hand side", universe.display(v))))
                    }
                    _ => {}
                }
            }
        }
        Ok(OdeModel { universe, states, params, inputs, outputs, f, g })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn name(&self, v: usize) -> String {
        self.universe.display(v)
    }

    pub fn show(&self, r: &RatFunc) -> String {
        ratfunc_to_string(r, &namer(&self.universe))
    }

    /// Lie derivative along f, extending the universe with input
    /// derivatives as needed.
    pub fn lie_derivative(&mut self, p: &RatFunc) -> RatFunc {
        lie(&mut self.universe, &self.states, &self.f, p)
    }

    /// Chooses orders per output: rows are added while they raise the rank of
    /// the accumulated Jacobian; the first row that does not is kept too, so
    /// each output carries one dependent row for its IO-equation.
    pub fn default_orders(&self) -> Vec<usize> {
        let mut u = self.universe.clone();
        let d = self.dim();
        let mut rows: Matrix = Vec::new();
        let mut orders = Vec::new();
        for g in &self.g {
            let mut p = g.clone();
            let mut n = 0;
            loop {
                rows.push(self.states.iter().map(|&x| p.diff(x)).collect());
                let r = rank(&rows);
                if r < rows.len() || n > d {
                    rows.pop();
                    break;
                }
                p = lie(&mut u, &self.states, &self.f, &p);
                n += 1;
            }
            orders.push(n);
        }
        orders
    }

    /// Output parametrization (Lie derivatives up to each order) with the given orders, or the default ones.
    pub fn build_parametrization(&self, orders: Option<&[usize]>) -> Parametrization {
        let orders = orders.map(|o| o.to_vec()).unwrap_or_else(|| self.default_orders());
        let mut u = self.universe.clone();
        let mut comps = Vec::new();
        for (g, &n) in self.g.iter().zip(&orders) {
            let mut row = vec![g.clone()];
            for _ in 0..n {
                let next = lie(&mut u, &self.states, &self.f, row.last().unwrap());
                row.push(next);
            }
            comps.push(row);
        }
        let mut p = Parametrization {
            universe: u,
            states: self.states.clone(),
            params: self.params.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            orders,
            components: comps,
            rank: 0,
        };
        p.rank = rank(&p.jacobian());
        p
    }

    /// Replaces parameters (or any variables) by the given expressions.
    pub fn substitute(&self, m: &HashMap<usize, RatFunc>) -> Result<OdeModel> {
        let f = self.f.iter().map(|e| e.subst_map(m)).collect::<Result<Vec<_>>>()?;
        let g = self.g.iter().map(|e| e.subst_map(m)).collect::<Result<Vec<_>>>()?;
        Ok(OdeModel { f, g, ..self.clone() })
    }

    /// Model text in the line-oriented format read by the CLI.
    pub fn to_text(&self) -> String {
        let list = |vs: &[usize]| vs.iter().map(|&v| self.name(v)).collect::<Vec<_>>().join(", ");
        let mut s = format!("states: {}\n", list(&self.states));
        if !self.params.is_empty() {
            s += &format!("params: {}\n", list(&self.params));
        }
        if !self.inputs.is_empty() {
            s += &format!("inputs: {}\n", list(&self.inputs));
        }
        s += &format!("outputs: {}\n", list(&self.outputs));
        for (x, e) in self.states.iter().zip(&self.f) {
            s += &format!("{}' = {}\n", self.name(*x), self.show(e));
        }
        for (y, e) in self.outputs.iter().zip(&self.g) {
            s += &format!("{} = {}\n", self.name(*y), self.show(e));
        }
        s
    }

    /// Equality of the equations with states matched positionally.
    pub fn same_equations(&self, other: &OdeModel) -> bool {
        if self.dim() != other.dim() || self.g.len() != other.g.len() {
            return false;
        }
        let map: HashMap<usize, RatFunc> =
            other.states.iter().zip(&self.states).map(|(&o, &s)| (o, RatFunc::var(s))).collect();
        let Ok(o) = other.substitute(&map) else { return false };
        o.f == self.f && o.g == self.g
    }
}

/// Rows (output i, order m) of the Jacobian forming an invertible d x d block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianSelection {
    pub rows: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub universe: VarUniverse,
    pub states: Vec<usize>,
    pub params: Vec<usize>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub orders: Vec<usize>,
    /// components[i][j] = L^j(g_i), j = 0..=orders[i].
    pub components: Vec<Vec<RatFunc>>,
    /// Rank of the Jacobian with respect to the states.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Properness {
    pub proper: bool,
    pub fiber_degree: usize,
}

impl Parametrization {
    /// Wraps explicit components; orders are implied by the row lengths.
    pub fn new(
        universe: VarUniverse,
        states: Vec<usize>,
        params: Vec<usize>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        components: Vec<Vec<RatFunc>>,
    ) -> Self {
        let orders = components.iter().map(|r| r.len().saturating_sub(1)).collect();
        let mut p = Parametrization { universe, states, params, inputs, outputs, orders, components, rank: 0 };
        p.rank = rank(&p.jacobian());
        p
    }

    pub fn flat(&self) -> Vec<&RatFunc> {
        self.components.iter().flatten().collect()
    }

    /// Index pairs in the order of `flat`.
    pub fn row_ids(&self) -> Vec<(usize, usize)> {
        self.components.iter().enumerate().flat_map(|(i, r)| (0..r.len()).map(move |j| (i, j))).collect()
    }

    /// Full rank means rank d = number of states.
    pub fn full_rank(&self) -> bool {
        self.rank == self.states.len()
    }

    /// Diagnostic when the Jacobian is rank deficient.
    pub fn warning(&self) -> Option<String> {
        (!self.full_rank()).then(|| format!("Jacobian rank {} < {} states: not locally observable", self.rank, self.states.len()))
    }

    pub fn jacobian(&self) -> Matrix {
        self.flat().iter().map(|p| self.states.iter().map(|&x| p.diff(x)).collect()).collect()
    }

    /// Lexicographically first row set with nonzero determinant, drawn from
    /// rows (i, m) with m < n_i.
    pub fn select(&self) -> Option<JacobianSelection> {
        let d = self.states.len();
        let cand: Vec<(usize, usize)> = self.row_ids().into_iter().filter(|&(i, m)| m < self.orders[i]).collect();
        let jac: HashMap<(usize, usize), Vec<RatFunc>> = cand
            .iter()
            .map(|&(i, m)| ((i, m), self.states.iter().map(|&x| self.components[i][m].diff(x)).collect()))
            .collect();
        let mut idx: Vec<usize> = (0..d).collect();
        if cand.len() < d {
            return None;
        }
        loop {
            let m: Matrix = idx.iter().map(|&k| jac[&cand[k]].clone()).collect();
            if !det(&m).is_zero() {
                return Some(JacobianSelection { rows: idx.iter().map(|&k| cand[k]).collect() });
            }
            // next combination
            let mut k = d;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                if idx[k] < cand.len() - d + k {
                    break;
                }
            }
            idx[k] += 1;
            for j in k + 1..d {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// The realization x' = M^-1 (P_{i,m+1} - D_u(P_{i,m})).
    pub fn realization(&self, sel: &JacobianSelection) -> Result<OdeModel> {
        let mut u = self.universe.clone();
        let has_du = |r: &RatFunc, u: &VarUniverse| r.vars().into_iter().find(|&v| matches!(u.role(v), Role::Input(k) if k > 0));
        for (i, row) in self.components.iter().enumerate() {
            if let Some(v) = has_du(&row[0], &u) {
                return Err(Error::NotARealization(format!("output {} depends on {}", i, u.display(v))));
            }
        }
        let mut m: Matrix = Vec::new();
        let mut b = Vec::new();
        for &(i, j) in &sel.rows {
            let p = self.components[i].get(j + 1).ok_or_else(|| Error::Precondition("selected row has no successor".into()))?;
            let cur = &self.components[i][j];
            m.push(self.states.iter().map(|&x| cur.diff(x)).collect());
            b.push(p.sub(&input_shift(&mut u, cur)));
        }
        let f = solve(&m, &b).map_err(|_| Error::NotARealization("selected submatrix is singular".into()))?;
        for (k, e) in f.iter().enumerate() {
            if let Some(v) = has_du(e, &u) {
                return Err(Error::NotARealization(format!("state {} right-hand side depends on {}", u.display(self.states[k]), u.display(v))));
            }
        }
        let g = self.components.iter().map(|r| r[0].clone()).collect();
        OdeModel::new(u, self.states.clone(), self.params.clone(), self.inputs.clone(), self.outputs.clone(), f, g)
    }

    /// Generic fiber degree of x -> P(x): the dimension of
    /// Q(c, u, xbar)[x] / <P(x) - P(xbar)> : den^inf.
    pub fn properness_check(&self, opts: &GbOptions) -> Result<Properness> {
        let mut u = self.universe.clone();
        let bars: HashMap<usize, RatFunc> =
            self.states.iter().map(|&x| (x, RatFunc::var(u.fresh(&format!("{}_bar", u.name(x)), Role::Auxiliary)))).collect();
        let mut gens = Vec::new();
        let mut den = MPoly::one();
        for p in self.flat() {
            let q = p.subst_map(&bars)?;
            let e = p.sub(&q);
            gens.push(e.num().clone());
            den = &den * p.den();
        }
        let ideal = saturate(&Ideal::new(self.states.clone(), gens), &den, opts)?;
        let gb = groebner_basis(&ideal, &MonomialOrder::GrevLex, opts)?;
        if gb.is_unit() {
            return Err(Error::EmptyVariety);
        }
        let n = gb.quotient_dim().ok_or(Error::InfiniteFiber)?;
        Ok(Properness { proper: n == 1, fiber_degree: n })
    }
}
