use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    State,
    /// Input derivative of the given order (0 = the input itself).
    Input(u32),
    /// Output derivative of the given order; only IO-equations use these.
    Output(u32),
    Parameter,
    TowerGen,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Var {
    /// Internal unique name, e.g. `u_2`.
    pub name: String,
    /// Name of the underlying signal for derivative roles, else `name`.
    pub base: String,
    pub role: Role,
}

impl Var {
    /// Name used in text I/O, e.g. `u''`.
    pub fn display(&self) -> String {
        match self.role {
            Role::Input(k) | Role::Output(k) => format!("{}{}", self.base, "'".repeat(k as usize)),
            _ => self.name.clone(),
        }
    }
}

/// Append-only table of variables. Polynomials refer to variables by index;
/// indices stay valid as the universe grows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VarUniverse {
    vars: Vec<Var>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

fn derived_name(base: &str, k: u32) -> String {
    if k == 0 {
        base.to_string()
    } else {
        format!("{base}_{k}")
    }
}

impl VarUniverse {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &Var {
        &self.vars[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn display(&self, i: usize) -> String {
        self.vars[i].display()
    }

    pub fn role(&self, i: usize) -> Role {
        self.vars[i].role
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        if self.index.len() != self.vars.len() {
            // deserialized universes arrive without the index
            return self.vars.iter().position(|v| v.name == name);
        }
        self.index.get(name).copied()
    }

    /// Resolves text names: `u''` maps to the order-2 derivative of `u`.
    pub fn lookup_display(&self, name: &str) -> Option<usize> {
        let k = name.chars().rev().take_while(|&c| c == '\'').count();
        if k == 0 {
            return self.get(name);
        }
        let base = &name[..name.len() - k];
        self.get(&derived_name(base, k as u32))
    }

    fn push(&mut self, name: String, base: String, role: Role) -> usize {
        let i = self.vars.len();
        self.index.insert(name.clone(), i);
        self.vars.push(Var { name, base, role });
        i
    }

    /// Adds a variable; fails if the name is taken.
    pub fn add(&mut self, name: &str, role: Role) -> Result<usize> {
        if self.get(name).is_some() {
            return Err(Error::DuplicateEquation(name.to_string()));
        }
        Ok(self.push(name.to_string(), name.to_string(), role))
    }

    /// Returns the index of `name`, creating it with `role` if absent.
    pub fn ensure(&mut self, name: &str, role: Role) -> usize {
        match self.get(name) {
            Some(i) => i,
            None => self.push(name.to_string(), name.to_string(), role),
        }
    }

    /// Adds a variable whose name avoids all existing ones, trying `prefix`
    /// first and then `prefix1`, `prefix2`, ...
    pub fn fresh(&mut self, prefix: &str, role: Role) -> usize {
        if self.get(prefix).is_none() {
            return self.push(prefix.to_string(), prefix.to_string(), role);
        }
        let mut k = 1;
        loop {
            let n = format!("{prefix}{k}");
            if self.get(&n).is_none() {
                return self.push(n.clone(), n, role);
            }
            k += 1;
        }
    }

    /// Derivative of order `k` of the signal at index `i`, created on demand
    /// together with all lower orders so orders stay contiguous.
    pub fn derivative(&mut self, i: usize, k: u32) -> usize {
        let (base, order, input) = match self.vars[i].role {
            Role::Input(o) => (self.vars[i].base.clone(), o, true),
            Role::Output(o) => (self.vars[i].base.clone(), o, false),
            _ => panic!("derivative of a non-signal variable"),
        };
        let mut last = i;
        for j in order + 1..=order + k {
            let name = derived_name(&base, j);
            last = match self.get(&name) {
                Some(x) => x,
                None => {
                    let role = if input { Role::Input(j) } else { Role::Output(j) };
                    self.push(name, base.clone(), role)
                }
            };
        }
        last
    }

    /// (base index, order) for signal variables.
    pub fn signal_of(&self, i: usize) -> Option<(usize, u32)> {
        match self.vars[i].role {
            Role::Input(k) | Role::Output(k) => {
                let b = self.get(&self.vars[i].base)?;
                Some((b, k))
            }
            _ => None,
        }
    }

    pub fn with_role(&self, pred: impl Fn(Role) -> bool) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| pred(self.vars[i].role)).collect()
    }

    /// Rebuilds the lookup index after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.vars.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
    }
}
