//! Line-oriented model format:
//!
//! ```text
//! # comment
//! states: x1, x2
//! params: a, b
//! inputs: u
//! outputs: y
//! x1' = a*x1 - b*x1*x2
//! x2' = -x2
//! y = x1
//! ```
//!
//! Declarations may appear in any order relative to equations. Expressions
//! are rational in the declared states, parameters and inputs.

use crate::arith::text::parse_expr_at;
use crate::arith::{RatFunc, Role, VarUniverse};
use crate::error::{Error, Result};
use crate::model::OdeModel;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_alphabetic() || ch == '_') && c.all(|ch| ch.is_alphanumeric() || ch == '_')
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

pub fn parse_model(text: &str) -> Result<OdeModel> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line { no: i + 1, text: l.split('#').next().unwrap_or("") })
        .filter(|l| !l.text.trim().is_empty())
        .collect();
    let sections = [("states", Role::State), ("params", Role::Parameter), ("inputs", Role::Input(0)), ("outputs", Role::Output(0))];
    let mut u = VarUniverse::new();
    let mut lists: [Vec<usize>; 4] = Default::default();
    let mut seen = [false; 4];
    let mut eqs: Vec<&Line> = Vec::new();
    for l in &lines {
        let t = l.text.trim_start();
        let head = t.split(':').next().unwrap_or("").trim();
        if let Some(k) = sections.iter().position(|(s, _)| *s == head).filter(|_| t.contains(':')) {
            if seen[k] {
                return Err(perr(l.no, 1, format!("section `{head}` declared twice")));
            }
            seen[k] = true;
            let body = &t[t.find(':').unwrap() + 1..];
            for name in body.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                if !is_ident(name) {
                    return Err(perr(l.no, 1, format!("invalid name `{name}`")));
                }
                let v = u.add(name, sections[k].1).map_err(|_| perr(l.no, 1, format!("`{name}` declared twice")))?;
                lists[k].push(v);
            }
        } else {
            eqs.push(l);
        }
    }
    let [states, params, inputs, outputs] = lists;
    if outputs.is_empty() {
        return Err(perr(lines.last().map(|l| l.no).unwrap_or(1), 1, "no outputs declared"));
    }
    if states.is_empty() {
        return Err(perr(1, 1, "no states declared"));
    }
    let mut f: Vec<Option<RatFunc>> = vec![None; states.len()];
    let mut g: Vec<Option<RatFunc>> = vec![None; outputs.len()];
    let resolve = |n: &str| u.get(n).filter(|&v| !matches!(u.role(v), Role::Output(_)));
    for l in eqs {
        let Some(eq) = l.text.find('=') else {
            return Err(perr(l.no, 1, "expected `name' = expr`, `name = expr` or a section header"));
        };
        let lhs = l.text[..eq].trim();
        let col = l.text[..eq + 1].chars().count() + 1;
        let rhs = parse_expr_at(&l.text[eq + 1..], &resolve, l.no, col)?;
        let (name, derived) = match lhs.strip_suffix('\'') {
            Some(n) => (n.trim(), true),
            None => (lhs, false),
        };
        let v = u.get(name).ok_or_else(|| Error::UndeclaredSymbol(lhs.to_string()))?;
        let slot = match (derived, u.role(v)) {
            (true, Role::State) => &mut f[states.iter().position(|&s| s == v).unwrap()],
            (false, Role::Output(_)) => &mut g[outputs.iter().position(|&s| s == v).unwrap()],
            (true, _) => return Err(perr(l.no, 1, format!("`{name}` is not a state"))),
            (false, _) => return Err(perr(l.no, 1, format!("`{name}` is not an output"))),
        };
        if slot.is_some() {
            return Err(Error::DuplicateEquation(lhs.to_string()));
        }
        *slot = Some(rhs);
    }
    let missing = |vs: &[usize], es: &[Option<RatFunc>], suffix: &str| {
        vs.iter().zip(es).find(|(_, e)| e.is_none()).map(|(v, _)| perr(1, 1, format!("missing equation for `{}{suffix}`", u.name(*v))))
    };
    if let Some(e) = missing(&states, &f, "'").or_else(|| missing(&outputs, &g, "")) {
        return Err(e);
    }
    let f = f.into_iter().map(Option::unwrap).collect();
    let g = g.into_iter().map(Option::unwrap).collect();
    OdeModel::new(u, states, params, inputs, outputs, f, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LV: &str = "# Lotka-Volterra\nstates: x1, x2\nparams: a, b, c, d\noutputs: y\nx1' = a*x1 - b*x1*x2\nx2' = -c*x2 + d*x1*x2\ny = x1\n";

    #[test]
    fn lotka_volterra() {
        let m = parse_model(LV).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.params.len(), 4);
        assert_eq!(m.show(&m.f[0]), "-x1*x2*b + x1*a");
    }

    #[test]
    fn round_trip() {
        let m = parse_model(LV).unwrap();
        let again = parse_model(&m.to_text()).unwrap();
        assert_eq!(m, again);
        assert_eq!(m.to_text(), again.to_text());
    }

    #[test]
    fn errors() {
        let bad = "states: x\noutputs: y\nx' = x\ny = x3\n";
        assert_eq!(parse_model(bad), Err(Error::UndeclaredSymbol("x3".into())));
        let none = "states: x\noutputs:\nx' = x\n";
        assert!(matches!(parse_model(none), Err(Error::Parse { .. })));
        let dup = "states: x\noutputs: y\nx' = x\nx' = 1\ny = x\n";
        assert_eq!(parse_model(dup), Err(Error::DuplicateEquation("x'".into())));
        let col = "states: x\noutputs: y\nx' = x +\ny = x\n";
        assert!(matches!(parse_model(col), Err(Error::Parse { line: 3, .. })));
    }
}
