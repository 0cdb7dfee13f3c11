use crate::arith::Mono;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Monomial order over the ring variables of an ideal (global indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    GrevLex,
    /// Lexicographic in the ring's variable order.
    Lex,
    /// Front block compared first (grevlex inside), eliminating it.
    BlockElim(Vec<usize>),
    /// Several grevlex blocks, earlier blocks dominating; unlisted ring
    /// variables form a final block.
    Blocks(Vec<Vec<usize>>),
}

/// Order on local indices 0..n made of contiguous grevlex blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub(crate) blocks: Vec<(usize, usize)>,
}

impl TermOrder {
    pub fn grevlex(n: usize) -> Self {
        TermOrder { blocks: vec![(0, n)] }
    }

    pub fn lex(n: usize) -> Self {
        TermOrder { blocks: (0..n).map(|i| (i, i + 1)).collect() }
    }

    pub fn from_sizes(sizes: &[usize]) -> Self {
        let mut blocks = Vec::new();
        let mut s = 0;
        for &k in sizes {
            if k > 0 {
                blocks.push((s, s + k));
                s += k;
            }
        }
        TermOrder { blocks }
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        for &(lo, hi) in &self.blocks {
            let da: u32 = (lo..hi).map(|i| a.exp(i)).sum();
            let db: u32 = (lo..hi).map(|i| b.exp(i)).sum();
            if da != db {
                return da.cmp(&db);
            }
            for i in (lo..hi).rev() {
                let (x, y) = (a.exp(i), b.exp(i));
                if x != y {
                    return y.cmp(&x);
                }
            }
        }
        Ordering::Equal
    }

    /// Number of local variables covered.
    pub fn nvars(&self) -> usize {
        self.blocks.last().map(|b| b.1).unwrap_or(0)
    }
}

impl MonomialOrder {
    /// Local variable layout (local index -> global index) and term order.
    pub fn layout(&self, ring: &[usize]) -> (Vec<usize>, TermOrder) {
        match self {
            MonomialOrder::GrevLex => (ring.to_vec(), TermOrder::grevlex(ring.len())),
            MonomialOrder::Lex => (ring.to_vec(), TermOrder::lex(ring.len())),
            MonomialOrder::BlockElim(front) => {
                MonomialOrder::Blocks(vec![front.clone()]).layout(ring)
            }
            MonomialOrder::Blocks(bs) => {
                let mut perm = Vec::new();
                let mut sizes = Vec::new();
                for b in bs {
                    let members: Vec<usize> = ring.iter().copied().filter(|v| b.contains(v) && !perm.contains(v)).collect();
                    sizes.push(members.len());
                    perm.extend(members);
                }
                let rest: Vec<usize> = ring.iter().copied().filter(|v| !perm.contains(v)).collect();
                sizes.push(rest.len());
                perm.extend(rest);
                (perm, TermOrder::from_sizes(&sizes))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_elimination_dominates() {
        let o = TermOrder::from_sizes(&[1, 2]);
        // t > x^5 even though degree is lower
        assert_eq!(o.cmp(&Mono::var(0, 1), &Mono::var(1, 5)), Ordering::Greater);
        assert_eq!(o.cmp(&Mono::var(1, 2), &Mono::var(2, 1)), Ordering::Greater);
    }

    #[test]
    fn lex_order() {
        let o = TermOrder::lex(2);
        assert_eq!(o.cmp(&Mono::var(0, 1), &Mono::var(1, 9)), Ordering::Greater);
    }

    #[test]
    fn layout_permutes() {
        let (perm, o) = MonomialOrder::BlockElim(vec![7]).layout(&[3, 7, 5]);
        assert_eq!(perm, vec![7, 3, 5]);
        assert_eq!(o.blocks, vec![(0, 1), (1, 3)]);
    }
}
