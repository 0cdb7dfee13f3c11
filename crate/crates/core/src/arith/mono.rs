use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector with trailing zeros trimmed, so a monomial never needs to
/// know how many variables its universe holds.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(SmallVec<[u32; 8]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v: SmallVec<[u32; 8]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Mono(v)
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let mut m = Mono(SmallVec::from_slice(exps));
        m.trim();
        m
    }

    fn trim(&mut self) {
        while let Some(&0) = self.0.last() {
            self.0.pop();
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// One past the largest variable index present.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Nonzero (variable, exponent) pairs in increasing variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut v = a.0.clone();
        for (i, e) in b.0.iter().enumerate() {
            v[i] += e;
        }
        Mono(v)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        if self.0.len() > o.0.len() {
            return false;
        }
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if !o.divides(self) {
            return None;
        }
        let mut v = self.0.clone();
        for (i, e) in o.0.iter().enumerate() {
            v[i] -= e;
        }
        let mut m = Mono(v);
        m.trim();
        Some(m)
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        Mono((0..n).map(|i| self.exp(i).max(o.exp(i))).collect())
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let n = self.0.len().min(o.0.len());
        let mut m = Mono((0..n).map(|i| self.exp(i).min(o.exp(i))).collect());
        m.trim();
        m
    }

    pub fn is_coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|e| e * k).collect())
    }

    /// Drops variable `i` (sets its exponent to zero).
    pub fn without(&self, i: usize) -> Mono {
        if i >= self.0.len() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v[i] = 0;
        let mut m = Mono(v);
        m.trim();
        m
    }

    /// Renumbers variables through `map` (old index -> new index).
    pub fn remap(&self, map: &dyn Fn(usize) -> usize) -> Mono {
        let mut v: SmallVec<[u32; 8]> = SmallVec::new();
        for (i, e) in self.iter() {
            let j = map(i);
            if v.len() <= j {
                v.resize(j + 1, 0);
            }
            v[j] += e;
        }
        Mono(v)
    }

    /// Graded reverse lexicographic comparison with variable 0 largest.
    pub fn grevlex_cmp(&self, o: &Mono) -> Ordering {
        let (da, db) = (self.degree(), o.degree());
        if da != db {
            return da.cmp(&db);
        }
        let n = self.0.len().max(o.0.len());
        for i in (0..n).rev() {
            let (a, b) = (self.exp(i), o.exp(i));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.grevlex_cmp(o)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimmed_equality() {
        assert_eq!(Mono::from_exps(&[1, 0, 0]), Mono::var(0, 1));
        assert!(Mono::from_exps(&[0, 0]).is_one());
    }

    #[test]
    fn grevlex_basics() {
        let x = Mono::var(0, 1);
        let y = Mono::var(1, 1);
        let z = Mono::var(2, 1);
        assert!(x > y && y > z);
        // x*z < y^2 in grevlex
        assert!(x.mul(&z) < y.pow(2));
        assert!(Mono::var(2, 2) > x);
    }

    #[test]
    fn division() {
        let a = Mono::from_exps(&[2, 1]);
        let b = Mono::from_exps(&[1, 1]);
        assert_eq!(a.div(&b), Some(Mono::var(0, 1)));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.lcm(&Mono::var(2, 1)), Mono::from_exps(&[2, 1, 1]));
        assert_eq!(a.gcd(&Mono::var(2, 1)), Mono::one());
    }
}
