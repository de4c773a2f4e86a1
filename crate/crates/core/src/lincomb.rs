use std::collections::BTreeMap;

use crate::field::Fp;

/// A finite Z/p-linear combination of keys. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, u64>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(fp: Fp, key: K, coeff: u64) -> Self {
        let mut c = Self::zero();
        c.add_term(fp, key, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> u64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, fp: Fp, key: K, coeff: u64) {
        let coeff = coeff % fp.p();
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot = fp.add(*slot, coeff);
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, fp: Fp, other: &LinComb<K>, scale: u64) {
        for (k, c) in other.iter() {
            self.add_term(fp, k.clone(), fp.mul(c, scale));
        }
    }

    pub fn scaled(&self, fp: Fp, scale: u64) -> Self {
        let mut out = Self::zero();
        out.add_scaled(fp, self, scale);
        out
    }

    pub fn map_keys<L: Ord + Clone>(&self, fp: Fp, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in self.iter() {
            out.add_term(fp, f(k), c);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, u64)> for LinComb<K> {
    /// Coefficients must already be reduced; duplicate keys overwrite.
    fn from_iter<I: IntoIterator<Item = (K, u64)>>(iter: I) -> Self {
        LinComb {
            terms: iter.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_terms() {
        let fp = Fp::new(5).unwrap();
        let mut a = LinComb::single(fp, "x", 2);
        a.add_term(fp, "x", 3);
        assert!(a.is_zero());
        a.add_term(fp, "y", 7);
        assert_eq!(a.coeff(&"y"), 2);
    }
}
