//! Independent count of primitives in the tensor algebra T(σu, σv) over Z/p.
//!
//! The primitives are the kernel of the reduced unshuffle coproduct, computed by exact
//! rank in each (#σu, #σv) multidegree. Nothing here touches the Lie basis code.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::{Fp, Matrix};
use crate::term::Grading;

/// Default bound on the number of words in a single multidegree.
pub const DEFAULT_WORD_LIMIT: usize = 4096;

fn words(a: usize, b: usize) -> Vec<Vec<u8>> {
    let len = a + b;
    let mut out = Vec::new();
    for mask in 0u32..(1 << len) {
        if mask.count_ones() as usize == b {
            out.push(
                (0..len)
                    .map(|i| ((mask >> (len - 1 - i)) & 1) as u8)
                    .collect(),
            );
        }
    }
    out
}

/// Dimension of the primitives in each tensor degree `1..=max_degree`.
pub fn primitive_dims_oracle(
    grading: Grading,
    max_degree: u32,
    word_limit: usize,
) -> Result<BTreeMap<u32, usize>> {
    let fp = Fp::new(grading.p)?;
    let du = 2 * grading.n - 1;
    let dv = 2 * grading.n;
    let mut out = BTreeMap::new();
    for d in 1..=max_degree {
        out.insert(d, 0);
    }
    for a in 0..=(max_degree / du) {
        for b in 0..=((max_degree - a * du) / dv) {
            if a + b == 0 {
                continue;
            }
            let degree = a * du + b * dv;
            let count = binomial((a + b) as u64, b as u64);
            if count > word_limit as u64 {
                return Err(Error::ResourceLimit(format!(
                    "{count} words in degree {degree} exceeds limit {word_limit}"
                )));
            }
            *out.get_mut(&degree).unwrap() += primitive_dim(fp, a as usize, b as usize);
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn primitive_dim(fp: Fp, a: usize, b: usize) -> usize {
    let source = words(a, b);
    let len = a + b;
    if len == 1 {
        return 1;
    }
    let mut rows: HashMap<(Vec<u8>, Vec<u8>), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, u64)> = Vec::new();
    for (col, w) in source.iter().enumerate() {
        for mask in 1u32..((1 << len) - 1) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            // Koszul sign: each left letter passes every earlier right letter.
            let mut negative = false;
            let mut right_odd = 0u32;
            for (i, &l) in w.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    if l == 0 && right_odd % 2 == 1 {
                        negative = !negative;
                    }
                    left.push(l);
                } else {
                    if l == 0 {
                        right_odd += 1;
                    }
                    right.push(l);
                }
            }
            let next = rows.len();
            let row = *rows.entry((left, right)).or_insert(next);
            entries.push((row, col, fp.signed(1, negative)));
        }
    }
    let mut m = Matrix::zeros(rows.len(), source.len());
    for (r, c, x) in entries {
        let cur = m.get(r, c);
        m.set(r, c, fp.add(cur, x));
    }
    source.len() - m.rank(fp)
}
