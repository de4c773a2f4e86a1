//! Free graded Lie algebra on `u`, `v`: a super-Lyndon basis and normal forms computed
//! through the embedding into the tensor algebra T(σu, σv).
//!
//! In the tensor algebra `σu` has odd degree `2n-1` and `σv` even degree `2n`; a bracket
//! maps to the graded commutator `ab - (-1)^{|a||b|} ba`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{invalid, Error, Result};
use crate::field::{Fp, SpanSolver};
use crate::lincomb::LinComb;
use crate::term::{Grading, Shape, Term};

/// A word in the letters `0 = σu`, `1 = σv`.
pub type Word = Vec<u8>;

pub(crate) fn word_is_odd(w: &[u8]) -> bool {
    w.iter().filter(|&&l| l == 0).count() % 2 == 1
}

/// Image of a bracket term in the tensor algebra.
pub fn embed(fp: Fp, term: &Term) -> Result<LinComb<Word>> {
    match term.shape() {
        Shape::GenU => Ok(LinComb::single(fp, vec![0], 1)),
        Shape::GenV => Ok(LinComb::single(fp, vec![1], 1)),
        Shape::Bracket(a, b) => {
            let ea = embed(fp, a)?;
            let eb = embed(fp, b)?;
            Ok(graded_commutator(fp, &ea, &eb))
        }
        _ => Err(invalid!("{term} has no tensor-algebra image")),
    }
}

/// `[x, y] = xy - (-1)^{|x||y|} yx` for homogeneous combinations of words.
pub fn graded_commutator(fp: Fp, x: &LinComb<Word>, y: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let c = fp.mul(ca, cb);
            let ab: Word = a.iter().chain(b).copied().collect();
            let ba: Word = b.iter().chain(a).copied().collect();
            out.add_term(fp, ab, c);
            let both_odd = word_is_odd(a) && word_is_odd(b);
            out.add_term(fp, ba, fp.signed(c, !both_odd));
        }
    }
    out
}

/// The Bockstein derivation on T(σu, σv) with `σv ↦ σu`, extended by the graded Leibniz rule.
pub fn tensor_bockstein(fp: Fp, x: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::zero();
    for (w, c) in x.iter() {
        let mut prefix_odd = false;
        for i in 0..w.len() {
            if w[i] == 1 {
                let mut img = w.clone();
                img[i] = 0;
                out.add_term(fp, img, fp.signed(c, prefix_odd));
            } else {
                prefix_odd = !prefix_odd;
            }
        }
    }
    out
}

/// All Lyndon words over {0 < 1} of length `1..=max_len` (Duval's generation order).
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(l) => *l = 1,
            None => break,
        }
    }
    out
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization `w = w1 w2` with `w2` the longest proper Lyndon suffix.
fn standard_factorization(w: &[u8]) -> (&[u8], &[u8]) {
    let i = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("length >= 2");
    (&w[..i], &w[i..])
}

/// Standard bracketing, with each bracket written lighter factor first.
fn bracket_of_word(g: &Grading, w: &[u8]) -> Term {
    if w.len() == 1 {
        return if w[0] == 0 { g.u() } else { g.v() };
    }
    let (l, r) = standard_factorization(w);
    let a = bracket_of_word(g, l);
    let b = bracket_of_word(g, r);
    if b.weight() < a.weight() {
        g.bracket(&b, &a)
    } else {
        g.bracket(&a, &b)
    }
}

fn words_with_multidegree(a: u32, b: u32) -> Vec<Word> {
    fn rec(a: u32, b: u32, cur: &mut Word, out: &mut Vec<Word>) {
        if a == 0 && b == 0 {
            out.push(cur.clone());
            return;
        }
        if a > 0 {
            cur.push(0);
            rec(a - 1, b, cur, out);
            cur.pop();
        }
        if b > 0 {
            cur.push(1);
            rec(a, b - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(a, b, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone)]
struct Slice {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    members: Vec<usize>,
    solver: SpanSolver,
}

/// Basis of the free graded Lie algebra on `u`, `v` up to a double-loop degree cutoff.
#[derive(Debug, Clone)]
pub struct LieBasis {
    grading: Grading,
    fp: Fp,
    max_degree: u32,
    elements: Vec<Term>,
    slices: BTreeMap<(u32, u32), Slice>,
}

impl LieBasis {
    /// Lists every basis term of degree at most `max_degree` (double-loop grading).
    ///
    /// Odd primes get Lyndon words plus `L[w,w]` for each Lyndon `w` of odd tensor degree;
    /// at `p = 2` squares of brackets vanish and only Lyndon words are listed.
    pub fn new(grading: Grading, max_degree: u32) -> Result<Self> {
        Self::with_weight_cap(grading, max_degree, u32::MAX)
    }

    /// Same as [`LieBasis::new`], restricted to terms of weight at most `max_weight`.
    pub fn with_weight_cap(grading: Grading, max_degree: u32, max_weight: u32) -> Result<Self> {
        let n = grading.n;
        if max_degree < 2 * n - 2 {
            return Err(invalid!(
                "max_degree {max_degree} is below the bottom generator degree {}",
                2 * n - 2
            ));
        }
        let fp = Fp::new(grading.p)?;
        let top = max_degree + 1;
        let max_len = ((top / (2 * n - 1)) as usize).min(max_weight as usize);
        let susp = |w: &[u8]| -> u32 { w.iter().map(|&l| 2 * n - 1 + l as u32).sum() };

        let mut elements = Vec::new();
        for w in lyndon_words(max_len) {
            if susp(&w) > top {
                continue;
            }
            let t = bracket_of_word(&grading, &w);
            if grading.p != 2
                && word_is_odd(&w)
                && 2 * susp(&w) <= top
                && 2 * t.weight() <= max_weight
            {
                elements.push(grading.bracket(&t, &t));
            }
            elements.push(t);
        }
        elements.sort();

        let mut grouped: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
        for (i, t) in elements.iter().enumerate() {
            grouped.entry(t.multidegree()).or_default().push(i);
        }
        let mut slices = BTreeMap::new();
        for ((a, b), members) in grouped {
            let words = words_with_multidegree(a, b);
            let index: HashMap<Word, usize> = words
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, w)| (w, i))
                .collect();
            let family: Vec<Vec<u64>> = members
                .iter()
                .map(|&i| Ok(to_dense(&embed(fp, &elements[i])?, &index)))
                .collect::<Result<_>>()?;
            let solver = SpanSolver::new(fp, words.len(), &family)?;
            slices.insert(
                (a, b),
                Slice {
                    words,
                    index,
                    members,
                    solver,
                },
            );
        }
        Ok(LieBasis {
            grading,
            fp,
            max_degree,
            elements,
            slices,
        })
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn elements(&self) -> &[Term] {
        &self.elements
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    /// Expresses a homogeneous tensor element of the given multidegree in the basis.
    pub fn coordinates(&self, multidegree: (u32, u32), x: &LinComb<Word>) -> Result<LinComb<Term>> {
        if x.is_zero() {
            return Ok(LinComb::zero());
        }
        let (a, b) = multidegree;
        let n = self.grading.n;
        let degree = a * (2 * n - 1) + b * 2 * n - 1;
        if degree > self.max_degree {
            return Err(Error::CutoffExceeded(format!(
                "bracket degree {degree} exceeds Lie basis cutoff {}",
                self.max_degree
            )));
        }
        let Some(slice) = self.slices.get(&multidegree) else {
            return Err(Error::OracleMismatch(format!(
                "nonzero tensor element in multidegree {multidegree:?} with no basis elements"
            )));
        };
        let v = to_dense(x, &slice.index);
        let coeffs = slice.solver.solve(self.fp, &v).ok_or_else(|| {
            Error::OracleMismatch(format!(
                "tensor element is not in the span of the Lie basis at {multidegree:?}"
            ))
        })?;
        Ok(slice
            .members
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| *c != 0)
            .map(|(&i, c)| (self.elements[i].clone(), c))
            .collect())
    }

    /// Expansion of a bracket expression in the basis.
    pub fn normal_form(&self, expr: &Term) -> Result<LinComb<Term>> {
        if !expr.is_lie() {
            return Err(invalid!("{expr} is not a bracket expression in u, v"));
        }
        self.coordinates(expr.multidegree(), &embed(self.fp, expr)?)
    }

    /// Normal form of a combination of bracket expressions.
    pub fn normalize(&self, x: &LinComb<Term>) -> Result<LinComb<Term>> {
        let mut out = LinComb::zero();
        for (t, c) in x.iter() {
            out.add_scaled(self.fp, &self.normal_form(t)?, c);
        }
        Ok(out)
    }

    /// Image of a combination of basis terms in the tensor algebra.
    pub fn embed_comb(&self, x: &LinComb<Term>) -> Result<LinComb<Word>> {
        let mut out = LinComb::zero();
        for (t, c) in x.iter() {
            out.add_scaled(self.fp, &embed(self.fp, t)?, c);
        }
        Ok(out)
    }

    /// The Bockstein `v ↦ u` on a bracket term, computed in the tensor algebra and
    /// pulled back to the basis.
    pub fn bockstein(&self, term: &Term) -> Result<LinComb<Term>> {
        let (a, b) = term.multidegree();
        if b == 0 {
            return Ok(LinComb::zero());
        }
        let image = tensor_bockstein(self.fp, &embed(self.fp, term)?);
        self.coordinates((a + 1, b - 1), &image)
    }

    pub fn words_in(&self, multidegree: (u32, u32)) -> Option<&[Word]> {
        self.slices.get(&multidegree).map(|s| s.words.as_slice())
    }

    /// Basis count per tensor-algebra degree (double-loop degree + 1).
    pub fn counts_by_suspended_degree(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for t in &self.elements {
            *out.entry(t.degree() + 1).or_insert(0) += 1;
        }
        out
    }

    /// Number of restricted powers `c^{p^k}` (k ≥ 1) per tensor degree up to `max_suspended`.
    ///
    /// At odd primes only even-degree basis elements have restricted powers.
    pub fn restricted_power_counts(&self, max_suspended: u32) -> BTreeMap<u32, usize> {
        let p = self.grading.p as u32;
        let mut out = BTreeMap::new();
        for t in &self.elements {
            let d = t.degree() + 1;
            if p != 2 && d % 2 == 1 {
                continue;
            }
            let mut pd = d * p;
            while pd <= max_suspended {
                *out.entry(pd).or_insert(0) += 1;
                pd *= p;
            }
        }
        out
    }
}

fn to_dense(x: &LinComb<Word>, index: &HashMap<Word, usize>) -> Vec<u64> {
    let mut v = vec![0; index.len()];
    for (w, c) in x.iter() {
        v[index[w]] = c;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(p: u64, n: u32, max: u32) -> LieBasis {
        LieBasis::new(Grading::new(p, n).unwrap(), max).unwrap()
    }

    fn listing(b: &LieBasis) -> Vec<(String, u32, u32)> {
        b.elements()
            .iter()
            .map(|t| (t.render().to_string(), t.degree(), t.weight()))
            .collect()
    }

    #[test]
    fn lyndon_words_of_small_length() {
        let ws = lyndon_words(4);
        let mut names: Vec<String> = ws
            .iter()
            .map(|w| w.iter().map(|&l| (b'a' + l) as char).collect())
            .collect();
        names.sort();
        assert_eq!(
            names,
            ["a", "aaab", "aab", "aabb", "ab", "abb", "abbb", "b"]
        );
        assert!(ws.iter().all(|w| is_lyndon(w)));
    }

    #[test]
    fn basis_to_degree_six() {
        let b = basis(3, 2, 6);
        assert_eq!(
            listing(&b),
            vec![
                ("u".into(), 2, 1),
                ("v".into(), 3, 1),
                ("L[u,u]".into(), 5, 2),
                ("L[u,v]".into(), 6, 2)
            ]
        );
    }

    #[test]
    fn basis_to_degree_ten() {
        let b = basis(3, 2, 10);
        assert_eq!(
            listing(&b),
            vec![
                ("u".into(), 2, 1),
                ("v".into(), 3, 1),
                ("L[u,u]".into(), 5, 2),
                ("L[u,v]".into(), 6, 2),
                ("L[u,L[u,v]]".into(), 9, 3),
                ("L[v,L[u,v]]".into(), 10, 3),
            ]
        );
    }

    #[test]
    fn bottom_only() {
        assert_eq!(listing(&basis(5, 2, 2)), vec![("u".to_string(), 2, 1)]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grading::new(3, 1).is_err());
        assert!(LieBasis::new(Grading::new(3, 2).unwrap(), 1).is_err());
    }

    #[test]
    fn v_bracket_v_vanishes() {
        let b = basis(3, 2, 12);
        let g = b.grading();
        assert!(b.normal_form(&g.bracket(&g.v(), &g.v())).unwrap().is_zero());
    }

    #[test]
    fn basis_elements_are_fixed() {
        let b = basis(5, 2, 14);
        for t in b.elements() {
            assert_eq!(
                b.normal_form(t).unwrap(),
                LinComb::single(b.field(), t.clone(), 1)
            );
        }
    }

    #[test]
    fn swapped_bracket_sign_matches_commutator_expansion() {
        // [σv,σu] = vu - uv and [σu,σv] = uv - vu, so the swap is exactly -1.
        let b = basis(3, 2, 8);
        let g = b.grading();
        let nf = b.normal_form(&g.bracket(&g.v(), &g.u())).unwrap();
        let uv = g.bracket(&g.u(), &g.v());
        assert_eq!(nf, LinComb::single(b.field(), uv, 2));
    }

    #[test]
    fn bockstein_of_uv_bracket() {
        let b = basis(3, 2, 8);
        let g = b.grading();
        let d = b.bockstein(&g.bracket(&g.u(), &g.v())).unwrap();
        // β[σu,σv] = -[σu,σu]
        assert_eq!(d, LinComb::single(b.field(), g.bracket(&g.u(), &g.u()), 2));
    }
}
