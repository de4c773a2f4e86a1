//! Free graded algebras on a finite generator list, behind one trait so the spectral
//! sequence engine can run over commutative and associative models alike.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::Fp;
use crate::lincomb::LinComb;
use crate::term::{Parity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    #[serde(skip)]
    pub term: Option<Term>,
    pub degree: u32,
    pub weight: u32,
    pub parity: Parity,
}

impl Generator {
    pub fn from_term(t: &Term) -> Self {
        Generator {
            name: t.render().to_string(),
            term: Some(t.clone()),
            degree: t.degree(),
            weight: t.weight(),
            parity: t.parity(),
        }
    }

    pub fn named(name: impl Into<String>, degree: u32, weight: u32) -> Self {
        Generator {
            name: name.into(),
            term: None,
            degree,
            weight,
            parity: Parity::of(degree),
        }
    }
}

/// A basis element: a sorted multiset of generator indices (commutative) or a word.
pub type Element = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Commutative,
    Associative,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Commutative => "commutative",
            AlgebraKind::Associative => "associative",
        })
    }
}

/// A derivation prescribed on generators; extended to elements by the graded Leibniz rule.
pub type Derivation = BTreeMap<u16, LinComb<Element>>;

pub trait GradedAlgebra: fmt::Debug + Send + Sync {
    fn kind(&self) -> AlgebraKind;

    fn generators(&self) -> &[Generator];

    /// Largest degree for which every basis element is present.
    fn max_degree(&self) -> u32;

    /// Largest weight for which every basis element (up to `max_degree`) is present.
    fn max_weight(&self) -> Option<u32>;

    /// An upper bound on the degree of any element of weight `w`, if one is known.
    fn top_degree_for_weight(&self, w: u32) -> Option<u32>;

    /// Every basis element of the given degree (and weight, if given), in a fixed order.
    fn basis(&self, degree: u32, weight: Option<u32>) -> Vec<Element>;

    /// Puts a product of generators in normal form: `(negative, element)`, or `None` if zero.
    fn normalize(&self, factors: Vec<u16>) -> Option<(bool, Element)>;

    fn degree_of(&self, e: &Element) -> u32 {
        e.iter()
            .map(|&g| self.generators()[g as usize].degree)
            .sum()
    }

    fn weight_of(&self, e: &Element) -> u32 {
        e.iter()
            .map(|&g| self.generators()[g as usize].weight)
            .sum()
    }

    fn render(&self, e: &Element) -> String {
        if e.is_empty() {
            return "1".into();
        }
        let gens = self.generators();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < e.len() {
            let mut j = i;
            while j < e.len() && e[j] == e[i] {
                j += 1;
            }
            let name = &gens[e[i] as usize].name;
            if j - i == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }

    /// Applies a derivation of degree -1 to one element via the graded Leibniz rule.
    fn apply_derivation(&self, fp: Fp, d: &Derivation, e: &Element) -> LinComb<Element> {
        let gens = self.generators();
        let mut out = LinComb::zero();
        let mut prefix_odd = false;
        for i in 0..e.len() {
            if let Some(value) = d.get(&e[i]) {
                for (term, c) in value.iter() {
                    let factors: Vec<u16> = e[..i]
                        .iter()
                        .chain(term.iter())
                        .chain(&e[i + 1..])
                        .copied()
                        .collect();
                    if let Some((neg, el)) = self.normalize(factors) {
                        out.add_term(fp, el, fp.signed(c, neg != prefix_odd));
                    }
                }
            }
            if gens[e[i] as usize].parity.is_odd() {
                prefix_odd = !prefix_odd;
            }
        }
        out
    }

    fn apply_derivation_comb(
        &self,
        fp: Fp,
        d: &Derivation,
        x: &LinComb<Element>,
    ) -> LinComb<Element> {
        let mut out = LinComb::zero();
        for (e, c) in x.iter() {
            out.add_scaled(fp, &self.apply_derivation(fp, d, e), c);
        }
        out
    }
}

fn check_generators(gens: &[Generator]) -> Result<()> {
    if gens.len() > u16::MAX as usize {
        return Err(invalid!("too many generators ({})", gens.len()));
    }
    if let Some(g) = gens.iter().find(|g| g.degree == 0 || g.weight == 0) {
        return Err(invalid!(
            "generator {} must have positive degree and weight",
            g.name
        ));
    }
    Ok(())
}

/// Bound of the form `slope * w - offset` on degrees of weight-`w` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightDegreeBound {
    pub slope: u32,
    pub offset: u32,
}

impl WeightDegreeBound {
    fn at(&self, w: u32) -> u32 {
        if w == 0 {
            0
        } else {
            (self.slope * w).saturating_sub(self.offset)
        }
    }
}

/// Free graded-commutative algebra: polynomial on even generators, exterior on odd ones
/// (at `p = 2` every generator is polynomial).
#[derive(Debug, Clone)]
pub struct FreeCommutative {
    generators: Vec<Generator>,
    exterior_odd: bool,
    max_degree: u32,
    max_weight: Option<u32>,
    bound: Option<WeightDegreeBound>,
}

impl FreeCommutative {
    pub fn new(
        generators: Vec<Generator>,
        exterior_odd: bool,
        max_degree: u32,
        max_weight: Option<u32>,
        bound: Option<WeightDegreeBound>,
    ) -> Result<Self> {
        check_generators(&generators)?;
        Ok(FreeCommutative {
            generators,
            exterior_odd,
            max_degree,
            max_weight,
            bound,
        })
    }

    fn enumerate(
        &self,
        start: usize,
        degree: u32,
        weight: Option<u32>,
        cur: &mut Element,
        out: &mut Vec<Element>,
    ) {
        if degree == 0 {
            if weight.is_none_or(|w| w == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for g in start..self.generators.len() {
            let gen = &self.generators[g];
            if gen.degree > degree || weight.is_some_and(|w| gen.weight > w) {
                continue;
            }
            let odd_once = self.exterior_odd && gen.parity.is_odd();
            if odd_once && cur.last() == Some(&(g as u16)) {
                continue;
            }
            cur.push(g as u16);
            self.enumerate(
                g,
                degree - gen.degree,
                weight.map(|w| w - gen.weight),
                cur,
                out,
            );
            cur.pop();
        }
    }
}

impl GradedAlgebra for FreeCommutative {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Commutative
    }

    fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn max_weight(&self) -> Option<u32> {
        self.max_weight
    }

    fn top_degree_for_weight(&self, w: u32) -> Option<u32> {
        if self.max_weight.is_some_and(|m| w > m) {
            return None;
        }
        self.bound.map(|b| b.at(w))
    }

    fn basis(&self, degree: u32, weight: Option<u32>) -> Vec<Element> {
        let mut out = Vec::new();
        self.enumerate(0, degree, weight, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    fn normalize(&self, mut factors: Vec<u16>) -> Option<(bool, Element)> {
        let mut negative = false;
        // insertion sort, counting transpositions of odd factors
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] > factors[j] {
                let a = &self.generators[factors[j - 1] as usize];
                let b = &self.generators[factors[j] as usize];
                if a.parity.is_odd() && b.parity.is_odd() {
                    negative = !negative;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        if self.exterior_odd
            && factors
                .windows(2)
                .any(|w| w[0] == w[1] && self.generators[w[0] as usize].parity.is_odd())
        {
            return None;
        }
        Some((negative, factors))
    }
}

/// Free associative (tensor) algebra.
#[derive(Debug, Clone)]
pub struct FreeAssociative {
    generators: Vec<Generator>,
    max_degree: u32,
    bound: Option<WeightDegreeBound>,
}

impl FreeAssociative {
    pub fn new(
        generators: Vec<Generator>,
        max_degree: u32,
        bound: Option<WeightDegreeBound>,
    ) -> Result<Self> {
        check_generators(&generators)?;
        Ok(FreeAssociative {
            generators,
            max_degree,
            bound,
        })
    }

    fn enumerate(
        &self,
        degree: u32,
        weight: Option<u32>,
        cur: &mut Element,
        out: &mut Vec<Element>,
    ) {
        if degree == 0 {
            if weight.is_none_or(|w| w == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.degree > degree || weight.is_some_and(|w| gen.weight > w) {
                continue;
            }
            cur.push(g as u16);
            self.enumerate(
                degree - gen.degree,
                weight.map(|w| w - gen.weight),
                cur,
                out,
            );
            cur.pop();
        }
    }
}

impl GradedAlgebra for FreeAssociative {
    fn kind(&self) -> AlgebraKind {
        AlgebraKind::Associative
    }

    fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn max_weight(&self) -> Option<u32> {
        None
    }

    fn top_degree_for_weight(&self, w: u32) -> Option<u32> {
        self.bound.map(|b| b.at(w))
    }

    fn basis(&self, degree: u32, weight: Option<u32>) -> Vec<Element> {
        let mut out = Vec::new();
        self.enumerate(degree, weight, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    fn normalize(&self, factors: Vec<u16>) -> Option<(bool, Element)> {
        Some((false, factors))
    }
}

/// Number of basis elements per degree `0..=max_degree` of a free algebra on the given
/// generator degrees/parities, by generating function (no enumeration).
pub fn free_dimensions(
    kind: AlgebraKind,
    generators: &[(u32, Parity)],
    exterior_odd: bool,
    max_degree: u32,
) -> Vec<u128> {
    let len = max_degree as usize + 1;
    let mut series = vec![0u128; len];
    series[0] = 1;
    match kind {
        AlgebraKind::Commutative => {
            for &(d, parity) in generators {
                let d = d as usize;
                if d == 0 || d >= len {
                    continue;
                }
                if exterior_odd && parity.is_odd() {
                    // multiply by (1 + t^d)
                    for i in (d..len).rev() {
                        series[i] += series[i - d];
                    }
                } else {
                    // multiply by 1 / (1 - t^d)
                    for i in d..len {
                        series[i] += series[i - d];
                    }
                }
            }
        }
        AlgebraKind::Associative => {
            // T(V) = 1 / (1 - V(t))
            for i in 1..len {
                series[i] = generators
                    .iter()
                    .filter(|(d, _)| *d as usize <= i && *d > 0)
                    .map(|(d, _)| series[i - *d as usize])
                    .sum();
            }
        }
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp3() -> Fp {
        Fp::new(3).unwrap()
    }

    fn tensor_uv() -> FreeAssociative {
        FreeAssociative::new(
            vec![Generator::named("u", 3, 1), Generator::named("v", 4, 1)],
            20,
            None,
        )
        .unwrap()
    }

    #[test]
    fn leibniz_on_a_word() {
        // d(vv) = uv + vu when dv = u and v is even
        let alg = tensor_uv();
        let mut d = Derivation::new();
        d.insert(1, LinComb::single(fp3(), vec![0], 1));
        let got = alg.apply_derivation(fp3(), &d, &vec![1, 1]);
        let mut want = LinComb::zero();
        want.add_term(fp3(), vec![0, 1], 1);
        want.add_term(fp3(), vec![1, 0], 1);
        assert_eq!(got, want);
    }

    #[test]
    fn odd_generators_square_to_zero() {
        let alg = FreeCommutative::new(
            vec![Generator::named("a", 2, 1), Generator::named("b", 3, 1)],
            true,
            20,
            None,
            None,
        )
        .unwrap();
        assert_eq!(alg.normalize(vec![1, 1]), None);
        assert_eq!(alg.normalize(vec![1, 0]), Some((false, vec![0, 1])));
        assert_eq!(alg.basis(6, None), vec![vec![0, 0, 0]]);
        assert_eq!(alg.render(&vec![0, 0, 1]), "a^2*b");
    }

    #[test]
    fn generating_function_matches_enumeration() {
        let gens = vec![
            Generator::named("a", 2, 1),
            Generator::named("b", 3, 1),
            Generator::named("c", 5, 2),
            Generator::named("d", 7, 2),
        ];
        let alg = FreeCommutative::new(gens.clone(), true, 30, None, None).unwrap();
        let spec: Vec<_> = gens.iter().map(|g| (g.degree, g.parity)).collect();
        let series = free_dimensions(AlgebraKind::Commutative, &spec, true, 30);
        for d in 0..=30 {
            assert_eq!(
                alg.basis(d, None).len() as u128,
                series[d as usize],
                "degree {d}"
            );
        }
        let t = tensor_uv();
        let spec = [(3, Parity::Odd), (4, Parity::Even)];
        let series = free_dimensions(AlgebraKind::Associative, &spec, true, 20);
        for d in 0..=20 {
            assert_eq!(t.basis(d, None).len() as u128, series[d as usize]);
        }
    }
}
