//! Generator tables for H_*(Ω²P^{2n+1}(p^r); Z/p), monomial bases by (degree, weight),
//! Poincaré series, and the weight-`j` summands.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{
    free_dimensions, AlgebraKind, Element, FreeCommutative, Generator, GradedAlgebra,
    WeightDegreeBound,
};
use crate::error::{invalid, Error, Result};
use crate::lie::LieBasis;
use crate::lincomb::LinComb;
use crate::term::{Coefficients, Grading, Term};

#[derive(Debug, Clone)]
pub struct GeneratorTable {
    coeffs: Coefficients,
    grading: Grading,
    lie: Arc<LieBasis>,
    generators: Vec<Term>,
    algebra: FreeCommutative,
    max_degree: u32,
    max_weight: u32,
}

/// Builds the full generator list within the cutoffs.
///
/// For odd `p`: every Lie basis term, plus `Q1^k[c]`, `bQ1^k[c]` for odd-degree basis terms
/// `c`. For `p = 2` only weights up to 2 are supported.
pub fn generator_table(
    coeffs: Coefficients,
    n: u32,
    max_degree: u32,
    max_weight: u32,
) -> Result<GeneratorTable> {
    let grading = Grading::new(coeffs.p, n)?;
    if !coeffs.is_odd() && max_weight > 2 {
        return Err(invalid!(
            "p = 2 tables are limited to weight 2, requested {max_weight}"
        ));
    }
    if max_weight == 0 {
        return Err(invalid!("max_weight must be at least 1"));
    }
    let lie = LieBasis::with_weight_cap(grading, max_degree, max_weight)?;
    let p = coeffs.p;
    let mut generators: Vec<Term> = lie.elements().to_vec();
    for c in lie.elements() {
        if coeffs.is_odd() && !c.parity().is_odd() {
            continue;
        }
        let mut k = 1u32;
        loop {
            let pk = p.pow(k) as u32;
            if pk * c.weight() > max_weight || pk * (c.degree() + 1) - 2 > max_degree {
                break;
            }
            let q = grading.q(k, c)?;
            if q.degree() <= max_degree {
                generators.push(q);
            }
            if coeffs.is_odd() {
                generators.push(grading.beta_q(k, c)?);
            }
            k += 1;
        }
    }
    generators.sort();
    let algebra = FreeCommutative::new(
        generators.iter().map(Generator::from_term).collect(),
        coeffs.is_odd(),
        max_degree,
        Some(max_weight),
        Some(WeightDegreeBound {
            slope: 2 * n,
            offset: 1,
        }),
    )?;
    Ok(GeneratorTable {
        coeffs,
        grading,
        lie: Arc::new(lie),
        generators,
        algebra,
        max_degree,
        max_weight,
    })
}

impl GeneratorTable {
    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn n(&self) -> u32 {
        self.grading.n
    }

    pub fn lie(&self) -> &LieBasis {
        &self.lie
    }

    pub fn generators(&self) -> &[Term] {
        &self.generators
    }

    pub fn algebra(&self) -> &FreeCommutative {
        &self.algebra
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn index_of(&self, t: &Term) -> Option<u16> {
        self.generators.binary_search(t).ok().map(|i| i as u16)
    }

    pub fn monomial(&self, e: &Element) -> Monomial {
        let mut factors: Vec<(Term, u32)> = Vec::new();
        for &g in e {
            let t = &self.generators[g as usize];
            match factors.last_mut() {
                Some((last, exp)) if last == t => *exp += 1,
                _ => factors.push((t.clone(), 1)),
            }
        }
        Monomial {
            degree: self.algebra.degree_of(e),
            weight: self.algebra.weight_of(e),
            factors,
            element: e.clone(),
        }
    }

    /// Writes a combination of generator terms as a combination of degree-one monomials.
    pub fn terms_to_elements(&self, x: &LinComb<Term>) -> Result<LinComb<Element>> {
        let fp = self.coeffs.field();
        let mut out = LinComb::zero();
        for (t, c) in x.iter() {
            let g = self.index_of(t).ok_or_else(|| {
                Error::CutoffExceeded(format!("{t} is not in the generator table"))
            })?;
            out.add_term(fp, vec![g], c);
        }
        Ok(out)
    }

    fn check_slice(&self, degree: u32, weight: Option<u32>) -> Result<()> {
        if degree > self.max_degree {
            return Err(Error::CutoffExceeded(format!(
                "degree {degree} exceeds table cutoff {}",
                self.max_degree
            )));
        }
        match weight {
            Some(w) if w > self.max_weight => Err(Error::CutoffExceeded(format!(
                "weight {w} exceeds table cutoff {}",
                self.max_weight
            ))),
            None if degree / (2 * self.n() - 2) > self.max_weight => {
                Err(Error::CutoffExceeded(format!(
                    "degree {degree} holds monomials of weight up to {} but the table stops at weight {}",
                    degree / (2 * self.n() - 2),
                    self.max_weight
                )))
            }
            _ => Ok(()),
        }
    }
}

/// A basis monomial of the free graded-commutative algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub factors: Vec<(Term, u32)>,
    pub degree: u32,
    pub weight: u32,
    pub element: Element,
}

impl Monomial {
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(t, e)| {
                if *e == 1 {
                    t.to_string()
                } else {
                    format!("{t}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

pub fn monomial_basis(
    table: &GeneratorTable,
    degree: u32,
    weight: Option<u32>,
) -> Result<Vec<Monomial>> {
    table.check_slice(degree, weight)?;
    Ok(table
        .algebra
        .basis(degree, weight)
        .iter()
        .map(|e| table.monomial(e))
        .collect())
}

/// Coefficients of the Poincaré series up to `max_degree`, by enumeration, checked against
/// the closed-form product over generators.
pub fn poincare_series(table: &GeneratorTable, max_degree: u32) -> Result<Vec<u128>> {
    let mut counted = Vec::new();
    for d in 0..=max_degree {
        table.check_slice(d, None)?;
        counted.push(table.algebra.basis(d, None).len() as u128);
    }
    let spec: Vec<_> = table
        .generators
        .iter()
        .map(|t| (t.degree(), t.parity()))
        .collect();
    let product = free_dimensions(
        AlgebraKind::Commutative,
        &spec,
        table.coeffs.is_odd(),
        max_degree,
    );
    if product != counted {
        return Err(Error::OracleMismatch(format!(
            "enumerated series {counted:?} differs from product formula {product:?}"
        )));
    }
    Ok(counted)
}

/// Homology of the weight-`j` Snaith summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandHomology {
    pub j: u32,
    pub dims: BTreeMap<u32, usize>,
    pub bases: BTreeMap<u32, Vec<Monomial>>,
}

impl Serialize for SummandHomology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SummandHomology", 3)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("dims", &self.dims)?;
        st.serialize_field("basis", &self.bases)?;
        st.end()
    }
}

pub fn dj_homology(table: &GeneratorTable, j: u32) -> Result<SummandHomology> {
    if j == 0 {
        return Err(invalid!("summand index j must be at least 1"));
    }
    let n = table.n();
    let top = 2 * n * j - 1;
    if top > table.max_degree {
        return Err(Error::CutoffExceeded(format!(
            "weight {j} reaches degree {top}, beyond table cutoff {}",
            table.max_degree
        )));
    }
    let mut dims = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for d in j * (2 * n - 2)..=top {
        let basis = monomial_basis(table, d, Some(j))?;
        if !basis.is_empty() {
            dims.insert(d, basis.len());
            bases.insert(d, basis);
        }
    }
    Ok(SummandHomology { j, dims, bases })
}

/// Connectivity, top dimension and the two top homology groups of the weight-p^k summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopGroups {
    pub connectivity: u32,
    pub top_dimension: u32,
    pub top_basis: Vec<String>,
    pub subtop_basis: Vec<String>,
    pub subtop_dimension: usize,
}

pub fn dpk_top_groups(coeffs: Coefficients, n: u32, k: u32) -> Result<TopGroups> {
    if !coeffs.is_odd() {
        return Err(invalid!("top groups are computed for odd primes only"));
    }
    let g = Grading::new(coeffs.p, n)?;
    if k == 0 {
        return Ok(TopGroups {
            connectivity: 2 * n - 3,
            top_dimension: 2 * n - 1,
            top_basis: vec![g.v().to_string()],
            subtop_basis: vec![g.u().to_string()],
            subtop_dimension: 1,
        });
    }
    let pk = coeffs
        .p
        .checked_pow(k)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| invalid!("p^k overflows"))?;
    let top_bound = 2 * n * pk - 1;
    let table = generator_table(coeffs, n, top_bound, pk)?;

    let low = (0..=top_bound)
        .find(|&d| !table.algebra.basis(d, Some(pk)).is_empty())
        .ok_or_else(|| Error::OracleMismatch(format!("no monomials of weight {pk}")))?;
    let top = (0..=top_bound)
        .rev()
        .find(|&d| !table.algebra.basis(d, Some(pk)).is_empty())
        .expect("nonempty since low exists");
    let top_basis = monomial_basis(&table, top, Some(pk))?;
    let subtop = monomial_basis(&table, top - 1, Some(pk))?;

    let q = g.q(k, &g.v())?;
    if top_basis.len() != 1 || top_basis[0].factors != vec![(q.clone(), 1)] {
        return Err(Error::OracleMismatch(format!(
            "top group of weight {pk} is not spanned by {q}"
        )));
    }
    let bq = g.beta_q(k, &g.v())?;
    let ad = g.ad_power(&g.v(), pk - 1, &g.u());
    let ad_nf = table.lie().normal_form(&ad)?;
    let mut expected: Vec<Term> = vec![bq.clone()];
    expected.extend(ad_nf.keys().cloned());
    expected.sort();
    let mut found: Vec<Term> = Vec::new();
    for m in &subtop {
        match m.factors.as_slice() {
            [(t, 1)] => found.push(t.clone()),
            _ => {
                return Err(Error::OracleMismatch(format!(
                    "decomposable class {} in the subtop group",
                    m.render()
                )))
            }
        }
    }
    found.sort();
    if ad_nf.len() != 1 || found != expected {
        return Err(Error::OracleMismatch(format!(
            "subtop group {found:?} is not spanned by {bq} and {ad}"
        )));
    }
    Ok(TopGroups {
        connectivity: low - 1,
        top_dimension: top,
        top_basis: vec![q.to_string()],
        subtop_basis: vec![bq.to_string(), ad.to_string()],
        subtop_dimension: subtop.len(),
    })
}
