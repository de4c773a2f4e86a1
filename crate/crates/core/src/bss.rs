//! The staged Bockstein spectral sequence engine.
//!
//! Page `s + 1` is computed as the homology of page `s` under the derivation scheduled at
//! page `s`, on explicit cycle and boundary subspaces of each (degree, weight) slice of the
//! underlying free algebra. Before each step the engine checks that the derivation maps
//! cycles to cycles and boundaries to boundaries, and that it squares to zero on the page.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraKind, Derivation, Element, Generator, GradedAlgebra};
use crate::error::{invalid, Error, Result};
use crate::field::{free_kernel_combinations, Fp, Matrix, SpanSolver, Subspace};
use crate::lincomb::LinComb;
use crate::term::Coefficients;

/// A free algebra together with a page-indexed schedule of derivations.
#[derive(Debug, Clone)]
pub struct StagedModel {
    label: String,
    coeffs: Coefficients,
    n: u32,
    algebra: Arc<dyn GradedAlgebra>,
    schedule: BTreeMap<u32, Derivation>,
}

impl StagedModel {
    /// Validates that every scheduled value is homogeneous of degree `deg - 1` and equal weight.
    pub fn new(
        label: impl Into<String>,
        coeffs: Coefficients,
        n: u32,
        algebra: Arc<dyn GradedAlgebra>,
        schedule: BTreeMap<u32, Derivation>,
    ) -> Result<Self> {
        let gens = algebra.generators();
        for (&page, der) in &schedule {
            if page == 0 {
                return Err(invalid!("pages are numbered from 1"));
            }
            for (&g, value) in der {
                let gen = gens
                    .get(g as usize)
                    .ok_or_else(|| invalid!("derivation on unknown generator #{g}"))?;
                for (e, _) in value.iter() {
                    let (d, w) = (algebra.degree_of(e), algebra.weight_of(e));
                    if d + 1 != gen.degree || w != gen.weight {
                        return Err(invalid!(
                            "page {page} value on {} has degree {d}, weight {w}; expected {}, {}",
                            gen.name,
                            gen.degree.saturating_sub(1),
                            gen.weight
                        ));
                    }
                }
            }
        }
        Ok(StagedModel {
            label: label.into(),
            coeffs,
            n,
            algebra,
            schedule,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> Fp {
        self.coeffs.field()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.algebra.kind()
    }

    pub fn algebra(&self) -> &dyn GradedAlgebra {
        self.algebra.as_ref()
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn schedule(&self) -> &BTreeMap<u32, Derivation> {
        &self.schedule
    }

    pub fn derivation(&self, page: u32) -> Option<&Derivation> {
        self.schedule.get(&page)
    }

    pub fn max_degree(&self) -> u32 {
        self.algebra.max_degree()
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        self.generators()
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u16)
    }

    /// Same model with every derivation value scaled by `unit` (a nonzero scalar).
    pub fn rescaled(&self, unit: u64) -> Result<Self> {
        let fp = self.field();
        if unit.is_multiple_of(fp.p()) {
            return Err(invalid!("rescaling unit must be nonzero mod {}", fp.p()));
        }
        let schedule = self
            .schedule
            .iter()
            .map(|(&s, der)| {
                (
                    s,
                    der.iter().map(|(&g, v)| (g, v.scaled(fp, unit))).collect(),
                )
            })
            .collect();
        StagedModel::new(
            self.label.clone(),
            self.coeffs,
            self.n,
            self.algebra.clone(),
            schedule,
        )
    }

    pub fn render_comb(&self, x: &LinComb<Element>) -> String {
        render_comb(self.algebra(), x)
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators()
            .iter()
            .map(|g| {
                json!({"term": g.name, "degree": g.degree, "weight": g.weight, "parity": g.parity})
            })
            .collect();
        let mut schedule = Vec::new();
        for (&page, der) in &self.schedule {
            for (&g, value) in der {
                let value: Vec<Value> = value
                    .iter()
                    .map(|(e, c)| json!({"monomial": self.algebra.render(e), "coeff": c}))
                    .collect();
                schedule.push(json!({
                    "page": page,
                    "on": self.generators()[g as usize].name,
                    "value": value,
                }));
            }
        }
        json!({"kind": self.kind(), "generators": gens, "schedule": schedule})
    }
}

pub fn render_comb(alg: &dyn GradedAlgebra, x: &LinComb<Element>) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.iter()
        .map(|(e, c)| {
            let m = alg.render(e);
            if c == 1 {
                m
            } else {
                format!("{c}*{m}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Cycle/boundary subspaces of one weight, for every page up to the last one requested.
#[derive(Debug, Clone)]
struct Column {
    weight: u32,
    top: u32,
    closed: bool,
    basis: Vec<Vec<Element>>,
    index: Vec<HashMap<Element, usize>>,
    /// `cycles[s - 1][d]`, `boundaries[s - 1][d]` for page `s`.
    cycles: Vec<Vec<Subspace>>,
    boundaries: Vec<Vec<Subspace>>,
}

impl Column {
    fn build(model: &StagedModel, weight: u32, last_page: u32) -> Result<Column> {
        let alg = model.algebra();
        let fp = model.field();
        let max = alg.max_degree();
        if alg.max_weight().is_some_and(|m| weight > m) {
            return Err(Error::CutoffExceeded(format!(
                "weight {weight} is beyond the model's weight cutoff"
            )));
        }
        let bound = alg.top_degree_for_weight(weight);
        let closed = bound.is_some_and(|b| b <= max);
        let top = bound.map_or(max, |b| b.min(max));
        let basis: Vec<Vec<Element>> = (0..=top).map(|d| alg.basis(d, Some(weight))).collect();
        let index = basis
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        let mut col = Column {
            weight,
            top,
            closed,
            basis,
            index,
            cycles: Vec::new(),
            boundaries: Vec::new(),
        };

        let mut z: Vec<Subspace> = col.basis.iter().map(|b| Subspace::full(b.len())).collect();
        let mut b: Vec<Subspace> = col.basis.iter().map(|b| Subspace::zero(b.len())).collect();
        col.cycles.push(z.clone());
        col.boundaries.push(b.clone());
        for s in 1..last_page {
            if let Some(der) = model.derivation(s) {
                let mats: Vec<Option<Matrix>> = (0..=top)
                    .map(|d| {
                        if d == 0 {
                            Ok(None)
                        } else {
                            col.matrix(model, der, d).map(Some)
                        }
                    })
                    .collect::<Result<_>>()?;
                let images: Vec<Vec<Vec<u64>>> = (0..=top as usize)
                    .map(|d| match &mats[d] {
                        Some(m) => z[d].basis().iter().map(|v| m.apply(fp, v)).collect(),
                        None => Vec::new(),
                    })
                    .collect();
                col.check_page(fp, s, &mats, &images, &z, &b)?;

                let mut z_next = z.clone();
                for d in 1..=top as usize {
                    let residuals: Vec<Vec<u64>> =
                        images[d].iter().map(|v| b[d - 1].reduce(fp, v)).collect();
                    let combos = free_kernel_combinations(fp, b[d - 1].ambient(), &residuals);
                    let gens = z[d].basis();
                    z_next[d] = Subspace::spanned_by(
                        fp,
                        z[d].ambient(),
                        combos.iter().map(|c| combine(fp, gens, c, z[d].ambient())),
                    );
                }
                let mut b_next = b.clone();
                for d in 0..top as usize {
                    for v in &images[d + 1] {
                        b_next[d].insert(fp, v.clone());
                    }
                }
                z = z_next;
                b = b_next;
            }
            col.cycles.push(z.clone());
            col.boundaries.push(b.clone());
        }
        Ok(col)
    }

    fn matrix(&self, model: &StagedModel, der: &Derivation, d: u32) -> Result<Matrix> {
        let alg = model.algebra();
        let fp = model.field();
        let src = &self.basis[d as usize];
        let tgt_index = &self.index[d as usize - 1];
        let mut m = Matrix::zeros(tgt_index.len(), src.len());
        for (j, e) in src.iter().enumerate() {
            for (img, c) in alg.apply_derivation(fp, der, e).iter() {
                let Some(&i) = tgt_index.get(img) else {
                    return Err(Error::IllDefined(format!(
                        "image {} of {} leaves the ({}, {}) slice",
                        alg.render(img),
                        alg.render(e),
                        d - 1,
                        self.weight
                    )));
                };
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    fn check_page(
        &self,
        fp: Fp,
        s: u32,
        mats: &[Option<Matrix>],
        images: &[Vec<Vec<u64>>],
        z: &[Subspace],
        b: &[Subspace],
    ) -> Result<()> {
        let w = self.weight;
        for d in 1..mats.len() {
            let m = mats[d].as_ref().expect("d >= 1");
            for v in &images[d] {
                if !z[d - 1].contains(fp, v) {
                    return Err(Error::IllDefined(format!(
                        "page {s} differential sends a cycle in degree {d}, weight {w} to a non-cycle"
                    )));
                }
                if d >= 2 {
                    let vv = mats[d - 1].as_ref().expect("d >= 2").apply(fp, v);
                    if !b[d - 2].contains(fp, &vv) {
                        return Err(Error::DSquaredNonzero(format!(
                            "page {s} differential squares to a nonzero class from degree {d}, weight {w}"
                        )));
                    }
                }
            }
            for v in b[d].basis() {
                if !b[d - 1].contains(fp, &m.apply(fp, v)) {
                    return Err(Error::IllDefined(format!(
                        "page {s} differential sends a boundary in degree {d}, weight {w} to a non-boundary"
                    )));
                }
            }
        }
        Ok(())
    }

    fn has_scheduled_before(model: &StagedModel, page: u32) -> bool {
        model.schedule().keys().any(|&s| s < page)
    }

    fn check_complete(&self, model: &StagedModel, d: u32, page: u32) -> Result<()> {
        if d > self.top {
            if self.closed {
                return Ok(());
            }
            return Err(Error::RangeIncomplete(format!(
                "degree {d} is beyond the model cutoff {}",
                self.top
            )));
        }
        if d == self.top && !self.closed && Self::has_scheduled_before(model, page) {
            return Err(Error::RangeIncomplete(format!(
                "page {page} slice ({d}, {}) needs boundaries from degree {} beyond the cutoff",
                self.weight,
                d + 1
            )));
        }
        Ok(())
    }

    fn dim(&self, page: u32, d: u32) -> usize {
        if d > self.top {
            return 0;
        }
        let s = page as usize - 1;
        self.cycles[s][d as usize].dim() - self.boundaries[s][d as usize].dim()
    }

    fn vector(&self, d: u32, x: &LinComb<Element>) -> Result<Vec<u64>> {
        let index = &self.index[d as usize];
        let mut v = vec![0; index.len()];
        for (e, c) in x.iter() {
            let i = index
                .get(e)
                .ok_or_else(|| invalid!("class is not homogeneous in ({d}, {})", self.weight))?;
            v[*i] = c;
        }
        Ok(v)
    }

    fn comb(&self, d: u32, v: &[u64]) -> LinComb<Element> {
        self.basis[d as usize]
            .iter()
            .zip(v)
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e.clone(), c))
            .collect()
    }

    /// Representatives of a basis of `Z/B` at page `s`, degree `d`.
    fn representatives(&self, fp: Fp, page: u32, d: u32) -> Vec<Vec<u64>> {
        let s = page as usize - 1;
        let mut span = self.boundaries[s][d as usize].clone();
        let mut reps = Vec::new();
        for z in self.cycles[s][d as usize].basis() {
            if span.insert(fp, z.clone()) {
                reps.push(z.clone());
            }
        }
        reps
    }
}

fn combine(fp: Fp, gens: &[Vec<u64>], coeffs: &[u64], ambient: usize) -> Vec<u64> {
    let mut out = vec![0; ambient];
    for (g, &c) in gens.iter().zip(coeffs) {
        if c != 0 {
            for (x, &y) in out.iter_mut().zip(g) {
                *x = fp.add(*x, fp.mul(c, y));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageSlice {
    pub degree: u32,
    pub weight: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(skip)]
    pub representatives: Vec<LinComb<Element>>,
    /// Matrix of this page's scheduled differential into degree - 1, in representative
    /// coordinates (rows: target representatives).
    #[serde(skip)]
    pub differential: Option<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub killed_by: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub s: u32,
    pub slices: BTreeMap<(u32, u32), PageSlice>,
}

impl Page {
    pub fn dim(&self, degree: u32, weight: u32) -> usize {
        self.slices.get(&(degree, weight)).map_or(0, |s| s.dim)
    }

    /// Total dimension in a degree, summed over weights.
    pub fn degree_dim(&self, degree: u32) -> usize {
        self.slices
            .values()
            .filter(|s| s.degree == degree)
            .map(|s| s.dim)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let slices: Vec<&PageSlice> = self.slices.values().collect();
        json!({"page": self.s, "slices": slices})
    }
}

fn weights_for(
    model: &StagedModel,
    range: &RangeInclusive<u32>,
    weight: Option<u32>,
) -> Result<Vec<u32>> {
    if let Some(w) = weight {
        return Ok(vec![w]);
    }
    let alg = model.algebra();
    let top_d = *range.end();
    let max_w = alg
        .generators()
        .iter()
        .map(|g| top_d * g.weight / g.degree)
        .max()
        .unwrap_or(0);
    if let Some(cap) = alg.max_weight() {
        if max_w > cap {
            return Err(Error::CutoffExceeded(format!(
                "degree {top_d} holds weights up to {max_w}; the model stops at weight {cap}"
            )));
        }
    }
    Ok((0..=max_w).collect())
}

fn check_range(model: &StagedModel, s: u32, range: &RangeInclusive<u32>) -> Result<()> {
    if s == 0 {
        return Err(invalid!("pages are numbered from 1"));
    }
    if range.start() > range.end() {
        return Err(invalid!("empty degree range {range:?}"));
    }
    if *range.end() > model.max_degree() {
        return Err(Error::RangeIncomplete(format!(
            "requested degree {} beyond model cutoff {}",
            range.end(),
            model.max_degree()
        )));
    }
    Ok(())
}

/// Computes page `s` on the requested degrees (and one weight, if given).
pub fn compute_page(
    model: &StagedModel,
    s: u32,
    degrees: RangeInclusive<u32>,
    weight: Option<u32>,
) -> Result<Page> {
    check_range(model, s, &degrees)?;
    let fp = model.field();
    let alg = model.algebra();
    let mut slices = BTreeMap::new();
    for w in weights_for(model, &degrees, weight)? {
        let col = Column::build(model, w, s)?;
        for d in degrees.clone() {
            if d > col.top || col.basis[d as usize].is_empty() {
                continue;
            }
            col.check_complete(model, d, s)?;
            let reps = col.representatives(fp, s, d);
            let differential = match model.derivation(s) {
                Some(der) if d >= 1 => Some(page_differential(model, &col, der, s, d, &reps)?),
                _ => None,
            };
            let killed_by = (1..s).rev().find(|&t| col.dim(t + 1, d) < col.dim(t, d));
            let representatives: Vec<LinComb<Element>> =
                reps.iter().map(|v| col.comb(d, v)).collect();
            slices.insert(
                (d, w),
                PageSlice {
                    degree: d,
                    weight: w,
                    dim: reps.len(),
                    basis: representatives
                        .iter()
                        .map(|x| render_comb(alg, x))
                        .collect(),
                    representatives,
                    differential,
                    killed_by,
                },
            );
        }
    }
    Ok(Page { s, slices })
}

fn page_differential(
    model: &StagedModel,
    col: &Column,
    der: &Derivation,
    s: u32,
    d: u32,
    reps: &[Vec<u64>],
) -> Result<Matrix> {
    let fp = model.field();
    let m = col.matrix(model, der, d)?;
    let target_reps = col.representatives(fp, s, d - 1);
    let b = &col.boundaries[s as usize - 1][d as usize - 1];
    let mut family: Vec<Vec<u64>> = b.basis().to_vec();
    family.extend(target_reps.iter().cloned());
    let solver = SpanSolver::new(fp, b.ambient(), &family)?;
    let mut out = Matrix::zeros(target_reps.len(), reps.len());
    for (j, r) in reps.iter().enumerate() {
        let img = m.apply(fp, r);
        let coords = solver.solve(fp, &img).ok_or_else(|| {
            Error::IllDefined(format!(
                "page {s} differential leaves the cycles at degree {}",
                d - 1
            ))
        })?;
        for (i, &c) in coords[b.dim()..].iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivorReport {
    pub class: String,
    pub degree: u32,
    pub weight: u32,
    pub target_page: u32,
    /// Last page on which the class is a nonzero element.
    pub page_reached: u32,
    pub nonzero: bool,
    pub obstruction: Option<String>,
}

fn homogeneous_slice(model: &StagedModel, class: &LinComb<Element>) -> Result<(u32, u32)> {
    let alg = model.algebra();
    let mut it = class.keys().map(|e| (alg.degree_of(e), alg.weight_of(e)));
    let first = it
        .next()
        .ok_or_else(|| invalid!("the zero class has no slice"))?;
    if it.any(|x| x != first) {
        return Err(invalid!("class is not homogeneous in (degree, weight)"));
    }
    Ok(first)
}

/// Tracks a class page by page: a cycle for every differential below `target_page` and
/// never a boundary.
pub fn survivor_check(
    model: &StagedModel,
    class: &LinComb<Element>,
    target_page: u32,
) -> Result<SurvivorReport> {
    if target_page == 0 {
        return Err(invalid!("pages are numbered from 1"));
    }
    let fp = model.field();
    let (d, w) = homogeneous_slice(model, class)?;
    let col = Column::build(model, w, target_page)?;
    col.check_complete(model, d, target_page)?;
    let v = col.vector(d, class)?;
    let mut reached = 0;
    let mut obstruction = None;
    for s in 1..=target_page {
        let i = s as usize - 1;
        if !col.cycles[i][d as usize].contains(fp, &v) {
            obstruction = Some(format!("not a cycle for the page {} differential", s - 1));
            break;
        }
        if col.boundaries[i][d as usize].contains(fp, &v) {
            obstruction = Some(if s == 1 {
                "zero class".to_string()
            } else {
                format!("boundary of the page {} differential", s - 1)
            });
            break;
        }
        reached = s;
    }
    Ok(SurvivorReport {
        class: model.render_comb(class),
        degree: d,
        weight: w,
        target_page,
        page_reached: reached,
        nonzero: reached == target_page,
        obstruction,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcyclicReport {
    /// The page whose reduced part was inspected (`s + 1`).
    pub page: u32,
    pub acyclic: bool,
    /// Nonzero reduced slices as `(degree, weight, dim)`.
    pub residual: Vec<(u32, u32, usize)>,
}

/// Whether page `s + 1` has no reduced classes in the degree range.
pub fn check_acyclic(
    model: &StagedModel,
    s: u32,
    degrees: RangeInclusive<u32>,
) -> Result<AcyclicReport> {
    let lo = (*degrees.start()).max(1);
    let page = compute_page(model, s + 1, lo..=*degrees.end(), None)?;
    let residual: Vec<_> = page
        .slices
        .values()
        .filter(|sl| sl.dim > 0)
        .map(|sl| (sl.degree, sl.weight, sl.dim))
        .collect();
    Ok(AcyclicReport {
        page: s + 1,
        acyclic: residual.is_empty(),
        residual,
    })
}

/// A claimed presentation of a page as a free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub kind: AlgebraKind,
    pub generators: Vec<Generator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub page: u32,
    pub matches: bool,
    /// `(degree, computed, claimed)` wherever they differ.
    pub mismatches: Vec<(u32, u128, u128)>,
}

/// Compares page dimensions with those of the free algebra on the claimed generators.
pub fn verify_presented_page(
    model: &StagedModel,
    s: u32,
    claim: &Presentation,
    degrees: RangeInclusive<u32>,
) -> Result<PresentationReport> {
    let page = compute_page(model, s, degrees.clone(), None)?;
    let spec: Vec<_> = claim
        .generators
        .iter()
        .map(|g| (g.degree, g.parity))
        .collect();
    let claimed =
        crate::algebra::free_dimensions(claim.kind, &spec, model.coeffs().is_odd(), *degrees.end());
    let mismatches: Vec<_> = degrees
        .filter_map(|d| {
            let got = page.degree_dim(d) as u128;
            let want = claimed[d as usize];
            (got != want).then_some((d, got, want))
        })
        .collect();
    Ok(PresentationReport {
        page: s,
        matches: mismatches.is_empty(),
        mismatches,
    })
}
