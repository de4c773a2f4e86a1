//! Brute-force cross-checks of the structured computations.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::bss::{compute_page, StagedModel};
use crate::error::{invalid, Result};
use crate::field::{fp_homology, Matrix};
use crate::lie::{embed, graded_commutator, LieBasis};
use crate::primitives::{primitive_dims_oracle, DEFAULT_WORD_LIMIT};
use crate::term::Grading;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub degree: u32,
    pub structured: usize,
    pub brute_force: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub cases: usize,
    pub mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Lie basis plus restricted powers against the primitives of T(σu, σv), per tensor degree.
pub fn primitives_check(grading: Grading, max_tensor_degree: u32) -> Result<OracleReport> {
    if max_tensor_degree < 2 {
        return Err(invalid!("tensor degree bound must be at least 2"));
    }
    let lie = LieBasis::new(grading, max_tensor_degree - 1)?;
    let basis = lie.counts_by_suspended_degree();
    let powers = lie.restricted_power_counts(max_tensor_degree);
    let brute = primitive_dims_oracle(grading, max_tensor_degree, DEFAULT_WORD_LIMIT)?;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (&d, &b) in &brute {
        let s = basis.get(&d).copied().unwrap_or(0) + powers.get(&d).copied().unwrap_or(0);
        if s != b {
            mismatches.push(format!("degree {d}: basis gives {s}, primitives {b}"));
        }
        rows.push(OracleRow {
            degree: d,
            structured: s,
            brute_force: b,
        });
    }
    Ok(OracleReport {
        check: "primitives".into(),
        cases: rows.len(),
        mismatches,
        rows,
    })
}

/// For every pair of basis elements of total weight at most `max_weight`, the tensor image
/// of the normal form of their bracket equals the graded commutator of their images.
pub fn straightening_check(grading: Grading, max_weight: u32) -> Result<OracleReport> {
    let max_degree = max_weight * (2 * grading.n) - 1;
    let lie = LieBasis::with_weight_cap(grading, max_degree, max_weight)?;
    let fp = lie.field();
    let elements = lie.elements();
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for x in elements {
        for y in elements {
            if x.weight() + y.weight() > max_weight {
                continue;
            }
            cases += 1;
            let bracket = grading.bracket(x, y);
            let normal = lie.normal_form(&bracket)?;
            let lhs = lie.embed_comb(&normal)?;
            let rhs = graded_commutator(fp, &embed(fp, x)?, &embed(fp, y)?);
            if lhs != rhs {
                mismatches.push(format!(
                    "{bracket}: normal form does not embed to the commutator"
                ));
            }
        }
    }
    Ok(OracleReport {
        check: "straightening".into(),
        cases,
        mismatches,
        rows: Vec::new(),
    })
}

/// Recomputes the page after the first scheduled differential as plain homology of the
/// whole algebra, degree by degree.
pub fn page_homology_check(
    model: &StagedModel,
    degrees: RangeInclusive<u32>,
) -> Result<OracleReport> {
    let Some((&s, der)) = model.schedule().iter().next() else {
        return Err(invalid!("model has no scheduled differential"));
    };
    let alg = model.algebra();
    let fp = model.field();
    let page = compute_page(model, s + 1, degrees.clone(), None)?;
    let matrix = |d: u32| -> Matrix {
        let src = alg.basis(d, None);
        let tgt = if d == 0 {
            Vec::new()
        } else {
            alg.basis(d - 1, None)
        };
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (j, e) in src.iter().enumerate() {
            for (img, c) in alg.apply_derivation(fp, der, e).iter() {
                let i = tgt
                    .iter()
                    .position(|t| t == img)
                    .expect("image stays in the algebra");
                m.set(i, j, c);
            }
        }
        m
    };
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for d in degrees {
        let h = fp_homology(fp, &matrix(d + 1), &matrix(d))?;
        let computed = page.degree_dim(d);
        if h.dim != computed {
            mismatches.push(format!(
                "degree {d}: engine gives {computed}, direct homology {}",
                h.dim
            ));
        }
        rows.push(OracleRow {
            degree: d,
            structured: computed,
            brute_force: h.dim,
        });
    }
    Ok(OracleReport {
        check: "page homology".into(),
        cases: rows.len(),
        mismatches,
        rows,
    })
}
