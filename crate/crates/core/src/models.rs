//! Builders for the concrete staged models, and a by-name registry of them.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    AlgebraKind, Derivation, Element, FreeAssociative, FreeCommutative, Generator,
    WeightDegreeBound,
};
use crate::bss::{Presentation, StagedModel};
use crate::error::{invalid, Error, Result};
use crate::freecomm::{generator_table, GeneratorTable};
use crate::lie::LieBasis;
use crate::lincomb::LinComb;
use crate::term::{Coefficients, Grading, Parity, Term};

/// The classes `τ^λ_k = ad_λ^{p^k-1}(v)(u)` and its partner `σ^λ_k`, both in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPair {
    pub k: u32,
    pub tau: LinComb<Term>,
    pub sigma: LinComb<Term>,
}

impl ClassPair {
    /// The single basis term of `tau` with its coefficient.
    pub fn tau_term(&self) -> (&Term, u64) {
        self.tau.iter().next().expect("tau is nonzero")
    }

    pub fn tau_degree(&self) -> u32 {
        self.tau_term().0.degree()
    }

    pub fn sigma_degree(&self) -> Option<u32> {
        self.sigma.keys().next().map(Term::degree)
    }

    pub fn weight(&self) -> u32 {
        self.tau_term().0.weight()
    }
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    (0..k as u128).try_fold(1u128, |acc, i| {
        acc.checked_mul(n as u128 - i)
            .map(|x| x / (i + 1))
            .ok_or_else(|| Error::ResourceLimit(format!("binomial({n}, {k}) overflows")))
    })
}

fn moore_label(coeffs: Coefficients, n: u32) -> String {
    format!("P^{}({})", 2 * n + 1, coeffs.p.pow(coeffs.r))
}

fn require_odd(coeffs: Coefficients) -> Result<()> {
    if !coeffs.is_odd() {
        return Err(invalid!("this model needs an odd prime, got p = 2"));
    }
    Ok(())
}

/// Computes the pair in the given basis, which must reach degree `2np^k - 2`.
pub fn sigma_tau_in(lie: &LieBasis, k: u32) -> Result<ClassPair> {
    let grading = lie.grading();
    let fp = lie.field();
    let p = grading.p;
    if k == 0 {
        return Err(invalid!("k = 0 is degenerate; the classes start at k = 1"));
    }
    if p == 2 {
        return Err(invalid!("the classes are defined for odd primes"));
    }
    let pk = p
        .checked_pow(k)
        .ok_or_else(|| Error::ResourceLimit(format!("{p}^{k} overflows")))?;
    let (u, v) = (grading.u(), grading.v());
    let ad = |m: u64| grading.ad_power(&v, m as u32, &u);
    let tau = lie.normal_form(&ad(pk - 1))?;
    if tau.len() != 1 {
        return Err(Error::OracleMismatch(format!(
            "ad^{}(v)(u) is not a single basis term: {} terms",
            pk - 1,
            tau.len()
        )));
    }
    let half = fp.inv(2);
    let mut expr = LinComb::zero();
    for j in 1..pk {
        let c = (binomial(pk, j)? / p as u128 % p as u128) as u64;
        if c == 0 {
            continue;
        }
        let term = grading.bracket(&ad(j - 1), &ad(pk - j - 1));
        expr.add_term(fp, term, fp.mul(c, half));
    }
    let sigma = lie.normalize(&expr)?;
    let pair = ClassPair { k, tau, sigma };
    if let Some(d) = pair.sigma_degree() {
        if d + 1 != pair.tau_degree() {
            return Err(Error::OracleMismatch(format!(
                "sigma has degree {d}, tau has degree {}",
                pair.tau_degree()
            )));
        }
    }
    Ok(pair)
}

pub fn sigma_tau_classes(coeffs: Coefficients, n: u32, k: u32) -> Result<ClassPair> {
    require_odd(coeffs)?;
    if k == 0 {
        return Err(invalid!("k = 0 is degenerate; the classes start at k = 1"));
    }
    let grading = Grading::new(coeffs.p, n)?;
    let pk = (coeffs.p as u32).pow(k);
    let lie = LieBasis::with_weight_cap(grading, 2 * n * pk - 2, pk)?;
    sigma_tau_in(&lie, k)
}

fn lie_schedule_values(table: &GeneratorTable) -> Result<(Derivation, Derivation)> {
    let fp = table.coeffs().field();
    let mut dyer_lashof = Derivation::new();
    let mut lie = Derivation::new();
    let grading = table.grading();
    for (i, t) in table.generators().iter().enumerate() {
        match t.shape() {
            crate::term::Shape::Q(k, x) => {
                let b = grading.beta_q(*k, x)?;
                dyer_lashof.insert(
                    i as u16,
                    table.terms_to_elements(&LinComb::single(fp, b, 1))?,
                );
            }
            crate::term::Shape::BetaQ(..) => {}
            _ => {
                let value = table.lie().bockstein(t)?;
                if !value.is_zero() {
                    lie.insert(i as u16, table.terms_to_elements(&value)?);
                }
            }
        }
    }
    Ok((dyer_lashof, lie))
}

/// The model for H_*(Ω²P^{2n+1}(p^r)) with its scheduled Bocksteins.
///
/// Page 1 pairs `Q1^k[x]` with `bQ1^k[x]`, page `r` carries `v ↦ u` on the bracket
/// generators, and page `r + 1` sends `τ^λ_k` to `ell · σ^λ_k` for each `k` in range.
pub fn build_omega2_model(
    coeffs: Coefficients,
    n: u32,
    max_degree: u32,
    max_weight: u32,
    ell: u64,
) -> Result<StagedModel> {
    require_odd(coeffs)?;
    let fp = coeffs.field();
    if ell.is_multiple_of(coeffs.p) {
        return Err(invalid!("ell must be a unit mod {}", coeffs.p));
    }
    let table = generator_table(coeffs, n, max_degree, max_weight)?;
    let (dyer_lashof, lie) = lie_schedule_values(&table)?;
    let mut schedule: BTreeMap<u32, Derivation> = BTreeMap::new();
    schedule.entry(1).or_default().extend(dyer_lashof);
    schedule.entry(coeffs.r).or_default().extend(lie);

    let mut top = Derivation::new();
    let mut k = 1;
    loop {
        let pk = (coeffs.p as u32).pow(k);
        if pk > max_weight || 2 * n * pk - 2 > max_degree {
            break;
        }
        let pair = sigma_tau_in(table.lie(), k)?;
        let (b, c) = pair.tau_term();
        let g = table
            .index_of(b)
            .ok_or_else(|| Error::CutoffExceeded(format!("{b} is not in the generator table")))?;
        let unit = fp.mul(ell, fp.inv(c));
        top.insert(g, table.terms_to_elements(&pair.sigma)?.scaled(fp, unit));
        k += 1;
    }
    if !top.is_empty() {
        schedule.insert(coeffs.r + 1, top);
    }
    schedule.retain(|_, d| !d.is_empty());
    StagedModel::new(
        format!("Omega^2 {}", moore_label(coeffs, n)),
        coeffs,
        n,
        Arc::new(table.algebra().clone()),
        schedule,
    )
}

/// The tensor algebra T(u, v) in the single-loop grading with `v ↦ u` on page `r`.
pub fn build_tensor_model(coeffs: Coefficients, n: u32, max_degree: u32) -> Result<StagedModel> {
    Grading::new(coeffs.p, n)?;
    let fp = coeffs.field();
    let gens = vec![
        Generator::named("u", 2 * n - 1, 1),
        Generator::named("v", 2 * n, 1),
    ];
    let algebra = FreeAssociative::new(
        gens,
        max_degree,
        Some(WeightDegreeBound {
            slope: 2 * n,
            offset: 0,
        }),
    )?;
    let der: Derivation = [(1u16, LinComb::single(fp, vec![0u16], 1))]
        .into_iter()
        .collect();
    StagedModel::new(
        format!("T(u,v) for Omega {}", moore_label(coeffs, n)),
        coeffs,
        n,
        Arc::new(algebra),
        [(coeffs.r, der)].into_iter().collect(),
    )
}

/// The free commutative page with exterior `τ'_k` (k ≥ 0) and polynomial `σ'_k` (k ≥ 1),
/// and the single differential `τ'_k ↦ ell · σ'_k` on page `r + 1`.
pub fn build_fibre_page_model(
    coeffs: Coefficients,
    n: u32,
    k_max: u32,
    max_degree: u32,
    ell: u64,
) -> Result<StagedModel> {
    require_odd(coeffs)?;
    Grading::new(coeffs.p, n)?;
    let fp = coeffs.field();
    if ell.is_multiple_of(coeffs.p) {
        return Err(invalid!("ell must be a unit mod {}", coeffs.p));
    }
    let p = coeffs.p as u32;
    let next = p
        .checked_pow(k_max + 1)
        .and_then(|x| x.checked_mul(2 * n))
        .ok_or_else(|| Error::ResourceLimit(format!("k_max = {k_max} is too large")))?;
    if max_degree + 2 >= next {
        return Err(Error::CutoffExceeded(format!(
            "degree {max_degree} reaches the generators with k = {}; raise k_max",
            k_max + 1
        )));
    }
    let mut gens = Vec::new();
    let mut der = Derivation::new();
    for k in 0..=k_max {
        let pk = p.pow(k);
        gens.push(Generator::named(format!("tau'_{k}"), 2 * n * pk - 1, pk));
        if k > 0 {
            gens.push(Generator::named(format!("sigma'_{k}"), 2 * n * pk - 2, pk));
            let (t, s) = (gens.len() as u16 - 2, gens.len() as u16 - 1);
            der.insert(t, LinComb::single(fp, vec![s], ell));
        }
    }
    let algebra = FreeCommutative::new(
        gens,
        true,
        max_degree,
        None,
        Some(WeightDegreeBound {
            slope: 2 * n,
            offset: 1,
        }),
    )?;
    StagedModel::new(
        format!("fibre page F^{}({})", 2 * n + 1, coeffs.p.pow(coeffs.r)),
        coeffs,
        n,
        Arc::new(algebra),
        [(coeffs.r + 1, der)].into_iter().collect(),
    )
}

/// The presentation claimed for the fibre page at `r + 1`.
pub fn fibre_page_presentation(coeffs: Coefficients, n: u32, k_max: u32) -> Presentation {
    let p = coeffs.p as u32;
    let mut generators = Vec::new();
    for k in 0..=k_max {
        let pk = p.pow(k);
        generators.push(Generator::named(format!("tau'_{k}"), 2 * n * pk - 1, pk));
        if k > 0 {
            generators.push(Generator::named(format!("sigma'_{k}"), 2 * n * pk - 2, pk));
        }
    }
    Presentation {
        kind: AlgebraKind::Commutative,
        generators,
    }
}

/// Parameters shared by every registered builder. Builders ignore what they don't use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    pub coeffs: Coefficients,
    pub n: u32,
    pub max_degree: u32,
    pub max_weight: Option<u32>,
    pub k_max: Option<u32>,
    pub ell: u64,
}

impl ModelParams {
    pub fn new(coeffs: Coefficients, n: u32, max_degree: u32) -> Self {
        ModelParams {
            coeffs,
            n,
            max_degree,
            max_weight: None,
            k_max: None,
            ell: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimedGenerator {
    pub name: String,
    pub degree: u32,
    pub parity: Parity,
}

pub trait ModelBuilder: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn build(&self, params: &ModelParams) -> Result<StagedModel>;

    /// The last page with a scheduled differential that the builder's acyclicity claim
    /// is about, if it makes one.
    fn collapse_page(&self, coeffs: Coefficients) -> Option<u32>;
}

struct Omega2;
struct Tensor;
struct Fibre;

impl ModelBuilder for Omega2 {
    fn name(&self) -> &'static str {
        "omega2"
    }

    fn summary(&self) -> &'static str {
        "free commutative model of the double loop space homology"
    }

    fn build(&self, params: &ModelParams) -> Result<StagedModel> {
        let w = params
            .max_weight
            .unwrap_or(params.max_degree / (2 * params.n - 2).max(1));
        build_omega2_model(
            params.coeffs,
            params.n,
            params.max_degree,
            w.max(1),
            params.ell,
        )
    }

    fn collapse_page(&self, _coeffs: Coefficients) -> Option<u32> {
        None
    }
}

impl ModelBuilder for Tensor {
    fn name(&self) -> &'static str {
        "tensor"
    }

    fn summary(&self) -> &'static str {
        "tensor algebra on u, v with the r-th Bockstein"
    }

    fn build(&self, params: &ModelParams) -> Result<StagedModel> {
        build_tensor_model(params.coeffs, params.n, params.max_degree)
    }

    fn collapse_page(&self, coeffs: Coefficients) -> Option<u32> {
        Some(coeffs.r)
    }
}

impl ModelBuilder for Fibre {
    fn name(&self) -> &'static str {
        "fibre"
    }

    fn summary(&self) -> &'static str {
        "free commutative page of the pinch-map fibre"
    }

    fn build(&self, params: &ModelParams) -> Result<StagedModel> {
        let k_max = match params.k_max {
            Some(k) => k,
            None => smallest_k_max(params.coeffs.p as u32, params.n, params.max_degree),
        };
        build_fibre_page_model(
            params.coeffs,
            params.n,
            k_max,
            params.max_degree,
            params.ell,
        )
    }

    fn collapse_page(&self, coeffs: Coefficients) -> Option<u32> {
        Some(coeffs.r + 1)
    }
}

fn smallest_k_max(p: u32, n: u32, max_degree: u32) -> u32 {
    let mut k = 0;
    while 2 * n * p.saturating_pow(k + 1) <= max_degree + 2 {
        k += 1;
    }
    k
}

/// Builders selectable by name.
pub struct ModelRegistry {
    builders: Vec<Box<dyn ModelBuilder>>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            builders: Vec::new(),
        }
    }

    pub fn register(&mut self, builder: Box<dyn ModelBuilder>) -> Result<()> {
        if self.get(builder.name()).is_some() {
            return Err(invalid!(
                "a model named {} is already registered",
                builder.name()
            ));
        }
        self.builders.push(builder);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn ModelBuilder> {
        self.builders
            .iter()
            .find(|b| b.name() == name)
            .map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.iter().map(|b| b.name()).collect()
    }

    pub fn build(&self, name: &str, params: &ModelParams) -> Result<StagedModel> {
        let b = self.get(name).ok_or_else(|| {
            invalid!(
                "unknown model {name}; expected one of {}",
                self.names().join(", ")
            )
        })?;
        b.build(params)
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut reg = ModelRegistry::empty();
        for b in [
            Box::new(Omega2) as Box<dyn ModelBuilder>,
            Box::new(Tensor),
            Box::new(Fibre),
        ] {
            reg.register(b).expect("distinct names");
        }
        reg
    }
}

/// Rewrites a combination of generator terms as a combination of degree-one elements of
/// `model`, matching generators by name.
pub fn class_in_model(model: &StagedModel, x: &LinComb<Term>) -> Result<LinComb<Element>> {
    let fp = model.field();
    let mut out = LinComb::zero();
    for (t, c) in x.iter() {
        let g = model
            .generator_index(t.render())
            .ok_or_else(|| Error::CutoffExceeded(format!("{t} is not a generator of the model")))?;
        out.add_term(fp, vec![g], c);
    }
    Ok(out)
}
