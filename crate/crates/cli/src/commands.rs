use std::fmt::{self, Write as _};
use std::fs;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use loopalg::bss::{check_acyclic, compute_page, survivor_check};
use loopalg::catalog::{adams_period, cmn_summands, even_families, odd_families, to_csv};
use loopalg::freecomm::{dj_homology, generator_table, monomial_basis, poincare_series};
use loopalg::mod2::{build_d2_module, decomposition_search, verify_chain_identity, CLASS_NAMES};
use loopalg::models::{
    build_omega2_model, class_in_model, sigma_tau_classes, ModelParams, ModelRegistry,
};
use loopalg::oracle::{page_homology_check, primitives_check, straightening_check, OracleReport};
use loopalg::term::Grading;
use loopalg::Coefficients;

use crate::{Command, Opts};

/// A required flag that was not given on the command line or in the config file.
#[derive(Debug)]
pub struct MissingFlag(pub &'static str);

impl fmt::Display for MissingFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "missing required flag --{}", self.0)
    }
}

impl std::error::Error for MissingFlag {}

fn need<T: Copy>(value: Option<T>, flag: &'static str) -> Result<T> {
    value.ok_or_else(|| MissingFlag(flag).into())
}

struct Output {
    text: String,
    json: String,
    csv: Option<String>,
}

impl Output {
    fn new<T: Serialize + ?Sized>(text: String, value: &T) -> Result<Self> {
        let mut json = serde_json::to_string_pretty(value)?;
        json.push('\n');
        Ok(Output {
            text,
            json,
            csv: None,
        })
    }
}

fn emit(opts: &Opts, out: Output) -> Result<()> {
    let body = if opts.json {
        out.json
    } else if opts.csv {
        match out.csv {
            Some(csv) => csv,
            None => bail!("--csv is only available for the families command"),
        }
    } else {
        out.text
    };
    match &opts.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

pub fn run(command: Command, opts: &Opts) -> Result<()> {
    let out = match command {
        Command::Gens => gens(opts)?,
        Command::Dj => dj(opts)?,
        Command::Poincare => poincare(opts)?,
        Command::Bss => bss(opts)?,
        Command::Survivor => survivor(opts)?,
        Command::D2 => d2(opts)?,
        Command::Chain => chain(opts)?,
        Command::Families => families(opts)?,
        Command::Oracle => oracle(opts)?,
    };
    emit(opts, out)
}

fn coeffs(opts: &Opts, r_required: bool) -> Result<Coefficients> {
    let p = need(opts.p, "p")?;
    let r = if r_required {
        need(opts.r, "r")?
    } else {
        opts.r.unwrap_or(1)
    };
    Ok(Coefficients::new(p, r)?)
}

fn default_weight(c: Coefficients, n: u32, max_deg: u32, given: Option<u32>) -> u32 {
    given.unwrap_or(if c.is_odd() {
        (max_deg / (2 * n - 2)).max(1)
    } else {
        2
    })
}

fn space(c: Coefficients, n: u32) -> String {
    format!("P^{}({})", 2 * n + 1, c.p.pow(c.r))
}

fn gens(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, false)?;
    let n = need(opts.n, "n")?;
    let max_deg = need(opts.max_deg, "max-deg")?;
    let w = default_weight(c, n, max_deg, opts.max_weight);
    let table = generator_table(c, n, max_deg, w)?;
    let mut text = format!(
        "# generators for Omega^2 {} up to degree {max_deg}, weight {w}\n# term\tdegree\tweight\tparity\n",
        space(c, n)
    );
    let mut rows = Vec::new();
    for t in table.generators() {
        writeln!(
            text,
            "{}\t{}\t{}\t{}",
            t,
            t.degree(),
            t.weight(),
            t.parity()
        )?;
        rows.push(json!({"term": t.render(), "degree": t.degree(), "weight": t.weight(), "parity": t.parity()}));
    }
    Output::new(text, &rows)
}

fn dj(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, false)?;
    let n = need(opts.n, "n")?;
    let j = need(opts.j, "j")?;
    let table = generator_table(c, n, 2 * n * j - 1, j)?;
    let h = dj_homology(&table, j)?;
    let mut text = format!("# D_{j} of Omega^2 {}\n", space(c, n));
    for (d, basis) in &h.bases {
        let names: Vec<String> = basis.iter().map(|m| m.render()).collect();
        writeln!(text, "{d}\t{}\t{}", basis.len(), names.join(" "))?;
    }
    Output::new(text, &h)
}

fn poincare(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, false)?;
    let n = need(opts.n, "n")?;
    let max_deg = need(opts.max_deg, "max-deg")?;
    let w = default_weight(c, n, max_deg, opts.max_weight);
    let table = generator_table(c, n, max_deg, w)?;
    let series = poincare_series(&table, max_deg)?;
    let mut text = format!(
        "# Poincare series of Omega^2 {} up to degree {max_deg}\n",
        space(c, n)
    );
    for (d, x) in series.iter().enumerate() {
        writeln!(text, "{d}\t{x}")?;
    }
    Output::new(
        text,
        &json!({"max_degree": max_deg, "max_weight": w, "coefficients": series}),
    )
}

fn bss(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, true)?;
    let n = need(opts.n, "n")?;
    let max_deg = need(opts.max_deg, "max-deg")?;
    let name = opts.model.clone().ok_or(MissingFlag("model"))?;
    let registry = ModelRegistry::default();
    let builder = registry.get(&name).context("unknown model")?;
    let params = ModelParams {
        max_weight: opts.max_weight,
        k_max: opts.k,
        ..ModelParams::new(c, n, max_deg + 1)
    };
    let model = builder.build(&params)?;
    let last = opts
        .pages
        .unwrap_or(builder.collapse_page(c).unwrap_or(c.r) + 1);
    let mut text = format!("# {} ({} model)\n", model.label(), model.kind());
    let mut pages = Vec::new();
    for s in 1..=last {
        let page = compute_page(&model, s, 0..=max_deg, opts.weight)?;
        let dims: Vec<String> = (0..=max_deg)
            .filter(|&d| page.degree_dim(d) > 0)
            .map(|d| format!("{d}:{}", page.degree_dim(d)))
            .collect();
        writeln!(text, "page {s}\t{}", dims.join(" "))?;
        pages.push(page.to_json());
    }
    let acyclic = if last >= 2 && max_deg >= 1 {
        let report = check_acyclic(&model, last - 1, 1..=max_deg)?;
        if report.acyclic {
            writeln!(
                text,
                "page {last} reduced part vanishes in degrees 1..{max_deg}"
            )?;
        } else {
            let res: Vec<String> = report
                .residual
                .iter()
                .map(|(d, w, k)| format!("({d},{w}):{k}"))
                .collect();
            writeln!(
                text,
                "page {last} reduced part survives at {}",
                res.join(" ")
            )?;
        }
        Some(report)
    } else {
        None
    };
    Output::new(
        text,
        &json!({"model": model.to_json(), "pages": pages, "acyclicity": acyclic}),
    )
}

fn survivor(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, true)?;
    let n = need(opts.n, "n")?;
    let k = opts.k.unwrap_or(1);
    let pair = sigma_tau_classes(c, n, k)?;
    let (d, w) = (pair.tau_degree(), pair.weight());
    let model = build_omega2_model(c, n, d + 1, w, 1)?;
    let target = opts.pages.unwrap_or(c.r + 1);
    let tau = survivor_check(&model, &class_in_model(&model, &pair.tau)?, target)?;
    let sigma = survivor_check(&model, &class_in_model(&model, &pair.sigma)?, target)?;
    let table = generator_table(c, n, d + 1, w)?;
    let slice: Vec<String> = monomial_basis(&table, d, Some(w))?
        .iter()
        .map(|m| m.render())
        .collect();
    let mut text = format!("# k = {k}, weight {w}, target page {target}\n");
    for (label, rep) in [("tau", &tau), ("sigma", &sigma)] {
        let status = if rep.nonzero {
            "survives".to_string()
        } else {
            format!("dies: {}", rep.obstruction.as_deref().unwrap_or(""))
        };
        writeln!(
            text,
            "{label}\t{}\tdegree {}\tpage {}\t{status}",
            rep.class, rep.degree, rep.page_reached
        )?;
    }
    writeln!(text, "degree {d} classes\t{}", slice.join(" "))?;
    Output::new(
        text,
        &json!({"k": k, "tau": tau, "sigma": sigma, "slice": {"degree": d, "weight": w, "classes": slice}}),
    )
}

fn d2(opts: &Opts) -> Result<Output> {
    if let Some(p) = opts.p {
        if p != 2 {
            return Err(loopalg::Error::InvalidInput(format!(
                "d2 is the p = 2 module, got p = {p}"
            ))
            .into());
        }
    }
    let r = need(opts.r, "r")?;
    let n = need(opts.n, "n")?;
    let module = build_d2_module(r, n)?;
    module.consistency()?;
    let table = module.table();
    let found = decomposition_search(&module);
    let mut text = format!("# weight-2 module, r = {r}, n = {n}\n");
    for (name, d) in CLASS_NAMES.iter().zip(module.degrees) {
        writeln!(text, "class\t{name}\t{d}")?;
    }
    for v in &table {
        writeln!(text, "{}\t{}\t{}", v.operation, v.source, v.value)?;
    }
    writeln!(text, "splittings\t{}", found.len())?;
    for dec in &found {
        writeln!(
            text,
            "{{{}}} + {{{}}}",
            dec.first.join(", "),
            dec.second.join(", ")
        )?;
    }
    let degrees: Vec<_> = CLASS_NAMES
        .iter()
        .zip(module.degrees)
        .map(|(c, d)| json!({"class": c, "degree": d}))
        .collect();
    Output::new(
        text,
        &json!({"r": r, "n": n, "classes": degrees, "table": table, "consistent": true, "decompositions": found}),
    )
}

fn chain(opts: &Opts) -> Result<Output> {
    let r = need(opts.r, "r")?;
    let report = verify_chain_identity(r)?;
    if !report.holds {
        return Err(loopalg::Error::OracleMismatch(format!(
            "coefficient {} differs from {}",
            report.coefficient, report.expected
        ))
        .into());
    }
    let text = format!(
        "r = {r}\n(alpha^2-1) e0(x)a(x)b = {}\nd((alpha+1) e1(x)a(x)b) = {}\n",
        report.intermediate, report.result
    );
    Output::new(text, &report)
}

fn families(opts: &Opts) -> Result<Output> {
    let p = need(opts.p, "p")?;
    let r = need(opts.r, "r")?;
    let t_max = opts.t_max.unwrap_or(2);
    let entries = if p == 2 {
        even_families(r, t_max)?
    } else {
        let n = need(opts.n, "n")?;
        let k = need(opts.k, "k")?;
        let odd = odd_families(p, r, n, k, t_max)?;
        let mut all = cmn_summands(p, r, n, k)?;
        all.extend(odd);
        all
    };
    let mut text = format!("# Adams period q_{} = {}\n", r + 1, adams_period(p, r + 1)?);
    writeln!(text, "space\tdegree\torder\tk\tt\tprovenance")?;
    for e in &entries {
        let k = e.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            text,
            "{}\t{}\t{}\t{k}\t{}\t{}",
            e.space, e.degree, e.order, e.t, e.provenance
        )?;
    }
    let mut out = Output::new(text, &entries)?;
    out.csv = Some(to_csv(&entries)?);
    Ok(out)
}

fn oracle(opts: &Opts) -> Result<Output> {
    let c = coeffs(opts, false)?;
    let n = need(opts.n, "n")?;
    let max_deg = opts.max_deg.unwrap_or(16);
    let grading = Grading::new(c.p, n)?;
    let mut reports: Vec<OracleReport> = vec![
        primitives_check(grading, max_deg)?,
        straightening_check(grading, opts.max_weight.unwrap_or(4))?,
    ];
    let registry = ModelRegistry::default();
    let names: &[&str] = if c.is_odd() {
        &["tensor", "fibre"]
    } else {
        &["tensor"]
    };
    for name in names {
        let model = registry.build(name, &ModelParams::new(c, n, max_deg + 1))?;
        let mut report = page_homology_check(&model, 0..=max_deg)?;
        report.check = format!("{} ({name})", report.check);
        reports.push(report);
    }
    let mut text = String::new();
    for rep in &reports {
        let status = if rep.passed() {
            "ok".to_string()
        } else {
            format!("{} mismatches", rep.mismatches.len())
        };
        writeln!(text, "{}\t{} cases\t{status}", rep.check, rep.cases)?;
        for m in &rep.mismatches {
            writeln!(text, "  {m}")?;
        }
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.check.as_str())
        .collect();
    if !failed.is_empty() {
        eprint!("{text}");
        return Err(
            loopalg::Error::OracleMismatch(format!("failed: {}", failed.join(", "))).into(),
        );
    }
    Output::new(text, &reports)
}
