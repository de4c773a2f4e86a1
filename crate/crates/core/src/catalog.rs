//! Degrees and orders of the torsion families, with the arithmetic bounds that gate them.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyEntry {
    pub space: String,
    pub degree: u64,
    pub order: u64,
    pub k: Option<u32>,
    pub t: u32,
    pub provenance: String,
}

fn overflow(what: &str) -> Error {
    Error::ResourceLimit(format!("{what} overflows 64-bit arithmetic"))
}

fn pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| overflow(&format!("{p}^{e}")))
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(invalid!("{p} is not prime"));
    }
    Ok(())
}

fn check_odd_setup(p: u64, r: u32, n: u32) -> Result<()> {
    check_prime(p)?;
    if p == 2 {
        return Err(invalid!("these families are for odd primes"));
    }
    if r == 0 {
        return Err(invalid!("r must be at least 1"));
    }
    if n < 2 {
        return Err(invalid!("n must be at least 2, got {n}"));
    }
    Ok(())
}

/// `q·p^{r-1}` with `q = 2(p - 1)` for odd `p`, and `max(8, 2^{r-1})` for `p = 2`.
pub fn adams_period(p: u64, r: u32) -> Result<u64> {
    check_prime(p)?;
    if r == 0 {
        return Err(invalid!("r must be at least 1"));
    }
    if p == 2 {
        return Ok(pow(2, r - 1)?.max(8));
    }
    (2 * (p - 1))
        .checked_mul(pow(p, r - 1)?)
        .ok_or_else(|| overflow("adams period"))
}

fn moore(dim: u64, p: u64, r: u32) -> Result<String> {
    Ok(format!("P^{dim}({})", pow(p, r)?))
}

/// Families in π_*(P^{2n+1}(p^r)) at `2np^k - 1 + t·qp^r` and in π_*(P^{2n}(p^r)) at
/// `(4n - 2)p^k - 1 + t·qp^r`, all of order `p^{r+1}`.
pub fn odd_families(p: u64, r: u32, n: u32, k: u32, t_max: u32) -> Result<Vec<FamilyEntry>> {
    check_odd_setup(p, r, n)?;
    let pk = pow(p, k)?;
    let (n64, r64) = (n as u64, r as u64);
    let odd_ok = pk.checked_mul(n64).is_some_and(|x| x >= r64 + 4);
    let even_ok = pk.checked_mul(2 * n64 - 1).is_some_and(|x| x >= r64 + 3);
    if !odd_ok || !even_ok {
        return Err(Error::KTooSmall(format!(
            "need {n}·{p}^k ≥ {} (k = {k} gives {})",
            r + 4,
            pk.saturating_mul(n64)
        )));
    }
    let step = adams_period(p, r + 1)?;
    let order = pow(p, r + 1)?;
    let mut out = Vec::new();
    let spaces = [
        (2 * n64 + 1, 2 * n64, "v1-family(a)"),
        (2 * n64, 4 * n64 - 2, "v1-family(b)"),
    ];
    for (dim, factor, tag) in spaces {
        let base = factor
            .checked_mul(pk)
            .ok_or_else(|| overflow("family degree"))?
            - 1;
        for t in 0..=t_max {
            let degree = (t as u64)
                .checked_mul(step)
                .and_then(|x| x.checked_add(base))
                .ok_or_else(|| overflow("family degree"))?;
            out.push(FamilyEntry {
                space: moore(dim, p, r)?,
                degree,
                order,
                k: Some(k),
                t,
                provenance: tag.into(),
            });
        }
    }
    Ok(out)
}

/// The summands of order `p^{r+1}` in degrees `2np^k - 1`, `k = 1..=k_max`.
pub fn cmn_summands(p: u64, r: u32, n: u32, k_max: u32) -> Result<Vec<FamilyEntry>> {
    check_odd_setup(p, r, n)?;
    let order = pow(p, r + 1)?;
    (1..=k_max)
        .map(|k| {
            let degree = pow(p, k)?
                .checked_mul(2 * n as u64)
                .ok_or_else(|| overflow("summand degree"))?
                - 1;
            Ok(FamilyEntry {
                space: moore(2 * n as u64 + 1, p, r)?,
                degree,
                order,
                k: Some(k),
                t: 0,
                provenance: "CMN".into(),
            })
        })
        .collect()
}

/// The 2-primary families: `3 + 8t` in P^5(4) (only at `r = 2`) and `7 + 8t` in P^9(2^r),
/// for `t = 1..=t_max`.
pub fn even_families(r: u32, t_max: u32) -> Result<Vec<FamilyEntry>> {
    if !(2..=3).contains(&r) {
        return Err(invalid!(
            "the even families are stated for r = 2 or 3, got {r}"
        ));
    }
    let mut out = Vec::new();
    if r == 2 {
        out.extend((1..=t_max).map(|t| FamilyEntry {
            space: "P^5(4)".into(),
            degree: 3 + 8 * t as u64,
            order: 8,
            k: None,
            t,
            provenance: "even-family(a)".into(),
        }));
    }
    let order = 1u64 << (r + 1);
    out.extend((1..=t_max).map(|t| FamilyEntry {
        space: format!("P^9({})", 1u64 << r),
        degree: 7 + 8 * t as u64,
        order,
        k: None,
        t,
        provenance: "even-family(b)".into(),
    }));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowHomotopy {
    /// π_{n-1}(P^n(p^r)).
    pub bottom: String,
    /// π_n(P^n(p^r)).
    pub next: String,
}

pub fn low_homotopy(p: u64, r: u32, n: u32) -> Result<LowHomotopy> {
    check_prime(p)?;
    if r == 0 {
        return Err(invalid!("r must be at least 1"));
    }
    if n < 4 {
        return Err(invalid!("n must be at least 4, got {n}"));
    }
    Ok(LowHomotopy {
        bottom: format!("Z/{}", pow(p, r)?),
        next: if p == 2 { "Z/2".into() } else { "0".into() },
    })
}

/// CSV with columns `space,degree,order,k,t,provenance`.
pub fn to_csv(entries: &[FamilyEntry]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in entries {
        w.serialize(e)
            .map_err(|e| Error::ResourceLimit(format!("csv output failed: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::ResourceLimit(format!("csv output failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}
