//! Structured generator names: `u`, `v`, Browder brackets and Dyer–Lashof decorations.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::{is_prime, Fp};

/// The pair (p, r) of the Moore space with top cell attached by degree p^r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Coefficients {
    pub p: u64,
    pub r: u32,
}

impl Coefficients {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid!("p = {p} is not prime"));
        }
        if r == 0 {
            return Err(invalid!("torsion exponent r must be at least 1"));
        }
        Ok(Coefficients { p, r })
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("checked at construction")
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(degree: u32) -> Self {
        if degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    GenU,
    GenV,
    Bracket(Term, Term),
    Q(u32, Term),
    BetaQ(u32, Term),
}

/// A generator name together with its homological degree (double-loop grading) and weight.
#[derive(Debug, Clone)]
pub struct Term {
    shape: Arc<Shape>,
    degree: u32,
    weight: u32,
    text: Arc<str>,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state)
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree, self.weight, &*self.text).cmp(&(other.degree, other.weight, &*other.text))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Term {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.degree)
    }

    pub fn render(&self) -> &str {
        &self.text
    }

    /// True for terms built only from `u`, `v` and brackets.
    pub fn is_lie(&self) -> bool {
        match &*self.shape {
            Shape::GenU | Shape::GenV => true,
            Shape::Bracket(a, b) => a.is_lie() && b.is_lie(),
            _ => false,
        }
    }

    /// Number of `u` and `v` leaves of a bracket term.
    pub fn multidegree(&self) -> (u32, u32) {
        match &*self.shape {
            Shape::GenU => (1, 0),
            Shape::GenV => (0, 1),
            Shape::Bracket(a, b) => {
                let (x, y) = a.multidegree();
                let (z, w) = b.multidegree();
                (x + z, y + w)
            }
            Shape::Q(_, a) | Shape::BetaQ(_, a) => a.multidegree(),
        }
    }
}

/// Degree conventions for a fixed ambient `n` (the space is P^{2n+1}(p^r)) and prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grading {
    pub p: u64,
    pub n: u32,
}

impl Grading {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid!("p = {p} is not prime"));
        }
        if n <= 1 {
            return Err(invalid!("n must be greater than 1, got {n}"));
        }
        Ok(Grading { p, n })
    }

    pub fn u(&self) -> Term {
        self.make(Shape::GenU, 2 * self.n - 2, 1, "u".into())
    }

    pub fn v(&self) -> Term {
        self.make(Shape::GenV, 2 * self.n - 1, 1, "v".into())
    }

    pub fn bracket(&self, x: &Term, y: &Term) -> Term {
        let text = format!("L[{},{}]", x.text, y.text);
        self.make(
            Shape::Bracket(x.clone(), y.clone()),
            x.degree + y.degree + 1,
            x.weight + y.weight,
            text,
        )
    }

    fn check_q_arg(&self, k: u32, x: &Term) -> Result<(u32, u32)> {
        if k == 0 {
            return Err(invalid!("Dyer-Lashof power k must be at least 1"));
        }
        if !x.is_lie() {
            return Err(invalid!("operation argument {x} is not a bracket term"));
        }
        if self.p != 2 && !x.parity().is_odd() {
            return Err(invalid!("operation argument {x} has even degree"));
        }
        let pk = self
            .p
            .checked_pow(k)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| invalid!("p^k overflows"))?;
        Ok((pk * (x.degree + 1) - 1, pk * x.weight))
    }

    pub fn q(&self, k: u32, x: &Term) -> Result<Term> {
        let (degree, weight) = self.check_q_arg(k, x)?;
        let text = format!("Q1^{k}[{}]", x.text);
        Ok(self.make(Shape::Q(k, x.clone()), degree, weight, text))
    }

    pub fn beta_q(&self, k: u32, x: &Term) -> Result<Term> {
        let (degree, weight) = self.check_q_arg(k, x)?;
        let text = format!("bQ1^{k}[{}]", x.text);
        Ok(self.make(Shape::BetaQ(k, x.clone()), degree - 1, weight, text))
    }

    /// `ad(x)^times (y) = [x, [x, ... [x, y]]]`.
    pub fn ad_power(&self, x: &Term, times: u32, y: &Term) -> Term {
        (0..times).fold(y.clone(), |acc, _| self.bracket(x, &acc))
    }

    /// Degree in the single-loop (tensor algebra) grading: one more than the double-loop degree.
    pub fn suspended_degree(&self, x: &Term) -> u32 {
        x.degree + 1
    }

    fn make(&self, shape: Shape, degree: u32, weight: u32, text: String) -> Term {
        Term {
            shape: Arc::new(shape),
            degree,
            weight,
            text: text.into(),
        }
    }
}
