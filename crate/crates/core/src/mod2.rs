//! The weight-2 part of H_*(Ω²P^{2n+1}(2^r); Z/2): six classes, their dual Steenrod
//! operations and Bockstein pattern, the search for splittings of that module, and the
//! equivariant chain computation behind the top Bockstein.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::{Fp, Matrix, Subspace};

/// Indices of the six classes, in the module's fixed basis order.
pub const U2: usize = 0;
pub const UV: usize = 1;
pub const V2: usize = 2;
pub const LAMBDA: usize = 3;
pub const Q1U: usize = 4;
pub const Q1V: usize = 5;

pub const CLASS_NAMES: [&str; 6] = ["u^2", "u*v", "v^2", "L[u,v]", "Q1^1[u]", "Q1^1[v]"];

/// A Bockstein recorded as a partial pairing on a given page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub page: u32,
    pub source: usize,
    pub target: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteenrodModule {
    pub r: u32,
    pub n: u32,
    pub degrees: [u32; 6],
    pub sq1: Matrix,
    pub sq2: Matrix,
    pub bocksteins: Vec<Pairing>,
}

fn f2() -> Fp {
    Fp::new(2).expect("2 is prime")
}

fn unit(i: usize) -> Vec<u64> {
    let mut v = vec![0; 6];
    v[i] = 1;
    v
}

fn vec_of(classes: &[usize]) -> Vec<u64> {
    let mut v = vec![0; 6];
    for &i in classes {
        v[i] ^= 1;
    }
    v
}

/// Renders a vector in the six-class basis, e.g. `v^2+L[u,v]`.
pub fn render_vector(v: &[u64]) -> String {
    let parts: Vec<&str> = (0..6)
        .filter(|&i| v[i] % 2 == 1)
        .map(|i| CLASS_NAMES[i])
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn build_d2_module(r: u32, n: u32) -> Result<SteenrodModule> {
    if r == 0 {
        return Err(invalid!("r must be at least 1"));
    }
    if n < 2 {
        return Err(invalid!("n must be at least 2, got {n}"));
    }
    let degrees = [
        4 * n - 4,
        4 * n - 3,
        4 * n - 2,
        4 * n - 2,
        4 * n - 3,
        4 * n - 1,
    ];
    let mut sq1 = Matrix::zeros(6, 6);
    let mut sq2 = Matrix::zeros(6, 6);
    let set = |m: &mut Matrix, from: usize, to: &[usize]| {
        for &t in to {
            m.set(t, from, 1);
        }
    };
    let bocksteins = if r == 1 {
        set(&mut sq1, Q1V, &[V2, LAMBDA]);
        set(&mut sq1, UV, &[U2]);
        set(&mut sq2, Q1V, &[Q1U]);
        set(&mut sq2, V2, &[U2]);
        vec![
            Pairing {
                page: 1,
                source: Q1V,
                target: vec_of(&[V2, LAMBDA]),
            },
            Pairing {
                page: 1,
                source: UV,
                target: unit(U2),
            },
            Pairing {
                page: 2,
                source: LAMBDA,
                target: unit(Q1U),
            },
        ]
    } else {
        set(&mut sq1, Q1V, &[V2]);
        vec![
            Pairing {
                page: 1,
                source: Q1V,
                target: unit(V2),
            },
            Pairing {
                page: r,
                source: UV,
                target: unit(U2),
            },
            Pairing {
                page: r + 1,
                source: LAMBDA,
                target: unit(Q1U),
            },
        ]
    };
    let module = SteenrodModule {
        r,
        n,
        degrees,
        sq1,
        sq2,
        bocksteins,
    };
    module.check_shape()?;
    Ok(module)
}

/// One row of the operation table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperationValue {
    pub operation: String,
    pub source: String,
    pub value: String,
}

impl SteenrodModule {
    pub fn dim(&self) -> usize {
        6
    }

    pub fn bockstein_matrix(&self, page: u32) -> Matrix {
        let mut m = Matrix::zeros(6, 6);
        for b in self.bocksteins.iter().filter(|b| b.page == page) {
            for (i, &c) in b.target.iter().enumerate() {
                m.set(i, b.source, c);
            }
        }
        m
    }

    /// All operations as (label, matrix): Sq¹, Sq², then one matrix per Bockstein page.
    pub fn operations(&self) -> Vec<(String, Matrix)> {
        let mut ops = vec![
            ("Sq1".to_string(), self.sq1.clone()),
            ("Sq2".to_string(), self.sq2.clone()),
        ];
        let pages: std::collections::BTreeSet<u32> =
            self.bocksteins.iter().map(|b| b.page).collect();
        for s in pages {
            ops.push((format!("b{s}"), self.bockstein_matrix(s)));
        }
        ops
    }

    fn check_shape(&self) -> Result<()> {
        let fp = f2();
        let lowering = [(&self.sq1, 1), (&self.sq2, 2)];
        for (m, drop) in lowering {
            for (j, source) in CLASS_NAMES.iter().enumerate() {
                for (i, target) in CLASS_NAMES.iter().enumerate() {
                    if m.get(i, j) != 0 && self.degrees[i] + drop != self.degrees[j] {
                        return Err(Error::IllDefined(format!(
                            "operation sends {source} to {target} but does not lower degree by {drop}"
                        )));
                    }
                }
            }
        }
        for b in &self.bocksteins {
            for (i, &c) in b.target.iter().enumerate() {
                if c != 0 && self.degrees[i] + 1 != self.degrees[b.source] {
                    return Err(Error::IllDefined(format!(
                        "Bockstein on {} is not of degree -1",
                        CLASS_NAMES[b.source]
                    )));
                }
            }
        }
        if !self.sq1.mul(fp, &self.sq1)?.is_zero() {
            return Err(Error::DSquaredNonzero("Sq1 Sq1 is nonzero".into()));
        }
        Ok(())
    }

    /// The table of operation values: four nonzero-pattern Steenrod values, the two
    /// vanishing ones on the bracket, and the three Bocksteins.
    pub fn table(&self) -> Vec<OperationValue> {
        let fp = f2();
        let row = |op: &str, m: &Matrix, i: usize| OperationValue {
            operation: op.into(),
            source: CLASS_NAMES[i].into(),
            value: render_vector(&m.apply(fp, &unit(i))),
        };
        let mut out = vec![
            row("Sq1", &self.sq1, Q1V),
            row("Sq2", &self.sq2, Q1V),
            row("Sq2", &self.sq2, V2),
            row("Sq1", &self.sq1, UV),
            row("Sq1", &self.sq1, LAMBDA),
            row("Sq2", &self.sq2, LAMBDA),
        ];
        for b in &self.bocksteins {
            out.push(OperationValue {
                operation: format!("b{}", b.page),
                source: CLASS_NAMES[b.source].into(),
                value: render_vector(&b.target),
            });
        }
        out
    }

    /// Checks Sq¹, Sq² on the products against the Cartan formula from the action on
    /// u and v, on the bracket against the bracket Cartan formula with λ(u,u) = 0, and
    /// Sq² on Q1^1[v] against Q1 applied to Sq¹ v.
    pub fn consistency(&self) -> Result<()> {
        let fp = f2();
        // action on the degree-one generators: index 0 = u, 1 = v
        let sq_gen = |i: u32, g: usize| -> Vec<(usize, u64)> {
            match (i, g) {
                (0, g) => vec![(g, 1)],
                (1, 1) if self.r == 1 => vec![(0, 1)],
                _ => vec![],
            }
        };
        let product = |a: usize, b: usize| match (a.min(b), a.max(b)) {
            (0, 0) => U2,
            (0, 1) => UV,
            _ => V2,
        };
        let mut expected = [Matrix::zeros(6, 6), Matrix::zeros(6, 6)];
        for (x, y, class) in [(0, 0, U2), (0, 1, UV), (1, 1, V2)] {
            for k in 1..=2u32 {
                let mut col = [0; 6];
                for i in 0..=k {
                    for (a, ca) in sq_gen(i, x) {
                        for (b, cb) in sq_gen(k - i, y) {
                            let t = product(a, b);
                            col[t] = fp.add(col[t], fp.mul(ca, cb));
                        }
                    }
                }
                for (t, &c) in col.iter().enumerate() {
                    expected[k as usize - 1].set(t, class, c);
                }
            }
        }
        for k in 1..=2u32 {
            // λ(Sq^i u, Sq^j v) only survives as λ(u, v) at i = j = 0; λ(u, u) = 0
            let mut col = [0; 6];
            for i in 0..=k {
                for (a, _) in sq_gen(i, 0) {
                    for (b, _) in sq_gen(k - i, 1) {
                        if a != b {
                            col[LAMBDA] ^= 1;
                        }
                    }
                }
            }
            for (t, &c) in col.iter().enumerate() {
                expected[k as usize - 1].set(t, LAMBDA, c);
            }
        }
        for (k, m) in [(1, &self.sq1), (2, &self.sq2)] {
            for class in [U2, UV, V2, LAMBDA] {
                let want = expected[k - 1].column(class);
                if m.column(class) != want {
                    return Err(Error::OracleMismatch(format!(
                        "Sq{k} on {} is {}, the Cartan formula gives {}",
                        CLASS_NAMES[class],
                        render_vector(&m.column(class)),
                        render_vector(&want)
                    )));
                }
            }
        }
        let nishida = if self.r == 1 { unit(Q1U) } else { vec![0; 6] };
        if self.sq2.column(Q1V) != nishida {
            return Err(Error::OracleMismatch(format!(
                "Sq2 on Q1^1[v] is {}, the Nishida relation gives {}",
                render_vector(&self.sq2.column(Q1V)),
                render_vector(&nishida)
            )));
        }
        Ok(())
    }
}

/// A splitting of the module into two nonzero pieces closed under every operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub first: Vec<String>,
    pub second: Vec<String>,
    #[serde(skip)]
    pub first_basis: Vec<Vec<u64>>,
    #[serde(skip)]
    pub second_basis: Vec<Vec<u64>>,
}

fn subspaces_of(fp: Fp, slice: &[usize]) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    let vectors: Vec<Vec<u64>> = (1u32..(1 << slice.len()))
        .map(|mask| {
            let picked: Vec<usize> = slice
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            vec_of(&picked)
        })
        .collect();
    for mask in 0u32..(1 << vectors.len()) {
        let s = Subspace::spanned_by(
            fp,
            6,
            vectors
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone()),
        );
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn complementary_pairs(fp: Fp, slice: &[usize]) -> Vec<(Subspace, Subspace)> {
    let subs = subspaces_of(fp, slice);
    let mut pairs = Vec::new();
    for a in &subs {
        for b in &subs {
            if a.dim() + b.dim() == slice.len() && a.sum(fp, b).dim() == slice.len() {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

fn closed(fp: Fp, space: &Subspace, ops: &[(String, Matrix)]) -> bool {
    ops.iter().all(|(_, m)| {
        space
            .basis()
            .iter()
            .all(|v| space.contains(fp, &m.apply(fp, v)))
    })
}

/// Every ordered pair of degree-homogeneous complementary subspaces, both nonzero and
/// both closed under Sq¹, Sq² and the Bockstein pairings.
pub fn decomposition_search(module: &SteenrodModule) -> Vec<Decomposition> {
    let fp = f2();
    let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &d) in module.degrees.iter().enumerate() {
        by_degree.entry(d).or_default().push(i);
    }
    let choices: Vec<Vec<(Subspace, Subspace)>> = by_degree
        .values()
        .map(|slice| complementary_pairs(fp, slice))
        .collect();
    let ops = module.operations();
    let mut found = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut first = Subspace::zero(6);
        let mut second = Subspace::zero(6);
        for (c, &i) in choices.iter().zip(&idx) {
            first = first.sum(fp, &c[i].0);
            second = second.sum(fp, &c[i].1);
        }
        if first.dim() > 0
            && second.dim() > 0
            && closed(fp, &first, &ops)
            && closed(fp, &second, &ops)
        {
            found.push(Decomposition {
                first: first.basis().iter().map(|v| render_vector(v)).collect(),
                second: second.basis().iter().map(|v| render_vector(v)).collect(),
                first_basis: first.basis().to_vec(),
                second_basis: second.basis().to_vec(),
            });
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return found;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Rebuilds every operation from its restrictions to the two pieces and compares with
/// the original matrix.
pub fn reconstructs(module: &SteenrodModule, dec: &Decomposition) -> Result<bool> {
    let fp = f2();
    let basis: Vec<Vec<u64>> = dec
        .first_basis
        .iter()
        .chain(&dec.second_basis)
        .cloned()
        .collect();
    if basis.len() != 6 {
        return Ok(false);
    }
    let change = Matrix::from_columns(6, &basis);
    let split = dec.first_basis.len();
    for (_, m) in module.operations() {
        let mut block = Matrix::zeros(6, 6);
        for (range, part) in [(0..split, &dec.first_basis), (split..6, &dec.second_basis)] {
            let solver = crate::field::SpanSolver::new(fp, 6, part)?;
            for (j, v) in range.clone().zip(part.iter()) {
                let Some(coords) = solver.solve(fp, &m.apply(fp, v)) else {
                    return Ok(false);
                };
                for (i, c) in range.clone().zip(coords) {
                    block.set(i, j, c);
                }
            }
        }
        if m.mul(fp, &change)? != change.mul(fp, &block)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Cell {
    A,
    B,
}

impl Cell {
    fn odd(self) -> bool {
        matches!(self, Cell::A)
    }

    fn name(self) -> &'static str {
        match self {
            Cell::A => "a",
            Cell::B => "b",
        }
    }
}

/// Integer chains `Σ c · e_k ⊗ x ⊗ y` in W ⊗_{Σ2} (X ⊗ X), with group elements already
/// moved onto the X factor.
type Chain = BTreeMap<(u32, Cell, Cell), i128>;

fn add(chain: &mut Chain, key: (u32, Cell, Cell), c: i128) {
    let e = chain.entry(key).or_insert(0);
    *e += c;
    if *e == 0 {
        chain.remove(&key);
    }
}

fn swap(chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (&(k, x, y), &c) in chain {
        let sign = if x.odd() && y.odd() { -1 } else { 1 };
        add(&mut out, (k, y, x), sign * c);
    }
    out
}

/// Multiplies by `c0 + c1·α`.
fn act(chain: &Chain, c0: i128, c1: i128) -> Chain {
    let mut out = Chain::new();
    for (&key, &c) in chain {
        add(&mut out, key, c0 * c);
    }
    for (&key, &c) in &swap(chain) {
        add(&mut out, key, c1 * c);
    }
    out
}

fn boundary_x(cell: Cell, r: u32) -> Option<(Cell, i128)> {
    match cell {
        Cell::A => Some((Cell::B, 1i128 << r)),
        Cell::B => None,
    }
}

fn differential(chain: &Chain, r: u32) -> Chain {
    let mut out = Chain::new();
    for (&(k, x, y), &c) in chain {
        let sign_k: i128 = if k % 2 == 0 { 1 } else { -1 };
        if k > 0 {
            let lower: Chain = [((k - 1, x, y), c)].into_iter().collect();
            for (key, v) in act(&lower, sign_k, 1) {
                add(&mut out, key, v);
            }
        }
        if let Some((dx, m)) = boundary_x(x, r) {
            add(&mut out, (k, dx, y), sign_k * m * c);
        }
        if let Some((dy, m)) = boundary_x(y, r) {
            let sx = if x.odd() { -1 } else { 1 };
            add(&mut out, (k, x, dy), sign_k * sx * m * c);
        }
    }
    out
}

fn render_chain(chain: &Chain) -> String {
    if chain.is_empty() {
        return "0".into();
    }
    chain
        .iter()
        .map(|(&(k, x, y), c)| format!("{c}*e{k}(x){}(x){}", x.name(), y.name()))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainIdentity {
    pub r: u32,
    /// Coefficient of `e_1 ⊗ b ⊗ b` in `d((α + 1) e_1 ⊗ a ⊗ b)`.
    pub coefficient: i128,
    pub expected: i128,
    /// `(α² - 1) e_0 ⊗ a ⊗ b`, which must vanish.
    pub intermediate: String,
    pub result: String,
    pub holds: bool,
}

/// Evaluates `d((α + 1) e_1 ⊗ a ⊗ b)` with `|a|` odd, `|b|` even, `da = 2^r b`.
pub fn verify_chain_identity(r: u32) -> Result<ChainIdentity> {
    if r == 0 || r > 100 {
        return Err(invalid!("r must be between 1 and 100, got {r}"));
    }
    let start: Chain = [((0, Cell::A, Cell::B), 1)].into_iter().collect();
    let intermediate = act(&act(&start, -1, 1), 1, 1);
    let seed: Chain = [((1, Cell::A, Cell::B), 1)].into_iter().collect();
    let result = differential(&act(&seed, 1, 1), r);
    let key = (1, Cell::B, Cell::B);
    if result.keys().any(|&k| k != key) {
        return Err(Error::OracleMismatch(format!(
            "boundary is not a multiple of e1(x)b(x)b: {}",
            render_chain(&result)
        )));
    }
    let coefficient = result.get(&key).copied().unwrap_or(0);
    let expected = -(1i128 << (r + 1));
    Ok(ChainIdentity {
        r,
        coefficient,
        expected,
        intermediate: render_chain(&intermediate),
        result: render_chain(&result),
        holds: coefficient == expected && intermediate.is_empty(),
    })
}
