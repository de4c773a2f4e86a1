//! Arithmetic in the prime field Z/p and dense linear algebra over it.

use crate::error::{invalid, Error, Result};

/// The prime field Z/p. Scalars are canonical representatives `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid!("{p} is not prime"));
        }
        if p > (1 << 31) {
            return Err(invalid!("prime {p} too large for u64 products"));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    /// Multiply by a sign `+1`/`-1` encoded as a bool (`true` = negative).
    #[inline]
    pub fn signed(self, a: u64, negative: bool) -> u64 {
        if negative {
            self.neg(a)
        } else {
            a
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in Z/{}", self.p);
        self.pow(a, self.p - 2)
    }
}

/// Dense row-major matrix over Z/p. `rows` is the target dimension, `cols` the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, fp: Fp, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(invalid!(
                "cannot compose {}x{} with {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, fp.add(cur, fp.mul(a, b)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, fp: Fp, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| fp.add(acc, fp.mul(self.get(i, j), v[j]))))
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn row_reduce(&mut self, fp: Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if src != row {
                for j in 0..self.cols {
                    self.data.swap(src * self.cols + j, row * self.cols + j);
                }
            }
            let inv = fp.inv(self.get(row, col));
            for j in col..self.cols {
                let x = self.get(row, j);
                self.set(row, j, fp.mul(x, inv));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let x = fp.sub(self.get(r, j), fp.mul(f, self.get(row, j)));
                    self.set(r, j, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, fp: Fp) -> usize {
        self.clone().row_reduce(fp).len()
    }

    /// Basis of the null space, one vector per free column, in increasing free-column order.
    pub fn kernel(&self, fp: Fp) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(fp);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = fp.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }
}

/// A subspace of `(Z/p)^ambient` kept as a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            let mut v = vec![0; ambient];
            v[i] = 1;
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn spanned_by(fp: Fp, ambient: usize, vectors: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(fp, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Residual of `v` after eliminating every pivot of this subspace.
    pub fn reduce(&self, fp: Fp, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = w[pc];
            if f != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = fp.sub(*x, fp.mul(f, y));
                }
            }
        }
        w
    }

    pub fn contains(&self, fp: Fp, v: &[u64]) -> bool {
        self.reduce(fp, v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, fp: Fp, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(fp, v))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, fp: Fp, v: Vec<u64>) -> bool {
        let mut w = self.reduce(fp, &v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp.inv(w[pc]);
        for x in w.iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = fp.sub(*x, fp.mul(f, y));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        true
    }

    pub fn sum(&self, fp: Fp, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(fp, v.clone());
        }
        s
    }
}

/// Expresses vectors in the span of a fixed family, tracking coefficients.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    rows: Vec<(Vec<u64>, Vec<u64>, usize)>,
    family: usize,
}

impl SpanSolver {
    pub fn new(fp: Fp, ambient: usize, family: &[Vec<u64>]) -> Result<Self> {
        let mut s = SpanSolver {
            rows: Vec::new(),
            family: family.len(),
        };
        for (i, v) in family.iter().enumerate() {
            assert_eq!(v.len(), ambient);
            let mut tag = vec![0; family.len()];
            tag[i] = 1;
            let (w, t) = s.eliminate(fp, v.clone(), tag);
            let Some(pc) = w.iter().position(|&x| x != 0) else {
                return Err(Error::OracleMismatch(format!(
                    "family member #{i} is linearly dependent on earlier ones"
                )));
            };
            let inv = fp.inv(w[pc]);
            let w: Vec<u64> = w.iter().map(|&x| fp.mul(x, inv)).collect();
            let t: Vec<u64> = t.iter().map(|&x| fp.mul(x, inv)).collect();
            for row in s.rows.iter_mut() {
                let f = row.0[pc];
                if f != 0 {
                    for (x, &y) in row.0.iter_mut().zip(&w) {
                        *x = fp.sub(*x, fp.mul(f, y));
                    }
                    for (x, &y) in row.1.iter_mut().zip(&t) {
                        *x = fp.sub(*x, fp.mul(f, y));
                    }
                }
            }
            s.rows.push((w, t, pc));
        }
        Ok(s)
    }

    fn eliminate(&self, fp: Fp, mut v: Vec<u64>, mut tag: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        for (row, rt, pc) in &self.rows {
            let f = v[*pc];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = fp.sub(*x, fp.mul(f, y));
                }
                for (x, &y) in tag.iter_mut().zip(rt) {
                    *x = fp.sub(*x, fp.mul(f, y));
                }
            }
        }
        (v, tag)
    }

    /// Coefficients `c` with `Σ c_i family_i = v`, or `None` when `v` is outside the span.
    pub fn solve(&self, fp: Fp, v: &[u64]) -> Option<Vec<u64>> {
        let (rest, tag) = self.eliminate(fp, v.to_vec(), vec![0; self.family]);
        if rest.iter().any(|&x| x != 0) {
            return None;
        }
        Some(tag.iter().map(|&x| fp.neg(x)).collect())
    }
}

/// Coefficient vectors `c` with `Σ c_i v_i = 0`, as a basis of the relation space.
pub fn free_kernel_combinations(fp: Fp, ambient: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    Matrix::from_columns(ambient, vectors).kernel(fp)
}

/// Homology of `C_{+1} --d_in--> C --d_out--> C_{-1}` at the middle term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub dim: usize,
    /// Cycles whose classes form a basis of `ker d_out / im d_in`.
    pub representatives: Vec<Vec<u64>>,
}

/// Generic kernel-mod-image subquotient. `d_in` has `dim C` rows, `d_out` has `dim C` columns.
pub fn fp_homology(fp: Fp, d_in: &Matrix, d_out: &Matrix) -> Result<Homology> {
    if d_in.rows() != d_out.cols() {
        return Err(invalid!(
            "incoming map lands in dimension {} but outgoing map starts from {}",
            d_in.rows(),
            d_out.cols()
        ));
    }
    let composite = d_out.mul(fp, d_in)?;
    if !composite.is_zero() {
        return Err(Error::DSquaredNonzero(
            "outgoing map composed with incoming map is nonzero".into(),
        ));
    }
    let middle = d_in.rows();
    let mut span = Subspace::spanned_by(fp, middle, (0..d_in.cols()).map(|j| d_in.column(j)));
    let mut representatives = Vec::new();
    for z in d_out.kernel(fp) {
        if span.insert(fp, z.clone()) {
            representatives.push(z);
        }
    }
    Ok(Homology {
        dim: representatives.len(),
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(7).is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        let fp = Fp::new(11).unwrap();
        for a in 1..11 {
            assert_eq!(fp.mul(a, fp.inv(a)), 1);
        }
    }

    #[test]
    fn zero_maps_give_full_homology() {
        let h = fp_homology(f3(), &Matrix::zeros(3, 0), &Matrix::zeros(0, 3)).unwrap();
        assert_eq!(h.dim, 3);
    }

    #[test]
    fn identity_in_kills_everything() {
        let h = fp_homology(f3(), &Matrix::identity(3), &Matrix::zeros(0, 3)).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn rejects_nonzero_composite() {
        let e = fp_homology(f3(), &Matrix::identity(2), &Matrix::identity(2)).unwrap_err();
        assert!(matches!(e, Error::DSquaredNonzero(_)));
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let fp = Fp::new(5).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2, 3, 4], vec![2, 4, 1, 0]], 4);
        let k = m.kernel(fp);
        assert_eq!(k.len(), 4 - m.rank(fp));
        for v in k {
            assert!(m.apply(fp, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn subspace_insert_tracks_dimension() {
        let fp = f3();
        let mut s = Subspace::zero(3);
        assert!(s.insert(fp, vec![1, 1, 0]));
        assert!(!s.insert(fp, vec![2, 2, 0]));
        assert!(s.insert(fp, vec![0, 1, 1]));
        assert!(s.contains(fp, &[1, 2, 1]));
        assert!(!s.contains(fp, &[1, 2, 2]));
        assert_eq!(s.dim(), 2);
    }
}
