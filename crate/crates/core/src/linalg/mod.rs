//! Matrices over GF(q), prime-field elimination, subspaces and forms.

mod form;
mod subspace;

pub use form::{enumerate_isotropic, evaluate_form, invariant_bilinear_forms, BilinearForm, FormKind};
pub use subspace::{canonical_subspace, Subspace};

use crate::error::{Error, Result};
use crate::field::{make_field, prime_factors, Elem, FieldSpec};

/// Dense row-major matrix of field indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Matrix with the given entries on the diagonal.
    pub fn diag(d: &[Elem]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn mul(&self, f: &FieldSpec, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FieldSpec, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: v.len() });
        }
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise `x -> x^(p^s)`.
    pub fn frobenius(&self, f: &FieldSpec, s: u32) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.frobenius_power(x, s)).collect(),
        }
    }

    pub fn scale(&self, f: &FieldSpec, c: Elem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn pow(&self, f: &FieldSpec, mut e: u64) -> Result<Matrix> {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base)?;
            }
            base = base.mul(f, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Gaussian elimination returning (rank, determinant, inverse if square and regular).
    fn eliminate(&self, f: &FieldSpec) -> (usize, Elem, Option<Matrix>) {
        let (n, m) = (self.rows, self.cols);
        let square = n == m;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let mut det: Elem = 1;
        let mut rank = 0;
        for col in 0..m {
            let Some(piv) = (rank..n).find(|&r| a.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                for j in 0..m {
                    let t = a.get(piv, j);
                    a.set(piv, j, a.get(rank, j));
                    a.set(rank, j, t);
                }
                for j in 0..n {
                    let t = inv.get(piv, j);
                    inv.set(piv, j, inv.get(rank, j));
                    inv.set(rank, j, t);
                }
                det = f.neg(det);
            }
            let pv = a.get(rank, col);
            det = f.mul(det, pv);
            let pinv = f.inv_nz(pv);
            for j in 0..m {
                a.set(rank, j, f.mul(a.get(rank, j), pinv));
            }
            for j in 0..n {
                inv.set(rank, j, f.mul(inv.get(rank, j), pinv));
            }
            for r in 0..n {
                if r == rank {
                    continue;
                }
                let c = a.get(r, col);
                if c == 0 {
                    continue;
                }
                for j in 0..m {
                    let v = f.sub(a.get(r, j), f.mul(c, a.get(rank, j)));
                    a.set(r, j, v);
                }
                for j in 0..n {
                    let v = f.sub(inv.get(r, j), f.mul(c, inv.get(rank, j)));
                    inv.set(r, j, v);
                }
            }
            rank += 1;
        }
        let regular = square && rank == n;
        (rank, if square && regular { det } else { 0 }, regular.then_some(inv))
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.eliminate(f).0
    }

    pub fn det(&self, f: &FieldSpec) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        Ok(self.eliminate(f).1)
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        self.eliminate(f).2.ok_or(Error::Singular)
    }

    pub fn is_invertible(&self, f: &FieldSpec) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    /// Fixture line: `n q; entries...`.
    pub fn to_fixture(&self, q: u32) -> String {
        let body: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        format!("{} {}; {}", self.rows, q, body.join(" "))
    }
}

/// Splits `q` into `(p, h)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let f = prime_factors(q as u64);
    if f.len() != 1 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    let p = f[0] as u32;
    let mut h = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        h += 1;
    }
    Ok((p, h))
}

/// Parses matrix fixture text: one `n q; entries` record per non-comment line.
pub fn parse_matrix_fixture(text: &str) -> Result<Vec<(u32, Matrix)>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| Error::Fixture { line: ln + 1, reason: reason.to_string() };
        let (head, body) = line.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let head: Vec<u32> = head
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad header"))?;
        let [n, q] = head[..] else { return Err(bad("header must be 'n q'")) };
        let entries: Vec<Elem> = body
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad entry"))?;
        if entries.iter().any(|&x| x >= q) {
            return Err(bad("entry out of range"));
        }
        let m = Matrix::new(n as usize, n as usize, entries).map_err(|e| bad(&e.to_string()))?;
        out.push((q, m));
    }
    Ok(out)
}

/// Loads a fixture whose matrices all live over the same field.
pub fn load_matrices(text: &str) -> Result<(crate::field::Field, Vec<Matrix>)> {
    let recs = parse_matrix_fixture(text)?;
    let q = recs.first().map(|r| r.0).ok_or_else(|| Error::Parse("empty fixture".into()))?;
    if recs.iter().any(|r| r.0 != q) {
        return Err(Error::Parse("mixed fields in one fixture".into()));
    }
    let (p, h) = prime_power(q)?;
    Ok((make_field(p, h)?, recs.into_iter().map(|r| r.1).collect()))
}

/// Elimination over GF(p) on digit vectors.
pub(crate) mod prime {
    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Row-reduces in place, returning pivot columns in row order.
    pub fn rref(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, piv);
            let inv = inv_mod(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..ncols {
                        rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        pivots
    }

    /// Basis of `{x : M x = 0}` for `M` given by rows.
    pub fn nullspace(mut rows: Vec<Vec<u32>>, ncols: usize, p: u32) -> Vec<Vec<u32>> {
        if rows.is_empty() {
            return (0..ncols)
                .map(|i| (0..ncols).map(|j| u32::from(i == j)).collect())
                .collect();
        }
        let pivots = rref(&mut rows, p);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u32; ncols];
                x[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - rows[r][fc]) % p;
                }
                x
            })
            .collect()
    }

    /// Inverse of a square GF(p) matrix given by rows.
    pub fn inverse(m: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
        let n = m.len();
        let mut aug: Vec<Vec<u32>> = m
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        let piv = rref(&mut aug, p);
        if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}
