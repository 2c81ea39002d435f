//! The point set of `V_n(q)` as integer indices.
//!
//! A vector `(v_0, ..., v_{n-1})` has index `sum idx(v_i) * q^i`; because field
//! indices are themselves base-`p` digit strings, the index is the
//! little-endian base-`p` encoding of the `n*h` prime-field coordinates.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{make_field, Elem, Field};

pub const MAX_SPACE_SIZE: u64 = 1 << 24;

#[derive(Debug)]
pub struct Space {
    field: Field,
    n: usize,
    p: u32,
    dim: usize,
    size: u32,
    pw: Vec<u32>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.field == *other.field
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(field: Field, n: usize) -> Result<Arc<Space>> {
        let p = field.p();
        let dim = n * field.h() as usize;
        let size = (p as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
        if n == 0 || size > MAX_SPACE_SIZE {
            return Err(Error::CapExceeded {
                what: format!("V_{n}({})", field.order()),
                size: size as u128,
                cap: MAX_SPACE_SIZE as u128,
            });
        }
        let pw = (0..=dim).map(|k| p.pow(k as u32)).collect();
        Ok(Arc::new(Space { field, n, p, dim, size: size as u32, pw }))
    }

    /// `V_n(p)` over the prime field.
    pub fn prime(p: u32, n: usize) -> Result<Arc<Space>> {
        Space::new(make_field(p, 1)?, n)
    }

    /// The same point set viewed over the prime field.
    pub fn prime_view(&self) -> Result<Arc<Space>> {
        Space::prime(self.p, self.dim)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Dimension over GF(q).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Dimension over GF(p).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// The `k`-th prime-field basis point `p^k`.
    pub fn basis_point(&self, k: usize) -> u32 {
        self.pw[k]
    }

    pub fn index(&self, v: &[Elem]) -> Result<u32> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        let q = self.field.order();
        Ok(v.iter().rev().fold(0u32, |acc, &c| acc * q + c))
    }

    pub fn vector(&self, x: u32) -> Vec<Elem> {
        let q = self.field.order();
        let mut x = x;
        (0..self.n)
            .map(|_| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    }

    /// Prime-field digits, least significant first.
    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.dim)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for k in 0..self.dim {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * self.pw[k];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.scale_prime(a, self.p - 1)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// `c * a` for a prime-field scalar `c`.
    #[inline]
    pub fn scale_prime(&self, a: u32, c: u32) -> u32 {
        let c = c % self.p;
        if self.p == 2 {
            return if c == 0 { 0 } else { a };
        }
        let mut a = a;
        let mut out = 0;
        for k in 0..self.dim {
            out += (a % self.p * c % self.p) * self.pw[k];
            a /= self.p;
        }
        out
    }

    /// `c * a` for a GF(q) scalar.
    pub fn scale(&self, a: u32, c: Elem) -> u32 {
        let f = &self.field;
        let v: Vec<Elem> = self.vector(a).into_iter().map(|x| f.mul(x, c)).collect();
        self.index(&v).expect("length preserved")
    }

    pub fn points(&self) -> std::ops::Range<u32> {
        0..self.size
    }
}
