//! Exact arithmetic in small finite fields GF(p^h).
//!
//! Elements are encoded as integers in `[0, p^h)`: the base-`p` digits of the
//! index (least significant first) are the coordinates of the element in the
//! basis `{1, w, ..., w^(h-1)}`, where `w` is a root of the bundled primitive
//! modulus. Fields with at most 2^16 elements carry exp/log/Zech tables; larger
//! ones (up to the 2^20 cap) fall back to polynomial arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Field element index.
pub type Elem = u32;

/// Shared handle to a field.
pub type Field = Arc<FieldSpec>;

pub const MAX_FIELD_SIZE: u64 = 1 << 20;
const TABLE_LIMIT: u32 = 1 << 16;
const NO_ZECH: u32 = u32::MAX;

static MODULI_TEXT: &str = include_str!("../data/moduli.txt");
static MODULI: OnceLock<Result<HashMap<(u32, u32), Vec<u32>>>> = OnceLock::new();

/// Parses the modulus fixture format: `p h c0 c1 ... ch` per line, `#` comments.
pub fn parse_moduli(text: &str) -> Result<HashMap<(u32, u32), Vec<u32>>> {
    let mut out = HashMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Fixture { line: ln + 1, reason: e.to_string() })?;
        if nums.len() < 3 {
            return Err(Error::Fixture { line: ln + 1, reason: "too few fields".into() });
        }
        let (p, h) = (nums[0], nums[1]);
        let coeffs = nums[2..].to_vec();
        if coeffs.len() != h as usize + 1 || coeffs[h as usize] != 1 {
            return Err(Error::Fixture {
                line: ln + 1,
                reason: format!("expected {} monic coefficients", h + 1),
            });
        }
        if coeffs.iter().any(|&c| c >= p) {
            return Err(Error::Fixture { line: ln + 1, reason: "coefficient out of range".into() });
        }
        out.insert((p, h), coeffs);
    }
    Ok(out)
}

fn bundled_moduli() -> Result<&'static HashMap<(u32, u32), Vec<u32>>> {
    MODULI
        .get_or_init(|| parse_moduli(MODULI_TEXT))
        .as_ref()
        .map_err(Clone::clone)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p as u64 - 1);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| modpow(g as u64, (p as u64 - 1) / r, p as u64) != 1)
        })
        .expect("every prime has a primitive root")
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

struct LogTables {
    exp: Vec<Elem>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

/// A finite field GF(p^h) with a fixed primitive modulus.
pub struct FieldSpec {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    prim: Elem,
    pow_p: Vec<u32>,
    tables: Option<LogTables>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Constructs GF(p^h) with the bundled modulus.
pub fn make_field(p: u32, h: u32) -> Result<Field> {
    FieldSpec::new(p, h).map(Arc::new)
}

impl FieldSpec {
    pub fn new(p: u32, h: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::Precondition("extension degree must be at least 1".into()));
        }
        let size = (p as u64).checked_pow(h).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge { p, h });
        }
        let (modulus, prim) = if h == 1 {
            let g = smallest_primitive_root(p);
            (vec![(p - g) % p, 1], g)
        } else {
            let m = bundled_moduli()?
                .get(&(p, h))
                .cloned()
                .ok_or(Error::MissingModulus { p, h })?;
            (m, p)
        };
        Self::with_modulus(p, h, modulus, prim)
    }

    fn with_modulus(p: u32, h: u32, modulus: Vec<u32>, prim: Elem) -> Result<Self> {
        let q = p.pow(h);
        let pow_p = (0..=h).map(|i| p.pow(i)).collect();
        let mut spec = FieldSpec { p, h, q, modulus, prim, pow_p, tables: None };
        if q <= TABLE_LIMIT {
            spec.tables = Some(spec.build_tables()?);
        } else if spec.multiplicative_order_slow(prim) != (q - 1) as u64 {
            return Err(Error::Fixture {
                line: 0,
                reason: format!("modulus for GF({p}^{h}) is not primitive"),
            });
        }
        Ok(spec)
    }

    fn build_tables(&self) -> Result<LogTables> {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0; 2 * n.max(1)];
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x: Elem = 1;
        for i in 0..n {
            if log[x as usize] != u32::MAX {
                return Err(Error::Fixture {
                    line: 0,
                    reason: format!("modulus for GF({}^{}) is not primitive", self.p, self.h),
                });
            }
            exp[i] = x;
            log[x as usize] = i as u32;
            x = self.poly_mul(x, self.prim);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let mut zech = vec![NO_ZECH; n.max(1)];
        for (i, z) in zech.iter_mut().enumerate().take(n) {
            let s = self.digit_add(exp[i], 1);
            if s != 0 {
                *z = log[s as usize];
            }
        }
        Ok(LogTables { exp, log, zech })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive_elem(&self) -> Elem {
        self.prim
    }

    /// Identifier stable across runs: `(p, h)` determines the bundled modulus.
    pub fn id(&self) -> u64 {
        ((self.p as u64) << 8) | self.h as u64
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// Embeds an integer via the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    fn digits(&self, mut a: Elem) -> [u32; 20] {
        let mut d = [0u32; 20];
        for slot in d.iter_mut().take(self.h as usize) {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digit_add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = [0u32; 20];
        for i in 0..self.h as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        self.from_digits(&out[..self.h as usize])
    }

    fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let h = self.h as usize;
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 40];
        for i in 0..h {
            if da[i] == 0 {
                continue;
            }
            for j in 0..h {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for d in (h..2 * h - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for k in 0..=h {
                let sub = c * self.modulus[k] as u64 % p;
                prod[d - h + k] = (prod[d - h + k] + p - sub) % p;
            }
        }
        let out: Vec<u32> = prod[..h].iter().map(|&c| c as u32).collect();
        self.from_digits(&out)
    }

    fn multiplicative_order_slow(&self, a: Elem) -> u64 {
        let n = (self.q - 1) as u64;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord % r == 0 && self.pow_u(a, ord / r) == 1 {
                ord /= r;
            }
        }
        ord
    }

    fn pow_u(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut r: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let n = self.q - 1;
                let (la, lb) = (t.log[a as usize], t.log[b as usize]);
                let z = t.zech[((lb + n - la) % n) as usize];
                if z == NO_ZECH {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
            None => self.digit_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a == 0 {
            return a;
        }
        let d = self.digits(a);
        let out: Vec<u32> = d[..self.h as usize]
            .iter()
            .map(|&c| (self.p - c) % self.p)
            .collect();
        self.from_digits(&out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.poly_mul(a, b),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
            None => self.pow_u(a, (self.q - 2) as u64),
        })
    }

    /// Inverse of a nonzero element; panics on zero.
    #[inline]
    pub fn inv_nz(&self, a: Elem) -> Elem {
        self.inv(a).expect("inverse of zero")
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, negative exponents through the inverse.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if e == 0 {
            return Ok(1);
        }
        if a == 0 {
            return if e > 0 { Ok(0) } else { Err(Error::ZeroInverse) };
        }
        let n = (self.q - 1) as i64;
        let r = e.rem_euclid(n) as u64;
        Ok(match &self.tables {
            Some(t) => t.exp[((t.log[a as usize] as u64 * r) % n as u64) as usize],
            None => self.pow_u(a, r),
        })
    }

    /// `a^e` for nonzero `a` or nonnegative `e`; panics on `0^(negative)`.
    #[inline]
    pub fn pw(&self, a: Elem, e: i64) -> Elem {
        self.pow(a, e).expect("zero to a negative power")
    }

    /// Discrete log base the primitive element.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize]),
            None => {
                let mut x: Elem = 1;
                for i in 0..self.q - 1 {
                    if x == a {
                        return Some(i);
                    }
                    x = self.mul(x, self.prim);
                }
                None
            }
        }
    }

    /// `w^i` for the primitive element `w`.
    pub fn exp(&self, i: i64) -> Elem {
        self.pw(self.prim, i)
    }

    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.multiplicative_order_slow(a))
    }

    /// `x^(p^s)`.
    pub fn frobenius_power(&self, x: Elem, s: u32) -> Elem {
        let s = s % self.h;
        self.pw(x, self.pow_p[s as usize] as i64)
    }

    fn check_sub(&self, sub_degree: u32) -> Result<()> {
        if sub_degree == 0 || self.h % sub_degree != 0 {
            return Err(Error::NotSubfield { sub: sub_degree, h: self.h });
        }
        Ok(())
    }

    /// Relative trace into GF(p^sub_degree).
    pub fn trace(&self, x: Elem, sub_degree: u32) -> Result<Elem> {
        self.check_sub(sub_degree)?;
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.h / sub_degree {
            acc = self.add(acc, y);
            y = self.frobenius_power(y, sub_degree);
        }
        Ok(acc)
    }

    /// Relative norm into GF(p^sub_degree).
    pub fn norm(&self, x: Elem, sub_degree: u32) -> Result<Elem> {
        self.check_sub(sub_degree)?;
        let mut acc = 1;
        let mut y = x;
        for _ in 0..self.h / sub_degree {
            acc = self.mul(acc, y);
            y = self.frobenius_power(y, sub_degree);
        }
        Ok(acc)
    }

    pub fn in_subfield(&self, x: Elem, sub_degree: u32) -> bool {
        self.h % sub_degree == 0 && self.frobenius_power(x, sub_degree) == x
    }

    /// Primitive element of the subfield GF(p^sub_degree).
    pub fn subfield_generator(&self, sub_degree: u32) -> Result<Elem> {
        self.check_sub(sub_degree)?;
        let sub_q = self.p.pow(sub_degree) as i64;
        Ok(self.exp((self.q as i64 - 1) / (sub_q - 1)))
    }

    /// GF(p)-basis `{g^0, ..., g^(d-1)}` of the subfield GF(p^d), `g` its generator.
    pub fn subfield_basis(&self, sub_degree: u32) -> Result<Vec<Elem>> {
        if sub_degree == self.h {
            return Ok((0..self.h).map(|i| self.pow_p[i as usize]).collect());
        }
        let g = self.subfield_generator(sub_degree)?;
        // powers of g span the subfield when g's minimal polynomial has degree d;
        // fall back to a greedy independent set otherwise.
        let elems: Vec<Elem> = self.elements().filter(|&x| self.in_subfield(x, sub_degree)).collect();
        let mut basis = Vec::new();
        let mut span: Vec<Elem> = vec![0];
        let mut candidates = (0..sub_degree as i64).map(|i| self.pw(g, i)).chain(elems);
        while basis.len() < sub_degree as usize {
            let c = candidates.next().expect("subfield has a basis");
            if span.contains(&c) {
                continue;
            }
            let mut next = Vec::with_capacity(span.len() * self.p as usize);
            for &s in &span {
                let mut m = s;
                for _ in 0..self.p {
                    next.push(m);
                    m = self.add(m, c);
                }
            }
            span = next;
            basis.push(c);
        }
        Ok(basis)
    }

    /// Coordinates of `x` over GF(p) in the polynomial basis.
    pub fn coords(&self, x: Elem) -> Vec<u32> {
        self.digits(x)[..self.h as usize].to_vec()
    }

    pub fn from_coords(&self, c: &[u32]) -> Elem {
        self.from_digits(c)
    }

    /// `x -> x^(2^(e+1))` on GF(2^(2e+1)).
    pub fn suzuki_sigma(&self, x: Elem) -> Result<Elem> {
        let e = self.suzuki_e()?;
        Ok(self.pw(x, 1i64 << (e + 1)))
    }

    /// Integer exponent `2^(e+1)` of the Suzuki automorphism.
    pub fn suzuki_exponent(&self) -> Result<i64> {
        Ok(1i64 << (self.suzuki_e()? + 1))
    }

    fn suzuki_e(&self) -> Result<u32> {
        if self.p != 2 || self.h % 2 == 0 {
            return Err(Error::NotSuzukiField { p: self.p, h: self.h });
        }
        Ok((self.h - 1) / 2)
    }

    /// Whether the modulus is irreducible, by trial division against every
    /// monic polynomial of degree at most h/2.
    pub fn modulus_is_irreducible(&self) -> bool {
        poly_irreducible(&self.modulus, self.p)
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = modpow(b[db], p - 2, p);
    while r.len() > db {
        let c = *r.last().unwrap() * lead_inv % p;
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - c * bk % p) % p;
            }
        }
        r.pop();
        while r.len() > 1 && *r.last().unwrap() == 0 && r.len() > db {
            r.pop();
        }
    }
    r
}

/// Trial-division irreducibility test for a polynomial over GF(p), coefficients low to high.
pub fn poly_irreducible(coeffs: &[u32], p: u32) -> bool {
    let f: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    let p = p as u64;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut m = n;
            for _ in 0..d {
                g.push(m % p);
                m /= p;
            }
            g.push(1);
            if poly_rem(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Checked field element carrying its field id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub field: u64,
    pub index: Elem,
}

impl FieldSpec {
    pub fn elem(&self, index: Elem) -> FieldElem {
        FieldElem { field: self.id(), index: index % self.q }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Pow,
    Neg,
}

#[derive(Debug, Clone, Copy)]
pub enum Operand {
    Elem(FieldElem),
    Int(i64),
}

/// Checked arithmetic: every operand must belong to `field`.
pub fn field_op(field: &FieldSpec, op: FieldOp, a: FieldElem, b: Operand) -> Result<FieldElem> {
    let id = field.id();
    if a.field != id {
        return Err(Error::FieldMismatch);
    }
    let other = |b: Operand| -> Result<Elem> {
        match b {
            Operand::Elem(e) if e.field == id => Ok(e.index),
            Operand::Elem(_) => Err(Error::FieldMismatch),
            Operand::Int(n) => Ok(field.from_int(n)),
        }
    };
    let index = match op {
        FieldOp::Add => field.add(a.index, other(b)?),
        FieldOp::Mul => field.mul(a.index, other(b)?),
        FieldOp::Inv => field.inv(a.index)?,
        FieldOp::Neg => field.neg(a.index),
        FieldOp::Pow => match b {
            Operand::Int(e) => field.pow(a.index, e)?,
            Operand::Elem(_) => {
                return Err(Error::Precondition("pow takes an integer exponent".into()))
            }
        },
    };
    Ok(FieldElem { field: id, index })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Largest divisor of `a^e - 1` coprime to every `a^i - 1` with `1 <= i < e`.
pub fn primitive_part(a: u64, e: u32) -> Result<u64> {
    if a < 2 || e == 0 {
        return Err(Error::Precondition("primitive_part needs a >= 2 and e >= 1".into()));
    }
    let big = a
        .checked_pow(e)
        .filter(|&v| v <= 1u64 << 62)
        .ok_or_else(|| Error::Overflow(format!("{a}^{e} exceeds 2^62")))?;
    let mut n = big - 1;
    for i in 1..e {
        let m = a.pow(i) - 1;
        loop {
            let g = gcd(n, m);
            if g == 1 {
                break;
            }
            n /= g;
        }
    }
    Ok(n)
}
