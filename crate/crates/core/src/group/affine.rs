use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{prime, Matrix};
use crate::space::Space;

/// A GF(p)-linear map of `V`, stored as the images of the prime basis points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinMap {
    img: Vec<u32>,
}

impl LinMap {
    pub fn identity(space: &Space) -> Self {
        LinMap { img: (0..space.dim()).map(|k| space.basis_point(k)).collect() }
    }

    pub fn from_images(space: &Space, img: Vec<u32>) -> Result<Self> {
        if img.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: img.len() });
        }
        Ok(LinMap { img })
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    /// `x -> xA` for a GF(q)-matrix `A`.
    pub fn from_matrix(space: &Space, a: &Matrix) -> Result<Self> {
        let n = space.n();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.rows() });
        }
        let f = space.field();
        let h = f.h() as usize;
        let mut img = Vec::with_capacity(space.dim());
        for i in 0..n {
            for j in 0..h {
                let c = f.from_coords(&{
                    let mut d = vec![0; h];
                    d[j] = 1;
                    d
                });
                let row: Vec<Elem> = a.row(i).iter().map(|&x| f.mul(c, x)).collect();
                img.push(space.index(&row)?);
            }
        }
        Ok(LinMap { img })
    }

    /// Any additive map on vectors, sampled on the prime basis.
    pub fn from_additive(space: &Space, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Result<Self> {
        let img = (0..space.dim())
            .map(|k| space.index(&f(&space.vector(space.basis_point(k)))))
            .collect::<Result<_>>()?;
        Ok(LinMap { img })
    }

    #[inline]
    pub fn apply(&self, space: &Space, x: u32) -> u32 {
        if space.p() == 2 {
            let mut acc = 0;
            let mut x = x;
            while x != 0 {
                let k = x.trailing_zeros() as usize;
                acc ^= self.img[k];
                x &= x - 1;
            }
            return acc;
        }
        let p = space.p();
        let mut acc = 0;
        let mut x = x;
        let mut k = 0;
        while x != 0 {
            let d = x % p;
            if d != 0 {
                acc = space.add(acc, space.scale_prime(self.img[k], d));
            }
            x /= p;
            k += 1;
        }
        acc
    }

    /// `self` followed by `other`.
    pub fn then(&self, space: &Space, other: &LinMap) -> LinMap {
        LinMap { img: self.img.iter().map(|&x| other.apply(space, x)).collect() }
    }

    pub fn inverse(&self, space: &Space) -> Result<LinMap> {
        let rows: Vec<Vec<u32>> = self.img.iter().map(|&x| space.digits(x)).collect();
        let inv = prime::inverse(&rows, space.p()).ok_or(Error::Singular)?;
        Ok(LinMap { img: inv.iter().map(|r| space.from_digits(r)).collect() })
    }

    pub fn is_identity(&self, space: &Space) -> bool {
        self.img.iter().enumerate().all(|(k, &x)| x == space.basis_point(k))
    }

    /// Full point permutation.
    pub fn perm(&self, space: &Space) -> Vec<u32> {
        let size = space.size() as usize;
        let mut perm = vec![0u32; size];
        if space.p() == 2 {
            for x in 1..size {
                let k = x.trailing_zeros() as usize;
                perm[x] = perm[x & (x - 1)] ^ self.img[k];
            }
            return perm;
        }
        let p = space.p() as usize;
        for x in 1..size {
            // lowest nonzero digit position
            let mut k = 0;
            let mut y = x;
            while y % p == 0 {
                y /= p;
                k += 1;
            }
            let prev = x - space.basis_point(k) as usize;
            perm[x] = space.add(perm[prev], self.img[k]);
        }
        perm
    }

    /// The GF(q)-matrix if the map is GF(q)-linear.
    pub fn to_matrix(&self, space: &Space) -> Option<Matrix> {
        let f = space.field();
        let h = f.h() as usize;
        let n = space.n();
        let rows: Vec<Vec<Elem>> = (0..n).map(|i| space.vector(self.img[i * h])).collect();
        let m = Matrix::from_rows(&rows).ok()?;
        let back = LinMap::from_matrix(space, &m).ok()?;
        (back == *self).then_some(m)
    }
}

/// `x -> xA + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub lin: LinMap,
    pub t: u32,
}

impl AffineMap {
    pub fn identity(space: &Space) -> Self {
        AffineMap { lin: LinMap::identity(space), t: 0 }
    }

    pub fn linear(lin: LinMap) -> Self {
        AffineMap { lin, t: 0 }
    }

    pub fn translation(space: &Space, t: u32) -> Self {
        AffineMap { lin: LinMap::identity(space), t }
    }

    pub fn is_translation(&self, space: &Space) -> bool {
        self.lin.is_identity(space)
    }

    #[inline]
    pub fn apply(&self, space: &Space, x: u32) -> u32 {
        space.add(self.lin.apply(space, x), self.t)
    }

    /// `self` followed by `other`: `(A1, t1)(A2, t2) = (A1 A2, t1 A2 + t2)`.
    pub fn then(&self, space: &Space, other: &AffineMap) -> AffineMap {
        AffineMap {
            lin: self.lin.then(space, &other.lin),
            t: other.apply(space, self.t),
        }
    }

    pub fn inverse(&self, space: &Space) -> Result<AffineMap> {
        let li = self.lin.inverse(space)?;
        let t = space.neg(li.apply(space, self.t));
        Ok(AffineMap { lin: li, t })
    }

    pub fn is_identity(&self, space: &Space) -> bool {
        self.t == 0 && self.lin.is_identity(space)
    }

    pub fn perm(&self, space: &Space) -> Vec<u32> {
        let mut perm = self.lin.perm(space);
        if self.t != 0 {
            for x in perm.iter_mut() {
                *x = space.add(*x, self.t);
            }
        }
        perm
    }

    /// Multiplicative order, bounded by `cap`.
    pub fn order(&self, space: &Space, cap: u64) -> Option<u64> {
        let mut g = self.clone();
        for k in 1..=cap {
            if g.is_identity(space) {
                return Some(k);
            }
            g = g.then(space, self);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn matrix_action_matches_vec_mul() {
        for (p, h, n) in [(2, 2, 2), (3, 2, 2), (3, 1, 3), (2, 3, 2)] {
            let f = make_field(p, h).unwrap();
            let s = Space::new(f.clone(), n).unwrap();
            let w = f.primitive_elem();
            let mut a = Matrix::identity(n);
            a.set(0, n - 1, w);
            a.set(n - 1, 0, 1);
            a.set(0, 0, w);
            let m = LinMap::from_matrix(&s, &a).unwrap();
            let perm = m.perm(&s);
            for x in s.points() {
                let v = s.vector(x);
                let expect = s.index(&a.vec_mul(&f, &v).unwrap()).unwrap();
                assert_eq!(m.apply(&s, x), expect);
                assert_eq!(perm[x as usize], expect);
            }
            assert_eq!(m.to_matrix(&s).unwrap(), a);
        }
    }

    #[test]
    fn composition_and_inverse() {
        let f = make_field(3, 1).unwrap();
        let s = Space::new(f.clone(), 3).unwrap();
        let a = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let b = Matrix::from_rows(&[vec![0, 1, 0], vec![2, 0, 0], vec![0, 0, 1]]).unwrap();
        let ga = AffineMap { lin: LinMap::from_matrix(&s, &a).unwrap(), t: 5 };
        let gb = AffineMap { lin: LinMap::from_matrix(&s, &b).unwrap(), t: 11 };
        let gab = ga.then(&s, &gb);
        for x in s.points() {
            assert_eq!(gab.apply(&s, x), gb.apply(&s, ga.apply(&s, x)));
        }
        assert_eq!(gab.lin.to_matrix(&s).unwrap(), a.mul(&f, &b).unwrap());
        let inv = gab.inverse(&s).unwrap();
        assert!(gab.then(&s, &inv).is_identity(&s));
        assert!(inv.then(&s, &gab).is_identity(&s));
        let gc = AffineMap::translation(&s, 7);
        let left = ga.then(&s, &gb).then(&s, &gc);
        let right = ga.then(&s, &gb.then(&s, &gc));
        assert_eq!(left, right);
    }

    #[test]
    fn frobenius_is_semilinear() {
        let f = make_field(2, 2).unwrap();
        let s = Space::new(f.clone(), 3).unwrap();
        let fr = LinMap::from_additive(&s, |v| v.iter().map(|&x| f.frobenius_power(x, 1)).collect())
            .unwrap();
        assert!(fr.to_matrix(&s).is_none());
        let sq = fr.then(&s, &fr);
        assert!(sq.is_identity(&s));
        assert_eq!(AffineMap::linear(fr).order(&s, 10), Some(2));
    }
}
