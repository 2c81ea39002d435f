use crate::error::Result;
use crate::field::Elem;
use crate::space::Space;

/// A subspace of `V` stored as its reduced echelon basis over GF(p).
///
/// Rows are point indices sorted by decreasing pivot, where the pivot is the
/// most significant nonzero digit and carries coefficient 1. Two spans are
/// equal iff their bases are identical, whatever field they were spanned over.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subspace {
    basis: Vec<u32>,
}

fn lead(space: &Space, x: u32) -> Option<(usize, u32)> {
    if x == 0 {
        return None;
    }
    if space.p() == 2 {
        return Some((31 - x.leading_zeros() as usize, 1));
    }
    let d = space.digits(x);
    d.iter().enumerate().rev().find(|(_, &c)| c != 0).map(|(i, &c)| (i, c))
}

fn digit(space: &Space, x: u32, k: usize) -> u32 {
    x / space.basis_point(k) % space.p()
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace::default()
    }

    /// The canonical basis rows.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Dimension over GF(p).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of points.
    pub fn cardinality(&self, space: &Space) -> u64 {
        (space.p() as u64).pow(self.basis.len() as u32)
    }

    /// Reduces `x` modulo the span; zero iff `x` lies in it.
    pub fn reduce(&self, space: &Space, mut x: u32) -> u32 {
        for &row in &self.basis {
            let (piv, _) = lead(space, row).expect("basis rows are nonzero");
            if space.p() == 2 {
                if x >> piv & 1 == 1 {
                    x ^= row;
                }
            } else {
                let c = digit(space, x, piv);
                if c != 0 {
                    x = space.sub(x, space.scale_prime(row, c));
                }
            }
        }
        x
    }

    pub fn contains(&self, space: &Space, x: u32) -> bool {
        self.reduce(space, x) == 0
    }

    /// Adds `x` to the span, keeping the basis reduced. Returns false if `x`
    /// was already in the span.
    pub fn insert(&mut self, space: &Space, x: u32) -> bool {
        let mut v = self.reduce(space, x);
        let Some((piv, c)) = lead(space, v) else { return false };
        if c != 1 {
            v = space.scale_prime(v, crate::linalg::prime::inv_mod(c, space.p()));
        }
        for row in self.basis.iter_mut() {
            let d = digit(space, *row, piv);
            if d != 0 {
                *row = space.sub(*row, space.scale_prime(v, d));
            }
        }
        let at = self
            .basis
            .iter()
            .position(|&r| lead(space, r).unwrap().0 < piv)
            .unwrap_or(self.basis.len());
        self.basis.insert(at, v);
        true
    }

    /// GF(p)-span of points.
    pub fn from_points(space: &Space, pts: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Subspace::zero();
        for x in pts {
            if s.dim() == space.dim() {
                break;
            }
            s.insert(space, x);
        }
        s
    }

    /// Builds from rows already in canonical form (as produced by [`Subspace::basis`]).
    pub fn from_canonical(space: &Space, basis: Vec<u32>) -> Self {
        let s = Subspace::from_points(space, basis.iter().copied());
        debug_assert_eq!(s.basis, basis);
        s
    }

    /// All points, sorted ascending.
    pub fn points(&self, space: &Space) -> Vec<u32> {
        let mut pts = vec![0u32];
        for &row in &self.basis {
            let cur = pts.len();
            let mut m = row;
            for _ in 1..space.p() {
                for i in 0..cur {
                    pts.push(space.add(pts[i], m));
                }
                m = space.add(m, row);
            }
        }
        pts.sort_unstable();
        pts
    }

    /// Image under an additive map given on points.
    pub fn map(&self, space: &Space, f: impl Fn(u32) -> u32) -> Self {
        Subspace::from_points(space, self.basis.iter().map(|&b| f(b)))
    }

    /// `self + other`.
    pub fn join(&self, space: &Space, other: &Subspace) -> Self {
        let mut s = self.clone();
        for &b in &other.basis {
            s.insert(space, b);
        }
        s
    }

    /// Prime dimension of the intersection.
    pub fn meet_dim(&self, space: &Space, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join(space, other).dim()
    }

    /// Whether the span is closed under GF(p^d)-scaling.
    pub fn is_linear_over(&self, space: &Space, d: u32) -> bool {
        let f = space.field();
        let Ok(sb) = f.subfield_basis(d) else { return false };
        self.basis
            .iter()
            .all(|&b| sb.iter().all(|&c| self.contains(space, space.scale(b, c))))
    }

    /// Largest `d | h` for which the span is GF(p^d)-linear.
    pub fn linear_degree(&self, space: &Space) -> u32 {
        let h = space.field().h();
        (1..=h)
            .rev()
            .filter(|d| h % d == 0)
            .find(|&d| self.is_linear_over(space, d))
            .unwrap_or(1)
    }
}

/// Canonical form of the GF(p^sub_degree)-span of `vectors`.
pub fn canonical_subspace(space: &Space, vectors: &[Vec<Elem>], sub_degree: u32) -> Result<Subspace> {
    let sb = space.field().subfield_basis(sub_degree)?;
    let mut s = Subspace::zero();
    for v in vectors {
        let x = space.index(v)?;
        for &c in &sb {
            s.insert(space, space.scale(x, c));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    #[test]
    fn gf_q_plane_in_v4() {
        let f = make_field(2, 3).unwrap();
        let s = Space::new(f, 4).unwrap();
        let b = canonical_subspace(&s, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], 3).unwrap();
        assert_eq!(b.dim(), 6);
        assert_eq!(b.points(&s).len(), 64);
        assert_eq!(b.linear_degree(&s), 3);
        let z = canonical_subspace(&s, &[vec![0, 0, 0, 0]], 3).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(z.points(&s), vec![0]);
    }

    #[test]
    fn closure_redundant_vector() {
        let f = make_field(3, 2).unwrap();
        let s = Space::new(f.clone(), 2).unwrap();
        let v = vec![1, 2];
        let w = vec![f.primitive_elem(), 0];
        let vw: Vec<Elem> = v.iter().zip(&w).map(|(&a, &b)| f.add(a, b)).collect();
        let a = canonical_subspace(&s, &[v.clone(), w.clone()], 1).unwrap();
        let b = canonical_subspace(&s, &[v, w, vw], 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points(&s).len(), 9);
        for x in a.points(&s) {
            assert!(a.contains(&s, x));
        }
    }

    #[test]
    fn subfield_span_sizes() {
        let f = make_field(3, 2).unwrap();
        let s = Space::new(f, 2).unwrap();
        let b = canonical_subspace(&s, &[vec![1, 0], vec![0, 1]], 1).unwrap();
        assert_eq!(b.points(&s).len(), 9);
        assert_eq!(b.linear_degree(&s), 1);
        let full = canonical_subspace(&s, &[vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(full.points(&s).len(), 81);
    }

    proptest! {
        #[test]
        fn canonical_is_order_independent(seed in 0u64..10_000, k in 1usize..5, p3 in proptest::bool::ANY) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (p, n) = if p3 { (3, 4) } else { (2, 8) };
            let s = Space::prime(p, n).unwrap();
            let mut pts: Vec<u32> = (0..k).map(|_| rng.gen_range(0..s.size())).collect();
            let a = Subspace::from_points(&s, pts.iter().copied());
            pts.shuffle(&mut rng);
            let b = Subspace::from_points(&s, pts.iter().copied());
            prop_assert_eq!(&a, &b);
            let again = Subspace::from_points(&s, a.basis().iter().copied());
            prop_assert_eq!(&a, &again);
            let all = a.points(&s);
            prop_assert_eq!(all.len() as u64, a.cardinality(&s));
            for x in &all {
                for y in all.iter().step_by(3) {
                    prop_assert!(a.contains(&s, s.add(*x, *y)));
                }
            }
        }
    }
}
