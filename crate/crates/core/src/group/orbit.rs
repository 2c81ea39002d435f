use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use super::LinMap;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::par;
use crate::space::Space;

pub const ORBIT_CAP: usize = 1 << 25;

/// A group action given by generator images. Every image must already be in
/// canonical form so that equal objects compare equal.
pub trait Action: Sync {
    type Item: Clone + Eq + Hash + Send + Sync;
    fn ngens(&self) -> usize;
    fn act(&self, gen: usize, x: &Self::Item) -> Self::Item;
}

pub struct OnPoints {
    pub perms: Arc<Vec<Vec<u32>>>,
}

impl Action for OnPoints {
    type Item = u32;
    fn ngens(&self) -> usize {
        self.perms.len()
    }
    fn act(&self, g: usize, x: &u32) -> u32 {
        self.perms[g][*x as usize]
    }
}

/// Action on point sets, canonicalized as sorted arrays.
pub struct OnSets {
    pub perms: Arc<Vec<Vec<u32>>>,
}

impl OnSets {
    pub fn image(&self, g: usize, x: &[u32]) -> Box<[u32]> {
        let p = &self.perms[g];
        let mut v: Box<[u32]> = x.iter().map(|&i| p[i as usize]).collect();
        v.sort_unstable();
        v
    }
}

impl Action for OnSets {
    type Item = Box<[u32]>;
    fn ngens(&self) -> usize {
        self.perms.len()
    }
    fn act(&self, g: usize, x: &Box<[u32]>) -> Box<[u32]> {
        self.image(g, x)
    }
}

/// Linear action on subspaces through their canonical bases.
pub struct OnSubspaces {
    pub space: Arc<Space>,
    pub lins: Vec<LinMap>,
}

impl Action for OnSubspaces {
    type Item = Subspace;
    fn ngens(&self) -> usize {
        self.lins.len()
    }
    fn act(&self, g: usize, x: &Subspace) -> Subspace {
        let m = &self.lins[g];
        x.map(&self.space, |b| m.apply(&self.space, b))
    }
}

/// Action on flags `(point, block id)` of a materialized block list.
pub struct OnFlags<'a> {
    pub perms: Arc<Vec<Vec<u32>>>,
    pub blocks: &'a [Box<[u32]>],
    pub index: HashMap<&'a [u32], u32>,
}

impl<'a> OnFlags<'a> {
    pub fn new(perms: Arc<Vec<Vec<u32>>>, blocks: &'a [Box<[u32]>]) -> Self {
        let index = blocks.iter().enumerate().map(|(i, b)| (&b[..], i as u32)).collect();
        OnFlags { perms, blocks, index }
    }
}

impl Action for OnFlags<'_> {
    type Item = (u32, u32);
    fn ngens(&self) -> usize {
        self.perms.len()
    }
    fn act(&self, g: usize, x: &(u32, u32)) -> (u32, u32) {
        let p = &self.perms[g];
        let mut b: Vec<u32> = self.blocks[x.1 as usize].iter().map(|&i| p[i as usize]).collect();
        b.sort_unstable();
        // a block outside the list maps to u32::MAX, which is never a flag
        let id = self.index.get(&b[..]).copied().unwrap_or(u32::MAX);
        (p[x.0 as usize], id)
    }
}

/// An orbit in BFS order with a Schreier tree.
#[derive(Debug, Clone)]
pub struct Orbit<T: Eq + Hash> {
    pub items: Vec<T>,
    index: HashMap<T, u32>,
    parent: Vec<(u32, u32)>,
}

impl<T: Clone + Eq + Hash> Orbit<T> {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, x: &T) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    /// Generator indices whose product maps the seed to item `i`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            let (par, g) = self.parent[i];
            w.push(g as usize);
            i = par as usize;
        }
        w.reverse();
        w
    }

    /// Parent index and generator of item `i` (`None` for the seed).
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        (i != 0).then(|| (self.parent[i].0 as usize, self.parent[i].1 as usize))
    }
}

/// Breadth-first orbit. Frontier images are computed in parallel and merged in
/// (frontier order, generator order), so the result is the same for any
/// number of workers.
pub fn orbit<A: Action>(action: &A, seed: A::Item, cap: usize) -> Result<Orbit<A::Item>> {
    let cap = cap.min(ORBIT_CAP);
    let mut items = vec![seed.clone()];
    let mut index = HashMap::new();
    index.insert(seed, 0u32);
    let mut parent = vec![(u32::MAX, u32::MAX)];
    let d = action.ngens();
    let mut start = 0;
    while start < items.len() {
        let end = items.len();
        let imgs: Vec<Vec<A::Item>> = {
            let frontier = &items[start..end];
            par::map(frontier, |x| (0..d).map(|g| action.act(g, x)).collect())
        };
        for (i, row) in imgs.into_iter().enumerate() {
            for (g, y) in row.into_iter().enumerate() {
                if index.contains_key(&y) {
                    continue;
                }
                if items.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "orbit".into(),
                        size: items.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                index.insert(y.clone(), items.len() as u32);
                items.push(y);
                parent.push(((start + i) as u32, g as u32));
            }
        }
        start = end;
    }
    Ok(Orbit { items, index, parent })
}

/// All orbits on points, each sorted, ordered by least element.
pub fn point_orbits(perms: &[Vec<u32>], size: u32) -> Vec<Vec<u32>> {
    let mut seen = vec![false; size as usize];
    let mut out = Vec::new();
    for x in 0..size {
        if seen[x as usize] {
            continue;
        }
        seen[x as usize] = true;
        let mut orb = vec![x];
        let mut i = 0;
        while i < orb.len() {
            let y = orb[i];
            for p in perms {
                let z = p[y as usize];
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    orb.push(z);
                }
            }
            i += 1;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::group::GenGroup;
    use crate::linalg::{canonical_subspace, Matrix};

    fn sl2(q_h: u32) -> GenGroup {
        let f = make_field(2, q_h).unwrap();
        let s = Space::new(f.clone(), 2).unwrap();
        let w = f.primitive_elem();
        let mats = [
            Matrix::from_rows(&[vec![w, 0], vec![0, f.inv(w).unwrap()]]).unwrap(),
            Matrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap(),
            Matrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
        ];
        GenGroup::from_matrices("SL2", s, &mats).unwrap()
    }

    #[test]
    fn sl2_transitive_on_nonzero() {
        let g = sl2(2);
        let act = OnPoints { perms: Arc::new(g.perms()) };
        let seed = g.space.index(&[1, 0]).unwrap();
        let o = orbit(&act, seed, 1000).unwrap();
        assert_eq!(o.len(), 15);
        assert!(!o.contains(&0));
        // words reproduce the items
        for (i, x) in o.items.iter().enumerate() {
            let y = o.word(i).iter().fold(seed, |acc, &gi| act.act(gi, &acc));
            assert_eq!(y, *x);
        }
        let parts = point_orbits(&act.perms, g.space.size());
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], vec![0]);
    }

    #[test]
    fn subspace_orbit_ex4_q4() {
        let g = sl2(2);
        let s = g.space.clone();
        let b = canonical_subspace(&s, &[vec![1, 0], vec![0, 1]], 1).unwrap();
        let act = OnSubspaces { space: s.clone(), lins: g.linear_gens() };
        let o = orbit(&act, b.clone(), 1000).unwrap();
        assert_eq!(o.len(), 10);
        let sets = OnSets { perms: Arc::new(g.perms()) };
        let o2 = orbit(&sets, b.points(&s).into_boxed_slice(), 1000).unwrap();
        assert_eq!(o2.len(), 10);
        assert!(orbit(&act, b, 5).is_err());
    }

    #[test]
    fn orbits_partition() {
        let g = sl2(2);
        let act = OnSets { perms: Arc::new(g.perms()) };
        let s = &g.space;
        let mut owner = HashMap::new();
        for seed in [vec![0u32, 1], vec![0, 2], vec![1, 2], vec![3, 7]] {
            let o = orbit(&act, seed.into_boxed_slice(), 10_000).unwrap();
            let tag = o.items.iter().min().unwrap().clone();
            for x in &o.items {
                if let Some(t) = owner.insert(x.clone(), tag.clone()) {
                    assert_eq!(t, tag);
                }
            }
        }
        assert!(s.size() > 0);
    }
}
