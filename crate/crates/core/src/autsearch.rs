//! Setwise stabilizer in `GL_n(p)` of a set of blocks through 0.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_elements, greedy_generators, GenGroup, LinMap};
use crate::linalg::Matrix;
use crate::par;
use crate::space::Space;

pub const AUT_POINT_CAP: u32 = 1 << 12;
const LEAF_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
}

#[derive(Debug, Clone)]
pub struct StabilizerResult {
    pub order: u64,
    /// Generators as GF(p)-matrices acting on row vectors.
    pub generators: Vec<Matrix>,
    pub lins: Vec<LinMap>,
    pub stats: SearchStats,
    pub space: Arc<Space>,
}

impl StabilizerResult {
    pub fn group(&self, name: impl Into<String>) -> GenGroup {
        GenGroup::from_linear(name, self.space.clone(), self.lins.clone()).with_order(self.order as u128)
    }
}

/// The set of blocks through 0 in canonical form.
pub struct BlockSet {
    space: Arc<Space>,
    blocks: Vec<Box<[u32]>>,
    set: HashSet<Box<[u32]>>,
}

impl BlockSet {
    pub fn new(space: &Space, blocks0: &[Box<[u32]>]) -> Result<Self> {
        let space = space.prime_view()?;
        let mut blocks: Vec<Box<[u32]>> = blocks0
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable();
        blocks.dedup();
        if blocks.is_empty() {
            return Err(Error::Precondition("empty block set".into()));
        }
        if blocks.iter().any(|b| b.iter().any(|&x| x >= space.size())) {
            return Err(Error::Precondition("block point out of range".into()));
        }
        let set = blocks.iter().cloned().collect();
        Ok(BlockSet { space, blocks, set })
    }

    /// Whether `g` maps the set onto itself.
    pub fn is_preserved_by(&self, g: &LinMap) -> bool {
        self.blocks.iter().all(|b| {
            let mut img: Box<[u32]> = b.iter().map(|&x| g.apply(&self.space, x)).collect();
            img.sort_unstable();
            self.set.contains(&img)
        })
    }
}

struct Searcher<'a> {
    bs: &'a BlockSet,
    v: usize,
    pair: Vec<u32>,
    fp: Vec<u32>,
    /// candidates per fingerprint class, possibly shuffled
    class: Vec<Vec<u32>>,
}

impl Searcher<'_> {
    fn pc(&self, x: u32, y: u32) -> u32 {
        self.pair[x as usize * self.v + y as usize]
    }

    /// Extends `img` from `0..p^j` to `0..p^{j+1}` with `e_j -> y`.
    fn extend(&self, img: &mut Vec<u32>, j: usize, y: u32) -> bool {
        let s = &self.bs.space;
        let p = s.p();
        let base = s.basis_point(j) as usize;
        for c in 1..p {
            let cy = s.scale_prime(y, c);
            for t in 0..base {
                let x = c as usize * base + t;
                let gx = s.add(cy, img[t]);
                if self.fp[x] != self.fp[gx as usize] {
                    return false;
                }
                if (0..x).any(|z| self.pc(x as u32, z as u32) != self.pc(gx, img[z])) {
                    return false;
                }
                img.push(gx);
            }
        }
        true
    }

    fn rec(&self, img: &mut Vec<u32>, j: usize, stats: &mut SearchStats, out: &mut Vec<LinMap>) -> Result<()> {
        let s = &self.bs.space;
        if j == s.dim() {
            let g = LinMap::from_images(s, (0..j).map(|k| img[s.basis_point(k) as usize]).collect())?;
            if self.bs.is_preserved_by(&g) {
                if out.len() >= LEAF_CAP {
                    return Err(Error::CapExceeded {
                        what: "stabilizer elements".into(),
                        size: out.len() as u128 + 1,
                        cap: LEAF_CAP as u128,
                    });
                }
                out.push(g);
            } else {
                stats.prunes += 1;
            }
            return Ok(());
        }
        let e = s.basis_point(j) as usize;
        let used: HashSet<u32> = img.iter().copied().collect();
        for &y in &self.class[self.fp[e] as usize] {
            if used.contains(&y) {
                continue;
            }
            stats.nodes += 1;
            let len = img.len();
            if self.extend(img, j, y) {
                self.rec(img, j + 1, stats, out)?;
            } else {
                stats.prunes += 1;
            }
            img.truncate(len);
        }
        Ok(())
    }
}

/// Full stabilizer of `blocks0` in `GL_n(p)`. `shuffle` permutes the
/// candidate order; the result does not depend on it.
pub fn linear_blockset_stabilizer(space: &Space, blocks0: &[Box<[u32]>], shuffle: Option<u64>) -> Result<StabilizerResult> {
    let bs = BlockSet::new(space, blocks0)?;
    let s = bs.space.clone();
    if s.size() > AUT_POINT_CAP {
        return Err(Error::CapExceeded { what: "aut-search points".into(), size: s.size() as u128, cap: AUT_POINT_CAP as u128 });
    }
    let v = s.size() as usize;
    let mut pair = vec![0u32; v * v];
    for b in &bs.blocks {
        for &x in b.iter() {
            for &y in b.iter() {
                pair[x as usize * v + y as usize] += 1;
            }
        }
    }
    // fingerprint: degree plus the sorted profile of pair counts
    let profiles: Vec<(u32, Vec<u32>)> = par::map_range(v, |x| {
        let row = &pair[x * v..(x + 1) * v];
        let mut prof = row.to_vec();
        prof.sort_unstable();
        (row[x], prof)
    });
    let mut distinct = profiles.clone();
    distinct.sort();
    distinct.dedup();
    let fp: Vec<u32> = profiles.iter().map(|pr| distinct.binary_search(pr).expect("present") as u32).collect();
    let mut class = vec![Vec::new(); distinct.len()];
    for (x, &c) in fp.iter().enumerate() {
        class[c as usize].push(x as u32);
    }
    if let Some(seed) = shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in class.iter_mut() {
            c.shuffle(&mut rng);
        }
    }
    let searcher = Searcher { bs: &bs, v, pair, fp, class };
    let e0 = s.basis_point(0) as usize;
    let roots = searcher.class[searcher.fp[e0] as usize].clone();
    let branches = par::map(&roots, |&y| -> Result<(Vec<LinMap>, SearchStats)> {
        let mut stats = SearchStats { nodes: 1, prunes: 0 };
        let mut out = Vec::new();
        let mut img = vec![0u32];
        if y != 0 && searcher.extend(&mut img, 0, y) {
            searcher.rec(&mut img, 1, &mut stats, &mut out)?;
        } else {
            stats.prunes += 1;
        }
        Ok((out, stats))
    });
    let mut elems = Vec::new();
    let mut stats = SearchStats::default();
    for b in branches {
        let (e, st) = b?;
        elems.extend(e);
        stats.nodes += st.nodes;
        stats.prunes += st.prunes;
    }
    elems.sort();
    let order = elems.len() as u64;
    let lins = greedy_generators(&s, &elems);
    let g = GenGroup::from_linear("stab", s.clone(), lins.clone());
    let certified = enumerate_elements(&g, LEAF_CAP)?.len() as u64;
    if certified != order || !lins.iter().all(|l| bs.is_preserved_by(l)) {
        return Err(Error::Precondition(format!(
            "stabilizer certification failed: {order} leaves, generated group of order {certified}"
        )));
    }
    let generators = lins.iter().map(|l| l.to_matrix(&s).expect("prime-field map is linear")).collect();
    Ok(StabilizerResult { order, generators, lins, stats, space: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::all_subspaces;

    #[test]
    fn all_planes_of_v4_2() {
        let s = Space::prime(2, 4).unwrap();
        let blocks: Vec<Box<[u32]>> = all_subspaces(&s, 2).iter().map(|x| x.points(&s).into_boxed_slice()).collect();
        assert_eq!(blocks.len(), 35);
        let r = linear_blockset_stabilizer(&s, &blocks, None).unwrap();
        assert_eq!(r.order, 20160);
        let r2 = linear_blockset_stabilizer(&s, &blocks, Some(7)).unwrap();
        assert_eq!(r2.order, 20160);
    }

    #[test]
    fn single_line_of_v2_3() {
        let s = Space::prime(3, 2).unwrap();
        // the line <e1>: stabilizer = lower triangular matrices, order 2*2*3
        let blocks = vec![vec![0u32, 1, 2].into_boxed_slice()];
        let r = linear_blockset_stabilizer(&s, &blocks, None).unwrap();
        assert_eq!(r.order, 12);
        for m in &r.generators {
            assert_eq!(m.get(0, 1), 0);
        }
    }
}
