use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_design, log_p, verify_2design, Design, VerifyMode};
use crate::atlas::affine_closure;
use crate::error::{Error, Result};
use crate::group::{enumerate_elements, orbit, point_orbits, GenGroup, LinMap, OnSubspaces, ORBIT_CAP};
use crate::linalg::Subspace;
use crate::par;
use crate::space::Space;

pub const SEARCH_POINT_CAP: u32 = 1 << 12;

const SUBGROUP_CAP: usize = 1 << 18;
const CANDIDATES_PER_SUBGROUP: usize = 1 << 14;
const TABLE_CAP: usize = 2048;

/// An enumerated linear group with element ids.
pub struct FiniteGroup {
    pub space: Arc<Space>,
    pub elems: Vec<LinMap>,
    index: HashMap<LinMap, u32>,
    table: Option<Vec<u32>>,
}

impl FiniteGroup {
    pub fn new(g: &GenGroup, cap: usize) -> Result<Self> {
        if !g.is_linear() {
            return Err(Error::Precondition("finite group must be linear".into()));
        }
        let el = enumerate_elements(g, cap)?;
        let elems: Vec<LinMap> = el.elems.into_iter().map(|a| a.lin).collect();
        let index = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut fg = FiniteGroup { space: g.space.clone(), elems, index, table: None };
        let n = fg.elems.len();
        if n <= TABLE_CAP {
            let rows = par::map_range(n, |a| (0..n).map(|b| fg.mul_slow(a as u32, b as u32)).collect::<Vec<_>>());
            fg.table = Some(rows.into_iter().flatten().collect());
        }
        Ok(fg)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let c = self.elems[a as usize].then(&self.space, &self.elems[b as usize]);
        self.index[&c]
    }

    /// `a` followed by `b`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn id_of(&self, g: &LinMap) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// Sorted element ids of `<gens>`, or `None` once it exceeds `cap`.
    pub fn closure(&self, gens: &[u32], cap: usize) -> Option<Vec<u32>> {
        let e = self.id_of(&LinMap::identity(&self.space)).expect("identity is an element");
        let mut seen = HashSet::from([e]);
        let mut list = vec![e];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    if list.len() >= cap {
                        return None;
                    }
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        Some(list)
    }
}

/// Every subgroup of exactly order `target` that is generated by cyclic
/// subgroups of orders dividing `target`.
pub fn subgroups_of_order(g: &FiniteGroup, target: usize) -> Result<Vec<Vec<u32>>> {
    if target == 0 || g.order() % target != 0 {
        return Ok(Vec::new());
    }
    let mut cyclic: Vec<Vec<u32>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for x in 0..g.order() as u32 {
        if let Some(c) = g.closure(&[x], target) {
            if target % c.len() == 0 && seen.insert(c.clone()) {
                cyclic.push(c);
            }
        }
    }
    cyclic.sort();
    // generator of each cyclic subgroup: any element whose closure is all of it
    let cyc_gen: Vec<u32> = cyclic
        .iter()
        .map(|c| *c.iter().find(|&&x| g.closure(&[x], target).as_ref() == Some(c)).expect("cyclic"))
        .collect();
    let mut all: Vec<(Vec<u32>, Vec<u32>)> = cyclic.iter().cloned().zip(cyc_gen.iter().map(|&x| vec![x])).collect();
    let mut frontier: Vec<usize> = (0..all.len()).collect();
    while !frontier.is_empty() {
        let joins: Vec<Vec<(Vec<u32>, Vec<u32>)>> = par::map(&frontier, |&i| {
            let (h, gens) = &all[i];
            let mut out = Vec::new();
            for &c in &cyc_gen {
                if h.binary_search(&c).is_ok() {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(c);
                if let Some(j) = g.closure(&ng, target) {
                    if target % j.len() == 0 {
                        out.push((j, ng));
                    }
                }
            }
            out
        });
        let mut next = Vec::new();
        for (j, ng) in joins.into_iter().flatten() {
            if seen.insert(j.clone()) {
                if all.len() >= SUBGROUP_CAP {
                    return Err(Error::CapExceeded {
                        what: "subgroups".into(),
                        size: all.len() as u128 + 1,
                        cap: SUBGROUP_CAP as u128,
                    });
                }
                next.push(all.len());
                all.push((j, ng));
            }
        }
        frontier = next;
    }
    let mut out: Vec<Vec<u32>> = all.into_iter().map(|(h, _)| h).filter(|h| h.len() == target).collect();
    out.sort();
    Ok(out)
}

/// All `d`-dimensional GF(p)-subspaces of `V`, in canonical order.
pub fn all_subspaces(space: &Space, d: usize) -> Vec<Subspace> {
    let n = space.dim();
    let p = space.p();
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    // pivots c_1 > ... > c_d; row i has 1 at c_i, 0 at other pivots, free
    // digits below c_i
    fn rec(n: usize, d: usize, start: usize, piv: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
        if piv.len() == d {
            acc.push(piv.clone());
            return;
        }
        for c in (0..start).rev() {
            piv.push(c);
            rec(n, d, c, piv, acc);
            piv.pop();
        }
    }
    let mut pivsets = Vec::new();
    rec(n, d, n, &mut Vec::new(), &mut pivsets);
    for piv in pivsets {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| (0..c).filter(|j| !piv.contains(j)).map(move |j| (i, j)))
            .collect();
        let total = (p as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<Vec<u32>> = piv
                .iter()
                .map(|&c| {
                    let mut r = vec![0u32; n];
                    r[c] = 1;
                    r
                })
                .collect();
            let mut x = code;
            for &(i, j) in &free {
                rows[i][j] = (x % p as u64) as u32;
                x /= p as u64;
            }
            let basis = rows.iter().map(|r| space.from_digits(r)).collect();
            out.push(Subspace::from_canonical(space, basis));
        }
    }
    out.sort();
    out
}

/// Necessary condition: every `G0`-orbit `O` on `V*` meets
/// the block in `|O| / (k + 1)` points.
pub fn tactical_filter(block: &[u32], orbit_of: &[u32], orbit_len: &[usize], k: usize) -> bool {
    let mut meet: HashMap<u32, usize> = HashMap::new();
    for &x in block {
        if x != 0 {
            *meet.entry(orbit_of[x as usize]).or_default() += 1;
        }
    }
    let total: usize = meet.values().sum();
    if total != k - 1 {
        return false;
    }
    // orbits missed by the block must not exist: every orbit has |O| >= k + 1
    orbit_len
        .iter()
        .enumerate()
        .filter(|&(o, _)| orbit_of.first() != Some(&(o as u32)))
        .all(|(o, &len)| len == (k + 1) * meet.get(&(o as u32)).copied().unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SearchSource {
    Subspace,
    Invariant { subgroup_order: usize },
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub base_block: Vec<u32>,
    pub design: Design,
    pub lambda: u64,
    pub source: SearchSource,
}

/// Flag-transitive `2-(v, k, λ)` designs `(V, B^{T:G0})`. Base blocks are
/// taken from the `G0`-orbits of `m`-dimensional GF(p)-subspaces and from
/// unions of orbits of subgroups `H <= G0` of order `|G0| / r`, which is
/// the order of the stabilizer of a block through 0.
pub fn base_block_search(g0: &GenGroup, k: usize, lambda: u64) -> Result<Vec<SearchHit>> {
    let space = g0.space.clone();
    let v = space.size();
    if v > SEARCH_POINT_CAP {
        return Err(Error::CapExceeded { what: "search points".into(), size: v as u128, cap: SEARCH_POINT_CAP as u128 });
    }
    let p = space.p();
    let m = log_p(p, k as u64).ok_or(Error::NotPrimePower(k))? as usize;
    if (k as u64) * (k as u64) != v as u64 {
        return Err(Error::Precondition(format!("v = {v} is not k^2")));
    }
    let r = lambda as usize * (k + 1);
    let fg = FiniteGroup::new(g0, 1 << 20)?;
    let order = fg.order();
    let g = affine_closure(g0)?;
    let perms = g0.perms();
    let orbits = point_orbits(&perms, v);
    let mut orbit_of = vec![0u32; v as usize];
    for (i, o) in orbits.iter().enumerate() {
        for &x in o {
            orbit_of[x as usize] = i as u32;
        }
    }
    let orbit_len: Vec<usize> = orbits.iter().map(|o| o.len()).collect();

    let mut candidates: Vec<(Vec<u32>, SearchSource)> = Vec::new();
    if order % r == 0 {
        // subspaces
        let subs = all_subspaces(&space, m);
        let act = OnSubspaces { space: space.clone(), lins: g0.linear_gens() };
        let mut seen: HashSet<Subspace> = HashSet::new();
        for s in subs {
            if seen.contains(&s) {
                continue;
            }
            let o = orbit(&act, s.clone(), ORBIT_CAP)?;
            let len = o.len();
            seen.extend(o.items);
            let pts = s.points(&space);
            if len == r && tactical_filter(&pts, &orbit_of, &orbit_len, k) {
                candidates.push((pts, SearchSource::Subspace));
            }
        }
        // unions of H-orbits
        let target = order / r;
        for h in subgroups_of_order(&fg, target)? {
            let horbits = subgroup_orbits(&fg, &h, v);
            let sizes: Vec<usize> = horbits.iter().map(|o| o.len()).collect();
            let mut picks = Vec::new();
            choose_orbits(&sizes, k - 1, 0, &mut Vec::new(), &mut picks);
            for pick in picks {
                let mut block: Vec<u32> = vec![0];
                for &i in &pick {
                    block.extend_from_slice(&horbits[i]);
                }
                block.sort_unstable();
                if tactical_filter(&block, &orbit_of, &orbit_len, k) {
                    candidates.push((block, SearchSource::Invariant { subgroup_order: target }));
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup_by(|a, b| a.0 == b.0);
    let results: Vec<Option<SearchHit>> = par::map(&candidates, |(block, src)| {
        let d = build_design(block, &g).ok()?;
        if d.r() != r {
            return None;
        }
        let l = verify_2design(&d, VerifyMode::Slice, None).ok()?;
        if l != lambda {
            return None;
        }
        let fc = super::check_flag_transitive(&d, &g).ok()?;
        fc.transitive.then(|| SearchHit { base_block: block.clone(), design: d, lambda: l, source: *src })
    });
    let mut seen: HashSet<Vec<Box<[u32]>>> = HashSet::new();
    let mut out = Vec::new();
    for hit in results.into_iter().flatten() {
        if seen.insert(hit.design.through_zero_vec()) {
            out.push(hit);
        }
    }
    Ok(out)
}

fn subgroup_orbits(fg: &FiniteGroup, h: &[u32], v: u32) -> Vec<Vec<u32>> {
    let s = &fg.space;
    let mut seen = vec![false; v as usize];
    seen[0] = true;
    let mut out = Vec::new();
    for x in 1..v {
        if seen[x as usize] {
            continue;
        }
        let mut o: Vec<u32> = h.iter().map(|&e| fg.elems[e as usize].apply(s, x)).collect();
        o.sort_unstable();
        o.dedup();
        for &y in &o {
            seen[y as usize] = true;
        }
        out.push(o);
    }
    out
}

fn choose_orbits(sizes: &[usize], need: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if out.len() >= CANDIDATES_PER_SUBGROUP {
        return;
    }
    if need == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..sizes.len() {
        if sizes[i] <= need {
            cur.push(i);
            choose_orbits(sizes, need - sizes[i], i + 1, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{sl2, AtlasParams, atlas};

    #[test]
    fn subspace_counts() {
        let s = Space::prime(2, 6).unwrap();
        assert_eq!(all_subspaces(&s, 3).len(), 1395);
        assert_eq!(all_subspaces(&s, 1).len(), 63);
        let s3 = Space::prime(3, 4).unwrap();
        assert_eq!(all_subspaces(&s3, 2).len(), 130);
        for sub in all_subspaces(&s3, 2) {
            assert_eq!(sub.dim(), 2);
        }
    }

    #[test]
    fn subgroups_of_sl2_4() {
        let g = sl2(4).unwrap().group;
        let fg = FiniteGroup::new(&g, 100).unwrap();
        assert_eq!(fg.order(), 60);
        // A5: 5 Sylow 2-subgroups of order 4, 10 of order 6 (S3), 6 of order 10
        assert_eq!(subgroups_of_order(&fg, 4).unwrap().len(), 5);
        assert_eq!(subgroups_of_order(&fg, 6).unwrap().len(), 10);
        assert_eq!(subgroups_of_order(&fg, 10).unwrap().len(), 6);
        assert_eq!(subgroups_of_order(&fg, 12).unwrap().len(), 5);
        assert_eq!(subgroups_of_order(&fg, 60).unwrap().len(), 1);
    }

    #[test]
    fn d18_lambda2() {
        let g0 = atlas("GammaL1-subgroup", &AtlasParams::parse("p=2,2m=6,c=7,e=0,s=3").unwrap()).unwrap();
        let hits = base_block_search(&g0, 8, 2).unwrap();
        assert!(!hits.is_empty());
        for h in &hits {
            assert_eq!(h.design.r(), 18);
            let parts = super::super::spread_decomposition(&h.design, 2).unwrap();
            assert_eq!(parts.iter().map(|p| p.len()).collect::<Vec<_>>(), vec![9, 9]);
        }
    }
}
