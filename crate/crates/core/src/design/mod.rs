//! Designs `(V, B^G)` for affine groups `G = T:G0`.

mod search;
mod verify;

pub use search::{
    all_subspaces, base_block_search, subgroups_of_order, tactical_filter, FiniteGroup, SearchHit,
    SearchSource, SEARCH_POINT_CAP,
};
pub use verify::{
    blocks_are_subspaces, check_flag_transitive, check_tactical_ratio, cici_check, r_three_ways, spread_decomposition,
    tactical_counts, translation_block_stabilizer, verify_2design, CiciReport, FlagCheck, FlagMethod,
    RCheck, SubspaceStatus, TacticalRow, VerifyMode, BRUTEFORCE_CAP,
};

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{orbit, GenGroup, OnSets, OnSubspaces, ORBIT_CAP};
use crate::linalg::Subspace;
use crate::par;
use crate::space::Space;

/// Above this many point-block incidences (`v * r`) the full block list is
/// not stored.
pub const MATERIALIZE_CAP: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct Design {
    pub space: Arc<Space>,
    pub base_block: Vec<u32>,
    pub group_name: String,
    k: usize,
    /// Blocks through 0, each sorted, concatenated with stride `k`, sorted.
    through_zero: Vec<u32>,
    /// Whether the block set is closed under all translations.
    translation_invariant: bool,
    blocks: Option<Vec<Box<[u32]>>>,
    b: u64,
}

fn log_p(p: u32, mut x: u64) -> Option<u32> {
    let mut e = 0;
    while x > 1 {
        if x % p as u64 != 0 {
            return None;
        }
        x /= p as u64;
        e += 1;
    }
    Some(e)
}

fn sorted_block(pts: impl IntoIterator<Item = u32>) -> Box<[u32]> {
    let mut v: Vec<u32> = pts.into_iter().collect();
    v.sort_unstable();
    v.into_boxed_slice()
}

fn is_closed(space: &Space, block: &[u32]) -> bool {
    let s = Subspace::from_points(space, block.iter().copied());
    s.cardinality(space) == block.len() as u64
}

impl Design {
    pub fn v(&self) -> u32 {
        self.space.size()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of blocks through 0.
    pub fn r(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.through_zero.len() / self.k
        }
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.translation_invariant
    }

    pub fn through_zero(&self) -> std::slice::Chunks<'_, u32> {
        self.through_zero.chunks(self.k.max(1))
    }

    pub fn through_zero_block(&self, i: usize) -> &[u32] {
        &self.through_zero[i * self.k..(i + 1) * self.k]
    }

    /// Index of a sorted block in the through-0 list.
    pub fn through_zero_position(&self, block: &[u32]) -> Option<usize> {
        let r = self.r();
        let (mut lo, mut hi) = (0, r);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.through_zero_block(mid).cmp(block) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// All blocks, when materialized.
    pub fn blocks(&self) -> Option<&[Box<[u32]>]> {
        self.blocks.as_deref()
    }

    /// Assembles a translation-invariant design from its blocks through 0.
    pub fn from_through_zero(
        space: Arc<Space>,
        base_block: Vec<u32>,
        group_name: impl Into<String>,
        blocks0: Vec<Box<[u32]>>,
    ) -> Result<Design> {
        let k = base_block.len();
        if log_p(space.p(), k as u64).is_none() {
            return Err(Error::NotPrimePower(k));
        }
        let mut blocks0 = blocks0;
        for b in blocks0.iter_mut() {
            b.sort_unstable();
            if b.len() != k || b.first() != Some(&0) || b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Precondition("blocks through 0 must be k-sets containing 0".into()));
            }
            if b.iter().any(|&x| x >= space.size()) {
                return Err(Error::Precondition("block point out of range".into()));
            }
        }
        blocks0.sort_unstable();
        blocks0.dedup();
        let r = blocks0.len() as u64;
        let v = space.size() as u64;
        let through_zero: Vec<u32> = blocks0.iter().flat_map(|b| b.iter().copied()).collect();
        let mut d = Design {
            space,
            base_block,
            group_name: group_name.into(),
            k,
            through_zero,
            translation_invariant: true,
            blocks: None,
            b: v * r / k as u64,
        };
        if v * r <= MATERIALIZE_CAP {
            d.blocks = Some(d.translates());
        }
        Ok(d)
    }

    /// Every block exactly once: `C + t` is kept only when `t` is its least point.
    fn translates(&self) -> Vec<Box<[u32]>> {
        let s = &self.space;
        let blocks0: Vec<&[u32]> = self.through_zero().collect();
        let mut out: Vec<Box<[u32]>> = par::map(&blocks0, |c| {
            let mut v = Vec::new();
            for t in s.points() {
                let mut min_is_t = true;
                for &x in c.iter() {
                    if s.add(x, t) < t {
                        min_is_t = false;
                        break;
                    }
                }
                if min_is_t {
                    v.push(sorted_block(c.iter().map(|&x| s.add(x, t))));
                }
            }
            v
        })
        .into_iter()
        .flatten()
        .collect();
        out.sort_unstable();
        out
    }

    /// Whether every block through 0 is a GF(p)-subspace.
    pub fn through_zero_closed(&self) -> bool {
        self.through_zero().all(|b| is_closed(&self.space, b))
    }

    pub fn through_zero_vec(&self) -> Vec<Box<[u32]>> {
        self.through_zero().map(|b| b.to_vec().into_boxed_slice()).collect()
    }
}

/// Builds `(V, B^G)`. When `G` is presented as `T:G0` only the `G0`-orbit
/// is computed and the rest follows by translation; otherwise the full
/// orbit is materialized.
pub fn build_design(base_block: &[u32], g: &GenGroup) -> Result<Design> {
    let space = g.space.clone();
    let base = sorted_block(base_block.iter().copied());
    if base.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("base block has repeated points".into()));
    }
    if base.first() != Some(&0) {
        return Err(Error::Precondition("base block must contain 0".into()));
    }
    if base.iter().any(|&x| x >= space.size()) {
        return Err(Error::Precondition("base block point out of range".into()));
    }
    let k = base.len();
    if log_p(space.p(), k as u64).is_none() {
        return Err(Error::NotPrimePower(k));
    }
    if let Some(g0) = g.point_stabilizer() {
        let blocks0 = g0_block_orbit(&space, &base, &g0)?;
        let through: Vec<Box<[u32]>> = if is_closed(&space, &base) {
            blocks0
        } else {
            let mut all: Vec<Box<[u32]>> = par::map(&blocks0, |c| {
                c.iter()
                    .map(|&x| sorted_block(c.iter().map(|&y| space.sub(y, x))))
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect();
            all.sort_unstable();
            all.dedup();
            all
        };
        return Design::from_through_zero(space, base.to_vec(), g.name.clone(), through);
    }
    let perms = std::sync::Arc::new(g.perms());
    let o = orbit(&OnSets { perms }, base.clone(), ORBIT_CAP)?;
    let mut blocks = o.items;
    blocks.sort_unstable();
    let b = blocks.len() as u64;
    let through_zero: Vec<u32> = blocks
        .iter()
        .filter(|c| c[0] == 0)
        .flat_map(|c| c.iter().copied())
        .collect();
    let set: std::collections::HashSet<&[u32]> = blocks.iter().map(|c| &c[..]).collect();
    let translation_invariant = blocks.iter().all(|c| {
        (0..space.dim()).all(|i| {
            let t = space.basis_point(i);
            let img = sorted_block(c.iter().map(|&x| space.add(x, t)));
            set.contains(&img[..])
        })
    });
    Ok(Design {
        space,
        base_block: base.to_vec(),
        group_name: g.name.clone(),
        k,
        through_zero,
        translation_invariant,
        blocks: Some(blocks),
        b,
    })
}

/// `B^{G0}` as sorted point sets, using the subspace action when `B` is one.
pub fn g0_block_orbit(space: &Arc<Space>, base: &[u32], g0: &GenGroup) -> Result<Vec<Box<[u32]>>> {
    if is_closed(space, base) {
        let sub = Subspace::from_points(space, base.iter().copied());
        let act = OnSubspaces { space: space.clone(), lins: g0.linear_gens() };
        let o = orbit(&act, sub, ORBIT_CAP)?;
        let mut out: Vec<Box<[u32]>> = par::map(&o.items, |s| s.points(space).into_boxed_slice());
        out.sort_unstable();
        return Ok(out);
    }
    let perms = std::sync::Arc::new(g0.perms());
    let o = orbit(&OnSets { perms }, base.to_vec().into_boxed_slice(), ORBIT_CAP)?;
    let mut out = o.items;
    out.sort_unstable();
    Ok(out)
}

/// `v, k, λ, r, b` with `v = p^{2m}`, `k = p^m`, `λ = p^f`, `|T_B| = p^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub r: u64,
    pub b: u64,
    pub p: u32,
    pub m: u32,
    pub f: u32,
    pub t: u32,
}

impl DesignParams {
    pub fn new(p: u32, m: u32, f: u32, t: u32) -> Result<Self> {
        if f > m {
            return Err(Error::Precondition(format!("λ = p^{f} does not divide k = p^{m}")));
        }
        let pm = (p as u64).pow(m);
        let v = pm * pm;
        let lambda = (p as u64).pow(f);
        let r = lambda * (pm + 1);
        Ok(DesignParams { v, k: pm, lambda, r, b: v * r / pm, p, m, f, t })
    }

    /// Reads `(v, k, λ)` off a design and checks the identities.
    pub fn from_counts(p: u32, v: u64, k: u64, lambda: u64, t: u32) -> Result<Self> {
        let m = log_p(p, k).ok_or(Error::NotPrimePower(k as usize))?;
        let f = log_p(p, lambda)
            .ok_or_else(|| Error::Precondition(format!("λ = {lambda} is not a power of {p}")))?;
        let d = DesignParams::new(p, m, f, t)?;
        if d.v != v {
            return Err(Error::Precondition(format!("v = {v} is not k^2 = {}", d.v)));
        }
        Ok(d)
    }

    /// The identities every flag-transitive `2-(p^{2m}, p^m, p^f)` design satisfies.
    pub fn check(&self) -> bool {
        let pm = (self.p as u64).pow(self.m);
        self.v == pm * pm
            && self.k == pm
            && self.k % self.lambda == 0
            && self.r == self.lambda * (pm + 1)
            && self.b * self.k == self.v * self.r
            && self.m.saturating_sub(self.t) <= self.f
            && self.f <= self.m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub v: u64,
    pub k: u64,
    pub lambda: Option<u64>,
    pub r: u64,
    pub b: u64,
}

/// Exchange format for designs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignJson {
    pub params: ParamsJson,
    pub p: u32,
    /// Dimension of `V` over GF(p).
    pub dim: usize,
    pub base_block: Vec<u32>,
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks_through_zero: Option<Vec<Vec<u32>>>,
}

impl Design {
    /// Export; the through-0 blocks are included when `with_blocks`.
    pub fn to_json(&self, lambda: Option<u64>, with_blocks: bool) -> DesignJson {
        DesignJson {
            params: ParamsJson {
                v: self.v() as u64,
                k: self.k as u64,
                lambda,
                r: self.r() as u64,
                b: self.b,
            },
            p: self.space.p(),
            dim: self.space.dim(),
            base_block: self.base_block.clone(),
            group: self.group_name.clone(),
            blocks_through_zero: with_blocks.then(|| self.through_zero().map(|b| b.to_vec()).collect()),
        }
    }

    /// Import. Without explicit blocks the design is rebuilt from the base
    /// block under `group`.
    pub fn from_json(json: &DesignJson, group: Option<&GenGroup>) -> Result<Design> {
        let space = Space::prime(json.p, json.dim)?;
        match (&json.blocks_through_zero, group) {
            (Some(b0), _) => {
                let blocks = b0.iter().map(|b| b.clone().into_boxed_slice()).collect();
                Design::from_through_zero(space, json.base_block.clone(), json.group.clone(), blocks)
            }
            (None, Some(g)) => {
                if g.space.size() != space.size() || g.space.p() != space.p() {
                    return Err(Error::DimensionMismatch {
                        expected: space.dim(),
                        got: g.space.dim(),
                    });
                }
                build_design(&json.base_block, g)
            }
            (None, None) => Err(Error::Precondition("design file has no blocks and no group was given".into())),
        }
    }
}
