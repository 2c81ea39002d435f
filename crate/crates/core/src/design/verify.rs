use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{g0_block_orbit, log_p, sorted_block, Design};
use crate::error::{Error, Result};
use crate::group::{orbit, point_orbits, GenGroup, OnFlags, OnSets, ORBIT_CAP};
use crate::linalg::Subspace;
use crate::par;
use crate::space::Space;

/// Largest `v * r * k` accepted by the all-pairs count.
pub const BRUTEFORCE_CAP: u64 = 150_000_000;

/// Largest `b * k` for which flag-transitivity is checked on literal flags.
const LITERAL_FLAG_CAP: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    /// Every pair, from the materialized block list.
    Bruteforce,
    /// One pair `(0, y)` per `G0`-orbit on `V*`.
    Orbitwise,
    /// All pairs `(0, y)`, from the blocks through 0.
    Slice,
}

fn uniform(counts: impl Iterator<Item = (u32, u32, u64)>) -> Result<u64> {
    let mut expected = None;
    for (x, y, c) in counts {
        match expected {
            None => expected = Some(c),
            Some(e) if e != c => return Err(Error::Nonuniform { pair: (x, y), count: c, expected: e }),
            _ => {}
        }
    }
    let lambda = expected.unwrap_or(0);
    if lambda == 0 {
        return Err(Error::Nonuniform { pair: (0, 0), count: 0, expected: 1 });
    }
    Ok(lambda)
}

/// Counts of blocks through 0 containing each point.
fn slice_counts(d: &Design) -> Vec<u64> {
    let v = d.v() as usize;
    let blocks: Vec<&[u32]> = d.through_zero().collect();
    let partial = par::flat_map_chunks(&blocks, 1 << 12, |chunk| {
        let mut c = vec![0u64; v];
        for b in chunk {
            for &x in b.iter() {
                c[x as usize] += 1;
            }
        }
        vec![c]
    });
    let mut total = vec![0u64; v];
    for c in partial {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    total
}

/// The common pair count λ, or a witness pair where it fails.
pub fn verify_2design(d: &Design, mode: VerifyMode, g0: Option<&GenGroup>) -> Result<u64> {
    let v = d.v();
    match mode {
        VerifyMode::Bruteforce => {
            let blocks = d.blocks().ok_or_else(|| Error::CapExceeded {
                what: "materialized blocks".into(),
                size: d.v() as u128 * d.r() as u128,
                cap: super::MATERIALIZE_CAP as u128,
            })?;
            let work = blocks.len() as u64 * (d.k() as u64).pow(2);
            if work > BRUTEFORCE_CAP {
                return Err(Error::CapExceeded { what: "pair counts".into(), size: work as u128, cap: BRUTEFORCE_CAP as u128 });
            }
            let mut inc: Vec<Vec<u32>> = vec![Vec::new(); v as usize];
            for (i, b) in blocks.iter().enumerate() {
                for &x in b.iter() {
                    inc[x as usize].push(i as u32);
                }
            }
            let rows = par::map_range(v as usize, |x| {
                let mut c = vec![0u64; v as usize];
                for &bi in &inc[x] {
                    for &y in blocks[bi as usize].iter() {
                        c[y as usize] += 1;
                    }
                }
                uniform((0..v).filter(|&y| y != x as u32).map(|y| (x as u32, y, c[y as usize])))
            });
            let mut lambda = None;
            for (x, r) in rows.into_iter().enumerate() {
                let l = r?;
                match lambda {
                    None => lambda = Some(l),
                    Some(e) if e != l => {
                        return Err(Error::Nonuniform { pair: (x as u32, u32::MAX), count: l, expected: e })
                    }
                    _ => {}
                }
            }
            lambda.ok_or(Error::Precondition("empty design".into()))
        }
        VerifyMode::Slice => {
            require_translations(d)?;
            let c = slice_counts(d);
            uniform((1..v).map(|y| (0, y, c[y as usize])))
        }
        VerifyMode::Orbitwise => {
            require_translations(d)?;
            let g0 = g0.ok_or_else(|| Error::Precondition("orbitwise mode needs G0".into()))?;
            let orbits = point_orbits(&g0.perms(), v);
            let reps: Vec<u32> = orbits.iter().map(|o| o[0]).filter(|&y| y != 0).collect();
            let counts: Vec<u64> = par::map(&reps, |&y| {
                d.through_zero().filter(|b| b.binary_search(&y).is_ok()).count() as u64
            });
            uniform(reps.iter().zip(counts).map(|(&y, c)| (0, y, c)))
        }
    }
}

fn require_translations(d: &Design) -> Result<()> {
    if d.is_translation_invariant() {
        Ok(())
    } else {
        Err(Error::Precondition("needs a translation-invariant design".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagMethod {
    /// Orbit of one flag `(point, block)` under `G`.
    Literal,
    /// `T <= G` and `G0` transitive on the blocks through 0.
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagCheck {
    pub transitive: bool,
    pub method: FlagMethod,
    pub orbit_len: u64,
    pub expected: u64,
}

/// Whether `G` is transitive on flags.
pub fn check_flag_transitive(d: &Design, g: &GenGroup) -> Result<FlagCheck> {
    let bk = d.b() * d.k() as u64;
    if let Some(blocks) = d.blocks().filter(|_| bk <= LITERAL_FLAG_CAP) {
        let perms = Arc::new(g.perms());
        let act = OnFlags::new(perms, blocks);
        let b0 = sorted_block(d.base_block.iter().copied());
        let id = *act
            .index
            .get(&b0[..])
            .ok_or_else(|| Error::Precondition("base block is not a block".into()))?;
        let seed = (b0[0], id);
        let o = orbit(&act, seed, ORBIT_CAP)?;
        let len = o.len() as u64;
        let closed = !o.items.iter().any(|f| f.1 == u32::MAX);
        return Ok(FlagCheck { transitive: closed && len == bk, method: FlagMethod::Literal, orbit_len: len, expected: bk });
    }
    let g0 = g
        .point_stabilizer()
        .filter(|_| d.is_translation_invariant())
        .ok_or_else(|| Error::Precondition("structural flag check needs G = T:G0".into()))?;
    let first = d.through_zero_block(0).to_vec();
    let o = g0_block_orbit(&d.space, &first, &g0)?;
    let inside = o.iter().all(|c| d.through_zero_position(c).is_some());
    let len = o.len() as u64;
    let r = d.r() as u64;
    Ok(FlagCheck { transitive: inside && len == r, method: FlagMethod::Structural, orbit_len: len, expected: r })
}

/// `(|y^{G0}|, |B ∩ y^{G0}|)` for each `G0`-orbit on `V*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TacticalRow {
    pub orbit_len: usize,
    pub meet: usize,
}

pub fn tactical_counts(d: &Design, g0: &GenGroup) -> Vec<TacticalRow> {
    let orbits = point_orbits(&g0.perms(), d.v());
    let base: HashSet<u32> = d.base_block.iter().copied().collect();
    let mut rows: Vec<TacticalRow> = orbits
        .iter()
        .filter(|o| o[0] != 0)
        .map(|o| TacticalRow { orbit_len: o.len(), meet: o.iter().filter(|x| base.contains(x)).count() })
        .collect();
    rows.sort();
    rows
}

/// Checks `|y^{G0}| = ratio * |B ∩ y^{G0}|` on every row.
pub fn check_tactical_ratio(rows: &[TacticalRow], ratio: u64) -> Result<()> {
    for r in rows {
        if r.orbit_len as u64 != ratio * r.meet as u64 {
            return Err(Error::TacticalRatio { orbit: r.orbit_len, meet: r.meet });
        }
    }
    Ok(())
}

/// `|T_B|`: translations fixing the block setwise.
pub fn translation_block_stabilizer(space: &Space, block: &[u32]) -> u64 {
    let set: HashSet<u32> = block.iter().copied().collect();
    let Some(&b0) = block.first() else { return 0 };
    // t must map b0 into the block
    block
        .iter()
        .map(|&c| space.sub(c, b0))
        .filter(|&t| block.iter().all(|&x| set.contains(&space.add(x, t))))
        .count() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiciReport {
    pub t: u32,
    pub m: u32,
    pub f: u32,
    pub holds: bool,
}

/// `m - t <= f <= m` with `|T_B| = p^t`, `k = p^m`, `λ = p^f`.
pub fn cici_check(d: &Design, lambda: u64) -> Result<CiciReport> {
    let p = d.space.p();
    let tb = translation_block_stabilizer(&d.space, &d.base_block);
    let t = log_p(p, tb).ok_or_else(|| Error::Precondition(format!("|T_B| = {tb} is not a power of {p}")))?;
    let m = log_p(p, d.k() as u64).ok_or(Error::NotPrimePower(d.k()))?;
    let f = log_p(p, lambda).ok_or_else(|| Error::Precondition(format!("λ = {lambda} is not a power of {p}")))?;
    let holds = m.saturating_sub(t) <= f && f <= m;
    if !holds {
        return Err(Error::CiciBound { m, t, f });
    }
    Ok(CiciReport { t, m, f, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum SubspaceStatus {
    /// Blocks through 0 are GF(p)-subspaces of this prime dimension and
    /// every block is a translate of one of them.
    PrimeSubspaces { dim: usize, linear_degree: u32 },
    NotSubspaces,
}

pub fn blocks_are_subspaces(d: &Design) -> SubspaceStatus {
    let s = &d.space;
    let mut dim = None;
    let mut degree = u32::MAX;
    for b in d.through_zero() {
        let sub = Subspace::from_points(s, b.iter().copied());
        if sub.cardinality(s) != b.len() as u64 {
            return SubspaceStatus::NotSubspaces;
        }
        dim = Some(sub.dim());
        degree = degree.min(sub.linear_degree(s));
    }
    if let Some(blocks) = d.blocks() {
        let ok = blocks.iter().all(|b| {
            let c = sorted_block(b.iter().map(|&x| s.sub(x, b[0])));
            d.through_zero_position(&c).is_some()
        });
        if !ok {
            return SubspaceStatus::NotSubspaces;
        }
    }
    match dim {
        Some(dim) => SubspaceStatus::PrimeSubspaces { dim, linear_degree: degree },
        None => SubspaceStatus::NotSubspaces,
    }
}

/// `r` as the number of blocks through 0, as `λ(p^m + 1)`, and as `bk/v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RCheck {
    pub through_zero: u64,
    pub from_lambda: u64,
    pub from_b: u64,
    pub b: u64,
    pub agree: bool,
}

/// `b` is taken from the literal orbit of the base block under `G` when
/// that is small, and otherwise as `v |[B]^{G0}| / |T_B|`, where `[B]` is the
/// translation class of the base block.
pub fn r_three_ways(d: &Design, lambda: u64, g: &GenGroup) -> Result<RCheck> {
    let s = &d.space;
    let v = d.v() as u64;
    let k = d.k() as u64;
    let base = sorted_block(d.base_block.iter().copied());
    let b = if v * d.r() as u64 <= LITERAL_FLAG_CAP * 4 {
        let perms = Arc::new(g.perms());
        orbit(&OnSets { perms }, base, ORBIT_CAP)?.len() as u64
    } else {
        let g0 = g
            .point_stabilizer()
            .ok_or_else(|| Error::Precondition("needs G = T:G0".into()))?;
        let canon = |c: &[u32]| -> Box<[u32]> {
            c.iter().map(|&x| sorted_block(c.iter().map(|&y| s.sub(y, x)))).min().expect("nonempty block")
        };
        let classes: Vec<Box<[u32]>> = g0_block_orbit(s, &base, &g0)?;
        let mut reps: Vec<Box<[u32]>> = par::map(&classes, |c| canon(c));
        reps.sort_unstable();
        reps.dedup();
        let tb = translation_block_stabilizer(s, &d.base_block);
        v * reps.len() as u64 / tb
    };
    let from_b = b * k / v;
    let through_zero = d.r() as u64;
    let from_lambda = lambda * (k + 1);
    Ok(RCheck {
        through_zero,
        from_lambda,
        from_b,
        b,
        agree: through_zero == from_lambda && from_lambda == from_b && b * k == v * through_zero,
    })
}

/// Partitions the blocks through 0 into `parts` spreads of `V`, if possible.
/// Limited to at most 64 blocks.
pub fn spread_decomposition(d: &Design, parts: usize) -> Option<Vec<Vec<usize>>> {
    let blocks: Vec<&[u32]> = d.through_zero().collect();
    if blocks.len() > 64 || parts == 0 {
        return None;
    }
    let v = d.v() as usize;
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b.iter().skip(1) {
            containing[x as usize].push(i);
        }
    }
    fn covers(
        blocks: &[&[u32]],
        containing: &[Vec<usize>],
        covered: &mut Vec<bool>,
        mask: u64,
        out: &mut Vec<u64>,
    ) {
        let Some(x) = (1..covered.len()).find(|&x| !covered[x]) else {
            out.push(mask);
            return;
        };
        for &i in &containing[x] {
            let b = blocks[i];
            if b.iter().skip(1).any(|&y| covered[y as usize]) {
                continue;
            }
            for &y in b.iter().skip(1) {
                covered[y as usize] = true;
            }
            covers(blocks, containing, covered, mask | 1 << i, out);
            for &y in b.iter().skip(1) {
                covered[y as usize] = false;
            }
        }
    }
    let mut spreads = Vec::new();
    covers(&blocks, &containing, &mut vec![false; v], 0, &mut spreads);
    let full: u64 = if blocks.len() == 64 { u64::MAX } else { (1u64 << blocks.len()) - 1 };
    fn pick(spreads: &[u64], start: usize, left: usize, used: u64, full: u64, acc: &mut Vec<u64>) -> bool {
        if left == 0 {
            return used == full;
        }
        for (j, &s) in spreads.iter().enumerate().skip(start) {
            if s & used == 0 {
                acc.push(s);
                if pick(spreads, j + 1, left - 1, used | s, full, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    pick(&spreads, 0, parts, 0, full, &mut acc).then(|| {
        acc.iter().map(|&m| (0..blocks.len()).filter(|&i| m >> i & 1 == 1).collect()).collect()
    })
}
