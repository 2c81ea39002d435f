//! The Suzuki group on `V4(q)`, `q = 2^(2e+1)`: Tits ovoid, Lüneburg spread
//! and the four families of block seeds `(x0, y0, z0, t0)`.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::atlas::{affine_closure, suzuki, suzuki_psi};
use crate::design::{build_design, verify_2design, Design, VerifyMode};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::{orbit, GenGroup, LinMap, OnPoints, OnSubspaces, ORBIT_CAP};
use crate::linalg::{canonical_subspace, Subspace};
use crate::par;
use crate::space::Space;

#[derive(Debug, Clone)]
pub struct SuzukiContext {
    pub q: u32,
    pub field: Field,
    pub space: Arc<Space>,
    /// `Sz(q)` acting linearly.
    pub group: GenGroup,
    /// `T:Sz(q)`.
    pub affine: GenGroup,
    /// Sorted point indices of the ovoid vectors.
    pub ovoid: Vec<u32>,
    in_ovoid: Vec<bool>,
    pub spread: Vec<Subspace>,
    sigma: i64,
}

impl SuzukiContext {
    pub fn new(q: u32) -> Result<Self> {
        let entry = suzuki(q)?;
        let field = entry.field.clone();
        let group = entry.group;
        let space = group.space.clone();
        let sigma = field.suzuki_exponent()?;
        let ovoid = tits_ovoid(&field, &space)?;
        let mut in_ovoid = vec![false; space.size() as usize];
        for &x in &ovoid {
            in_ovoid[x as usize] = true;
        }
        let spread = luneburg_spread(&field, &space)?;
        let affine = affine_closure(&group)?;
        Ok(SuzukiContext { q, field, space, group, affine, ovoid, in_ovoid, spread, sigma })
    }

    pub fn h(&self) -> u32 {
        self.field.h()
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn in_ovoid(&self, x: u32) -> bool {
        self.in_ovoid[x as usize]
    }

    pub fn ovoid_meet(&self, pts: &[u32]) -> usize {
        pts.iter().filter(|&&x| self.in_ovoid(x)).count()
    }

    /// The `Sz(q)`-orbit of `(1, 0, 0, 0)`.
    pub fn ovoid_orbit(&self) -> Result<Vec<u32>> {
        let e1 = self.space.index(&[1, 0, 0, 0])?;
        let perms = Arc::new(self.group.perms());
        let mut o = orbit(&OnPoints { perms }, e1, ORBIT_CAP)?.items;
        o.sort_unstable();
        Ok(o)
    }

    /// Length of the `Sz(q)`-orbit of a spread member.
    pub fn spread_orbit_len(&self, s: &Subspace) -> Result<usize> {
        let act = OnSubspaces { space: self.space.clone(), lins: self.group.linear_gens() };
        Ok(orbit(&act, s.clone(), ORBIT_CAP)?.len())
    }

    /// Whether no nonidentity `psi(m)` fixes a nonzero vector.
    pub fn k_semiregular(&self) -> Result<bool> {
        let f = &self.field;
        for m in f.elements().filter(|&m| m > 1) {
            let lin = LinMap::from_matrix(&self.space, &suzuki_psi(f, m)?)?;
            let perm = lin.perm(&self.space);
            if perm.iter().enumerate().skip(1).any(|(x, &y)| x as u32 == y) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `x^e` with `0^e = 0` for every `e`.
fn zpow(f: &Field, x: Elem, e: i64) -> Elem {
    if x == 0 {
        0
    } else {
        f.pw(x, e)
    }
}

/// The ovoid vectors from the closed-form parametrization.
pub fn tits_ovoid(f: &Field, space: &Space) -> Result<Vec<u32>> {
    let s = f.suzuki_exponent()?;
    let mut out: HashSet<u32> = HashSet::new();
    for c in f.elements().filter(|&c| c != 0) {
        out.insert(space.index(&[c, 0, 0, 0])?);
        out.insert(space.index(&[0, 0, 0, c])?);
    }
    for l in f.elements() {
        for w in f.elements() {
            if (l, w) == (0, 0) {
                continue;
            }
            let a = f.add(f.add(f.pw(l, s + 2), f.mul(l, w)), f.pw(w, s));
            let v = [a, w, l, 1];
            for m in f.elements().filter(|&m| m != 0) {
                let c = f.inv_nz(f.pw(m, s + 2));
                let u: Vec<Elem> = v.iter().map(|&x| f.mul(c, x)).collect();
                out.insert(space.index(&u)?);
            }
        }
    }
    let mut v: Vec<u32> = out.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// `L(∞)` followed by `L(l, w)` in lexicographic `(l, w)` order.
pub fn luneburg_spread(f: &Field, space: &Space) -> Result<Vec<Subspace>> {
    let s = f.suzuki_exponent()?;
    let h = f.h();
    let mut out = vec![canonical_subspace(space, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], h)?];
    for l in f.elements() {
        for w in f.elements() {
            let a = f.add(f.add(f.pw(l, s + 2), f.mul(l, w)), f.pw(w, s));
            let x_row = vec![a, w, l, 1];
            let y_row = vec![f.add(f.pw(l, s + 1), w), f.pw(l, s), 1, 0];
            out.push(canonical_subspace(space, &[x_row, y_row], h)?);
        }
    }
    Ok(out)
}

/// Whether the subspaces partition `V*`.
pub fn is_spread(space: &Space, comps: &[Subspace]) -> bool {
    let mut hit = vec![false; space.size() as usize];
    for c in comps {
        for x in c.points(space).into_iter().skip(1) {
            if std::mem::replace(&mut hit[x as usize], true) {
                return false;
            }
        }
    }
    hit.iter().skip(1).all(|&b| b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuzukiTuple {
    pub x0: Elem,
    pub y0: Elem,
    pub z0: Elem,
    pub t0: Elem,
}

impl SuzukiTuple {
    pub fn new(x0: Elem, y0: Elem, z0: Elem, t0: Elem) -> Self {
        SuzukiTuple { x0, y0, z0, t0 }
    }

    pub fn all_nonzero(&self) -> bool {
        self.x0 != 0 && self.y0 != 0 && self.z0 != 0 && self.t0 != 0
    }

    fn check(&self, q: u32) -> Result<()> {
        if [self.x0, self.y0, self.z0, self.t0].iter().any(|&c| c >= q) {
            return Err(Error::InvalidTuple(format!("{self:?} has entries outside GF({q})")));
        }
        if (self.x0, self.y0) == (0, 0) || (self.z0, self.t0) == (0, 0) {
            return Err(Error::InvalidTuple(format!("{self:?}: (x0, y0) and (z0, t0) must be nonzero")));
        }
        Ok(())
    }
}

/// How `m1`, `m2` are attached to the coordinates of the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// `(m1^{σ+2} x0, m1^σ y0, m2^{-σ} z0, m2^{-σ-2} t0)`.
    Literal,
    /// `(m1^{σ+2} x0, m2^σ y0, m1^{-σ} z0, m2^{-σ-2} t0)`.
    Swapped,
}

#[derive(Debug, Clone)]
pub struct FamilyBlock {
    pub subspace: Subspace,
    pub points: Vec<u32>,
    pub pairing: Pairing,
}

fn block_set(ctx: &SuzukiContext, tup: &SuzukiTuple, pairing: Pairing) -> Result<Vec<u32>> {
    let f = &ctx.field;
    let s = ctx.sigma;
    let mut set = HashSet::new();
    for m1 in f.elements() {
        for m2 in f.elements() {
            let (a, b) = match pairing {
                Pairing::Literal => (m1, m2),
                Pairing::Swapped => (m2, m1),
            };
            let v = [
                f.mul(zpow(f, m1, s + 2), tup.x0),
                f.mul(zpow(f, a, s), tup.y0),
                f.mul(zpow(f, b, -s), tup.z0),
                f.mul(zpow(f, m2, -s - 2), tup.t0),
            ];
            set.insert(ctx.space.index(&v)?);
        }
    }
    let mut v: Vec<u32> = set.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// The seed's point set with `0^{-n} = 0`, as a GF(2)-subspace of size `q^2`.
/// The literal pairing is used when it is additively closed, otherwise the
/// swapped one.
pub fn family_block(ctx: &SuzukiContext, tup: &SuzukiTuple) -> Result<FamilyBlock> {
    tup.check(ctx.q)?;
    let want = (ctx.q as usize) * (ctx.q as usize);
    let mut sizes = Vec::new();
    for pairing in [Pairing::Literal, Pairing::Swapped] {
        let pts = block_set(ctx, tup, pairing)?;
        let sub = Subspace::from_points(&ctx.space, pts.iter().copied());
        if pts.len() == want && sub.cardinality(&ctx.space) == want as u64 {
            return Ok(FamilyBlock { subspace: sub, points: pts, pairing });
        }
        sizes.push((pts.len(), sub.cardinality(&ctx.space)));
    }
    Err(Error::NotClosed(format!("{tup:?}: set sizes / spans {sizes:?}, expected {want}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Family1,
    Family2,
    Family3,
    Family4,
    NotABlock,
}

impl Family {
    /// `λ` the construction promises for `q`.
    pub fn expected_lambda(self, q: u64) -> Option<u64> {
        match self {
            Family::Family1 => Some(q),
            Family::Family2 => Some(q * q / 2),
            Family::Family3 | Family::Family4 => Some(q * q),
            Family::NotABlock => None,
        }
    }
}

/// `t0 y0^{σ+1} = z0^{σ+1} x0`.
pub fn family_condition(f: &Field, tup: &SuzukiTuple) -> Result<bool> {
    let s = f.suzuki_exponent()?;
    Ok(f.mul(tup.t0, f.pw(tup.y0, s + 1)) == f.mul(f.pw(tup.z0, s + 1), tup.x0))
}

/// `x0 z0^{σ+1} = y0^{σ+1} t0`, the form used in the ovoid-meet criterion.
pub fn intorb_condition(f: &Field, tup: &SuzukiTuple) -> Result<bool> {
    let s = f.suzuki_exponent()?;
    Ok(f.mul(tup.x0, f.pw(tup.z0, s + 1)) == f.mul(f.pw(tup.y0, s + 1), tup.t0))
}

/// Fixed points of `ζ` in `GF(q)*` with nonzero denominator, for any tuple
/// with `t0 != 0`.
pub fn zeta_count(f: &Field, tup: &SuzukiTuple) -> Result<usize> {
    let s = f.suzuki_exponent()?;
    let ti = f.inv(tup.t0)?;
    let (x, y, z) = (f.mul(tup.x0, ti), f.mul(tup.y0, ti), f.mul(tup.z0, ti));
    let c_num = f.pw(z, s + 2);
    let c_den = f.mul(z, y);
    let ys = zpow(f, y, s);
    Ok(f.elements()
        .filter(|&xx| xx != 0)
        .filter(|&xx| {
            let xs = f.pw(xx, s);
            let den = f.add(f.mul(x, xs), c_den);
            den != 0 && f.mul(f.add(f.mul(ys, xs), c_num), f.inv_nz(den)) == xx
        })
        .count())
}

/// [`zeta_count`] under its defining precondition: all entries nonzero and
/// the family condition failing.
pub fn zeta_fixed_points(f: &Field, tup: &SuzukiTuple) -> Result<usize> {
    if !tup.all_nonzero() {
        return Err(Error::Precondition(format!("{tup:?} has a zero entry")));
    }
    if family_condition(f, tup)? {
        return Err(Error::Precondition(format!("{tup:?} satisfies the family condition")));
    }
    zeta_count(f, tup)
}

pub fn classify_family(f: &Field, tup: &SuzukiTuple) -> Result<Family> {
    if tup.check(f.order()).is_err() {
        return Ok(Family::NotABlock);
    }
    if (tup.y0 == 0 && tup.t0 == 0) || (tup.x0 == 0 && tup.z0 == 0) {
        return Ok(Family::Family1);
    }
    if !tup.all_nonzero() {
        return Ok(Family::NotABlock);
    }
    if family_condition(f, tup)? {
        return Ok(if (tup.z0, tup.t0) == (tup.y0, tup.x0) { Family::Family2 } else { Family::Family3 });
    }
    Ok(if zeta_fixed_points(f, tup)? == 1 { Family::Family4 } else { Family::NotABlock })
}

/// A classified seed with its design parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub q: u32,
    pub x0: Elem,
    pub y0: Elem,
    pub z0: Elem,
    pub t0: Elem,
    pub family: Family,
    pub lambda: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct FamilyDesign {
    pub tuple: SuzukiTuple,
    pub family: Family,
    pub block: FamilyBlock,
    pub ovoid_meet: usize,
    pub design: Design,
    /// `None` when the pair counts are not uniform.
    pub lambda: Option<u64>,
}

impl FamilyDesign {
    pub fn witness(&self, q: u32) -> Witness {
        let t = self.tuple;
        Witness { q, x0: t.x0, y0: t.y0, z0: t.z0, t0: t.t0, family: self.family, lambda: self.lambda }
    }
}

/// `(V, B^{T:Sz(q)})` for the seed, verified on the through-0 slice.
pub fn family_design(ctx: &SuzukiContext, tup: &SuzukiTuple) -> Result<FamilyDesign> {
    let family = classify_family(&ctx.field, tup)?;
    let block = family_block(ctx, tup)?;
    let ovoid_meet = ctx.ovoid_meet(&block.points);
    let design = build_design(&block.points, &ctx.affine)?;
    let lambda = match verify_2design(&design, VerifyMode::Slice, None) {
        Ok(l) => Some(l),
        Err(Error::Nonuniform { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FamilyDesign { tuple: *tup, family, block, ovoid_meet, design, lambda })
}

/// Seeds with `x0 = 1` and `y0, z0, t0` nonzero, in canonical order.
pub fn normalized_tuples(q: u32) -> Vec<SuzukiTuple> {
    let mut out = Vec::new();
    for y0 in 1..q {
        for z0 in 1..q {
            for t0 in 1..q {
                out.push(SuzukiTuple::new(1, y0, z0, t0));
            }
        }
    }
    out
}

/// Every normalized seed in Family 4.
pub fn family4_search(f: &Field) -> Result<Vec<SuzukiTuple>> {
    let q = f.order();
    let tuples = normalized_tuples(q);
    let hits = par::map(&tuples, |t| classify_family(f, t).map(|c| (c == Family::Family4).then_some(*t)));
    let mut out: Vec<SuzukiTuple> = hits.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntOrbRow {
    pub tuple: SuzukiTuple,
    pub ovoid_meet: usize,
    pub intorb_condition: bool,
    pub family_condition: bool,
    pub zeta: usize,
}

impl IntOrbRow {
    /// The meet criterion as stated, with the `x0 z0^{σ+1}` condition.
    pub fn admitted(&self) -> bool {
        self.intorb_condition || self.zeta == 1
    }

    /// The same criterion with the family condition in its place.
    pub fn admitted_family_form(&self) -> bool {
        self.family_condition || self.zeta == 1
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntOrbReport {
    pub q: u32,
    pub rows: Vec<IntOrbRow>,
}

impl IntOrbReport {
    fn mismatch(&self, admitted: impl Fn(&IntOrbRow) -> bool) -> Vec<SuzukiTuple> {
        let target = self.q as usize - 1;
        self.rows.iter().filter(|r| (r.ovoid_meet == target) != admitted(r)).map(|r| r.tuple).collect()
    }

    pub fn discrepancies(&self) -> Vec<SuzukiTuple> {
        self.mismatch(IntOrbRow::admitted)
    }

    pub fn discrepancies_family_form(&self) -> Vec<SuzukiTuple> {
        self.mismatch(IntOrbRow::admitted_family_form)
    }

    pub fn meeting_count(&self) -> usize {
        self.rows.iter().filter(|r| r.ovoid_meet == self.q as usize - 1).count()
    }
}

/// `|B ∩ O|` against the ovoid-meet criterion over all normalized seeds.
pub fn intorb_cross_validation(ctx: &SuzukiContext) -> Result<IntOrbReport> {
    let f = &ctx.field;
    let tuples = normalized_tuples(ctx.q);
    let rows = par::map(&tuples, |t| -> Result<IntOrbRow> {
        let block = family_block(ctx, t)?;
        Ok(IntOrbRow {
            tuple: *t,
            ovoid_meet: ctx.ovoid_meet(&block.points),
            intorb_condition: intorb_condition(f, t)?,
            family_condition: family_condition(f, t)?,
            zeta: zeta_count(f, t)?,
        })
    });
    Ok(IntOrbReport { q: ctx.q, rows: rows.into_iter().collect::<Result<_>>()? })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Tangency {
    TangentLineNotInSpread,
    Other { ovoid_meet: usize, tangent: bool, in_spread: bool },
}

/// Whether a GF(q)-plane meets the ovoid in one projective point and is
/// not a spread component.
pub fn tangency_check(ctx: &SuzukiContext, b: &Subspace) -> Result<Tangency> {
    let space = &ctx.space;
    if b.dim() != 2 * ctx.h() as usize || !b.is_linear_over(space, ctx.h()) {
        return Err(Error::Precondition("not a 2-dimensional GF(q)-subspace".into()));
    }
    let meet: Vec<u32> = b.points(space).into_iter().filter(|&x| ctx.in_ovoid(x)).collect();
    let tangent = meet.len() == ctx.q as usize - 1 && {
        let line: HashSet<u32> = ctx.field.elements().skip(1).map(|c| space.scale(meet[0], c)).collect();
        meet.iter().all(|x| line.contains(x))
    };
    let in_spread = ctx.spread.contains(b);
    if tangent && !in_spread {
        Ok(Tangency::TangentLineNotInSpread)
    } else {
        Ok(Tangency::Other { ovoid_meet: meet.len(), tangent, in_spread })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn ctx8() -> &'static SuzukiContext {
        static C: OnceLock<SuzukiContext> = OnceLock::new();
        C.get_or_init(|| SuzukiContext::new(8).unwrap())
    }

    #[test]
    fn ovoid_and_spread_q8() {
        let c = ctx8();
        assert_eq!(c.ovoid.len(), 455);
        assert_eq!(c.ovoid, c.ovoid_orbit().unwrap());
        let e1 = c.space.index(&[1, 0, 0, 0]).unwrap();
        let e2 = c.space.index(&[0, 1, 0, 0]).unwrap();
        assert!(c.in_ovoid(e1) && !c.in_ovoid(e2));
        assert_eq!(c.spread.len(), 65);
        assert!(is_spread(&c.space, &c.spread));
        assert_eq!(c.spread_orbit_len(&c.spread[0]).unwrap(), 65);
        let l00 = canonical_subspace(&c.space, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]], 3).unwrap();
        assert_eq!(c.spread[1], l00);
    }

    #[test]
    fn k_is_semiregular() {
        assert!(ctx8().k_semiregular().unwrap());
    }

    #[test]
    fn family1_block_is_gf_q_plane() {
        let c = ctx8();
        let b = family_block(c, &SuzukiTuple::new(1, 0, 1, 0)).unwrap();
        let want = canonical_subspace(&c.space, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]], 3).unwrap();
        assert_eq!(b.subspace, want);
        assert_eq!(b.pairing, Pairing::Literal);
        assert_eq!(tangency_check(c, &b.subspace).unwrap(), Tangency::TangentLineNotInSpread);
        match tangency_check(c, &c.spread[0]).unwrap() {
            Tangency::Other { in_spread, tangent, .. } => assert!(in_spread && tangent),
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn secant_plane_is_other() {
        let c = ctx8();
        let a = c.ovoid[0];
        let b = *c.ovoid.iter().find(|&&b| c.space.vector(b)[3] != 0).unwrap();
        let sec = canonical_subspace(&c.space, &[c.space.vector(a), c.space.vector(b)], 3).unwrap();
        assert_eq!(sec.dim(), 6);
        assert!(matches!(tangency_check(c, &sec).unwrap(), Tangency::Other { ovoid_meet: 14, .. }));
    }

    #[test]
    fn all_nonzero_block_is_not_gf_q_linear() {
        let c = ctx8();
        let b = family_block(c, &SuzukiTuple::new(1, 1, 1, 1)).unwrap();
        assert_eq!(b.points.len(), 64);
        assert_eq!(b.subspace.dim(), 6);
        assert!(!b.subspace.is_linear_over(&c.space, 3));
    }

    #[test]
    fn classification_examples() {
        let f = &ctx8().field;
        let w = f.primitive_elem();
        assert_eq!(classify_family(f, &SuzukiTuple::new(1, 0, 1, 0)).unwrap(), Family::Family1);
        assert_eq!(classify_family(f, &SuzukiTuple::new(0, 1, 0, 1)).unwrap(), Family::Family1);
        assert_eq!(classify_family(f, &SuzukiTuple::new(1, 1, 1, 1)).unwrap(), Family::Family2);
        let t = SuzukiTuple::new(1, 1, w, f.pw(w, 5));
        assert_eq!(classify_family(f, &t).unwrap(), Family::Family3);
        assert_eq!(classify_family(f, &SuzukiTuple::new(1, 0, 0, 0)).unwrap(), Family::NotABlock);
    }

    #[test]
    fn zeta_precondition() {
        let f = &ctx8().field;
        assert!(zeta_fixed_points(f, &SuzukiTuple::new(1, 1, 1, 1)).is_err());
        assert!(zeta_fixed_points(f, &SuzukiTuple::new(1, 0, 1, 1)).is_err());
    }

    #[test]
    fn family4_nonempty_q8() {
        let f = &ctx8().field;
        let w = family4_search(f).unwrap();
        assert!(!w.is_empty());
        for t in &w {
            assert_eq!(t.x0, 1);
            assert_eq!(classify_family(f, t).unwrap(), Family::Family4);
            assert!(zeta_fixed_points(f, t).unwrap() <= 7);
        }
    }

    #[test]
    fn family1_design_q8() {
        let c = ctx8();
        let d = family_design(c, &SuzukiTuple::new(1, 0, 1, 0)).unwrap();
        assert_eq!(d.ovoid_meet, 7);
        assert_eq!(d.design.r(), 520);
        assert_eq!(d.lambda, Some(8));
    }
}
