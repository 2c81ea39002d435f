//! Concrete groups used by the catalog.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{make_field, Elem, Field, FieldSpec};
use crate::group::{enumerate_elements, greedy_generators, AffineMap, GenGroup, LinMap};
use crate::linalg::{load_matrices, BilinearForm, FormKind, Matrix};
use crate::space::Space;

const SU3_S2: &str = include_str!("../data/atlas/su3/s2.txt");
const SU3_S3: &str = include_str!("../data/atlas/su3/s3.txt");
const EX3: &str = include_str!("../data/atlas/ex3/matrices.txt");

/// A constructed group with the matrices it came from.
#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub name: String,
    pub field: Field,
    /// GF(q)-matrices of the linear generators (semilinear ones are omitted).
    pub matrices: Vec<Matrix>,
    pub form: Option<BilinearForm>,
    pub group: GenGroup,
}

/// `key=value` parameters of an atlas family.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtlasParams(pub BTreeMap<String, u32>);

impl AtlasParams {
    pub fn q(q: u32) -> Self {
        AtlasParams::default().with("q", q)
    }

    pub fn with(mut self, k: &str, v: u32) -> Self {
        self.0.insert(k.to_string(), v);
        self
    }

    pub fn get(&self, family: &str, k: &str) -> Result<u32> {
        self.0.get(k).copied().ok_or_else(|| Error::UnsupportedParams {
            family: family.to_string(),
            reason: format!("missing parameter {k}"),
        })
    }

    /// Parses `q=8` or `p=2,2m=6,c=7,e=0,s=3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = AtlasParams::default();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part}")))?;
            let v = v.trim().parse().map_err(|_| Error::Parse(format!("bad value in {part}")))?;
            out.0.insert(k.trim().to_string(), v);
        }
        Ok(out)
    }
}

fn unsupported(family: &str, reason: impl Into<String>) -> Error {
    Error::UnsupportedParams { family: family.to_string(), reason: reason.into() }
}

fn field_of_order(family: &str, q: u32) -> Result<Field> {
    let (p, h) = crate::linalg::prime_power(q).map_err(|_| unsupported(family, format!("{q} is not a prime power")))?;
    make_field(p, h)
}

/// Looks up a family by name. Names: `SL2`, `Sp4`, `SU3`, `Sz`,
/// `GammaL1-subgroup`, `Ex3-SL2(5)`, `Ex3-SL2(5).2`, `Ex3-SL2(5).2.2`,
/// `SU3(2)-on-V6(2)`, `GammaU3(2)-on-V6(2)`, `SU3(2):2-on-V6(2)` (`i`),
/// `3^(1+2):Z8-on-V6(2)` (`i`), `SU3-ext`, `SU3-sim`.
pub fn atlas_entry(name: &str, params: &AtlasParams) -> Result<AtlasEntry> {
    match name {
        "SL2" => sl2(params.get(name, "q")?),
        "Sp4" => sp4(params.get(name, "q")?),
        "SU3" => su3(params.get(name, "s")?),
        "SU3-ext" => su3_extended(params.get(name, "s")?, false),
        "SU3-sim" => su3_extended(params.get(name, "s")?, true),
        "Sz" => suzuki(params.get(name, "q")?),
        "GammaL1-subgroup" => gamma_l1_subgroup(
            params.get(name, "p")?,
            params.get(name, "2m")?,
            params.get(name, "c")?,
            params.get(name, "e")?,
            params.get(name, "s")?,
        ),
        "Ex3-SL2(5)" => ex3_group(false, false),
        "Ex3-SL2(5).2" => ex3_group(true, false),
        "Ex3-SL2(5).2.2" => ex3_group(true, true),
        "SU3(2)-on-V6(2)" => su3_2_on_v6_2(),
        "GammaU3(2)-on-V6(2)" => gamma_u3_2_on_v6_2(),
        "SU3(2):2-on-V6(2)" => su3_2_ext_on_v6_2(params.get("SU3(2):2-on-V6(2)", "i").unwrap_or(0)),
        "3^(1+2):Z8-on-V6(2)" => heisenberg_z8_on_v6_2(params.get("3^(1+2):Z8-on-V6(2)", "i").unwrap_or(0)),
        _ => Err(unsupported(name, "unknown atlas family")),
    }
}

pub fn atlas(name: &str, params: &AtlasParams) -> Result<GenGroup> {
    atlas_entry(name, params).map(|e| e.group)
}

/// Parses `NAME` or `NAME:k=v,...`.
pub fn atlas_by_spec(spec: &str) -> Result<AtlasEntry> {
    // names may contain ':', parameters always contain '='
    let (name, params) = match spec.rsplit_once(':') {
        Some((n, p)) if p.contains('=') => (n, AtlasParams::parse(p)?),
        _ => (spec, AtlasParams::default()),
    };
    atlas_entry(name.trim(), &params)
}

fn entry(name: String, field: Field, n: usize, mats: Vec<Matrix>, form: Option<BilinearForm>, order: u128) -> Result<AtlasEntry> {
    let space = Space::new(field.clone(), n)?;
    let group = GenGroup::from_matrices(name.clone(), space, &mats)?.with_order(order);
    Ok(AtlasEntry { name, field, matrices: mats, form, group })
}

fn sl2_matrices(f: &FieldSpec) -> Vec<Matrix> {
    let w = f.primitive_elem();
    let m1 = f.neg(1);
    vec![
        Matrix::diag(&[w, f.inv_nz(w)]),
        Matrix::from_rows(&[vec![1, 0], vec![1, 1]]).expect("2x2"),
        Matrix::from_rows(&[vec![0, 1], vec![m1, 0]]).expect("2x2"),
    ]
}

fn symplectic_j(f: &FieldSpec, n: usize) -> Matrix {
    let mut g = Matrix::zeros(n, n);
    for i in (0..n).step_by(2) {
        g.set(i, i + 1, 1);
        g.set(i + 1, i, f.neg(1));
    }
    g
}

/// SL2(q) on V2(q): torus, lower transvection and Weyl element.
pub fn sl2(q: u32) -> Result<AtlasEntry> {
    let f = field_of_order("SL2", q)?;
    let order = q as u128 * (q as u128 * q as u128 - 1);
    let form = BilinearForm::new(FormKind::Symplectic, symplectic_j(&f, 2));
    entry(format!("SL2({q})"), f.clone(), 2, sl2_matrices(&f), Some(form), order)
}

/// Sp4(q) for the form of Gram `J + J`: SL2 x SL2, the block swap, and the
/// transvection along `e1 + e3`.
pub fn sp4(q: u32) -> Result<AtlasEntry> {
    let f = field_of_order("Sp4", q)?;
    let g = symplectic_j(&f, 4);
    let mut mats = Vec::new();
    for m in sl2_matrices(&f) {
        for shift in [0, 2] {
            let mut a = Matrix::identity(4);
            for i in 0..2 {
                for j in 0..2 {
                    a.set(i + shift, j + shift, m.get(i, j));
                }
            }
            mats.push(a);
        }
    }
    let mut swap = Matrix::zeros(4, 4);
    for (i, j) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
        swap.set(i, j, 1);
    }
    mats.push(swap);
    // x -> x + F(x, v) v
    let v = [1, 0, 1, 0];
    let gv = g.vec_mul(&f, &v)?;
    let mut t = Matrix::identity(4);
    for i in 0..4 {
        // F(e_i, v) = (G v^T)_i = (v G^T)_i = -(v G)_i
        let c = f.neg(gv[i]);
        for j in 0..4 {
            t.set(i, j, f.add(t.get(i, j), f.mul(c, v[j])));
        }
    }
    mats.push(t);
    let q2 = q as u128 * q as u128;
    let order = q2 * q2 * (q2 - 1) * (q2 * q2 - 1);
    let form = BilinearForm::new(FormKind::Symplectic, g);
    entry(format!("Sp4({q})"), f, 4, mats, Some(form), order)
}

fn su3_order(s: u32) -> u128 {
    let s = s as u128;
    s.pow(3) * (s * s - 1) * (s.pow(3) + 1)
}

fn su3_fixture(s: u32) -> Result<(Field, Vec<Matrix>)> {
    let text = match s {
        2 => SU3_S2,
        3 => SU3_S3,
        _ => return Err(unsupported("SU3", format!("no generator fixture for s = {s}"))),
    };
    load_matrices(text)
}

/// SU3(s) on V3(s^2) for the identity Hermitian Gram matrix.
pub fn su3(s: u32) -> Result<AtlasEntry> {
    let (f, mats) = su3_fixture(s)?;
    let form = BilinearForm::new(FormKind::Hermitian, Matrix::identity(3));
    entry(format!("SU3({s})"), f, 3, mats, Some(form), su3_order(s))
}

fn frobenius_map(space: &Space, power: u32) -> Result<LinMap> {
    let f = space.field().clone();
    LinMap::from_additive(space, |v| v.iter().map(|&x| f.frobenius_power(x, power)).collect())
}

/// `SU3(s) x <-1>` extended by the involutory field automorphism; with
/// `similitudes` the full scalar group `GF(s^2)^*` is added instead of `<-1>`.
pub fn su3_extended(s: u32, similitudes: bool) -> Result<AtlasEntry> {
    let base = su3(s)?;
    let f = base.field.clone();
    let space = base.group.space.clone();
    let h = f.h();
    let scalar = if similitudes { f.primitive_elem() } else { f.neg(1) };
    let smat = Matrix::diag(&[scalar; 3]);
    let mut mats = base.matrices.clone();
    mats.push(smat.clone());
    let mut gens = base.group.gens.clone();
    gens.push(AffineMap::linear(LinMap::from_matrix(&space, &smat)?));
    gens.push(AffineMap::linear(frobenius_map(&space, h / 2)?));
    let q = f.order() as u128;
    let scalars = if similitudes { q - 1 } else { 2 };
    let centre = scalar_meet_su3(&f, scalar);
    let order = su3_order(s) * scalars / centre * 2;
    let name = if similitudes { format!("SU3({s})-sim") } else { format!("SU3({s})-ext") };
    Ok(AtlasEntry {
        name: name.clone(),
        field: f,
        matrices: mats,
        form: base.form,
        group: GenGroup::new(name, space, gens).with_order(order),
    })
}

/// Size of `<c I> ∩ SU3`, i.e. powers `c^k` with `c^{3k} = 1` and `c^{k(s+1)} = 1`.
fn scalar_meet_su3(f: &FieldSpec, c: Elem) -> u128 {
    let sub = f.h() / 2;
    let mut count = 0;
    let mut x = 1;
    loop {
        let det = f.pw(x, 3);
        let norm = f.norm(x, sub).expect("subfield of half degree");
        if det == 1 && norm == 1 {
            count += 1;
        }
        x = f.mul(x, c);
        if x == 1 {
            break;
        }
    }
    count
}

/// `phi(l, w)` of the Suzuki group, acting on row vectors.
pub fn suzuki_phi(f: &FieldSpec, l: Elem, w: Elem) -> Result<Matrix> {
    let sg = |x| f.suzuki_sigma(x);
    let ls = sg(l)?;
    let l1s = f.mul(l, ls);
    let l2s = f.mul(l, l1s);
    let rows = vec![
        vec![1, 0, 0, 0],
        vec![l, 1, 0, 0],
        vec![f.add(l1s, w), ls, 1, 0],
        vec![f.add(f.add(l2s, f.mul(l, w)), sg(w)?), w, l, 1],
    ];
    Matrix::from_rows(&rows)
}

/// `psi(m) = diag(m^{2+σ}, m^σ, m^{-σ}, m^{-σ-2})`.
pub fn suzuki_psi(f: &FieldSpec, m: Elem) -> Result<Matrix> {
    let s = f.suzuki_exponent()?;
    if m == 0 {
        return Err(Error::ZeroInverse);
    }
    Ok(Matrix::diag(&[f.pw(m, 2 + s), f.pw(m, s), f.pw(m, -s), f.pw(m, -s - 2)]))
}

/// The involution swapping `e1 <-> e4` and `e2 <-> e3`.
pub fn suzuki_involution() -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    for i in 0..4 {
        m.set(i, 3 - i, 1);
    }
    m
}

/// Sz(q) on V4(q): `phi(l, 0)`, `phi(0, w)` over a GF(2)-basis, `psi(ω)` and the involution.
pub fn suzuki(q: u32) -> Result<AtlasEntry> {
    let f = field_of_order("Sz", q)?;
    f.suzuki_exponent().map_err(|_| unsupported("Sz", format!("q = {q} is not an odd power of 2")))?;
    if f.h() < 3 {
        return Err(unsupported("Sz", "need q = 2^(2e+1) with e >= 1"));
    }
    let mut mats = Vec::new();
    for j in 0..f.h() {
        mats.push(suzuki_phi(&f, 1 << j, 0)?);
    }
    for j in 0..f.h() {
        mats.push(suzuki_phi(&f, 0, 1 << j)?);
    }
    mats.push(suzuki_psi(&f, f.primitive_elem())?);
    mats.push(suzuki_involution());
    let q = q as u128;
    let order = q * q * (q * q + 1) * (q - 1);
    entry(format!("Sz({q})"), f, 4, mats, None, order)
}

/// The five matrices of the SL2(5) example over GF(3).
#[derive(Debug, Clone)]
pub struct Ex3Matrices {
    pub alpha: Matrix,
    pub beta: Matrix,
    pub gamma: Matrix,
    pub delta: Matrix,
    pub psi: Matrix,
}

pub fn ex3_matrices() -> Result<(Field, Ex3Matrices)> {
    let (f, m) = load_matrices(EX3)?;
    let [alpha, beta, gamma, delta, psi]: [Matrix; 5] =
        m.try_into().map_err(|_| Error::Parse("Ex3 fixture needs five matrices".into()))?;
    Ok((f, Ex3Matrices { alpha, beta, gamma, delta, psi }))
}

/// Gram matrix of `F(X,Y) = -X1Y2 + X2Y1 - X3Y4 + X4Y3`.
pub fn ex3_form(f: &FieldSpec) -> BilinearForm {
    let mut g = Matrix::zeros(4, 4);
    let m1 = f.neg(1);
    g.set(0, 1, m1);
    g.set(1, 0, 1);
    g.set(2, 3, m1);
    g.set(3, 2, 1);
    BilinearForm::new(FormKind::Symplectic, g)
}

/// The word `α³βα³β²α³βα³β²αβ`.
pub fn ex3_gamma_word(f: &FieldSpec, m: &Ex3Matrices) -> Result<Matrix> {
    let a3 = m.alpha.pow(f, 3)?;
    let b2 = m.beta.pow(f, 2)?;
    let word = [&a3, &m.beta, &a3, &b2, &a3, &m.beta, &a3, &b2, &m.alpha, &m.beta];
    word.iter().try_fold(Matrix::identity(4), |acc, x| acc.mul(f, x))
}

/// `H0 = <α, β>` of order 120, optionally extended by `δ` (240) and `ψ` (480).
pub fn ex3_group(delta: bool, psi: bool) -> Result<AtlasEntry> {
    let (f, m) = ex3_matrices()?;
    let mut mats = vec![m.alpha.clone(), m.beta.clone()];
    let mut order = 120;
    let mut name = "Ex3-SL2(5)".to_string();
    if delta {
        mats.push(m.delta.clone());
        order *= 2;
        name.push_str(".2");
    }
    if psi {
        if !delta {
            return Err(unsupported("Ex3-SL2(5)", "psi is only added on top of delta"));
        }
        mats.push(m.psi.clone());
        order *= 2;
        name.push_str(".2");
    }
    let form = ex3_form(&f);
    entry(name, f, 4, mats, Some(form), order)
}

/// `<ω^c, ω^e α^s>` inside ΓL1(p^{2m}), viewed on V_{2m}(p).
pub fn gamma_l1_subgroup(p: u32, two_m: u32, c: u32, e: u32, s: u32) -> Result<AtlasEntry> {
    let fam = "GammaL1-subgroup";
    let f = make_field(p, two_m).map_err(|err| unsupported(fam, err.to_string()))?;
    let n1 = f.order() as u64 - 1;
    if c == 0 || n1 % c as u64 != 0 || s == 0 || two_m % s != 0 {
        return Err(unsupported(fam, "need c | p^{2m}-1 and s | 2m"));
    }
    // (ω^e α^s)^{2m/s} = ω^{e (p^{2m}-1)/(p^s-1)} must lie in <ω^c>
    let ps = (p as u64).pow(s) - 1;
    if (e as u64 * (n1 / ps)) % c as u64 != 0 {
        return Err(unsupported(fam, "the semilinear generator's power leaves <ω^c>"));
    }
    let space = Space::new(f.clone(), 1)?;
    let wc = f.exp(c as i64);
    let we = f.exp(e as i64);
    let mul = LinMap::from_matrix(&space, &Matrix::diag(&[wc]))?;
    let semi = LinMap::from_additive(&space, |v| vec![f.mul(we, f.frobenius_power(v[0], s))])?;
    let order = (n1 / c as u64) as u128 * (two_m / s) as u128;
    let name = format!("GammaL1({p}^{two_m};c={c},e={e},s={s})");
    let group = GenGroup::from_linear(name.clone(), space, vec![mul, semi])
        .with_order(order)
        .over_prime_field()?;
    Ok(AtlasEntry { name, field: f, matrices: Vec::new(), form: None, group })
}

/// SU3(2) on V3(4), blown down to V6(2).
pub fn su3_2_on_v6_2() -> Result<AtlasEntry> {
    let mut e = su3(2)?;
    e.name = "SU3(2)-on-V6(2)".into();
    e.group.name = e.name.clone();
    e.group = e.group.over_prime_field()?;
    Ok(e)
}

/// SU3(2) with `diag(ω,1,1)` and the GF(4) Frobenius, order 1296, on V6(2).
pub fn gamma_u3_2_on_v6_2() -> Result<AtlasEntry> {
    let base = su3(2)?;
    let f = base.field.clone();
    let space = base.group.space.clone();
    let d = Matrix::diag(&[f.primitive_elem(), 1, 1]);
    let mut gens = base.group.gens.clone();
    gens.push(AffineMap::linear(LinMap::from_matrix(&space, &d)?));
    gens.push(AffineMap::linear(frobenius_map(&space, 1)?));
    let mut mats = base.matrices.clone();
    mats.push(d);
    let name = "GammaU3(2)-on-V6(2)".to_string();
    let group = GenGroup::new(name.clone(), space, gens).with_order(1296).over_prime_field()?;
    Ok(AtlasEntry { name, field: f, matrices: mats, form: base.form, group })
}

/// `SU3(2):<φ diag(ω^i, 1, 1)>` for the GF(4) Frobenius `φ`, order 432, on V6(2).
pub fn su3_2_ext_on_v6_2(i: u32) -> Result<AtlasEntry> {
    let base = su3(2)?;
    let f = base.field.clone();
    let space = base.group.space.clone();
    let d = Matrix::diag(&[f.pw(f.primitive_elem(), i as i64), 1, 1]);
    let g = frobenius_map(&space, 1)?.then(&space, &LinMap::from_matrix(&space, &d)?);
    let name = format!("SU3(2):2-on-V6(2)[i={i}]");
    let group = base
        .group
        .clone()
        .extend(name.clone(), vec![AffineMap::linear(g)], Some(432))
        .over_prime_field()?;
    Ok(AtlasEntry { name, field: f, matrices: base.matrices, form: base.form, group })
}

/// `3^(1+2):Z8`: the 3-elements of SU3(2) with the first element of order 8
/// of `SU3(2):2[i]`, on V6(2).
pub fn heisenberg_z8_on_v6_2(i: u32) -> Result<AtlasEntry> {
    let su = su3_2_on_v6_2()?;
    let ext = su3_2_ext_on_v6_2(i)?;
    let s = su.group.space.clone();
    let threes: Vec<LinMap> = enumerate_elements(&su.group, 1 << 12)?
        .elems
        .into_iter()
        .filter(|a| a.order(&s, 3) == Some(3))
        .map(|a| a.lin)
        .collect();
    let mut gens = greedy_generators(&s, &threes);
    let mut ext_elems = enumerate_elements(&ext.group, 1 << 12)?.elems;
    ext_elems.sort();
    let eight = ext_elems
        .into_iter()
        .find(|a| a.order(&s, 8) == Some(8))
        .ok_or_else(|| unsupported("3^(1+2):Z8", "no element of order 8"))?;
    gens.push(eight.lin);
    let name = format!("3^(1+2):Z8-on-V6(2)[i={i}]");
    let group = GenGroup::from_linear(name.clone(), s, gens).with_order(216);
    Ok(AtlasEntry { name, field: su.field, matrices: Vec::new(), form: None, group })
}

/// `T:G0`: the linear generators plus the prime-basis translations.
pub fn affine_closure(g0: &GenGroup) -> Result<GenGroup> {
    if !g0.is_linear() {
        return Err(Error::Precondition("affine closure of a group with translation parts".into()));
    }
    let s = &g0.space;
    let mut gens: Vec<AffineMap> = (0..s.dim()).map(|k| AffineMap::translation(s, s.basis_point(k))).collect();
    gens.extend(g0.gens.iter().cloned());
    Ok(GenGroup {
        name: format!("T:{}", g0.name),
        space: s.clone(),
        gens,
        known_order: g0.known_order.map(|o| o * s.size() as u128),
    })
}

/// The translation group alone.
pub fn translations(space: &std::sync::Arc<Space>) -> GenGroup {
    let gens = (0..space.dim()).map(|k| AffineMap::translation(space, space.basis_point(k))).collect();
    GenGroup::new("T", space.clone(), gens).with_order(space.size() as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_elements, orbit, point_orbits, OnPoints};
    use crate::linalg::invariant_bilinear_forms;
    use std::sync::Arc;

    fn enum_order(g: &GenGroup) -> u128 {
        enumerate_elements(g, 1 << 22).unwrap().len() as u128
    }

    fn preserves_form(e: &AtlasEntry) -> bool {
        let Some(form) = &e.form else { return true };
        let sols = invariant_bilinear_forms(&e.field, &e.matrices, form.kind).unwrap();
        // the declared Gram matrix must be in the span of the solutions; for a
        // one-dimensional solution space compare up to a scalar
        sols.len() == 1 && {
            let g = &sols[0].gram;
            let f = &e.field;
            let (i, j) = (0..g.rows())
                .flat_map(|i| (0..g.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| g.get(i, j) != 0)
                .unwrap();
            let c = f.div(form.gram.get(i, j), g.get(i, j)).unwrap();
            g.scale(f, c) == form.gram
        }
    }

    #[test]
    fn classical_orders() {
        for q in [2, 3, 4, 5, 8, 9] {
            let e = sl2(q).unwrap();
            assert_eq!(enum_order(&e.group), e.group.known_order.unwrap(), "SL2({q})");
            assert!(preserves_form(&e));
        }
        for q in [2, 3] {
            let e = sp4(q).unwrap();
            assert_eq!(enum_order(&e.group), e.group.known_order.unwrap(), "Sp4({q})");
            assert!(preserves_form(&e));
        }
        assert_eq!(sp4(2).unwrap().group.known_order, Some(720));
        for s in [2, 3] {
            let e = su3(s).unwrap();
            assert_eq!(enum_order(&e.group), su3_order(s));
            assert!(preserves_form(&e));
            for m in &e.matrices {
                assert_eq!(m.det(&e.field).unwrap(), 1);
            }
        }
    }

    #[test]
    fn sl2_4_example() {
        let g = atlas("SL2", &AtlasParams::q(4)).unwrap();
        assert_eq!(enum_order(&g), 60);
        let t = affine_closure(&g).unwrap();
        assert_eq!(t.known_order, Some(960));
        assert_eq!(enum_order(&t), 960);
        let tt = translations(&g.space);
        assert_eq!(enum_order(&tt), 16);
        let perms = Arc::new(tt.perms());
        assert_eq!(orbit(&OnPoints { perms }, 0, 100).unwrap().len(), 16);
    }

    #[test]
    fn su3_extensions() {
        let e = su3_extended(3, false).unwrap();
        assert_eq!(e.group.known_order, Some(6048 * 4));
        assert_eq!(enum_order(&e.group), 6048 * 4);
        let e = su3_extended(2, true).unwrap();
        // ω I has det 1 and norm 1 in GF(4), so it lies in SU3(2)
        assert_eq!(enum_order(&e.group), e.group.known_order.unwrap());
    }

    #[test]
    fn suzuki_8() {
        let e = suzuki(8).unwrap();
        assert_eq!(e.group.known_order, Some(29120));
        assert_eq!(enum_order(&e.group), 29120);
        let f = &e.field;
        let s = &e.group.space;
        let u: Vec<Matrix> = e.matrices[..6].to_vec();
        let gu = GenGroup::from_matrices("U", s.clone(), &u).unwrap();
        assert_eq!(enum_order(&gu), 64);
        let k = GenGroup::from_matrices("K", s.clone(), &e.matrices[6..7]).unwrap();
        assert_eq!(enum_order(&k), 7);
        let phi = suzuki_involution();
        assert_eq!(phi.mul(f, &phi).unwrap(), Matrix::identity(4));
        let psi = suzuki_psi(f, f.primitive_elem()).unwrap();
        let conj = phi.mul(f, &psi).unwrap().mul(f, &phi).unwrap();
        let kel = enumerate_elements(&k, 100).unwrap();
        let c = LinMap::from_matrix(s, &conj).unwrap();
        assert!(kel.contains(&AffineMap::linear(c)));
        assert!(suzuki(2).is_err());
        assert!(suzuki(4).is_err());
    }

    #[test]
    fn ex3_relations() {
        let (f, m) = ex3_matrices().unwrap();
        let id = Matrix::identity(4);
        assert_eq!(m.alpha.pow(&f, 4).unwrap(), id);
        assert_eq!(m.beta.pow(&f, 3).unwrap(), id);
        assert_eq!(m.alpha.mul(&f, &m.beta).unwrap().pow(&f, 5).unwrap(), id);
        let a2 = m.alpha.pow(&f, 2).unwrap();
        assert_eq!(a2.mul(&f, &m.beta).unwrap(), m.beta.mul(&f, &a2).unwrap());
        assert_eq!(ex3_gamma_word(&f, &m).unwrap(), m.gamma);
        assert_eq!(m.psi.pow(&f, 2).unwrap(), id);
        for (d, p, order) in [(false, false, 120), (true, false, 240), (true, true, 480)] {
            let e = ex3_group(d, p).unwrap();
            assert_eq!(enum_order(&e.group), order);
        }
        // H0 and H0<δ> preserve F exactly; ψ is a similitude
        let e = ex3_group(true, false).unwrap();
        assert!(preserves_form(&e));
        assert_eq!(affine_closure(&ex3_group(false, false).unwrap().group).unwrap().known_order, Some(9720));
    }

    #[test]
    fn gamma_l1_d18() {
        let p = AtlasParams::parse("p=2,2m=6,c=7,e=0,s=3").unwrap();
        let e = atlas_entry("GammaL1-subgroup", &p).unwrap();
        assert_eq!(e.group.known_order, Some(18));
        let el = enumerate_elements(&e.group, 100).unwrap();
        assert_eq!(el.len(), 18);
        // dihedral: the semilinear generator inverts the rotation
        let s = &e.group.space;
        let (r, t) = (&e.group.gens[0], &e.group.gens[1]);
        assert_eq!(r.order(s, 100), Some(9));
        assert_eq!(t.order(s, 100), Some(2));
        let lhs = t.then(s, r).then(s, t);
        assert_eq!(lhs.then(s, r), AffineMap::identity(s));
        assert!(gamma_l1_subgroup(2, 6, 5, 0, 3).is_err());
        for (c, e_, s_) in [(1, 0, 1), (3, 1, 2), (9, 0, 6)] {
            let g = gamma_l1_subgroup(2, 6, c, e_, s_).unwrap().group;
            assert_eq!(enum_order(&g), g.known_order.unwrap());
        }
    }

    #[test]
    fn unitary_on_v6_2() {
        let su = su3_2_on_v6_2().unwrap();
        assert_eq!(su.group.space.n(), 6);
        assert_eq!(enum_order(&su.group), 216);
        let g = gamma_u3_2_on_v6_2().unwrap();
        assert_eq!(enum_order(&g.group), 1296);
        let orbs = point_orbits(&g.group.perms(), 64);
        assert!(orbs.iter().skip(1).any(|o| o.len() % 9 == 0));
    }

    #[test]
    fn dispatcher() {
        assert!(atlas_by_spec("Sz:q=8").is_ok());
        assert!(atlas_by_spec("Ex3-SL2(5)").is_ok());
        assert_eq!(atlas_by_spec("SU3(2):2-on-V6(2):i=1").unwrap().name, "SU3(2):2-on-V6(2)[i=1]");
        assert_eq!(atlas_by_spec("SU3(2):2-on-V6(2)").unwrap().name, "SU3(2):2-on-V6(2)[i=0]");
        assert!(atlas_by_spec("Nope").is_err());
        assert!(atlas_by_spec("SL2").is_err());
        assert!(atlas_by_spec("SU3:s=7").is_err());
    }
}
