use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{prime, Matrix, Subspace};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::space::Space;

/// Vector count above which isotropic enumeration refuses to run.
pub const ISOTROPIC_CAP: u32 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Symplectic,
    Hermitian,
    Bilinear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub kind: FormKind,
    pub gram: Matrix,
}

impl BilinearForm {
    pub fn new(kind: FormKind, gram: Matrix) -> Self {
        BilinearForm { kind, gram }
    }

    /// Checks the structural constraint of the declared kind.
    pub fn is_well_formed(&self, f: &FieldSpec) -> bool {
        let g = &self.gram;
        let n = g.rows();
        if !g.is_square() {
            return false;
        }
        match self.kind {
            FormKind::Bilinear => true,
            FormKind::Symplectic => (0..n).all(|i| {
                g.get(i, i) == 0 && (0..n).all(|j| g.get(i, j) == f.neg(g.get(j, i)))
            }),
            FormKind::Hermitian => {
                f.h() % 2 == 0
                    && (0..n).all(|i| {
                        (0..n).all(|j| g.get(i, j) == f.frobenius_power(g.get(j, i), f.h() / 2))
                    })
            }
        }
    }
}

fn conj(f: &FieldSpec, kind: FormKind, x: Elem) -> Elem {
    match kind {
        FormKind::Hermitian => f.frobenius_power(x, f.h() / 2),
        _ => x,
    }
}

/// `u G v^T`, with `v` conjugated for Hermitian forms.
pub fn evaluate_form(f: &FieldSpec, form: &BilinearForm, u: &[Elem], v: &[Elem]) -> Result<Elem> {
    let n = form.gram.rows();
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len().min(v.len()) });
    }
    let mut acc = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            let t = f.mul(form.gram.get(i, j), conj(f, form.kind, vj));
            acc = f.add(acc, f.mul(ui, t));
        }
    }
    Ok(acc)
}

/// `A G A^T` (or `A G conj(A)^T`).
fn transform(f: &FieldSpec, kind: FormKind, a: &Matrix, g: &Matrix) -> Matrix {
    let at = match kind {
        FormKind::Hermitian => a.frobenius(f, f.h() / 2).transpose(),
        _ => a.transpose(),
    };
    a.mul(f, g).and_then(|m| m.mul(f, &at)).expect("square matrices of equal size")
}

/// Gram matrices `G` with `A G A^T = G` for every generator, solved as a linear
/// system over GF(p) and restricted to the requested kind. The result is a
/// basis over GF(q) (over the fixed field of the involution for Hermitian forms).
pub fn invariant_bilinear_forms(
    f: &FieldSpec,
    gens: &[Matrix],
    kind: FormKind,
) -> Result<Vec<BilinearForm>> {
    let Some(first) = gens.first() else { return Ok(Vec::new()) };
    let n = first.rows();
    for a in gens {
        if !a.is_square() || a.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.rows() });
        }
        if !a.is_invertible(f) {
            return Err(Error::Singular);
        }
    }
    if kind == FormKind::Hermitian && f.h() % 2 != 0 {
        return Ok(Vec::new());
    }
    let h = f.h() as usize;
    let p = f.p();
    let nv = n * n * h;
    // Column j of the constraint map: the image of the j-th GF(p)-basis Gram.
    let unit = |j: usize| -> Matrix {
        let mut g = Matrix::zeros(n, n);
        let cell = j / h;
        g.set(cell / n, cell % n, p.pow((j % h) as u32));
        g
    };
    let constraints = |g: &Matrix| -> Vec<Elem> {
        let mut out = Vec::new();
        for a in gens {
            let t = transform(f, kind, a, g);
            out.extend(t.entries().iter().zip(g.entries()).map(|(&x, &y)| f.sub(x, y)));
        }
        match kind {
            FormKind::Bilinear => {}
            FormKind::Symplectic => {
                for i in 0..n {
                    for j in 0..n {
                        out.push(f.add(g.get(i, j), g.get(j, i)));
                    }
                    out.push(g.get(i, i));
                }
            }
            FormKind::Hermitian => {
                for i in 0..n {
                    for j in 0..n {
                        out.push(f.sub(g.get(i, j), f.frobenius_power(g.get(j, i), f.h() / 2)));
                    }
                }
            }
        }
        out
    };
    let cols: Vec<Vec<u32>> = (0..nv)
        .map(|j| constraints(&unit(j)).iter().flat_map(|&x| f.coords(x)).collect())
        .collect();
    let nrows = cols[0].len();
    let rows: Vec<Vec<u32>> = (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let null = prime::nullspace(rows, nv, p);

    let to_gram = |x: &[u32]| -> Matrix {
        let data = (0..n * n).map(|c| f.from_coords(&x[c * h..(c + 1) * h])).collect();
        Matrix::new(n, n, data).expect("n*n entries")
    };
    // Thin the GF(p)-solutions to a basis over the scalar field of the kind.
    let scalar_degree = match kind {
        FormKind::Hermitian => f.h() / 2,
        _ => f.h(),
    };
    let scalars = f.subfield_basis(scalar_degree)?;
    let digits = |g: &Matrix| -> Vec<u32> { g.entries().iter().flat_map(|&x| f.coords(x)).collect() };
    let mut span: Vec<Vec<u32>> = Vec::new();
    let mut out = Vec::new();
    for x in &null {
        let g = to_gram(x);
        let mut trial = span.clone();
        trial.push(digits(&g));
        if prime::rref(&mut trial, p).len() == span.len() {
            continue;
        }
        for &c in &scalars {
            span.push(digits(&g.scale(f, c)));
        }
        prime::rref(&mut span, p);
        out.push(BilinearForm::new(kind, g));
    }
    Ok(out)
}

/// All totally isotropic `d`-dimensional GF(q)-subspaces, canonical and sorted.
pub fn enumerate_isotropic(space: &Space, form: &BilinearForm, d: usize) -> Result<Vec<Subspace>> {
    if space.size() > ISOTROPIC_CAP {
        return Err(Error::CapExceeded {
            what: "isotropic enumeration".into(),
            size: space.size() as u128,
            cap: ISOTROPIC_CAP as u128,
        });
    }
    let f = space.field();
    let vecs: Vec<Vec<Elem>> = space.points().map(|x| space.vector(x)).collect();
    let pair = |a: u32, b: u32| -> Result<bool> {
        Ok(evaluate_form(f, form, &vecs[a as usize], &vecs[b as usize])? == 0)
    };
    let self_iso: Vec<bool> = space
        .points()
        .map(|x| pair(x, x))
        .collect::<Result<_>>()?;
    let h = f.h();
    let mut level: Vec<(Subspace, Vec<u32>)> = vec![(Subspace::zero(), Vec::new())];
    for _ in 0..d {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (s, gens) in &level {
            for x in space.points().skip(1) {
                if !self_iso[x as usize] || s.contains(space, x) {
                    continue;
                }
                let mut ok = true;
                for &g in gens {
                    if !pair(x, g)? || !pair(g, x)? {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let mut gx = gens.clone();
                gx.push(x);
                let t = canonical_subspace_points(space, &gx, h)?;
                if seen.insert(t.clone()) {
                    next.push((t, gx));
                }
            }
        }
        level = next;
    }
    let mut out: Vec<Subspace> = level.into_iter().map(|(s, _)| s).collect();
    out.sort();
    Ok(out)
}

fn canonical_subspace_points(space: &Space, pts: &[u32], deg: u32) -> Result<Subspace> {
    let vs: Vec<Vec<Elem>> = pts.iter().map(|&x| space.vector(x)).collect();
    super::canonical_subspace(space, &vs, deg)
}
