//! Regenerates the SU3(s) generator fixtures: draws seeded random unitary
//! matrices of determinant 1 for the identity Hermitian form until they
//! generate a group of order s^3 (s^2 - 1)(s^3 + 1).
//!
//! Usage: cargo run --example su3_fixture -- 3 > data/atlas/su3/s3.txt

use ftdesign::group::{enumerate_elements, GenGroup};
use ftdesign::linalg::{evaluate_form, BilinearForm, FormKind, Matrix};
use ftdesign::{make_field, Elem, Space};
use rand::{Rng, SeedableRng};

fn main() {
    let s: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let (p, h) = match s {
        2 => (2, 2),
        3 => (3, 2),
        4 => (2, 4),
        5 => (5, 2),
        _ => panic!("unsupported s"),
    };
    let f = make_field(p, h).unwrap();
    let space = Space::new(f.clone(), 3).unwrap();
    let form = BilinearForm::new(FormKind::Hermitian, Matrix::identity(3));
    let order = (s as u128).pow(3) * (s as u128 * s as u128 - 1) * ((s as u128).pow(3) + 1);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5u64 * s as u64);
    let ev = |u: &[Elem], v: &[Elem]| evaluate_form(&f, &form, u, v).unwrap();
    let mut gens: Vec<Matrix> = Vec::new();
    loop {
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        while rows.len() < 3 {
            let v: Vec<Elem> = (0..3).map(|_| rng.gen_range(0..f.order())).collect();
            if ev(&v, &v) == 1 && rows.iter().all(|r| ev(r, &v) == 0) {
                rows.push(v);
            }
        }
        let m = Matrix::from_rows(&rows).unwrap();
        let d = m.det(&f).unwrap();
        let dinv = f.inv(d).unwrap();
        let mut rows = rows;
        rows[2] = rows[2].iter().map(|&x| f.mul(x, dinv)).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        assert_eq!(m.det(&f).unwrap(), 1);
        gens.push(m);
        let g = GenGroup::from_matrices("SU3", space.clone(), &gens).unwrap();
        let n = enumerate_elements(&g, 1 << 22).unwrap().len() as u128;
        if n == order {
            break;
        }
        if n < order && gens.len() > 1 {
            // keep only generators that enlarge the group
            let prev = GenGroup::from_matrices("SU3", space.clone(), &gens[..gens.len() - 1]).unwrap();
            if enumerate_elements(&prev, 1 << 22).unwrap().len() as u128 == n {
                gens.pop();
            }
        }
    }
    println!("# SU3({s}) for the identity Hermitian form over GF({}), rows act on the right", f.order());
    for g in &gens {
        println!("{}", g.to_fixture(f.order()));
    }
}
