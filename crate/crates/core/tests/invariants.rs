use proptest::prelude::*;

use ftdesign::atlas::{affine_closure, sp4};
use ftdesign::autsearch::{linear_blockset_stabilizer, BlockSet};
use ftdesign::catalog::ExpectedParams;
use ftdesign::design::{build_design, verify_2design, DesignParams, VerifyMode};
use ftdesign::field::primitive_part;
use ftdesign::linalg::Subspace;
use ftdesign::{make_field, Space};

const FIELDS: [(u32, u32); 7] = [(2, 1), (2, 3), (2, 6), (3, 2), (5, 1), (7, 2), (2, 13)];

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut c = 0;
        while n % d == 0 {
            n /= d;
            c += 1;
        }
        if c > 0 {
            out.push((d, c));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn order_mod(a: u64, w: u64) -> u64 {
    let mut x = a % w;
    let mut i = 1;
    while x != 1 {
        x = x * a % w;
        i += 1;
    }
    i
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(which in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let (p, h) = FIELDS[which];
        let f = make_field(p, h).unwrap();
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != f.zero() {
            let ai = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, ai), f.one());
            prop_assert_eq!(f.pw(a, (q - 1) as i64), f.one());
            prop_assert_eq!(f.exp(f.log(a).unwrap() as i64), a);
        }
        prop_assert_eq!(f.frobenius_power(f.mul(a, b), 1), f.mul(f.frobenius_power(a, 1), f.frobenius_power(b, 1)));
    }

    #[test]
    fn design_params_identities(pi in 0usize..3, m in 1u32..5, f in 0u32..5, dt in 0u32..5) {
        let p = [2, 3, 5][pi];
        let f = f.min(m);
        let t = (m - f + dt).min(2 * m);
        let d = DesignParams::new(p, m, f, t).unwrap();
        prop_assert!(d.check());
        prop_assert_eq!(d.r * (d.k - 1), d.lambda * (d.v - 1));
        prop_assert_eq!(d.b * d.k, d.v * d.r);
        let e = ExpectedParams::new(d.v, d.k, d.lambda);
        prop_assert!(e.is_consistent());
        prop_assert_eq!((e.r, e.b), (d.r, d.b));
        let back = DesignParams::from_counts(p, d.v, d.k, d.lambda, t).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn primitive_part_matches_factorization(a in 2u64..12, e in 1u32..10) {
        let n = a.pow(e) - 1;
        let oracle: u64 = trial_factor(n)
            .into_iter()
            .filter(|&(w, _)| order_mod(a, w) == e as u64)
            .map(|(w, c)| w.pow(c))
            .product();
        prop_assert_eq!(primitive_part(a, e).unwrap(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn orbit_designs_agree_across_modes(q3 in any::<bool>(), x in 1u32..81, y in 1u32..81) {
        let q = if q3 { 3 } else { 2 };
        let e = sp4(q).unwrap();
        let g = affine_closure(&e.group).unwrap();
        let s = g.space.clone();
        let (x, y) = (x % s.size(), y % s.size());
        let b = Subspace::from_points(&s, [x, y]);
        prop_assume!(b.cardinality(&s) == q as u64 * q as u64);
        let d = build_design(&b.points(&s), &g).unwrap();
        let brute = verify_2design(&d, VerifyMode::Bruteforce, None).unwrap();
        let slice = verify_2design(&d, VerifyMode::Slice, None).unwrap();
        let orb = verify_2design(&d, VerifyMode::Orbitwise, Some(&e.group)).unwrap();
        prop_assert_eq!(brute, slice);
        prop_assert_eq!(brute, orb);
        prop_assert_eq!(d.r() as u64 * (d.k() as u64 - 1), brute * (d.v() as u64 - 1));
    }

    #[test]
    fn stabilizer_order_ignores_block_order(seed in any::<u64>()) {
        let e = sp4(2).unwrap();
        let g = affine_closure(&e.group).unwrap();
        let s = g.space.clone();
        let b = Subspace::from_points(&s, [1, 2]);
        let d = build_design(&b.points(&s), &g).unwrap();
        let blocks = d.through_zero_vec();
        let plain = linear_blockset_stabilizer(&s, &blocks, None).unwrap();
        let shuffled = linear_blockset_stabilizer(&s, &blocks, Some(seed)).unwrap();
        prop_assert_eq!(plain.order, shuffled.order);
        let set = BlockSet::new(&s, &blocks).unwrap();
        for h in &shuffled.lins {
            prop_assert!(set.is_preserved_by(h));
        }
    }
}

#[test]
fn prime_spaces_have_expected_sizes() {
    for (p, n) in [(2, 4), (3, 4), (2, 6)] {
        let s = Space::prime(p, n).unwrap();
        assert_eq!(s.size() as u64, (p as u64).pow(n as u32));
    }
}
