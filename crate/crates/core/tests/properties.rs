//! Randomised invariants for the exact-arithmetic layer and the group code.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use anharmonia::algebra::poly::pth_root_generic;
use anharmonia::algebra::ring::{qi, Ring, Q};
use anharmonia::algebra::{cyc_embed, poly_resultant, Cyclotomic, Poly};
use anharmonia::mobius::{cross_ratio, group_catalog, orbit, GroupKind, MobiusMap, Point};
use anharmonia::qseries::FracSeries;

fn poly_q(max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| Poly::new(c.into_iter().map(qi).collect()))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
    poly_q(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn monic(min_deg: usize, max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
    prop::collection::vec(-5i64..=5, min_deg..=max_deg).prop_map(|mut c| {
        c.push(1);
        Poly::new(c.into_iter().map(qi).collect())
    })
}

fn cyc(n: u32) -> impl Strategy<Value = Cyclotomic> {
    let phi = anharmonia::algebra::cyclotomic::euler_phi(n);
    prop::collection::vec((-9i64..=9, 1i64..=4), phi)
        .prop_map(move |c| Cyclotomic::new(n, c.into_iter().map(|(a, b)| Q::new(a.into(), b.into())).collect()))
}

fn rational_point() -> impl Strategy<Value = Point> {
    prop_oneof![
        1 => Just(Point::Infinity),
        8 => (-20i64..=20, 1i64..=7).prop_map(|(a, b)| Point::Finite(Cyclotomic::rational(Q::new(a.into(), b.into())))),
    ]
}

fn small(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both(a in nonzero_poly(5), b in nonzero_poly(5), c in nonzero_poly(3)) {
        let (a, b) = (a.times(&c), b.times(&c));
        let g = a.gcd(&b);
        prop_assert!(a.divrem(&g).unwrap().1.is_zero());
        prop_assert!(b.divrem(&g).unwrap().1.is_zero());
        // c divides both, so it divides the gcd
        prop_assert!(g.divrem(&c).unwrap().1.is_zero());
    }

    #[test]
    fn resultant_is_multiplicative(f in nonzero_poly(3), g in nonzero_poly(3), h in nonzero_poly(3)) {
        let lhs = poly_resultant(&f.times(&g), &h).unwrap();
        let rhs = poly_resultant(&f, &h).unwrap().times(&poly_resultant(&g, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_with_linear_is_evaluation(a in -8i64..=8, q in nonzero_poly(5)) {
        let lin = Poly::new(vec![qi(-a), qi(1)]);
        prop_assert_eq!(poly_resultant(&lin, &q).unwrap(), q.eval(&qi(a)));
    }

    #[test]
    fn pth_root_inverts_power(p in monic(0, 4), k in 2u32..=4) {
        prop_assert_eq!(pth_root_generic(&p.power(k), k).unwrap(), p);
    }

    // r^k - p^k has degree at least deg p, so a constant shift is never a power
    #[test]
    fn pth_root_rejects_perturbed_power(p in monic(1, 3), k in 2u32..=3, e in 1i64..=5) {
        let bumped = p.power(k).plus(&Poly::new(vec![qi(e)]));
        if let Ok(r) = pth_root_generic(&bumped, k) {
            prop_assert_ne!(r.power(k), bumped);
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism(a in cyc(15), b in cyc(15)) {
        let digits = 30;
        let tol = 1e-25;
        let (ea, eb) = (cyc_embed(&a, digits), cyc_embed(&b, digits));
        prop_assert!(small(&cyc_embed(&a.times(&b), digits).dist_inf(&ea.mul(&eb))) < tol);
        prop_assert!(small(&cyc_embed(&a.plus(&b), digits).dist_inf(&ea.add(&eb))) < tol);
    }

    #[test]
    fn series_inverse_times_self_is_one(c in prop::collection::vec(-7i64..=7, 8), lead in 1i64..=5) {
        let mut coeffs = vec![lead];
        coeffs.extend(c);
        let f = FracSeries::from_ints(1, 0, &coeffs, 12);
        let prod = f.mul(&f.inv().unwrap());
        prop_assert_eq!(prod.first_difference(&FracSeries::one(1, prod.order())), None);
    }

    #[test]
    fn series_product_is_associative(
        a in prop::collection::vec(-5i64..=5, 6),
        b in prop::collection::vec(-5i64..=5, 6),
        c in prop::collection::vec(-5i64..=5, 6),
    ) {
        let s = |v: &[i64]| FracSeries::from_ints(1, 0, v, 10);
        let (a, b, c) = (s(&a), s(&b), s(&c));
        prop_assert_eq!(a.mul(&b).mul(&c).first_difference(&a.mul(&b.mul(&c))), None);
    }

    #[test]
    fn cross_ratio_is_mobius_invariant(
        pts in prop::collection::vec(rational_point(), 4),
        m in prop::array::uniform4(-5i64..=5),
    ) {
        let [a, b, c, d] = m;
        prop_assume!(a * d - b * c != 0);
        let Ok(before) = cross_ratio([&pts[0], &pts[1], &pts[2], &pts[3]]) else { return Ok(()) };
        let g = MobiusMap::new(qi_c(a), qi_c(b), qi_c(c), qi_c(d)).unwrap();
        let img: Vec<Point> = pts.iter().map(|p| g.apply(p)).collect();
        prop_assert_eq!(cross_ratio([&img[0], &img[1], &img[2], &img[3]]).unwrap(), before);
    }

    #[test]
    fn orbit_stabilizer(kind in prop_oneof![
        (2u32..=6).prop_map(GroupKind::Cyclic),
        (2u32..=5).prop_map(GroupKind::Dihedral),
        Just(GroupKind::Tetrahedral),
        Just(GroupKind::Octahedral),
    ], p in prop_oneof![
        3 => rational_point(),
        1 => Just(Point::int(0)),
        1 => Just(Point::int(1)),
    ]) {
        let g = group_catalog(kind).unwrap();
        prop_assert_eq!(orbit(&p, &g).len() * g.stabilizer(&p).len(), g.order());
    }
}

fn qi_c(n: i64) -> Cyclotomic {
    Cyclotomic::from_int(n)
}
