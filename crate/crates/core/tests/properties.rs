use proptest::prelude::*;
use spinlift::blade::BladeMask;
use spinlift::orthogonal::OrthogonalMatrix;
use spinlift::pauli::{self, GeneratorSet, Parity};
use spinlift::spin::{self, GroupTag};
use spinlift::{center_basis, classify_orthogonal, Complex64, Multivector, Signature};

fn signature(max_n: usize) -> impl Strategy<Value = Signature> {
    (1..=max_n).prop_flat_map(|n| (0..=n).prop_map(move |p| Signature::real(p, n - p).unwrap()))
}

fn sparse(sig: Signature, max_terms: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((0..sig.dim() as u32, -2.0f64..2.0), 1..=max_terms).prop_map(move |terms| {
        Multivector::from_terms(
            sig,
            terms.into_iter().map(|(m, x)| (BladeMask(m), Complex64::new(x, 0.0))),
        )
        .unwrap()
    })
}

fn triple(max_n: usize) -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    signature(max_n).prop_flat_map(|s| (sparse(s, 6), sparse(s, 6), sparse(s, 6)))
}

fn scale3(u: &Multivector, v: &Multivector, w: &Multivector) -> f64 {
    (u.norm_inf() * v.norm_inf() * w.norm_inf()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_is_associative((u, v, w) in triple(6)) {
        let d = (&(&u * &v) * &w).distance(&(&u * &(&v * &w)));
        prop_assert!(d <= 1e-10 * scale3(&u, &v, &w) * 64.0);
    }

    #[test]
    fn product_distributes((u, v, w) in triple(5)) {
        let d = (&u * &(&v + &w)).distance(&(&(&u * &v) + &(&u * &w)));
        prop_assert!(d <= 1e-12 * scale3(&u, &v, &w) * 64.0);
    }

    #[test]
    fn reversion_is_an_anti_automorphism((u, v, _) in triple(6)) {
        let d = (&u * &v).reversion().distance(&(&v.reversion() * &u.reversion()));
        prop_assert!(d <= 1e-12 * (u.norm_inf() * v.norm_inf()).max(1.0) * 64.0);
        prop_assert_eq!(u.reversion().reversion(), u.clone());
    }

    #[test]
    fn grade_involution_is_an_automorphism((u, v, _) in triple(6)) {
        let d = (&u * &v).grade_involution().distance(&(&u.grade_involution() * &v.grade_involution()));
        prop_assert!(d <= 1e-12 * (u.norm_inf() * v.norm_inf()).max(1.0) * 64.0);
        prop_assert_eq!(u.grade_involution().grade_involution(), u.clone());
    }

    #[test]
    fn trace_is_cyclic((u, v, _) in triple(6)) {
        let d = ((&u * &v).trace() - (&v * &u).trace()).norm();
        prop_assert!(d <= 1e-12 * (u.norm_inf() * v.norm_inf()).max(1.0) * 64.0);
    }

    #[test]
    fn grade_parts_recompose((u, _, _) in triple(6)) {
        let n = u.signature().n();
        let mut sum = Multivector::zero(u.signature());
        for k in 0..=n {
            sum = &sum + &u.grade_project(k).unwrap();
        }
        prop_assert_eq!(&sum, &u);
        let (even, odd) = u.parity_decompose();
        prop_assert_eq!(&even + &odd, u);
    }

    #[test]
    fn inverse_is_two_sided((u, _, _) in triple(6)) {
        if let Ok(inv) = u.inverse() {
            let one = Multivector::one(u.signature());
            let scale = (u.norm_inf() * inv.norm_inf()).max(1.0);
            prop_assert!((&u * &inv).distance(&one) <= 1e-9 * scale);
            prop_assert!((&inv * &u).distance(&one) <= 1e-9 * scale);
        }
    }

    #[test]
    fn json_round_trip((u, _, _) in triple(6)) {
        let text = spinlift::json::multivector_to_json(&u);
        prop_assert_eq!(spinlift::json::multivector_from_json(&text).unwrap(), u);
    }
}

fn versor_case(max_n: usize) -> impl Strategy<Value = (Signature, usize, u64)> {
    (signature(max_n), 0usize..=6, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 120, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn project_lift_round_trip((sig, k, seed) in versor_case(6)) {
        let t = spin::random_versor(sig, k, seed).unwrap();
        let (_, residual) = spin::round_trip(&t).unwrap();
        prop_assert!(residual <= 1e-8, "residual {residual:e}");
    }

    #[test]
    fn double_cover_is_exact((sig, k, seed) in versor_case(6)) {
        let t = spin::random_versor(sig, k, seed).unwrap();
        prop_assert_eq!(spin::project(&t).unwrap(), spin::project(&-&t).unwrap());
    }

    #[test]
    fn twisted_adjoint_composes((sig, k, seed) in versor_case(6), k2 in 0usize..=6) {
        let t1 = spin::random_versor(sig, k, seed).unwrap();
        let t2 = spin::random_versor(sig, k2, seed ^ 1).unwrap();
        let p1 = spin::project(&t1).unwrap();
        let p2 = spin::project(&t2).unwrap();
        let p12 = spin::project(&(&t1 * &t2)).unwrap();
        let scale = p1.entries().amax() * p2.entries().amax();
        prop_assert!(p12.distance(&p2.compose(&p1)) <= 1e-8 * scale.max(1.0));
    }

    #[test]
    fn lift_parity_matches_determinant((sig, k, seed) in versor_case(6)) {
        let t = spin::random_versor(sig, k, seed).unwrap();
        let p = spin::project(&t).unwrap();
        let r = spin::lift(&p).unwrap();
        let even = r.membership.parity == Parity::Even;
        prop_assert_eq!(even, p.determinant() > 0.0);
        prop_assert_eq!(r.membership.component, GroupTag::covering(classify_orthogonal(&p)));
        prop_assert_eq!(&r.t_minus, &-&r.t_plus);
        prop_assert!(r.t_plus != r.t_minus);
    }

    #[test]
    fn pseudoscalar_transforms_by_determinant((sig, k, seed) in versor_case(6)) {
        let p = spin::project(&spin::random_versor(sig, k, seed).unwrap()).unwrap();
        let betas = GeneratorSet::from_orthogonal(&p, sig).unwrap();
        let want = Multivector::pseudoscalar(sig).scale(p.determinant());
        let scale = p.entries().amax().powi(sig.n() as i32).max(1.0);
        prop_assert!(betas.volume_element().distance(&want) <= 1e-8 * scale);
    }

    #[test]
    fn even_n_intertwiners_are_unique_up_to_scale((sig, k, seed) in versor_case(4)) {
        prop_assume!(sig.n() % 2 == 0);
        let t = spin::random_versor(sig, k, seed).unwrap();
        let gammas = GeneratorSet::standard(sig);
        let inv = t.inverse().unwrap();
        let betas = GeneratorSet::new(
            sig,
            (1..=sig.n()).map(|a| &(&t * &Multivector::basis(sig, a)) * &inv).collect(),
        )
        .unwrap();
        let all = pauli::all_even_n_intertwiners(&betas, &gammas).unwrap();
        prop_assert!(!all.is_empty());
        for r in &all {
            prop_assert!(r.t.colinearity_residual(&all[0].t) <= 1e-8);
            prop_assert!(r.t.colinearity_residual(&t) <= 1e-8);
        }
    }

    #[test]
    fn odd_n_intertwiners_agree_modulo_center((sig, k, seed) in versor_case(5)) {
        prop_assume!(sig.n() % 2 == 1);
        let t = spin::random_versor(sig, k, seed).unwrap();
        let inv = t.inverse().unwrap();
        let gammas = GeneratorSet::standard(sig);
        let betas = GeneratorSet::new(
            sig,
            (1..=sig.n()).map(|a| &(&t * &Multivector::basis(sig, a)) * &inv).collect(),
        )
        .unwrap();
        let all = pauli::all_odd_n_intertwiners(&betas, &gammas).unwrap();
        prop_assert!(!all.is_empty());
        let center = center_basis(&sig);
        let first_inv = all[0].t.inverse().unwrap();
        for r in &all {
            let q = &r.t * &first_inv;
            let outside = q
                .terms()
                .iter()
                .filter(|(m, _)| !center.contains(m))
                .map(|(_, c)| c.norm())
                .fold(0.0, f64::max);
            prop_assert!(outside <= 1e-8 * q.norm_inf().max(1.0));
        }
    }
}

#[test]
fn anticommutation_is_exact_for_all_signatures() {
    for n in 1..=6 {
        for p in 0..=n {
            let sig = Signature::real(p, n - p).unwrap();
            for a in 1..=n {
                for b in 1..=n {
                    let ea = Multivector::basis(sig, a);
                    let eb = Multivector::basis(sig, b);
                    let want = if a == b { 2.0 * sig.metric(a) } else { 0.0 };
                    assert_eq!(&(&ea * &eb) + &(&eb * &ea), Multivector::scalar(sig, want));
                }
            }
        }
    }
}

#[test]
fn involutions_are_exact_on_all_blade_pairs() {
    for n in 1..=6 {
        for p in 0..=n {
            let sig = Signature::real(p, n - p).unwrap();
            for a in 0..sig.dim() as u32 {
                let u = Multivector::blade(sig, BladeMask(a));
                assert_eq!(u.reversion().reversion(), u);
                assert_eq!(u.grade_involution().grade_involution(), u);
                for b in 0..sig.dim() as u32 {
                    let v = Multivector::blade(sig, BladeMask(b));
                    assert_eq!((&u * &v).reversion(), &v.reversion() * &u.reversion());
                    assert_eq!((&u * &v).grade_involution(), &u.grade_involution() * &v.grade_involution());
                }
            }
        }
    }
}

#[test]
fn left_regular_matrix_is_injective_homomorphism() {
    let sig = Signature::real(2, 2).unwrap();
    for seed in 0..20u64 {
        let u = spin::random_versor(sig, 3, seed).unwrap();
        let v = &spin::random_versor(sig, 2, seed + 100).unwrap() + &Multivector::scalar(sig, 0.5);
        let lu = spinlift::rep::left_regular_matrix(&u);
        let lv = spinlift::rep::left_regular_matrix(&v);
        let luv = spinlift::rep::left_regular_matrix(&(&u * &v));
        assert!(lu.mul(&lv).distance(&luv) <= 1e-10 * luv.norm_inf().max(1.0));
        assert!(lu.norm_inf() > 0.0);
    }
    let zero = spinlift::rep::left_regular_matrix(&Multivector::zero(sig));
    assert_eq!(zero.norm_inf(), 0.0);
}

#[test]
fn orthogonal_identity_lifts_to_unit() {
    for n in 1..=6 {
        for p in 0..=n {
            let sig = Signature::real(p, n - p).unwrap();
            let r = spin::lift(&OrthogonalMatrix::identity(sig)).unwrap();
            assert_eq!(r.t_plus, Multivector::one(sig));
        }
    }
}

#[test]
fn center_even_n_scalar_only_odd_n_adds_pseudoscalar_not_the_reverse() {
    for n in 1..=6 {
        for p in 0..=n {
            let sig = Signature::real(p, n - p).unwrap();
            let want = if n % 2 == 0 {
                vec![BladeMask::IDENTITY]
            } else {
                vec![BladeMask::IDENTITY, BladeMask::full(n)]
            };
            assert_eq!(center_basis(&sig), want, "{sig}");
        }
    }
}
