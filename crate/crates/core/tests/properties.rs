//! Randomized law checks: the exterior-algebra axioms, the locus-aware
//! Leibniz rule, pullback–d commutation, the lift/induce round trip and the
//! agreement of the two double hypo routes, each over catalog frames.

use hypoform::exterior::{DifferentialFrame, Form, FrameMorphism, FrameVector};
use hypoform::liealg;
use hypoform::lifts::{hypersurface_su3_to_su2, product_lift, InductionSpec, Restriction};
use hypoform::ring::{Ring, RingElement};
use hypoform::structures::{classify_su2, Su2Structure};
use proptest::prelude::*;

fn mu_model_frame() -> DifferentialFrame {
    let (l, _) = liealg::model_double_hypo().unwrap();
    l.frame
}

fn s5_frame() -> DifferentialFrame {
    hypoform::catalog::spheres::build_s6_and_s5()
        .unwrap()
        .s5_frame
}

fn ypq_frame() -> DifferentialFrame {
    hypoform::catalog::ypq::build_ypq().unwrap().frame
}

fn flat7() -> DifferentialFrame {
    hypoform::catalog::spheres::build_s6_and_s5()
        .unwrap()
        .flat_frame
}

/// Specification of a random form: raw coefficient picks and symbol picks,
/// instantiated against a concrete frame.
#[derive(Clone, Debug)]
struct FormSpec {
    #[allow(clippy::type_complexity)]
    terms: Vec<(i64, Vec<(usize, u16)>, Vec<usize>)>,
    degree: usize,
}

fn arb_form_spec(max_degree: usize) -> impl Strategy<Value = FormSpec> {
    (0..=max_degree).prop_flat_map(move |degree| {
        proptest::collection::vec(
            (
                -4i64..=4,
                proptest::collection::vec((0usize..8, 1u16..=2), 0..2),
                proptest::collection::vec(0usize..10, degree),
            ),
            0..4,
        )
        .prop_map(move |terms| FormSpec { terms, degree })
    })
}

fn instantiate(spec: &FormSpec, frame: &DifferentialFrame) -> Form {
    let ring = frame.ring();
    let n = frame.dimension();
    let g = ring.generator_count().max(1);
    let mut terms: Vec<(RingElement, Vec<usize>)> = Vec::new();
    for (c, monomial, symbols) in &spec.terms {
        let mut coeff = ring.int(*c);
        if ring.generator_count() > 0 {
            for &(gi, e) in monomial {
                coeff = coeff.mul(&ring.gen_by_index(gi % g).pow(e as u32));
            }
        }
        let mut idx: Vec<usize> = symbols.iter().map(|s| s % n).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != spec.degree {
            continue; // collided picks; skip the term
        }
        terms.push((coeff, idx));
    }
    frame
        .form_from_elements(terms)
        .unwrap_or_else(|_| frame.zero(spec.degree as u8))
}

fn zero_mod_locus(f: &Form) -> bool {
    f.is_zero_on_locus().is_zero
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn d_squared_vanishes(spec in arb_form_spec(3), which in 0usize..3) {
        let frame = match which {
            0 => mu_model_frame(),
            1 => s5_frame(),
            _ => ypq_frame(),
        };
        let a = instantiate(&spec, &frame);
        let dda = a.d().unwrap().d().unwrap();
        prop_assert!(zero_mod_locus(&dda), "d^2 a = {dda}");
    }

    #[test]
    fn leibniz_rule(a in arb_form_spec(2), b in arb_form_spec(2), which in 0usize..3) {
        let frame = match which {
            0 => mu_model_frame(),
            1 => s5_frame(),
            _ => ypq_frame(),
        };
        let a = instantiate(&a, &frame);
        let b = instantiate(&b, &frame);
        let lhs = a.wedge(&b).unwrap().d().unwrap();
        let mut rhs = a.d().unwrap().wedge(&b).unwrap();
        let sign = if a.degree() % 2 == 1 { -1 } else { 1 };
        let adb = a.wedge(&b.d().unwrap()).unwrap();
        rhs = if sign < 0 { rhs.sub(&adb).unwrap() } else { rhs.add(&adb).unwrap() };
        prop_assert!(zero_mod_locus(&lhs.sub(&rhs).unwrap()));
    }

    #[test]
    fn graded_commutativity(a in arb_form_spec(3), b in arb_form_spec(3)) {
        let frame = mu_model_frame();
        let a = instantiate(&a, &frame);
        let b = instantiate(&b, &frame);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = (a.degree() as u32 * b.degree() as u32) % 2;
        let expected = if sign == 1 { ba.neg() } else { ba };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn interior_products_anticommute(
        a in arb_form_spec(3),
        x in proptest::collection::vec(-3i64..=3, 5),
        y in proptest::collection::vec(-3i64..=3, 5),
    ) {
        let frame = mu_model_frame();
        let a = instantiate(&a, &frame);
        let mk = |v: &[i64]| {
            let comps: Vec<(&str, RingElement)> = ["e1", "e2", "e3", "e4", "e5"]
                .iter()
                .zip(v)
                .map(|(n, &c)| (*n, frame.ring().int(c)))
                .collect();
            FrameVector::new(&frame, comps).unwrap()
        };
        let (x, y) = (mk(&x), mk(&y));
        let lhs = a.interior(&x).unwrap().interior(&y).unwrap();
        let rhs = a.interior(&y).unwrap().interior(&x).unwrap();
        prop_assert!(lhs.add(&rhs).unwrap().is_empty());
    }

    #[test]
    fn hodge_is_an_involution_up_to_sign(spec in arb_form_spec(7)) {
        let frame = flat7();
        let a = instantiate(&spec, &frame);
        let star2 = a.hodge().unwrap().hodge().unwrap();
        // n = 7 Riemannian: ⋆⋆ = +1 in every degree
        prop_assert_eq!(star2, a);
    }

    #[test]
    fn pullback_commutes_with_d(spec in arb_form_spec(3), which in 0usize..2) {
        // catalog morphisms: the basis change of the nearly hypo family and
        // the equatorial restriction of the 6-sphere
        match which {
            0 => {
                let (frame, _) = liealg::cor45_family().unwrap();
                let (_, m) = liealg::cor45_basis_change(&frame).unwrap();
                let a = instantiate(&spec, &frame);
                let lhs = m.apply(&a.d().unwrap()).unwrap();
                let rhs = m.apply(&a).unwrap().d().unwrap();
                prop_assert!(zero_mod_locus(&lhs.sub(&rhs).unwrap()));
            }
            _ => {
                let sph = hypoform::catalog::spheres::build_s6_and_s5().unwrap();
                let a = instantiate(&spec, &sph.s6_frame);
                let lhs = sph.s6_to_s5.apply(&a.d().unwrap()).unwrap();
                let rhs = sph.s6_to_s5.apply(&a).unwrap().d().unwrap();
                prop_assert!(zero_mod_locus(&lhs.sub(&rhs).unwrap()));
            }
        }
    }

    #[test]
    fn lift_then_induce_is_identity(
        eta in arb_form_spec(1),
        o1 in arb_form_spec(2),
        o2 in arb_form_spec(2),
        o3 in arb_form_spec(2),
    ) {
        let frame = mu_model_frame();
        let eta = {
            let f = instantiate(&eta, &frame);
            if f.degree() == 1 { f } else { frame.zero(1) }
        };
        let fix = |f: Form| if f.degree() == 2 { f } else { frame.zero(2) };
        let s = Su2Structure::new(
            eta,
            fix(instantiate(&o1, &frame)),
            fix(instantiate(&o2, &frame)),
            fix(instantiate(&o3, &frame)),
        ).unwrap();
        let lifted = product_lift(&s).unwrap();
        let recovered = unlift(&lifted, &frame);
        prop_assert_eq!(recovered.eta, s.eta);
        prop_assert_eq!(recovered.omega1, s.omega1);
        prop_assert_eq!(recovered.omega2, s.omega2);
        prop_assert_eq!(recovered.omega3, s.omega3);
    }

    #[test]
    fn double_hypo_equals_hypo_and_nearly_hypo(
        eta in arb_form_spec(1),
        o1 in arb_form_spec(2),
        o2 in arb_form_spec(2),
        o3 in arb_form_spec(2),
    ) {
        let frame = mu_model_frame();
        let eta = {
            let f = instantiate(&eta, &frame);
            if f.degree() == 1 { f } else { frame.zero(1) }
        };
        let fix = |f: Form| if f.degree() == 2 { f } else { frame.zero(2) };
        let s = Su2Structure::new(
            eta,
            fix(instantiate(&o1, &frame)),
            fix(instantiate(&o2, &frame)),
            fix(instantiate(&o3, &frame)),
        ).unwrap();
        let r = classify_su2(&s).unwrap();
        prop_assert_eq!(
            r.flag("double_hypo").unwrap(),
            r.flag("hypo").unwrap() && r.flag("nearly_hypo").unwrap()
        );
    }

    #[test]
    fn normalize_is_multiplicative(
        a_num in proptest::collection::vec((-5i64..=5, 0usize..5, 0u16..3, 0usize..5, 0u16..3), 0..4),
        b_num in proptest::collection::vec((-5i64..=5, 0usize..5, 0u16..3, 0usize..5, 0u16..3), 0..4),
    ) {
        // ring with a circular pair, a sphere-type rule and an inverse pair
        let ring = Ring::builder()
            .gen("s")
            .gen_with_rule("c", 2, "1 - s^2")
            .gen("r")
            .gen_inverse("r_inv", "r")
            .gen_with_rule("x", 2, "1 - s^2 - c^2 + r*r_inv - 1")
            .build()
            .unwrap();
        let build = |spec: &[(i64, usize, u16, usize, u16)]| {
            let mut acc = ring.zero();
            for &(c, g1, e1, g2, e2) in spec {
                let t = ring
                    .int(c)
                    .mul(&ring.gen_by_index(g1 % 5).pow(e1 as u32))
                    .mul(&ring.gen_by_index(g2 % 5).pow(e2 as u32));
                acc = acc.add(&t);
            }
            acc
        };
        let a = build(&a_num);
        let b = build(&b_num);
        // normal forms are closed under the operations
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        let c = a.add(&b);
        prop_assert_eq!(c.mul(&a), a.mul(&a).add(&b.mul(&a)));
        // associativity and idempotence of normalization: rebuilding an
        // element from its normal-form terms reproduces it
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let rebuilt = a.terms().fold(ring.zero(), |acc, (m, q)| {
            let mut t = ring.constant(q.clone());
            for (g, e) in m.iter() {
                t = t.mul(&ring.gen_by_index(g).pow(e as u32));
            }
            acc.add(&t)
        });
        prop_assert_eq!(rebuilt, a);
    }
}

fn unlift(lifted: &hypoform::structures::Su3Structure, base: &DifferentialFrame) -> Su2Structure {
    let cone = lifted.frame();
    let gen_images = cone
        .ring()
        .generator_names()
        .map(|n| (n.to_string(), base.ring().gen(n).unwrap()))
        .collect();
    let sym_images = cone
        .symbol_names()
        .map(|n| {
            let img = if n == "dt" {
                base.zero(1)
            } else {
                base.sym(n).unwrap()
            };
            (n.to_string(), img)
        })
        .collect();
    let m = FrameMorphism::new(cone, base, gen_images, sym_images).unwrap();
    let normal = FrameVector::new(cone, vec![("dt", cone.ring().one())]).unwrap();
    hypersurface_su3_to_su2(
        lifted,
        &normal,
        &InductionSpec {
            restriction: Restriction::Pullback(&m),
            metric: None,
        },
    )
    .unwrap()
}

/// Catalog round trips: the explicit Sasaki-Einstein structures recover
/// themselves through lift and induction.
#[test]
fn catalog_round_trips() {
    for s in [
        hypoform::catalog::spheres::build_s6_and_s5().unwrap().s5,
        liealg::model_double_hypo().unwrap().1,
        hypoform::catalog::ypq::build_ypq().unwrap().structure,
        hypoform::catalog::abstract_models::se_model().unwrap(),
    ] {
        let lifted = product_lift(&s).unwrap();
        let rec = unlift(&lifted, s.frame());
        assert_eq!(rec.eta, s.eta);
        assert_eq!(rec.omega1, s.omega1);
        assert_eq!(rec.omega2, s.omega2);
        assert_eq!(rec.omega3, s.omega3);
    }
}

/// The nearly Kähler flags do not collapse into the half-flat class without
/// the compatibility relations: over a free graded algebra the nearly
/// Kähler rules hold while half-flatness fails.
#[test]
fn nearly_kahler_does_not_imply_half_flat_without_compatibility() {
    let free = hypoform::catalog::abstract_models::nk_model_free().unwrap();
    let r = hypoform::structures::classify_su3(&free).unwrap();
    assert!(r.flag("nearly_kahler").unwrap());
    assert!(r.flag("nearly_half_flat").unwrap());
    assert!(!r.flag("half_flat").unwrap(), "{r}");
    // while on every compatible catalog entry both hold together
    for e in hypoform::catalog::entries().unwrap() {
        if let hypoform::catalog::EntryPayload::Su3(s) = &e.payload {
            let r = hypoform::structures::classify_su3(s).unwrap();
            if r.flag("nearly_kahler").unwrap() {
                assert!(r.flag("nearly_half_flat").unwrap(), "{}", e.name);
            }
        }
    }
}

/// Stability of the nearly hypo conditions along the sliced sin-cone
/// families: the defining residuals stay zero for all times.
#[test]
fn nearly_hypo_conditions_propagate_in_time() {
    let se = hypoform::catalog::abstract_models::se_model().unwrap();
    let fam = hypoform::lifts::sin_cone_nk_family(&se).unwrap();
    if let hypoform::lifts::FamilyForms::Su2(s) = &fam.forms {
        let first = s
            .omega1
            .d()
            .unwrap()
            .sub(&s.eta.wedge(&s.omega2).unwrap().scaled_str("3").unwrap())
            .unwrap();
        let second = s
            .eta
            .wedge(&s.omega3)
            .unwrap()
            .d()
            .unwrap()
            .add(&s.omega1.wedge(&s.omega1).unwrap().scaled_str("2").unwrap())
            .unwrap();
        for r in [&first, &second] {
            assert!(r.is_zero(), "residual {r}");
            assert!(r.derive_coefficients("t").unwrap().is_zero());
        }
    } else {
        panic!("expected an SU(2) family");
    }
}
