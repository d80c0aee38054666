//! The round 6-sphere from the flat G2 structure and the equatorial
//! 5-sphere inside it.
//!
//! The flat 3-form is not hardcoded: its seven coefficients are solved for
//! from the condition U⌟φ₀ = F with F the hypersurface Kähler form written
//! in ambient coordinates, and the dual 4-form comes from the flat Hodge
//! star.  Construction-time assertions pin the result against the linear
//! coordinate expression of F.

use crate::exterior::{DifferentialFrame, Form, FrameMorphism, FrameVector};
use crate::lifts::{hypersurface_g2_to_su3, hypersurface_su3_to_su2, InductionSpec, Restriction};
use crate::ring::{Rational, Ring, RingElement};
use crate::structures::{G2Structure, Su2Structure, Su3Structure};
use crate::{Error, Result};
use std::collections::BTreeMap;

pub struct SphereChain {
    pub flat_frame: DifferentialFrame,
    pub flat: G2Structure,
    pub s6_frame: DifferentialFrame,
    pub s6: Su3Structure,
    /// Conormal of the 6-sphere in the flat frame.
    pub theta7: Form,
    pub flat_to_s6: FrameMorphism,
    pub s5_frame: DifferentialFrame,
    /// The literal coordinate quadruplet on the 5-sphere.
    pub s5: Su2Structure,
    /// The same quadruplet induced from the 6-sphere structure.
    pub s5_induced: Su2Structure,
    pub s6_to_s5: FrameMorphism,
}

fn flat7_frame() -> Result<DifferentialFrame> {
    let mut b = Ring::builder();
    for i in 1..=7 {
        b = b.gen(&format!("x{i}"));
    }
    let ring = b.build()?;
    let mut fb = DifferentialFrame::builder("r7", &ring).orthonormal(true);
    for i in 1..=7 {
        fb = fb.closed(&format!("dx{i}"));
    }
    for i in 1..=7 {
        fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
    }
    fb.build()
}

/// The Kähler form of the 6-sphere in ambient coordinates:
/// F = β∧dx₇ + β₁.
fn kaehler_form(frame: &DifferentialFrame) -> Result<Form> {
    let beta = frame.form(&[
        ("x6", &["dx1"]),
        ("-x1", &["dx6"]),
        ("x2", &["dx5"]),
        ("-x5", &["dx2"]),
        ("-x4", &["dx3"]),
        ("x3", &["dx4"]),
    ])?;
    let beta1 = frame.form(&[
        ("-x7", &["dx1", "dx6"]),
        ("x7", &["dx2", "dx5"]),
        ("x7", &["dx3", "dx4"]),
        ("x1", &["dx2", "dx3"]),
        ("x3", &["dx1", "dx2"]),
        ("-x2", &["dx1", "dx3"]),
        ("x1", &["dx4", "dx5"]),
        ("x5", &["dx1", "dx4"]),
        ("-x4", &["dx1", "dx5"]),
        ("x2", &["dx4", "dx6"]),
        ("x6", &["dx2", "dx4"]),
        ("-x4", &["dx2", "dx6"]),
        ("-x3", &["dx5", "dx6"]),
        ("-x6", &["dx3", "dx5"]),
        ("x5", &["dx3", "dx6"]),
    ])?;
    beta.wedge(&frame.sym("dx7")?)?.add(&beta1)
}

/// Solve U⌟φ₀ = F for a constant 3-form φ₀, where U = Σ xᵢ ∂ᵢ.
fn solve_flat_three_form(frame: &DifferentialFrame, f: &Form) -> Result<Form> {
    let ring = frame.ring();
    let mut coeffs: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (mono, c) in f.terms() {
        let pair: Vec<usize> = mono.indices().collect();
        for (m, q) in c.terms() {
            let gens: Vec<(usize, u16)> = m.iter().collect();
            if gens.len() != 1 || gens[0].1 != 1 {
                return Err(Error::Parse(
                    "coefficient of the contraction is not linear".into(),
                ));
            }
            // generator x_i pairs with the coframe symbol dx_i at the same
            // index by construction
            let l = gens[0].0;
            let mut triple = vec![l, pair[0], pair[1]];
            triple.sort_unstable();
            let pos = triple.iter().position(|&t| t == l).unwrap();
            let sign = if pos == 1 { -1 } else { 1 };
            let value = if sign < 0 { -q.clone() } else { q.clone() };
            if let Some(prev) = coeffs.get(&triple) {
                if *prev != value {
                    return Err(Error::Parse("inconsistent three-form coefficients".into()));
                }
            } else {
                coeffs.insert(triple, value);
            }
        }
    }
    let terms = coeffs
        .into_iter()
        .map(|(triple, q)| (ring.constant(q), triple))
        .collect();
    let phi = frame.form_from_elements(terms)?;
    // cross-check the defining condition exactly
    let u = radial_vector(frame)?;
    if !phi.interior(&u)?.sub(f)?.is_zero() {
        return Err(Error::Parse("contraction does not reproduce F".into()));
    }
    Ok(phi)
}

fn radial_vector(frame: &DifferentialFrame) -> Result<FrameVector> {
    let comps: Vec<(String, String)> = (1..=7)
        .map(|i| (format!("dx{i}"), format!("x{i}")))
        .collect();
    let refs: Vec<(&str, &str)> = comps
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    FrameVector::from_exprs(frame, &refs)
}

fn sphere_theta(frame: &DifferentialFrame, n: usize) -> Result<Form> {
    let terms: Vec<(String, Vec<String>)> = (1..=n)
        .map(|i| (format!("x{i}"), vec![format!("dx{i}")]))
        .collect();
    let refs: Vec<(&str, &[&str])> = Vec::new();
    let _ = refs;
    let elems = terms
        .iter()
        .map(|(c, syms)| {
            Ok((
                frame.ring().parse(c)?,
                syms.iter()
                    .map(|s| frame.symbol_index(s))
                    .collect::<Result<Vec<_>>>()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    frame.form_from_elements(elems)
}

fn s6_frame() -> Result<DifferentialFrame> {
    let mut b = Ring::builder();
    for i in 1..=6 {
        b = b.gen(&format!("x{i}"));
    }
    let ring = b
        .gen_with_rule("x7", 2, "1 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2 - x6^2")
        .build()?;
    let mut fb = DifferentialFrame::builder("s6", &ring);
    for i in 1..=7 {
        fb = fb.closed(&format!("dx{i}"));
    }
    for i in 1..=7 {
        fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
    }
    let theta: Vec<(String, Vec<String>)> = (1..=7)
        .map(|i| (format!("x{i}"), vec![format!("dx{i}")]))
        .collect();
    fb.locus_terms(theta).build()
}

fn s5_frame() -> Result<DifferentialFrame> {
    let mut b = Ring::builder();
    for i in 1..=5 {
        b = b.gen(&format!("x{i}"));
    }
    let ring = b
        .gen_with_rule("x6", 2, "1 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2")
        .build()?;
    let mut fb = DifferentialFrame::builder("s5", &ring);
    for i in 1..=6 {
        fb = fb.closed(&format!("dx{i}"));
    }
    for i in 1..=6 {
        fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
    }
    let theta: Vec<(String, Vec<String>)> = (1..=6)
        .map(|i| (format!("x{i}"), vec![format!("dx{i}")]))
        .collect();
    fb.locus_terms(theta).build()
}

/// The literal coordinate quadruplet on the 5-sphere.
pub fn s5_literal(frame: &DifferentialFrame) -> Result<Su2Structure> {
    let eta = frame.form(&[
        ("x6", &["dx1"]),
        ("-x1", &["dx6"]),
        ("x2", &["dx5"]),
        ("-x5", &["dx2"]),
        ("x3", &["dx4"]),
        ("-x4", &["dx3"]),
    ])?;
    let omega1 = frame.form(&[
        ("x3", &["dx1", "dx2"]),
        ("-x2", &["dx1", "dx3"]),
        ("x1", &["dx2", "dx3"]),
        ("x5", &["dx1", "dx4"]),
        ("-x4", &["dx1", "dx5"]),
        ("x1", &["dx4", "dx5"]),
        ("x6", &["dx2", "dx4"]),
        ("-x4", &["dx2", "dx6"]),
        ("x2", &["dx4", "dx6"]),
        ("x5", &["dx3", "dx6"]),
        ("-x6", &["dx3", "dx5"]),
        ("-x3", &["dx5", "dx6"]),
    ])?;
    let omega2 = frame.form(&[
        ("-x4", &["dx1", "dx2"]),
        ("x5", &["dx1", "dx3"]),
        ("x2", &["dx1", "dx4"]),
        ("-x3", &["dx1", "dx5"]),
        ("x6", &["dx2", "dx3"]),
        ("-x1", &["dx2", "dx4"]),
        ("-x3", &["dx2", "dx6"]),
        ("x1", &["dx3", "dx5"]),
        ("x2", &["dx3", "dx6"]),
        ("x6", &["dx4", "dx5"]),
        ("-x5", &["dx4", "dx6"]),
        ("x4", &["dx5", "dx6"]),
    ])?;
    let omega3 = frame.form(&[
        ("1", &["dx1", "dx6"]),
        ("-1", &["dx3", "dx4"]),
        ("-1", &["dx2", "dx5"]),
    ])?;
    Su2Structure::new(eta, omega1, omega2, omega3)
}

/// Build the flat G2 structure, the 6-sphere structure it induces, and the
/// equatorial 5-sphere both literally and by induction.
pub fn build_s6_and_s5() -> Result<SphereChain> {
    let flat_frame = flat7_frame()?;
    let f_ambient = kaehler_form(&flat_frame)?;
    let phi0 = solve_flat_three_form(&flat_frame, &f_ambient)?;
    let star_phi0 = phi0.hodge()?;
    let flat = G2Structure::new(phi0, star_phi0)?;

    let s6 = s6_frame()?;
    let gen_images: Vec<(String, RingElement)> = (1..=7)
        .map(|i| {
            let n = format!("x{i}");
            Ok((n.clone(), s6.ring().gen(&n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let sym_images: Vec<(String, Form)> = (1..=7)
        .map(|i| {
            let n = format!("dx{i}");
            Ok((n.clone(), s6.sym(&n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let flat_to_s6 = FrameMorphism::new(&flat_frame, &s6, gen_images, sym_images)?;

    let u = radial_vector(&flat_frame)?;
    let theta7 = sphere_theta(&flat_frame, 7)?;
    let flat_metric = identity_metric(&flat_frame)?;
    let induced = hypersurface_g2_to_su3(
        &flat,
        &u,
        &InductionSpec {
            restriction: Restriction::Tangential {
                morphism: &flat_to_s6,
                conormal: &theta7,
            },
            metric: Some(&flat_metric),
        },
    )?;
    // The ambient G2 structure is parallel, so the induced triple comes out
    // in the Hitchin orientation; the round nearly Kähler triple is its
    // phase rotation (Ψ₊, Ψ₋) ↦ (−Ψ₋, −Ψ₊).  With this rotation
    // Ψ₊ = f*φ₀ agrees with dF/3 on the locus and dΨ₋ closes against
    // −2 F∧F.
    let s6_structure = Su3Structure::new(
        induced.f.clone(),
        induced.psi_minus.neg(),
        induced.psi_plus.neg(),
    )?;

    let s5f = s5_frame()?;
    let mut gen_images: Vec<(String, RingElement)> = (1..=6)
        .map(|i| {
            let n = format!("x{i}");
            Ok((n.clone(), s5f.ring().gen(&n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    gen_images.push(("x7".into(), s5f.ring().zero()));
    let mut sym_images: Vec<(String, Form)> = (1..=6)
        .map(|i| {
            let n = format!("dx{i}");
            Ok((n.clone(), s5f.sym(&n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    sym_images.push(("dx7".into(), s5f.zero(1)));
    let s6_to_s5 = FrameMorphism::new(&s6, &s5f, gen_images, sym_images)?;

    let normal7 = FrameVector::from_exprs(&s6, &[("dx7", "1")])?;
    let s5_induced = hypersurface_su3_to_su2(
        &s6_structure,
        &normal7,
        &InductionSpec {
            restriction: Restriction::Pullback(&s6_to_s5),
            metric: None,
        },
    )?;
    let s5_lit = s5_literal(&s5f)?;

    Ok(SphereChain {
        flat_frame,
        flat,
        s6_frame: s6,
        s6: s6_structure,
        theta7,
        flat_to_s6,
        s5_frame: s5f,
        s5: s5_lit,
        s5_induced,
        s6_to_s5,
    })
}

fn identity_metric(frame: &DifferentialFrame) -> Result<crate::exterior::BilinearForm> {
    let n = frame.dimension();
    let ring = frame.ring();
    let mat: Vec<Vec<RingElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect();
    crate::exterior::BilinearForm::new(frame, mat)
}
