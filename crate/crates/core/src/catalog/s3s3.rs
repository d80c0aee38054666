//! The homogeneous nearly Kähler structure on S³×S³, its coordinate
//! realization inside ℝ⁸, and the induced / deformed quadruplets on the
//! hypersurface x₄ = 0.

use crate::exterior::{BilinearForm, DifferentialFrame, Form, FrameMorphism, FrameVector};
use crate::lifts::{hypersurface_su3_to_su2, InductionSpec, Restriction};
use crate::ring::{Ring, RingElement};
use crate::structures::{Su2Structure, Su3Structure};
use crate::{Error, Result};

pub struct ProductSpheres {
    pub mc_frame: DifferentialFrame,
    pub mc: Su3Structure,
    pub r8_frame: DifferentialFrame,
    pub r8: Su3Structure,
    pub mc_to_r8: FrameMorphism,
    pub metric: BilinearForm,
    pub normal: FrameVector,
    /// Dual vector fields of the invariant coframe, in coordinates.
    pub u_fields: Vec<FrameVector>,
    pub v_fields: Vec<FrameVector>,
}

/// Maurer-Cartan frame of S³×S³ over ℚ[√3].
fn mc_frame() -> Result<DifferentialFrame> {
    let ring = Ring::builder().gen_with_rule("sqrt3", 2, "3").build()?;
    DifferentialFrame::builder("s3s3-mc", &ring)
        .constants()
        .symbol_d("a1", 1, &[("-1", &["a2", "a3"])])
        .symbol_d("a2", 1, &[("1", &["a1", "a3"])])
        .symbol_d("a3", 1, &[("-1", &["a1", "a2"])])
        .symbol_d("b1", 1, &[("-1", &["b2", "b3"])])
        .symbol_d("b2", 1, &[("1", &["b1", "b3"])])
        .symbol_d("b3", 1, &[("-1", &["b1", "b2"])])
        .build()
}

fn mc_structure(frame: &DifferentialFrame) -> Result<Su3Structure> {
    let f = frame.form(&[
        ("1/18*sqrt3", &["a1", "b1"]),
        ("1/18*sqrt3", &["a2", "b2"]),
        ("1/18*sqrt3", &["a3", "b3"]),
    ])?;
    let psi_plus = frame.form(&[
        ("-1/54*sqrt3", &["a1", "a2", "b3"]),
        ("1/54*sqrt3", &["a1", "a3", "b2"]),
        ("-1/54*sqrt3", &["a2", "a3", "b1"]),
        ("1/54*sqrt3", &["a1", "b2", "b3"]),
        ("-1/54*sqrt3", &["a2", "b1", "b3"]),
        ("1/54*sqrt3", &["a3", "b1", "b2"]),
    ])?;
    let psi_minus = frame.form(&[
        ("2/54", &["a1", "a2", "a3"]),
        ("-1/54", &["a1", "a2", "b3"]),
        ("1/54", &["a1", "a3", "b2"]),
        ("-1/54", &["a2", "a3", "b1"]),
        ("-1/54", &["a1", "b2", "b3"]),
        ("1/54", &["a2", "b1", "b3"]),
        ("-1/54", &["a3", "b1", "b2"]),
        ("2/54", &["b1", "b2", "b3"]),
    ])?;
    Su3Structure::new(f, psi_plus, psi_minus)
}

fn r8_frame() -> Result<DifferentialFrame> {
    let ring = Ring::builder()
        .gens(&["x1", "x2", "x3"])
        .gen_with_rule("x4", 2, "1 - x1^2 - x2^2 - x3^2")
        .gens(&["x5", "x6", "x7"])
        .gen_with_rule("x8", 2, "1 - x5^2 - x6^2 - x7^2")
        .gen_with_rule("sqrt3", 2, "3")
        .build()?;
    let mut fb = DifferentialFrame::builder("s3s3-r8", &ring).constants();
    for i in 1..=8 {
        fb = fb.closed(&format!("dx{i}"));
    }
    for i in 1..=8 {
        fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
    }
    fb.locus(&[
        ("x1", &["dx1"]),
        ("x2", &["dx2"]),
        ("x3", &["dx3"]),
        ("x4", &["dx4"]),
    ])
    .locus(&[
        ("x5", &["dx5"]),
        ("x6", &["dx6"]),
        ("x7", &["dx7"]),
        ("x8", &["dx8"]),
    ])
    .build()
}

/// Rows of the invariant coframe in coordinates, scaled by 2:
/// αᵢ = 2 Σⱼ A[i][j] dxⱼ over x₁…x₄ and βᵢ likewise over x₅…x₈.
fn quaternion_rows(vars: [&str; 4]) -> [[String; 4]; 3] {
    let [x1, x2, x3, x4] = vars;
    [
        [x4.into(), x3.into(), format!("-{x2}"), format!("-{x1}")],
        [format!("-{x3}"), x4.into(), x1.into(), format!("-{x2}")],
        [x2.into(), format!("-{x1}"), x4.into(), format!("-{x3}")],
    ]
}

fn coframe_form(frame: &DifferentialFrame, row: &[String; 4], offset: usize) -> Result<Form> {
    let terms = row
        .iter()
        .enumerate()
        .map(|(j, c)| {
            Ok((
                frame.ring().parse(&format!("2*({c})"))?,
                vec![frame.symbol_index(&format!("dx{}", offset + j + 1))?],
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    frame.form_from_elements(terms)
}

fn dual_vector(frame: &DifferentialFrame, row: &[String; 4], offset: usize) -> Result<FrameVector> {
    let comps = row
        .iter()
        .enumerate()
        .map(|(j, c)| {
            Ok((
                format!("dx{}", offset + j + 1),
                frame.ring().parse(&format!("1/2*({c})"))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    FrameVector::new(
        frame,
        comps.iter().map(|(n, c)| (n.as_str(), c.clone())).collect(),
    )
}

pub fn build_s3s3() -> Result<ProductSpheres> {
    let mc = mc_frame()?;
    let mc_structure_forms = mc_structure(&mc)?;
    let r8 = r8_frame()?;
    let ring = r8.ring().clone();

    let a_rows = quaternion_rows(["x1", "x2", "x3", "x4"]);
    let b_rows = quaternion_rows(["x5", "x6", "x7", "x8"]);
    let alphas: Vec<Form> = a_rows
        .iter()
        .map(|row| coframe_form(&r8, row, 0))
        .collect::<Result<Vec<_>>>()?;
    let betas: Vec<Form> = b_rows
        .iter()
        .map(|row| coframe_form(&r8, row, 4))
        .collect::<Result<Vec<_>>>()?;

    let mc_to_r8 = FrameMorphism::new(
        &mc,
        &r8,
        vec![("sqrt3".into(), ring.gen("sqrt3")?)],
        vec![
            ("a1".into(), alphas[0].clone()),
            ("a2".into(), alphas[1].clone()),
            ("a3".into(), alphas[2].clone()),
            ("b1".into(), betas[0].clone()),
            ("b2".into(), betas[1].clone()),
            ("b3".into(), betas[2].clone()),
        ],
    )?;

    let r8_structure = Su3Structure::new(
        mc_to_r8.apply(&mc_structure_forms.f)?,
        mc_to_r8.apply(&mc_structure_forms.psi_plus)?,
        mc_to_r8.apply(&mc_structure_forms.psi_minus)?,
    )?;

    // Dual fields, pairing-verified.
    let u_fields: Vec<FrameVector> = a_rows
        .iter()
        .map(|row| dual_vector(&r8, row, 0))
        .collect::<Result<Vec<_>>>()?;
    let v_fields: Vec<FrameVector> = b_rows
        .iter()
        .map(|row| dual_vector(&r8, row, 4))
        .collect::<Result<Vec<_>>>()?;
    for (i, alpha) in alphas.iter().enumerate() {
        for (j, u) in u_fields.iter().enumerate() {
            let pairing = alpha.interior(u)?;
            let expected = if i == j { ring.one() } else { ring.zero() };
            if pairing.coefficient(&[]).sub(&expected) != ring.zero() {
                return Err(Error::InconsistentMorphism(format!(
                    "alpha{} against U{}",
                    i + 1,
                    j + 1
                )));
            }
        }
        for v in &v_fields {
            if !alpha.interior(v)?.is_zero() {
                return Err(Error::InconsistentMorphism("alpha against V".into()));
            }
        }
    }

    // g = (1/9)(Σ αᵢ² + Σ βᵢ² − Σ αᵢβᵢ) over the coordinate coframe.
    let n = r8.dimension();
    let mut mat = vec![vec![ring.zero(); n]; n];
    let one_form_coeffs =
        |f: &Form| -> Vec<RingElement> { (0..n).map(|j| f.coefficient(&[j])).collect() };
    for i in 0..3 {
        let a = one_form_coeffs(&alphas[i]);
        let b = one_form_coeffs(&betas[i]);
        for j in 0..n {
            for k in 0..n {
                let sym = a[j].mul(&a[k]).add(&b[j].mul(&b[k])).sub(
                    &a[j]
                        .mul(&b[k])
                        .add(&b[j].mul(&a[k]))
                        .scale(&crate::ring::rat(1, 2)),
                );
                mat[j][k] = mat[j][k].add(&sym.scale(&crate::ring::rat(1, 9)));
            }
        }
    }
    let metric = BilinearForm::new(&r8, mat)?;

    // 𝕟 = −√3 Σ (2xᵢ Uᵢ + xᵢ Vᵢ)
    let sqrt3 = ring.gen("sqrt3")?;
    let mut normal = FrameVector::new(&r8, vec![])?;
    for i in 0..3 {
        let xi = ring.gen(&format!("x{}", i + 1))?;
        let coeff_u = sqrt3.mul(&xi).scale(&crate::ring::int(-2));
        let coeff_v = sqrt3.mul(&xi).neg();
        normal = normal.add(&u_fields[i].scaled(&coeff_u))?;
        normal = normal.add(&v_fields[i].scaled(&coeff_v))?;
    }

    Ok(ProductSpheres {
        mc_frame: mc,
        mc: mc_structure_forms,
        r8_frame: r8,
        r8: r8_structure,
        mc_to_r8,
        metric,
        normal,
        u_fields,
        v_fields,
    })
}

pub struct HypersurfaceS2S3 {
    pub frame: DifferentialFrame,
    pub induced: Su2Structure,
    pub r8_to_s2s3: FrameMorphism,
    pub deformed_frame: DifferentialFrame,
    pub deformed: Su2Structure,
    /// The area form of the 2-sphere factor used in the deformation,
    /// expressed over the deformed frame.
    pub vol_s2: Form,
    /// β₁∧β₂∧β₃ of the 3-sphere factor, over the hypersurface frame.
    pub beta123: Form,
}

fn s2s3_frame(with_params: bool) -> Result<DifferentialFrame> {
    let mut b = Ring::builder()
        .gens(&["x1", "x2"])
        .gen_with_rule("x3", 2, "1 - x1^2 - x2^2")
        .gens(&["x5", "x6", "x7"])
        .gen_with_rule("x8", 2, "1 - x5^2 - x6^2 - x7^2")
        .gen_with_rule("sqrt3", 2, "3");
    if with_params {
        b = b
            .gens(&["lambda", "mu"])
            .gen_with_rule("kq", 2, "3*lambda^2 - 9*lambda*mu");
    }
    let ring = b.build()?;
    let mut fb =
        DifferentialFrame::builder(if with_params { "s2s3-deformed" } else { "s2s3" }, &ring)
            .constants();
    for i in 1..=8 {
        fb = fb.closed(&format!("dx{i}"));
    }
    for i in [1usize, 2, 3, 5, 6, 7, 8] {
        fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
    }
    fb.locus(&[("x1", &["dx1"]), ("x2", &["dx2"]), ("x3", &["dx3"])])
        .locus(&[
            ("x5", &["dx5"]),
            ("x6", &["dx6"]),
            ("x7", &["dx7"]),
            ("x8", &["dx8"]),
        ])
        .locus(&[("1", &["dx4"])])
        .build()
}

fn restriction_morphism(src: &DifferentialFrame, dst: &DifferentialFrame) -> Result<FrameMorphism> {
    let ring = dst.ring();
    let mut gen_images: Vec<(String, RingElement)> = Vec::new();
    for name in src.ring().generator_names() {
        let image = if name == "x4" {
            ring.zero()
        } else {
            ring.gen(name)?
        };
        gen_images.push((name.to_string(), image));
    }
    let mut sym_images: Vec<(String, Form)> = Vec::new();
    for name in src.symbol_names() {
        let image = if name == "dx4" {
            dst.zero(1)
        } else {
            dst.sym(name)?
        };
        sym_images.push((name.to_string(), image));
    }
    FrameMorphism::new(src, dst, gen_images, sym_images)
}

/// Induce the quadruplet on x₄ = 0 and build the (λ, μ) deformation.
pub fn build_s2s3(prod: &ProductSpheres) -> Result<HypersurfaceS2S3> {
    let frame = s2s3_frame(false)?;
    let r8_to_s2s3 = restriction_morphism(&prod.r8_frame, &frame)?;
    let induced = hypersurface_su3_to_su2(
        &prod.r8,
        &prod.normal,
        &InductionSpec {
            restriction: Restriction::Pullback(&r8_to_s2s3),
            metric: Some(&prod.metric),
        },
    )?;

    let deformed_frame = s2s3_frame(true)?;
    let eta = induced.eta.transport(&deformed_frame)?;
    let omega1 = induced.omega1.transport(&deformed_frame)?;
    let omega2 = induced.omega2.transport(&deformed_frame)?;
    let ring = deformed_frame.ring();
    let kq = ring.gen("kq")?;
    let lambda = ring.gen("lambda")?;
    let mu = ring.gen("mu")?;
    let vol_s2 = deformed_frame.form(&[
        ("-x3", &["dx1", "dx2"]),
        ("x2", &["dx1", "dx3"]),
        ("-x1", &["dx2", "dx3"]),
    ])?;
    let omega3 = eta.d()?.scaled(&lambda).add(&vol_s2.scaled(&mu))?;
    let deformed = Su2Structure::new(eta, omega1.scaled(&kq), omega2.scaled(&kq), omega3)?;

    let b_rows = quaternion_rows(["x5", "x6", "x7", "x8"]);
    let betas: Vec<Form> = b_rows
        .iter()
        .map(|row| coframe_form(&frame, row, 4))
        .collect::<Result<Vec<_>>>()?;
    let beta123 = betas[0].wedge(&betas[1])?.wedge(&betas[2])?;

    Ok(HypersurfaceS2S3 {
        frame,
        induced,
        r8_to_s2s3,
        deformed_frame,
        deformed,
        vol_s2: vol_s2.clone(),
        beta123,
    })
}

/// Specialize the deformation parameters, mapping onto the plain frame.
pub fn specialize_deformation(
    hyp: &HypersurfaceS2S3,
    lambda: &str,
    mu: &str,
    k_value: &str,
) -> Result<Su2Structure> {
    let dst = &hyp.frame;
    let ring = dst.ring();
    let mut gen_images: Vec<(String, RingElement)> = Vec::new();
    for name in hyp.deformed_frame.ring().generator_names() {
        let image = match name {
            "lambda" => ring.parse(lambda)?,
            "mu" => ring.parse(mu)?,
            "kq" => ring.parse(k_value)?,
            other => ring.gen(other)?,
        };
        gen_images.push((name.to_string(), image));
    }
    let sym_images: Vec<(String, Form)> = hyp
        .deformed_frame
        .symbol_names()
        .map(|n| Ok((n.to_string(), dst.sym(n)?)))
        .collect::<Result<Vec<_>>>()?;
    let m = FrameMorphism::new(&hyp.deformed_frame, dst, gen_images, sym_images)?;
    Su2Structure::new(
        m.apply(&hyp.deformed.eta)?,
        m.apply(&hyp.deformed.omega1)?,
        m.apply(&hyp.deformed.omega2)?,
        m.apply(&hyp.deformed.omega3)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_normalizes_the_invariant_fields() {
        let prod = build_s3s3().unwrap();
        let g = &prod.metric;
        // g(U1, U1) = 1/9 in the quotient ring
        let u1 = &prod.u_fields[0];
        let val = g.eval(u1, u1).unwrap();
        assert_eq!(val, prod.r8_frame.ring().rational(1, 9));
        // bilinearity against the zero vector
        let zero = FrameVector::new(&prod.r8_frame, vec![]).unwrap();
        assert!(g.eval(u1, &zero).unwrap().is_zero());
        // the normal has squared length x1^2 + x2^2 + x3^2 before the
        // hypersurface relation is imposed
        let n2 = g.eval(&prod.normal, &prod.normal).unwrap();
        let expected = prod.r8_frame.ring().parse("x1^2 + x2^2 + x3^2").unwrap();
        assert_eq!(n2, expected);
    }

    #[test]
    fn induced_contact_form_matches_the_coordinate_expression() {
        let prod = build_s3s3().unwrap();
        let hyp = build_s2s3(&prod).unwrap();
        // η = (2/3)((x18−x27+x36)dx5 + (x17+x28−x35)dx6
        //          + (−x16+x25+x38)dx7 + (−x15−x26−x37)dx8)
        let expected = hyp
            .frame
            .form(&[
                ("2/3*x1*x8 - 2/3*x2*x7 + 2/3*x3*x6", &["dx5"]),
                ("2/3*x1*x7 + 2/3*x2*x8 - 2/3*x3*x5", &["dx6"]),
                ("-2/3*x1*x6 + 2/3*x2*x5 + 2/3*x3*x8", &["dx7"]),
                ("-2/3*x1*x5 - 2/3*x2*x6 - 2/3*x3*x7", &["dx8"]),
            ])
            .unwrap();
        let diff = hyp.induced.eta.sub(&expected).unwrap();
        let v = diff.is_zero_on_locus();
        assert!(v.is_zero && !v.vacuous, "{diff}");
    }
}
