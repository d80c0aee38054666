//! Dimension-raising and -lowering constructions and evolution-equation
//! residual checks.
//!
//! All product-type lifts share one convention: over a slice structure
//! (η, ωᵢ) the product forms are
//!
//! ```text
//! F  = ω₁ + η∧dt,   Ψ₊ = ω₂∧η − ω₃∧dt,   Ψ₋ = ω₃∧η + ω₂∧dt,
//! ```
//!
//! and a time family is a slice structure whose coefficients depend on the
//! declared time generators.  The cone and sin-cone constructions are the
//! product formulas applied to specific families.

use crate::exterior::{DifferentialFrame, Form, FrameMorphism, FrameVector};
use crate::ring::Ring;
use crate::structures::{CheckReport, G2Structure, Su2Structure, Su3Structure};
use crate::{Error, Result};

/// Extension of a frame by a time direction `dt` plus function generators.
pub struct ConeExtension {
    /// Frame with the extra `dt` symbol; function generators have
    /// `d g = g' dt`.
    pub cone: DifferentialFrame,
    /// Same ring, base symbols only; function generators are slice
    /// constants (`d g = 0`) and the time derivation acts on them.
    pub slice: DifferentialFrame,
    pub time: String,
    pub dt: String,
}

/// Specification of one time-function generator, e.g. `sin_t` with
/// derivative `cos_t`.
pub struct TimeGen<'a> {
    pub name: &'a str,
    /// Optional power rule `name^k = rhs`.
    pub rule: Option<(u16, &'a str)>,
    /// Value of the time derivation (also the `dt`-coefficient of `d`).
    pub derivative: &'a str,
}

fn form_terms(f: &Form) -> Vec<(String, Vec<String>)> {
    f.terms()
        .map(|(m, c)| {
            (
                c.to_string(),
                m.indices()
                    .map(|i| f.frame().symbol_name(i).to_string())
                    .collect(),
            )
        })
        .collect()
}

fn rebuild_ring(ring: &Ring, time: &str, gens: &[TimeGen]) -> Result<Ring> {
    let mut b = Ring::builder();
    for d in ring.derivations() {
        b = b.derivation(d);
    }
    if !ring.derivations().iter().any(|d| d == time) {
        b = b.derivation(time);
    }
    let fresh_time = !ring.derivations().iter().any(|d| d == time);
    for i in 0..ring.generator_count() {
        let name = ring.generator_name(i).to_string();
        if let Some((k, rhs)) = ring.power_rule_of(i) {
            b = b.gen_with_rule(&name, k, &rhs.to_string());
        } else if let Some(p) = ring.inverse_partner_of(i) {
            if p < i {
                b = b.gen_inverse(&name, ring.generator_name(p));
            } else {
                b = b.gen(&name);
            }
        } else {
            b = b.gen(&name);
        }
        for d in ring.derivations() {
            if let Some(v) = ring.derivation_value(i, d) {
                b = b.deriv(d, &v.to_string());
            }
        }
        // Pre-existing generators are constant along the new time direction.
        if fresh_time {
            b = b.deriv(time, "0");
        }
    }
    for g in gens {
        if ring.generator_names().any(|n| n == g.name) {
            return Err(Error::NameCollision(g.name.to_string()));
        }
        b = match g.rule {
            Some((k, rhs)) => b.gen_with_rule(g.name, k, rhs),
            None => b.gen(g.name),
        };
        b = b.deriv(time, g.derivative);
    }
    b.build()
}

/// Rebuild `base` over `ring`, appending `dt` when `with_dt` and wiring the
/// time generators' `d` rules (`g' dt` on the cone, `0` on the slice).
fn rebuild_frame(
    base: &DifferentialFrame,
    ring: &Ring,
    name: &str,
    dt: Option<&str>,
    gens: &[TimeGen],
    expansion_target: Option<&DifferentialFrame>,
) -> Result<DifferentialFrame> {
    // The base frame was validated at its own construction (or its check
    // was deliberately deferred); appending a closed time direction cannot
    // break closure, so the check is not repeated here.
    let mut fb = DifferentialFrame::builder(name, ring).defer_closure_check();
    for idx in 0..base.dimension() {
        let sym = base.symbol_name(idx);
        let deg = base.symbol_degree(idx);
        match base.d_symbol(idx) {
            Some(d) => fb = fb.symbol_d_terms(sym, deg, form_terms(&d)),
            None => fb = fb.symbol(sym, deg),
        }
    }
    if let Some(dt) = dt {
        if base.symbol_names().any(|n| n == dt) {
            return Err(Error::NameCollision(dt.to_string()));
        }
        fb = fb.symbol_d(dt, 1, &[]);
    }
    for g in 0..base.ring().generator_count() {
        if let Some(rule) = base.d_generator(g) {
            fb = fb.d_generator_terms(base.ring().generator_name(g), form_terms(&rule));
        }
    }
    for g in gens {
        match dt {
            Some(dt) => {
                fb = fb.d_generator_terms(
                    g.name,
                    vec![(g.derivative.to_string(), vec![dt.to_string()])],
                )
            }
            None => fb = fb.d_generator_terms(g.name, vec![]),
        }
    }
    for theta in base.locus() {
        fb = fb.locus_terms(form_terms(&theta));
    }
    if let Some(target) = expansion_target {
        let mut images: Vec<(String, crate::exterior::TermList)> = Vec::new();
        for idx in 0..base.dimension() {
            let img = base.expansion_image(idx).unwrap();
            images.push((base.symbol_name(idx).to_string(), form_terms(&img)));
        }
        if let Some(dt) = dt {
            images.push((
                dt.to_string(),
                vec![("1".to_string(), vec![dt.to_string()])],
            ));
        }
        fb.expansion_terms(target, images).build()
    } else {
        fb.build()
    }
}

/// Extend a frame by a time direction and function generators.
pub fn extend_with_time(
    base: &DifferentialFrame,
    time: &str,
    dt: &str,
    gens: &[TimeGen],
) -> Result<ConeExtension> {
    let ring = rebuild_ring(base.ring(), time, gens)?;
    let (cone_target, slice_target);
    let (cone_exp, slice_exp) = match base.expansion_target() {
        None => (None, None),
        Some(t) => {
            cone_target =
                rebuild_frame(t, &ring, &format!("{}+{dt}", t.name()), Some(dt), &[], None)?;
            slice_target =
                rebuild_frame(t, &ring, &format!("{}@{time}", t.name()), None, &[], None)?;
            (Some(cone_target), Some(slice_target))
        }
    };
    let cone = rebuild_frame(
        base,
        &ring,
        &format!("{}+{dt}", base.name()),
        Some(dt),
        gens,
        cone_exp.as_ref().map(|t| t as _),
    )?;
    let slice = rebuild_frame(
        base,
        &ring,
        &format!("{}@{time}", base.name()),
        None,
        gens,
        slice_exp.as_ref().map(|t| t as _),
    )?;
    Ok(ConeExtension {
        cone,
        slice,
        time: time.to_string(),
        dt: dt.to_string(),
    })
}

/// A one-parameter family of slice structures; forms carry no `dt` factor
/// and the time derivation acts on coefficients only.
pub struct TimeFamily {
    pub time: String,
    pub forms: FamilyForms,
}

pub enum FamilyForms {
    Su2(Su2Structure),
    Su3(Su3Structure),
}

impl TimeFamily {
    pub fn frame(&self) -> &DifferentialFrame {
        match &self.forms {
            FamilyForms::Su2(s) => s.frame(),
            FamilyForms::Su3(s) => s.frame(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionKind {
    ContiSalamon,
    NearlyHypo,
    NearlyHalfFlat,
    Hitchin,
}

/// Product formulas over forms already living on the cone frame.
fn product_forms(
    eta: &Form,
    omega1: &Form,
    omega2: &Form,
    omega3: &Form,
    dt: &Form,
) -> Result<Su3Structure> {
    let f = omega1.add(&eta.wedge(dt)?)?;
    let psi_plus = omega2.wedge(eta)?.sub(&omega3.wedge(dt)?)?;
    let psi_minus = omega3.wedge(eta)?.add(&omega2.wedge(dt)?)?;
    Su3Structure::new(f, psi_plus, psi_minus)
}

/// Static product lift of an SU(2)-structure.
pub fn product_lift(s: &Su2Structure) -> Result<Su3Structure> {
    let ext = extend_with_time(s.frame(), "t", "dt", &[])?;
    let dt = ext.cone.sym("dt")?;
    product_forms(
        &s.eta.transport(&ext.cone)?,
        &s.omega1.transport(&ext.cone)?,
        &s.omega2.transport(&ext.cone)?,
        &s.omega3.transport(&ext.cone)?,
        &dt,
    )
}

fn cy_cone_family_on(
    ext: &ConeExtension,
    s: &Su2Structure,
    frame: &DifferentialFrame,
) -> Result<Su2Structure> {
    let _ = ext;
    let t = frame.ring().parse("t")?;
    let t2 = frame.ring().parse("t^2")?;
    let eta = s.eta.transport(frame)?.scaled(&t);
    let omega1 = s.omega3.transport(frame)?.scaled(&t2);
    let omega2 = s.omega2.transport(frame)?.scaled(&t2);
    let omega3 = s.omega1.transport(frame)?.scaled(&t2).neg();
    Su2Structure::new(eta, omega1, omega2, omega3)
}

/// Calabi-Yau cone: F = t²ω₃ + tη∧dt with the matching complex volume form.
pub fn cone_cy(s: &Su2Structure) -> Result<Su3Structure> {
    let ext = extend_with_time(
        s.frame(),
        "t",
        "dt",
        &[TimeGen {
            name: "t",
            rule: None,
            derivative: "1",
        }],
    )?;
    let fam = cy_cone_family_on(&ext, s, &ext.cone)?;
    let dt = ext.cone.sym("dt")?;
    product_forms(&fam.eta, &fam.omega1, &fam.omega2, &fam.omega3, &dt)
}

/// The cone family as a slice family for evolution checks.
pub fn cone_cy_family(s: &Su2Structure) -> Result<TimeFamily> {
    let ext = extend_with_time(
        s.frame(),
        "t",
        "dt",
        &[TimeGen {
            name: "t",
            rule: None,
            derivative: "1",
        }],
    )?;
    let fam = cy_cone_family_on(&ext, s, &ext.slice)?;
    Ok(TimeFamily {
        time: "t".into(),
        forms: FamilyForms::Su2(fam),
    })
}

fn sin_cone_ext(base: &DifferentialFrame) -> Result<ConeExtension> {
    extend_with_time(
        base,
        "t",
        "dt",
        &[
            TimeGen {
                name: "sin_t",
                rule: None,
                derivative: "cos_t",
            },
            TimeGen {
                name: "cos_t",
                rule: Some((2, "1 - sin_t^2")),
                derivative: "-sin_t",
            },
        ],
    )
}

fn sin_family_on(s: &Su2Structure, frame: &DifferentialFrame) -> Result<Su2Structure> {
    let sin = frame.ring().parse("sin_t")?;
    let s2 = frame.ring().parse("sin_t^2")?;
    let s3 = frame.ring().parse("sin_t^3")?;
    let s2c = frame.ring().parse("sin_t^2*cos_t")?;
    let eta = s.eta.transport(frame)?.scaled(&sin);
    let o1 = s.omega1.transport(frame)?;
    let o2 = s.omega2.transport(frame)?;
    let o3 = s.omega3.transport(frame)?;
    let omega1 = o1.scaled(&s3).add(&o3.scaled(&s2c))?;
    let omega2 = o2.scaled(&s2);
    let omega3 = o1.scaled(&s2c).neg().add(&o3.scaled(&s3))?;
    Su2Structure::new(eta, omega1, omega2, omega3)
}

/// Sin-cone: the nearly Kähler candidate over a Sasaki-Einstein slice.
pub fn sin_cone_nk(s: &Su2Structure) -> Result<Su3Structure> {
    let ext = sin_cone_ext(s.frame())?;
    let fam = sin_family_on(s, &ext.cone)?;
    let dt = ext.cone.sym("dt")?;
    product_forms(&fam.eta, &fam.omega1, &fam.omega2, &fam.omega3, &dt)
}

/// The sliced sin-cone family η(t) = sin t·η, ….
pub fn sin_cone_nk_family(s: &Su2Structure) -> Result<TimeFamily> {
    let ext = sin_cone_ext(s.frame())?;
    let fam = sin_family_on(s, &ext.slice)?;
    Ok(TimeFamily {
        time: "t".into(),
        forms: FamilyForms::Su2(fam),
    })
}

/// Static G2 lift φ = F∧dq − Ψ₋, ⋆φ = ½F∧F + Ψ₊∧dq.
pub fn g2_lift(s: &Su3Structure) -> Result<G2Structure> {
    let ext = extend_with_time(s.frame(), "q", "dq", &[])?;
    let dq = ext.cone.sym("dq")?;
    let f = s.f.transport(&ext.cone)?;
    let pp = s.psi_plus.transport(&ext.cone)?;
    let pm = s.psi_minus.transport(&ext.cone)?;
    let phi = f.wedge(&dq)?.sub(&pm)?;
    let star_phi = f.wedge(&f)?.scaled_str("1/2")?.add(&pp.wedge(&dq)?)?;
    G2Structure::new(phi, star_phi)
}

fn sin_cone_g2_ext(base: &DifferentialFrame) -> Result<ConeExtension> {
    extend_with_time(
        base,
        "q",
        "dq",
        &[
            TimeGen {
                name: "sin_q",
                rule: None,
                derivative: "cos_q",
            },
            TimeGen {
                name: "cos_q",
                rule: Some((2, "1 - sin_q^2")),
                derivative: "-sin_q",
            },
        ],
    )
}

fn sin_g2_family_on(s: &Su3Structure, frame: &DifferentialFrame) -> Result<Su3Structure> {
    let s2 = frame.ring().parse("sin_q^2")?;
    let s4 = frame.ring().parse("sin_q^4")?;
    let s3c = frame.ring().parse("sin_q^3*cos_q")?;
    let f = s.f.transport(frame)?.scaled(&s2);
    let pp = s.psi_plus.transport(frame)?;
    let pm = s.psi_minus.transport(frame)?;
    let psi_plus = pp.scaled(&s4).add(&pm.scaled(&s3c))?;
    let psi_minus = pp.scaled(&s3c).neg().add(&pm.scaled(&s4))?;
    Su3Structure::new(f, psi_plus, psi_minus)
}

/// Sin-cone G2 structure over an SU(3) slice.
pub fn sin_cone_g2(s: &Su3Structure) -> Result<G2Structure> {
    let ext = sin_cone_g2_ext(s.frame())?;
    let fam = sin_g2_family_on(s, &ext.cone)?;
    let dq = ext.cone.sym("dq")?;
    let phi = fam.f.wedge(&dq)?.sub(&fam.psi_minus)?;
    let star_phi = fam
        .f
        .wedge(&fam.f)?
        .scaled_str("1/2")?
        .add(&fam.psi_plus.wedge(&dq)?)?;
    G2Structure::new(phi, star_phi)
}

/// The sliced sin-cone G2 family F(q) = sin²q F, ….
pub fn sin_cone_g2_family(s: &Su3Structure) -> Result<TimeFamily> {
    let ext = sin_cone_g2_ext(s.frame())?;
    let fam = sin_g2_family_on(s, &ext.slice)?;
    Ok(TimeFamily {
        time: "q".into(),
        forms: FamilyForms::Su3(fam),
    })
}

/// How the pullback to a hypersurface is realized.
pub enum Restriction<'a> {
    /// The morphism kills the conormal coframe direction itself.
    Pullback(&'a FrameMorphism),
    /// Ambient tangential representative with respect to a unit conormal;
    /// the morphism only re-tags onto the hypersurface frame.
    Tangential {
        morphism: &'a FrameMorphism,
        conormal: &'a Form,
    },
}

impl<'a> Restriction<'a> {
    fn morphism(&self) -> &'a FrameMorphism {
        match self {
            Restriction::Pullback(m) => m,
            Restriction::Tangential { morphism, .. } => morphism,
        }
    }

    fn restrict(&self, f: &Form, normal: &FrameVector) -> Result<Form> {
        match self {
            Restriction::Pullback(m) => m.apply(f),
            Restriction::Tangential { morphism, conormal } => {
                let tangential = f.sub(&conormal.wedge(&f.interior(normal)?)?)?;
                morphism.apply(&tangential)
            }
        }
    }
}

pub struct InductionSpec<'a> {
    pub restriction: Restriction<'a>,
    /// When given, the normal is checked to be unit for this metric after
    /// restriction to the hypersurface.
    pub metric: Option<&'a crate::exterior::BilinearForm>,
}

fn check_unit_normal(spec: &InductionSpec, normal: &FrameVector) -> Result<()> {
    if let Some(g) = spec.metric {
        let norm2 = g.eval(normal, normal)?;
        let restricted = spec.restriction.morphism().apply_scalar(&norm2)?;
        if !restricted.is_one() {
            return Err(Error::MetricCheckFailed);
        }
    }
    Ok(())
}

/// Induce an SU(2)-structure on an oriented hypersurface:
/// η = −𝕟⌟F, ω₁ = f*F, ω₂ = 𝕟⌟Ψ₋, ω₃ = −𝕟⌟Ψ₊.
pub fn hypersurface_su3_to_su2(
    s: &Su3Structure,
    normal: &FrameVector,
    spec: &InductionSpec,
) -> Result<Su2Structure> {
    check_unit_normal(spec, normal)?;
    let m = spec.restriction.morphism();
    let eta = m.apply(&s.f.interior(normal)?.neg())?;
    let omega1 = spec.restriction.restrict(&s.f, normal)?;
    let omega2 = m.apply(&s.psi_minus.interior(normal)?)?;
    let omega3 = m.apply(&s.psi_plus.interior(normal)?.neg())?;
    Su2Structure::new(eta, omega1, omega2, omega3)
}

/// Induce an SU(3)-structure on an oriented hypersurface of a G2-manifold:
/// F = 𝕟⌟φ, Ψ₊ = −𝕟⌟⋆φ, Ψ₋ = −f*φ.
pub fn hypersurface_g2_to_su3(
    s: &G2Structure,
    normal: &FrameVector,
    spec: &InductionSpec,
) -> Result<Su3Structure> {
    check_unit_normal(spec, normal)?;
    let m = spec.restriction.morphism();
    let f = m.apply(&s.phi.interior(normal)?)?;
    let psi_plus = m.apply(&s.star_phi.interior(normal)?.neg())?;
    let psi_minus = spec.restriction.restrict(&s.phi, normal)?.neg();
    Su3Structure::new(f, psi_plus, psi_minus)
}

fn time_derive(f: &Form, time: &str) -> Result<Form> {
    f.derive_coefficients(time).map_err(|e| match e {
        Error::MissingDerivation { derivation, .. } => Error::MissingTimeRule(derivation),
        Error::UnknownDerivation(d) => Error::MissingTimeRule(d),
        e => e,
    })
}

/// Residuals of the chosen evolution system for a time family.
pub fn evolution_residual(fam: &TimeFamily, kind: EvolutionKind) -> Result<CheckReport> {
    let time = fam.time.as_str();
    match (&fam.forms, kind) {
        (FamilyForms::Su2(s), EvolutionKind::ContiSalamon) => {
            let mut report = CheckReport::new("conti-salamon evolution");
            report.push(
                "dt(omega1) + d(eta)",
                time_derive(&s.omega1, time)?.add(&s.eta.d()?)?,
                true,
            );
            report.push(
                "dt(eta^omega3) - d(omega2)",
                time_derive(&s.eta.wedge(&s.omega3)?, time)?.sub(&s.omega2.d()?)?,
                true,
            );
            report.push(
                "dt(eta^omega2) + d(omega3)",
                time_derive(&s.eta.wedge(&s.omega2)?, time)?.add(&s.omega3.d()?)?,
                true,
            );
            let ok = report.all_passed();
            report.set_flag("solves_conti_salamon", ok);
            Ok(report)
        }
        (FamilyForms::Su2(s), EvolutionKind::NearlyHypo) => {
            let mut report = CheckReport::new("nearly hypo evolution");
            report.push(
                "dt(omega1) + d(eta) + 3 omega3",
                time_derive(&s.omega1, time)?
                    .add(&s.eta.d()?)?
                    .add(&s.omega3.scaled_str("3")?)?,
                true,
            );
            report.push(
                "dt(eta^omega3) - d(omega2) - 4 eta^omega1",
                time_derive(&s.eta.wedge(&s.omega3)?, time)?
                    .sub(&s.omega2.d()?)?
                    .sub(&s.eta.wedge(&s.omega1)?.scaled_str("4")?)?,
                true,
            );
            report.push(
                "dt(eta^omega2) + d(omega3)",
                time_derive(&s.eta.wedge(&s.omega2)?, time)?.add(&s.omega3.d()?)?,
                true,
            );
            let ok = report.all_passed();
            report.set_flag("solves_nearly_hypo", ok);
            Ok(report)
        }
        (FamilyForms::Su3(s), EvolutionKind::NearlyHalfFlat) => {
            let mut report = CheckReport::new("nearly half flat evolution");
            report.push(
                "dq(psi_minus) - 4 psi_plus + d(F)",
                time_derive(&s.psi_minus, time)?
                    .sub(&s.psi_plus.scaled_str("4")?)?
                    .add(&s.f.d()?)?,
                true,
            );
            report.push(
                "d(psi_plus) + 1/2 dq(F^F)",
                s.psi_plus
                    .d()?
                    .add(&time_derive(&s.f.wedge(&s.f)?, time)?.scaled_str("1/2")?)?,
                true,
            );
            let ok = report.all_passed();
            report.set_flag("solves_nearly_half_flat", ok);
            Ok(report)
        }
        (FamilyForms::Su3(s), EvolutionKind::Hitchin) => {
            let mut report = CheckReport::new("hitchin flow");
            report.push(
                "dq(psi_minus) + d(F)",
                time_derive(&s.psi_minus, time)?.add(&s.f.d()?)?,
                true,
            );
            report.push(
                "d(psi_plus) + 1/2 dq(F^F)",
                s.psi_plus
                    .d()?
                    .add(&time_derive(&s.f.wedge(&s.f)?, time)?.scaled_str("1/2")?)?,
                true,
            );
            let ok = report.all_passed();
            report.set_flag("solves_hitchin", ok);
            Ok(report)
        }
        (FamilyForms::Su2(_), k) => Err(Error::KindMismatch(format!(
            "{k:?} applies to SU(3) families"
        ))),
        (FamilyForms::Su3(_), k) => Err(Error::KindMismatch(format!(
            "{k:?} applies to SU(2) families"
        ))),
    }
}

/// Multiply every coefficient by `unit^power` before zero-testing; sound in
/// the localized rings because the declared units are nonzero divisors.
pub fn clear_denominators(f: &Form, unit: &crate::ring::RingElement, power: u32) -> Form {
    f.scaled(&unit.pow(power))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::DifferentialFrame;
    use crate::liealg::{model_double_hypo_at, standard_su2_forms};
    use crate::ring::Ring;
    use crate::structures::{
        check_nearly_parallel_g2, check_parallel_g2, classify_su2, classify_su3,
    };

    fn flat_su3() -> Su3Structure {
        let ring = Ring::builder().build().unwrap();
        let mut fb = DifferentialFrame::builder("flat6", &ring);
        for i in 1..=6 {
            fb = fb.closed(&format!("e{i}"));
        }
        let frame = fb.build().unwrap();
        Su3Structure::new(
            frame
                .form(&[
                    ("1", &["e1", "e2"]),
                    ("1", &["e3", "e4"]),
                    ("1", &["e5", "e6"]),
                ])
                .unwrap(),
            frame
                .form(&[
                    ("1", &["e1", "e3", "e5"]),
                    ("-1", &["e1", "e4", "e6"]),
                    ("-1", &["e2", "e3", "e6"]),
                    ("-1", &["e2", "e4", "e5"]),
                ])
                .unwrap(),
            frame
                .form(&[
                    ("1", &["e1", "e3", "e6"]),
                    ("1", &["e1", "e4", "e5"]),
                    ("1", &["e2", "e3", "e5"]),
                    ("-1", &["e2", "e4", "e6"]),
                ])
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn product_lift_of_the_standard_model() {
        let (_, s) = model_double_hypo_at("0").unwrap();
        let lifted = product_lift(&s).unwrap();
        let frame = lifted.frame();
        let expected = frame
            .form(&[
                ("1", &["e1", "e2"]),
                ("1", &["e3", "e4"]),
                ("1", &["e5", "dt"]),
            ])
            .unwrap();
        assert_eq!(lifted.f, expected);
        // eta = -n _| F for the product normal
        let n = FrameVector::new(frame, vec![("dt", frame.ring().one())]).unwrap();
        let eta = lifted.f.interior(&n).unwrap().neg();
        assert_eq!(eta, frame.form(&[("1", &["e5"])]).unwrap());
        // omega2 = n _| psi_minus, omega3 = -n _| psi_plus
        assert_eq!(
            lifted.psi_minus.interior(&n).unwrap(),
            s.omega2.transport(frame).unwrap()
        );
        assert_eq!(
            lifted.psi_plus.interior(&n).unwrap().neg(),
            s.omega3.transport(frame).unwrap()
        );
    }

    #[test]
    fn name_collision_is_rejected() {
        let ring = Ring::builder().build().unwrap();
        let mut fb = DifferentialFrame::builder("has-dt", &ring);
        for n in ["e1", "e2", "e3", "e4", "e5", "dt"] {
            fb = fb.closed(n);
        }
        let frame = fb.build().unwrap();
        let s = standard_su2_forms(&frame).unwrap();
        assert!(matches!(
            product_lift(&s),
            Err(crate::Error::NameCollision(_))
        ));
    }

    #[test]
    fn constant_hypersurface_of_flat_model_is_hypo() {
        let s = flat_su3();
        let frame = s.frame().clone();
        // restrict to the slice killing e6; constant normal dual to e6
        let ring0 = Ring::builder().build().unwrap();
        let mut fb = DifferentialFrame::builder("flat5", &ring0);
        for i in 1..=5 {
            fb = fb.closed(&format!("e{i}"));
        }
        let dst = fb.build().unwrap();
        let mut sym_images: Vec<(String, crate::exterior::Form)> = (1..=5)
            .map(|i| {
                let n = format!("e{i}");
                (n.clone(), dst.sym(&n).unwrap())
            })
            .collect();
        sym_images.push(("e6".into(), dst.zero(1)));
        let m = FrameMorphism::new(&frame, &dst, vec![], sym_images).unwrap();
        let n6 = FrameVector::new(&frame, vec![("e6", frame.ring().one())]).unwrap();
        let induced = hypersurface_su3_to_su2(
            &s,
            &n6,
            &InductionSpec {
                restriction: Restriction::Pullback(&m),
                metric: None,
            },
        )
        .unwrap();
        let r = classify_su2(&induced).unwrap();
        assert!(r.flag("hypo").unwrap(), "{r}");
        assert!(!r.flag("contact").unwrap());
    }

    #[test]
    fn flat_model_is_integrable_but_not_nearly_kahler() {
        let s = flat_su3();
        let r = classify_su3(&s).unwrap();
        assert!(r.flag("integrable").unwrap());
        assert!(r.flag("half_flat").unwrap());
        assert!(!r.flag("nearly_kahler").unwrap());
    }

    #[test]
    fn static_g2_lift_of_flat_is_parallel_not_nearly_parallel() {
        let s = flat_su3();
        let g2 = g2_lift(&s).unwrap();
        assert!(check_parallel_g2(&g2).unwrap().flag("parallel").unwrap());
        assert!(!check_nearly_parallel_g2(&g2)
            .unwrap()
            .flag("nearly_parallel")
            .unwrap());
    }

    #[test]
    fn static_g2_lift_of_half_flat_has_closed_dual() {
        // the homogeneous nearly Kähler product is half-flat; its static
        // lift has d(star phi) = 0 while d(phi) - 4 star(phi) != 0
        let prod = crate::catalog::s3s3::build_s3s3().unwrap();
        let g2 = g2_lift(&prod.mc).unwrap();
        assert!(g2.star_phi.d().unwrap().is_zero());
        assert!(!check_nearly_parallel_g2(&g2)
            .unwrap()
            .flag("nearly_parallel")
            .unwrap());
    }

    #[test]
    fn sin_cone_slice_at_quarter_turn_is_the_product_lift() {
        let (_, s) = model_double_hypo_at("0").unwrap();
        let sin_cone = sin_cone_nk(&s).unwrap();
        let product = product_lift(&s).unwrap();
        // sin -> 1, cos -> 0 maps the sin-cone frame onto the product frame
        let src = sin_cone.frame();
        let dst = product.frame();
        let gen_images = vec![
            ("sin_t".to_string(), dst.ring().one()),
            ("cos_t".to_string(), dst.ring().zero()),
        ];
        let sym_images = src
            .symbol_names()
            .map(|n| (n.to_string(), dst.sym(n).unwrap()))
            .collect();
        // evaluation at a fixed time keeps dt, so it is not a chain map
        let m = FrameMorphism::new_unchecked(src, dst, gen_images, sym_images).unwrap();
        assert_eq!(m.apply(&sin_cone.f).unwrap(), product.f);
        assert_eq!(m.apply(&sin_cone.psi_plus).unwrap(), product.psi_plus);
        assert_eq!(m.apply(&sin_cone.psi_minus).unwrap(), product.psi_minus);
    }

    #[test]
    fn cy_cone_slice_at_unit_time() {
        let (_, s) = model_double_hypo_at("0").unwrap();
        let cone = cone_cy(&s).unwrap();
        let src = cone.frame();
        // t -> 1 slice onto a plain frame with dt kept
        let ring0 = Ring::builder().build().unwrap();
        let mut fb = DifferentialFrame::builder("slice", &ring0);
        for n in ["e1", "e2", "e3", "e4", "e5"] {
            fb = fb.symbol(n, 1);
        }
        let dst = fb.symbol("dt", 1).build().unwrap();
        let gen_images = vec![("t".to_string(), dst.ring().one())];
        let sym_images = src
            .symbol_names()
            .map(|n| (n.to_string(), dst.sym(n).unwrap()))
            .collect();
        let m = FrameMorphism::new_unchecked(src, &dst, gen_images, sym_images).unwrap();
        let f1 = m.apply(&cone.f).unwrap();
        let expected = dst
            .form(&[
                ("1", &["e1", "e4"]),
                ("1", &["e2", "e3"]),
                ("1", &["e5", "dt"]),
            ])
            .unwrap();
        assert_eq!(f1, expected);
    }

    #[test]
    fn evolution_kind_mismatch_is_reported() {
        let fam = crate::catalog::evolutions::cs_family().unwrap();
        assert!(matches!(
            evolution_residual(&fam, EvolutionKind::NearlyHalfFlat),
            Err(crate::Error::KindMismatch(_))
        ));
    }

    #[test]
    fn missing_time_rules_are_reported() {
        let (_, s) = model_double_hypo_at("0").unwrap();
        let fam = TimeFamily {
            time: "t".into(),
            forms: FamilyForms::Su2(s),
        };
        assert!(matches!(
            evolution_residual(&fam, EvolutionKind::ContiSalamon),
            Err(crate::Error::MissingTimeRule(_))
        ));
    }

    #[test]
    fn trivial_family_solves_hitchin_flow() {
        // a constant family over the flat model: all four residuals vanish
        let s = flat_su3();
        let ext = extend_with_time(s.frame(), "q", "dq", &[]).unwrap();
        let fam = TimeFamily {
            time: "q".into(),
            forms: FamilyForms::Su3(
                Su3Structure::new(
                    s.f.transport(&ext.slice).unwrap(),
                    s.psi_plus.transport(&ext.slice).unwrap(),
                    s.psi_minus.transport(&ext.slice).unwrap(),
                )
                .unwrap(),
            ),
        };
        let r = evolution_residual(&fam, EvolutionKind::Hitchin).unwrap();
        assert!(r.flag("solves_hitchin").unwrap(), "{r}");
        // while the sin-cone family does not
        let nk = crate::catalog::abstract_models::nk_model().unwrap();
        let fam = sin_cone_g2_family(&nk).unwrap();
        let r = evolution_residual(&fam, EvolutionKind::Hitchin).unwrap();
        assert!(!r.flag("solves_hitchin").unwrap());
        let r = evolution_residual(&fam, EvolutionKind::NearlyHalfFlat).unwrap();
        assert!(r.flag("solves_nearly_half_flat").unwrap(), "{r}");
    }
}
