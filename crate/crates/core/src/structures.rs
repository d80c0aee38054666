//! Structure records and exact classifiers.
//!
//! Forms are stored in the Sasaki ordering used by all the explicit
//! examples: a Sasaki-Einstein quadruplet satisfies dη = -2ω₃ and
//! dω₁ = 3η∧ω₂.  The hypo conditions are therefore tested after
//! interchanging ω₁ with ω₃ (the closed 2-form comes first in the
//! Conti-Salamon ordering); the nearly hypo and Sasaki-Einstein equations
//! apply to the quadruplet as stored.

pub mod positivity;

use crate::exterior::{DifferentialFrame, Form, LocusVerdict};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// SU(2)-structure (η, ω₁, ω₂, ω₃) on a 5-dimensional slice.
#[derive(Clone)]
pub struct Su2Structure {
    pub eta: Form,
    pub omega1: Form,
    pub omega2: Form,
    pub omega3: Form,
}

impl Su2Structure {
    pub fn new(eta: Form, omega1: Form, omega2: Form, omega3: Form) -> Result<Self> {
        let frame = eta.frame().clone();
        for f in [&omega1, &omega2, &omega3] {
            if f.frame() != &frame {
                return Err(Error::FrameMismatch);
            }
        }
        Ok(Su2Structure {
            eta,
            omega1,
            omega2,
            omega3,
        })
    }

    pub fn frame(&self) -> &DifferentialFrame {
        self.eta.frame()
    }

    pub fn omegas(&self) -> [&Form; 3] {
        [&self.omega1, &self.omega2, &self.omega3]
    }
}

/// SU(3)-structure (F, Ψ₊, Ψ₋) on a 6-dimensional slice.
#[derive(Clone)]
pub struct Su3Structure {
    pub f: Form,
    pub psi_plus: Form,
    pub psi_minus: Form,
}

impl Su3Structure {
    pub fn new(f: Form, psi_plus: Form, psi_minus: Form) -> Result<Self> {
        let frame = f.frame().clone();
        for x in [&psi_plus, &psi_minus] {
            if x.frame() != &frame {
                return Err(Error::FrameMismatch);
            }
        }
        Ok(Su3Structure {
            f,
            psi_plus,
            psi_minus,
        })
    }

    pub fn frame(&self) -> &DifferentialFrame {
        self.f.frame()
    }
}

/// G2-structure: the 3-form and the dual 4-form supplied by whichever
/// construction produced it.
#[derive(Clone)]
pub struct G2Structure {
    pub phi: Form,
    pub star_phi: Form,
}

impl G2Structure {
    pub fn new(phi: Form, star_phi: Form) -> Result<Self> {
        if phi.frame() != star_phi.frame() {
            return Err(Error::FrameMismatch);
        }
        Ok(G2Structure { phi, star_phi })
    }

    pub fn frame(&self) -> &DifferentialFrame {
        self.phi.frame()
    }
}

/// Named condition with its residual form and verdict.
#[derive(Clone)]
pub struct CheckEntry {
    pub name: String,
    pub residual: Form,
    /// Whether the condition asks the residual to vanish (`true`) or to be
    /// nonzero on the locus (`false`; contact and volume conditions).
    pub expect_zero: bool,
    pub verdict: LocusVerdict,
}

impl CheckEntry {
    pub fn passed(&self) -> bool {
        if self.expect_zero {
            self.verdict.is_zero
        } else {
            !self.verdict.is_zero
        }
    }
}

/// Ordered list of condition checks plus derived classification flags.
#[derive(Clone, Default)]
pub struct CheckReport {
    pub title: String,
    pub entries: Vec<CheckEntry>,
    pub flags: BTreeMap<String, bool>,
}

impl CheckReport {
    pub fn new(title: &str) -> Self {
        CheckReport {
            title: title.to_string(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, name: &str, residual: Form, expect_zero: bool) {
        let verdict = residual.is_zero_on_locus();
        self.entries.push(CheckEntry {
            name: name.to_string(),
            residual,
            expect_zero,
            verdict,
        });
    }

    pub fn set_flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.to_string(), value);
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.get(name).copied()
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
        self.flags.extend(other.flags);
    }

    fn all_zero(&self, names: &[&str]) -> bool {
        names
            .iter()
            .all(|n| self.entry(n).map(|e| e.verdict.is_zero).unwrap_or(false))
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", self.title)?;
        for e in &self.entries {
            let status = match (e.verdict.is_zero, e.verdict.vacuous) {
                (true, true) => "zero (vacuous)",
                (true, false) => "zero",
                (false, _) => "nonzero",
            };
            write!(f, "  {:<44} {status}", e.name)?;
            if !e.verdict.is_zero {
                write!(f, "   residual: {}", e.residual)?;
            }
            writeln!(f)?;
        }
        for (k, v) in &self.flags {
            writeln!(f, "  flag {k} = {v}")?;
        }
        Ok(())
    }
}

/// Compatibility of the defining forms: ωᵢ∧ωⱼ = δᵢⱼ·v with v∧η ≠ 0.
pub fn check_su2_compatibility(s: &Su2Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("su2 compatibility");
    let om = s.omegas();
    let v = om[0].wedge(om[0])?;
    report.push("omega2^2 - omega1^2", om[1].wedge(om[1])?.sub(&v)?, true);
    report.push("omega3^2 - omega1^2", om[2].wedge(om[2])?.sub(&v)?, true);
    report.push("omega1^omega2", om[0].wedge(om[1])?, true);
    report.push("omega1^omega3", om[0].wedge(om[2])?, true);
    report.push("omega2^omega3", om[1].wedge(om[2])?, true);
    report.push("v^eta", v.wedge(&s.eta)?, false);
    let ok = report.all_passed();
    report.set_flag("compatible", ok);
    Ok(report)
}

/// Classification flags for an SU(2)-structure.
pub fn classify_su2(s: &Su2Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("su2 classification");
    let eta = &s.eta;
    let d_eta = eta.d()?;
    let d_omega1 = s.omega1.d()?;
    let d_omega2 = s.omega2.d()?;
    let d_omega3 = s.omega3.d()?;
    let eta_omega1 = eta.wedge(&s.omega1)?;
    let eta_omega2 = eta.wedge(&s.omega2)?;
    let eta_omega3 = eta.wedge(&s.omega3)?;

    // hypo, in the Sasaki ordering (ω₃ is the closed form).
    report.push("d(omega3)", d_omega3.clone(), true);
    report.push("d(eta^omega2)", eta_omega2.d()?, true);
    report.push("d(eta^omega1)", eta_omega1.d()?, true);

    // nearly hypo.
    report.push(
        "d(omega1) - 3 eta^omega2",
        d_omega1.sub(&eta_omega2.scaled_str("3")?)?,
        true,
    );
    report.push(
        "d(eta^omega3) + 2 omega1^omega1",
        eta_omega3
            .d()?
            .add(&s.omega1.wedge(&s.omega1)?.scaled_str("2")?)?,
        true,
    );

    // Sasaki-Einstein.
    report.push(
        "d(eta) + 2 omega3",
        d_eta.add(&s.omega3.scaled_str("2")?)?,
        true,
    );
    report.push(
        "d(omega2) + 3 eta^omega1",
        d_omega2.add(&eta_omega1.scaled_str("3")?)?,
        true,
    );

    // contact: η∧(dη)² ≠ 0.
    report.push("eta^(d eta)^2", eta.wedge(&d_eta)?.wedge(&d_eta)?, false);

    let hypo = report.all_zero(&["d(omega3)", "d(eta^omega2)", "d(eta^omega1)"]);
    let nearly_hypo = report.all_zero(&[
        "d(omega1) - 3 eta^omega2",
        "d(eta^omega3) + 2 omega1^omega1",
    ]);
    let sasaki_einstein = report.all_zero(&[
        "d(eta) + 2 omega3",
        "d(omega1) - 3 eta^omega2",
        "d(omega2) + 3 eta^omega1",
    ]);
    // Independent route for double hypo: the four structure equations.
    let double_hypo = report.all_zero(&[
        "d(eta^omega1)",
        "d(omega1) - 3 eta^omega2",
        "d(eta^omega3) + 2 omega1^omega1",
        "d(omega3)",
    ]);
    let contact = report
        .entry("eta^(d eta)^2")
        .map(|e| e.passed())
        .unwrap_or(false);

    report.set_flag("hypo", hypo);
    report.set_flag("nearly_hypo", nearly_hypo);
    report.set_flag("double_hypo", double_hypo);
    report.set_flag("sasaki_einstein", sasaki_einstein);
    report.set_flag("contact", contact);
    Ok(report)
}

/// Classification flags for an SU(3)-structure.
pub fn classify_su3(s: &Su3Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("su3 classification");
    let d_f = s.f.d()?;
    let d_psi_plus = s.psi_plus.d()?;
    let d_psi_minus = s.psi_minus.d()?;
    let ff = s.f.wedge(&s.f)?;

    report.push("d(F)", d_f.clone(), true);
    report.push("d(psi_plus)", d_psi_plus, true);
    report.push("d(psi_minus)", d_psi_minus.clone(), true);
    report.push("d(F)^F", d_f.wedge(&s.f)?, true);
    report.push(
        "d(F) - 3 psi_plus",
        d_f.sub(&s.psi_plus.scaled_str("3")?)?,
        true,
    );
    report.push(
        "d(psi_minus) + 2 F^F",
        d_psi_minus.add(&ff.scaled_str("2")?)?,
        true,
    );

    let integrable = report.all_zero(&["d(F)", "d(psi_plus)", "d(psi_minus)"]);
    let half_flat = report.all_zero(&["d(F)^F", "d(psi_plus)"]);
    let nearly_half_flat = report.all_zero(&["d(psi_minus) + 2 F^F"]);
    let nearly_kahler = report.all_zero(&["d(F) - 3 psi_plus", "d(psi_minus) + 2 F^F"]);

    report.set_flag("integrable", integrable);
    report.set_flag("half_flat", half_flat);
    report.set_flag("nearly_half_flat", nearly_half_flat);
    report.set_flag("nearly_kahler", nearly_kahler);
    Ok(report)
}

/// Optional SU(3) normalization checks (not enforced by any classifier).
pub fn check_su3_compatibility(s: &Su3Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("su3 compatibility");
    report.push("F^psi_plus", s.f.wedge(&s.psi_plus)?, true);
    report.push("F^psi_minus", s.f.wedge(&s.psi_minus)?, true);
    let f3 = s.f.wedge(&s.f)?.wedge(&s.f)?;
    let pp = s.psi_plus.wedge(&s.psi_minus)?.scaled_str("3/2")?;
    report.push("F^3 - 3/2 psi_plus^psi_minus", f3.sub(&pp)?, true);
    let ok = report.all_passed();
    report.set_flag("normalized", ok);
    Ok(report)
}

/// dφ = 4⋆φ.
pub fn check_nearly_parallel_g2(s: &G2Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("g2 nearly parallel");
    let residual = s.phi.d()?.sub(&s.star_phi.scaled_str("4")?)?;
    report.push("d(phi) - 4 star_phi", residual, true);
    let ok = report.all_passed();
    report.set_flag("nearly_parallel", ok);
    Ok(report)
}

/// dφ = d⋆φ = 0.
pub fn check_parallel_g2(s: &G2Structure) -> Result<CheckReport> {
    let mut report = CheckReport::new("g2 parallel");
    report.push("d(phi)", s.phi.d()?, true);
    report.push("d(star_phi)", s.star_phi.d()?, true);
    let ok = report.all_passed();
    report.set_flag("parallel", ok);
    Ok(report)
}
