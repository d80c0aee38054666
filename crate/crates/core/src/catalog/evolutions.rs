//! Invariant evolution families over the μ = 0 double hypo coframe: a
//! hyperbolic solution of the Conti-Salamon system and a trigonometric
//! solution of the nearly hypo system, neither of which stays inside the
//! compatible locus.

use crate::exterior::DifferentialFrame;
use crate::liealg::standard_su2_forms;
use crate::lifts::{extend_with_time, FamilyForms, TimeFamily, TimeGen};
use crate::ring::Ring;
use crate::structures::Su2Structure;
use crate::Result;

fn mu0_frame(with_sqrt3: bool) -> Result<DifferentialFrame> {
    let mut b = Ring::builder();
    if with_sqrt3 {
        b = b.gen_with_rule("sqrt3", 2, "3");
    }
    let ring = b.build()?;
    DifferentialFrame::builder("su2xA2", &ring)
        .constants()
        .closed("e1")
        .symbol_d("e2", 1, &[("-3", &["e3", "e5"])])
        .symbol_d("e3", 1, &[("3", &["e2", "e5"])])
        .closed("e4")
        .symbol_d("e5", 1, &[("-4", &["e2", "e3"])])
        .build()
}

/// η(t) = η, ω₁(t) = ω₁ − t dη, ω₂(t) = cosh 3t ω₂, ω₃(t) = −sinh 3t ω₁ + ω₃.
pub fn cs_family() -> Result<TimeFamily> {
    let base = mu0_frame(false)?;
    let ext = extend_with_time(
        &base,
        "t",
        "dt",
        &[
            TimeGen {
                name: "t",
                rule: None,
                derivative: "1",
            },
            TimeGen {
                name: "sinh_3t",
                rule: None,
                derivative: "3*cosh_3t",
            },
            TimeGen {
                name: "cosh_3t",
                rule: Some((2, "1 + sinh_3t^2")),
                derivative: "3*sinh_3t",
            },
        ],
    )?;
    let frame = &ext.slice;
    let s0 = standard_su2_forms(frame)?;
    let ring = frame.ring();
    // -t dη = 4t e23
    let omega1 = s0.omega1.add(&frame.form(&[("4*t", &["e2", "e3"])])?)?;
    let omega2 = s0.omega2.scaled(&ring.gen("cosh_3t")?);
    let omega3 = s0
        .omega1
        .scaled(&ring.gen("sinh_3t")?)
        .neg()
        .add(&s0.omega3)?;
    let family = Su2Structure::new(s0.eta.clone(), omega1, omega2, omega3)?;
    Ok(TimeFamily {
        time: "t".into(),
        forms: FamilyForms::Su2(family),
    })
}

/// η(t) = η, ω₂(t) = cos √3t ω₂, with ω₁(t), ω₃(t) mixing e¹⁴ and e²³ through
/// the double angle (expanded into the base pair at construction).
pub fn nh_family() -> Result<TimeFamily> {
    let base = mu0_frame(true)?;
    let ext = extend_with_time(
        &base,
        "t",
        "dt",
        &[
            TimeGen {
                name: "sin_r3t",
                rule: None,
                derivative: "sqrt3*cos_r3t",
            },
            TimeGen {
                name: "cos_r3t",
                rule: Some((2, "1 - sin_r3t^2")),
                derivative: "-sqrt3*sin_r3t",
            },
        ],
    )?;
    let frame = &ext.slice;
    let s0 = standard_su2_forms(frame)?;
    let ring = frame.ring();
    let cos = ring.gen("cos_r3t")?;
    // sin 2√3t = 2 sin √3t cos √3t,  cos 2√3t = 1 − 2 sin²√3t.
    let omega1 = s0.omega1.scaled(&cos).add(&frame.form(&[
        ("-sqrt3*sin_r3t*cos_r3t", &["e1", "e4"]),
        ("1/3*sqrt3*sin_r3t*cos_r3t", &["e2", "e3"]),
    ])?)?;
    let omega2 = s0.omega2.scaled(&cos);
    let omega3 = s0
        .omega1
        .scaled(&ring.parse("1/3*sqrt3*sin_r3t")?)
        .add(&frame.form(&[
            ("1 - 2*sin_r3t^2", &["e1", "e4"]),
            ("1 + 2/3*sin_r3t^2", &["e2", "e3"]),
        ])?)?;
    let family = Su2Structure::new(s0.eta.clone(), omega1, omega2, omega3)?;
    Ok(TimeFamily {
        time: "t".into(),
        forms: FamilyForms::Su2(family),
    })
}
