//! Local Sasaki-Einstein coframe of the Y(p,q) family.
//!
//! The square root in the coefficients is handled by reparametrizing the
//! coefficient ring: `den` is a free generator standing for the cubic
//! a − 3y² + 2cy³ (so `a` is the alias den + 3y² − 2cy³), `den_inv` is its
//! adjoined inverse, and `s12inv` satisfies s12inv² = den_inv/12, i.e.
//! s12inv = (12 den)^{-1/2}.  With those generators the triangular rewriting
//! is complete on the localization, so the structure equations reduce to
//! zero exactly; the acceptance suite additionally clears the declared unit
//! before testing.

use crate::exterior::DifferentialFrame;
use crate::ring::{Ring, RingElement};
use crate::structures::Su2Structure;
use crate::Result;

pub struct Ypq {
    pub frame: DifferentialFrame,
    pub structure: Su2Structure,
    /// The declared positive unit u·den = (1 − c y)·s12inv·den used for
    /// denominator clearing.
    pub clearing_unit: RingElement,
    /// The constant `a` of the metric functions, as an element.
    pub a_alias: RingElement,
}

fn ypq_ring(c_is_zero: bool) -> Result<Ring> {
    let mut b = Ring::builder().gen("y");
    b = if c_is_zero {
        b.gen_with_rule("c", 1, "0")
    } else {
        b.gen("c")
    };
    b.gen("den")
        .gen_inverse("den_inv", "den")
        .gen_with_rule("s12inv", 2, "1/12*den_inv")
        .gen("sin_th")
        .gen_with_rule("cos_th", 2, "1 - sin_th^2")
        .gen("sin_psi")
        .gen_with_rule("cos_psi", 2, "1 - sin_psi^2")
        .build()
}

fn ypq_frame(c_is_zero: bool) -> Result<DifferentialFrame> {
    let ring = ypq_ring(c_is_zero)?;
    DifferentialFrame::builder(if c_is_zero { "ypq-c0" } else { "ypq" }, &ring)
        .constants()
        .closed_all(&["dy", "dbeta", "dtheta", "dphi", "dpsi"])
        .d_generator("y", &[("1", &["dy"])])
        .d_generator("den", &[("-6*y + 6*c*y^2", &["dy"])])
        .d_generator("den_inv", &[("6*y*den_inv^2 - 6*c*y^2*den_inv^2", &["dy"])])
        .d_generator(
            "s12inv",
            &[("3*y*s12inv*den_inv - 3*c*y^2*s12inv*den_inv", &["dy"])],
        )
        .d_generator("sin_th", &[("cos_th", &["dtheta"])])
        .d_generator("cos_th", &[("-sin_th", &["dtheta"])])
        .d_generator("sin_psi", &[("cos_psi", &["dpsi"])])
        .d_generator("cos_psi", &[("-sin_psi", &["dpsi"])])
        .build()
}

fn ypq_structure(frame: &DifferentialFrame) -> Result<Su2Structure> {
    // u = (1 − c y)·s12inv, and u·(w r)/6 = den·s12inv/3.
    let eta = frame.form(&[
        ("1/3", &["dpsi"]),
        ("-1/3*cos_th", &["dphi"]),
        ("1/3*y", &["dbeta"]),
        ("1/3*c*y*cos_th", &["dphi"]),
    ])?;
    let omega3 = frame.form(&[
        ("1/6*c*y*sin_th - 1/6*sin_th", &["dtheta", "dphi"]),
        ("-1/6", &["dy", "dbeta"]),
        ("-1/6*c*cos_th", &["dy", "dphi"]),
    ])?;
    // The transverse pair at phase zero; the structure forms rotate with
    // the Reeb coordinate so that the defining equations close.
    let p0 = frame.form(&[
        ("sin_th*s12inv - c*y*sin_th*s12inv", &["dphi", "dy"]),
        ("1/3*den*s12inv", &["dtheta", "dbeta"]),
        ("1/3*den*s12inv*c*cos_th", &["dtheta", "dphi"]),
    ])?;
    let q0 = frame.form(&[
        ("s12inv - c*y*s12inv", &["dtheta", "dy"]),
        ("-1/3*den*s12inv*sin_th", &["dphi", "dbeta"]),
    ])?;
    let ring = frame.ring();
    let cos = ring.gen("cos_psi")?;
    let sin = ring.gen("sin_psi")?;
    let omega1 = p0.scaled(&cos).add(&q0.scaled(&sin))?;
    let omega2 = q0.scaled(&cos).sub(&p0.scaled(&sin))?;
    Su2Structure::new(eta, omega1, omega2, omega3)
}

pub fn build_ypq() -> Result<Ypq> {
    build_ypq_with(false)
}

/// The c = 0 specialization replaces the generator `c` by the rule c → 0;
/// all the formulas above then reduce accordingly.
pub fn build_ypq_with(c_is_zero: bool) -> Result<Ypq> {
    let frame = ypq_frame(c_is_zero)?;
    let structure = ypq_structure(&frame)?;
    let ring = frame.ring();
    let clearing_unit = ring.parse("(1 - c*y)*s12inv*den")?;
    let a_alias = ring.parse("den + 3*y^2 - 2*c*y^3")?;
    Ok(Ypq {
        frame,
        structure,
        clearing_unit,
        a_alias,
    })
}
