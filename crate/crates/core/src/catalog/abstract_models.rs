//! Abstract model frames: the structure forms are graded basis symbols with
//! declared differentials, and products are decided by expanding into the
//! standard constant model.  This turns the general lifting theorems into
//! finite symbolic checks: an identity verified over such a frame uses only
//! the declared structure equations and the exterior-algebra consequences
//! of the compatibility relations.

use crate::exterior as hypoform_terms;
use crate::exterior::DifferentialFrame;
use crate::ring::Ring;
use crate::structures::{Su2Structure, Su3Structure};
use crate::Result;

fn algebra_target(name: &str, ring: &Ring, symbols: &[&str]) -> Result<DifferentialFrame> {
    let mut fb = DifferentialFrame::builder(name, ring);
    for s in symbols {
        fb = fb.symbol(s, 1);
    }
    fb.build()
}

const STD_OMEGA1: &[(&str, &[&str])] = &[("1", &["e1", "e2"]), ("1", &["e3", "e4"])];
const STD_OMEGA2: &[(&str, &[&str])] = &[("1", &["e1", "e3"]), ("-1", &["e2", "e4"])];
const STD_OMEGA3: &[(&str, &[&str])] = &[("1", &["e1", "e4"]), ("1", &["e2", "e3"])];

/// Abstract Sasaki-Einstein model: dη = −2ω₃, dω₁ = 3η∧ω₂, dω₂ = −3η∧ω₁,
/// dω₃ = 0, with products expanded through the standard five-dimensional
/// model.
pub fn se_model() -> Result<Su2Structure> {
    let ring = Ring::builder().build()?;
    let target = algebra_target("se-target", &ring, &["e1", "e2", "e3", "e4", "e5"])?;
    let frame = DifferentialFrame::builder("se-model", &ring)
        .symbol_d("eta", 1, &[("-2", &["omega3"])])
        .symbol_d("omega1", 2, &[("3", &["eta", "omega2"])])
        .symbol_d("omega2", 2, &[("-3", &["eta", "omega1"])])
        .symbol_d("omega3", 2, &[])
        .expansion(
            &target,
            &[
                ("eta", &[("1", &["e5"])]),
                ("omega1", STD_OMEGA1),
                ("omega2", STD_OMEGA2),
                ("omega3", STD_OMEGA3),
            ],
        )
        .build()?;
    Su2Structure::new(
        frame.sym("eta")?,
        frame.sym("omega1")?,
        frame.sym("omega2")?,
        frame.sym("omega3")?,
    )
}

/// Fully free differentials: dη, dωᵢ are fresh symbols with no relations at
/// all (no expansion).  Used for the converse decompositions, where the
/// residual must be expressed in terms of the unconstrained differentials.
pub struct FreeSu2Model {
    pub frame: DifferentialFrame,
    pub structure: Su2Structure,
}

pub fn se_model_free_differentials() -> Result<FreeSu2Model> {
    let ring = Ring::builder().build()?;
    let frame = DifferentialFrame::builder("su2-free-d", &ring)
        .symbol_d("eta", 1, &[("1", &["deta"])])
        .symbol_d("omega1", 2, &[("1", &["domega1"])])
        .symbol_d("omega2", 2, &[("1", &["domega2"])])
        .symbol_d("omega3", 2, &[("1", &["domega3"])])
        .symbol_d("deta", 2, &[])
        .symbol_d("domega1", 3, &[])
        .symbol_d("domega2", 3, &[])
        .symbol_d("domega3", 3, &[])
        .build()?;
    let structure = Su2Structure::new(
        frame.sym("eta")?,
        frame.sym("omega1")?,
        frame.sym("omega2")?,
        frame.sym("omega3")?,
    )?;
    Ok(FreeSu2Model { frame, structure })
}

/// Partially imposed model for the second converse direction: dω₁ and dω₃
/// follow the Sasaki-Einstein rules, while dη and dω₂ expand to generic
/// forms with fresh coefficient generators.  d² is deferred (the generic
/// data does not close).
pub fn se_model_partial() -> Result<FreeSu2Model> {
    let mut b = Ring::builder();
    let pairs: [(usize, usize); 10] = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (2, 3),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 5),
    ];
    for &(i, j) in &pairs {
        b = b.gen(&format!("b{i}{j}"));
    }
    let triples: [(usize, usize, usize); 10] = [
        (1, 2, 3),
        (1, 2, 4),
        (1, 2, 5),
        (1, 3, 4),
        (1, 3, 5),
        (1, 4, 5),
        (2, 3, 4),
        (2, 3, 5),
        (2, 4, 5),
        (3, 4, 5),
    ];
    for &(i, j, k) in &triples {
        b = b.gen(&format!("w{i}{j}{k}"));
    }
    let ring = b.build()?;
    let target = algebra_target("se-partial-target", &ring, &["e1", "e2", "e3", "e4", "e5"])?;
    let deta_terms: Vec<(String, Vec<String>)> = pairs
        .iter()
        .map(|&(i, j)| (format!("b{i}{j}"), vec![format!("e{i}"), format!("e{j}")]))
        .collect();
    let domega2_terms: Vec<(String, Vec<String>)> = triples
        .iter()
        .map(|&(i, j, k)| {
            (
                format!("w{i}{j}{k}"),
                vec![format!("e{i}"), format!("e{j}"), format!("e{k}")],
            )
        })
        .collect();
    let to_refs = |v: &[(String, Vec<String>)]| -> Vec<(String, Vec<String>)> { v.to_vec() };
    let frame = {
        let fb = DifferentialFrame::builder("se-partial", &ring)
            .constants()
            .defer_closure_check()
            .symbol_d("eta", 1, &[("1", &["deta"])])
            .symbol_d("omega1", 2, &[("3", &["eta", "omega2"])])
            .symbol_d("omega2", 2, &[("1", &["domega2"])])
            .symbol_d("omega3", 2, &[])
            .symbol_d("deta", 2, &[])
            .symbol_d("domega2", 3, &[]);
        // expansion images, with the generic forms for the free symbols
        let eta_img: Vec<(String, Vec<String>)> = vec![("1".into(), vec!["e5".into()])];
        let o1: Vec<(String, Vec<String>)> = vec![
            ("1".into(), vec!["e1".into(), "e2".into()]),
            ("1".into(), vec!["e3".into(), "e4".into()]),
        ];
        let o2: Vec<(String, Vec<String>)> = vec![
            ("1".into(), vec!["e1".into(), "e3".into()]),
            ("-1".into(), vec!["e2".into(), "e4".into()]),
        ];
        let o3: Vec<(String, Vec<String>)> = vec![
            ("1".into(), vec!["e1".into(), "e4".into()]),
            ("1".into(), vec!["e2".into(), "e3".into()]),
        ];
        let images: Vec<(String, hypoform_terms::TermList)> = vec![
            ("eta".into(), eta_img),
            ("omega1".into(), o1),
            ("omega2".into(), o2),
            ("omega3".into(), o3),
            ("deta".into(), to_refs(&deta_terms)),
            ("domega2".into(), to_refs(&domega2_terms)),
        ];
        fb.expansion_terms(&target, images).build()?
    };
    let structure = Su2Structure::new(
        frame.sym("eta")?,
        frame.sym("omega1")?,
        frame.sym("omega2")?,
        frame.sym("omega3")?,
    )?;
    Ok(FreeSu2Model { frame, structure })
}

const STD_F6: &[(&str, &[&str])] = &[
    ("1", &["e1", "e2"]),
    ("1", &["e3", "e4"]),
    ("1", &["e5", "e6"]),
];
const STD_PSI_PLUS: &[(&str, &[&str])] = &[
    ("1", &["e1", "e3", "e5"]),
    ("-1", &["e1", "e4", "e6"]),
    ("-1", &["e2", "e3", "e6"]),
    ("-1", &["e2", "e4", "e5"]),
];
const STD_PSI_MINUS: &[(&str, &[&str])] = &[
    ("1", &["e1", "e3", "e6"]),
    ("1", &["e1", "e4", "e5"]),
    ("1", &["e2", "e3", "e5"]),
    ("-1", &["e2", "e4", "e6"]),
];

/// Abstract nearly Kähler model: dF = 3Ψ₊, dΨ₊ = 0, dΨ₋ = −2F∧F, expanded
/// through the standard six-dimensional model.
pub fn nk_model() -> Result<Su3Structure> {
    let ring = Ring::builder().build()?;
    let target = algebra_target("nk-target", &ring, &["e1", "e2", "e3", "e4", "e5", "e6"])?;
    let frame = DifferentialFrame::builder("nk-model", &ring)
        .symbol_d("f", 2, &[("3", &["psi_plus"])])
        .symbol_d("psi_plus", 3, &[])
        .symbol_d("psi_minus", 3, &[("-2", &["f", "f"])])
        .expansion(
            &target,
            &[
                ("f", STD_F6),
                ("psi_plus", STD_PSI_PLUS),
                ("psi_minus", STD_PSI_MINUS),
            ],
        )
        .build()?;
    Su3Structure::new(
        frame.sym("f")?,
        frame.sym("psi_plus")?,
        frame.sym("psi_minus")?,
    )
}

/// Nearly Kähler rules over a completely free graded algebra (no expansion,
/// no compatibility relations).  Separates the flag classes: the nearly
/// Kähler equations alone do not imply half-flatness.  d² is deferred
/// because d²Ψ₋ = −12 F∧Ψ₊ only vanishes with the compatibility relation.
pub fn nk_model_free() -> Result<Su3Structure> {
    let ring = Ring::builder().build()?;
    let frame = DifferentialFrame::builder("nk-free", &ring)
        .defer_closure_check()
        .symbol_d("f", 2, &[("3", &["psi_plus"])])
        .symbol_d("psi_plus", 3, &[])
        .symbol_d("psi_minus", 3, &[("-2", &["f", "f"])])
        .build()?;
    Su3Structure::new(
        frame.sym("f")?,
        frame.sym("psi_plus")?,
        frame.sym("psi_minus")?,
    )
}

/// SU(3) model with fully free differentials, for the G2 sin-cone converse
/// decomposition.
pub struct FreeSu3Model {
    pub frame: DifferentialFrame,
    pub structure: Su3Structure,
}

pub fn su3_model_free_differentials() -> Result<FreeSu3Model> {
    let ring = Ring::builder().build()?;
    let frame = DifferentialFrame::builder("su3-free-d", &ring)
        .symbol_d("f", 2, &[("1", &["df"])])
        .symbol_d("psi_plus", 3, &[("1", &["dpsi_plus"])])
        .symbol_d("psi_minus", 3, &[("1", &["dpsi_minus"])])
        .symbol_d("df", 3, &[])
        .symbol_d("dpsi_plus", 4, &[])
        .symbol_d("dpsi_minus", 4, &[])
        .build()?;
    let structure = Su3Structure::new(
        frame.sym("f")?,
        frame.sym("psi_plus")?,
        frame.sym("psi_minus")?,
    )?;
    Ok(FreeSu3Model { frame, structure })
}

/// Abstract double hypo model: dω₁ = 3η∧ω₂ and dω₃ = 0 are imposed, while
/// dη and dω₂ are as generic as the double hypo equations allow — dη
/// expands to b₁₂(e¹²−e³⁴) + b₁₃(e¹³+e²⁴) + b₁₄e¹⁴ − (4+b₁₄)e²³ and dω₂ to
/// an arbitrary combination of the e^{ij5}.
pub fn double_hypo_model() -> Result<Su2Structure> {
    let ring = Ring::builder()
        .gens(&[
            "b12", "b13", "b14", "w12", "w13", "w14", "w23", "w24", "w34",
        ])
        .build()?;
    let target = algebra_target("dh-target", &ring, &["e1", "e2", "e3", "e4", "e5"])?;
    let frame = DifferentialFrame::builder("double-hypo-model", &ring)
        .constants()
        .symbol_d("eta", 1, &[("1", &["b_eta"])])
        .symbol_d("omega1", 2, &[("3", &["eta", "omega2"])])
        .symbol_d("omega2", 2, &[("1", &["w2"])])
        .symbol_d("omega3", 2, &[])
        .symbol_d("b_eta", 2, &[])
        .symbol_d("w2", 3, &[])
        .expansion(
            &target,
            &[
                ("eta", &[("1", &["e5"])]),
                ("omega1", STD_OMEGA1),
                ("omega2", STD_OMEGA2),
                ("omega3", STD_OMEGA3),
                (
                    "b_eta",
                    &[
                        ("b12", &["e1", "e2"]),
                        ("-b12", &["e3", "e4"]),
                        ("b13", &["e1", "e3"]),
                        ("b13", &["e2", "e4"]),
                        ("b14", &["e1", "e4"]),
                        ("-4 - b14", &["e2", "e3"]),
                    ],
                ),
                (
                    "w2",
                    &[
                        ("w12", &["e1", "e2", "e5"]),
                        ("w13", &["e1", "e3", "e5"]),
                        ("w14", &["e1", "e4", "e5"]),
                        ("w23", &["e2", "e3", "e5"]),
                        ("w24", &["e2", "e4", "e5"]),
                        ("w34", &["e3", "e4", "e5"]),
                    ],
                ),
            ],
        )
        .build()?;
    Su2Structure::new(
        frame.sym("eta")?,
        frame.sym("omega1")?,
        frame.sym("omega2")?,
        frame.sym("omega3")?,
    )
}
