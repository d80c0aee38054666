//! Built-in constructions of the explicit examples: round spheres, the
//! homogeneous nearly Kähler product of two 3-spheres and its hypersurface,
//! the local Sasaki-Einstein coframes on S²×S³, the invariant evolution
//! families, and the abstract model frames.

pub mod abstract_models;
pub mod evolutions;
pub mod s3s3;
pub mod spheres;
pub mod ypq;

use crate::lifts::TimeFamily;
use crate::structures::{G2Structure, Su2Structure, Su3Structure};
use crate::Result;

pub enum EntryPayload {
    Su2(Su2Structure),
    Su3(Su3Structure),
    G2(G2Structure),
    Family(TimeFamily),
}

/// A named example with its documented expected classification.
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Flag name → expected value, asserted by the test suite and shown by
    /// the catalog listing.
    pub expected_flags: Vec<(&'static str, bool)>,
    pub payload: EntryPayload,
}

impl CatalogEntry {
    pub fn kind(&self) -> &'static str {
        match self.payload {
            EntryPayload::Su2(_) => "su2",
            EntryPayload::Su3(_) => "su3",
            EntryPayload::G2(_) => "g2",
            EntryPayload::Family(_) => "family",
        }
    }

    /// Run the applicable classifiers and compare against the expectations.
    /// Returns `(flag, expected, got)` triples.
    pub fn verify(&self) -> Result<Vec<(String, bool, bool)>> {
        let mut flags = std::collections::BTreeMap::new();
        match &self.payload {
            EntryPayload::Su2(s) => {
                flags.extend(crate::structures::classify_su2(s)?.flags);
                flags.extend(crate::structures::check_su2_compatibility(s)?.flags);
            }
            EntryPayload::Su3(s) => {
                flags.extend(crate::structures::classify_su3(s)?.flags);
            }
            EntryPayload::G2(s) => {
                flags.extend(crate::structures::check_nearly_parallel_g2(s)?.flags);
                flags.extend(crate::structures::check_parallel_g2(s)?.flags);
            }
            EntryPayload::Family(fam) => {
                use crate::lifts::{evolution_residual, EvolutionKind, FamilyForms};
                let kinds: &[EvolutionKind] = match fam.forms {
                    FamilyForms::Su2(_) => {
                        &[EvolutionKind::ContiSalamon, EvolutionKind::NearlyHypo]
                    }
                    FamilyForms::Su3(_) => &[EvolutionKind::NearlyHalfFlat, EvolutionKind::Hitchin],
                };
                for &k in kinds {
                    flags.extend(evolution_residual(fam, k)?.flags);
                }
                if let FamilyForms::Su2(s) = &fam.forms {
                    flags.extend(crate::structures::check_su2_compatibility(s)?.flags);
                }
            }
        }
        Ok(self
            .expected_flags
            .iter()
            .map(|&(name, expected)| {
                let got = flags.get(name).copied().unwrap_or(false);
                (name.to_string(), expected, got)
            })
            .collect())
    }
}

/// Every built-in entry.
pub fn entries() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let sph = spheres::build_s6_and_s5()?;
    out.push(CatalogEntry {
        name: "s5",
        summary: "round 5-sphere with its Sasaki-Einstein quadruplet",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", true),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(sph.s5.clone()),
    });
    out.push(CatalogEntry {
        name: "s6",
        summary: "round 6-sphere induced from the flat G2 structure",
        expected_flags: vec![
            ("integrable", false),
            ("half_flat", true),
            ("nearly_half_flat", true),
            ("nearly_kahler", true),
        ],
        payload: EntryPayload::Su3(sph.s6.clone()),
    });
    let prod = s3s3::build_s3s3()?;
    out.push(CatalogEntry {
        name: "s3s3",
        summary: "homogeneous nearly Kähler structure on S3 x S3",
        expected_flags: vec![
            ("integrable", false),
            ("half_flat", true),
            ("nearly_half_flat", true),
            ("nearly_kahler", true),
        ],
        payload: EntryPayload::Su3(prod.mc.clone()),
    });
    let hyp = s3s3::build_s2s3(&prod)?;
    out.push(CatalogEntry {
        name: "s2s3_induced",
        summary: "hypersurface x4 = 0 of S3 x S3 with its induced quadruplet",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", false),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(hyp.induced.clone()),
    });
    out.push(CatalogEntry {
        name: "s2s3_deformed",
        summary: "two-parameter deformation (lambda, mu) of the induced quadruplet",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", false),
            ("double_hypo", false),
            ("sasaki_einstein", false),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(hyp.deformed.clone()),
    });
    out.push(CatalogEntry {
        name: "ypq",
        summary: "local Sasaki-Einstein coframe of the Y(p,q) family",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", true),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(ypq::build_ypq()?.structure),
    });
    let (_, mu_model) = crate::liealg::model_double_hypo()?;
    out.push(CatalogEntry {
        name: "double_hypo_mu_model",
        summary: "invariant double hypo coframe with symbolic parameter mu",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", false),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(mu_model),
    });
    let (_, rho_family) = crate::liealg::cor45_family()?;
    out.push(CatalogEntry {
        name: "su2xA2_rho_family",
        summary: "nearly hypo family on SU(2) x A2 with symbolic rho",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", false),
            ("nearly_hypo", true),
            ("double_hypo", false),
            ("sasaki_einstein", false),
            ("contact", false),
        ],
        payload: EntryPayload::Su2(rho_family),
    });
    let (_, deform) = crate::liealg::deformation_family()?;
    out.push(CatalogEntry {
        name: "deformed_lie_family",
        summary: "hypo deformation with symbolic (r, tau, mu)",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", false),
            ("double_hypo", false),
            ("sasaki_einstein", false),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(deform),
    });
    out.push(CatalogEntry {
        name: "su2xA2_cs_family",
        summary: "hyperbolic solution of the Conti-Salamon evolution leaving the compatible locus",
        expected_flags: vec![("solves_conti_salamon", true), ("compatible", false)],
        payload: EntryPayload::Family(evolutions::cs_family()?),
    });
    out.push(CatalogEntry {
        name: "su2xA2_nh_family",
        summary: "trigonometric solution of the nearly hypo evolution leaving the compatible locus",
        expected_flags: vec![("solves_nearly_hypo", true), ("compatible", false)],
        payload: EntryPayload::Family(evolutions::nh_family()?),
    });
    out.push(CatalogEntry {
        name: "se_model",
        summary: "abstract Sasaki-Einstein model over graded structure symbols",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", true),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(abstract_models::se_model()?),
    });
    out.push(CatalogEntry {
        name: "nk_model",
        summary: "abstract nearly Kähler model over graded structure symbols",
        expected_flags: vec![
            ("integrable", false),
            ("half_flat", true),
            ("nearly_half_flat", true),
            ("nearly_kahler", true),
        ],
        payload: EntryPayload::Su3(abstract_models::nk_model()?),
    });
    out.push(CatalogEntry {
        name: "double_hypo_model",
        summary: "abstract double hypo model with generic d(eta) and d(omega2)",
        expected_flags: vec![
            ("compatible", true),
            ("hypo", true),
            ("nearly_hypo", true),
            ("double_hypo", true),
            ("sasaki_einstein", false),
            ("contact", true),
        ],
        payload: EntryPayload::Su2(abstract_models::double_hypo_model()?),
    });
    Ok(out)
}
