//! The structure-file JSON format and its conversion to engine objects.
//!
//! See `docs/format.md` for the documented schema and the expression
//! grammar.  Parsing is strict: malformed indices, unknown names and
//! inconsistent relations are rejected with located errors.

use hypoform::exterior::{DifferentialFrame, Form, FrameBuilder};
use hypoform::lifts::{FamilyForms, TimeFamily};
use hypoform::ring::{Ring, RingBuilder};
use hypoform::structures::{G2Structure, Su2Structure, Su3Structure};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct StructureFile {
    pub ring: RingBlock,
    pub coframe: CoframeBlock,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub locus: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionBlock>,
    pub structure: StructureBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<BTreeMap<String, bool>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct RingBlock {
    #[serde(default)]
    pub generators: Vec<GenBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivations: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GenBlock {
    pub name: String,
    /// `"g^k = rhs"` or `"g*h = 1"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    /// Exterior derivative of the generator, as a 1-form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Term>>,
    /// Named derivation values (e.g. the time derivative).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivations: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct CoframeBlock {
    pub names: Vec<String>,
    /// Symbol degrees; all 1 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u8>>,
    /// Exterior derivatives of the coframe symbols.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<BTreeMap<String, Vec<Term>>>,
    /// Alternative to `d` for Lie coframes: deⁱ = Σ_{j<k} cⁱⱼₖ e^{jk}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<StructureConstant>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthonormal: Option<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Term {
    pub coeff: String,
    /// 1-based coframe indices, strictly increasing.
    pub indices: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ExpansionBlock {
    pub coframe: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u8>>,
    pub map: BTreeMap<String, Vec<Term>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct StructureBlock {
    pub kind: String,
    #[serde(flatten)]
    pub forms: BTreeMap<String, Vec<Term>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FamilyBlock {
    pub time: String,
}

/// Parse errors (exit 2) versus frame inconsistencies (exit 3).
#[derive(Debug)]
pub enum LoadError {
    Parse(String),
    Inconsistent(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(m) => write!(f, "parse error: {m}"),
            LoadError::Inconsistent(m) => write!(f, "frame inconsistency: {m}"),
        }
    }
}

fn classify_core_error(e: hypoform::Error) -> LoadError {
    use hypoform::Error as E;
    match e {
        E::NotClosed(_)
        | E::RelationNotClosed(_)
        | E::DerivationIncompatible { .. }
        | E::BadExpansion { .. }
        | E::InconsistentMorphism(_)
        | E::SubstitutionInconsistent(_) => LoadError::Inconsistent(e.to_string()),
        other => LoadError::Parse(other.to_string()),
    }
}

pub struct LoadedFile {
    pub kind: Kind,
    pub expect: Option<BTreeMap<String, bool>>,
    pub time: Option<String>,
}

pub enum Kind {
    Su2(Su2Structure),
    Su3(Su3Structure),
    G2(G2Structure),
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Su2(_) => "su2",
            Kind::Su3(_) => "su3",
            Kind::G2(_) => "g2",
        }
    }
}

fn build_ring(block: &RingBlock) -> Result<Ring, LoadError> {
    let mut b: RingBuilder = Ring::builder();
    for d in &block.derivations {
        b = b.derivation(d);
    }
    for g in &block.generators {
        match &g.relation {
            None => b = b.gen(&g.name),
            Some(rel) => {
                let (lhs, rhs) = rel
                    .split_once('=')
                    .ok_or_else(|| LoadError::Parse(format!("relation `{rel}` lacks `=`")))?;
                let lhs = lhs.trim();
                let rhs = rhs.trim();
                if let Some((base, k)) = lhs.split_once('^') {
                    if base.trim() != g.name {
                        return Err(LoadError::Parse(format!(
                            "relation of `{}` must rewrite its own power",
                            g.name
                        )));
                    }
                    let k: u16 = k
                        .trim()
                        .parse()
                        .map_err(|_| LoadError::Parse(format!("bad exponent in `{rel}`")))?;
                    b = b.gen_with_rule(&g.name, k, rhs);
                } else if let Some((x, y)) = lhs.split_once('*') {
                    if rhs != "1" {
                        return Err(LoadError::Parse(format!(
                            "inverse pair `{rel}` must equal 1"
                        )));
                    }
                    let (x, y) = (x.trim(), y.trim());
                    let partner = if x == g.name {
                        y
                    } else if y == g.name {
                        x
                    } else {
                        return Err(LoadError::Parse(format!(
                            "relation of `{}` must mention it",
                            g.name
                        )));
                    };
                    b = b.gen_inverse(&g.name, partner);
                } else {
                    return Err(LoadError::Parse(format!(
                        "relation `{rel}` is neither a power rule nor an inverse pair"
                    )));
                }
            }
        }
        if let Some(derivs) = &g.derivations {
            for (name, value) in derivs {
                b = b.deriv(name, value);
            }
        }
    }
    b.build().map_err(classify_core_error)
}

fn term_list(
    terms: &[Term],
    names: &[String],
    degrees: &[u8],
) -> Result<Vec<(String, Vec<String>)>, LoadError> {
    terms
        .iter()
        .map(|t| {
            for w in t.indices.windows(2) {
                if w[0] > w[1] {
                    return Err(LoadError::Parse(format!(
                        "indices {:?} are not increasing",
                        t.indices
                    )));
                }
                // repeats are legal only for even-degree symbols
                if w[0] == w[1] {
                    let deg = *degrees.get(w[0].saturating_sub(1)).unwrap_or(&1);
                    if deg % 2 == 1 {
                        return Err(LoadError::Parse(format!(
                            "indices {:?} repeat an odd-degree symbol",
                            t.indices
                        )));
                    }
                }
            }
            let syms = t
                .indices
                .iter()
                .map(|&i| {
                    if i == 0 || i > names.len() {
                        Err(LoadError::Parse(format!("index {i} out of range")))
                    } else {
                        Ok(names[i - 1].clone())
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((t.coeff.clone(), syms))
        })
        .collect()
}

pub fn build_frame(doc: &StructureFile, name: &str) -> Result<DifferentialFrame, LoadError> {
    let ring = build_ring(&doc.ring)?;
    let names = &doc.coframe.names;
    let degrees: Vec<u8> = match &doc.coframe.degrees {
        None => vec![1; names.len()],
        Some(d) => {
            if d.len() != names.len() {
                return Err(LoadError::Parse("degrees length mismatch".into()));
            }
            d.clone()
        }
    };
    let mut fb: FrameBuilder = DifferentialFrame::builder(name, &ring).constants();
    if doc.coframe.orthonormal.unwrap_or(false) {
        fb = fb.orthonormal(true);
    }
    // d-rules for the coframe: explicit map or structure constants
    let mut d_map: BTreeMap<String, Vec<(String, Vec<String>)>> = BTreeMap::new();
    if let Some(d) = &doc.coframe.d {
        for (sym, terms) in d {
            d_map.insert(sym.clone(), term_list(terms, names, &degrees)?);
        }
    }
    if let Some(constants) = &doc.coframe.structure_constants {
        for c in constants {
            if c.j >= c.k {
                return Err(LoadError::Parse(format!(
                    "structure constant indices ({}, {}) must satisfy j < k",
                    c.j, c.k
                )));
            }
            for idx in [c.i, c.j, c.k] {
                if idx == 0 || idx > names.len() {
                    return Err(LoadError::Parse(format!("index {idx} out of range")));
                }
            }
            d_map.entry(names[c.i - 1].clone()).or_default().push((
                c.value.clone(),
                vec![names[c.j - 1].clone(), names[c.k - 1].clone()],
            ));
        }
        // coframe symbols without constants are closed
        for n in names {
            d_map.entry(n.clone()).or_default();
        }
    }
    for (i, n) in names.iter().enumerate() {
        match d_map.remove(n) {
            Some(terms) => fb = fb.symbol_d_terms(n, degrees[i], terms),
            None => fb = fb.symbol(n, degrees[i]),
        }
    }
    if !d_map.is_empty() {
        let unknown: Vec<&String> = d_map.keys().collect();
        return Err(LoadError::Parse(format!(
            "d rules for unknown coframe symbols {unknown:?}"
        )));
    }
    for g in &doc.ring.generators {
        if let Some(d) = &g.d {
            fb = fb.d_generator_terms(&g.name, term_list(d, names, &degrees)?);
        }
    }
    for theta in &doc.locus {
        fb = fb.locus_terms(term_list(theta, names, &degrees)?);
    }
    let expansion_target = match &doc.expansion {
        None => None,
        Some(block) => {
            let tdeg = match &block.degrees {
                None => vec![1u8; block.coframe.len()],
                Some(d) => d.clone(),
            };
            let mut tb = DifferentialFrame::builder(&format!("{name}-target"), &ring);
            for (n, d) in block.coframe.iter().zip(&tdeg) {
                tb = tb.symbol(n, *d);
            }
            Some((tb.build().map_err(classify_core_error)?, block))
        }
    };
    if let Some((target, block)) = &expansion_target {
        let tdeg = match &block.degrees {
            None => vec![1u8; block.coframe.len()],
            Some(d) => d.clone(),
        };
        let images: Vec<(String, hypoform::exterior::TermList)> = block
            .map
            .iter()
            .map(|(sym, terms)| Ok((sym.clone(), term_list(terms, &block.coframe, &tdeg)?)))
            .collect::<Result<Vec<_>, LoadError>>()?;
        fb = fb.expansion_terms(target, images);
    }
    fb.build().map_err(classify_core_error)
}

fn form_from(
    frame: &DifferentialFrame,
    doc: &StructureFile,
    key: &str,
    degree: u8,
) -> Result<Form, LoadError> {
    let terms = doc
        .structure
        .forms
        .get(key)
        .ok_or_else(|| LoadError::Parse(format!("structure is missing the form `{key}`")))?;
    let degrees = match &doc.coframe.degrees {
        None => vec![1u8; doc.coframe.names.len()],
        Some(d) => d.clone(),
    };
    let list = term_list(terms, &doc.coframe.names, &degrees)?;
    let elems = list
        .iter()
        .map(|(c, syms)| {
            Ok((
                frame.ring().parse(c).map_err(classify_core_error)?,
                syms.iter()
                    .map(|s| frame.symbol_index(s).map_err(classify_core_error))
                    .collect::<Result<Vec<_>, _>>()?,
            ))
        })
        .collect::<Result<Vec<_>, LoadError>>()?;
    let f = frame
        .form_from_elements(elems)
        .map_err(classify_core_error)?;
    if !f.is_empty() && f.degree() != degree {
        return Err(LoadError::Parse(format!(
            "form `{key}` must have degree {degree}, got {}",
            f.degree()
        )));
    }
    Ok(f)
}

pub fn load(doc: StructureFile, name: &str) -> Result<LoadedFile, LoadError> {
    let frame = build_frame(&doc, name)?;
    // metric block is validated for shape and symmetry but only recorded
    if let Some(m) = &doc.metric {
        let n = frame.dimension();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(LoadError::Parse("metric must be an n x n matrix".into()));
        }
        let entries: Vec<Vec<_>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| frame.ring().parse(e).map_err(classify_core_error))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        hypoform::exterior::BilinearForm::new(&frame, entries).map_err(classify_core_error)?;
    }
    let kind = match doc.structure.kind.as_str() {
        "su2" => Kind::Su2(
            Su2Structure::new(
                form_from(&frame, &doc, "eta", 1)?,
                form_from(&frame, &doc, "omega1", 2)?,
                form_from(&frame, &doc, "omega2", 2)?,
                form_from(&frame, &doc, "omega3", 2)?,
            )
            .map_err(classify_core_error)?,
        ),
        "su3" => Kind::Su3(
            Su3Structure::new(
                form_from(&frame, &doc, "f", 2)?,
                form_from(&frame, &doc, "psi_plus", 3)?,
                form_from(&frame, &doc, "psi_minus", 3)?,
            )
            .map_err(classify_core_error)?,
        ),
        "g2" => Kind::G2(
            G2Structure::new(
                form_from(&frame, &doc, "phi", 3)?,
                form_from(&frame, &doc, "star_phi", 4)?,
            )
            .map_err(classify_core_error)?,
        ),
        other => {
            return Err(LoadError::Parse(format!(
                "unknown structure kind `{other}`"
            )))
        }
    };
    let time = match &doc.family {
        None => None,
        Some(f) => {
            if !frame.ring().derivations().iter().any(|d| d == &f.time) {
                return Err(LoadError::Parse(format!(
                    "family time `{}` is not a declared derivation",
                    f.time
                )));
            }
            Some(f.time.clone())
        }
    };
    Ok(LoadedFile {
        kind,
        expect: doc.expect.clone(),
        time,
    })
}

pub fn family_of(loaded: &LoadedFile) -> Result<TimeFamily, LoadError> {
    let time = loaded
        .time
        .clone()
        .ok_or_else(|| LoadError::Parse("file has no family block".into()))?;
    let forms = match &loaded.kind {
        Kind::Su2(s) => FamilyForms::Su2(s.clone()),
        Kind::Su3(s) => FamilyForms::Su3(s.clone()),
        Kind::G2(_) => return Err(LoadError::Parse("G2 structures have no family".into())),
    };
    Ok(TimeFamily { time, forms })
}

fn render_terms(f: &Form) -> Vec<Term> {
    f.terms()
        .map(|(m, c)| Term {
            coeff: c.to_string(),
            indices: m.indices().map(|i| i + 1).collect(),
        })
        .collect()
}

/// Serialize a frame and structure back into the file format.
pub fn export(frame: &DifferentialFrame, kind: &Kind, time: Option<&str>) -> StructureFile {
    let ring = frame.ring();
    let mut generators = Vec::new();
    for i in 0..ring.generator_count() {
        let name = ring.generator_name(i).to_string();
        let relation = match ring.power_rule_of(i) {
            Some((k, rhs)) => Some(format!("{name}^{k} = {rhs}")),
            None => ring.inverse_partner_of(i).and_then(|p| {
                if p < i {
                    Some(format!("{name}*{} = 1", ring.generator_name(p)))
                } else {
                    None
                }
            }),
        };
        let d = frame.d_generator(i).map(|f| render_terms(&f));
        let mut derivs = BTreeMap::new();
        for dname in ring.derivations() {
            if let Some(v) = ring.derivation_value(i, dname) {
                derivs.insert(dname.clone(), v.to_string());
            }
        }
        generators.push(GenBlock {
            name,
            relation,
            d,
            derivations: if derivs.is_empty() {
                None
            } else {
                Some(derivs)
            },
        });
    }
    let names: Vec<String> = frame.symbol_names().map(|s| s.to_string()).collect();
    let degrees: Vec<u8> = (0..frame.dimension())
        .map(|i| frame.symbol_degree(i))
        .collect();
    let mut d = BTreeMap::new();
    for i in 0..frame.dimension() {
        if let Some(rule) = frame.d_symbol(i) {
            d.insert(frame.symbol_name(i).to_string(), render_terms(&rule));
        }
    }
    let locus = frame.locus().iter().map(render_terms).collect::<Vec<_>>();
    let expansion = frame.expansion_target().map(|target| {
        let mut map = BTreeMap::new();
        for i in 0..frame.dimension() {
            map.insert(
                frame.symbol_name(i).to_string(),
                render_terms(&frame.expansion_image(i).unwrap()),
            );
        }
        ExpansionBlock {
            coframe: target.symbol_names().map(|s| s.to_string()).collect(),
            degrees: Some(
                (0..target.dimension())
                    .map(|i| target.symbol_degree(i))
                    .collect(),
            ),
            map,
        }
    });
    let mut forms = BTreeMap::new();
    let kind_name = match kind {
        Kind::Su2(s) => {
            forms.insert("eta".into(), render_terms(&s.eta));
            forms.insert("omega1".into(), render_terms(&s.omega1));
            forms.insert("omega2".into(), render_terms(&s.omega2));
            forms.insert("omega3".into(), render_terms(&s.omega3));
            "su2"
        }
        Kind::Su3(s) => {
            forms.insert("f".into(), render_terms(&s.f));
            forms.insert("psi_plus".into(), render_terms(&s.psi_plus));
            forms.insert("psi_minus".into(), render_terms(&s.psi_minus));
            "su3"
        }
        Kind::G2(s) => {
            forms.insert("phi".into(), render_terms(&s.phi));
            forms.insert("star_phi".into(), render_terms(&s.star_phi));
            "g2"
        }
    };
    StructureFile {
        ring: RingBlock {
            generators,
            derivations: ring.derivations().to_vec(),
        },
        coframe: CoframeBlock {
            names,
            degrees: if degrees.iter().all(|&d| d == 1) {
                None
            } else {
                Some(degrees)
            },
            d: if d.is_empty() { None } else { Some(d) },
            structure_constants: None,
            orthonormal: if frame.is_orthonormal() {
                Some(true)
            } else {
                None
            },
        },
        locus,
        metric: None,
        expansion,
        structure: StructureBlock {
            kind: kind_name.to_string(),
            forms,
        },
        family: time.map(|t| FamilyBlock {
            time: t.to_string(),
        }),
        expect: None,
    }
}
