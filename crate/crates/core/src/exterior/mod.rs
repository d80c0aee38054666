//! Exterior algebra of forms over a differential frame.
//!
//! A frame is a graded basis of symbols together with declared exterior
//! derivatives.  For a coordinate or Lie coframe every symbol has degree
//! one and `d` of a symbol is a declared 2-form; for the abstract model
//! frames the symbols are the structure forms themselves (degree 1 and 2)
//! and products are decided through an expansion homomorphism into a plain
//! algebra frame.  Zero-testing a form always means: reduce coefficients to
//! ring normal form, expand through the expansion map if one is declared,
//! and check that no monomials remain.

mod form;

pub use form::{BilinearForm, Form, FrameVector, LocusVerdict};

use crate::ring::{Ring, RingElement, Substitution};
use crate::{Error, Result};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// Basis monomial: ascending symbol indices; odd-degree symbols appear at
/// most once, even-degree symbols may repeat.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SymMono(pub(crate) SmallVec<[u8; 8]>);

impl SymMono {
    pub fn scalar() -> Self {
        SymMono(SmallVec::new())
    }

    pub fn single(idx: usize) -> Self {
        SymMono(SmallVec::from_slice(&[idx as u8]))
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        SymMono(indices.iter().map(|&i| i as u8).collect())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Frame-free form payload.
pub type FormData = BTreeMap<SymMono, RingElement>;

pub(crate) struct ExpansionData {
    pub target: DifferentialFrame,
    /// Image of each symbol, as a form over the target frame.
    pub images: Vec<FormData>,
}

pub struct FrameData {
    name: String,
    ring: Ring,
    symbols: Vec<(String, u8)>,
    d_symbols: Vec<Option<FormData>>,
    d_generators: Vec<Option<FormData>>,
    locus: Vec<FormData>,
    orthonormal: bool,
    expansion: Option<ExpansionData>,
}

/// Shared immutable handle to a frame.
#[derive(Clone)]
pub struct DifferentialFrame(pub(crate) Rc<FrameData>);

impl PartialEq for DifferentialFrame {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for DifferentialFrame {}

impl fmt::Debug for DifferentialFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DifferentialFrame({})", self.0.name)
    }
}

impl DifferentialFrame {
    pub fn builder(name: &str, ring: &Ring) -> FrameBuilder {
        FrameBuilder {
            name: name.to_string(),
            ring: ring.clone(),
            symbols: Vec::new(),
            d_symbols: Vec::new(),
            d_generators: Vec::new(),
            locus: Vec::new(),
            orthonormal: false,
            expansion: None,
            check_d2: true,
            fill_constant_gens: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn dimension(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn symbol_name(&self, idx: usize) -> &str {
        &self.0.symbols[idx].0
    }

    pub fn symbol_degree(&self, idx: usize) -> u8 {
        self.0.symbols[idx].1
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize> {
        self.0
            .symbols
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &str> {
        self.0.symbols.iter().map(|(n, _)| n.as_str())
    }

    pub fn is_simple(&self) -> bool {
        self.0.symbols.iter().all(|&(_, d)| d == 1)
    }

    pub fn is_orthonormal(&self) -> bool {
        self.0.orthonormal
    }

    pub fn has_expansion(&self) -> bool {
        self.0.expansion.is_some()
    }

    pub fn expansion_target(&self) -> Option<&DifferentialFrame> {
        self.0.expansion.as_ref().map(|e| &e.target)
    }

    pub fn expansion_image(&self, idx: usize) -> Option<Form> {
        self.0.expansion.as_ref().map(|e| Form {
            frame: e.target.clone(),
            degree: self.symbol_degree(idx),
            data: e.images[idx].clone(),
        })
    }

    pub fn d_symbol(&self, idx: usize) -> Option<Form> {
        self.0.d_symbols[idx].as_ref().map(|d| Form {
            frame: self.clone(),
            degree: self.symbol_degree(idx) + 1,
            data: d.clone(),
        })
    }

    pub fn d_generator(&self, idx: usize) -> Option<Form> {
        self.0.d_generators[idx].as_ref().map(|d| Form {
            frame: self.clone(),
            degree: 1,
            data: d.clone(),
        })
    }

    pub fn locus(&self) -> Vec<Form> {
        self.0
            .locus
            .iter()
            .map(|d| Form {
                frame: self.clone(),
                degree: 1,
                data: d.clone(),
            })
            .collect()
    }

    pub fn mono_degree(&self, m: &SymMono) -> u8 {
        m.indices().map(|i| self.symbol_degree(i)).sum()
    }

    /// Basis symbol as a form.
    pub fn sym(&self, name: &str) -> Result<Form> {
        let idx = self.symbol_index(name)?;
        let mut data = FormData::new();
        data.insert(SymMono::single(idx), self.ring().one());
        Ok(Form {
            frame: self.clone(),
            degree: self.symbol_degree(idx),
            data,
        })
    }

    pub fn zero(&self, degree: u8) -> Form {
        Form {
            frame: self.clone(),
            degree,
            data: FormData::new(),
        }
    }

    pub fn scalar(&self, value: RingElement) -> Form {
        let mut data = FormData::new();
        if !value.is_zero() {
            data.insert(SymMono::scalar(), value);
        }
        Form {
            frame: self.clone(),
            degree: 0,
            data,
        }
    }

    /// Build a form from `(coefficient expression, symbol names)` terms.
    pub fn form(&self, terms: &[(&str, &[&str])]) -> Result<Form> {
        let mut parsed = Vec::new();
        for (coeff, syms) in terms {
            let c = self.ring().parse(coeff)?;
            let mut indices = Vec::new();
            for s in *syms {
                indices.push(self.symbol_index(s)?);
            }
            parsed.push((c, indices));
        }
        self.form_from_elements(parsed)
    }

    /// Build a form from coefficient elements and symbol index lists.
    pub fn form_from_elements(&self, terms: Vec<(RingElement, Vec<usize>)>) -> Result<Form> {
        let mut degree: Option<u8> = None;
        let mut acc = FormData::new();
        for (c, indices) in terms {
            let mono = SymMono::from_indices(&indices);
            let d = self.mono_degree(&mono);
            match degree {
                None => degree = Some(d),
                Some(prev) if prev == d => {}
                Some(prev) => {
                    return Err(Error::DegreeMismatch {
                        expected: prev,
                        got: d,
                    })
                }
            }
            let (mono, neg) = match sort_mono(self, &mono) {
                Some(x) => x,
                None => continue,
            };
            let c = if neg { c.neg() } else { c };
            merge_term(&mut acc, mono, c);
        }
        Ok(Form {
            frame: self.clone(),
            degree: degree.unwrap_or(0),
            data: acc,
        })
    }
}

pub(crate) fn merge_term(acc: &mut FormData, mono: SymMono, c: RingElement) {
    if c.is_zero() {
        return;
    }
    match acc.entry(mono) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Bubble-sort an index word into ascending order, tracking the graded sign.
/// Returns `None` when an odd-degree symbol repeats.
pub(crate) fn sort_mono(frame: &DifferentialFrame, m: &SymMono) -> Option<(SymMono, bool)> {
    let mut v: Vec<u8> = m.0.to_vec();
    let mut neg = false;
    let n = v.len();
    if n > 1 {
        for i in 0..n {
            for j in (1..n - i).rev() {
                let (a, b) = (v[j - 1], v[j]);
                if a > b {
                    let da = frame.symbol_degree(a as usize) as u32;
                    let db = frame.symbol_degree(b as usize) as u32;
                    if (da * db) & 1 == 1 {
                        neg = !neg;
                    }
                    v.swap(j - 1, j);
                }
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && frame.symbol_degree(w[0] as usize) & 1 == 1 {
            return None;
        }
    }
    Some((SymMono(v.into_iter().collect()), neg))
}

/// Graded merge of two already-sorted monomials.
pub(crate) fn wedge_mono(
    frame: &DifferentialFrame,
    a: &SymMono,
    b: &SymMono,
) -> Option<(SymMono, bool)> {
    let mut out: SmallVec<[u8; 8]> = SmallVec::new();
    let mut neg = false;
    let mut suffix = vec![0u32; a.0.len() + 1];
    for i in (0..a.0.len()).rev() {
        suffix[i] = suffix[i + 1] + frame.symbol_degree(a.0[i] as usize) as u32;
    }
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.0.len() || j < b.0.len() {
        if j == b.0.len() {
            out.push(a.0[i]);
            i += 1;
        } else if i == a.0.len() {
            out.push(b.0[j]);
            j += 1;
        } else if a.0[i] <= b.0[j] {
            if a.0[i] == b.0[j] && frame.symbol_degree(a.0[i] as usize) & 1 == 1 {
                return None;
            }
            out.push(a.0[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining tail of a
            let db = frame.symbol_degree(b.0[j] as usize) as u32;
            if (db * suffix[i]) & 1 == 1 {
                neg = !neg;
            }
            out.push(b.0[j]);
            j += 1;
        }
    }
    Some((SymMono(out), neg))
}

/// Builder for frames.
pub struct FrameBuilder {
    name: String,
    ring: Ring,
    symbols: Vec<(String, u8)>,
    d_symbols: Vec<Option<TermList>>,
    d_generators: Vec<(String, TermList)>,
    locus: Vec<TermList>,
    orthonormal: bool,
    expansion: Option<(DifferentialFrame, Vec<(String, TermList)>)>,
    check_d2: bool,
    fill_constant_gens: bool,
}

/// Term list in the string representation: `(coefficient, symbol names)`.
pub type TermList = Vec<(String, Vec<String>)>;

pub fn terms(list: &[(&str, &[&str])]) -> TermList {
    list.iter()
        .map(|(c, syms)| (c.to_string(), syms.iter().map(|s| s.to_string()).collect()))
        .collect()
}

impl FrameBuilder {
    /// Add a symbol with no declared exterior derivative.
    pub fn symbol(mut self, name: &str, degree: u8) -> Self {
        self.symbols.push((name.to_string(), degree));
        self.d_symbols.push(None);
        self
    }

    /// Add a symbol whose exterior derivative is the given form.
    pub fn symbol_d(mut self, name: &str, degree: u8, d: &[(&str, &[&str])]) -> Self {
        self.symbols.push((name.to_string(), degree));
        self.d_symbols.push(Some(terms(d)));
        self
    }

    pub fn symbol_d_terms(mut self, name: &str, degree: u8, d: TermList) -> Self {
        self.symbols.push((name.to_string(), degree));
        self.d_symbols.push(Some(d));
        self
    }

    /// Degree-1 symbol with vanishing differential.
    pub fn closed(self, name: &str) -> Self {
        self.symbol_d(name, 1, &[])
    }

    pub fn closed_all(mut self, names: &[&str]) -> Self {
        for n in names {
            self = self.closed(n);
        }
        self
    }

    /// Declare `d` of a ring generator (a 1-form, e.g. `d x_i = dx_i`).
    pub fn d_generator(mut self, gen: &str, d: &[(&str, &[&str])]) -> Self {
        self.d_generators.push((gen.to_string(), terms(d)));
        self
    }

    pub fn d_generator_terms(mut self, gen: &str, d: TermList) -> Self {
        self.d_generators.push((gen.to_string(), d));
        self
    }

    /// Constraint 1-forms cutting out the locus all verdicts refer to.
    pub fn locus(mut self, theta: &[(&str, &[&str])]) -> Self {
        self.locus.push(terms(theta));
        self
    }

    pub fn locus_terms(mut self, theta: TermList) -> Self {
        self.locus.push(theta);
        self
    }

    pub fn orthonormal(mut self, yes: bool) -> Self {
        self.orthonormal = yes;
        self
    }

    /// Expansion homomorphism into a plain algebra frame (same ring).
    #[allow(clippy::type_complexity)]
    pub fn expansion(
        mut self,
        target: &DifferentialFrame,
        images: &[(&str, &[(&str, &[&str])])],
    ) -> Self {
        self.expansion = Some((
            target.clone(),
            images
                .iter()
                .map(|(s, f)| (s.to_string(), terms(f)))
                .collect(),
        ));
        self
    }

    /// Expansion with owned term lists (programmatic construction).
    pub fn expansion_terms(
        mut self,
        target: &DifferentialFrame,
        images: Vec<(String, TermList)>,
    ) -> Self {
        self.expansion = Some((target.clone(), images));
        self
    }

    /// Skip the d^2 = 0 assertion (generic coframes whose Jacobi identity is
    /// the object of study).
    pub fn defer_closure_check(mut self) -> Self {
        self.check_d2 = false;
        self
    }

    /// Every ring generator without an explicit rule is a constant:
    /// its exterior derivative is declared zero.
    pub fn constants(mut self) -> Self {
        self.fill_constant_gens = true;
        self
    }

    pub fn build(self) -> Result<DifferentialFrame> {
        for (i, (n, _)) in self.symbols.iter().enumerate() {
            if self.symbols[..i].iter().any(|(m, _)| m == n) {
                return Err(Error::NameCollision(n.clone()));
            }
        }
        let proto = DifferentialFrame(Rc::new(FrameData {
            name: self.name.clone(),
            ring: self.ring.clone(),
            symbols: self.symbols.clone(),
            d_symbols: vec![None; self.symbols.len()],
            d_generators: vec![None; self.ring.generator_count()],
            locus: Vec::new(),
            orthonormal: self.orthonormal,
            expansion: None,
        }));
        #[allow(clippy::type_complexity)]
        let resolve = |raw: &TermList, frame: &DifferentialFrame| -> Result<(u8, FormData)> {
            let terms = raw
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
            let f = frame.form_from_elements(terms)?;
            Ok((f.degree(), f.data))
        };

        let mut d_symbols = Vec::new();
        for (idx, raw) in self.d_symbols.iter().enumerate() {
            match raw {
                None => d_symbols.push(None),
                Some(raw) => {
                    let (deg, data) = resolve(raw, &proto)?;
                    if !data.is_empty() && deg != self.symbols[idx].1 + 1 {
                        return Err(Error::DegreeMismatch {
                            expected: self.symbols[idx].1 + 1,
                            got: deg,
                        });
                    }
                    d_symbols.push(Some(data));
                }
            }
        }
        let mut d_generators = vec![None; self.ring.generator_count()];
        if self.fill_constant_gens {
            for slot in d_generators.iter_mut() {
                *slot = Some(FormData::new());
            }
        }
        for (gen, raw) in &self.d_generators {
            let g = self.ring.generator_index(gen)?;
            let (deg, data) = resolve(raw, &proto)?;
            if !data.is_empty() && deg != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    got: deg,
                });
            }
            d_generators[g] = Some(data);
        }
        let mut locus = Vec::new();
        for raw in &self.locus {
            let (deg, data) = resolve(raw, &proto)?;
            if !data.is_empty() && deg != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    got: deg,
                });
            }
            locus.push(data);
        }
        let expansion = match &self.expansion {
            None => None,
            Some((target, images)) => {
                if target.ring() != &self.ring {
                    return Err(Error::RingMismatch);
                }
                let mut resolved = vec![FormData::new(); self.symbols.len()];
                let mut seen = vec![false; self.symbols.len()];
                for (sym, raw) in images {
                    let idx = proto.symbol_index(sym)?;
                    let (deg, data) = resolve(raw, target)?;
                    if !data.is_empty() && deg != self.symbols[idx].1 {
                        return Err(Error::BadExpansion {
                            symbol: sym.clone(),
                        });
                    }
                    resolved[idx] = data;
                    seen[idx] = true;
                }
                for (idx, s) in seen.iter().enumerate() {
                    if !s {
                        return Err(Error::BadExpansion {
                            symbol: self.symbols[idx].0.clone(),
                        });
                    }
                }
                Some(ExpansionData {
                    target: target.clone(),
                    images: resolved,
                })
            }
        };

        let frame = DifferentialFrame(Rc::new(FrameData {
            name: self.name,
            ring: self.ring,
            symbols: self.symbols,
            d_symbols,
            d_generators,
            locus,
            orthonormal: self.orthonormal,
            expansion,
        }));

        frame.check_relation_closure()?;
        if self.check_d2 {
            frame.check_d2()?;
        }
        Ok(frame)
    }
}

impl DifferentialFrame {
    /// Relations must be closed modulo the locus wherever d is defined.
    /// The relation's left side is a raw monomial (`g^k` or `g*h`), so its
    /// derivative is computed directly; the right side goes through formal
    /// partials.  Generators lacking a d rule skip the check.
    fn check_relation_closure(&self) -> Result<()> {
        let ring = self.ring().clone();
        let d_of = |e: &RingElement| -> Result<Option<Form>> {
            let mut acc = self.zero(1);
            for (g, part) in e.partials() {
                match self.d_generator(g) {
                    Some(dg) => acc = acc.add(&dg.scaled(&part))?,
                    None => return Ok(None),
                }
            }
            Ok(Some(acc))
        };
        for idx in 0..ring.generator_count() {
            let Some((lhs, rhs)) = ring.relation_of(idx) else {
                continue;
            };
            let lhs_d: Option<Form> = if let Some((gname, k)) = lhs.split_once('^') {
                let k: u32 = k.parse().unwrap_or(0);
                let gi = ring.generator_index(gname)?;
                self.d_generator(gi).map(|dg| {
                    let coeff = ring
                        .gen_by_index(gi)
                        .pow(k - 1)
                        .scale(&crate::ring::int(k as i64));
                    dg.scaled(&coeff)
                })
            } else if let Some((a, b)) = lhs.split_once('*') {
                let ai = ring.generator_index(a)?;
                let bi = ring.generator_index(b)?;
                match (self.d_generator(ai), self.d_generator(bi)) {
                    (Some(da), Some(db)) => Some(
                        da.scaled(&ring.gen_by_index(bi))
                            .add(&db.scaled(&ring.gen_by_index(ai)))?,
                    ),
                    _ => None,
                }
            } else {
                None
            };
            let rhs_d = d_of(&ring.parse(&rhs)?)?;
            if let (Some(dl), Some(dr)) = (lhs_d, rhs_d) {
                if !dl.sub(&dr)?.is_zero_on_locus().is_zero {
                    return Err(Error::RelationNotClosed(
                        ring.generator_name(idx).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_d2(&self) -> Result<()> {
        for idx in 0..self.dimension() {
            if self.0.d_symbols[idx].is_some() {
                let d = self.d_symbol(idx).unwrap();
                match d.d() {
                    Ok(dd) => {
                        if !dd.is_zero_on_locus().is_zero {
                            return Err(Error::NotClosed(self.symbol_name(idx).to_string()));
                        }
                    }
                    Err(Error::MissingSymbolRule(_)) | Err(Error::MissingGeneratorRule(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }
}

/// Frame morphism: a ring substitution plus symbol images, consistency
/// checked against declared differentials modulo the target locus.
pub struct FrameMorphism {
    src: DifferentialFrame,
    dst: DifferentialFrame,
    substitution: Substitution,
    sym_images: Vec<Form>,
}

impl FrameMorphism {
    pub fn new(
        src: &DifferentialFrame,
        dst: &DifferentialFrame,
        gen_images: Vec<(String, RingElement)>,
        sym_images: Vec<(String, Form)>,
    ) -> Result<FrameMorphism> {
        let m = Self::new_unchecked(src, dst, gen_images, sym_images)?;
        m.check_consistency()?;
        Ok(m)
    }

    pub fn new_unchecked(
        src: &DifferentialFrame,
        dst: &DifferentialFrame,
        gen_images: Vec<(String, RingElement)>,
        sym_images: Vec<(String, Form)>,
    ) -> Result<FrameMorphism> {
        let substitution = Substitution::new(src.ring(), dst.ring(), gen_images)?;
        let mut by_index: Vec<Option<Form>> = vec![None; src.dimension()];
        for (name, img) in sym_images {
            let idx = src.symbol_index(&name)?;
            if img.frame() != dst {
                return Err(Error::FrameMismatch);
            }
            if !img.is_empty() && img.degree() != src.symbol_degree(idx) {
                return Err(Error::DegreeMismatch {
                    expected: src.symbol_degree(idx),
                    got: img.degree(),
                });
            }
            by_index[idx] = Some(img);
        }
        let mut images = Vec::new();
        for (idx, img) in by_index.into_iter().enumerate() {
            images.push(img.ok_or_else(|| {
                Error::UnknownSymbol(format!("no image for symbol `{}`", src.symbol_name(idx)))
            })?);
        }
        Ok(FrameMorphism {
            src: src.clone(),
            dst: dst.clone(),
            substitution,
            sym_images: images,
        })
    }

    /// Identity-by-name transport into a frame with compatible names
    /// (consistency is not rechecked; used for slice/extension embeddings).
    pub fn by_names(src: &DifferentialFrame, dst: &DifferentialFrame) -> Result<FrameMorphism> {
        let gen_images = src
            .ring()
            .generator_names()
            .map(|n| Ok((n.to_string(), dst.ring().gen(n)?)))
            .collect::<Result<Vec<_>>>()?;
        let sym_images = src
            .symbol_names()
            .map(|n| Ok((n.to_string(), dst.sym(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new_unchecked(src, dst, gen_images, sym_images)
    }

    pub fn src(&self) -> &DifferentialFrame {
        &self.src
    }

    pub fn dst(&self) -> &DifferentialFrame {
        &self.dst
    }

    fn check_consistency(&self) -> Result<()> {
        for idx in 0..self.src.dimension() {
            if let Some(d_src) = self.src.d_symbol(idx) {
                let lhs = self.apply(&d_src)?;
                let rhs = match self.sym_images[idx].d() {
                    Ok(r) => r,
                    Err(Error::MissingSymbolRule(_)) | Err(Error::MissingGeneratorRule(_)) => {
                        continue
                    }
                    Err(e) => return Err(e),
                };
                if !lhs.sub(&rhs)?.is_zero_on_locus().is_zero {
                    return Err(Error::InconsistentMorphism(
                        self.src.symbol_name(idx).to_string(),
                    ));
                }
            }
        }
        for g in 0..self.src.ring().generator_count() {
            if let Some(rule) = self.src.d_generator(g) {
                let lhs = self.apply(&rule)?;
                let image = self.substitution.apply(&self.src.ring().gen_by_index(g))?;
                let rhs = match self.dst.scalar(image).d() {
                    Ok(r) => r,
                    Err(Error::MissingGeneratorRule(_)) => continue,
                    Err(e) => return Err(e),
                };
                if !lhs.sub(&rhs)?.is_zero_on_locus().is_zero {
                    return Err(Error::InconsistentMorphism(
                        self.src.ring().generator_name(g).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn apply_scalar(&self, e: &RingElement) -> Result<RingElement> {
        self.substitution.apply(e)
    }

    /// Push a form through the morphism.
    pub fn apply(&self, f: &Form) -> Result<Form> {
        if f.frame() != &self.src {
            return Err(Error::FrameMismatch);
        }
        let mut acc: Option<Form> = None;
        for (mono, coeff) in f.terms() {
            let mut piece = self.dst.scalar(self.substitution.apply(coeff)?);
            for idx in mono.indices() {
                piece = piece.wedge(&self.sym_images[idx])?;
            }
            acc = Some(match acc {
                None => piece,
                Some(a) => a.add_any(&piece)?,
            });
        }
        Ok(acc.unwrap_or_else(|| self.dst.zero(f.degree())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    /// Lie coframe of the mu = 0 double hypo model: de2 = -3 e35,
    /// de3 = 3 e25, de5 = -4 e23, de1 = de4 = 0.
    fn mu0_frame() -> DifferentialFrame {
        let ring = Ring::builder().build().unwrap();
        DifferentialFrame::builder("mu0", &ring)
            .closed("e1")
            .symbol_d("e2", 1, &[("-3", &["e3", "e5"])])
            .symbol_d("e3", 1, &[("3", &["e2", "e5"])])
            .closed("e4")
            .symbol_d("e5", 1, &[("-4", &["e2", "e3"])])
            .build()
            .unwrap()
    }

    fn flat7() -> DifferentialFrame {
        let mut b = Ring::builder();
        for i in 1..=7 {
            b = b.gen(&format!("x{i}"));
        }
        let ring = b.build().unwrap();
        let mut fb = DifferentialFrame::builder("r7", &ring).orthonormal(true);
        for i in 1..=7 {
            fb = fb.closed(&format!("dx{i}"));
        }
        for i in 1..=7 {
            fb = fb.d_generator(&format!("x{i}"), &[("1", &[&format!("dx{i}")])]);
        }
        fb.build().unwrap()
    }

    #[test]
    fn wedge_antisymmetry_and_squares() {
        let f = mu0_frame();
        let e1 = f.sym("e1").unwrap();
        let e2 = f.sym("e2").unwrap();
        let a = e1.wedge(&e2).unwrap();
        let b = e2.wedge(&e1).unwrap();
        assert_eq!(a.neg(), b);
        let omega1 = f
            .form(&[("1", &["e1", "e2"]), ("1", &["e3", "e4"])])
            .unwrap();
        let sq = omega1.wedge(&omega1).unwrap();
        let expected = f.form(&[("2", &["e1", "e2", "e3", "e4"])]).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn model_omega_products_vanish() {
        let f = mu0_frame();
        let omega1 = f
            .form(&[("1", &["e1", "e2"]), ("1", &["e3", "e4"])])
            .unwrap();
        let omega2 = f
            .form(&[("1", &["e1", "e3"]), ("-1", &["e2", "e4"])])
            .unwrap();
        let omega3 = f
            .form(&[("1", &["e1", "e4"]), ("1", &["e2", "e3"])])
            .unwrap();
        assert!(omega1.wedge(&omega2).unwrap().is_zero());
        assert!(omega1.wedge(&omega3).unwrap().is_zero());
        assert!(omega2.wedge(&omega3).unwrap().is_zero());
        assert_eq!(
            omega2.wedge(&omega2).unwrap(),
            omega1.wedge(&omega1).unwrap()
        );
        assert_eq!(
            omega3.wedge(&omega3).unwrap(),
            omega1.wedge(&omega1).unwrap()
        );
    }

    #[test]
    fn d_of_e5_is_minus_4_e23() {
        let f = mu0_frame();
        let de5 = f.sym("e5").unwrap().d().unwrap();
        assert_eq!(de5, f.form(&[("-4", &["e2", "e3"])]).unwrap());
        // d^2 = 0 holds on the model frame
        assert!(de5.d().unwrap().is_zero());
    }

    #[test]
    fn d_with_coefficients_flat() {
        let f = flat7();
        // d(x1 dx2) = dx1 ∧ dx2
        let a = f.form(&[("x1", &["dx2"])]).unwrap();
        assert_eq!(a.d().unwrap(), f.form(&[("1", &["dx1", "dx2"])]).unwrap());
        // constant-coefficient form is closed
        let c = f.form(&[("5", &["dx1", "dx3", "dx7"])]).unwrap();
        assert!(c.d().unwrap().is_zero());
    }

    #[test]
    fn interior_is_antiderivation() {
        let f = flat7();
        let x = FrameVector::from_exprs(&f, &[("dx1", "1"), ("dx3", "x2")]).unwrap();
        let a = f.form(&[("1", &["dx1", "dx3"])]).unwrap();
        // i_X(dx13) = X^1 dx3 - X^3 dx1 = dx3 - x2 dx1
        let got = a.interior(&x).unwrap();
        assert_eq!(got, f.form(&[("1", &["dx3"]), ("-x2", &["dx1"])]).unwrap());
        // i_X i_X = 0
        assert!(got.interior(&x).unwrap().is_zero());
    }

    #[test]
    fn hodge_star_on_flat7() {
        let f = flat7();
        let a = f.form(&[("1", &["dx1", "dx2", "dx3"])]).unwrap();
        let star = a.hodge().unwrap();
        assert_eq!(
            star,
            f.form(&[("1", &["dx4", "dx5", "dx6", "dx7"])]).unwrap()
        );
        let one = f.scalar(f.ring().one());
        let vol = one.hodge().unwrap();
        assert_eq!(
            vol,
            f.form(&[("1", &["dx1", "dx2", "dx3", "dx4", "dx5", "dx6", "dx7"])])
                .unwrap()
        );
        // ⋆⋆ = ±1 (Riemannian, n = 7: always +1)
        assert_eq!(star.hodge().unwrap(), a);
    }

    #[test]
    fn locus_test_vacuous_on_overflow() {
        let f = mu0_frame();
        let top = f.form(&[("1", &["e1", "e2", "e3", "e4", "e5"])]).unwrap();
        let theta = f.sym("e1").unwrap();
        let v = top.is_zero_on(&[theta]);
        assert!(v.is_zero && v.vacuous);
        let zero = f.zero(2);
        assert!(zero.is_zero_on_locus().is_zero);
    }

    #[test]
    fn graded_symbols_commute_correctly() {
        // eta degree 1, omega degree 2: omega ∧ eta = eta ∧ omega,
        // omega ∧ omega ≠ 0.
        let ring = Ring::builder().build().unwrap();
        let f = DifferentialFrame::builder("abs", &ring)
            .symbol("eta", 1)
            .symbol("omega", 2)
            .build()
            .unwrap();
        let eta = f.sym("eta").unwrap();
        let om = f.sym("omega").unwrap();
        assert_eq!(om.wedge(&eta).unwrap(), eta.wedge(&om).unwrap());
        assert!(!om.wedge(&om).unwrap().is_zero());
        assert!(eta.wedge(&eta).unwrap().is_zero());
    }

    #[test]
    fn morphism_checks_d_compatibility() {
        // Basis change of Cor 4.5 at rho = 0 restricted to the su(2) block:
        // alpha1 = 3 e5, alpha2 = 2 sqrt3 e2, alpha3 = 2 sqrt3 e3.
        let ring_src = Ring::builder()
            .gen_with_rule("sqrt3", 2, "3")
            .build()
            .unwrap();
        let src = DifferentialFrame::builder("mc", &ring_src)
            .symbol_d("a1", 1, &[("-1", &["a2", "a3"])])
            .symbol_d("a2", 1, &[("1", &["a1", "a3"])])
            .symbol_d("a3", 1, &[("-1", &["a1", "a2"])])
            .build()
            .unwrap();
        let ring_dst = Ring::builder()
            .gen_with_rule("sqrt3", 2, "3")
            .build()
            .unwrap();
        let dst = DifferentialFrame::builder("e", &ring_dst)
            .symbol_d("e2", 1, &[("-3", &["e3", "e5"])])
            .symbol_d("e3", 1, &[("3", &["e2", "e5"])])
            .symbol_d("e5", 1, &[("-4", &["e2", "e3"])])
            .build()
            .unwrap();
        let m = FrameMorphism::new(
            &src,
            &dst,
            vec![("sqrt3".into(), ring_dst.gen("sqrt3").unwrap())],
            vec![
                ("a1".into(), dst.form(&[("3", &["e5"])]).unwrap()),
                ("a2".into(), dst.form(&[("2*sqrt3", &["e2"])]).unwrap()),
                ("a3".into(), dst.form(&[("2*sqrt3", &["e3"])]).unwrap()),
            ],
        );
        assert!(m.is_ok(), "{:?}", m.err().map(|e| e.to_string()));
        // A wrong image must be rejected.
        let bad = FrameMorphism::new(
            &src,
            &dst,
            vec![("sqrt3".into(), ring_dst.gen("sqrt3").unwrap())],
            vec![
                ("a1".into(), dst.form(&[("1", &["e5"])]).unwrap()),
                ("a2".into(), dst.form(&[("2*sqrt3", &["e2"])]).unwrap()),
                ("a3".into(), dst.form(&[("2*sqrt3", &["e3"])]).unwrap()),
            ],
        );
        assert!(matches!(bad, Err(crate::Error::InconsistentMorphism(_))));
    }

    #[test]
    fn sphere_frame_relation_closure_needs_locus() {
        // ring with x3^2 -> 1 - x1^2 - x2^2; d xi = dxi.
        let ring = Ring::builder()
            .gens(&["x1", "x2"])
            .gen_with_rule("x3", 2, "1 - x1^2 - x2^2")
            .build()
            .unwrap();
        let ok = DifferentialFrame::builder("s2", &ring)
            .closed_all(&["dx1", "dx2", "dx3"])
            .d_generator("x1", &[("1", &["dx1"])])
            .d_generator("x2", &[("1", &["dx2"])])
            .d_generator("x3", &[("1", &["dx3"])])
            .locus(&[("x1", &["dx1"]), ("x2", &["dx2"]), ("x3", &["dx3"])])
            .build();
        assert!(ok.is_ok());
        let bad = DifferentialFrame::builder("s2-nolocus", &ring)
            .closed_all(&["dx1", "dx2", "dx3"])
            .d_generator("x1", &[("1", &["dx1"])])
            .d_generator("x2", &[("1", &["dx2"])])
            .d_generator("x3", &[("1", &["dx3"])])
            .build();
        assert!(matches!(bad, Err(crate::Error::RelationNotClosed(_))));
    }
}
