//! Forms, frame vectors and bilinear forms.

use super::{merge_term, sort_mono, wedge_mono, DifferentialFrame, FormData, SymMono};
use crate::ring::RingElement;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A degree-homogeneous exterior form: sparse map from basis monomials to
/// ring elements in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    pub(crate) frame: DifferentialFrame,
    pub(crate) degree: u8,
    pub(crate) data: FormData,
}

/// Outcome of a locus zero-test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocusVerdict {
    pub is_zero: bool,
    /// Set when the wedge with the constraints overflowed the top degree,
    /// which makes the test vacuous.
    pub vacuous: bool,
}

impl Form {
    pub fn frame(&self) -> &DifferentialFrame {
        &self.frame
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMono, &RingElement)> {
        self.data.iter()
    }

    pub fn coefficient(&self, indices: &[usize]) -> RingElement {
        let Some((mono, neg)) = sort_mono(&self.frame, &SymMono::from_indices(indices)) else {
            return self.frame.ring().zero();
        };
        match self.data.get(&mono) {
            None => self.frame.ring().zero(),
            Some(c) => {
                if neg {
                    c.neg()
                } else {
                    c.clone()
                }
            }
        }
    }

    fn check_same_frame(&self, other: &Form) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same_frame(other)?;
        if !self.data.is_empty() && !other.data.is_empty() && self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        self.add_any(other)
    }

    /// Addition that trusts the caller on degrees (used where one side is a
    /// syntactic zero of unknown degree).
    pub(crate) fn add_any(&self, other: &Form) -> Result<Form> {
        self.check_same_frame(other)?;
        let mut data = self.data.clone();
        for (m, c) in &other.data {
            merge_term(&mut data, m.clone(), c.clone());
        }
        let degree = if self.data.is_empty() {
            other.degree
        } else {
            self.degree
        };
        Ok(Form {
            frame: self.frame.clone(),
            degree,
            data,
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            frame: self.frame.clone(),
            degree: self.degree,
            data: self
                .data
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &RingElement) -> Form {
        let mut data = FormData::new();
        for (m, k) in &self.data {
            merge_term(&mut data, m.clone(), k.mul(c));
        }
        Form {
            frame: self.frame.clone(),
            degree: self.degree,
            data,
        }
    }

    pub fn scaled_str(&self, expr: &str) -> Result<Form> {
        Ok(self.scaled(&self.frame.ring().parse(expr)?))
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_same_frame(other)?;
        let mut data = FormData::new();
        for (m1, c1) in &self.data {
            for (m2, c2) in &other.data {
                if let Some((m, neg)) = wedge_mono(&self.frame, m1, m2) {
                    let c = c1.mul(c2);
                    merge_term(&mut data, m, if neg { c.neg() } else { c });
                }
            }
        }
        Ok(Form {
            frame: self.frame.clone(),
            degree: self.degree + other.degree,
            data,
        })
    }

    /// Exterior derivative: Leibniz over coefficient partials (through the
    /// declared generator differentials) and basis symbols (through the
    /// declared symbol differentials).
    pub fn d(&self) -> Result<Form> {
        let frame = &self.frame;
        let ring = frame.ring();
        let mut acc = frame.zero(self.degree + 1);
        for (mono, coeff) in &self.data {
            // d(coefficient) ∧ e_mono
            for (g, part) in coeff.partials() {
                let dg = frame
                    .d_generator(g)
                    .ok_or_else(|| Error::MissingGeneratorRule(ring.generator_name(g).into()))?;
                let mono_form = Form {
                    frame: frame.clone(),
                    degree: self.degree,
                    data: {
                        let mut d = FormData::new();
                        d.insert(mono.clone(), ring.one());
                        d
                    },
                };
                acc = acc.add_any(&dg.scaled(&part).wedge(&mono_form)?)?;
            }
            // coefficient · Σ_j ± e_{<j} ∧ d(s_j) ∧ e_{>j}
            let idxs: Vec<usize> = mono.indices().collect();
            let mut deg_before: u32 = 0;
            for (j, &s) in idxs.iter().enumerate() {
                let ds = frame
                    .d_symbol(s)
                    .ok_or_else(|| Error::MissingSymbolRule(frame.symbol_name(s).into()))?;
                if !ds.is_empty() {
                    let prefix = Form {
                        frame: frame.clone(),
                        degree: deg_before as u8,
                        data: {
                            let mut d = FormData::new();
                            d.insert(SymMono::from_indices(&idxs[..j]), ring.one());
                            d
                        },
                    };
                    let suffix = Form {
                        frame: frame.clone(),
                        degree: idxs[j + 1..]
                            .iter()
                            .map(|&i| frame.symbol_degree(i) as u32)
                            .sum::<u32>() as u8,
                        data: {
                            let mut d = FormData::new();
                            d.insert(SymMono::from_indices(&idxs[j + 1..]), ring.one());
                            d
                        },
                    };
                    let mut piece = prefix.wedge(&ds)?.wedge(&suffix)?.scaled(coeff);
                    if deg_before & 1 == 1 {
                        piece = piece.neg();
                    }
                    acc = acc.add_any(&piece)?;
                }
                deg_before += frame.symbol_degree(s) as u32;
            }
        }
        acc.degree = self.degree + 1;
        Ok(acc)
    }

    /// Interior product with a frame vector (left antiderivation).
    pub fn interior(&self, x: &FrameVector) -> Result<Form> {
        if self.frame != x.frame {
            return Err(Error::FrameMismatch);
        }
        if self.degree == 0 {
            return Ok(self.frame.zero(0));
        }
        let mut acc = self.frame.zero(self.degree - 1);
        for (mono, coeff) in &self.data {
            let idxs: Vec<usize> = mono.indices().collect();
            let mut deg_before: u32 = 0;
            for (j, &s) in idxs.iter().enumerate() {
                let ds = self.frame.symbol_degree(s);
                if let Some(comp) = x.components.get(&s) {
                    if ds != 1 {
                        return Err(Error::InteriorOnHigherSymbol);
                    }
                    let mut rest: Vec<usize> = Vec::with_capacity(idxs.len() - 1);
                    rest.extend_from_slice(&idxs[..j]);
                    rest.extend_from_slice(&idxs[j + 1..]);
                    let mut c = coeff.mul(comp);
                    if deg_before & 1 == 1 {
                        c = c.neg();
                    }
                    merge_term(&mut acc.data, SymMono::from_indices(&rest), c);
                }
                deg_before += ds as u32;
            }
        }
        Ok(acc)
    }

    /// Coefficient-wise derivation (time derivative of a family).
    pub fn derive_coefficients(&self, derivation: &str) -> Result<Form> {
        let mut data = FormData::new();
        for (m, c) in &self.data {
            merge_term(&mut data, m.clone(), c.derive(derivation)?);
        }
        Ok(Form {
            frame: self.frame.clone(),
            degree: self.degree,
            data,
        })
    }

    /// Hodge star on an orthonormal all-degree-one coframe with the symbol
    /// order as orientation.
    pub fn hodge(&self) -> Result<Form> {
        if !self.frame.is_orthonormal() {
            return Err(Error::NotOrthonormal);
        }
        if !self.frame.is_simple() {
            return Err(Error::NotSimpleCoframe);
        }
        let n = self.frame.dimension();
        let mut data = FormData::new();
        for (mono, coeff) in &self.data {
            let present: Vec<usize> = mono.indices().collect();
            let complement: Vec<usize> = (0..n).filter(|i| !present.contains(i)).collect();
            let mut word = present.clone();
            word.extend_from_slice(&complement);
            // Sign of the permutation (I, I^c).
            let mut neg = false;
            for i in 0..word.len() {
                for j in i + 1..word.len() {
                    if word[i] > word[j] {
                        neg = !neg;
                    }
                }
            }
            let c = if neg { coeff.neg() } else { coeff.clone() };
            merge_term(&mut data, SymMono::from_indices(&complement), c);
        }
        Ok(Form {
            frame: self.frame.clone(),
            degree: (n - self.degree as usize) as u8,
            data,
        })
    }

    /// Exact zero-test, expansion-aware.
    pub fn is_zero(&self) -> bool {
        if self.data.is_empty() {
            return true;
        }
        if self.frame.has_expansion() {
            return self.expand().is_some_and(|f| f.data.is_empty());
        }
        false
    }

    /// Expand through the frame's expansion homomorphism, if declared.
    pub fn expand(&self) -> Option<Form> {
        let target = self.frame.expansion_target()?.clone();
        let mut acc = target.zero(self.degree);
        for (mono, coeff) in &self.data {
            let mut piece = target.scalar(coeff.clone());
            for idx in mono.indices() {
                piece = piece
                    .wedge(&self.frame.expansion_image(idx).unwrap())
                    .ok()?;
            }
            acc = acc.add_any(&piece).ok()?;
        }
        acc.degree = self.degree;
        Some(acc)
    }

    /// Zero-test against explicit constraint one-forms: wedge with all of
    /// them, then test exactly.
    pub fn is_zero_on(&self, constraints: &[Form]) -> LocusVerdict {
        let total: u32 = self.degree as u32 + constraints.len() as u32;
        let top: u32 = if self.frame.is_simple() {
            self.frame.dimension() as u32
        } else {
            u32::MAX
        };
        if total > top {
            return LocusVerdict {
                is_zero: true,
                vacuous: true,
            };
        }
        let mut w = self.clone();
        for theta in constraints {
            w = match theta.wedge(&w) {
                Ok(w) => w,
                Err(_) => {
                    return LocusVerdict {
                        is_zero: false,
                        vacuous: false,
                    }
                }
            };
        }
        LocusVerdict {
            is_zero: w.is_zero(),
            vacuous: false,
        }
    }

    /// Zero-test modulo the frame's own locus.
    pub fn is_zero_on_locus(&self) -> LocusVerdict {
        if self.data.is_empty() {
            return LocusVerdict {
                is_zero: true,
                vacuous: false,
            };
        }
        self.is_zero_on(&self.frame.locus())
    }

    /// Re-tag a form onto a frame that contains the same symbol and
    /// generator names (extension embedding).  No differential consistency
    /// is implied.
    pub fn transport(&self, dst: &DifferentialFrame) -> Result<Form> {
        let sym_map: Vec<usize> = self
            .frame
            .symbol_names()
            .map(|n| dst.symbol_index(n))
            .collect::<Result<Vec<_>>>()?;
        let gen_map: Vec<RingElement> = self
            .frame
            .ring()
            .generator_names()
            .map(|n| dst.ring().gen(n))
            .collect::<Result<Vec<_>>>()?;
        let mut data = FormData::new();
        for (mono, coeff) in &self.data {
            let mut c = dst.ring().zero();
            // rebuild coefficient monomial-by-monomial
            for (m, k) in coeff.terms() {
                let mut t = dst.ring().constant(k.clone());
                for (g, e) in m.iter() {
                    t = t.mul(&gen_map[g].pow(e as u32));
                }
                c = c.add(&t);
            }
            let indices: Vec<usize> = mono.indices().map(|i| sym_map[i]).collect();
            let (m, neg) =
                sort_mono(dst, &SymMono::from_indices(&indices)).ok_or(Error::FrameMismatch)?;
            merge_term(&mut data, m, if neg { c.neg() } else { c });
        }
        Ok(Form {
            frame: dst.clone(),
            degree: self.degree,
            data,
        })
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.data.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.data {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = format!("{coeff}");
            let needs_parens = cs.contains(' ') || cs.starts_with('-');
            if mono.is_empty() {
                write!(f, "{cs}")?;
                continue;
            }
            if cs == "1" {
                // omit the unit coefficient
            } else if needs_parens {
                write!(f, "({cs})*")?;
            } else {
                write!(f, "{cs}*")?;
            }
            let names: Vec<&str> = mono.indices().map(|i| self.frame.symbol_name(i)).collect();
            write!(f, "{}", names.join("\u{2227}"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Form[deg {} over {}]({})",
            self.degree,
            self.frame.name(),
            self
        )
    }
}

/// A vector expressed in the frame dual to the degree-one coframe symbols.
#[derive(Clone)]
pub struct FrameVector {
    pub(crate) frame: DifferentialFrame,
    pub(crate) components: BTreeMap<usize, RingElement>,
}

impl FrameVector {
    pub fn new(frame: &DifferentialFrame, components: Vec<(&str, RingElement)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (name, c) in components {
            let idx = frame.symbol_index(name)?;
            if !c.is_zero() {
                map.insert(idx, c);
            }
        }
        Ok(FrameVector {
            frame: frame.clone(),
            components: map,
        })
    }

    pub fn from_exprs(frame: &DifferentialFrame, components: &[(&str, &str)]) -> Result<Self> {
        let comps = components
            .iter()
            .map(|(n, e)| Ok((*n, frame.ring().parse(e)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, comps)
    }

    pub fn frame(&self) -> &DifferentialFrame {
        &self.frame
    }

    pub fn component(&self, idx: usize) -> RingElement {
        self.components
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| self.frame.ring().zero())
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &RingElement)> {
        self.components.iter().map(|(&i, c)| (i, c))
    }

    pub fn scaled(&self, c: &RingElement) -> FrameVector {
        FrameVector {
            frame: self.frame.clone(),
            components: self
                .components
                .iter()
                .map(|(&i, k)| (i, k.mul(c)))
                .collect(),
        }
    }

    pub fn add(&self, other: &FrameVector) -> Result<FrameVector> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        let mut components = self.components.clone();
        for (&i, c) in &other.components {
            let entry = components
                .entry(i)
                .or_insert_with(|| self.frame.ring().zero());
            *entry = entry.add(c);
        }
        components.retain(|_, c| !c.is_zero());
        Ok(FrameVector {
            frame: self.frame.clone(),
            components,
        })
    }
}

/// Symmetric bilinear form over the degree-one coframe.
#[derive(Clone)]
pub struct BilinearForm {
    frame: DifferentialFrame,
    matrix: Vec<Vec<RingElement>>,
}

impl BilinearForm {
    #[allow(clippy::needless_range_loop)]
    pub fn new(frame: &DifferentialFrame, matrix: Vec<Vec<RingElement>>) -> Result<Self> {
        let n = frame.dimension();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::FrameMismatch);
        }
        for i in 0..n {
            for j in 0..i {
                if !matrix[i][j].sub(&matrix[j][i]).is_zero() {
                    return Err(Error::FrameMismatch);
                }
            }
        }
        Ok(BilinearForm {
            frame: frame.clone(),
            matrix,
        })
    }

    /// Gram-style constructor: g = Σ_k w_k · θ_k ⊗ θ_k + Σ cross terms,
    /// assembled by the caller; here we just expose evaluation.
    pub fn frame(&self) -> &DifferentialFrame {
        &self.frame
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.matrix[i][j]
    }

    pub fn eval(&self, x: &FrameVector, y: &FrameVector) -> Result<RingElement> {
        if x.frame != self.frame || y.frame != self.frame {
            return Err(Error::FrameMismatch);
        }
        let mut acc = self.frame.ring().zero();
        for (i, xi) in x.components() {
            for (j, yj) in y.components() {
                acc = acc.add(&xi.mul(&self.matrix[i][j]).mul(yj));
            }
        }
        Ok(acc)
    }
}
