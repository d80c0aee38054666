//! Sparse multivariate polynomials over arbitrary-precision rationals,
//! reduced to a canonical normal form modulo a triangular relation set.
//!
//! Two relation shapes are supported, and they are all the geometry in this
//! crate ever needs:
//!
//! * a *power rule* `g^k -> p` where `p` mentions only strictly earlier
//!   generators (e.g. `cos^2 -> 1 - sin^2`, `sqrt3^2 -> 3`);
//! * an *inverse pair* `g * g_inv -> 1` where neither generator carries a
//!   power rule.
//!
//! Rewriting such a system is terminating and confluent, so an element is
//! zero exactly when its normal form has no monomials.  Named derivations
//! (`t` for evolution parameters) are declared per generator and checked to
//! annihilate every relation at construction time.

mod parse;

pub use parse::parse_expression;

use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// Exact scalar: arbitrary-precision rational.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Monomial in the generators: sorted `(generator index, exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Default)]
pub struct Monomial(SmallVec<[(u16, u16); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn generator(idx: usize) -> Self {
        Monomial(SmallVec::from_slice(&[(idx as u16, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, idx: usize) -> u16 {
        self.0
            .iter()
            .find(|&&(g, _)| g as usize == idx)
            .map_or(0, |&(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.0.iter().map(|&(g, e)| (g as usize, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(u16, u16); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j]);
                j += 1;
            } else {
                out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }

    fn with_exponent(&self, idx: usize, exp: u16) -> Monomial {
        let mut out: SmallVec<[(u16, u16); 4]> = SmallVec::new();
        let mut placed = false;
        for &(g, e) in &self.0 {
            if g as usize == idx {
                if exp > 0 {
                    out.push((g, exp));
                }
                placed = true;
            } else {
                out.push((g, e));
            }
        }
        if !placed && exp > 0 {
            out.push((idx as u16, exp));
            out.sort_unstable_by_key(|&(g, _)| g);
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Frame-free polynomial payload: normal-form monomials to coefficients.
pub type PolyData = BTreeMap<Monomial, Rational>;

#[derive(Debug)]
struct GenData {
    name: String,
    /// `g^k -> rhs`, rhs over strictly earlier generators.
    power_rule: Option<(u16, PolyData)>,
    /// Partner index of an inverse pair.
    inverse_partner: Option<usize>,
    /// One optional value per declared derivation.
    deriv_values: Vec<Option<PolyData>>,
}

#[derive(Debug)]
pub struct RingData {
    gens: Vec<GenData>,
    derivations: Vec<String>,
}

/// Shared immutable handle to a ring presentation.
#[derive(Clone, Debug)]
pub struct Ring(Rc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Ring {}

/// A ring element in canonical normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    ring: Ring,
    terms: PolyData,
}

enum Reduction {
    Pair(usize, usize),
    Power(usize),
}

impl Ring {
    pub fn builder() -> RingBuilder {
        RingBuilder::default()
    }

    pub fn generator_count(&self) -> usize {
        self.0.gens.len()
    }

    pub fn generator_name(&self, idx: usize) -> &str {
        &self.0.gens[idx].name
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.0.gens.iter().map(|g| g.name.as_str())
    }

    pub fn derivations(&self) -> &[String] {
        &self.0.derivations
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.0
            .gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Relation of a generator, rendered as `(lhs, rhs)` in the expression syntax.
    pub fn relation_of(&self, idx: usize) -> Option<(String, String)> {
        let g = &self.0.gens[idx];
        if let Some((k, rhs)) = &g.power_rule {
            let rhs = self.element_from_data(rhs.clone());
            return Some((format!("{}^{}", g.name, k), format!("{rhs}")));
        }
        if let Some(p) = g.inverse_partner {
            if p > idx {
                return Some((format!("{}*{}", g.name, self.0.gens[p].name), "1".into()));
            }
        }
        None
    }

    pub fn power_rule_of(&self, idx: usize) -> Option<(u16, RingElement)> {
        self.0.gens[idx]
            .power_rule
            .as_ref()
            .map(|(k, rhs)| (*k, self.element_from_data(rhs.clone())))
    }

    pub fn inverse_partner_of(&self, idx: usize) -> Option<usize> {
        self.0.gens[idx].inverse_partner
    }

    pub fn derivation_value(&self, gen: usize, derivation: &str) -> Option<RingElement> {
        let d = self.0.derivations.iter().position(|n| n == derivation)?;
        self.0.gens[gen].deriv_values[d]
            .as_ref()
            .map(|p| self.element_from_data(p.clone()))
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: self.clone(),
            terms: PolyData::new(),
        }
    }

    pub fn one(&self) -> RingElement {
        self.constant(int(1))
    }

    pub fn int(&self, n: i64) -> RingElement {
        self.constant(int(n))
    }

    pub fn rational(&self, n: i64, d: i64) -> RingElement {
        self.constant(rat(n, d))
    }

    pub fn constant(&self, c: Rational) -> RingElement {
        let mut terms = PolyData::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        RingElement {
            ring: self.clone(),
            terms,
        }
    }

    pub fn gen(&self, name: &str) -> Result<RingElement> {
        let idx = self.generator_index(name)?;
        Ok(self.gen_by_index(idx))
    }

    pub fn gen_by_index(&self, idx: usize) -> RingElement {
        let mut terms = PolyData::new();
        terms.insert(Monomial::generator(idx), int(1));
        self.element_from_data(terms)
    }

    /// Parse an expression in the documented grammar into a normal form.
    pub fn parse(&self, text: &str) -> Result<RingElement> {
        parse::parse_in_ring(self, text)
    }

    fn element_from_data(&self, raw: PolyData) -> RingElement {
        RingElement {
            ring: self.clone(),
            terms: self.reduce(raw),
        }
    }

    fn find_reduction(&self, m: &Monomial) -> Option<Reduction> {
        for (g, _e) in m.iter() {
            if let Some(p) = self.0.gens[g].inverse_partner {
                if p > g && m.exponent(p) > 0 {
                    return Some(Reduction::Pair(g, p));
                }
            }
        }
        // Reduce the latest rule-bearing generator first.
        for (g, e) in m.iter().collect::<Vec<_>>().into_iter().rev() {
            if let Some((k, _)) = &self.0.gens[g].power_rule {
                if e >= *k {
                    return Some(Reduction::Power(g));
                }
            }
        }
        None
    }

    fn reduce(&self, raw: PolyData) -> PolyData {
        let mut out = PolyData::new();
        let mut work: Vec<(Monomial, Rational)> = raw.into_iter().collect();
        while let Some((m, c)) = work.pop() {
            if c.is_zero() {
                continue;
            }
            match self.find_reduction(&m) {
                None => {
                    let entry = out.entry(m).or_insert_with(Rational::zero);
                    *entry += c;
                    if entry.is_zero() {
                        // removal happens lazily below
                    }
                }
                Some(Reduction::Pair(g, p)) => {
                    let cancel = m.exponent(g).min(m.exponent(p));
                    let m = m
                        .with_exponent(g, m.exponent(g) - cancel)
                        .with_exponent(p, m.exponent(p) - cancel);
                    work.push((m, c));
                }
                Some(Reduction::Power(g)) => {
                    let (k, rhs) = self.0.gens[g].power_rule.as_ref().unwrap();
                    let m = m.with_exponent(g, m.exponent(g) - *k);
                    for (rm, rc) in rhs {
                        work.push((m.mul(rm), &c * rc));
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn data(&self) -> &PolyData {
        &self.terms
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        RingElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut raw = PolyData::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let entry = raw.entry(m).or_insert_with(Rational::zero);
                *entry += c1 * c2;
            }
        }
        self.ring.element_from_data(raw)
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        if c.is_zero() {
            return self.ring.zero();
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivatives of the normal form: `(generator, d/dg)`
    /// for every generator occurring in it.
    pub fn partials(&self) -> Vec<(usize, RingElement)> {
        let mut by_gen: BTreeMap<usize, PolyData> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (g, e) in m.iter() {
                let dm = m.with_exponent(g, e - 1);
                let entry = by_gen
                    .entry(g)
                    .or_default()
                    .entry(dm)
                    .or_insert_with(Rational::zero);
                *entry += c * int(e as i64);
            }
        }
        by_gen
            .into_iter()
            .map(|(g, data)| (g, self.ring.element_from_data(data)))
            .filter(|(_, e)| !e.is_zero())
            .collect()
    }

    /// Total derivative along a declared derivation.
    pub fn derive(&self, derivation: &str) -> Result<RingElement> {
        if !self.ring.0.derivations.iter().any(|n| n == derivation) {
            return Err(Error::UnknownDerivation(derivation.to_string()));
        }
        let mut acc = self.ring.zero();
        for (g, part) in self.partials() {
            let value = self.ring.derivation_value(g, derivation).ok_or_else(|| {
                Error::MissingDerivation {
                    derivation: derivation.to_string(),
                    gen: self.ring.generator_name(g).to_string(),
                }
            })?;
            acc = acc.add(&part.mul(&value));
        }
        Ok(acc)
    }

    /// Numeric evaluation at a point (one value per generator).
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational_to_f64(c);
            for (g, e) in m.iter() {
                t *= values[g].powi(e as i32);
            }
            acc += t;
        }
        acc
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    let n = c.numer();
    let d = c.denom();
    // Good enough for the sampling check: both fit in f64 range for all
    // catalog data.
    let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
    let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
    nf / df
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote_coeff = false;
            if !abs.is_one() || m.is_one() {
                if abs.denom().is_one() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
                wrote_coeff = true;
            }
            for (g, e) in m.iter() {
                if wrote_coeff {
                    write!(f, "*")?;
                }
                wrote_coeff = true;
                write!(f, "{}", self.ring.generator_name(g))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Ring homomorphism given by generator images, relation-checked once.
pub struct Substitution {
    src: Ring,
    dst: Ring,
    images: Vec<RingElement>,
}

impl Substitution {
    pub fn new(src: &Ring, dst: &Ring, images: Vec<(String, RingElement)>) -> Result<Substitution> {
        let mut by_index: Vec<Option<RingElement>> = vec![None; src.generator_count()];
        for (name, img) in images {
            let idx = src.generator_index(&name)?;
            if img.ring() != dst {
                return Err(Error::RingMismatch);
            }
            by_index[idx] = Some(img);
        }
        let mut resolved = Vec::with_capacity(by_index.len());
        for (idx, img) in by_index.into_iter().enumerate() {
            resolved.push(img.ok_or_else(|| {
                Error::SubstitutionIncomplete(src.generator_name(idx).to_string())
            })?);
        }
        let sub = Substitution {
            src: src.clone(),
            dst: dst.clone(),
            images: resolved,
        };
        // Every source relation must map to zero in the target.
        for idx in 0..src.generator_count() {
            let g = &src.0.gens[idx];
            if let Some((k, rhs)) = &g.power_rule {
                let lhs = sub.images[idx].pow(*k as u32);
                let rhs = sub.apply_data(rhs);
                if !lhs.sub(&rhs).is_zero() {
                    return Err(Error::SubstitutionInconsistent(g.name.clone()));
                }
            }
            if let Some(p) = g.inverse_partner {
                if p > idx {
                    let prod = sub.images[idx].mul(&sub.images[p]);
                    if !prod.is_one() {
                        return Err(Error::SubstitutionInconsistent(g.name.clone()));
                    }
                }
            }
        }
        Ok(sub)
    }

    /// Identity-by-name substitution between rings sharing generator names.
    pub fn by_names(src: &Ring, dst: &Ring) -> Result<Substitution> {
        let images = src
            .generator_names()
            .map(|n| Ok((n.to_string(), dst.gen(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(src, dst, images)
    }

    pub fn src(&self) -> &Ring {
        &self.src
    }

    pub fn dst(&self) -> &Ring {
        &self.dst
    }

    fn apply_data(&self, data: &PolyData) -> RingElement {
        let mut acc = self.dst.zero();
        for (m, c) in data {
            let mut t = self.dst.constant(c.clone());
            for (g, e) in m.iter() {
                t = t.mul(&self.images[g].pow(e as u32));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn apply(&self, e: &RingElement) -> Result<RingElement> {
        if e.ring() != &self.src {
            return Err(Error::RingMismatch);
        }
        Ok(self.apply_data(&e.terms))
    }
}

/// Declarative ring construction; relations and derivation values are given
/// as expression strings over previously declared generators.
#[derive(Default)]
pub struct RingBuilder {
    derivations: Vec<String>,
    gens: Vec<GenSpec>,
}

struct GenSpec {
    name: String,
    power_rule: Option<(u16, String)>,
    inverse_of: Option<String>,
    deriv_values: Vec<(String, String)>,
}

impl RingBuilder {
    pub fn derivation(mut self, name: &str) -> Self {
        self.derivations.push(name.to_string());
        self
    }

    pub fn gen(mut self, name: &str) -> Self {
        self.gens.push(GenSpec {
            name: name.to_string(),
            power_rule: None,
            inverse_of: None,
            deriv_values: Vec::new(),
        });
        self
    }

    pub fn gens(mut self, names: &[&str]) -> Self {
        for n in names {
            self = self.gen(n);
        }
        self
    }

    /// `name^k -> rhs`, rhs over strictly earlier generators.
    pub fn gen_with_rule(mut self, name: &str, k: u16, rhs: &str) -> Self {
        self.gens.push(GenSpec {
            name: name.to_string(),
            power_rule: Some((k, rhs.to_string())),
            inverse_of: None,
            deriv_values: Vec::new(),
        });
        self
    }

    /// Adjoin `name` with `name * of = 1`.
    pub fn gen_inverse(mut self, name: &str, of: &str) -> Self {
        self.gens.push(GenSpec {
            name: name.to_string(),
            power_rule: None,
            inverse_of: Some(of.to_string()),
            deriv_values: Vec::new(),
        });
        self
    }

    /// Declare the value of a derivation on the most recently added generator.
    pub fn deriv(mut self, derivation: &str, value: &str) -> Self {
        let g = self
            .gens
            .last_mut()
            .expect("deriv() must follow a generator");
        g.deriv_values
            .push((derivation.to_string(), value.to_string()));
        self
    }

    pub fn build(self) -> Result<Ring> {
        let mut names: Vec<String> = Vec::new();
        for g in &self.gens {
            if names.contains(&g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            names.push(g.name.clone());
        }
        // Interim ring with no relations, used to parse rule expressions.
        let plain = Ring(Rc::new(RingData {
            gens: names
                .iter()
                .map(|n| GenData {
                    name: n.clone(),
                    power_rule: None,
                    inverse_partner: None,
                    deriv_values: vec![None; self.derivations.len()],
                })
                .collect(),
            derivations: self.derivations.clone(),
        }));

        let mut gens: Vec<GenData> = Vec::new();
        for (idx, spec) in self.gens.iter().enumerate() {
            let power_rule = match &spec.power_rule {
                None => None,
                Some((k, rhs)) => {
                    let poly = plain.parse(rhs)?;
                    for (m, _) in poly.terms() {
                        for (g, _) in m.iter() {
                            if g >= idx {
                                return Err(Error::NotTriangular {
                                    gen: spec.name.clone(),
                                    offender: plain.generator_name(g).to_string(),
                                });
                            }
                        }
                    }
                    Some((*k, poly.terms.clone()))
                }
            };
            gens.push(GenData {
                name: spec.name.clone(),
                power_rule,
                inverse_partner: None,
                deriv_values: vec![None; self.derivations.len()],
            });
        }
        // Wire inverse pairs.  The base generator of a pair may also carry
        // a power rule (pairs cancel before the rule fires, so k*k_inv -> 1
        // and k^2 -> p coexist consistently); the inverse itself must be
        // rule-free.
        for (idx, spec) in self.gens.iter().enumerate() {
            if let Some(of) = &spec.inverse_of {
                let p = names
                    .iter()
                    .position(|n| n == of)
                    .ok_or_else(|| Error::UnknownGenerator(of.clone()))?;
                if gens[idx].power_rule.is_some() {
                    return Err(Error::MixedRelation(spec.name.clone()));
                }
                gens[idx].inverse_partner = Some(p);
                gens[p].inverse_partner = Some(idx);
            }
        }
        let ring = Ring(Rc::new(RingData {
            gens,
            derivations: self.derivations.clone(),
        }));
        // Derivation values parse against the full ring (later generators allowed).
        let mut values: Vec<Vec<Option<PolyData>>> =
            vec![vec![None; self.derivations.len()]; names.len()];
        for (idx, spec) in self.gens.iter().enumerate() {
            for (dname, expr) in &spec.deriv_values {
                let d = self
                    .derivations
                    .iter()
                    .position(|n| n == dname)
                    .ok_or_else(|| Error::UnknownDerivation(dname.clone()))?;
                values[idx][d] = Some(ring.parse(expr)?.terms);
            }
        }
        // Rebuild with values in place (builder owns the only live handle).
        let ring = {
            let RingData { gens, derivations } =
                Rc::try_unwrap(ring.0).expect("builder owns the only handle");
            let gens = gens
                .into_iter()
                .enumerate()
                .map(|(i, mut g)| {
                    g.deriv_values = values[i].clone();
                    g
                })
                .collect();
            Ring(Rc::new(RingData { gens, derivations }))
        };
        ring.check_derivations()?;
        Ok(ring)
    }
}

impl Ring {
    /// Each declared derivation must annihilate each relation, whenever the
    /// relation's generators all carry values for it.
    fn check_derivations(&self) -> Result<()> {
        for d in 0..self.0.derivations.len() {
            let dname = &self.0.derivations[d];
            for idx in 0..self.generator_count() {
                let g = &self.0.gens[idx];
                let lhs_rhs: Option<RingElement> = if let Some((k, rhs)) = &g.power_rule {
                    // delta(g^k - rhs)
                    let gk = self.gen_by_index(idx).pow(*k as u32 - 1);
                    let dg = match &g.deriv_values[d] {
                        Some(v) => self.element_from_data(v.clone()),
                        None => continue,
                    };
                    let lhs = gk.mul(&dg).scale(&int(*k as i64));
                    let rhs_el = self.element_from_data(rhs.clone());
                    let mut drhs = self.zero();
                    let mut ok = true;
                    for (gg, part) in rhs_el.partials() {
                        match &self.0.gens[gg].deriv_values[d] {
                            Some(v) => {
                                drhs = drhs.add(&part.mul(&self.element_from_data(v.clone())))
                            }
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    Some(lhs.sub(&drhs))
                } else {
                    None
                };
                if let Some(residual) = lhs_rhs {
                    if !residual.is_zero() {
                        return Err(Error::DerivationIncompatible {
                            derivation: dname.clone(),
                            gen: g.name.clone(),
                        });
                    }
                }
                // Inverse pairs are checked independently of power rules.
                if let Some(p) = g.inverse_partner {
                    if p > idx {
                        let dg = g.deriv_values[d]
                            .as_ref()
                            .map(|v| self.element_from_data(v.clone()));
                        let dp = self.0.gens[p].deriv_values[d]
                            .as_ref()
                            .map(|v| self.element_from_data(v.clone()));
                        if let (Some(dg), Some(dp)) = (dg, dp) {
                            let residual = dg
                                .mul(&self.gen_by_index(p))
                                .add(&self.gen_by_index(idx).mul(&dp));
                            if !residual.is_zero() {
                                return Err(Error::DerivationIncompatible {
                                    derivation: dname.clone(),
                                    gen: g.name.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trig_ring() -> Ring {
        Ring::builder()
            .derivation("t")
            .gen("sin_t")
            .deriv("t", "cos_t")
            .gen_with_rule("cos_t", 2, "1 - sin_t^2")
            .deriv("t", "-sin_t")
            .build()
            .unwrap()
    }

    #[test]
    fn pythagorean_normalizes_to_one() {
        let r = trig_ring();
        let e = r.parse("sin_t^2 + cos_t^2").unwrap();
        assert!(e.is_one());
    }

    #[test]
    fn sphere_rule_expands_top_square() {
        let mut b = Ring::builder();
        for i in 1..=6 {
            b = b.gen(&format!("x{i}"));
        }
        let r = b
            .gen_with_rule("x7", 2, "1 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2 - x6^2")
            .build()
            .unwrap();
        let e = r.parse("x7^2").unwrap();
        let expected = r
            .parse("1 - x1^2 - x2^2 - x3^2 - x4^2 - x5^2 - x6^2")
            .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn sqrt3_squared_times_third() {
        let r = Ring::builder()
            .gen_with_rule("sqrt3", 2, "3")
            .build()
            .unwrap();
        let e = r.parse("1/3 * sqrt3^2").unwrap();
        assert!(e.is_one());
    }

    #[test]
    fn derive_declared_rules() {
        let r = trig_ring();
        let s = r.gen("sin_t").unwrap();
        assert_eq!(s.derive("t").unwrap(), r.gen("cos_t").unwrap());
        let ch_ring = Ring::builder()
            .derivation("t")
            .gen("sinh_3t")
            .deriv("t", "3*cosh_3t")
            .gen_with_rule("cosh_3t", 2, "1 + sinh_3t^2")
            .deriv("t", "3*sinh_3t")
            .build()
            .unwrap();
        let ch = ch_ring.gen("cosh_3t").unwrap();
        assert_eq!(ch.derive("t").unwrap(), ch_ring.parse("3*sinh_3t").unwrap());
    }

    #[test]
    fn derive_leibniz_on_product() {
        let r = trig_ring();
        let e = r.parse("sin_t^2 * cos_t").unwrap();
        let expected = r.parse("2*sin_t*cos_t^2 - sin_t^3").unwrap();
        assert_eq!(e.derive("t").unwrap(), expected);
    }

    #[test]
    fn derivation_must_kill_relations() {
        let bad = Ring::builder()
            .derivation("t")
            .gen("s")
            .deriv("t", "c")
            .gen_with_rule("c", 2, "1 - s^2")
            .deriv("t", "s") // wrong sign
            .build();
        assert!(matches!(bad, Err(Error::DerivationIncompatible { .. })));
    }

    #[test]
    fn substitute_checks_relations() {
        let src = trig_ring();
        let dst = Ring::builder().build().unwrap();
        // sin -> 1, cos -> 0 is the t = pi/2 slice.
        let ok = Substitution::new(
            &src,
            &dst,
            vec![("sin_t".into(), dst.one()), ("cos_t".into(), dst.zero())],
        );
        assert!(ok.is_ok());
        let bad = Substitution::new(
            &src,
            &dst,
            vec![("sin_t".into(), dst.one()), ("cos_t".into(), dst.one())],
        );
        assert!(matches!(bad, Err(Error::SubstitutionInconsistent(_))));
    }

    #[test]
    fn deformation_polynomial_vanishes_at_special_point() {
        let src = Ring::builder().gens(&["lambda", "mu"]).build().unwrap();
        let dst = Ring::builder().build().unwrap();
        let sub = Substitution::new(
            &src,
            &dst,
            vec![
                ("lambda".into(), dst.rational(-1, 2)),
                ("mu".into(), dst.zero()),
            ],
        )
        .unwrap();
        let p = src
            .parse("2*lambda^2 + lambda - 6*lambda*mu - 3/2*mu")
            .unwrap();
        assert!(sub.apply(&p).unwrap().is_zero());
    }

    #[test]
    fn inverse_pair_cancels() {
        let r = Ring::builder()
            .gen("r")
            .gen_inverse("r_inv", "r")
            .build()
            .unwrap();
        let e = r.parse("r^2 * r_inv").unwrap();
        assert_eq!(e, r.gen("r").unwrap());
        let e = r.parse("r * r_inv - 1").unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let r = trig_ring();
        assert!(matches!(
            r.parse("nope + 1"),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let r = Ring::builder().gens(&["mu", "rho"]).build().unwrap();
        let e = r.parse("-3/2*mu^2*rho + mu - 7").unwrap();
        let back = r.parse(&format!("{e}")).unwrap();
        assert_eq!(e, back);
    }
}
