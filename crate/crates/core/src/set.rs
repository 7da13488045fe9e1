//! Canonical finite sets and elementwise set operations.

use std::collections::HashSet;

use serde::{de, Deserialize, Deserializer, Serialize};

use crate::ambient::{compose, AmbientSpec, CompositionMode, Element, Value};
use crate::error::{Error, Result};

/// A finite set in an ambient group: distinct, canonical, strictly sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroundSet {
    ambient: AmbientSpec,
    elements: Vec<Element>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl GroundSet {
    /// Sorts and deduplicates `elements` after checking canonicity.
    pub fn new(ambient: AmbientSpec, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut elements: Vec<Element> = elements.into_iter().collect();
        for &e in &elements {
            ambient.check(e)?;
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(GroundSet { ambient, elements, label: None })
    }

    /// Like [`GroundSet::new`] but rejects duplicates instead of merging them.
    pub fn new_strict(ambient: AmbientSpec, elements: Vec<Element>) -> Result<Self> {
        let n = elements.len();
        let set = Self::new(ambient, elements.iter().copied())?;
        if set.len() != n {
            let mut sorted = elements;
            sorted.sort_unstable();
            let dup = sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]);
            return Err(Error::DuplicateElement(
                dup.map(|d| d.to_string()).unwrap_or_default(),
            ));
        }
        Ok(set)
    }

    pub(crate) fn from_sorted_unchecked(ambient: AmbientSpec, elements: Vec<Element>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        GroundSet { ambient, elements, label: None }
    }

    pub fn integers(values: impl IntoIterator<Item = i64>) -> Self {
        let mut v: Vec<Element> = values.into_iter().map(Element::Int).collect();
        v.sort_unstable();
        v.dedup();
        GroundSet { ambient: AmbientSpec::Integers, elements: v, label: None }
    }

    /// `{lo, lo+1, ..., hi}` over the integers.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::integers(lo..=hi)
    }

    pub fn residues(ambient: AmbientSpec, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let elems = values
            .into_iter()
            .map(|x| ambient.reduce(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, elems)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    /// Integer values, when every element is a scalar.
    pub fn ints(&self) -> Option<Vec<i64>> {
        self.elements.iter().map(|e| e.as_int()).collect()
    }

    pub fn same_ambient(&self, other: &GroundSet) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: other.ambient.to_string(),
            })
        }
    }

    pub fn is_subset_of(&self, other: &GroundSet) -> bool {
        self.ambient == other.ambient && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn intersection(&self, other: &GroundSet) -> Result<GroundSet> {
        self.same_ambient(other)?;
        let elems = self.elements.iter().copied().filter(|e| other.contains(e)).collect();
        Ok(Self::from_sorted_unchecked(self.ambient, elems))
    }

    pub fn union(&self, other: &GroundSet) -> Result<GroundSet> {
        self.same_ambient(other)?;
        Self::new(self.ambient, self.iter().chain(other.iter()))
    }

    /// `A + t`.
    pub fn translate(&self, t: Element) -> Result<GroundSet> {
        let elems = self
            .iter()
            .map(|a| self.ambient.add(a, t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.ambient, elems)
    }

    /// Elements satisfying `keep`, order preserved.
    pub fn filter(&self, mut keep: impl FnMut(Element) -> bool) -> GroundSet {
        let elems = self.iter().filter(|&e| keep(e)).collect();
        Self::from_sorted_unchecked(self.ambient, elems)
    }

    /// The subset picked by sorted, distinct positions.
    pub fn subset_by_index(&self, idx: &[usize]) -> GroundSet {
        let elems = idx.iter().map(|&i| self.elements[i]).collect();
        Self::from_sorted_unchecked(self.ambient, elems)
    }

    pub fn lookup(&self) -> Lookup {
        Lookup::new(self)
    }
}

impl<'de> Deserialize<'de> for GroundSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            ambient: AmbientSpec,
            elements: Vec<Element>,
            #[serde(default)]
            label: Option<String>,
        }
        let r = Repr::deserialize(d)?;
        let mut set = GroundSet::new_strict(r.ambient, r.elements).map_err(de::Error::custom)?;
        set.label = r.label;
        Ok(set)
    }
}

/// Constant-time membership for a fixed set: a bitmap for compact integer
/// sets, a hash set otherwise.
pub enum Lookup {
    Dense { offset: i64, bits: Vec<bool> },
    Hashed(HashSet<Element>),
}

const DENSE_LOOKUP_SPAN: i64 = 1 << 26;

impl Lookup {
    pub fn new(set: &GroundSet) -> Self {
        if let Some(ints) = set.ints() {
            if let (Some(&lo), Some(&hi)) = (ints.first(), ints.last()) {
                let span = hi as i128 - lo as i128 + 1;
                if span <= DENSE_LOOKUP_SPAN as i128 && span <= 64 * ints.len() as i128 + 4096 {
                    let mut bits = vec![false; span as usize];
                    for x in ints {
                        bits[(x - lo) as usize] = true;
                    }
                    return Lookup::Dense { offset: lo, bits };
                }
            }
        }
        Lookup::Hashed(set.iter().collect())
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        match self {
            Lookup::Dense { offset, bits } => match e {
                Element::Int(x) => {
                    let i = x as i128 - *offset as i128;
                    i >= 0 && (i as usize) < bits.len() && bits[i as usize]
                }
                Element::Pair(..) => false,
            },
            Lookup::Hashed(h) => h.contains(&e),
        }
    }
}

/// `{a ∘ b : a ∈ A, b ∈ B}`.
///
/// Over the integers the ratio of two elements is a fraction, which is not a
/// set element, so ratio sets are only available over `F_p`. With
/// `skip_noninvertible`, pairs whose right operand is not invertible are
/// dropped instead of raising [`Error::DivisionByZero`].
pub fn set_compose(
    a: &GroundSet,
    b: &GroundSet,
    mode: CompositionMode,
    skip_noninvertible: bool,
) -> Result<GroundSet> {
    a.same_ambient(b)?;
    let amb = *a.ambient();
    amb.require(mode)?;
    if mode == CompositionMode::Ratio && amb == AmbientSpec::Integers {
        return Err(Error::UnsupportedMode {
            mode: "ratio (as a set)".into(),
            ambient: amb.to_string(),
        });
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            match compose(&amb, mode, x, y) {
                Ok(Value::Elem(e)) => out.push(e),
                Ok(Value::Ratio(_)) => unreachable!("integer ratios rejected above"),
                Err(Error::DivisionByZero(_)) if skip_noninvertible => {}
                Err(e) => return Err(e),
            }
        }
    }
    GroundSet::new(amb, out)
}

/// `{scale·a + shift : a ∈ A}`.
pub fn affine_image(a: &GroundSet, scale: i64, shift: Element) -> Result<GroundSet> {
    let amb = *a.ambient();
    if scale == 0 {
        return Err(Error::invalid("scale must be nonzero"));
    }
    let elems = a
        .iter()
        .map(|x| amb.scale(scale, x).and_then(|y| amb.add(y, shift)))
        .collect::<Result<Vec<_>>>()?;
    GroundSet::new(amb, elems).map(|s| match a.label() {
        Some(l) => s.with_label(l.to_string()),
        None => s,
    })
}

/// `n·A - m·A` by iterated sumsets, refusing to grow beyond `budget` elements.
pub fn iterated_sumset(a: &GroundSet, n: u32, m: u32, budget: usize) -> Result<GroundSet> {
    let amb = *a.ambient();
    let mut acc = GroundSet::new(amb, [amb.zero()])?;
    let neg = GroundSet::new(amb, a.iter().map(|x| amb.neg(x)).collect::<Result<Vec<_>>>()?)?;
    for (times, part) in [(n, a), (m, &neg)] {
        for _ in 0..times {
            let est = acc.len().saturating_mul(part.len());
            if est > budget.saturating_mul(64) {
                return Err(Error::OverflowBudgetExceeded(format!(
                    "iterated sumset would enumerate {est} pairs"
                )));
            }
            acc = set_compose(&acc, part, CompositionMode::Sum, false)?;
            if acc.len() > budget {
                return Err(Error::OverflowBudgetExceeded(format!(
                    "iterated sumset has more than {budget} elements"
                )));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &GroundSet) -> Vec<i64> {
        s.ints().unwrap()
    }

    #[test]
    fn set_compose_examples() {
        let s = set_compose(
            &GroundSet::integers([0, 1]),
            &GroundSet::integers([0, 2]),
            CompositionMode::Sum,
            false,
        )
        .unwrap();
        assert_eq!(ints(&s), vec![0, 1, 2, 3]);

        let a = GroundSet::integers([0, 1, 3]);
        let d = set_compose(&a, &a, CompositionMode::Difference, false).unwrap();
        assert_eq!(ints(&d), vec![-3, -2, -1, 0, 1, 2, 3]);

        let g = GroundSet::integers([1, 2, 4]);
        let p = set_compose(&g, &g, CompositionMode::Product, false).unwrap();
        assert_eq!(ints(&p), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn ratio_sets_over_prime_field() {
        let f7 = AmbientSpec::prime_field(7).unwrap();
        let a = GroundSet::residues(f7, [0, 1, 3]).unwrap();
        assert!(set_compose(&a, &a, CompositionMode::Ratio, false).is_err());
        let r = set_compose(&a, &a, CompositionMode::Ratio, true).unwrap();
        // 0/1, 0/3, 1/1, 1/3 = 5, 3/1 = 3, 3/3 = 1
        assert_eq!(ints(&r), vec![0, 1, 3, 5]);
    }

    #[test]
    fn ambient_mismatch() {
        let f7 = AmbientSpec::prime_field(7).unwrap();
        let a = GroundSet::residues(f7, [1]).unwrap();
        let b = GroundSet::integers([1]);
        assert!(matches!(
            set_compose(&a, &b, CompositionMode::Sum, false),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn affine_examples() {
        let a = GroundSet::integers([0, 1, 3]);
        assert_eq!(ints(&affine_image(&a, 2, 0.into()).unwrap()), vec![0, 2, 6]);
        assert_eq!(ints(&affine_image(&a, 1, 5.into()).unwrap()), vec![5, 6, 8]);
        assert_eq!(ints(&affine_image(&a, 2, 1.into()).unwrap()), vec![1, 3, 7]);
        assert_eq!(affine_image(&a, 1, 0.into()).unwrap(), a);
        assert!(affine_image(&a, 0, 0.into()).is_err());
    }

    #[test]
    fn canonical_construction() {
        let f13 = AmbientSpec::prime_field(13).unwrap();
        assert!(GroundSet::new(f13, [Element::Int(13)]).is_err());
        assert!(GroundSet::new_strict(AmbientSpec::Integers, vec![1.into(), 1.into()]).is_err());
        let s = GroundSet::new(AmbientSpec::Integers, [3.into(), 1.into(), 0.into()]).unwrap();
        assert_eq!(ints(&s), vec![0, 1, 3]);
    }

    #[test]
    fn lookup_agrees_with_binary_search() {
        let s = GroundSet::integers([-5, 0, 7, 1000]);
        let l = s.lookup();
        for x in -10..1010 {
            assert_eq!(l.contains(Element::Int(x)), s.contains(&Element::Int(x)));
        }
        let sparse = GroundSet::integers([0, 1 << 40]);
        let l = sparse.lookup();
        assert!(matches!(l, Lookup::Hashed(_)));
        assert!(l.contains(Element::Int(1 << 40)));
    }

    #[test]
    fn iterated_sumsets() {
        let a = GroundSet::integers([0, 1]);
        assert_eq!(ints(&iterated_sumset(&a, 2, 1, 1000).unwrap()), vec![-1, 0, 1, 2]);
        assert_eq!(iterated_sumset(&a, 1, 0, 1000).unwrap(), a);
        assert!(iterated_sumset(&GroundSet::interval(0, 99), 5, 5, 100).is_err());
    }
}
