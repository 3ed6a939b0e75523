//! Normal forms and graded dimensions for the five quotient algebras
//! `A_r`, `A'_r`, `A''_r`, `A_r(ℓ)` and `A'_r(ℓ)`.
//!
//! A basis monomial is a `D`-weighted partition together with one exponent
//! per block: `Π_blocks v_block^{e} · a_P`. Storing a single exponent per
//! block builds the relation `v_i a_I = v_j a_I` into the data type, so the
//! only rewriting left is the merge of overlapping `a`-classes done by
//! [`multiply`].
//!
//! Degrees are cohomological: `v_i` has degree 2 and `a_(S,d)` degree
//! `2|S| - 2`. The primed variants are subspaces (they miss the unit), so
//! products on them go through the full algebra followed by [`is_member`].

mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::abelian_group::{FiniteAbelianGroup, GroupElement, SymbolicOrder, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::linalg::format_rational;
use crate::partitions::{enumerate_d_weighted_partitions, DBlock, DWeightedPartition};
use crate::poly::{compositions, Poly};

pub use oracle::{oracle_graded_dimension, ORACLE_MAX_DEGREE, ORACLE_MAX_GROUP_ORDER, ORACLE_MAX_R};

/// Largest degree accepted by [`basis`].
pub const BASIS_DEGREE_CAP: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `A_r`: untwisted `u_i`, `a_I`.
    LooijengaFull,
    /// `A'_r`: `u_i^2` on every singleton.
    LooijengaPrime,
    /// `A''_r`: `u_i` on every singleton.
    KawazumiDoublePrime,
    /// `A_r(ℓ)`: `v_i`, `a_(S,d)`.
    LevelFull,
    /// `A'_r(ℓ)`: `v_i` on every singleton.
    LevelPrime,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::LooijengaFull,
        Variant::LooijengaPrime,
        Variant::KawazumiDoublePrime,
        Variant::LevelFull,
        Variant::LevelPrime,
    ];

    pub fn is_level(self) -> bool {
        matches!(self, Variant::LevelFull | Variant::LevelPrime)
    }

    /// Minimal exponent forced on singleton blocks.
    pub fn singleton_min_exponent(self) -> u32 {
        match self {
            Variant::LooijengaFull | Variant::LevelFull => 0,
            Variant::KawazumiDoublePrime | Variant::LevelPrime => 1,
            Variant::LooijengaPrime => 2,
        }
    }

    /// The full algebra this variant lives in.
    pub fn ambient(self) -> Variant {
        if self.is_level() {
            Variant::LevelFull
        } else {
            Variant::LooijengaFull
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::LooijengaFull => "looijenga-full",
            Variant::LooijengaPrime => "looijenga-prime",
            Variant::KawazumiDoublePrime => "kawazumi-dprime",
            Variant::LevelFull => "level-full",
            Variant::LevelPrime => "level-prime",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::parse(s, "unknown variant, expected one of looijenga-full, looijenga-prime, kawazumi-dprime, level-full, level-prime"))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The deck group a level algebra is twisted by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Concrete(FiniteAbelianGroup),
    Symbolic(SymbolicOrder),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraSpec {
    pub variant: Variant,
    pub r: usize,
    pub group: GroupSpec,
}

impl AlgebraSpec {
    pub fn new(variant: Variant, r: usize, group: GroupSpec) -> Self {
        AlgebraSpec { variant, r, group }
    }

    /// Spec over a concrete group (ignored by the untwisted variants).
    pub fn concrete(variant: Variant, r: usize, group: FiniteAbelianGroup) -> Self {
        AlgebraSpec::new(variant, r, GroupSpec::Concrete(group))
    }

    pub fn symbolic(variant: Variant, r: usize) -> Self {
        AlgebraSpec::new(variant, r, GroupSpec::Symbolic(SymbolicOrder::unbound()))
    }

    /// Group used for weights: the trivial group for untwisted variants.
    pub fn effective_group(&self) -> Result<FiniteAbelianGroup> {
        if !self.variant.is_level() {
            return Ok(FiniteAbelianGroup::trivial());
        }
        match &self.group {
            GroupSpec::Concrete(g) => Ok(g.clone()),
            GroupSpec::Symbolic(_) => Err(Error::invalid(format!(
                "{} needs a concrete group for this operation",
                self.variant
            ))),
        }
    }

    /// Same `r` and group, different variant.
    pub fn with_variant(&self, variant: Variant) -> Self {
        AlgebraSpec {
            variant,
            r: self.r,
            group: self.group.clone(),
        }
    }
}

/// Basis monomial `Π v_block^{e_block} · a_P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalMonomial {
    partition: DWeightedPartition,
    exponents: Vec<u32>,
}

impl NormalMonomial {
    pub fn new(partition: DWeightedPartition, exponents: Vec<u32>) -> Result<Self> {
        if exponents.len() != partition.num_blocks() {
            return Err(Error::invalid("one exponent per block required"));
        }
        Ok(NormalMonomial { partition, exponents })
    }

    pub fn one(r: usize) -> Self {
        NormalMonomial {
            partition: DWeightedPartition::discrete(r),
            exponents: vec![0; r],
        }
    }

    /// The generator `v_i`.
    pub fn v(r: usize, i: usize) -> Result<Self> {
        if i == 0 || i > r {
            return Err(Error::invalid(format!("v index {i} outside 1..={r}")));
        }
        let mut m = NormalMonomial::one(r);
        m.exponents[i - 1] = 1;
        Ok(m)
    }

    /// The generator `a_(S,d)`.
    pub fn a(r: usize, block: DBlock) -> Result<Self> {
        let mut blocks: Vec<DBlock> = (1..=r)
            .filter(|i| !block.contains(*i))
            .map(DBlock::singleton)
            .collect();
        blocks.push(block);
        let partition = DWeightedPartition::new(r, blocks)?;
        let n = partition.num_blocks();
        Ok(NormalMonomial {
            partition,
            exponents: vec![0; n],
        })
    }

    pub fn partition(&self) -> &DWeightedPartition {
        &self.partition
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn r(&self) -> usize {
        self.partition.r()
    }

    pub fn degree(&self) -> u64 {
        self.partition
            .blocks()
            .iter()
            .zip(&self.exponents)
            .map(|(b, &e)| 2 * e as u64 + 2 * (b.len() as u64 - 1))
            .sum()
    }

    /// Relabelled monomial; exponents travel with their blocks.
    pub fn relabel(&self, sigma: &crate::partitions::Permutation, group: &FiniteAbelianGroup) -> Result<Self> {
        let moved = self.partition.relabel(sigma, group)?;
        let mut exponents = vec![0; moved.num_blocks()];
        for (b, &e) in self.partition.blocks().iter().zip(&self.exponents) {
            let target = moved
                .block_of(sigma.apply(b.base()))
                .expect("relabelled partition covers every index");
            exponents[target] = e;
        }
        Ok(NormalMonomial {
            partition: moved,
            exponents,
        })
    }
}

/// Membership of a basis monomial in the (possibly primed) subspace.
pub fn is_member(spec: &AlgebraSpec, m: &NormalMonomial) -> bool {
    if m.r() != spec.r {
        return false;
    }
    let min = spec.variant.singleton_min_exponent();
    m.partition
        .blocks()
        .iter()
        .zip(&m.exponents)
        .all(|(b, &e)| b.len() > 1 || e >= min)
}

/// Finite rational combination of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<NormalMonomial, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: NormalMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigRational::one());
        AlgebraElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: NormalMonomial, c: BigRational) {
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Bilinear product in the full algebra of `spec`.
    pub fn mul(&self, other: &AlgebraElement, spec: &AlgebraSpec) -> Result<Self> {
        let mut out = AlgebraElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(p) = multiply_monomials(a, b, spec)? {
                    out.add_term(p, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// `[[numerator, denominator, monomial], ...]` in canonical monomial order.
    pub fn to_json(&self, group: &FiniteAbelianGroup) -> serde_json::Value {
        let _ = group;
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    serde_json::json!([c.numer().to_string(), c.denom().to_string(), m.to_string()])
                })
                .collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value, spec: &AlgebraSpec) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::parse(value.to_string(), "expected a JSON list"))?;
        let mut out = AlgebraElement::zero();
        for term in arr {
            let t = term
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::parse(term.to_string(), "expected [num, den, monomial]"))?;
            let field = |k: usize| -> Result<String> {
                match &t[k] {
                    serde_json::Value::String(s) => Ok(s.clone()),
                    serde_json::Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::parse(other.to_string(), "expected string or integer")),
                }
            };
            let num: BigInt = field(0)?.parse().map_err(|_| Error::parse(t[0].to_string(), "bad numerator"))?;
            let den: BigInt = field(1)?.parse().map_err(|_| Error::parse(t[1].to_string(), "bad denominator"))?;
            if den.is_zero() {
                return Err(Error::parse(t[1].to_string(), "zero denominator"));
            }
            let m = parse_monomial(&field(2)?, spec)?;
            out.add_term(m, BigRational::new(num, den));
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({}) {}", format_rational(c), m))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Product of two basis monomials in the full algebra; zero is returned as
/// an empty element.
pub fn multiply(x: &NormalMonomial, y: &NormalMonomial, spec: &AlgebraSpec) -> Result<AlgebraElement> {
    Ok(match multiply_monomials(x, y, spec)? {
        Some(m) => AlgebraElement::monomial(m),
        None => AlgebraElement::zero(),
    })
}

/// Like [`multiply`] but `None` for zero.
pub fn multiply_monomials(x: &NormalMonomial, y: &NormalMonomial, spec: &AlgebraSpec) -> Result<Option<NormalMonomial>> {
    merge_product(x, y, spec, |_| 0)
}

/// [`multiply`] with overlapping blocks merged in a random order. The result
/// must not depend on the order; this entry point exists to test that.
pub fn multiply_with_merge_order<R: Rng>(
    x: &NormalMonomial,
    y: &NormalMonomial,
    spec: &AlgebraSpec,
    rng: &mut R,
) -> Result<Option<NormalMonomial>> {
    merge_product(x, y, spec, |n| rng.gen_range(0..n))
}

struct WorkBlock {
    positions: BTreeMap<usize, GroupElement>,
    exponent: u64,
}

fn merge_product(
    x: &NormalMonomial,
    y: &NormalMonomial,
    spec: &AlgebraSpec,
    mut pick: impl FnMut(usize) -> usize,
) -> Result<Option<NormalMonomial>> {
    if x.r() != spec.r || y.r() != spec.r {
        return Err(Error::invalid(format!(
            "monomials over [{}] and [{}] multiplied in an algebra over [{}]",
            x.r(),
            y.r(),
            spec.r
        )));
    }
    let group = spec.effective_group()?;
    let mut work: Vec<WorkBlock> = [x, y]
        .iter()
        .flat_map(|m| {
            m.partition.blocks().iter().zip(&m.exponents).map(|(b, &e)| WorkBlock {
                positions: b.positions(&group).into_iter().collect(),
                exponent: e as u64,
            })
        })
        .collect();

    loop {
        let mut overlapping = Vec::new();
        for i in 0..work.len() {
            for j in i + 1..work.len() {
                if work[i].positions.keys().any(|k| work[j].positions.contains_key(k)) {
                    overlapping.push((i, j));
                }
            }
        }
        if overlapping.is_empty() {
            break;
        }
        let (i, j) = overlapping[pick(overlapping.len())];
        let second = work.swap_remove(j);
        let first = work.swap_remove(i);
        match merge_blocks(&group, first, second) {
            Some(b) => work.push(b),
            None => return Ok(None),
        }
    }

    let mut pairs: Vec<(DBlock, u32)> = work
        .into_iter()
        .map(|w| {
            let e = u32::try_from(w.exponent).expect("exponent overflow");
            (DBlock::from_positions(&group, w.positions.into_iter().collect()), e)
        })
        .collect();
    pairs.sort_by_key(|(b, _)| b.base());
    let (blocks, exponents): (Vec<DBlock>, Vec<u32>) = pairs.into_iter().unzip();
    Ok(Some(NormalMonomial {
        partition: DWeightedPartition::from_sorted_blocks(spec.r, blocks),
        exponents,
    }))
}

/// `a_I · a_J = v^{|I∩J|-1} a_{I∪J}` when the positions agree up to a
/// common shift on the overlap, `None` when they contradict.
fn merge_blocks(group: &FiniteAbelianGroup, a: WorkBlock, b: WorkBlock) -> Option<WorkBlock> {
    let overlap: Vec<usize> = a.positions.keys().filter(|k| b.positions.contains_key(k)).copied().collect();
    let anchor = overlap[0];
    let shift = group.sub(&a.positions[&anchor], &b.positions[&anchor]);
    for k in &overlap[1..] {
        if group.sub(&a.positions[k], &b.positions[k]) != shift {
            return None;
        }
    }
    let mut positions = a.positions;
    for (k, w) in b.positions {
        positions.entry(k).or_insert_with(|| group.add(&w, &shift));
    }
    Some(WorkBlock {
        positions,
        exponent: a.exponent + b.exponent + overlap.len() as u64 - 1,
    })
}

/// Integer partitions of `n` into parts, descending.
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of set partitions of `[r]` with block sizes `shape`.
pub(crate) fn set_partitions_of_shape(shape: &[usize]) -> BigInt {
    let r: usize = shape.iter().sum();
    let fact = |n: usize| -> BigInt { (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)) };
    let mut denom = BigInt::one();
    for &s in shape {
        denom *= fact(s);
    }
    let mut i = 0;
    while i < shape.len() {
        let run = shape[i..].iter().take_while(|&&x| x == shape[i]).count();
        denom *= fact(run);
        i += run;
    }
    fact(r) / denom
}

/// Degree-`n` count of basis monomials over partitions of a given shape.
/// `singleton_min` is the forced exponent on singletons.
pub(crate) fn shape_count(shape: &[usize], singleton_min: u32, n: u64) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let base: u64 = shape.iter().map(|&s| 2 * (s as u64 - 1)).sum();
    let singles = shape.iter().filter(|&&s| s == 1).count() as u64;
    let lower = 2 * singles * singleton_min as u64;
    if n < base + lower {
        return BigInt::zero();
    }
    compositions((n - base - lower) / 2, shape.len() as u64)
}

/// Graded dimension of `spec` in degree `n`, as a polynomial in `m = |D|`
/// (constant for the untwisted variants).
pub fn graded_dimension(spec: &AlgebraSpec, n: u64) -> Poly {
    graded_dimension_for(spec.variant, spec.r, n)
}

pub fn graded_dimension_for(variant: Variant, r: usize, n: u64) -> Poly {
    if n % 2 == 1 {
        return Poly::zero();
    }
    let mut acc = Poly::zero();
    for shape in integer_partitions(r) {
        let count = shape_count(&shape, variant.singleton_min_exponent(), n);
        if count.is_zero() {
            continue;
        }
        let weight_power = if variant.is_level() { r - shape.len() } else { 0 };
        acc += &Poly::monomial(count * set_partitions_of_shape(&shape), weight_power);
    }
    acc
}

/// Graded dimension evaluated at the concrete group of `spec`.
pub fn graded_dimension_value(spec: &AlgebraSpec, n: u64) -> Result<BigInt> {
    let poly = graded_dimension(spec, n);
    Ok(poly.eval(&spec.effective_group()?.order()))
}

/// Basis monomials of degree `n`, ordered by partition enumeration order and
/// then lexicographically by exponents.
pub fn basis(spec: &AlgebraSpec, n: u64) -> Result<Vec<NormalMonomial>> {
    if n > BASIS_DEGREE_CAP {
        return Err(Error::cap("basis degree", n, BASIS_DEGREE_CAP));
    }
    let group = spec.effective_group()?;
    let expected = graded_dimension(spec, n).eval(&group.order());
    if expected.to_u64().is_none_or(|e| e > ENUMERATION_CAP) {
        return Err(Error::cap("basis size", expected, ENUMERATION_CAP));
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let min = spec.variant.singleton_min_exponent();
    let mut out = Vec::new();
    for p in enumerate_d_weighted_partitions(spec.r, &group)? {
        let base: u64 = p.blocks().iter().map(|b| 2 * (b.len() as u64 - 1)).sum();
        let lows: Vec<u32> = p.blocks().iter().map(|b| if b.len() == 1 { min } else { 0 }).collect();
        let low_sum: u64 = lows.iter().map(|&l| 2 * l as u64).sum();
        if n < base + low_sum {
            continue;
        }
        let free = ((n - base - low_sum) / 2) as u32;
        for extra in exponent_vectors(free, lows.len()) {
            let exponents = extra.iter().zip(&lows).map(|(e, l)| e + l).collect();
            out.push(NormalMonomial {
                partition: p.clone(),
                exponents,
            });
        }
    }
    debug_assert_eq!(BigInt::from(out.len()), expected);
    Ok(out)
}

/// All vectors of `parts` nonnegative integers summing to `total`, lexicographically descending.
fn exponent_vectors(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=total).rev() {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// `v{1}^2 * a{1<2:d=(1)}`; the unit prints as `1`.
impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        for (b, &e) in self.partition.blocks().iter().zip(&self.exponents) {
            match e {
                0 => {}
                1 => factors.push(format!("v{{{}}}", b.base())),
                _ => factors.push(format!("v{{{}}}^{e}", b.base())),
            }
        }
        for b in self.partition.blocks().iter().filter(|b| b.len() > 1) {
            factors.push(format!("a{b}"));
        }
        if factors.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&factors.join(" * "))
    }
}

/// Parses a product of generators and returns its normal form. Products
/// that vanish by the contradiction relation are rejected.
pub fn parse_monomial(s: &str, spec: &AlgebraSpec) -> Result<NormalMonomial> {
    let group = spec.effective_group()?;
    let full = spec.with_variant(spec.variant.ambient());
    let mut acc = NormalMonomial::one(spec.r);
    let s = s.trim();
    if s == "1" {
        return Ok(acc);
    }
    for token in s.split('*') {
        let t = token.trim();
        let (base, power) = match t.rsplit_once('^') {
            Some((b, p)) if b.ends_with('}') => {
                let p: u32 = p.parse().map_err(|_| Error::parse(t, "exponent is not an integer"))?;
                (b, p)
            }
            _ => (t, 1),
        };
        let gen = if let Some(body) = base.strip_prefix("v{").and_then(|b| b.strip_suffix('}')) {
            let i: usize = body.parse().map_err(|_| Error::parse(t, "v index is not an integer"))?;
            NormalMonomial::v(spec.r, i).map_err(|e| Error::parse(t, e.to_string()))?
        } else if let Some(body) = base.strip_prefix("a{").and_then(|b| b.strip_suffix('}')) {
            let block = crate::partitions::parse_block(body, &group)?;
            if block.len() < 2 {
                return Err(Error::parse(t, "a-classes need at least two indices"));
            }
            NormalMonomial::a(spec.r, block).map_err(|e| Error::parse(t, e.to_string()))?
        } else {
            return Err(Error::parse(t, "expected v{i}, a{...} or 1"));
        };
        for _ in 0..power {
            acc = multiply_monomials(&acc, &gen, &full)?
                .ok_or_else(|| Error::parse(s, "product vanishes: weight conditions contradict"))?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(r: usize, n: u64) -> AlgebraSpec {
        AlgebraSpec::concrete(Variant::LevelFull, r, FiniteAbelianGroup::cyclic(n).unwrap())
    }

    #[test]
    fn example_products() {
        let spec = level(3, 5);
        let a12 = parse_monomial("a{1<2:d=(1)}", &spec).unwrap();
        let a13 = parse_monomial("a{1<3:d=(4)}", &spec).unwrap();
        let p = multiply(&a12, &a13, &spec).unwrap();
        assert_eq!(p.to_string(), "(1) a{1<2<3:d=(1),(4)}");

        let a12b = parse_monomial("a{1<2:d=(2)}", &spec).unwrap();
        assert!(multiply(&a12, &a12b, &spec).unwrap().is_zero());

        let sq = multiply(&a12, &a12, &spec).unwrap();
        assert_eq!(sq.to_string(), "(1) v{1} * a{1<2:d=(1)}");
    }

    #[test]
    fn v_moves_onto_blocks() {
        let spec = level(2, 3);
        let m = parse_monomial("v{2} * a{1<2:d=(1)}", &spec).unwrap();
        let n = parse_monomial("v{1} * a{1<2:d=(1)}", &spec).unwrap();
        assert_eq!(m, n);
        assert_eq!(m.degree(), 4);
    }

    #[test]
    fn non_base_overlap_uses_shift() {
        // a_{(1<2),d} a_{(2<3),e}: y2 = d y1, y3 = e y2 = (d+e) y1
        let spec = level(3, 5);
        let x = parse_monomial("a{1<2:d=(1)}", &spec).unwrap();
        let y = parse_monomial("a{2<3:d=(2)}", &spec).unwrap();
        let p = multiply_monomials(&x, &y, &spec).unwrap().unwrap();
        assert_eq!(p.to_string(), "a{1<2<3:d=(1),(3)}");
    }

    #[test]
    fn dimension_examples() {
        let sym = AlgebraSpec::symbolic(Variant::LevelPrime, 2);
        assert_eq!(graded_dimension(&sym, 2), Poly::monomial(1, 1));
        assert_eq!(graded_dimension(&AlgebraSpec::symbolic(Variant::LevelFull, 2), 4).eval_u64(2), BigInt::from(5));
        for n in 1..10u64 {
            let k = graded_dimension(&AlgebraSpec::symbolic(Variant::KawazumiDoublePrime, 2), 2 * n);
            assert_eq!(k, Poly::constant(n));
        }
        assert!(graded_dimension(&sym, 3).is_zero());
    }

    #[test]
    fn basis_examples() {
        let p1 = AlgebraSpec::concrete(Variant::LevelPrime, 1, FiniteAbelianGroup::cyclic(3).unwrap());
        let b = basis(&p1, 2).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "v{1}");
        let f2 = level(2, 2);
        let b: Vec<String> = basis(&f2, 2).unwrap().iter().map(|m| m.to_string()).collect();
        assert_eq!(b, vec!["a{1<2:d=(0)}", "a{1<2:d=(1)}", "v{1}", "v{2}"]);
        assert!(basis(&f2, 1).unwrap().is_empty());
        assert!(basis(&f2, 200).is_err());
    }

    #[test]
    fn membership() {
        let spec = level(2, 2).with_variant(Variant::LevelPrime);
        let v1 = NormalMonomial::v(2, 1).unwrap();
        assert!(!is_member(&spec, &v1));
        let v2 = NormalMonomial::v(2, 2).unwrap();
        let full = spec.with_variant(Variant::LevelFull);
        let prod = multiply_monomials(&v1, &v2, &full).unwrap().unwrap();
        assert!(is_member(&spec, &prod));
    }

    #[test]
    fn json_round_trip() {
        let spec = level(2, 3);
        let m = parse_monomial("v{1}^2 * a{1<2:d=(1)}", &spec).unwrap();
        let mut e = AlgebraElement::monomial(m.clone());
        e.add_term(NormalMonomial::v(2, 1).unwrap(), BigRational::new(BigInt::from(-3), BigInt::from(4)));
        let j = e.to_json(&FiniteAbelianGroup::cyclic(3).unwrap());
        assert_eq!(AlgebraElement::from_json(&j, &spec).unwrap(), e);
        assert_eq!(m.to_string(), "v{1}^2 * a{1<2:d=(1)}");
    }

    #[test]
    fn parse_errors_name_token() {
        let spec = level(2, 3);
        match parse_monomial("v{1} * w{2}", &spec) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "w{2}"),
            other => panic!("{other:?}"),
        }
        assert!(parse_monomial("a{1<2:d=(1)} * a{1<2:d=(2)}", &spec).is_err());
    }
}
