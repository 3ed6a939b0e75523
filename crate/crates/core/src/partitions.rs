//! Set partitions, Kawazumi weighted partitions and `D`-weighted partitions,
//! with enumeration, counting and the `S_r` relabelling action.
//!
//! Indices are 1-based throughout, matching the text form
//! `{1<2:d=(0,1)}|{3}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian_group::{FiniteAbelianGroup, GroupElement, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest `r` accepted by [`enumerate_set_partitions`] (Bell(12) = 4213597).
pub const MAX_SET_PARTITION_R: usize = 12;
/// Largest `r` accepted by [`enumerate_d_weighted_partitions`].
pub const MAX_D_WEIGHTED_R: usize = 8;
/// Largest `r` accepted by [`count_d_weighted_partitions`].
pub const MAX_COUNT_R: usize = 30;

/// A partition of `{1, ..., r}` in canonical form: blocks sorted ascending,
/// blocks ordered by their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetPartition {
    r: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(r: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; r + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i == 0 || i > r {
                    return Err(Error::invalid(format!("index {i} outside 1..={r}")));
                }
                if seen[i] {
                    return Err(Error::invalid(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = (1..=r).find(|&i| !seen[i]) {
            return Err(Error::invalid(format!("index {missing} not covered")));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { r, blocks })
    }

    pub fn discrete(r: usize) -> Self {
        SetPartition {
            r,
            blocks: (1..=r).map(|i| vec![i]).collect(),
        }
    }

    fn from_growth_string(rgs: &[usize]) -> Self {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        SetPartition { r: rgs.len(), blocks }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes, descending.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

/// Lexicographic restricted-growth-string enumeration of set partitions.
/// Restartable: clone it or build a new one.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(r: usize) -> Self {
        SetPartitions {
            rgs: vec![0; r],
            maxes: vec![0; r],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition::from_growth_string(&self.rgs);
        // advance: rightmost position that can still grow
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let prev_max = self.maxes[i - 1];
            if self.rgs[i] <= prev_max {
                self.rgs[i] += 1;
                self.maxes[i] = prev_max.max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn enumerate_set_partitions(r: usize) -> Result<Vec<SetPartition>> {
    if r > MAX_SET_PARTITION_R {
        return Err(Error::cap("set partition size r", r, MAX_SET_PARTITION_R));
    }
    Ok(SetPartitions::new(r).collect())
}

/// Stirling numbers of the second kind `S(n, k)` for `0 <= k <= n`.
pub fn stirling2_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for i in 1..=n {
        let mut next = vec![BigInt::zero(); i + 1];
        for k in 1..=i {
            let stay = if k < row.len() { &row[k] * BigInt::from(k) } else { BigInt::zero() };
            next[k] = stay + &row[k - 1];
        }
        row = next;
    }
    row
}

pub fn bell(n: usize) -> BigInt {
    stirling2_row(n).into_iter().sum()
}

/// `Σ_P m^{r - |P|} = Σ_ν S(r, ν) m^{r - ν}`.
pub fn count_d_weighted_partitions(r: usize) -> Result<Poly> {
    if r > MAX_COUNT_R {
        return Err(Error::cap("count r", r, MAX_COUNT_R));
    }
    let row = stirling2_row(r);
    let mut coeffs = vec![BigInt::zero(); r + 1];
    for (nu, s) in row.into_iter().enumerate() {
        coeffs[r - nu] += s;
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Kawazumi weighted partition: blocks `S_a` with weights `i_a >= 0` and
/// `i_a + |S_a| >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightedPartition {
    partition: SetPartition,
    weights: Vec<u32>,
}

impl WeightedPartition {
    pub fn new(partition: SetPartition, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != partition.num_blocks() {
            return Err(Error::invalid("one weight per block required"));
        }
        for (b, &w) in partition.blocks().iter().zip(&weights) {
            if w as usize + b.len() < 2 {
                return Err(Error::invalid(format!("block {b:?} with weight {w} violates i + |S| >= 2")));
            }
        }
        Ok(WeightedPartition { partition, weights })
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Degree of the matching class `Π u_S^{i_a} a_P` in the untwisted algebra.
    pub fn algebra_degree(&self) -> u64 {
        let w: u64 = self.weights.iter().map(|&w| w as u64).sum();
        2 * w + 2 * self.partition.r as u64 - 2 * self.partition.num_blocks() as u64
    }
}

/// All weighted partitions of `[r]` with total weight `Σ i_a <= max_total`.
pub fn enumerate_weighted_partitions(r: usize, max_total: u32) -> Result<Vec<WeightedPartition>> {
    let mut out = Vec::new();
    for p in enumerate_set_partitions(r)? {
        let mins: Vec<u32> = p.blocks().iter().map(|b| u32::from(b.len() == 1)).collect();
        let mut w = mins.clone();
        loop {
            if w.iter().sum::<u32>() <= max_total {
                out.push(WeightedPartition {
                    partition: p.clone(),
                    weights: w.clone(),
                });
            }
            // odometer bounded by total
            let mut i = w.len();
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                w[i] += 1;
                if w.iter().sum::<u32>() <= max_total {
                    break true;
                }
                w[i] = mins[i];
            };
            if !advanced {
                break;
            }
        }
    }
    Ok(out)
}

/// Bijection of `{1, ..., r}` stored by images, `images[i - 1] = σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let r = images.len();
        let mut seen = vec![false; r + 1];
        for &i in &images {
            if i == 0 || i > r || seen[i] {
                return Err(Error::invalid(format!("{images:?} is not a permutation of 1..={r}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(r: usize) -> Self {
        Permutation {
            images: (1..=r).collect(),
        }
    }

    /// Transposition `(a b)` on `[r]`.
    pub fn transposition(r: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=r).collect();
        if a == 0 || b == 0 || a > r || b > r {
            return Err(Error::invalid("transposition index out of range"));
        }
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    /// Permutation with the given cycles (1-based), fixing everything else.
    pub fn from_cycles(r: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=r).collect();
        for cyc in cycles {
            for (k, &i) in cyc.iter().enumerate() {
                if i == 0 || i > r {
                    return Err(Error::invalid("cycle index out of range"));
                }
                images[i - 1] = cyc[(k + 1) % cyc.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn r(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let r = self.images.len();
        let mut seen = vec![false; r + 1];
        let mut out = Vec::new();
        for start in 1..=r {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// All of `S_r` in lexicographic order of image vectors.
    pub fn all(r: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=r).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}

/// One block `(S, d⃗)`: sorted indices `i_1 < ... < i_s` and `s - 1` weights,
/// the `j`-th weight locating point `i_{j+1}` relative to the base point `i_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DBlock {
    indices: Vec<usize>,
    weights: Vec<GroupElement>,
}

impl DBlock {
    pub fn new(indices: Vec<usize>, weights: Vec<GroupElement>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("empty block"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("block indices {indices:?} must be strictly increasing")));
        }
        if weights.len() + 1 != indices.len() {
            return Err(Error::invalid(format!(
                "block {indices:?} needs {} weights, got {}",
                indices.len() - 1,
                weights.len()
            )));
        }
        Ok(DBlock { indices, weights })
    }

    pub fn singleton(i: usize) -> Self {
        DBlock {
            indices: vec![i],
            weights: Vec::new(),
        }
    }

    /// Builds a block from a position function `w` on arbitrary indices,
    /// renormalising so the minimal index sits at the identity.
    pub fn from_positions(group: &FiniteAbelianGroup, mut pos: Vec<(usize, GroupElement)>) -> Self {
        pos.sort_by_key(|p| p.0);
        let base = pos[0].1.clone();
        let indices = pos.iter().map(|p| p.0).collect();
        let weights = pos[1..].iter().map(|(_, w)| group.sub(w, &base)).collect();
        DBlock { indices, weights }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn weights(&self) -> &[GroupElement] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn base(&self) -> usize {
        self.indices[0]
    }

    /// Position of every index relative to the base point (base at identity).
    pub fn positions(&self, group: &FiniteAbelianGroup) -> Vec<(usize, GroupElement)> {
        let mut out = Vec::with_capacity(self.indices.len());
        out.push((self.indices[0], group.identity()));
        for (i, w) in self.indices[1..].iter().zip(&self.weights) {
            out.push((*i, w.clone()));
        }
        out
    }

    pub fn position_of(&self, group: &FiniteAbelianGroup, i: usize) -> Option<GroupElement> {
        let k = self.indices.iter().position(|&x| x == i)?;
        Some(if k == 0 { group.identity() } else { self.weights[k - 1].clone() })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// `D`-weighted partition of `[r]`.
///
/// The group is not stored; every operation that needs arithmetic takes it
/// explicitly. Blocks are kept in canonical order (by base point).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DWeightedPartition {
    r: usize,
    blocks: Vec<DBlock>,
}

impl DWeightedPartition {
    pub fn new(r: usize, mut blocks: Vec<DBlock>) -> Result<Self> {
        let sets: Vec<Vec<usize>> = blocks.iter().map(|b| b.indices.clone()).collect();
        SetPartition::new(r, sets)?;
        blocks.sort_by_key(|b| b.base());
        Ok(DWeightedPartition { r, blocks })
    }

    pub(crate) fn from_sorted_blocks(r: usize, blocks: Vec<DBlock>) -> Self {
        DWeightedPartition { r, blocks }
    }

    pub fn discrete(r: usize) -> Self {
        DWeightedPartition {
            r,
            blocks: (1..=r).map(DBlock::singleton).collect(),
        }
    }

    /// Undecorated partition with identity weights everywhere.
    pub fn with_identity_weights(p: &SetPartition, group: &FiniteAbelianGroup) -> Self {
        let blocks = p
            .blocks()
            .iter()
            .map(|b| DBlock {
                indices: b.clone(),
                weights: vec![group.identity(); b.len() - 1],
            })
            .collect();
        DWeightedPartition { r: p.r(), blocks }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[DBlock] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn set_partition(&self) -> SetPartition {
        SetPartition {
            r: self.r,
            blocks: self.blocks.iter().map(|b| b.indices.clone()).collect(),
        }
    }

    /// Block sizes, descending.
    pub fn shape(&self) -> Vec<usize> {
        self.set_partition().shape()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    /// Checks every weight belongs to `group`.
    pub fn validate(&self, group: &FiniteAbelianGroup) -> Result<()> {
        for b in &self.blocks {
            if let Some(w) = b.weights.iter().find(|w| !group.contains(w)) {
                return Err(Error::invalid(format!("weight {w} is not an element of {group}")));
            }
        }
        Ok(())
    }

    /// Left action of `σ ∈ S_r`: indices move through `σ` and each image
    /// block is renormalised to its new minimal index,
    /// `w'(σ(i)) = w(i) - w(σ⁻¹(new base))`.
    pub fn relabel(&self, sigma: &Permutation, group: &FiniteAbelianGroup) -> Result<Self> {
        if sigma.r() != self.r {
            return Err(Error::invalid(format!(
                "permutation on {} points applied to a partition of [{}]",
                sigma.r(),
                self.r
            )));
        }
        let mut blocks: Vec<DBlock> = self
            .blocks
            .iter()
            .map(|b| {
                let moved = b
                    .positions(group)
                    .into_iter()
                    .map(|(i, w)| (sigma.apply(i), w))
                    .collect();
                DBlock::from_positions(group, moved)
            })
            .collect();
        blocks.sort_by_key(|b| b.base());
        Ok(DWeightedPartition { r: self.r, blocks })
    }
}

/// Every `D`-weighted partition of `[r]`, ordered by set partition
/// (restricted growth order) and then lexicographically by weights.
pub fn enumerate_d_weighted_partitions(r: usize, group: &FiniteAbelianGroup) -> Result<Vec<DWeightedPartition>> {
    if r > MAX_D_WEIGHTED_R {
        return Err(Error::cap("D-weighted partition size r", r, MAX_D_WEIGHTED_R));
    }
    let order = group.order();
    let total = count_d_weighted_partitions(r)?.eval(&order);
    let per_block = num_traits::pow(order, r.saturating_sub(1));
    for (what, n) in [("weight assignments |G|^(r-1)", per_block), ("D-weighted partitions", total)] {
        if n.to_u64().is_none_or(|n| n > ENUMERATION_CAP) {
            return Err(Error::cap(what, n, ENUMERATION_CAP));
        }
    }
    let elements = group.elements()?;
    let mut out = Vec::new();
    for p in SetPartitions::new(r) {
        let slots = r - p.num_blocks();
        let mut choice = vec![0usize; slots];
        loop {
            let mut k = 0;
            let blocks = p
                .blocks()
                .iter()
                .map(|b| {
                    let weights = (1..b.len())
                        .map(|_| {
                            k += 1;
                            elements[choice[k - 1]].clone()
                        })
                        .collect();
                    DBlock {
                        indices: b.clone(),
                        weights,
                    }
                })
                .collect();
            out.push(DWeightedPartition { r, blocks });
            let mut i = slots;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < elements.len() {
                    break true;
                }
                choice[i] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    Ok(out)
}

/// Tensor-slot tags: 1 for a Prym factor, 0 for the closed-cover factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct JVector(Vec<u8>);

impl JVector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&e| e > 1) {
            return Err(Error::invalid(format!("J entries must be 0 or 1, got {bad}")));
        }
        Ok(JVector(entries))
    }

    pub fn all_ones(r: usize) -> Self {
        JVector(vec![1; r])
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::str::FromStr for JVector {
    type Err = Error;

    /// `"1,0,1"`, `"101"` or empty.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::parse(c.to_string(), "J entries must be 0 or 1")),
            })
            .collect::<Result<Vec<u8>>>()?;
        JVector::new(entries)
    }
}

/// Compatibility of a `D`-weighted partition of `[r+1]` with `J` of length `r`:
/// the block `S_1` containing 1 carries only non-identity weights and
/// contains no `a >= 2` with `J_{a-1} = 1`.
pub fn compatible_with(p: &DWeightedPartition, j: &JVector, group: &FiniteAbelianGroup) -> Result<bool> {
    if p.r() != j.len() + 1 {
        return Err(Error::invalid(format!(
            "partition of [{}] needs a J vector of length {}, got {}",
            p.r(),
            p.r().saturating_sub(1),
            j.len()
        )));
    }
    let first = &p.blocks()[0];
    debug_assert_eq!(first.base(), 1);
    if first.weights().iter().any(|w| group.is_identity(w)) {
        return Ok(false);
    }
    Ok(first.indices()[1..].iter().all(|&a| j.entries()[a - 2] == 0))
}

fn fmt_block(b: &DBlock, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let idx: Vec<String> = b.indices.iter().map(usize::to_string).collect();
    write!(f, "{{{}", idx.join("<"))?;
    if b.weights.first().is_some_and(|w| !w.0.is_empty()) {
        let ws: Vec<String> = b.weights.iter().map(GroupElement::to_string).collect();
        write!(f, ":d={}", ws.join(","))?;
    }
    write!(f, "}}")
}

impl fmt::Display for DBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_block(self, f)
    }
}

/// `{1<2:d=(0,1)}|{3}`; the empty partition prints as `{}`.
impl fmt::Display for DWeightedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("{}");
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            fmt_block(b, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let idx: Vec<String> = b.iter().map(usize::to_string).collect();
                format!("{{{}}}", idx.join(","))
            })
            .collect();
        f.write_str(&parts.join("|"))
    }
}

/// Parses one block body `1<2<3:d=(0,1),(1,1)` (without braces).
pub(crate) fn parse_block(body: &str, group: &FiniteAbelianGroup) -> Result<DBlock> {
    let (idx_part, weight_part) = match body.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let indices = idx_part
        .split('<')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(t, "block index is not a positive integer"))
        })
        .collect::<Result<Vec<usize>>>()?;
    let weights = match weight_part {
        // the trivial group has a single weight, so it may be omitted
        None if group.is_trivial() => vec![group.identity(); indices.len().saturating_sub(1)],
        None => Vec::new(),
        Some(w) => {
            let list = w
                .trim()
                .strip_prefix("d=")
                .ok_or_else(|| Error::parse(w, "expected d=(...)"))?;
            parse_tuples(list)?
                .into_iter()
                .map(|t| {
                    let el = group
                        .element(&t)
                        .map_err(|e| Error::parse(format!("{t:?}"), e.to_string()))?;
                    if t.iter().zip(group.factors()).any(|(&x, &n)| x < 0 || x as u64 >= n) {
                        return Err(Error::parse(format!("{t:?}"), "residue out of range"));
                    }
                    Ok(el)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    DBlock::new(indices, weights).map_err(|e| Error::parse(body, e.to_string()))
}

fn parse_tuples(s: &str) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::parse(rest, "expected `(`"))?;
        let close = open.find(')').ok_or_else(|| Error::parse(rest, "unclosed `(`"))?;
        let inner = &open[..close];
        let t = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::parse(x, "residue is not an integer"))
                })
                .collect::<Result<Vec<i64>>>()?
        };
        out.push(t);
        rest = open[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        }
    }
    Ok(out)
}

impl DWeightedPartition {
    /// Parses the text form; `r` is the number of indices present.
    pub fn parse(s: &str, group: &FiniteAbelianGroup) -> Result<Self> {
        let s = s.trim();
        if s == "{}" {
            return Ok(DWeightedPartition { r: 0, blocks: Vec::new() });
        }
        let mut blocks = Vec::new();
        for token in s.split('|') {
            let t = token.trim();
            let body = t
                .strip_prefix('{')
                .and_then(|x| x.strip_suffix('}'))
                .ok_or_else(|| Error::parse(t, "block must be wrapped in braces"))?;
            blocks.push(parse_block(body, group)?);
        }
        let r = blocks.iter().map(DBlock::len).sum();
        DWeightedPartition::new(r, blocks).map_err(|e| Error::parse(s, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    #[test]
    fn set_partition_counts() {
        assert_eq!(enumerate_set_partitions(0).unwrap().len(), 1);
        assert_eq!(enumerate_set_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_set_partitions(5).unwrap().len(), 52);
        assert!(enumerate_set_partitions(13).is_err());
        let ps = enumerate_set_partitions(4).unwrap();
        let mut dedup = ps.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), ps.len());
        assert_eq!(ps[0], SetPartition::new(4, vec![vec![1, 2, 3, 4]]).unwrap());
    }

    #[test]
    fn bell_by_recurrence() {
        // Bell(n+1) = Σ_k C(n,k) Bell(k)
        let mut bells = vec![BigInt::from(1)];
        for n in 0..12usize {
            let next: BigInt = (0..=n).map(|k| crate::poly::binomial(n as u64, k as u64) * &bells[k]).sum();
            bells.push(next);
        }
        for (n, b) in bells.iter().enumerate() {
            assert_eq!(&bell(n), b);
        }
        assert_eq!(bell(5), BigInt::from(52));
    }

    #[test]
    fn d_weighted_examples() {
        let g2 = z(2);
        let ps = enumerate_d_weighted_partitions(2, &g2).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0].to_string(), "{1<2:d=(0)}");
        assert_eq!(ps[1].to_string(), "{1<2:d=(1)}");
        assert_eq!(ps[2].to_string(), "{1}|{2}");
        assert_eq!(enumerate_d_weighted_partitions(3, &g2).unwrap().len(), 11);
        assert_eq!(enumerate_d_weighted_partitions(1, &z(5)).unwrap().len(), 1);
    }

    #[test]
    fn count_polynomials() {
        assert_eq!(count_d_weighted_partitions(1).unwrap(), Poly::one());
        assert_eq!(count_d_weighted_partitions(2).unwrap().to_string(), "m+1");
        assert_eq!(count_d_weighted_partitions(3).unwrap().to_string(), "m^2+3m+1");
        for m in 2..=4u64 {
            let g = z(m);
            for r in 0..=4 {
                let n = enumerate_d_weighted_partitions(r, &g).unwrap().len();
                assert_eq!(count_d_weighted_partitions(r).unwrap().eval_u64(m), BigInt::from(n));
            }
        }
    }

    #[test]
    fn relabel_examples() {
        let g = z(5);
        let p = DWeightedPartition::parse("{1<2:d=(2)}", &g).unwrap();
        let swap = Permutation::transposition(2, 1, 2).unwrap();
        assert_eq!(p.relabel(&swap, &g).unwrap().to_string(), "{1<2:d=(3)}");
        assert_eq!(p.relabel(&Permutation::identity(2), &g).unwrap(), p);

        // 3-cycle 1→2→3→1 on ({1<2<3}, [d1, d2]) gives [-d2, d1 - d2]
        let p3 = DWeightedPartition::parse("{1<2<3:d=(1),(3)}", &g).unwrap();
        let cyc = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let expected = DWeightedPartition::parse("{1<2<3:d=(2),(3)}", &g).unwrap();
        assert_eq!(p3.relabel(&cyc, &g).unwrap(), expected);
        // same result through the two transpositions (1 2)(2 3)
        let t12 = Permutation::transposition(3, 1, 2).unwrap();
        let t23 = Permutation::transposition(3, 2, 3).unwrap();
        assert_eq!(t12.compose(&t23), cyc);
        let two_step = p3.relabel(&t23, &g).unwrap().relabel(&t12, &g).unwrap();
        assert_eq!(two_step, expected);
    }

    #[test]
    fn compatibility_examples() {
        let g = z(3);
        let disc = DWeightedPartition::discrete(3);
        assert!(compatible_with(&disc, &JVector::new(vec![1, 0]).unwrap(), &g).unwrap());
        let ident = DWeightedPartition::parse("{1<2:d=(0)}|{3}", &g).unwrap();
        assert!(!compatible_with(&ident, &JVector::new(vec![0, 0]).unwrap(), &g).unwrap());
        let nonid = DWeightedPartition::parse("{1<2:d=(1)}|{3}", &g).unwrap();
        assert!(!compatible_with(&nonid, &JVector::new(vec![1, 0]).unwrap(), &g).unwrap());
        assert!(compatible_with(&nonid, &JVector::new(vec![0, 1]).unwrap(), &g).unwrap());
        assert!(compatible_with(&nonid, &JVector::new(vec![0]).unwrap(), &g).is_err());
    }

    #[test]
    fn weighted_partitions_r2() {
        let wps = enumerate_weighted_partitions(2, 3).unwrap();
        // ({1,2}, i) for i = 0..=3 and ({1}, i)({2}, j) with i, j >= 1, i + j <= 3
        assert_eq!(wps.len(), 4 + 3);
        assert!(WeightedPartition::new(SetPartition::discrete(2), vec![0, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g: FiniteAbelianGroup = "Z2xZ2".parse().unwrap();
        let s = "{1<2:d=(0,1)}|{3}";
        let p = DWeightedPartition::parse(s, &g).unwrap();
        assert_eq!(p.to_string(), s);
        let q = DWeightedPartition::parse("{3}|{1<2:d=(0,1)}", &g).unwrap();
        assert_eq!(p, q);
        assert!(matches!(DWeightedPartition::parse("{1<2:d=(0,2)}", &g), Err(Error::Parse { .. })));
        assert!(matches!(DWeightedPartition::parse("{2<1:d=(0,1)}", &g), Err(Error::Parse { .. })));
        assert!(matches!(DWeightedPartition::parse("{1}|{3}", &g), Err(Error::Parse { .. })));
        assert_eq!(DWeightedPartition::parse("{}", &g).unwrap().r(), 0);
    }

    #[test]
    fn permutations() {
        assert_eq!(Permutation::all(4).len(), 24);
        let s = Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap();
        assert_eq!(s.cycle_type(), vec![2, 2]);
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(4));
        assert!(Permutation::new(vec![1, 1]).is_err());
    }
}
