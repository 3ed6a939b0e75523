//! Finite abelian groups written additively: the deck group
//! `D = H_1(Σ_g; Z/ℓ) ≅ (Z/ℓ)^{2g}` and arbitrary products of cyclic groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of group elements any concrete enumeration may touch.
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// Product of cyclic groups `Z/n_1 × ... × Z/n_k`; the empty product is trivial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Residue vector, one coordinate per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|&&n| n < 2) {
            return Err(Error::invalid(format!("cyclic factor {bad} must be at least 2")));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            return Ok(Self::trivial());
        }
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exact order; never overflows.
    pub fn order(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, &n| acc * BigInt::from(n))
    }

    /// Order as a machine integer when it fits under `cap`.
    pub fn order_within(&self, cap: u64) -> Result<u64> {
        let order = self.order();
        match order.to_u64() {
            Some(o) if o <= cap => Ok(o),
            _ => Err(Error::cap("group elements", order, cap)),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        x.0.iter().all(|&r| r == 0)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.factors.len() && x.0.iter().zip(&self.factors).all(|(r, n)| r < n)
    }

    /// Reduces arbitrary integers into residues.
    pub fn element(&self, raw: &[i64]) -> Result<GroupElement> {
        if raw.len() != self.factors.len() {
            return Err(Error::invalid(format!(
                "element has {} coordinates, group has {} factors",
                raw.len(),
                self.factors.len()
            )));
        }
        Ok(GroupElement(
            raw.iter()
                .zip(&self.factors)
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.factors)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn negate(&self, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        )
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add(x, &self.negate(y))
    }

    /// `n · x`
    pub fn times(&self, n: u64, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&a, &f)| ((a as u128 * n as u128) % f as u128) as u64)
                .collect(),
        )
    }

    /// All elements in lexicographic residue order, starting at the identity.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.elements_capped(ENUMERATION_CAP)
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let order = self.order_within(cap)?;
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0u64; self.factors.len()];
        loop {
            out.push(GroupElement(cur.clone()));
            // odometer, last coordinate fastest
            let mut i = self.factors.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// `#{x : n·x = 0}`, the product of `gcd(n, factor)`.
    pub fn torsion_count(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::invalid("torsion order must be at least 1"));
        }
        Ok(self
            .factors
            .iter()
            .fold(BigInt::one(), |acc, &f| acc * BigInt::from(f.gcd(&n))))
    }
}

/// `H_1(Σ_g; Z/ℓ) = (Z/ℓ)^{2g}`.
pub fn homology_group(genus: i64, level: i64) -> Result<FiniteAbelianGroup> {
    if genus < 0 {
        return Err(Error::invalid(format!("genus {genus} must be nonnegative")));
    }
    if level < 2 {
        return Err(Error::invalid(format!("level {level} must be at least 2")));
    }
    FiniteAbelianGroup::new(vec![level as u64; 2 * genus as usize])
}

/// `ℓ^{2g}` without building the group.
pub fn homology_order(genus: u64, level: u64) -> BigInt {
    num_traits::pow(BigInt::from(level), 2 * genus as usize)
}

/// The symbol `m = |D| = ℓ^{2g}`, optionally bound to concrete `(ℓ, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct SymbolicOrder {
    pub level: Option<u64>,
    pub genus: Option<u64>,
}

impl SymbolicOrder {
    pub fn unbound() -> Self {
        Self::default()
    }

    pub fn bound(level: u64, genus: u64) -> Self {
        SymbolicOrder {
            level: Some(level),
            genus: Some(genus),
        }
    }

    /// `ℓ^{2g}` when both parameters are bound.
    pub fn specialize(&self) -> Option<BigInt> {
        Some(homology_order(self.genus?, self.level?))
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let n = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&x| x == n).count();
            if run == 1 {
                parts.push(format!("Z{n}"));
            } else {
                parts.push(format!("Z{n}^{run}"));
            }
            i += run;
        }
        f.write_str(&parts.join("x"))
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Group literals: `Z2xZ2`, `Z3^4`, `H1(g=2,l=3)`, `1` / `trivial`.
impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse(s, "empty group literal"));
        }
        if s == "1" || s.eq_ignore_ascii_case("trivial") {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for token in s.split('x') {
            factors.extend(parse_factor_token(token.trim())?);
        }
        FiniteAbelianGroup::new(factors)
    }
}

fn parse_factor_token(token: &str) -> Result<Vec<u64>> {
    let bad = |msg: &str| Error::parse(token, msg);
    if let Some(inner) = token.strip_prefix("H1(").and_then(|t| t.strip_suffix(')')) {
        let mut genus = None;
        let mut level = None;
        for kv in inner.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::parse(kv, "expected key=value inside H1(...)"))?;
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(kv, "expected an integer value"))?;
            match k.trim() {
                "g" => genus = Some(v),
                "l" => level = Some(v),
                _ => return Err(Error::parse(kv, "unknown key, expected g or l")),
            }
        }
        let (Some(g), Some(l)) = (genus, level) else {
            return Err(bad("H1(...) needs both g= and l="));
        };
        return homology_group(g, l)
            .map(|grp| grp.factors)
            .map_err(|e| Error::parse(token, e.to_string()));
    }
    let body = token
        .strip_prefix('Z')
        .ok_or_else(|| bad("expected Z<n>, Z<n>^<k> or H1(g=..,l=..)"))?;
    let (n, k) = match body.split_once('^') {
        Some((n, k)) => (n, Some(k)),
        None => (body, None),
    };
    let n: u64 = n.parse().map_err(|_| bad("cyclic order is not an integer"))?;
    let k: usize = match k {
        Some(k) => k.parse().map_err(|_| bad("exponent is not an integer"))?,
        None => 1,
    };
    match n {
        0 => Err(bad("cyclic order must be positive")),
        1 => Ok(Vec::new()),
        _ => Ok(vec![n; k]),
    }
}
