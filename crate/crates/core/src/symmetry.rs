//! The `S_r` action on basis monomials and its characters.
//!
//! All basis classes have even degree, so `S_r` acts by unsigned permutation
//! of the normal-form basis and the character at `σ` is a fixed-point count.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::abelian_group::FiniteAbelianGroup;
use crate::algebra::{basis, integer_partitions, AlgebraSpec, NormalMonomial};
use crate::error::{Error, Result};
use crate::par::{map_collect, Execution};
use crate::partitions::Permutation;

/// Largest `r` for the irreducible character table.
pub const MAX_CHARACTER_R: usize = 8;

/// Cycle lengths in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid("cycle lengths must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(parts))
    }

    pub fn identity(r: usize) -> Self {
        CycleType(vec![1; r])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.iter().sum()
    }

    /// `z_μ = Π i^{m_i} m_i!`
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let len = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == len).count();
            for k in 1..=run {
                z *= BigInt::from(len) * BigInt::from(k);
            }
            i += run;
        }
        z
    }

    pub fn class_size(&self) -> BigInt {
        factorial(self.r()) / self.centralizer_order()
    }

    /// A permutation of this type whose cycles are consecutive runs.
    pub fn representative(&self) -> Permutation {
        let r = self.r();
        let mut images = vec![0; r];
        let mut start = 1;
        for &len in &self.0 {
            for k in 0..len {
                images[start + k - 1] = start + (k + 1) % len;
            }
            start += len;
        }
        Permutation::new(images).expect("consecutive cycles form a permutation")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", p.join(","))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Conjugacy classes of `S_r`, identity first and the `r`-cycle last.
pub fn cycle_types(r: usize) -> Vec<CycleType> {
    let mut v: Vec<CycleType> = integer_partitions(r).into_iter().map(CycleType).collect();
    v.reverse();
    v
}

/// Class function on `S_r`, values listed in [`cycle_types`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrCharacter {
    r: usize,
    values: Vec<BigInt>,
}

impl SrCharacter {
    pub fn new(r: usize, values: Vec<BigInt>) -> Result<Self> {
        let n = cycle_types(r).len();
        if values.len() != n {
            return Err(Error::invalid(format!("S_{r} has {n} classes, got {} values", values.len())));
        }
        Ok(SrCharacter { r, values })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, c: &CycleType) -> Option<&BigInt> {
        cycle_types(self.r).iter().position(|x| x == c).map(|k| &self.values[k])
    }

    /// Value at the identity.
    pub fn degree(&self) -> &BigInt {
        &self.values[0]
    }

    /// `⟨χ, ψ⟩ · r!`
    pub fn scaled_inner(&self, other: &SrCharacter) -> BigInt {
        cycle_types(self.r)
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(c, (a, b))| c.class_size() * a * b)
            .sum()
    }
}

/// Number of basis monomials fixed by `σ`.
pub fn fixed_points(basis: &[NormalMonomial], sigma: &Permutation, group: &FiniteAbelianGroup) -> Result<u64> {
    let mut n = 0;
    for m in basis {
        if &m.relabel(sigma, group)? == m {
            n += 1;
        }
    }
    Ok(n)
}

/// Permutation character of `S_r` on the degree-`n` basis.
pub fn permutation_character(spec: &AlgebraSpec, n: u64, exec: Execution) -> Result<SrCharacter> {
    let group = spec.effective_group()?;
    let b = basis(spec, n)?;
    let values = map_collect(exec, cycle_types(spec.r), |c| {
        fixed_points(&b, &c.representative(), &group).map(BigInt::from)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    SrCharacter::new(spec.r, values)
}

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule on beta-sets.
fn mn_value(beta: &mut Vec<usize>, mu: &[usize]) -> i64 {
    let Some((&k, rest)) = mu.split_first() else {
        return 1;
    };
    let mut total = 0;
    for idx in 0..beta.len() {
        let b = beta[idx];
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        beta[idx] = target;
        total += sign * mn_value(beta, rest);
        beta[idx] = b;
    }
    total
}

/// Irreducible character of `λ`.
pub fn irreducible_character(lambda: &[usize]) -> Result<SrCharacter> {
    let r: usize = lambda.iter().sum();
    if r > MAX_CHARACTER_R {
        return Err(Error::cap("character table r", r, MAX_CHARACTER_R));
    }
    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let values = cycle_types(r)
        .iter()
        .map(|c| BigInt::from(mn_value(&mut beta.clone(), c.parts())))
        .collect();
    SrCharacter::new(r, values)
}

/// Irreducible characters indexed by partitions of `r` (descending lexicographic).
pub fn sr_character_table(r: usize) -> Result<Vec<(Vec<usize>, SrCharacter)>> {
    if r > MAX_CHARACTER_R {
        return Err(Error::cap("character table r", r, MAX_CHARACTER_R));
    }
    integer_partitions(r)
        .into_iter()
        .map(|l| irreducible_character(&l).map(|c| (l, c)))
        .collect()
}

/// Multiplicities of irreducibles in `χ`. Fails if any multiplicity is not
/// a nonnegative integer or the reconstruction is not exact.
pub fn decompose(chi: &SrCharacter) -> Result<Vec<(Vec<usize>, BigInt)>> {
    let r = chi.r;
    let order = factorial(r);
    let table = sr_character_table(r)?;
    let mut out = Vec::new();
    let mut rebuilt = vec![BigInt::zero(); chi.values.len()];
    for (lambda, irr) in table {
        let (mult, rem) = chi.scaled_inner(&irr).div_rem(&order);
        if !rem.is_zero() || mult.is_negative() {
            return Err(Error::Constraint(format!(
                "multiplicity of {lambda:?} is {}/{}: not a genuine character",
                chi.scaled_inner(&irr),
                order
            )));
        }
        for (acc, v) in rebuilt.iter_mut().zip(irr.values()) {
            *acc += &mult * v;
        }
        out.push((lambda, mult));
    }
    if rebuilt != chi.values {
        return Err(Error::Constraint("decomposition does not reconstruct the character".into()));
    }
    Ok(out)
}

/// `{r, degree, group, values, decomposition}`.
pub fn character_report(chi: &SrCharacter, degree: u64, group: &FiniteAbelianGroup) -> Result<serde_json::Value> {
    let decomposition = decompose(chi)?;
    Ok(json!({
        "r": chi.r,
        "degree": degree,
        "group": group.to_string(),
        "values": cycle_types(chi.r)
            .iter()
            .zip(&chi.values)
            .map(|(c, v)| json!({ "cycle_type": c, "trace": v.to_string() }))
            .collect::<Vec<_>>(),
        "decomposition": decomposition
            .iter()
            .map(|(l, m)| json!({ "partition": l, "multiplicity": m.to_string() }))
            .collect::<Vec<_>>(),
    }))
}
