//! Dimension tables for stable and twisted cohomology.
//!
//! Every table is a list of rows indexed by the total degree `k` of the
//! tensor product; the reported cohomological degree is `k - r`. Entries are
//! polynomials in `m = |D|` and are specialised when `ℓ` and `g` are known.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::abelian_group::homology_order;
use crate::algebra::{graded_dimension_for, Variant};
use crate::error::{Error, Result};
use crate::par::{map_collect, Execution};
use crate::partitions::{stirling2_row, JVector, SetPartitions, MAX_COUNT_R};
use crate::poly::{compositions, Poly};

/// Largest degree accepted by any table.
pub const MAX_TABLE_DEGREE: u64 = 200;

/// Largest `r` accepted by twisted tables.
pub const MAX_TABLE_R: usize = 16;

/// Largest `r` accepted by J-twisted tables (set partitions of `[r+1]` are enumerated).
pub const MAX_J_R: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StableRangeKind {
    /// `g ≥ 2k² + 7k + 2`
    Putman,
    /// `g ≥ 3k/2 + 1`
    Looijenga,
    /// `k ≤ 2(g - 1)/3`
    Harer,
}

pub fn in_stable_range(kind: StableRangeKind, g: u64, k: u64) -> bool {
    let (g, k) = (g as u128, k as u128);
    match kind {
        StableRangeKind::Putman => g >= 2 * k * k + 7 * k + 2,
        StableRangeKind::Looijenga => 2 * g >= 3 * k + 2,
        StableRangeKind::Harer => g >= 1 && 3 * k <= 2 * (g - 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Oracle,
    Extrapolated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Formula => "formula",
            Provenance::Oracle => "oracle",
            Provenance::Extrapolated => "extrapolated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: u64,
    pub cohomological_degree: i64,
    pub dim: Poly,
    #[serde(serialize_with = "ser_opt_bigint")]
    pub dim_at_m: Option<BigInt>,
    pub in_stable_range: bool,
    pub provenance: Provenance,
}

fn ser_opt_bigint<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableMeta {
    pub table: &'static str,
    pub r: usize,
    pub p: usize,
    pub level: Option<u64>,
    pub genus: Option<u64>,
    pub variant: Option<Variant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    pub meta: TableMeta,
    pub rows: Vec<TableRow>,
}

pub const CSV_HEADER: &str = "k,cohomological_degree,dim_polynomial_in_m,dim_at_concrete_m,in_stable_range,provenance";

impl DimensionTable {
    pub fn row(&self, k: u64) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// Copy without the extrapolated rows.
    pub fn in_range_only(&self) -> DimensionTable {
        DimensionTable {
            meta: self.meta.clone(),
            rows: self.rows.iter().filter(|r| r.in_stable_range).cloned().collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.k,
                r.cohomological_degree,
                r.dim,
                r.dim_at_m.as_ref().map_or("symbolic".to_string(), BigInt::to_string),
                r.in_stable_range,
                r.provenance.as_str()
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "metadata": self.meta, "rows": self.rows })
    }

    pub fn to_pretty(&self) -> String {
        let mut cells: Vec<[String; 6]> = vec![[
            "k".into(),
            "degree".into(),
            "dim(m)".into(),
            "dim".into(),
            "in range".into(),
            "provenance".into(),
        ]];
        for r in &self.rows {
            cells.push([
                r.k.to_string(),
                r.cohomological_degree.to_string(),
                r.dim.to_string(),
                r.dim_at_m.as_ref().map_or("-".to_string(), BigInt::to_string),
                if r.in_stable_range { "yes" } else { "no" }.into(),
                r.provenance.as_str().into(),
            ]);
        }
        render_columns(&cells)
    }
}

pub(crate) fn render_columns<const N: usize>(cells: &[[String; N]]) -> String {
    let widths: Vec<usize> = (0..N)
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn check_degree(max: u64) -> Result<()> {
    if max > MAX_TABLE_DEGREE {
        return Err(Error::cap("table degree", max, MAX_TABLE_DEGREE));
    }
    Ok(())
}

/// Coefficients up to `t^max_degree` of `(1 - t²)^{-p} Π_{i≥1} (1 - t^{2i})^{-1}`.
pub fn stable_series(p: usize, max_degree: u64) -> Result<Vec<BigInt>> {
    check_degree(max_degree)?;
    let n = max_degree as usize;
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    let mut divide = |d: usize| {
        for i in d..=n {
            let prev = c[i - d].clone();
            c[i] += prev;
        }
    };
    for _ in 0..p {
        divide(2);
    }
    for i in (1..).take_while(|i| 2 * i <= n) {
        divide(2 * i);
    }
    Ok(c)
}

/// Stable cohomology of `M_{g,p}` with its `e_1, …, e_p` and `κ_i`.
pub fn stable_cohomology_dims(p: usize, max_degree: u64) -> Result<DimensionTable> {
    let series = stable_series(p, max_degree)?;
    Ok(DimensionTable {
        meta: TableMeta {
            table: "stable",
            r: 0,
            p,
            level: None,
            genus: None,
            variant: None,
        },
        rows: series
            .into_iter()
            .enumerate()
            .map(|(k, d)| TableRow {
                k: k as u64,
                cohomological_degree: k as i64,
                dim: Poly::constant(d.clone()),
                dim_at_m: Some(d),
                in_stable_range: true,
                provenance: Provenance::Formula,
            })
            .collect(),
    })
}

/// Which module algebra a twisted table uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    /// `Mod(ℓ)` with `A'_r(ℓ)`; `m = ℓ^{2g}` once both are known.
    Level { level: Option<u64>, genus: Option<u64> },
    /// `Mod` with `A''_r`.
    FullMcg { genus: Option<u64> },
}

impl LevelMode {
    fn variant(self) -> Variant {
        match self {
            LevelMode::Level { .. } => Variant::LevelPrime,
            LevelMode::FullMcg { .. } => Variant::KawazumiDoublePrime,
        }
    }

    fn genus(self) -> Option<u64> {
        match self {
            LevelMode::Level { genus, .. } | LevelMode::FullMcg { genus } => genus,
        }
    }

    fn kind(self) -> StableRangeKind {
        match self {
            LevelMode::Level { .. } => StableRangeKind::Putman,
            LevelMode::FullMcg { .. } => StableRangeKind::Looijenga,
        }
    }

    fn m(self) -> Option<BigInt> {
        match self {
            LevelMode::Level {
                level: Some(l),
                genus: Some(g),
            } => Some(homology_order(g, l)),
            LevelMode::Level { .. } => None,
            LevelMode::FullMcg { .. } => Some(BigInt::one()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistedRequest {
    pub r: usize,
    /// Punctures.
    pub p: usize,
    pub mode: LevelMode,
    pub max_k: u64,
    /// No boundary components. Together with `p = 0` this is the closed
    /// surface, which the module structure does not cover.
    pub closed: bool,
}

impl TwistedRequest {
    pub fn new(r: usize, p: usize, mode: LevelMode, max_k: u64) -> Self {
        TwistedRequest {
            r,
            p,
            mode,
            max_k,
            closed: false,
        }
    }
}

fn row_for(k: u64, r: usize, dim: Poly, m: Option<&BigInt>, kind: StableRangeKind, genus: Option<u64>) -> TableRow {
    let in_range = genus.is_none_or(|g| in_stable_range(kind, g, k));
    TableRow {
        k,
        cohomological_degree: k as i64 - r as i64,
        dim_at_m: m.map(|m| dim.eval(m)),
        dim,
        in_stable_range: in_range,
        provenance: if in_range {
            Provenance::Formula
        } else {
            Provenance::Extrapolated
        },
    }
}

/// `Σ_{a+b=k} coeff[a] · module[b]`.
fn convolve(coeff: &[BigInt], module: &[Poly], k: usize) -> Poly {
    let mut acc = Poly::zero();
    for a in 0..=k {
        if !coeff[a].is_zero() && !module[k - a].is_zero() {
            acc += &module[k - a].scale(&coeff[a]);
        }
    }
    acc
}

/// Twisted cohomology table: rows `k = r, …, max_k` at degree `k - r`.
pub fn twisted_cohomology_dims(req: &TwistedRequest, exec: Execution) -> Result<DimensionTable> {
    if req.closed && req.p == 0 {
        return Err(Error::Constraint(
            "closed surface (no punctures, no boundary): the twisted module structure needs p ≥ 1 or b ≥ 1".into(),
        ));
    }
    if req.r > MAX_TABLE_R {
        return Err(Error::cap("table r", req.r, MAX_TABLE_R));
    }
    if let LevelMode::Level { level: Some(l), .. } = req.mode {
        if l < 2 {
            return Err(Error::invalid(format!("level {l} must be at least 2")));
        }
    }
    check_degree(req.max_k)?;
    let coeff = stable_series(req.p, req.max_k)?;
    let variant = req.mode.variant();
    let r = req.r;
    let module: Vec<Poly> = map_collect(exec, (0..=req.max_k).collect(), |b| graded_dimension_for(variant, r, b));
    let m = req.mode.m();
    let rows = map_collect(exec, (r as u64..=req.max_k).collect(), |k| {
        let dim = convolve(&coeff, &module, k as usize);
        row_for(k, r, dim, m.as_ref(), req.mode.kind(), req.mode.genus())
    });
    let (level, genus) = match req.mode {
        LevelMode::Level { level, genus } => (level, genus),
        LevelMode::FullMcg { genus } => (None, genus),
    };
    Ok(DimensionTable {
        meta: TableMeta {
            table: "twisted",
            r,
            p: req.p,
            level,
            genus,
            variant: Some(variant),
        },
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub r: usize,
    pub k: u64,
    pub level: u64,
    pub genus: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub rhs: BigInt,
    pub differ: bool,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Compares the full mapping class group table (source) with the level
/// table (target) at total degree `k`.
pub fn putman_gap(r: usize, p: usize, k: u64, level: u64, genus: u64) -> Result<GapReport> {
    if k % 2 == 1 {
        return Err(Error::invalid(format!("k = {k} is odd: both sides vanish")));
    }
    if !in_stable_range(StableRangeKind::Putman, genus, k) {
        return Err(Error::OutOfRange(format!(
            "g = {genus} < 2k²+7k+2 = {} for k = {k}",
            2 * (k as u128) * (k as u128) + 7 * k as u128 + 2
        )));
    }
    let full = twisted_cohomology_dims(
        &TwistedRequest::new(r, p, LevelMode::FullMcg { genus: Some(genus) }, k),
        Execution::Sequential,
    )?;
    let lvl = twisted_cohomology_dims(
        &TwistedRequest::new(
            r,
            p,
            LevelMode::Level {
                level: Some(level),
                genus: Some(genus),
            },
            k,
        ),
        Execution::Sequential,
    )?;
    let pick = |t: &DimensionTable| {
        t.row(k)
            .and_then(|row| row.dim_at_m.clone())
            .unwrap_or_else(BigInt::zero)
    };
    let (lhs, rhs) = (pick(&full), pick(&lvl));
    Ok(GapReport {
        r,
        k,
        level,
        genus,
        differ: lhs != rhs,
        lhs,
        rhs,
    })
}

/// Degree-`b` dimension of the module attached to `J`, as a polynomial in `m`.
///
/// Runs over set partitions of `[r+1]` whose block containing 1 avoids every
/// `a` with `J_{a-1} = 1`. That block carries `(m-1)^{|S_1|-1}` weight
/// choices (non-identity weights) and a free exponent; other blocks carry
/// `m^{|S|-1}` and singletons need exponent at least 1.
pub fn j_module_dimension(j: &JVector, b: u64) -> Poly {
    if b % 2 == 1 {
        return Poly::zero();
    }
    let r1 = j.len() + 1;
    let mut acc = Poly::zero();
    for part in SetPartitions::new(r1) {
        let first = &part.blocks()[0];
        if first[1..].iter().any(|&a| j.entries()[a - 2] == 1) {
            continue;
        }
        let rest: Vec<usize> = part.blocks()[1..].iter().map(Vec::len).collect();
        let base: u64 = part.blocks().iter().map(|blk| 2 * (blk.len() as u64 - 1)).sum();
        let lower = 2 * rest.iter().filter(|&&s| s == 1).count() as u64;
        if b < base + lower {
            continue;
        }
        let count = compositions((b - base - lower) / 2, part.num_blocks() as u64);
        let weights = Poly::m_minus_one().pow(first.len() as u32 - 1) * Poly::monomial(1, rest.iter().map(|s| s - 1).sum());
        acc += &weights.scale(&count);
    }
    acc
}

pub fn j_twisted_dims(j: &JVector, level: Option<u64>, genus: Option<u64>, max_k: u64, exec: Execution) -> Result<DimensionTable> {
    let r = j.len();
    if r > MAX_J_R {
        return Err(Error::cap("J length", r, MAX_J_R));
    }
    check_degree(max_k)?;
    let coeff = stable_series(0, max_k)?;
    let module: Vec<Poly> = map_collect(exec, (0..=max_k).collect(), |b| j_module_dimension(j, b));
    let m = match (level, genus) {
        (Some(l), Some(g)) => Some(homology_order(g, l)),
        _ => None,
    };
    let rows = map_collect(exec, (r as u64..=max_k).collect(), |k| {
        let dim = convolve(&coeff, &module, k as usize);
        row_for(k, r, dim, m.as_ref(), StableRangeKind::Putman, genus)
    });
    Ok(DimensionTable {
        meta: TableMeta {
            table: "j-twisted",
            r,
            p: 0,
            level,
            genus,
            variant: None,
        },
        rows,
    })
}

/// Number of `D`-weighted partitions of `[r]` with `r - |P| = codim`.
pub fn stratum_census(r: usize, codim: usize) -> Result<Poly> {
    if codim > r {
        return Err(Error::invalid(format!("codimension {codim} exceeds r = {r}")));
    }
    if r > MAX_COUNT_R {
        return Err(Error::cap("census r", r, MAX_COUNT_R));
    }
    let s = stirling2_row(r);
    Ok(Poly::monomial(s[r - codim].clone(), codim))
}
