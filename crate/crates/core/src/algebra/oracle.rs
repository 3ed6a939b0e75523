//! Graded dimensions recomputed from generators and relations.
//!
//! Works in the free commutative polynomial ring on `v_i` and every
//! `a_(S,d)`, spans the degree slice of the relation ideal by multiplying
//! each relation by every monomial of complementary degree, and row reduces.
//! Nothing here touches [`NormalMonomial`](super::NormalMonomial).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraSpec, Variant};
use crate::abelian_group::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::linalg::{sparse_row, Rational, SparseEchelon};

pub const ORACLE_MAX_R: usize = 3;
pub const ORACLE_MAX_GROUP_ORDER: u64 = 4;
pub const ORACLE_MAX_DEGREE: u64 = 10;

#[derive(Debug, Clone)]
enum Generator {
    V,
    /// Positions of each index relative to the minimal one.
    A(BTreeMap<usize, GroupElement>),
}

impl Generator {
    /// Half the cohomological degree.
    fn weight(&self) -> usize {
        match self {
            Generator::V => 1,
            Generator::A(p) => p.len() - 1,
        }
    }
}

/// Sorted multiset of generator ids.
type Mono = Vec<usize>;

struct Presentation {
    group: FiniteAbelianGroup,
    gens: Vec<Generator>,
    lookup: HashMap<(Vec<usize>, Vec<GroupElement>), usize>,
    r: usize,
}

impl Presentation {
    fn new(r: usize, group: FiniteAbelianGroup) -> Result<Self> {
        let elements = group.elements()?;
        let mut gens: Vec<Generator> = (1..=r).map(|_| Generator::V).collect();
        let mut lookup = HashMap::new();
        for mask in 1u32..(1 << r) {
            let set: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            if set.len() < 2 {
                continue;
            }
            let slots = set.len() - 1;
            let total = elements.len().pow(slots as u32);
            for code in 0..total {
                let mut c = code;
                let mut weights = Vec::with_capacity(slots);
                for _ in 0..slots {
                    weights.push(elements[c % elements.len()].clone());
                    c /= elements.len();
                }
                let mut pos = BTreeMap::new();
                pos.insert(set[0], group.identity());
                for (i, w) in set[1..].iter().zip(&weights) {
                    pos.insert(*i, w.clone());
                }
                lookup.insert((set.clone(), weights), gens.len());
                gens.push(Generator::A(pos));
            }
        }
        Ok(Presentation { group, gens, lookup, r })
    }

    /// Id of `a` for positions given up to a common shift.
    fn a_id(&self, pos: &BTreeMap<usize, GroupElement>) -> usize {
        let mut it = pos.iter();
        let (&first, base) = it.next().expect("nonempty block");
        let mut set = vec![first];
        let mut weights = Vec::new();
        for (&i, w) in it {
            set.push(i);
            weights.push(self.group.sub(w, base));
        }
        self.lookup[&(set, weights)]
    }

    /// Relations as lists of (coefficient, monomial), each homogeneous.
    fn relations(&self) -> Vec<Vec<(i64, Mono)>> {
        let mut out = Vec::new();
        for (id, g) in self.gens.iter().enumerate() {
            if let Generator::A(pos) = g {
                let idx: Vec<usize> = pos.keys().copied().collect();
                for &j in &idx[1..] {
                    out.push(vec![(1, sorted(vec![idx[0] - 1, id])), (-1, sorted(vec![j - 1, id]))]);
                }
            }
        }
        for (i, gi) in self.gens.iter().enumerate() {
            let Generator::A(p) = gi else { continue };
            for (j, gj) in self.gens.iter().enumerate().skip(i) {
                let Generator::A(q) = gj else { continue };
                let overlap: Vec<usize> = p.keys().filter(|k| q.contains_key(k)).copied().collect();
                if overlap.is_empty() {
                    continue;
                }
                let lhs = sorted(vec![i, j]);
                let shift = self.group.sub(&p[&overlap[0]], &q[&overlap[0]]);
                let agree = overlap
                    .iter()
                    .all(|k| self.group.sub(&p[k], &q[k]) == shift);
                if !agree {
                    out.push(vec![(1, lhs)]);
                    continue;
                }
                let mut union = p.clone();
                for (k, w) in q {
                    union.entry(*k).or_insert_with(|| self.group.add(w, &shift));
                }
                let mut rhs = vec![overlap[0] - 1; overlap.len() - 1];
                rhs.push(self.a_id(&union));
                out.push(vec![(1, lhs), (-1, sorted(rhs))]);
            }
        }
        out
    }

    /// All monomials of total weight `w`.
    fn monomials(&self, w: usize) -> Vec<Mono> {
        fn rec(p: &Presentation, start: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for g in start..p.gens.len() {
                let gw = p.gens[g].weight();
                if gw <= left {
                    cur.push(g);
                    rec(p, g, left - gw, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self, 0, w, &mut Vec::new(), &mut out);
        out
    }

    /// Whether a monomial lies in the primed subspace before reduction: each
    /// index carries enough `v` or sits in some `a`.
    fn covers(&self, m: &Mono, min_power: usize) -> bool {
        (1..=self.r).all(|i| {
            let vs = m.iter().filter(|&&g| g == i - 1).count();
            vs >= min_power
                || m.iter()
                    .any(|&g| matches!(&self.gens[g], Generator::A(p) if p.contains_key(&i)))
        })
    }
}

fn sorted(mut v: Mono) -> Mono {
    v.sort_unstable();
    v
}

fn mono_weight(p: &Presentation, m: &Mono) -> usize {
    m.iter().map(|&g| p.gens[g].weight()).sum()
}

/// Dimension of the degree-`n` slice computed by row reduction. Untwisted
/// variants ignore `group`.
pub fn oracle_graded_dimension(spec: &AlgebraSpec, n: u64, group: &FiniteAbelianGroup) -> Result<BigInt> {
    if spec.r > ORACLE_MAX_R {
        return Err(Error::cap("oracle r", spec.r, ORACLE_MAX_R));
    }
    if n > ORACLE_MAX_DEGREE {
        return Err(Error::cap("oracle degree", n, ORACLE_MAX_DEGREE));
    }
    let group = if spec.variant.is_level() {
        group.clone()
    } else {
        FiniteAbelianGroup::trivial()
    };
    let order = group.order_within(ORACLE_MAX_GROUP_ORDER)?;
    if order > ORACLE_MAX_GROUP_ORDER {
        return Err(Error::cap("oracle group order", order, ORACLE_MAX_GROUP_ORDER));
    }
    if n % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let w = (n / 2) as usize;
    let pres = Presentation::new(spec.r, group)?;
    let slice = pres.monomials(w);
    let column: HashMap<&Mono, usize> = slice.iter().enumerate().map(|(k, m)| (m, k)).collect();

    let mut ideal = SparseEchelon::new();
    for rel in pres.relations() {
        let rw = mono_weight(&pres, &rel[0].1);
        if rw > w {
            continue;
        }
        for mult in pres.monomials(w - rw) {
            let row = rel
                .iter()
                .map(|(c, m)| {
                    let mut full = m.clone();
                    full.extend_from_slice(&mult);
                    (column[&sorted(full)], Rational::from_integer(BigInt::from(*c)))
                })
                .collect();
            ideal.insert(sparse_row(row));
        }
    }
    let quotient = slice.len() - ideal.rank();

    let min_power = match spec.variant {
        Variant::LooijengaFull | Variant::LevelFull => return Ok(BigInt::from(quotient)),
        Variant::LooijengaPrime => 2,
        Variant::KawazumiDoublePrime | Variant::LevelPrime => 1,
    };
    let before = ideal.rank();
    for (k, m) in slice.iter().enumerate() {
        if pres.covers(m, min_power) {
            ideal.insert(vec![(k, Rational::one())]);
        }
    }
    Ok(BigInt::from(ideal.rank() - before))
}
