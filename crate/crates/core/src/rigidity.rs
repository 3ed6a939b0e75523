//! Commutants of finite abelian symplectic actions and the tensor-square
//! embedding of `sp(2h)`.
//!
//! Everything is over exact rationals. The commutant is cut out by rational
//! linear equations, so its dimension is the same over `R`.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, q, Matrix, Rational};

/// Default bound on the order of each generator.
pub const FINITE_ORDER_CAP: u32 = 24;

/// Largest `h` accepted by commutant solves.
pub const MAX_H: usize = 8;

/// `R^{2h}` with basis `α_1, β_1, …, α_h, β_h` and `ω(α_j, β_j) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticSpace {
    h: usize,
}

impl SymplecticSpace {
    pub fn new(h: usize) -> Result<Self> {
        if h > MAX_H {
            return Err(Error::cap("symplectic genus h", h, MAX_H));
        }
        Ok(SymplecticSpace { h })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn dim(&self) -> usize {
        2 * self.h
    }

    /// Block diagonal of `[[0, 1], [-1, 0]]`.
    pub fn j_form(&self) -> Matrix {
        let n = self.dim();
        let mut j = Matrix::zeros(n, n);
        for b in 0..self.h {
            j[(2 * b, 2 * b + 1)] = q(1);
            j[(2 * b + 1, 2 * b)] = q(-1);
        }
        j
    }

    pub fn is_symplectic(&self, m: &Matrix) -> bool {
        let j = self.j_form();
        m.rows() == self.dim() && m.cols() == self.dim() && &(&m.transpose() * &j) * m == j
    }

    /// `XᵀJ + JX = 0`
    pub fn in_lie_algebra(&self, x: &Matrix) -> bool {
        let j = self.j_form();
        x.rows() == self.dim() && x.cols() == self.dim() && (&(&x.transpose() * &j) + &(&j * x)).is_zero()
    }
}

/// `dim sp(2h) = h(2h + 1)`.
pub fn sp_dimension(h: u64) -> u64 {
    h * (2 * h + 1)
}

/// Finite abelian group acting symplectically, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianSymplecticAction {
    space: SymplecticSpace,
    generators: Vec<Matrix>,
}

impl AbelianSymplecticAction {
    pub fn new(space: SymplecticSpace, generators: Vec<Matrix>) -> Result<Self> {
        Self::with_order_cap(space, generators, FINITE_ORDER_CAP)
    }

    pub fn with_order_cap(space: SymplecticSpace, generators: Vec<Matrix>, cap: u32) -> Result<Self> {
        let n = space.dim();
        for (i, m) in generators.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Constraint(format!(
                    "generator {i} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !space.is_symplectic(m) {
                return Err(Error::Constraint(format!("generator {i} violates MᵀJM = J")));
            }
            if finite_order(m, cap).is_none() {
                return Err(Error::Constraint(format!("generator {i} has no finite order ≤ {cap}")));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if &generators[i] * &generators[j] != &generators[j] * &generators[i] {
                    return Err(Error::Constraint(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        Ok(AbelianSymplecticAction { space, generators })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Same action after the change of basis `P`: generators `P⁻¹ M P`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Self> {
        let inv = p.inverse().ok_or_else(|| Error::invalid("change of basis is singular"))?;
        let gens = self.generators.iter().map(|m| &(&inv * m) * p).collect();
        Self::new(self.space, gens)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "h": self.space.h,
            "generators": self.generators.iter().map(matrix_to_json).collect::<Vec<_>>(),
        })
    }

    /// `{"h": h, "generators": [matrix, ...]}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let h = v
            .get("h")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse(v.to_string(), "expected integer field `h`"))?;
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(v.to_string(), "expected list field `generators`"))?
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(SymplecticSpace::new(h as usize)?, gens)
    }
}

/// Smallest `k ≤ cap` with `M^k = I`.
pub fn finite_order(m: &Matrix, cap: u32) -> Option<u32> {
    let id = Matrix::identity(m.rows());
    let mut p = m.clone();
    for k in 1..=cap {
        if p == id {
            return Some(k);
        }
        p = &p * m;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSubalgebraReport {
    pub dimension: usize,
    pub basis: Vec<Matrix>,
    /// Entry `t` is the flat index where basis element `t` is 1 and the others are 0.
    free_columns: Vec<usize>,
}

impl LieSubalgebraReport {
    /// Coordinates of `x` in the basis, or `None` if `x` is not in the span.
    pub fn coordinates(&self, x: &Matrix) -> Option<Vec<Rational>> {
        let flat = x.as_flat();
        let coords: Vec<Rational> = self.free_columns.iter().map(|&c| flat[c].clone()).collect();
        let n = x.rows();
        let mut rebuilt = Matrix::zeros(n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            rebuilt = &rebuilt + &b.scale(c);
        }
        (&rebuilt == x).then_some(coords)
    }

    pub fn to_json(&self, with_basis: bool) -> Value {
        let mut v = json!({ "dimension": self.dimension });
        if with_basis {
            v["basis"] = Value::Array(self.basis.iter().map(matrix_to_json).collect());
        }
        v
    }
}

/// `sp(2h)^A`: the null space of `XᵀJ + JX = 0` and `XM - MX = 0`.
pub fn commutant_sp(action: &AbelianSymplecticAction) -> LieSubalgebraReport {
    let n = action.space.dim();
    let j = action.space.j_form();
    let var = |a: usize, b: usize| a * n + b;
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut row = vec![Rational::zero(); n * n];
            for c in 0..n {
                row[var(c, a)] += &j[(c, b)];
                row[var(c, b)] += &j[(a, c)];
            }
            rows.push(row);
        }
    }
    for m in &action.generators {
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for c in 0..n {
                    row[var(a, c)] += &m[(c, b)];
                    row[var(c, b)] -= &m[(a, c)];
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return LieSubalgebraReport {
            dimension: 0,
            basis: Vec::new(),
            free_columns: Vec::new(),
        };
    }
    let system = Matrix::from_rows(rows).expect("rows have equal length");
    let (null, free_columns) = system.null_space();
    let basis: Vec<Matrix> = null
        .iter()
        .map(|v| Matrix::from_flat_square(v).expect("square unknowns"))
        .collect();
    LieSubalgebraReport {
        dimension: basis.len(),
        basis,
        free_columns,
    }
}

/// Matrix of `X ↦ F X F⁻¹` on the commutant basis (columns are images).
pub fn adjoint_matrix(action: &AbelianSymplecticAction, report: &LieSubalgebraReport, f: &Matrix) -> Result<Matrix> {
    if !action.space.is_symplectic(f) {
        return Err(Error::Constraint("F violates FᵀJF = J".into()));
    }
    for (i, m) in action.generators.iter().enumerate() {
        if f * m != m * f {
            return Err(Error::Constraint(format!("F does not commute with generator {i}")));
        }
    }
    let inv = f.inverse().ok_or_else(|| Error::Constraint("F is singular".into()))?;
    let d = report.dimension;
    let mut out = Matrix::zeros(d, d);
    for (col, x) in report.basis.iter().enumerate() {
        let image = &(f * x) * &inv;
        let coords = report
            .coordinates(&image)
            .ok_or_else(|| Error::Constraint("F X F⁻¹ left the commutant".into()))?;
        for (row, c) in coords.into_iter().enumerate() {
            out[(row, col)] = c;
        }
    }
    Ok(out)
}

/// `Σ_j β_j ⊗ Xα_j - α_j ⊗ Xβ_j`, flattened at `u·2h + w`. The columns of
/// `basis` are `α_1, β_1, …, α_h, β_h`.
pub fn tensor_square_embedding(space: &SymplecticSpace, x: &Matrix, basis: &Matrix) -> Result<Vec<Rational>> {
    if !space.is_symplectic(basis) {
        return Err(Error::Constraint("basis is not symplectic".into()));
    }
    let n = space.dim();
    if x.rows() != n || x.cols() != n {
        return Err(Error::invalid(format!("X must be {n}x{n}")));
    }
    let mut out = vec![Rational::zero(); n * n];
    for j in 0..space.h {
        let alpha: Vec<Rational> = (0..n).map(|i| basis[(i, 2 * j)].clone()).collect();
        let beta: Vec<Rational> = (0..n).map(|i| basis[(i, 2 * j + 1)].clone()).collect();
        let x_alpha = apply(x, &alpha);
        let x_beta = apply(x, &beta);
        for u in 0..n {
            for w in 0..n {
                out[u * n + w] += &beta[u] * &x_alpha[w] - &alpha[u] * &x_beta[w];
            }
        }
    }
    Ok(out)
}

fn apply(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|k| &m[(i, k)] * &v[k]).sum())
        .collect()
}

/// `(I - X)⁻¹ (I + X)`; symplectic when `X ∈ sp(2h)` and `I - X` is invertible.
pub fn cayley(x: &Matrix) -> Option<Matrix> {
    let id = Matrix::identity(x.rows());
    let inv = (&id - x).inverse()?;
    Some(&inv * &(&id + x))
}

/// Small random integer combination of the report's basis.
pub fn random_element<R: Rng>(report: &LieSubalgebraReport, n: usize, rng: &mut R) -> Matrix {
    let mut x = Matrix::zeros(n, n);
    for b in &report.basis {
        x = &x + &b.scale(&q(rng.gen_range(-2..=2)));
    }
    x
}

/// Random element of the group `Sp(2h)^A` obtained as a Cayley transform of a
/// random commutant element.
pub fn random_commutant_group_element<R: Rng>(action: &AbelianSymplecticAction, report: &LieSubalgebraReport, rng: &mut R) -> Matrix {
    let n = action.space.dim();
    loop {
        let x = random_element(report, n, rng);
        if let Some(f) = cayley(&x) {
            return f;
        }
    }
}

/// Random symplectic matrix, seeded.
pub fn random_symplectic(space: &SymplecticSpace, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trivial = AbelianSymplecticAction::new(*space, Vec::new()).expect("empty action is valid");
    let report = commutant_sp(&trivial);
    random_commutant_group_element(&trivial, &report, &mut rng)
}

pub mod fixtures {
    //! Sample deck actions. These are chosen for testing, not derived from covers.

    use super::*;

    pub fn trivial(h: usize) -> Result<AbelianSymplecticAction> {
        AbelianSymplecticAction::new(SymplecticSpace::new(h)?, Vec::new())
    }

    /// `{±I}`
    pub fn minus_identity(h: usize) -> Result<AbelianSymplecticAction> {
        let n = 2 * h;
        AbelianSymplecticAction::new(SymplecticSpace::new(h)?, vec![Matrix::identity(n).scale(&q(-1))])
    }

    /// `Z/2` exchanging `(α_1, β_1)` with `(α_2, β_2)`.
    pub fn plane_swap() -> Result<AbelianSymplecticAction> {
        let m = Matrix::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        AbelianSymplecticAction::new(SymplecticSpace::new(2)?, vec![m])
    }

    /// Order-`ℓ` element of `SL_2(Z)` on every plane, `ℓ ∈ {2, 3, 4, 6}`.
    pub fn rotation(level: u64, h: usize) -> Result<AbelianSymplecticAction> {
        let block: [[i64; 2]; 2] = match level {
            2 => [[-1, 0], [0, -1]],
            3 => [[0, -1], [1, -1]],
            4 => [[0, -1], [1, 0]],
            6 => [[0, -1], [1, 1]],
            _ => return Err(Error::invalid(format!("no integral rotation of order {level}; use 2, 3, 4 or 6"))),
        };
        let n = 2 * h;
        let mut m = Matrix::zeros(n, n);
        for b in 0..h {
            for (i, row) in block.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    m[(2 * b + i, 2 * b + j)] = q(v);
                }
            }
        }
        AbelianSymplecticAction::new(SymplecticSpace::new(h)?, vec![m])
    }

    /// Looks up a fixture by its CLI name.
    pub fn by_name(name: &str, h: usize) -> Result<AbelianSymplecticAction> {
        match name {
            "trivial" => trivial(h),
            "minus-identity" => minus_identity(h),
            "plane-swap" => plane_swap(),
            _ => match name.strip_prefix("rotation") {
                Some(l) => rotation(
                    l.parse().map_err(|_| Error::parse(name, "expected rotation2, rotation3, rotation4 or rotation6"))?,
                    h,
                ),
                None => Err(Error::parse(name, "unknown fixture")),
            },
        }
    }
}

/// Array of rows of `"num/den"` strings.
pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(format_rational(&m[(i, j)]))).collect()))
            .collect(),
    )
}

/// Accepts strings `"n"`, `"n/d"` and JSON integers.
pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(v.to_string(), "matrix must be an array of rows"))?;
    let parsed = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::parse(row.to_string(), "row must be an array"))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().expect("checked"))),
                    other => Err(Error::parse(other.to_string(), "entry must be \"num/den\" or an integer")),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).map_err(|e| Error::parse(v.to_string(), e.to_string()))
}

/// `α_1, β_1, …` as the unit vectors.
pub fn standard_basis(space: &SymplecticSpace) -> Matrix {
    Matrix::identity(space.dim())
}
