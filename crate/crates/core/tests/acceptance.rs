//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines reach the
//! terminal under `cargo test`. Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prymcoh::abelian_group::FiniteAbelianGroup;
use prymcoh::algebra::{graded_dimension, oracle_graded_dimension, AlgebraSpec, Variant};
use prymcoh::linalg::Matrix;
use prymcoh::par::Execution;
use prymcoh::partitions::{count_d_weighted_partitions, enumerate_d_weighted_partitions, JVector, Permutation};
use prymcoh::poly::Poly;
use prymcoh::rigidity::{
    commutant_sp, fixtures, random_element, random_symplectic, sp_dimension, standard_basis, tensor_square_embedding,
    SymplecticSpace,
};
use prymcoh::series::{
    in_stable_range, j_twisted_dims, putman_gap, stable_cohomology_dims, stratum_census, twisted_cohomology_dims, LevelMode,
    StableRangeKind, TwistedRequest,
};
use prymcoh::symmetry::{cycle_types, decompose, permutation_character, sr_character_table, CycleType};

const CRITERION_1_LIMIT: Duration = Duration::from_secs(1);
const CRITERION_2_LIMIT: Duration = Duration::from_secs(60);
const CRITERION_8_LIMIT: Duration = Duration::from_secs(5);

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> std::result::Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(format!("{:.3}s < {:?}", t.as_secs_f64(), limit))
}

fn poly(c: &[i64]) -> Poly {
    Poly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for n in 1..=10u64 {
        let level = graded_dimension(&AlgebraSpec::symbolic(Variant::LevelPrime, 2), 2 * n);
        ensure(level == poly(&[n as i64 - 1, 1]), || format!("level-prime degree {}: {level}", 2 * n))?;
        let full = graded_dimension(&AlgebraSpec::symbolic(Variant::KawazumiDoublePrime, 2), 2 * n);
        ensure(full == poly(&[n as i64]), || format!("A''_2 degree {}: {full}", 2 * n))?;
    }
    within(start, CRITERION_1_LIMIT).map(|t| format!("(n-1)+m and n for n <= 10, {t}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut cells = 0;
    for variant in Variant::ALL {
        for r in 0..=3 {
            for order in 1..=3u64 {
                let g = FiniteAbelianGroup::cyclic(order).unwrap();
                let spec = AlgebraSpec::concrete(variant, r, g.clone());
                let m = if variant.is_level() { order } else { 1 };
                for n in 0..=8 {
                    let formula = graded_dimension(&spec, n).eval_u64(m);
                    let oracle = oracle_graded_dimension(&spec, n, &g).map_err(|e| e.to_string())?;
                    ensure(formula == oracle, || format!("{variant} r={r} |D|={order} n={n}: {formula} vs {oracle}"))?;
                    cells += 1;
                }
            }
        }
    }
    let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
    let fixture = oracle_graded_dimension(&AlgebraSpec::concrete(Variant::LevelFull, 2, z2.clone()), 4, &z2).unwrap();
    ensure(fixture == BigInt::from(5), || format!("A_2(l), |D|=2, degree 4 gave {fixture}"))?;
    within(start, CRITERION_2_LIMIT).map(|t| format!("{cells} cells, 0 mismatches, {t}"))
}

fn criterion_3() -> Check {
    for r in 0..=5 {
        for n in 0..=12 {
            let at1 = |v| graded_dimension(&AlgebraSpec::symbolic(v, r), n).eval_u64(1);
            ensure(at1(Variant::LevelFull) == at1(Variant::LooijengaFull), || format!("full r={r} n={n}"))?;
            ensure(at1(Variant::LevelPrime) == at1(Variant::KawazumiDoublePrime), || format!("prime r={r} n={n}"))?;
        }
    }
    Ok("r <= 5, degrees <= 12".into())
}

fn criterion_4() -> Check {
    let full = twisted_cohomology_dims(&TwistedRequest::new(1, 0, LevelMode::FullMcg { genus: None }, 20), Execution::Sequential)
        .map_err(|e| e.to_string())?;
    for (l, g) in [(None, None), (Some(2), Some(24)), (Some(3), Some(40)), (Some(5), Some(100))] {
        let t = twisted_cohomology_dims(&TwistedRequest::new(1, 0, LevelMode::Level { level: l, genus: g }, 20), Execution::Sequential)
            .map_err(|e| e.to_string())?;
        for (a, b) in t.rows.iter().zip(&full.rows) {
            ensure(a.dim.is_constant() && a.dim == b.dim, || format!("r=1 k={} l={l:?} g={g:?}: {} vs {}", a.k, a.dim, b.dim))?;
        }
    }
    for l in [2u64, 3] {
        ensure(in_stable_range(StableRangeKind::Putman, 24, 2), || "g = 24 not in range for k = 2".into())?;
        let gap = putman_gap(2, 0, 2, l, 24).map_err(|e| e.to_string())?;
        let want = num_traits::pow(BigInt::from(l), 48);
        ensure(gap.lhs == BigInt::from(1) && gap.rhs == want && gap.differ, || format!("l={l}: {gap:?}"))?;
    }
    Ok("r = 1 tables constant in m; gaps (1, 2^48, true), (1, 3^48, true)".into())
}

fn criterion_5() -> Check {
    let mut tables = 0;
    for v in Variant::ALL {
        for r in 0..=5 {
            for n in (1..=19).step_by(2) {
                let d = graded_dimension(&AlgebraSpec::symbolic(v, r), n);
                ensure(d.is_zero(), || format!("{v} r={r} n={n}: {d}"))?;
            }
            tables += 1;
        }
    }
    for r in 0..=5 {
        for p in 0..=2 {
            for mode in [LevelMode::Level { level: None, genus: None }, LevelMode::FullMcg { genus: None }] {
                let t = twisted_cohomology_dims(&TwistedRequest::new(r, p, mode, 20), Execution::Parallel).map_err(|e| e.to_string())?;
                for row in t.rows.iter().filter(|row| row.k % 2 == 1) {
                    ensure(row.dim.is_zero(), || format!("twisted r={r} p={p} k={}", row.k))?;
                }
                tables += 1;
            }
        }
    }
    for p in 0..=3 {
        let t = stable_cohomology_dims(p, 20).map_err(|e| e.to_string())?;
        ensure(t.rows.iter().filter(|row| row.k % 2 == 1).all(|row| row.dim.is_zero()), || format!("stable p={p}"))?;
        tables += 1;
    }
    for j in ["", "0", "1", "01", "11", "010", "1111"] {
        let jv: JVector = j.parse().unwrap();
        let t = j_twisted_dims(&jv, None, None, 20, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(t.rows.iter().filter(|row| row.k % 2 == 1).all(|row| row.dim.is_zero()), || format!("J={j}"))?;
        tables += 1;
    }
    Ok(format!("{tables} tables, all odd entries zero"))
}

fn small_groups() -> Vec<FiniteAbelianGroup> {
    ["1", "Z2", "Z3", "Z4", "Z2xZ2"].iter().map(|s| s.parse().unwrap()).collect()
}

fn criterion_6() -> Check {
    for r in 0..=5 {
        let count = count_d_weighted_partitions(r).map_err(|e| e.to_string())?;
        for m in 1..=4u64 {
            let g = FiniteAbelianGroup::cyclic(m).unwrap();
            let n = enumerate_d_weighted_partitions(r, &g).map_err(|e| e.to_string())?.len();
            ensure(count.eval_u64(m) == BigInt::from(n), || format!("r={r} m={m}: {} vs {n}", count.eval_u64(m)))?;
        }
        let mut census = Poly::zero();
        for c in 0..=r {
            census += &stratum_census(r, c).map_err(|e| e.to_string())?;
        }
        ensure(census == count, || format!("census r={r}"))?;
    }
    let mut checks = 0u64;
    for g in small_groups() {
        for r in 0..=4 {
            let perms = Permutation::all(r);
            for p in enumerate_d_weighted_partitions(r, &g).unwrap() {
                ensure(p.relabel(&Permutation::identity(r), &g).unwrap() == p, || format!("identity on {p}"))?;
                for s in &perms {
                    let sp = p.relabel(s, &g).unwrap();
                    for t in &perms {
                        let lhs = sp.relabel(t, &g).unwrap();
                        let rhs = p.relabel(&t.compose(s), &g).unwrap();
                        ensure(lhs == rhs, || format!("composition fails on {p} in {g}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("counts match at m = 1..4, census sums, {checks} relabel compositions"))
}

/// Every finite abelian group of order `n`, as invariant-factor-free prime power lists.
fn abelian_groups_of_order(n: u64) -> Vec<FiniteAbelianGroup> {
    fn partitions(e: u32, max: u32) -> Vec<Vec<u32>> {
        if e == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(e)).rev() {
            for mut rest in partitions(e - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut factors_by_prime: Vec<Vec<Vec<u64>>> = Vec::new();
    let (mut rest, mut p) = (n, 2);
    while rest > 1 {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors_by_prime.push(partitions(e, e).into_iter().map(|l| l.iter().map(|&k| p.pow(k)).collect()).collect());
        }
        p += 1;
    }
    let mut out = vec![Vec::new()];
    for choices in factors_by_prime {
        out = out
            .into_iter()
            .flat_map(|acc: Vec<u64>| {
                choices.iter().map(move |c| {
                    let mut v = acc.clone();
                    v.extend(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|f| if f.is_empty() { FiniteAbelianGroup::trivial() } else { FiniteAbelianGroup::new(f).unwrap() })
        .collect()
}

fn criterion_7() -> Check {
    let swap = CycleType::new(vec![2]).unwrap();
    let mut groups = 0;
    for n in 1..=64 {
        for g in abelian_groups_of_order(n) {
            let spec = AlgebraSpec::concrete(Variant::LevelPrime, 2, g.clone());
            let chi = permutation_character(&spec, 2, Execution::Parallel).map_err(|e| e.to_string())?;
            // elements with 2x = 0: one factor of 2 per even cyclic factor
            let even = g.factors().iter().filter(|&&f| f % 2 == 0).count();
            let want = BigInt::from(1u64 << even);
            ensure(chi.value(&swap) == Some(&want), || format!("{g}: trace {:?}, want {want}", chi.value(&swap)))?;
            ensure(g.torsion_count(2).unwrap() == want, || format!("{g}: torsion_count"))?;
            groups += 1;
        }
    }
    let mut decomps = 0;
    for g in ["1", "Z2", "Z3"].iter().map(|s| s.parse::<FiniteAbelianGroup>().unwrap()) {
        for variant in [Variant::LevelPrime, Variant::LevelFull] {
            for r in 1..=4 {
                for n in 0..=8 {
                    let chi = permutation_character(&AlgebraSpec::concrete(variant, r, g.clone()), n, Execution::Parallel)
                        .map_err(|e| e.to_string())?;
                    let d = decompose(&chi).map_err(|e| format!("{variant} r={r} n={n} {g}: {e}"))?;
                    ensure(d.iter().all(|(_, m)| m >= &BigInt::zero()), || "negative multiplicity".into())?;
                    decomps += 1;
                }
            }
        }
    }
    for r in 0..=8 {
        let table = sr_character_table(r).map_err(|e| e.to_string())?;
        let order: BigInt = (1..=r).map(BigInt::from).product();
        for (i, (_, a)) in table.iter().enumerate() {
            for (j, (_, b)) in table.iter().enumerate() {
                let want = if i == j { order.clone() } else { BigInt::zero() };
                ensure(a.scaled_inner(b) == want, || format!("row orthogonality r={r}"))?;
            }
        }
        let classes = cycle_types(r);
        for (x, cx) in classes.iter().enumerate() {
            for y in 0..classes.len() {
                let s: BigInt = table.iter().map(|(_, c)| &c.values()[x] * &c.values()[y]).sum();
                let want = if x == y { cx.centralizer_order() } else { BigInt::zero() };
                ensure(s == want, || format!("column orthogonality r={r}"))?;
            }
        }
    }
    Ok(format!("{groups} groups of order <= 64, {decomps} decompositions, orthogonality r <= 8"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let dim = |a: prymcoh::Result<_>| commutant_sp(&a.unwrap()).dimension;
    ensure(dim(fixtures::trivial(2)) == 10, || "trivial h=2".into())?;
    ensure(dim(fixtures::minus_identity(1)) == 3, || "-I h=1".into())?;
    ensure(dim(fixtures::trivial(1)) == 3, || "I h=1".into())?;
    ensure(dim(fixtures::plane_swap()) == 6, || "plane swap".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for h in 1..=3usize {
        let s = SymplecticSpace::new(h).unwrap();
        let rep = commutant_sp(&fixtures::trivial(h).unwrap());
        let e = standard_basis(&s);
        let rows: Vec<_> = rep.basis.iter().map(|x| tensor_square_embedding(&s, x, &e).unwrap()).collect();
        let rank = Matrix::from_rows(rows).unwrap().rank() as u64;
        ensure(rank == sp_dimension(h as u64), || format!("h={h}: rank {rank}"))?;
        for seed in 0..3 {
            let f = random_symplectic(&s, seed);
            let x = random_element(&rep, s.dim(), &mut rng);
            let lhs = tensor_square_embedding(&s, &(&(&f * &x) * &f.inverse().unwrap()), &e).unwrap();
            let rhs = &f.kron(&f) * &Matrix::column(&tensor_square_embedding(&s, &x, &e).unwrap());
            ensure(Matrix::column(&lhs) == rhs, || format!("equivariance h={h} seed={seed}"))?;
        }
    }
    within(start, CRITERION_8_LIMIT).map(|t| format!("dims 10, 3, 6; rank h(2h+1) and equivariance for h <= 3, {t}"))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_prymcoh")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_9() -> Check {
    ensure(in_stable_range(StableRangeKind::Putman, 41, 3), || "PUTMAN(41, 3) false".into())?;
    ensure(!in_stable_range(StableRangeKind::Putman, 40, 3), || "PUTMAN(40, 3) true".into())?;
    let base = ["twisted", "--r", "2", "--level", "2", "--genus", "41", "--max-k", "6"];
    let (code, out, err) = cli(&base);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    ensure(!out.contains("extrapolated"), || "extrapolated row printed without flag".into())?;
    ensure(out.lines().any(|l| l.starts_with("3,")), || "in-range row k=3 missing".into())?;
    ensure(!out.lines().any(|l| l.starts_with("4,")), || "out-of-range row k=4 printed".into())?;
    ensure(err.contains("--allow-extrapolated"), || "no note on stderr".into())?;
    let mut with_flag = base.to_vec();
    with_flag.push("--allow-extrapolated");
    let (code, out, _) = cli(&with_flag);
    ensure(code == 0 && out.lines().any(|l| l.starts_with("4,") && l.ends_with("extrapolated")), || "flag did not restore row".into())?;
    Ok("PUTMAN(41,3) true, PUTMAN(40,3) false, CLI withholds rows k >= 4 at g = 41".into())
}

fn acceptance_commands() -> Vec<Vec<&'static str>> {
    vec![
        vec!["dims", "--variant", "level-prime", "--r", "2", "--level", "3", "--genus", "2", "--max-degree", "20"],
        vec!["dims", "--variant", "level-full", "--r", "3", "--group", "Z2", "--max-degree", "8", "--with-oracle"],
        vec!["twisted", "--r", "2", "--p", "0", "--level", "2", "--genus", "24", "--max-k", "4"],
        vec!["twisted", "--r", "3", "--p", "1", "--full-mcg", "--genus", "40", "--max-k", "20", "--allow-extrapolated", "--format", "json"],
        vec!["gap", "--r", "2", "--k", "2", "--level", "3", "--genus", "24", "--format", "json"],
        vec!["character", "--r", "4", "--group", "Z3", "--degree", "6", "--format", "json"],
        vec!["commutant", "--fixture", "plane-swap", "--check-adjoint", "--with-basis", "--seed", "7", "--format", "json"],
        vec!["commutant", "--fixture", "rotation6", "--h", "3", "--check-adjoint", "--seed", "7"],
        vec!["oracle-check", "--r-max", "3", "--groups", "1,Z2,Z3", "--max-degree", "8"],
        vec!["strata", "--r", "6", "--group", "Z2xZ3", "--format", "pretty"],
        vec!["j-twisted", "--j", "1,0,1", "--level", "2", "--genus", "200", "--max-k", "12"],
    ]
}

fn criterion_10() -> Check {
    let commands = acceptance_commands();
    for args in &commands {
        let mut runs = Vec::new();
        for threads in ["1", "4", "4"] {
            let mut a = args.clone();
            a.extend(["--threads", threads]);
            let (code, out, err) = cli(&a);
            ensure(code == 0, || format!("{args:?} exited {code}: {err}"))?;
            runs.push((out, err));
        }
        let mut seq = args.clone();
        seq.push("--sequential");
        let (_, out, err) = cli(&seq);
        runs.push((out, err));
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across repeat runs, 1 and 4 threads, sequential", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "example tables", criterion_1),
        (2, "oracle equivalence", criterion_2),
        (3, "specialization laws", criterion_3),
        (4, "stability vs instability", criterion_4),
        (5, "odd-degree vanishing", criterion_5),
        (6, "partition combinatorics", criterion_6),
        (7, "characters", criterion_7),
        (8, "rigidity linear algebra", criterion_8),
        (9, "stable-range predicates", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        match std::panic::catch_unwind(f) {
            Ok(Ok(detail)) => println!("criterion {n:>2} PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("criterion {n:>2} FAIL {name}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
