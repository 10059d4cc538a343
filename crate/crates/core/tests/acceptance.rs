//! End-to-end acceptance checks, one line per criterion.
//!
//! Every comparison is exact. Oracles that the library also computes are
//! re-derived here by independent means where that is cheap.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nkoszul_core::builtins::{
    antisymmetrizer, count_admissible, has_descent, polynomial, quantum_space, quantum_space_generic,
};
use nkoszul_core::freealg::all_words;
use nkoszul_core::koszul::{admissible_identity_check, dvp_check, identity_eq1, nu};
use nkoszul_core::linalg::{kernel, Matrix, SparseVec, Subspace};
use nkoszul_core::manin::{DeterminantConvention, ManinBialgebra};
use nkoszul_core::mmt::{check_specializable, det_i_minus_zt, mmt_check, nmt_check, signed_minor_polynomial, GTable};
use nkoszul_core::scalar::MPoly;
use nkoszul_core::{Algebra, AlgebraPresentation, Field, KoszulComplex, NumericMatrix, Rational};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(v: i64) -> Rational {
    Rational::from(v)
}

fn pascal(rows: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::one()]];
    for r in 1..=rows {
        let prev = &t[r - 1];
        let mut row = vec![BigInt::one(); r + 1];
        for k in 1..r {
            row[k] = &prev[k - 1] + &prev[k];
        }
        t.push(row);
    }
    t
}

fn choose(t: &[Vec<BigInt>], n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        t[n][k].clone()
    }
}

fn c1_eq1() -> Check {
    let t = pascal(20);
    for n in 1..=6usize {
        for m in 1..=10usize {
            let v = identity_eq1(n as u64, m as u64);
            let oracle = (0..=m).fold(BigInt::zero(), |acc, k| {
                let term = choose(&t, n + k - 1, k) * choose(&t, n, m - k);
                if k % 2 == 0 { acc + term } else { acc - term }
            });
            ensure(v.is_zero() && oracle.is_zero(), || format!("n={n} m={m}: {v} (oracle {oracle})"))?;
        }
    }
    Ok("60 sums vanish".into())
}

fn c2_dual_dims() -> Check {
    let t = pascal(20);
    let mut count = 0;
    for n in 2..=6usize {
        for big_n in 2..=n {
            let a = Algebra::new(antisymmetrizer(n, big_n).map_err(|e| e.to_string())?);
            let k = KoszulComplex::new(&a);
            for m in 0..=n + 2 {
                let expected = if m < big_n { BigInt::from(n).pow(m as u32) } else { choose(&t, n, m) };
                let got = BigInt::from(k.dual_dim(m).map_err(|e| e.to_string())?);
                ensure(got == expected, || format!("n={n} N={big_n} m={m}: {got} vs {expected}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} dimensions match"))
}

fn brute_admissible(n: usize, big_n: usize, k: usize) -> usize {
    all_words(n, k).filter(|w| !has_descent(w.letters(), big_n)).count()
}

fn c3_admissible() -> Check {
    let t = pascal(20);
    for (n, big_n) in [(3, 2), (3, 3), (4, 3), (4, 4), (4, 2)] {
        let report = admissible_identity_check(n, big_n, 8).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("(n,N)=({n},{big_n}): {report:?}"))?;
        // independent inversion of 1 - n t + C(n,N) t^N - C(n,N+1) t^{N+1} + ...
        let mut poly = vec![BigInt::zero(); 9];
        for ell in 0.. {
            let v = nu(big_n, ell);
            if v > 8 || v > n {
                break;
            }
            let d = if v < big_n { BigInt::from(n).pow(v as u32) } else { choose(&t, n, v) };
            poly[v] = if ell % 2 == 0 { d } else { -d };
        }
        let mut inv = vec![BigInt::zero(); 9];
        inv[0] = BigInt::one();
        for k in 1..=8 {
            inv[k] = -(1..=k).fold(BigInt::zero(), |acc, i| acc + &poly[i] * &inv[k - i]);
        }
        for k in 0..=8 {
            let brute = BigInt::from(brute_admissible(n, big_n, k));
            ensure(count_admissible(n, big_n, k) == brute && brute == inv[k], || {
                format!("(n,N)=({n},{big_n}) k={k}: brute {brute}, inverse {}", inv[k])
            })?;
        }
    }
    for n in 2..=4 {
        for big_n in 2..=n {
            let a = Algebra::new(antisymmetrizer(n, big_n).map_err(|e| e.to_string())?);
            for k in 0..=6 {
                let dim = a.dim_component(k).map_err(|e| e.to_string())?;
                ensure(BigInt::from(dim) == count_admissible(n, big_n, k), || {
                    format!("antisym({n},{big_n}) dim A_{k} = {dim} != L")
                })?;
            }
        }
    }
    ensure(brute_admissible(3, 3, 3) == 26, || "L(3,3,3) != 26".into())?;
    Ok("5 series to k=8; L = dim A_k for n<=4, k<=6".into())
}

fn certificate_algebras() -> Vec<AlgebraPresentation<Rational>> {
    vec![
        polynomial(1).unwrap(),
        polynomial(2).unwrap(),
        polynomial(3).unwrap(),
        antisymmetrizer(3, 3).unwrap(),
        antisymmetrizer(4, 3).unwrap(),
    ]
}

fn c4_certificates() -> Check {
    let mut pairs = 0;
    for p in certificate_algebras() {
        let a = Algebra::new(p);
        let cert = KoszulComplex::new(&a).certificate(6).map_err(|e| e.to_string())?;
        ensure(cert.passed && cert.verdict == "exact up to degree 6", || format!("{}: {}", a.label(), cert.verdict))?;
        for d in &cert.degrees {
            ensure(d.d_squared_zero, || format!("{}: d∘d != 0 at m={}", a.label(), d.total_degree))?;
            pairs += d.entries.len().saturating_sub(2);
        }
    }
    Ok(format!("5 algebras exact to degree 6; d∘d = 0 on {pairs} pairs"))
}

fn c5_dvp() -> Check {
    let t = pascal(20);
    for p in certificate_algebras() {
        let a = Algebra::new(p);
        let k = KoszulComplex::new(&a);
        let r = dvp_check(&k, 8).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{}: {r:?}", a.label()))?;
        if a.relation_degree() == 2 {
            let n = a.n();
            for (ell, c) in r.dual_series.iter().enumerate() {
                let b = choose(&t, n, ell);
                let expected = if ell % 2 == 0 { b } else { -b };
                ensure(*c == expected.to_string(), || format!("{}: dual coefficient {ell}", a.label()))?;
            }
        }
        if a.label() == "antisym(n=4,N=3)" {
            let expected = ["1", "-4", "0", "4", "-1", "0", "0", "0", "0"];
            ensure(r.dual_series == expected, || format!("antisym(4,3) RHS {:?}", r.dual_series))?;
        }
    }
    let qs = Algebra::new(quantum_space_generic(2).map_err(|e| e.to_string())?);
    let r = dvp_check(&KoszulComplex::new(&qs), 8).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("generic quantum plane: {r:?}"))?;
    Ok("6 algebras to degree 8".into())
}

fn c6_warning() -> Check {
    let a = Algebra::new(polynomial(2).map_err(|e| e.to_string())?);
    let b = ManinBialgebra::new(&a).map_err(|e| e.to_string())?;
    let (za, zb, zc, zd) = (0usize, 1usize, 2usize, 3usize);
    let v = |terms: &[(usize, usize, i64)]| SparseVec::from_pairs(terms.iter().map(|&(x, y, c)| (x * 4 + y, q(c))));
    let expected = Subspace::span(
        16,
        [
            v(&[(za, zc, 1), (zc, za, -1)]),
            v(&[(zb, zd, 1), (zd, zb, -1)]),
            v(&[(za, zd, 1), (zd, za, -1), (zc, zb, -1), (zb, zc, 1)]),
        ],
    );
    ensure(*b.end().relation_space() == expected, || "relation spans differ".into())?;
    let dim = b.end().dim_component(2).map_err(|e| e.to_string())?;
    ensure(dim == 13, || format!("dim end(A)_2 = {dim}"))?;
    Ok("relations span {ac-ca, bd-db, ad-da-cb+bc}; dim end(A)_2 = 13".into())
}

fn c7_kmt() -> Check {
    let p = Algebra::new(polynomial(2).unwrap());
    let anti = Algebra::new(antisymmetrizer(3, 3).unwrap());
    for a in [&p, &anti] {
        let r = ManinBialgebra::new(a).and_then(|b| b.kmt_check(4)).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{}: {:?} {:?}", a.label(), r.first_failure, r.counit_mismatches))?;
    }
    let qs = Algebra::new(quantum_space_generic(2).unwrap());
    let r = ManinBialgebra::new(&qs).and_then(|b| b.kmt_check(4)).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("generic quantum plane: {:?} {:?}", r.first_failure, r.counit_mismatches))?;
    Ok("poly(2), antisym(3,3), generic quantum plane to degree 4; counit∘χ = dim".into())
}

fn c8_bos_ferm() -> Check {
    let a = Algebra::new(polynomial(2).unwrap());
    let b = ManinBialgebra::new(&a).map_err(|e| e.to_string())?;
    let r = b.bos_ferm(4).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("{r:?}"))?;
    let passing: Vec<DeterminantConvention> = r.conventions.iter().filter(|c| c.passed).map(|c| c.convention).collect();
    let which = match passing.as_slice() {
        [DeterminantConvention::ColumnAscending] => "column-ascending z_{σ(j1)}^{j1}…",
        [DeterminantConvention::RowAscending] => "row-ascending z_{j1}^{σ(j1)}…",
        _ => return Err(format!("expected exactly one passing convention, got {passing:?}")),
    };
    Ok(format!("Bos = χ(A), Ferm = χ(J) to degree 4 under {which} only"))
}

/// `det(I - ZT)` by the Leibniz formula.
fn leibniz_det(z: &NumericMatrix) -> MPoly<Rational> {
    let n = z.n();
    let entry = |i: usize, j: usize| {
        let id = if i == j { MPoly::one() } else { MPoly::zero() };
        id.sub(&MPoly::var(j).scale(z.get(i, j)))
    };
    let mut total = MPoly::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let term = (0..n).fold(MPoly::one(), |acc, i| acc.mul(&entry(i, p[i])));
        total = if inversions % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn c9_mmt() -> Check {
    let mut matrices = vec![("zero", NumericMatrix::zero(3)), ("identity", NumericMatrix::identity(3)), ("ones", NumericMatrix::ones(3))];
    matrices.extend((1..=5).map(|s| ("random", NumericMatrix::random(3, s))));
    for (name, z) in &matrices {
        ensure(det_i_minus_zt(z) == leibniz_det(z), || format!("{name}: determinant oracle"))?;
        let r = mmt_check(z, 6).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{name}: {:?}", r.first_mismatch))?;
    }
    let p = Algebra::new(polynomial(3).unwrap());
    let g = GTable::new(&p, NumericMatrix::ones(3)).map_err(|e| e.to_string())?;
    for k in 0..=6 {
        let total = g.all_of_length(k).map_err(|e| e.to_string())?.into_iter().fold(q(0), |acc, (_, v)| acc + v);
        ensure(total == q(3i64.pow(k as u32)), || format!("ones: Σ G at k={k} is {total}"))?;
    }
    Ok("Z = 0, I, ones and 5 seeded 3x3 matrices to degree 6".into())
}

fn c10_nmt() -> Check {
    let mut matrices = vec![NumericMatrix::identity(3)];
    matrices.extend((1..=5).map(|s| NumericMatrix::random(3, s)));
    for z in &matrices {
        let r = nmt_check(3, z, 6).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("N=3 {:?}: {:?}", z, r.first_mismatch))?;
    }
    for z in &matrices {
        ensure(signed_minor_polynomial(z, 2) == det_i_minus_zt(z), || "N=2 denominator differs".into())?;
        let (a, b) = (nmt_check(2, z, 4).map_err(|e| e.to_string())?, mmt_check(z, 4).map_err(|e| e.to_string())?);
        ensure(a.passed && b.passed && a.denominator == b.denominator, || "N=2 does not coincide with MMT".into())?;
    }
    Ok("n=3, N=3: Z = I and 5 seeded matrices to degree 6; N=2 coincides with the MMT".into())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(0.4) { q(rng.gen_range(-3..=3)) } else { q(0) }).collect())
        .collect()
}

fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].inv().unwrap();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() * &inv;
                for k in 0..cols {
                    let sub = f.clone() * &m[rank][k];
                    m[r][k] -= &sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> SparseVec<Rational> {
    let mut pairs = Vec::new();
    for i in 0..len {
        if rng.gen_bool(0.3) {
            pairs.push((i, q(rng.gen_range(-4..=4))));
        }
    }
    SparseVec::from_pairs(pairs)
}

fn c11_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let (rows, cols) = (rng.gen_range(1..9), rng.gen_range(1..9));
        let dense = random_matrix(&mut rng, rows, cols);
        let m = Matrix::from_dense(&dense);
        let r = m.rank();
        ensure(r == dense_rank(dense) && r + kernel(&m).dim() == cols, || "rank-nullity".into())?;
        let u = Subspace::span(8, (0..rng.gen_range(0..6)).map(|_| random_vec(&mut rng, 8)));
        let w = Subspace::span(8, (0..rng.gen_range(0..6)).map(|_| random_vec(&mut rng, 8)));
        let (s, i) = (u.sum(&w).unwrap(), u.intersect(&w).unwrap());
        ensure(s.dim() + i.dim() == u.dim() + w.dim(), || "Grassmann".into())?;
    }
    let algebras = vec![
        Algebra::new(polynomial(3).unwrap()),
        Algebra::new(antisymmetrizer(3, 3).unwrap()),
        Algebra::new(quantum_space(3, |i, j| q((i + 2 * j + 1) as i64), "q").unwrap()),
    ];
    for a in &algebras {
        for d in 0..=4 {
            let amb = a.ambient(d).unwrap();
            let ideal = a.ideal_component(d).unwrap();
            for _ in 0..5 {
                let v = random_vec(&mut rng, amb);
                let mut shifted = v.clone();
                for b in ideal.basis().iter().take(3) {
                    shifted = shifted.axpy(&q(rng.gen_range(-5..=5)), b);
                }
                ensure(a.reduce_vec(d, &v).unwrap() == a.reduce_vec(d, &shifted).unwrap(), || {
                    format!("{}: reduction depends on representative", a.label())
                })?;
            }
        }
        for _ in 0..10 {
            let degs: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let cls: Vec<_> = degs
                .iter()
                .map(|&d| a.reduce_vec(d, &random_vec(&mut rng, a.ambient(d).unwrap())).unwrap())
                .collect();
            let left = a.multiply(&a.multiply(&cls[0], &cls[1]).unwrap(), &cls[2]).unwrap();
            let right = a.multiply(&cls[0], &a.multiply(&cls[1], &cls[2]).unwrap()).unwrap();
            ensure(left == right, || format!("{}: associativity", a.label()))?;
        }
        let k = KoszulComplex::new(a);
        let big_n = a.relation_degree();
        for m in 1..=6 {
            for s in [1, big_n - 1] {
                if s <= m {
                    k.check_inclusion(m, s).map_err(|e| format!("{}: {e}", a.label()))?;
                }
            }
        }
    }
    let qs = Algebra::new(quantum_space(2, |_, _| q(2), "q=2").unwrap());
    ensure(!check_specializable(&qs, &NumericMatrix::ones(2)).unwrap(), || "ones accepted".into())?;
    for s in 1..=5 {
        ensure(!check_specializable(&qs, &NumericMatrix::random(2, s)).unwrap(), || format!("seed {s} accepted"))?;
    }
    Ok("rank-nullity, Grassmann, representative independence, associativity, J inclusions, specializability guard".into())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("binomial identity n<=6, m<=10", Duration::from_secs(1), c1_eq1),
        ("antisymmetrizer dual dimensions", Duration::from_secs(60), c2_dual_dims),
        ("admissible-count identity", Duration::from_secs(120), c3_admissible),
        ("Koszulity certificates", Duration::from_secs(300), c4_certificates),
        ("Hilbert-series duality", Duration::from_secs(60), c5_dvp),
        ("end(A) relations for S(V), n=2", Duration::from_secs(1), c6_warning),
        ("Koszul Master Theorem in end(A)", Duration::from_secs(600), c7_kmt),
        ("Bos/Ferm cross-check", Duration::from_secs(60), c8_bos_ferm),
        ("MacMahon Master Theorem", Duration::from_secs(120), c9_mmt),
        ("N-analog of the Master Theorem", Duration::from_secs(300), c10_nmt),
        ("property suites", Duration::from_secs(120), c11_properties),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget {budget:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {:>2}: {} {name} [{:.2?}] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
