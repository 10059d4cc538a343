use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use nkoszul_core::builtins::{
    antisymmetrizer, dual_dims_closed_form, free, polynomial, quantum_space, quantum_space_generic,
};
use nkoszul_core::koszul::{admissible_identity_check, dvp_check, identity_eq1};
use nkoszul_core::mmt::{mmt_check, nmt_check, MasterTheoremReport};
use nkoszul_core::{Algebra, AlgebraPresentation, Field, KoszulComplex, ManinBialgebra, NumericMatrix, ParamFraction, Rational};

use crate::{AlgebraArgs, Command, DegreeArgs, Eq1Args, InfoArgs, KmtArgs, MatrixArgs, MatrixKind};

/// Default bound on `n^{2D}` for `kmt-check`.
pub const DEFAULT_MAX_AMBIENT: u128 = 10_000_000;
pub const MAX_AMBIENT_ENV: &str = "KOSZUL_MAX_AMBIENT";

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<nkoszul_core::Error> for CliError {
    fn from(e: nkoszul_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

/// Result of one command: verdict (`None` for informational commands), the
/// JSON payload and the text rendering.
pub struct Outcome {
    pub holds: Option<bool>,
    pub truncation: Option<u64>,
    pub result: Value,
    pub text: Vec<String>,
}

pub fn envelope(command: &Command, outcome: &Outcome) -> Value {
    json!({
        "tool": "nkoszul",
        "version": env!("CARGO_PKG_VERSION"),
        "config": command,
        "truncation": outcome.truncation,
        "verdict": match outcome.holds {
            Some(true) => "holds",
            Some(false) => "violated",
            None => "info",
        },
        "result": outcome.result,
    })
}

enum AnyAlgebra {
    Rational(Algebra<Rational>),
    Generic(Algebra<ParamFraction>),
}

macro_rules! with_algebra {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            AnyAlgebra::Rational($a) => $body,
            AnyAlgebra::Generic($a) => $body,
        }
    };
}

fn build(args: &AlgebraArgs) -> CliResult<AnyAlgebra> {
    let presentation = match args.algebra.as_str() {
        "poly" => polynomial(args.n)?,
        "antisym" => antisymmetrizer(args.n, args.big_n)?,
        "free" => free(args.n, args.big_n)?,
        "qspace" => match &args.q {
            None => return Ok(AnyAlgebra::Generic(Algebra::new(quantum_space_generic(args.n)?))),
            Some(text) => {
                let q: Rational = text.parse()?;
                quantum_space(args.n, |_, _| q.clone(), format!("qspace(n={},q={q})", args.n))?
            }
        },
        other => match other.strip_prefix("file:") {
            Some(path) => AlgebraPresentation::from_json(&std::fs::read_to_string(path)?)?,
            None => return Err(usage(format!("unknown algebra '{other}' (poly, antisym, qspace, free, file:<path>)"))),
        },
    };
    Ok(AnyAlgebra::Rational(Algebra::new(presentation)))
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Hilbert(a) => with_algebra!(&build(&a.algebra)?, alg => hilbert(alg, a)),
        Command::DualDims(a) => with_algebra!(&build(&a.algebra)?, alg => dual_dims(alg, a)),
        Command::Admissible(a) => {
            let r = admissible_identity_check(a.n, a.big_n, a.max_degree)?;
            let mut text = vec![
                format!("L(n={},N={},k), k=0..{}: {}", a.n, a.big_n, a.max_degree, r.counts.join(" ")),
                format!("series inverse:          {}", r.inverse_coefficients.join(" ")),
                format!(
                    "alternating polynomial: {} (degree {}, last term ℓ={}, expected ℓ={})",
                    r.polynomial_terms.iter().map(|(_, v, c)| format!("{c}t^{v}")).collect::<Vec<_>>().join(" "),
                    r.polynomial_degree,
                    r.last_term_index,
                    r.expected_last_term_index
                ),
            ];
            text.push(verdict_line(r.passed, r.first_failure.map(|k| format!("first mismatch at k={k}"))));
            Ok(Outcome { holds: Some(r.passed), truncation: Some(a.max_degree as u64), result: json!(r), text })
        }
        Command::KoszulCheck(a) => with_algebra!(&build(&a.algebra)?, alg => koszul_check(alg, a)),
        Command::DvpCheck(a) => with_algebra!(&build(&a.algebra)?, alg => dvp(alg, a)),
        Command::KmtCheck(a) => {
            guardrail(a)?;
            with_algebra!(&build(&a.degree.algebra)?, alg => kmt(alg, a))
        }
        Command::Mmt(a) => {
            let z = matrix(a)?;
            master_outcome(mmt_check(&z, a.max_degree)?)
        }
        Command::Nmt(a) => {
            let z = matrix(a)?;
            master_outcome(nmt_check(a.big_n, &z, a.max_degree)?)
        }
        Command::Eq1(a) => eq1(a),
        Command::Info(a) => with_algebra!(&build(&a.algebra)?, alg => info(alg, a)),
    }
}

fn verdict_line(passed: bool, failure: Option<String>) -> String {
    match (passed, failure) {
        (true, _) => "verdict: holds".into(),
        (false, Some(f)) => format!("verdict: violated ({f})"),
        (false, None) => "verdict: violated".into(),
    }
}

fn hilbert<F: Field>(alg: &Algebra<F>, a: &DegreeArgs) -> CliResult<Outcome> {
    let dims = (0..=a.max_degree).map(|d| alg.dim_component(d)).collect::<Result<Vec<_>, _>>()?;
    let text = vec![
        format!("{}: dim A_d for d=0..{}", alg.label(), a.max_degree),
        dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
    ];
    Ok(Outcome {
        holds: None,
        truncation: Some(a.max_degree as u64),
        result: json!({ "algebra": alg.label(), "dims": dims }),
        text,
    })
}

/// Largest `V^{⊗m}` for which the dual algebra is also built directly.
const DUAL_ENGINE_CROSSCHECK: usize = 1 << 16;

fn dual_dims<F: Field>(alg: &Algebra<F>, a: &DegreeArgs) -> CliResult<Outcome> {
    let k = KoszulComplex::new(alg);
    let dual = Algebra::new(alg.dual());
    let closed_form = a.algebra.algebra == "antisym";
    let mut rows = Vec::new();
    let mut ok = true;
    let mut text = vec![format!("{}: dim A^!_m for m=0..{}", alg.label(), a.max_degree)];
    for m in 0..=a.max_degree {
        let dim = k.dual_dim(m)?;
        let engine = match alg.ambient(m) {
            Ok(amb) if amb <= DUAL_ENGINE_CROSSCHECK => Some(dual.dim_component(m)?),
            _ => None,
        };
        let expected = closed_form.then(|| dual_dims_closed_form(alg.n(), alg.relation_degree(), m).to_string());
        let row_ok = engine.is_none_or(|e| e == dim) && expected.as_ref().is_none_or(|e| *e == dim.to_string());
        ok &= row_ok;
        text.push(format!(
            "m={m}: {dim}{}{}{}",
            engine.map(|e| format!("  dual engine {e}")).unwrap_or_default(),
            expected.as_ref().map(|e| format!("  closed form {e}")).unwrap_or_default(),
            if row_ok { "" } else { "  MISMATCH" }
        ));
        rows.push(json!({ "m": m, "dim": dim, "dual_engine": engine, "closed_form": expected, "ok": row_ok }));
    }
    text.push(verdict_line(ok, None));
    Ok(Outcome {
        holds: Some(ok),
        truncation: Some(a.max_degree as u64),
        result: json!({ "algebra": alg.label(), "dims": rows }),
        text,
    })
}

fn koszul_check<F: Field>(alg: &Algebra<F>, a: &DegreeArgs) -> CliResult<Outcome> {
    if a.max_degree == 0 {
        return Err(usage("koszul-check needs --max-degree >= 1"));
    }
    let cert = KoszulComplex::new(alg).certificate(a.max_degree)?;
    let mut text = vec![format!("{}: Koszul complex by total degree", alg.label())];
    for d in &cert.degrees {
        let list = |f: &dyn Fn(&nkoszul_core::koszul::HomologyEntry) -> usize| {
            d.entries.iter().map(|e| f(e).to_string()).collect::<Vec<_>>().join(",")
        };
        text.push(format!(
            "m={}: dims [{}] ranks [{}] homology [{}]{}",
            d.total_degree,
            list(&|e| e.dim),
            list(&|e| e.rank),
            list(&|e| e.homology),
            if d.d_squared_zero { "" } else { " d∘d≠0" }
        ));
    }
    text.push(format!("{}: {}", if cert.passed { "verdict: holds" } else { "verdict: violated" }, cert.verdict));
    Ok(Outcome { holds: Some(cert.passed), truncation: Some(a.max_degree as u64), result: json!(cert), text })
}

fn dvp<F: Field>(alg: &Algebra<F>, a: &DegreeArgs) -> CliResult<Outcome> {
    let r = dvp_check(&KoszulComplex::new(alg), a.max_degree)?;
    let text = vec![
        format!("{}: H_A(t) = {}", alg.label(), r.hilbert.join(" ")),
        format!("dual series     = {}", r.dual_series.join(" ")),
        format!("product         = {}", r.product.join(" ")),
        verdict_line(r.passed, r.first_failure.map(|d| format!("first nonzero coefficient at degree {d}"))),
    ];
    Ok(Outcome { holds: Some(r.passed), truncation: Some(a.max_degree as u64), result: json!(r), text })
}

fn guardrail(a: &KmtArgs) -> CliResult<()> {
    if a.allow_large {
        return Ok(());
    }
    let limit = match std::env::var(MAX_AMBIENT_ENV) {
        Ok(v) => v.parse::<u128>().map_err(|_| usage(format!("{MAX_AMBIENT_ENV} must be a nonnegative integer")))?,
        Err(_) => DEFAULT_MAX_AMBIENT,
    };
    let n = a.degree.algebra.n as u128;
    let ambient = n.checked_pow(2 * a.degree.max_degree as u32).unwrap_or(u128::MAX);
    if ambient > limit {
        return Err(usage(format!(
            "end(A) in degree {} has ambient dimension n^(2D) = {ambient} > {limit}; \
             raise {MAX_AMBIENT_ENV} or pass --allow-large",
            a.degree.max_degree
        )));
    }
    Ok(())
}

fn kmt<F: Field>(alg: &Algebra<F>, a: &KmtArgs) -> CliResult<Outcome> {
    let d = a.degree.max_degree;
    let b = ManinBialgebra::new(alg)?;
    let r = b.kmt_check(d)?;
    let mut holds = r.passed;
    let mut text = vec![format!("{}: end(A) has {} relations", alg.label(), b.end().relation_space().dim())];
    for (k, c) in r.chi_a.iter().enumerate() {
        text.push(format!("chi(A_{k}): {} terms", c.terms.len()));
    }
    for c in &r.chi_j {
        text.push(format!("chi(J_{}): {} terms", c.degree, c.terms.len()));
    }
    text.extend(r.counit_mismatches.iter().cloned());
    let mut result = json!({ "kmt": r });
    if b.is_polynomial() {
        let bf = b.bos_ferm(d)?;
        holds &= bf.passed;
        text.push(format!(
            "Bos = chi(A): {}; passing determinant convention: {}",
            bf.bos_matches_chi,
            bf.passing_convention.map_or("none unique".to_string(), |c| format!("{c:?}"))
        ));
        result["bos_ferm"] = json!(bf);
    }
    text.push(verdict_line(holds, r.first_failure.map(|k| format!("product coefficient nonzero at degree {k}"))));
    Ok(Outcome { holds: Some(holds), truncation: Some(d as u64), result, text })
}

fn matrix(a: &MatrixArgs) -> CliResult<NumericMatrix> {
    let z = if let Some(path) = &a.matrix {
        NumericMatrix::from_json(&std::fs::read_to_string(path)?)?
    } else if let Some(text) = &a.matrix_inline {
        NumericMatrix::from_json(text)?
    } else if let Some(kind) = a.matrix_kind {
        match kind {
            MatrixKind::Identity => NumericMatrix::identity(a.n),
            MatrixKind::Zero => NumericMatrix::zero(a.n),
            MatrixKind::Ones => NumericMatrix::ones(a.n),
        }
    } else if let Some(seed) = a.random_seed {
        NumericMatrix::random(a.n, seed)
    } else {
        return Err(usage("a matrix source is required (--matrix, --matrix-inline, --matrix-kind or --random-seed)"));
    };
    if z.n() != a.n {
        return Err(usage(format!("matrix is {0}x{0} but --n is {1}", z.n(), a.n)));
    }
    Ok(z)
}

fn master_outcome(r: MasterTheoremReport) -> CliResult<Outcome> {
    let mut text = vec![format!("n={}, N={}: denominator {}", r.n, r.big_n, r.denominator)];
    for row in r.matrix.entries() {
        text.push(format!("  [{}]", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    }
    text.push(format!("coefficients compared to total degree {}: {}", r.max_degree, r.terms_compared));
    text.push(verdict_line(
        r.passed,
        r.first_mismatch.as_ref().map(|m| format!("t^{:?}: lhs {} rhs {}", m.monomial, m.lhs, m.rhs)),
    ));
    Ok(Outcome { holds: Some(r.passed), truncation: Some(r.max_degree as u64), result: json!(r), text })
}

fn eq1(a: &Eq1Args) -> CliResult<Outcome> {
    if a.n == 0 {
        return Err(usage("eq1 needs --n >= 1"));
    }
    let values: Vec<String> = (1..=a.max_degree).map(|m| identity_eq1(a.n, m).to_string()).collect();
    let first = values.iter().position(|v| v != "0").map(|i| i + 1);
    let text = vec![
        format!("n={}: sums for m=1..{}: {}", a.n, a.max_degree, values.join(" ")),
        verdict_line(first.is_none(), first.map(|m| format!("nonzero at m={m}"))),
    ];
    Ok(Outcome {
        holds: Some(first.is_none()),
        truncation: Some(a.max_degree),
        result: json!({ "n": a.n, "values": values, "first_failure": first }),
        text,
    })
}

fn info<F: Field + Serialize>(alg: &Algebra<F>, a: &InfoArgs) -> CliResult<Outcome> {
    let p = alg.presentation();
    let r = alg.relation_space().dim();
    let total = alg.ambient(alg.relation_degree())?;
    let mut text = vec![
        format!("{}: n={}, N={}", alg.label(), alg.n(), alg.relation_degree()),
        format!("dim R = {r}, dim R^⊥ = {}", total - r),
    ];
    text.extend(p.relations.iter().map(|t| format!("  {t}")));
    let mut result = json!({
        "algebra": alg.label(),
        "n": alg.n(),
        "N": alg.relation_degree(),
        "relation_dim": r,
        "dual_relation_dim": total - r,
        "relations": p.relations.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    if a.presentation {
        let dual = alg.dual();
        result["presentation"] = json!(p);
        result["dual_presentation"] = json!(dual);
        text.push(serde_json::to_string(p).map_err(|e| usage(e.to_string()))?);
        text.push(serde_json::to_string(&dual).map_err(|e| usage(e.to_string()))?);
    }
    Ok(Outcome { holds: None, truncation: None, result, text })
}
