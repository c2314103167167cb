//! Command-line front end: tables, verification reports, and plot-ready
//! numeric data for the symmetric q-orthogonal polynomial families.
//!
//! Exit status is 0 only when every requested check passes at the configured
//! tolerance; 1 on a failed check; 2 on usage or computation errors.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};
use qsturm::extended::{eigen_residuals, orthogonality_report};
use qsturm::families::{q_hermite_reduction_check, Family, FamilyId};
use qsturm::qcore::QContext;
use qsturm::sl_core::verify_orthogonality;
use qsturm::Error as CoreError;
use serde_json::{json, Map, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Cheb5q,
    Cheb6q,
    Qhermite,
}

impl FamilyArg {
    fn id(self) -> FamilyId {
        match self {
            FamilyArg::Cheb5q => FamilyId::Chebyshev5Q,
            FamilyArg::Cheb6q => FamilyId::Chebyshev6Q,
            FamilyArg::Qhermite => FamilyId::GenQHermite,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Polynomial family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Lattice base, 0 < q < 1
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Free parameter of the qhermite family (defaults to 0 there)
    #[arg(long)]
    p: Option<f64>,
    /// Largest polynomial degree
    #[arg(long, default_value_t = 8)]
    nmax: usize,
    /// Pass/fail tolerance for verification commands
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Working precision in bits; only 53 (IEEE double) is supported
    #[arg(long, default_value_t = 53)]
    precision: u32,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
#[command(name = "qsturm", version, about = "Tables and verification reports for symmetric q-orthogonal polynomial families")]
enum Cli {
    /// Emit monic coefficients, recurrence coefficients, eigenvalues, and
    /// squared norms for degrees up to nmax
    Table(Common),
    /// Verify pairwise orthogonality of the eigenfunctions and exit 0 iff
    /// the Gram matrix is diagonal at the tolerance
    Ortho {
        #[command(flatten)]
        common: Common,
        /// Deliberately mismatch the weight to confirm the check can fail
        #[arg(long)]
        negative_control: bool,
    },
    /// Evaluate the difference-equation residual of each eigenfunction
    Residual(Common),
    /// Emit the orthogonality weight on the geometric lattice
    Weights(Common),
    /// Compare recurrence coefficients and weights against their classical
    /// limits over a sweep of q near 1
    Limits(Common),
    /// Cross-check closed-form squared norms against the recurrence product
    Favard(Common),
    /// Fit the proportionality constants linking the qhermite family at
    /// p = 0 to the discrete q-Hermite I polynomials
    Reduce(Common),
}

impl Cli {
    fn common(&self) -> &Common {
        match self {
            Cli::Table(c)
            | Cli::Residual(c)
            | Cli::Weights(c)
            | Cli::Limits(c)
            | Cli::Favard(c)
            | Cli::Reduce(c) => c,
            Cli::Ortho { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Cli::Table(_) => "table",
            Cli::Ortho { .. } => "ortho",
            Cli::Residual(_) => "residual",
            Cli::Weights(_) => "weights",
            Cli::Limits(_) => "limits",
            Cli::Favard(_) => "favard",
            Cli::Reduce(_) => "reduce",
        }
    }
}

/// Column-ordered tabular payload shared by the CSV and JSON emitters.
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit(common: &Common, command: &str, table: &Table) -> std::io::Result<()> {
    let body = match common.format {
        FormatArg::Csv => {
            let mut s = table.columns.join(",");
            s.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        FormatArg::Json => {
            let mut config = Map::new();
            config.insert("command".into(), json!(command));
            config.insert(
                "family".into(),
                json!(common.family.id().as_str()),
            );
            config.insert("q".into(), json!(common.q));
            config.insert("p".into(), json!(common.p));
            config.insert("nmax".into(), json!(common.nmax));
            config.insert("tol".into(), json!(common.tol));
            config.insert("precision".into(), json!(common.precision));
            let records: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (c, v) in table.columns.iter().zip(row) {
                        obj.insert(c.clone(), v.clone());
                    }
                    Value::Object(obj)
                })
                .collect();
            let doc = json!({
                "schema": "qsturm/1",
                "config": Value::Object(config),
                "records": records,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
            s.push('\n');
            s
        }
    };
    match &common.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn effective_p(common: &Common) -> Option<f64> {
    if common.family == FamilyArg::Qhermite {
        Some(common.p.unwrap_or(0.0))
    } else {
        common.p
    }
}

fn build_family(common: &Common, ctx: &QContext) -> Result<Family, CoreError> {
    Family::new(common.family.id(), effective_p(common), ctx)
}

fn cmd_table(common: &Common) -> Result<(Table, bool), CoreError> {
    let ctx = QContext::with_q(common.q)?;
    let fam = build_family(common, &ctx)?;
    let mut columns = vec![
        "n".to_string(),
        "gamma".to_string(),
        "lambda".to_string(),
        "norm_square".to_string(),
    ];
    for k in 0..=common.nmax {
        columns.push(format!("c{k}"));
    }
    let mut rows = Vec::new();
    for n in 0..=common.nmax {
        let phi = fam.monic_from_recurrence(n);
        let mut row = vec![
            json!(n),
            if n == 0 { Value::Null } else { json!(fam.gamma(n)) },
            json!(fam.lambda(n)),
            json!(fam.norm_square(n)),
        ];
        for k in 0..=common.nmax {
            row.push(json!(phi.coeffs().get(k).copied().unwrap_or(0.0)));
        }
        rows.push(row);
    }
    Ok((Table { columns, rows }, true))
}

fn cmd_ortho(common: &Common, negative_control: bool) -> Result<(Table, bool), CoreError> {
    let ctx = QContext::with_q(common.q)?;
    let fam = build_family(common, &ctx)?;
    let rep = if negative_control {
        // wrong weight on purpose: orthogonality must not survive it
        let coeffs = fam.coefficients();
        let phis: Vec<_> = (0..=common.nmax)
            .map(|n| fam.monic_from_recurrence(n))
            .collect();
        let closures: Vec<_> = phis
            .iter()
            .map(|p| move |x: f64| p.eval(x))
            .collect();
        verify_orthogonality(
            &coeffs,
            |x| fam.starred_weight(x).map(|w| w * (1.0 + x * x)).unwrap_or(0.0),
            &closures,
            fam.alpha(),
            &ctx,
            common.tol,
        )?
    } else {
        orthogonality_report(&fam, common.nmax, common.tol)?
    };
    let columns = vec![
        "i".to_string(),
        "j".to_string(),
        "gram".to_string(),
        "normalized".to_string(),
    ];
    let mut rows = Vec::new();
    for i in 0..=common.nmax {
        for j in i..=common.nmax {
            let norm = (rep.gram[i][i] * rep.gram[j][j]).sqrt();
            let normalized = if i == j {
                Value::Null
            } else {
                json!(rep.gram[i][j].abs() / norm)
            };
            rows.push(vec![json!(i), json!(j), json!(rep.gram[i][j]), normalized]);
        }
    }
    let pass = rep.pass();
    eprintln!(
        "ortho: {} max_offdiag_rel={:.3e} boundary={:.3e} tol={:.0e}",
        if pass { "PASS" } else { "FAIL" },
        rep.max_offdiag_rel,
        rep.boundary_value,
        common.tol
    );
    Ok((Table { columns, rows }, pass))
}

fn cmd_residual(common: &Common) -> Result<(Table, bool), CoreError> {
    let ctx = QContext::with_q(common.q)?;
    let fam = build_family(common, &ctx)?;
    let res = eigen_residuals(fam.id(), fam.p(), common.q, common.nmax, 50);
    let columns = vec!["n".to_string(), "residual".to_string()];
    let rows = res
        .iter()
        .enumerate()
        .map(|(n, r)| vec![json!(n), json!(r)])
        .collect();
    let worst = res.iter().cloned().fold(0.0f64, f64::max);
    let pass = worst < common.tol;
    eprintln!(
        "residual: {} max={:.3e} tol={:.0e}",
        if pass { "PASS" } else { "FAIL" },
        worst,
        common.tol
    );
    Ok((Table { columns, rows }, pass))
}

fn cmd_weights(common: &Common) -> Result<(Table, bool), CoreError> {
    let ctx = QContext::with_q(common.q)?;
    let fam = build_family(common, &ctx)?;
    let columns = vec!["k".to_string(), "x".to_string(), "weight".to_string()];
    let mut rows = Vec::new();
    for k in 0..=40i32 {
        let x = fam.alpha() * common.q.powi(k);
        rows.push(vec![json!(k), json!(x), json!(fam.starred_weight(x)?)]);
    }
    Ok((Table { columns, rows }, true))
}

fn cmd_limits(common: &Common) -> Result<(Table, bool), CoreError> {
    let columns = vec![
        "q".to_string(),
        "quantity".to_string(),
        "n".to_string(),
        "x".to_string(),
        "value".to_string(),
        "target".to_string(),
        "deviation".to_string(),
        "supported".to_string(),
    ];
    let mut rows = Vec::new();
    for &q in &[1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4] {
        let ctx = QContext::new(q, 1e-12, 2_000_000)?;
        let fam = Family::new(common.family.id(), effective_p(common), &ctx)?;
        for n in 1..=common.nmax {
            let value = fam.gamma(n);
            let target = fam.gamma_limit(n);
            rows.push(vec![
                json!(q),
                json!("gamma"),
                json!(n),
                Value::Null,
                json!(value),
                json!(target),
                json!((value - target).abs()),
                json!(true),
            ]);
        }
        for &x in &[0.15, 0.3, 0.5, 0.7, 0.85, 1.25] {
            match fam.starred_weight(x) {
                Ok(value) => {
                    let target = fam.starred_weight_limit(x);
                    rows.push(vec![
                        json!(q),
                        json!("weight"),
                        Value::Null,
                        json!(x),
                        json!(value),
                        json!(target),
                        json!((value / target - 1.0).abs()),
                        json!(true),
                    ]);
                }
                Err(CoreError::OutOfSupport { .. }) => {
                    rows.push(vec![
                        json!(q),
                        json!("weight"),
                        Value::Null,
                        json!(x),
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        json!(false),
                    ]);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((Table { columns, rows }, true))
}

fn cmd_favard(common: &Common) -> Result<(Table, bool), CoreError> {
    let ctx = QContext::with_q(common.q)?;
    let fam = build_family(common, &ctx)?;
    let columns = vec![
        "n".to_string(),
        "gamma".to_string(),
        "gamma_product".to_string(),
        "norm_ratio".to_string(),
        "deviation".to_string(),
    ];
    let mut rows = Vec::new();
    let mut prod = 1.0f64;
    let mut worst = 0.0f64;
    for n in 1..=common.nmax {
        prod *= fam.gamma(n);
        let ratio = fam.norm_square_ratio(n);
        let dev = (ratio / prod - 1.0).abs();
        worst = worst.max(dev);
        rows.push(vec![
            json!(n),
            json!(fam.gamma(n)),
            json!(prod),
            json!(ratio),
            json!(dev),
        ]);
    }
    let pass = worst < common.tol;
    eprintln!(
        "favard: {} max deviation={:.3e} tol={:.0e}",
        if pass { "PASS" } else { "FAIL" },
        worst,
        common.tol
    );
    Ok((Table { columns, rows }, pass))
}

fn cmd_reduce(common: &Common) -> Result<(Table, bool), CoreError> {
    if common.family != FamilyArg::Qhermite {
        return Err(CoreError::InvalidParameter(
            "reduce applies to the qhermite family at p = 0".into(),
        ));
    }
    let ctx = QContext::with_q(common.q)?;
    let rep = q_hermite_reduction_check(common.nmax, &ctx)?;
    let columns = vec![
        "n".to_string(),
        "c".to_string(),
        "max_fit_dev".to_string(),
        "max_gamma_dev".to_string(),
    ];
    let rows = rep
        .c
        .iter()
        .enumerate()
        .map(|(n, c)| {
            vec![
                json!(n),
                json!(c),
                json!(rep.max_fit_dev),
                json!(rep.max_gamma_dev),
            ]
        })
        .collect();
    let worst = rep.max_fit_dev.max(rep.max_gamma_dev);
    let pass = worst < common.tol;
    eprintln!(
        "reduce: {} max deviation={:.3e} tol={:.0e}",
        if pass { "PASS" } else { "FAIL" },
        worst,
        common.tol
    );
    Ok((Table { columns, rows }, pass))
}

fn run(cli: &Cli) -> Result<(Table, bool), CoreError> {
    match cli {
        Cli::Table(c) => cmd_table(c),
        Cli::Ortho {
            common,
            negative_control,
        } => cmd_ortho(common, *negative_control),
        Cli::Residual(c) => cmd_residual(c),
        Cli::Weights(c) => cmd_weights(c),
        Cli::Limits(c) => cmd_limits(c),
        Cli::Favard(c) => cmd_favard(c),
        Cli::Reduce(c) => cmd_reduce(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common();
    if common.precision != 53 {
        eprintln!(
            "error: unsupported precision {} bits; only 53 (IEEE double) is available",
            common.precision
        );
        return ExitCode::from(2);
    }
    if !(common.q > 0.0 && common.q < 1.0) {
        eprintln!("error: q must lie strictly between 0 and 1, got {}", common.q);
        return ExitCode::from(2);
    }
    if common.tol <= 0.0 {
        eprintln!("error: tol must be positive, got {}", common.tol);
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok((table, pass)) => {
            if let Err(e) = emit(common, cli.name(), &table) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
