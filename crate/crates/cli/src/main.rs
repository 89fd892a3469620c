use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbifold_core::basis::{efunction_basis, hodge_table, pair_table};
use orbifold_core::corpus::{self, Outcome};
use orbifold_core::group::{format_group_spec, grading_operator, parse_group_spec};
use orbifold_core::poly::parse_polynomial;
use orbifold_core::qexp::{c_hat, check_duality};
use orbifold_core::series::efunction_series;
use orbifold_core::{AbelianSubgroup, BiExpPolynomial, Error, Exec, InvertiblePolynomial, Q};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "orbifold",
    version,
    about = "Orbifold E-functions and mirror duality checks for invertible polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weights, atoms, Milnor number and symmetry group of a polynomial
    Info(PolyArgs),
    /// E-function of a pair (f, G)
    Efunction(PairArgs),
    /// Berglund-Hubsch transpose and dual group
    Dual(PairArgs),
    /// Verify E(f,G)(t,tb) = (-1)^n E(f~,G~)(1/t,tb)
    CheckDuality(PairArgs),
    /// Hodge table h^{p,q}(f,G) split by sector parity
    Hodge(PairArgs),
    /// Exponents, mean and variance (requires g0 in G)
    Variance(PairArgs),
    /// Pair decomposition table with multiplicities
    Pairs(PairArgs),
    /// Run the verification matrix over a corpus file
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial, e.g. "x^3*y + y^2"
    poly: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PairArgs {
    /// Polynomial, e.g. "x^4 + y^4"
    poly: String,
    /// trivial | Gf | G0 | SL | generators such as "1/4(1,1)"
    #[arg(long, default_value = "trivial")]
    group: String,
    /// Engine; defaults to `both` for check-duality and `basis` elsewhere
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file; the bundled corpus is used when omitted
    #[arg(long)]
    corpus_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Basis,
    Series,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Verification(_) => 4,
            e if e.is_parse() => 2,
            _ => 3,
        };
        Fail {
            code,
            msg: e.to_string(),
        }
    }
}

/// Output text plus exit code (0, or 4 for a failed check that still produced a report).
type Report = Result<(String, u8), Fail>;

fn load_poly(text: &str) -> Result<InvertiblePolynomial, Fail> {
    let (f, warnings) = parse_polynomial(text).map_err(Error::from)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(f)
}

fn load_pair(a: &PairArgs) -> Result<AbelianSubgroup, Fail> {
    let f = load_poly(&a.poly)?;
    Ok(parse_group_spec(&f, &a.group).map_err(Error::from)?)
}

fn compute_e(g: &AbelianSubgroup, engine: Engine) -> Result<BiExpPolynomial, Fail> {
    Ok(match engine {
        Engine::Basis => efunction_basis(g)?,
        Engine::Series => efunction_series(g)?,
        Engine::Both => {
            let (b, s) = (efunction_basis(g)?, efunction_series(g)?);
            if b != s {
                return Err(Error::Verification(format!(
                    "engines disagree: basis {} vs series {}",
                    b.pretty(),
                    s.pretty()
                ))
                .into());
            }
            b
        }
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn json_out(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json renders")
}

fn info(a: &PolyArgs) -> Report {
    let f = load_poly(&a.poly)?;
    let e = f.exponent_matrix();
    let atoms: Vec<String> = f.atoms().iter().map(|x| x.to_string()).collect();
    let gf = AbelianSubgroup::maximal(&f);
    let g0 = grading_operator(&f);
    let out = match a.format {
        Format::Json => json_out(json!({
            "polynomial": f.to_string(),
            "n": f.n(),
            "exponent_matrix": e.rows(),
            "det": f.det(),
            "atoms": atoms,
            "weights": f.q().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "milnor_number": f.milnor_number(),
            "gf_order": gf.order(),
            "g0": g0.to_string(),
            "c_hat": c_hat(&f).to_string(),
            "transpose": f.transpose().to_string(),
        })),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "polynomial: {f}").unwrap();
            writeln!(s, "n: {}", f.n()).unwrap();
            writeln!(s, "exponent matrix: {:?}", e.rows()).unwrap();
            writeln!(s, "det E: {}", f.det()).unwrap();
            writeln!(s, "atoms: {}", atoms.join(" + ")).unwrap();
            writeln!(s, "q = {}", list(f.q())).unwrap();
            writeln!(s, "mu = {}", f.milnor_number()).unwrap();
            writeln!(s, "|G_f| = {}", gf.order()).unwrap();
            writeln!(s, "g0 = {g0}").unwrap();
            writeln!(s, "c_hat = {}", c_hat(&f)).unwrap();
            write!(s, "transpose: {}", f.transpose()).unwrap();
            s
        }
    };
    Ok((out, 0))
}

fn efunction(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let engine = a.engine.unwrap_or(Engine::Basis);
    let e = compute_e(&g, engine)?;
    let out = match a.format {
        Format::Json => json_out(json!({
            "polynomial": g.ambient().to_string(),
            "group": format_group_spec(&g),
            "canonical": e.to_string(),
            "terms": e.to_json(),
            "chi": e.chi(),
        })),
        Format::Text => e.pretty(),
    };
    Ok((out, 0))
}

fn dual(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let d = g.dual();
    let out = match a.format {
        Format::Json => json_out(json!({
            "polynomial": g.ambient().to_string(),
            "group": format_group_spec(&g),
            "order": g.order(),
            "dual_polynomial": d.ambient().to_string(),
            "dual_group": format_group_spec(&d),
            "dual_order": d.order(),
        })),
        Format::Text => format!(
            "f~ = {}\nG~ = {}\n|G| = {}, |G~| = {}, det E = {}",
            d.ambient(),
            format_group_spec(&d),
            g.order(),
            d.order(),
            g.ambient().det()
        ),
    };
    Ok((out, 0))
}

fn check(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let engine = a.engine.unwrap_or(Engine::Both);
    let d = g.dual();
    let e = compute_e(&g, engine)?;
    let ed = compute_e(&d, engine)?;
    let ok = check_duality(&e, &ed, g.ambient().n());
    let out = match a.format {
        Format::Json => json_out(json!({
            "polynomial": g.ambient().to_string(),
            "group": format_group_spec(&g),
            "efunction": e.to_string(),
            "dual_polynomial": d.ambient().to_string(),
            "dual_group": format_group_spec(&d),
            "dual_efunction": ed.to_string(),
            "pass": ok,
        })),
        Format::Text => format!(
            "E(f,G)   = {}\nf~ = {}, G~ = {}\nE(f~,G~) = {}\nduality: {}",
            e.pretty(),
            d.ambient(),
            format_group_spec(&d),
            ed.pretty(),
            pass(ok)
        ),
    };
    Ok((out, if ok { 0 } else { 4 }))
}

fn hodge(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let t = hodge_table(&g)?;
    let modes = t.modes();
    let out = match a.format {
        Format::Json => json_out(json!({
            "n": t.n(),
            "in_sl": modes.in_sl,
            "contains_g0": modes.contains_g0,
            "entries": t.entries().iter().map(|(&(p, q), &(even, odd))| json!({
                "p": p.to_string(), "q": q.to_string(), "even": even, "odd": odd,
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!(
                "n = {}, G in SL: {}, g0 in G: {}\n",
                t.n(),
                modes.in_sl,
                modes.contains_g0
            );
            writeln!(s, "{:>6} {:>6} {:>6} {:>6}", "p", "q", "even", "odd").unwrap();
            for (&(p, q), &(even, odd)) in t.entries() {
                writeln!(
                    s,
                    "{:>6} {:>6} {:>6} {:>6}",
                    p.to_string(),
                    q.to_string(),
                    even,
                    odd
                )
                .unwrap();
            }
            s.trim_end().to_string()
        }
    };
    Ok((out, 0))
}

fn variance(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let f = g.ambient();
    let t = hodge_table(&g)?;
    let exps = t.exponents().map_err(Error::from)?;
    let mean = t.mean().map_err(Error::from)?;
    let var = t.variance().map_err(Error::from)?;
    let chi = efunction_basis(&g)?.chi();
    let want = c_hat(f) * Q::new(chi, 12);
    let ok = var == want && mean == Q::from_integer(0);
    let out = match a.format {
        Format::Json => json_out(json!({
            "exponents": exps.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "mean": mean.to_string(),
            "variance": var.to_string(),
            "c_hat": c_hat(f).to_string(),
            "chi": chi,
            "pass": ok,
        })),
        Format::Text => format!(
            "exponents: {}\nmean = {mean}\nVar = {var}\nc_hat = {}, chi = {chi}, c_hat*chi/12 = {want}\nvariance identity: {}",
            list(&exps),
            c_hat(f),
            pass(ok)
        ),
    };
    Ok((out, if ok { 0 } else { 4 }))
}

fn pairs(a: &PairArgs) -> Report {
    let g = load_pair(a)?;
    let table = pair_table(&g)?;
    let n = g.ambient().n();
    let ok = table.efunction(n) == efunction_basis(&g)?;
    let out = match a.format {
        Format::Json => json_out(json!({
            "rows": table.rows.iter().map(|r| json!({
                "g": r.g.to_string(), "gdual": r.gdual.to_string(), "m_hat": r.m_hat,
            })).collect::<Vec<_>>(),
            "reassembles": ok,
        })),
        Format::Text => {
            let mut s = String::new();
            for r in &table.rows {
                writeln!(s, "{}  {}  m = {}", r.g, r.gdual, r.m_hat).unwrap();
            }
            write!(s, "reassembles E: {}", pass(ok)).unwrap();
            s
        }
    };
    Ok((out, if ok { 0 } else { 4 }))
}

fn run_corpus(a: &CorpusArgs) -> Report {
    let text = match &a.corpus_file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Fail {
            code: 2,
            msg: format!("{}: {e}", p.display()),
        })?,
        None => corpus::BUNDLED.to_string(),
    };
    let entries = corpus::parse_corpus(&text).map_err(|e| Fail {
        code: 2,
        msg: e.to_string(),
    })?;
    if entries.is_empty() {
        eprintln!("warning: corpus has zero entries");
    }
    let reports = corpus::run_corpus(&entries, Exec::Parallel);
    let all = reports.iter().all(|r| r.passed());
    let out = match a.format {
        Format::Json => json_out(json!({
            "entries": reports.iter().map(|r| json!({
                "name": r.name,
                "polynomial": r.poly,
                "group": r.group,
                "pass": r.passed(),
                "efunction": r.efunction.as_ref().map(|e| e.to_string()),
                "checks": r.checks.iter().map(|c| (c.name.to_string(), match &c.outcome {
                    Outcome::Pass => json!("pass"),
                    Outcome::Skip => json!("n/a"),
                    Outcome::Fail(m) => json!({ "fail": m }),
                })).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
            "pass": all,
        })),
        Format::Text => {
            let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &reports {
                let marks: String = r
                    .checks
                    .iter()
                    .map(|c| match c.outcome {
                        Outcome::Pass => '+',
                        Outcome::Skip => '.',
                        Outcome::Fail(_) => 'X',
                    })
                    .collect();
                writeln!(s, "{} {:width$}  {marks}", pass(r.passed()), r.name).unwrap();
                for c in r
                    .checks
                    .iter()
                    .filter(|c| matches!(c.outcome, Outcome::Fail(_)))
                {
                    writeln!(s, "    {c}").unwrap();
                }
            }
            writeln!(s, "checks: {}", corpus::CHECKS.join(" ")).unwrap();
            write!(
                s,
                "{} of {} entries passed",
                reports.iter().filter(|r| r.passed()).count(),
                reports.len()
            )
            .unwrap();
            s
        }
    };
    Ok((out, if all { 0 } else { 4 }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Info(a) => info(a),
        Command::Efunction(a) => efunction(a),
        Command::Dual(a) => dual(a),
        Command::CheckDuality(a) => check(a),
        Command::Hodge(a) => hodge(a),
        Command::Variance(a) => variance(a),
        Command::Pairs(a) => pairs(a),
        Command::Corpus(a) => run_corpus(a),
    };
    match result {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes() {
        let parse: Fail = Error::from(parse_polynomial("x^").unwrap_err()).into();
        assert_eq!(parse.code, 2);
        let f: InvertiblePolynomial = "x^3".parse().unwrap();
        let domain: Fail = Error::from(parse_group_spec(&f, "1/2(1)").unwrap_err()).into();
        assert_eq!(domain.code, 3);
        let verify: Fail = Error::Verification("x".into()).into();
        assert_eq!(verify.code, 4);
    }

    #[test]
    fn both_engines_agree() {
        let f: InvertiblePolynomial = "x^3*y + y^2".parse().unwrap();
        let g = parse_group_spec(&f, "Gf").unwrap();
        let e = compute_e(&g, Engine::Both).ok().unwrap();
        assert_eq!(e.pretty(), "(t*tb)^(-1/3) + 2 + (t*tb)^(1/3)");
        assert_eq!(efunction_basis(&g).unwrap(), e);
    }
}
