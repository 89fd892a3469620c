//! Corpus files and the per-pair verification matrix.
//!
//! One entry per line: `name ; polynomial ; group-spec [; key=value ...]`,
//! with `#` starting a comment. Recognized keys are `E` (an E-function in
//! canonical or pretty text form), `chi` and `var`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::basis::{self, loop_multiplicity};
use crate::group::{parse_group_spec, AbelianSubgroup};
use crate::poly::InvertiblePolynomial;
use crate::qexp::{c_hat, check_duality, steenbrink_identity_holds, BiExpPolynomial, HodgeTable};
use crate::series;
use crate::{Exec, Q};

/// The corpus shipped with the crate.
pub const BUNDLED: &str = include_str!("../corpus/default.corpus");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("corpus line {line}: {msg}")]
pub struct CorpusError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expectations {
    pub efunction: Option<BiExpPolynomial>,
    pub chi: Option<i64>,
    pub variance: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub poly: String,
    pub group: String,
    pub expectations: Expectations,
}

fn parse_rational(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?);
            (b != 0).then(|| Q::new(a, b))
        }
        None => s.trim().parse::<i64>().ok().map(Q::from_integer),
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CorpusError { line: i + 1, msg };
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() < 3 || fields[..3].iter().any(|f| f.is_empty()) {
            return Err(err("expected `name ; polynomial ; group-spec`".into()));
        }
        let mut expectations = Expectations::default();
        for kv in &fields[3..] {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{kv}`")))?;
            match k.trim() {
                "E" => {
                    let v = v.trim();
                    let e = if v.starts_with('[') {
                        serde_json::from_str(v)
                            .map_err(|e| err(format!("{e}")))
                            .and_then(|j| {
                                BiExpPolynomial::from_json(&j).map_err(|e| err(format!("{e}")))
                            })?
                    } else {
                        v.parse().map_err(|e| err(format!("{e}")))?
                    };
                    expectations.efunction = Some(e);
                }
                "chi" => {
                    expectations.chi = Some(
                        v.trim()
                            .parse()
                            .map_err(|_| err(format!("bad chi `{v}`")))?,
                    )
                }
                "var" => {
                    expectations.variance =
                        Some(parse_rational(v).ok_or_else(|| err(format!("bad var `{v}`")))?)
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        out.push(CorpusEntry {
            name: fields[0].into(),
            poly: fields[1].into(),
            group: fields[2].into(),
            expectations,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Not applicable to this pair.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "{}: PASS", self.name),
            Outcome::Skip => write!(f, "{}: n/a", self.name),
            Outcome::Fail(m) => write!(f, "{}: FAIL ({m})", self.name),
        }
    }
}

/// Check names in report order.
pub const CHECKS: &[&str] = &[
    "engines",
    "duality",
    "double-dual",
    "order",
    "sl-dual",
    "milnor",
    "psi",
    "parity",
    "sign-rule",
    "variance",
    "hodge-sym",
    "pairs",
    "steenbrink",
    "expect",
];

#[derive(Debug, Clone)]
pub struct EntryReport {
    pub name: String,
    pub poly: String,
    pub group: String,
    pub efunction: Option<BiExpPolynomial>,
    pub checks: Vec<Check>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn check(&self, name: &str) -> Option<&Outcome> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.outcome)
    }
}

fn verdict(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

/// Everything computed for one pair and its dual.
pub struct PairComputation {
    pub group: AbelianSubgroup,
    pub dual: AbelianSubgroup,
    pub e_basis: BiExpPolynomial,
    pub e_series: BiExpPolynomial,
    pub dual_basis: BiExpPolynomial,
    pub dual_series: BiExpPolynomial,
    pub table: HodgeTable,
    pub dual_table: HodgeTable,
}

impl PairComputation {
    pub fn new(group: AbelianSubgroup, exec: Exec) -> Result<Self, crate::Error> {
        let dual = group.dual();
        Ok(PairComputation {
            e_basis: basis::efunction_basis_with(&group, exec)?,
            e_series: series::efunction_series_with(&group, exec)?,
            dual_basis: basis::efunction_basis_with(&dual, exec)?,
            dual_series: series::efunction_series_with(&dual, exec)?,
            table: basis::hodge_table_with(&group, exec)?,
            dual_table: basis::hodge_table_with(&dual, exec)?,
            group,
            dual,
        })
    }
}

/// Runs the full verification matrix on one `(f, G)`.
pub fn verify_pair(
    group: &AbelianSubgroup,
    exp: &Expectations,
    exec: Exec,
) -> (Option<BiExpPolynomial>, Vec<Check>) {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, outcome: Outcome| checks.push(Check { name, outcome });
    let pc = match PairComputation::new(group.clone(), exec) {
        Ok(pc) => pc,
        Err(e) => {
            push("engines", Outcome::Fail(e.to_string()));
            return (None, checks);
        }
    };
    let f = group.ambient();
    let n = f.n();
    let ft = pc.dual.ambient();

    push(
        "engines",
        verdict(
            pc.e_basis == pc.e_series && pc.dual_basis == pc.dual_series,
            || {
                format!(
                    "basis {} vs series {}",
                    pc.e_basis.pretty(),
                    pc.e_series.pretty()
                )
            },
        ),
    );
    push(
        "duality",
        verdict(check_duality(&pc.e_basis, &pc.dual_basis, n), || {
            format!(
                "E(f,G) = {} but E(f~,G~) = {}",
                pc.e_basis.pretty(),
                pc.dual_basis.pretty()
            )
        }),
    );
    push(
        "double-dual",
        verdict(pc.dual.dual() == *group, || {
            "dual of the dual differs".into()
        }),
    );
    push(
        "order",
        verdict((group.order() * pc.dual.order()) as i64 == f.det(), || {
            format!(
                "|G| |G~| = {} * {} != det E = {}",
                group.order(),
                pc.dual.order(),
                f.det()
            )
        }),
    );
    push(
        "sl-dual",
        verdict(
            AbelianSubgroup::grading(f).dual() == AbelianSubgroup::special(ft),
            || "G0 dual is not G_f~ cap SL".into(),
        ),
    );

    let gf = AbelianSubgroup::maximal(f);
    let loci: BTreeSet<Vec<usize>> = gf.elements().iter().map(|g| g.fixed_indices()).collect();
    let milnor_bad: Vec<String> = loci
        .iter()
        .filter_map(|idx| match f.restrict(idx) {
            Ok(r) if basis::basis(&r).len() as u64 == r.milnor_number() => None,
            Ok(_) => Some(format!("basis count on {idx:?}")),
            Err(e) => Some(e.to_string()),
        })
        .collect();
    push(
        "milnor",
        verdict(milnor_bad.is_empty(), || milnor_bad.join("; ")),
    );

    let psi_bad = basis::psi_structure_violations(f);
    let psi_bad_dual = basis::psi_structure_violations(ft);
    push(
        "psi",
        verdict(psi_bad.is_empty() && psi_bad_dual.is_empty(), || {
            [psi_bad, psi_bad_dual].concat().join("; ")
        }),
    );

    let modes = pc.table.modes();
    push(
        "parity",
        if modes.any() {
            verdict(pc.table.parity_disjoint(), || {
                "a (p,q) carries both parities".into()
            })
        } else {
            Outcome::Skip
        },
    );
    push(
        "sign-rule",
        match modes.preferred() {
            None => Outcome::Skip,
            Some(mode) => match pc.table.to_efunction(mode) {
                Ok(e) if e == pc.e_basis => match HodgeTable::from_efunction(&e, n, mode, modes) {
                    Ok(t) if t == pc.table => Outcome::Pass,
                    Ok(_) => Outcome::Fail("table not recovered from E".into()),
                    Err(err) => Outcome::Fail(err.to_string()),
                },
                Ok(e) => Outcome::Fail(format!("signed table gives {}", e.pretty())),
                Err(err) => Outcome::Fail(err.to_string()),
            },
        },
    );
    push(
        "variance",
        if modes.contains_g0 {
            let chi = pc.e_basis.chi();
            match (pc.table.variance(), pc.table.mean()) {
                (Ok(var), Ok(mean)) => {
                    let want = c_hat(f) * Q::new(chi, 12);
                    verdict(var == want && mean.is_zero(), || {
                        format!("Var = {var}, c_hat chi / 12 = {want}, mean = {mean}")
                    })
                }
                (Err(e), _) | (_, Err(e)) => Outcome::Fail(e.to_string()),
            }
        } else {
            Outcome::Skip
        },
    );
    push(
        "hodge-sym",
        if modes.in_sl {
            verdict(
                pc.table.reflected_hodge_numbers() == pc.dual_table.hodge_numbers(),
                || "h^{p,q}(f,G) != h^{n-p,q}(f~,G~)".into(),
            )
        } else {
            Outcome::Skip
        },
    );
    push("pairs", pair_checks(&pc));

    let trivial_e = basis::efunction_basis_with(&AbelianSubgroup::trivial(f), exec);
    let trivial_s = series::efunction_series_with(&AbelianSubgroup::trivial(f), exec);
    push(
        "steenbrink",
        match (trivial_e, trivial_s) {
            (Ok(e), Ok(s)) => verdict(
                steenbrink_identity_holds(f, &e) && steenbrink_identity_holds(f, &s),
                || format!("identity fails for E(f,{{1}}) = {}", e.pretty()),
            ),
            (Err(e), _) | (_, Err(e)) => Outcome::Fail(e.to_string()),
        },
    );

    let mut exp_bad = Vec::new();
    if let Some(e) = &exp.efunction {
        if *e != pc.e_basis {
            exp_bad.push(format!(
                "E = {} recorded {}",
                pc.e_basis.pretty(),
                e.pretty()
            ));
        }
    }
    if let Some(chi) = exp.chi {
        if chi != pc.e_basis.chi() {
            exp_bad.push(format!("chi = {} recorded {chi}", pc.e_basis.chi()));
        }
    }
    if let Some(v) = exp.variance {
        match pc.table.variance() {
            Ok(got) if got == v => {}
            Ok(got) => exp_bad.push(format!("Var = {got} recorded {v}")),
            Err(e) => exp_bad.push(e.to_string()),
        }
    }
    let any_exp = exp.efunction.is_some() || exp.chi.is_some() || exp.variance.is_some();
    push(
        "expect",
        if any_exp {
            verdict(exp_bad.is_empty(), || exp_bad.join("; "))
        } else {
            Outcome::Skip
        },
    );

    (Some(pc.e_basis), checks)
}

fn pair_checks(pc: &PairComputation) -> Outcome {
    let f = pc.group.ambient();
    let n = f.n();
    let (fwd, back) = match (basis::pair_table(&pc.group), basis::pair_table(&pc.dual)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(e.to_string()),
    };
    if back.transposed() != fwd {
        return Outcome::Fail("pair table of the dual pair is not the transpose".into());
    }
    for r in &fwd.rows {
        if r.g.n_fixed() % 2 != (n - r.gdual.n_fixed()) % 2 {
            return Outcome::Fail(format!("sign rule fails on ({}, {})", r.g, r.gdual));
        }
        let want = loop_multiplicity(f, &r.g, &r.gdual);
        if r.m_hat != want {
            return Outcome::Fail(format!(
                "m_hat({}, {}) = {} but 2^r = {want}",
                r.g, r.gdual, r.m_hat
            ));
        }
    }
    if fwd.efunction(n) != pc.e_basis {
        return Outcome::Fail("pair table does not reassemble E".into());
    }
    Outcome::Pass
}

/// Parses an entry and runs [`verify_pair`]; parse failures become a failing `parse` check.
pub fn run_entry(entry: &CorpusEntry, exec: Exec) -> EntryReport {
    let mut report = EntryReport {
        name: entry.name.clone(),
        poly: entry.poly.clone(),
        group: entry.group.clone(),
        efunction: None,
        checks: Vec::new(),
    };
    let group = entry
        .poly
        .parse::<InvertiblePolynomial>()
        .map_err(crate::Error::from)
        .and_then(|f| parse_group_spec(&f, &entry.group).map_err(crate::Error::from));
    match group {
        Ok(g) => {
            let (e, checks) = verify_pair(&g, &entry.expectations, exec);
            report.efunction = e;
            report.checks = checks;
        }
        Err(e) => report.checks.push(Check {
            name: "parse",
            outcome: Outcome::Fail(e.to_string()),
        }),
    }
    report
}

/// Runs every entry; reports come back in input order.
pub fn run_corpus(entries: &[CorpusEntry], exec: Exec) -> Vec<EntryReport> {
    exec.map(entries, |e| run_entry(e, exec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let text = "# comment\n\nx3 ; x^3 ; Gf ; E=(t*tb)^(-1/6) + (t*tb)^(1/6) ; chi=2\nf44 ; x^4 + y^4 ; 1/4(1,1) ; var=1/2  # trailing\n";
        let es = parse_corpus(text).unwrap();
        assert_eq!(es.len(), 2);
        assert_eq!(es[0].expectations.chi, Some(2));
        assert_eq!(es[1].group, "1/4(1,1)");
        assert_eq!(es[1].expectations.variance, Some(Q::new(1, 2)));
        assert!(parse_corpus("").unwrap().is_empty());
        assert_eq!(parse_corpus("a ; x^3").unwrap_err().line, 1);
        assert!(parse_corpus("a ; x^3 ; Gf ; foo=1").is_err());
    }

    #[test]
    fn json_expectation() {
        let e: BiExpPolynomial = "(t*tb)^(-1/6) + (t*tb)^(1/6)".parse().unwrap();
        let line = format!("x3 ; x^3 ; Gf ; E={}", e.to_json());
        let es = parse_corpus(&line).unwrap();
        assert_eq!(es[0].expectations.efunction, Some(e));
        assert!(run_entry(&es[0], Exec::Sequential).passed());
    }

    #[test]
    fn mismatched_expectation_fails() {
        let es = parse_corpus("bad ; x^3 ; Gf ; chi=5").unwrap();
        let r = run_entry(&es[0], Exec::Sequential);
        assert!(!r.passed());
        assert!(matches!(r.check("expect"), Some(Outcome::Fail(_))));
    }

    #[test]
    fn bad_input_fails_parse_check() {
        let es = parse_corpus("bad ; x^4 + y^4 + x*y ; Gf").unwrap();
        let r = run_entry(&es[0], Exec::Sequential);
        assert!(matches!(r.check("parse"), Some(Outcome::Fail(_))));
    }

    #[test]
    fn bundled_corpus_parses() {
        let es = parse_corpus(BUNDLED).unwrap();
        assert!(es.len() >= 25);
        for e in &es {
            let f: InvertiblePolynomial = e.poly.parse().unwrap();
            parse_group_spec(&f, &e.group).unwrap();
        }
    }
}
