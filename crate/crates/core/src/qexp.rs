//! Fractional-exponent polynomials in `t, tb` and the invariants read off them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::InvertiblePolynomial;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QexpError {
    #[error("mode assumption violated: {0}")]
    ModeViolation(String),
    #[error("sign exponent at (p,q) = ({p},{q}) is not an integer")]
    NonIntegralSign { p: Q, q: Q },
    #[error("parity of (p,q) = ({p},{q}) disagrees with the sign rule")]
    ParityMismatch { p: Q, q: Q },
    #[error("cannot parse E-function: {0}")]
    Parse(String),
}

impl QexpError {
    pub fn is_parse(&self) -> bool {
        matches!(self, QexpError::Parse(_))
    }
}

/// Finite sum of `c * t^a * tb^b` with rational `a, b` and integer `c != 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BiExpPolynomial {
    terms: BTreeMap<(Q, Q), i64>,
}

impl BiExpPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e_t: Q, e_tbar: Q, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e_t, e_tbar, coeff);
        p
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(Q::zero(), Q::zero(), c)
    }

    pub fn add_term(&mut self, e_t: Q, e_tbar: Q, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry((e_t, e_tbar)).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&(e_t, e_tbar));
        }
    }

    /// Terms in lexicographic `(e_t, e_tbar)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Q, Q, i64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn coeff(&self, e_t: Q, e_tbar: Q) -> i64 {
        self.terms.get(&(e_t, e_tbar)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b, c) in other.terms() {
            self.add_term(a, b, c);
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        BiExpPolynomial {
            terms: self.terms.iter().map(|(&e, &c)| (e, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `t^a tb^b`.
    pub fn shift(&self, a: Q, b: Q) -> Self {
        BiExpPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y), &c)| ((x + a, y + b), c))
                .collect(),
        }
    }

    /// Substitutes `t -> t^{-1}`.
    pub fn invert_t(&self) -> Self {
        BiExpPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), &c)| ((-a, b), c))
                .collect(),
        }
    }

    /// Value at `t = tb = 1`.
    pub fn chi(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Text with `(t*tb)` and `(tb/t)` grouping, terms ordered by `(e_tbar, e_t)`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(Q, Q, i64)> = self.terms().collect();
        terms.sort_by_key(|x| (x.1, x.0));
        let mut out = String::new();
        for (i, (a, b, c)) in terms.into_iter().enumerate() {
            let factor = if a.is_zero() && b.is_zero() {
                String::new()
            } else if a == b {
                format!("(t*tb)^({a})")
            } else if a == -b {
                format!("(tb/t)^({b})")
            } else {
                format!("t^({a})*tb^({b})")
            };
            let mag = c.abs();
            let body = match (factor.is_empty(), mag) {
                (true, m) => m.to_string(),
                (false, 1) => factor,
                (false, m) => format!("{m}*{factor}"),
            };
            match (i, c < 0) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms()
            .map(|(a, b, c)| JsonTerm {
                t: a.to_string(),
                tbar: b.to_string(),
                coeff: c,
            })
            .collect();
        serde_json::to_value(terms).expect("terms serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, QexpError> {
        let terms: Vec<JsonTerm> =
            serde_json::from_value(v.clone()).map_err(|e| QexpError::Parse(e.to_string()))?;
        let mut p = Self::zero();
        for t in terms {
            p.add_term(parse_q(&t.t)?, parse_q(&t.tbar)?, t.coeff);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    t: String,
    tbar: String,
    coeff: i64,
}

fn parse_q(s: &str) -> Result<Q, QexpError> {
    let bad = || QexpError::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// Canonical form: `c * t^(a) * tb^(b)` terms in lexicographic `(a, b)` order.
impl fmt::Display for BiExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (a, b, c)) in self.terms().enumerate() {
            match (i, c < 0) {
                (0, _) => write!(f, "{c}")?,
                (_, false) => write!(f, " + {c}")?,
                (_, true) => write!(f, " - {}", -c)?,
            }
            write!(f, " * t^({a}) * tb^({b})")?;
        }
        Ok(())
    }
}

/// Accepts both the canonical and the pretty text forms.
impl FromStr for BiExpPolynomial {
    type Err = QexpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(QexpError::Parse("empty input".into()));
        }
        // Split into signed terms at top-level `+` / `-`.
        let mut pieces: Vec<(i64, String)> = Vec::new();
        let mut depth = 0i32;
        let mut sign = 1i64;
        let mut cur = String::new();
        for ch in src.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 => {
                    if !cur.is_empty() {
                        pieces.push((sign, std::mem::take(&mut cur)));
                        sign = 1;
                    }
                    if ch == '-' {
                        sign = -sign;
                    }
                    continue;
                }
                _ => {}
            }
            cur.push(ch);
        }
        if depth != 0 {
            return Err(QexpError::Parse("unbalanced parentheses".into()));
        }
        if cur.is_empty() {
            return Err(QexpError::Parse("dangling sign".into()));
        }
        pieces.push((sign, cur));

        let mut p = Self::zero();
        for (sign, term) in pieces {
            let (c, a, b) = parse_term(&term)?;
            p.add_term(a, b, sign * c);
        }
        Ok(p)
    }
}

fn parse_term(term: &str) -> Result<(i64, Q, Q), QexpError> {
    let bad = || QexpError::Parse(format!("bad term `{term}`"));
    let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
    let mut rest = &term[digits.len()..];
    let coeff: i64 = if digits.is_empty() {
        1
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let (mut a, mut b) = (Q::zero(), Q::zero());
    if !digits.is_empty() {
        rest = rest.strip_prefix('*').unwrap_or(rest);
    } else if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let (name, after) = if let Some(r) = rest.strip_prefix("(t*tb)") {
            ("tt", r)
        } else if let Some(r) = rest.strip_prefix("(tb/t)") {
            ("y", r)
        } else if let Some(r) = rest.strip_prefix("tb") {
            ("tb", r)
        } else if let Some(r) = rest.strip_prefix('t') {
            ("t", r)
        } else {
            return Err(bad());
        };
        let (e, after) = if let Some(r) = after.strip_prefix("^(") {
            let close = r.find(')').ok_or_else(bad)?;
            (parse_q(&r[..close])?, &r[close + 1..])
        } else if let Some(r) = after.strip_prefix('^') {
            let d: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            if d.is_empty() {
                return Err(bad());
            }
            (parse_q(&d)?, &r[d.len()..])
        } else {
            (Q::one(), after)
        };
        match name {
            "tt" => {
                a += e;
                b += e;
            }
            "y" => {
                a -= e;
                b += e;
            }
            "tb" => b += e,
            _ => a += e,
        }
        rest = after;
        if !rest.is_empty() {
            rest = rest.strip_prefix('*').ok_or_else(bad)?;
            if rest.is_empty() {
                return Err(bad());
            }
        }
    }
    Ok((coeff, a, b))
}

/// `P == (-1)^n * Q(t^{-1}, tb)`.
pub fn check_duality(p: &BiExpPolynomial, q: &BiExpPolynomial, n: usize) -> bool {
    let rhs = q.invert_t().scale(if n.is_multiple_of(2) { 1 } else { -1 });
    *p == rhs
}

/// Central charge `n - 2 sum q_i`.
pub fn c_hat(f: &InvertiblePolynomial) -> Q {
    let s: Q = f.q().iter().sum();
    Q::from_integer(f.n() as i64) - s * 2
}

/// Which of the two sign conventions apply to a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PairModes {
    /// `G` is contained in `SL(n)`.
    pub in_sl: bool,
    /// `G` contains the grading operator.
    pub contains_g0: bool,
}

impl PairModes {
    pub fn any(&self) -> bool {
        self.in_sl || self.contains_g0
    }

    pub fn supports(&self, mode: Mode) -> bool {
        match mode {
            Mode::Sl => self.in_sl,
            Mode::G0 => self.contains_g0,
        }
    }

    /// A mode that applies, preferring `G0`.
    pub fn preferred(&self) -> Option<Mode> {
        if self.contains_g0 {
            Some(Mode::G0)
        } else if self.in_sl {
            Some(Mode::Sl)
        } else {
            None
        }
    }
}

/// Sign convention: `(-1)^(p+q)` for `G` in `SL`, `(-1)^(q-p)` when `G` contains `G_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sl,
    G0,
}

impl Mode {
    fn sign_exponent(self, p: Q, q: Q) -> Result<i64, QexpError> {
        let s = match self {
            Mode::Sl => p + q,
            Mode::G0 => q - p,
        };
        if s.is_integer() {
            Ok(s.to_integer())
        } else {
            Err(QexpError::NonIntegralSign { p, q })
        }
    }
}

/// Orbifold Hodge dimensions split by sector parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeTable {
    n: usize,
    modes: PairModes,
    entries: BTreeMap<(Q, Q), (u64, u64)>,
}

impl HodgeTable {
    pub fn new(n: usize, modes: PairModes) -> Self {
        HodgeTable {
            n,
            modes,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> PairModes {
        self.modes
    }

    /// Adds `count` dimensions at `(p, q)` to the even or odd part.
    pub fn add(&mut self, p: Q, q: Q, odd: bool, count: u64) {
        if count == 0 {
            return;
        }
        let slot = self.entries.entry((p, q)).or_insert((0, 0));
        if odd {
            slot.1 += count;
        } else {
            slot.0 += count;
        }
    }

    pub fn merge(&mut self, other: &HodgeTable) {
        for (&(p, q), &(e, o)) in &other.entries {
            self.add(p, q, false, e);
            self.add(p, q, true, o);
        }
    }

    /// `(p, q) -> (dim_even, dim_odd)`.
    pub fn entries(&self) -> &BTreeMap<(Q, Q), (u64, u64)> {
        &self.entries
    }

    /// `h^{p,q} = dim_even + dim_odd`.
    pub fn hodge_numbers(&self) -> BTreeMap<(Q, Q), u64> {
        self.entries
            .iter()
            .map(|(&k, &(e, o))| (k, e + o))
            .collect()
    }

    /// No `(p, q)` carries both parities.
    pub fn parity_disjoint(&self) -> bool {
        self.entries.values().all(|&(e, o)| e == 0 || o == 0)
    }

    /// The E-function by definition: `sum (dim_even - dim_odd) t^(p-n/2) tb^(q-n/2)`.
    pub fn signed_efunction(&self) -> BiExpPolynomial {
        let half = Q::new(self.n as i64, 2);
        let mut out = BiExpPolynomial::zero();
        for (&(p, q), &(e, o)) in &self.entries {
            out.add_term(p - half, q - half, e as i64 - o as i64);
        }
        out
    }

    /// The E-function through the sign rule of the given mode.
    pub fn to_efunction(&self, mode: Mode) -> Result<BiExpPolynomial, QexpError> {
        self.require(mode)?;
        let half = Q::new(self.n as i64, 2);
        let mut out = BiExpPolynomial::zero();
        for (&(p, q), &(e, o)) in &self.entries {
            let s = mode.sign_exponent(p, q)?;
            let odd = s.rem_euclid(2) == 1;
            if (odd && e > 0) || (!odd && o > 0) {
                return Err(QexpError::ParityMismatch { p, q });
            }
            let h = (e + o) as i64;
            out.add_term(p - half, q - half, if odd { -h } else { h });
        }
        Ok(out)
    }

    /// Recovers the table from an E-function under a sign mode.
    pub fn from_efunction(
        e: &BiExpPolynomial,
        n: usize,
        mode: Mode,
        modes: PairModes,
    ) -> Result<Self, QexpError> {
        let mut table = HodgeTable::new(n, modes);
        table.require(mode)?;
        let half = Q::new(n as i64, 2);
        for (a, b, c) in e.terms() {
            let (p, q) = (a + half, b + half);
            let odd = mode.sign_exponent(p, q)?.rem_euclid(2) == 1;
            let h = if odd { -c } else { c };
            if h <= 0 {
                return Err(QexpError::ParityMismatch { p, q });
            }
            table.add(p, q, odd, h as u64);
        }
        Ok(table)
    }

    fn require(&self, mode: Mode) -> Result<(), QexpError> {
        if self.modes.supports(mode) {
            Ok(())
        } else {
            Err(QexpError::ModeViolation(match mode {
                Mode::Sl => "group is not contained in SL(n)".into(),
                Mode::G0 => "group does not contain the grading operator g0".into(),
            }))
        }
    }

    /// Exponent multiset: each `q` repeated `h^{p,q}` times, sorted.
    pub fn exponents(&self) -> Result<Vec<Q>, QexpError> {
        self.require(Mode::G0)?;
        let mut out = Vec::new();
        for (&(_, q), &(e, o)) in &self.entries {
            out.extend(std::iter::repeat_n(q, (e + o) as usize));
        }
        out.sort();
        Ok(out)
    }

    fn signed_moment(&self, k: u32) -> Result<Q, QexpError> {
        self.require(Mode::G0)?;
        let half = Q::new(self.n as i64, 2);
        let mut acc = Q::zero();
        for (&(p, q), &(e, o)) in &self.entries {
            let s = Mode::G0.sign_exponent(p, q)?;
            let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
            acc += num_traits::pow(q - half, k as usize) * ((e + o) as i64 * sign);
        }
        Ok(acc)
    }

    /// `sum (-1)^(q-p) (q - n/2) h^{p,q}`.
    pub fn mean(&self) -> Result<Q, QexpError> {
        self.signed_moment(1)
    }

    /// `sum (-1)^(q-p) (q - n/2)^2 h^{p,q}`.
    pub fn variance(&self) -> Result<Q, QexpError> {
        self.signed_moment(2)
    }

    /// Aggregated numbers reflected by `(p, q) -> (n - p, q)`.
    pub fn reflected_hodge_numbers(&self) -> BTreeMap<(Q, Q), u64> {
        let n = Q::from_integer(self.n as i64);
        self.hodge_numbers()
            .into_iter()
            .map(|((p, q), h)| ((n - p, q), h))
            .collect()
    }
}

/// Checks `P(y) prod (1 - y^q_i) = prod (y^q_i - y)` where `P(y) (-1)^n y^(-n/2) = E(f, {1})`.
///
/// Returns `false` if `e` is not of the form `sum c (tb/t)^a`.
pub fn steenbrink_identity_holds(f: &InvertiblePolynomial, e: &BiExpPolynomial) -> bool {
    let n = f.n();
    let half = Q::new(n as i64, 2);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut p = BiExpPolynomial::zero();
    for (a, b, c) in e.terms() {
        if a != -b {
            return false;
        }
        p.add_term(Q::zero(), b + half, sign * c);
    }
    let one = Q::from_integer(1);
    let mut lhs = p;
    let mut rhs = BiExpPolynomial::constant(1);
    for &q in f.q() {
        let mut l = BiExpPolynomial::constant(1);
        l.add_term(Q::zero(), q, -1);
        lhs = lhs.mul(&l);
        let mut r = BiExpPolynomial::monomial(Q::zero(), q, 1);
        r.add_term(Q::zero(), one, -1);
        rhs = rhs.mul(&r);
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    fn fermat44_table() -> HodgeTable {
        let mut t = HodgeTable::new(
            2,
            PairModes {
                in_sl: false,
                contains_g0: true,
            },
        );
        t.add(q(1, 2), q(1, 2), false, 1);
        t.add(q(1, 1), q(1, 1), false, 4);
        t.add(q(3, 2), q(3, 2), false, 1);
        t
    }

    #[test]
    fn invert_t_flips() {
        let p = BiExpPolynomial::monomial(q(-1, 6), q(-1, 6), 1);
        assert_eq!(
            p.invert_t(),
            BiExpPolynomial::monomial(q(1, 6), q(-1, 6), 1)
        );
        assert_eq!(p.invert_t().invert_t(), p);
        assert_eq!(
            BiExpPolynomial::constant(3).invert_t(),
            BiExpPolynomial::constant(3)
        );
    }

    #[test]
    fn table_to_efunction() {
        let t = fermat44_table();
        let e = t.to_efunction(Mode::G0).unwrap();
        assert_eq!(e.pretty(), "(t*tb)^(-1/2) + 4 + (t*tb)^(1/2)");
        assert_eq!(e, t.signed_efunction());
        assert_eq!(e.chi(), 6);
        assert_eq!(
            HodgeTable::new(
                2,
                PairModes {
                    in_sl: true,
                    contains_g0: true
                }
            )
            .to_efunction(Mode::Sl)
            .unwrap(),
            BiExpPolynomial::zero()
        );
        let mut s = HodgeTable::new(
            2,
            PairModes {
                in_sl: true,
                contains_g0: false,
            },
        );
        s.add(q(1, 1), q(1, 1), false, 3);
        assert_eq!(
            s.to_efunction(Mode::Sl).unwrap(),
            BiExpPolynomial::constant(3)
        );
        assert!(matches!(
            s.to_efunction(Mode::G0),
            Err(QexpError::ModeViolation(_))
        ));
        assert!(matches!(
            t.to_efunction(Mode::Sl),
            Err(QexpError::ModeViolation(_))
        ));
    }

    #[test]
    fn sign_rule_errors() {
        let mut t = HodgeTable::new(
            1,
            PairModes {
                in_sl: true,
                contains_g0: false,
            },
        );
        t.add(q(1, 3), q(1, 3), false, 1);
        assert!(matches!(
            t.to_efunction(Mode::Sl),
            Err(QexpError::NonIntegralSign { .. })
        ));
        let mut t = HodgeTable::new(
            2,
            PairModes {
                in_sl: true,
                contains_g0: false,
            },
        );
        t.add(q(1, 1), q(0, 1), false, 1);
        assert!(matches!(
            t.to_efunction(Mode::Sl),
            Err(QexpError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn round_trip_table() {
        let t = fermat44_table();
        let e = t.to_efunction(Mode::G0).unwrap();
        assert_eq!(
            HodgeTable::from_efunction(&e, 2, Mode::G0, t.modes()).unwrap(),
            t
        );
    }

    #[test]
    fn exponents_variance_mean() {
        let t = fermat44_table();
        assert_eq!(
            t.exponents().unwrap(),
            vec![q(1, 2), q(1, 1), q(1, 1), q(1, 1), q(1, 1), q(3, 2)]
        );
        assert_eq!(t.variance().unwrap(), q(1, 2));
        assert_eq!(t.mean().unwrap(), Q::zero());
        let f: InvertiblePolynomial = "x^4 + y^4".parse().unwrap();
        assert_eq!(c_hat(&f), Q::one());
        assert_eq!(
            t.variance().unwrap(),
            c_hat(&f) * q(t.signed_efunction().chi(), 12)
        );
        let mut single = HodgeTable::new(
            2,
            PairModes {
                in_sl: false,
                contains_g0: true,
            },
        );
        single.add(Q::one(), Q::one(), false, 7);
        assert_eq!(single.variance().unwrap(), Q::zero());
        let empty = HodgeTable::new(
            2,
            PairModes {
                in_sl: false,
                contains_g0: true,
            },
        );
        assert!(empty.exponents().unwrap().is_empty());
        let sl_only = HodgeTable::new(
            2,
            PairModes {
                in_sl: true,
                contains_g0: false,
            },
        );
        assert!(sl_only.exponents().is_err());
        assert!(sl_only.variance().is_err());
    }

    #[test]
    fn duality_check() {
        let p: BiExpPolynomial = "(t*tb)^(-1/6) + (t*tb)^(1/6)".parse().unwrap();
        let qq: BiExpPolynomial = "-(tb/t)^(-1/6) - (tb/t)^(1/6)".parse().unwrap();
        assert!(check_duality(&p, &qq, 1));
        assert!(!check_duality(&p, &qq, 2));
        assert!(!check_duality(&p, &BiExpPolynomial::zero(), 1));
    }

    #[test]
    fn text_forms() {
        let p: BiExpPolynomial = "-(tb/t)^(-1/6) - (tb/t)^(1/6)".parse().unwrap();
        assert_eq!(p.coeff(q(1, 6), q(-1, 6)), -1);
        assert_eq!(
            p.to_string(),
            "-1 * t^(-1/6) * tb^(1/6) - 1 * t^(1/6) * tb^(-1/6)"
        );
        assert_eq!(p.pretty(), "-(tb/t)^(-1/6) - (tb/t)^(1/6)");
        let r: BiExpPolynomial = "2*(t*tb)^(-1/4) + 3 + t^(1/2)*tb^(1)".parse().unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.pretty(), "2*(t*tb)^(-1/4) + 3 + t^(1/2)*tb^(1)");
        assert_eq!(BiExpPolynomial::zero().to_string(), "0");
        assert_eq!(
            "0".parse::<BiExpPolynomial>().unwrap(),
            BiExpPolynomial::zero()
        );
        assert!("(t*tb)^(1/2".parse::<BiExpPolynomial>().is_err());
        assert!("3 +".parse::<BiExpPolynomial>().is_err());
        assert!("foo".parse::<BiExpPolynomial>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = BiExpPolynomial> {
        prop::collection::vec((-12i64..12, 1i64..7, -12i64..12, 1i64..7, -5i64..6), 0..8).prop_map(
            |ts| {
                let mut p = BiExpPolynomial::zero();
                for (a, b, c, d, k) in ts {
                    p.add_term(Q::new(a, b), Q::new(c, d), k);
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn additive_laws(a in arb_poly(), b in arb_poly()) {
            prop_assert!(a.add(&a.negate()).is_zero());
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.scale(1), a.clone());
            prop_assert_eq!(a.add(&b).chi(), a.chi() + b.chi());
            prop_assert_eq!(a.invert_t().invert_t(), a.clone());
        }

        #[test]
        fn text_and_json_round_trip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<BiExpPolynomial>().unwrap(), a.clone());
            prop_assert_eq!(a.pretty().parse::<BiExpPolynomial>().unwrap(), a.clone());
            prop_assert_eq!(BiExpPolynomial::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
