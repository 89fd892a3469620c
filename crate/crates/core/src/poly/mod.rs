//! Invertible polynomials: validation, chain/loop decomposition, weights,
//! Berglund-Hubsch transpose and restriction to fixed loci.

mod parse;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

pub use parse::{parse_monomials, ParsedPolynomial};

use crate::matrix::{IntMatrix, RatMatrix};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("repeated monomial `{0}`")]
    RepeatedMonomial(String),
    #[error("{monomials} monomials but {variables} variables")]
    CountMismatch { monomials: usize, variables: usize },
    #[error("variable `{0}` does not occur with a positive exponent")]
    UnusedVariable(String),
    #[error("not decomposable into chain and loop atoms at monomial `{monomial}`: {reason}")]
    NotDecomposable { monomial: String, reason: String },
    #[error("index set {0:?} is not the fixed locus of a diagonal symmetry")]
    NotFixedLocus(Vec<usize>),
}

impl PolyError {
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            PolyError::Syntax { .. }
                | PolyError::RepeatedMonomial(_)
                | PolyError::CountMismatch { .. }
                | PolyError::UnusedVariable(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomKind {
    Chain,
    Loop,
}

/// One Thom-Sebastiani summand. `vars[j]^exponents[j] * vars[j+1]` are its
/// monomials; the last one is a pure power for chains and wraps to `vars[0]` for loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub kind: AtomKind,
    pub vars: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl Atom {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_fermat(&self) -> bool {
        self.kind == AtomKind::Chain && self.vars.len() == 1
    }

    /// Weights of the atom variables in atom order.
    pub fn weights(&self) -> Vec<Q> {
        let m = self.len();
        let a: Vec<Q> = self
            .exponents
            .iter()
            .map(|&x| Q::from_integer(x as i64))
            .collect();
        match self.kind {
            AtomKind::Chain => {
                let mut q = vec![Q::zero(); m];
                q[m - 1] = Q::one() / a[m - 1];
                for i in (0..m - 1).rev() {
                    q[i] = (Q::one() - q[i + 1]) / a[i];
                }
                q
            }
            AtomKind::Loop => {
                // q_i = alpha_i + beta_i * q_0, unwound from the back of the cycle.
                let (mut alpha, mut beta) = (Q::zero(), Q::one());
                let mut coeffs = vec![(Q::zero(), Q::zero()); m];
                for i in (0..m).rev() {
                    alpha = (Q::one() - alpha) / a[i];
                    beta = -beta / a[i];
                    coeffs[i] = (alpha, beta);
                }
                let q0 = coeffs[0].0 / (Q::one() - coeffs[0].1);
                coeffs.iter().map(|&(al, be)| al + be * q0).collect()
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            AtomKind::Chain => "chain",
            AtomKind::Loop => "loop",
        };
        let a: Vec<String> = self.exponents.iter().map(|x| x.to_string()).collect();
        write!(f, "{kind}({})", a.join(","))
    }
}

/// Rational weights `q` with `E q = 1` and their least common denominator `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub q: Vec<Q>,
    pub d: i64,
}

impl WeightSystem {
    /// Integer weights `w_i = q_i d`.
    pub fn integer_weights(&self) -> Vec<i64> {
        self.q.iter().map(|q| (q * self.d).to_integer()).collect()
    }
}

/// An invertible polynomial, stored by its exponent matrix with row `i`
/// matched to variable `i` (the diagonal carries the unique exponent >= 2).
#[derive(Debug, Clone)]
pub struct InvertiblePolynomial {
    vars: Vec<String>,
    e: IntMatrix,
    atoms: Vec<Atom>,
    weights: WeightSystem,
    e_inv: RatMatrix,
}

impl PartialEq for InvertiblePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.e == other.e
    }
}

impl Eq for InvertiblePolynomial {}

pub(crate) fn format_monomial(vars: &[String], row: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(row)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Parses and validates polynomial text. Discarded-coefficient warnings are returned alongside.
pub fn parse_polynomial(text: &str) -> Result<(InvertiblePolynomial, Vec<String>), PolyError> {
    let parsed = parse_monomials(text)?;
    let f = InvertiblePolynomial::new(parsed.vars, parsed.rows)?;
    Ok((f, parsed.warnings))
}

impl FromStr for InvertiblePolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s).map(|(f, _)| f)
    }
}

/// Matches every monomial to its variable, normalizes row order, and splits into atoms.
///
/// Returns the row permutation (`perm[i]` = source row matched to variable `i`) and the atoms.
fn match_and_decompose(
    vars: &[String],
    rows: &[Vec<u32>],
) -> Result<(Vec<usize>, Vec<Atom>), PolyError> {
    let n = vars.len();
    let bad = |r: usize, reason: &str| PolyError::NotDecomposable {
        monomial: format_monomial(vars, &rows[r]),
        reason: reason.into(),
    };
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut succ_of_row: Vec<Option<usize>> = vec![None; n];
    for (r, row) in rows.iter().enumerate() {
        let nonzero: Vec<usize> = (0..n).filter(|&j| row[j] > 0).collect();
        let big: Vec<usize> = nonzero.iter().copied().filter(|&j| row[j] >= 2).collect();
        if nonzero.len() > 2 {
            return Err(bad(r, "more than two variables"));
        }
        match big.as_slice() {
            [] => {
                return Err(bad(
                    r,
                    "no exponent >= 2 (exponent-one atoms are not supported)",
                ))
            }
            [j] => {
                if owner[*j].is_some() {
                    return Err(bad(r, "two monomials claim the same variable"));
                }
                owner[*j] = Some(r);
                succ_of_row[r] = nonzero.iter().copied().find(|&k| k != *j);
            }
            _ => return Err(bad(r, "two exponents >= 2")),
        }
    }
    let perm: Vec<usize> = owner
        .into_iter()
        .map(|o| o.expect("bijective matching"))
        .collect();
    let succ: Vec<Option<usize>> = perm.iter().map(|&r| succ_of_row[r]).collect();

    let mut pred: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if let Some(s) = succ[i] {
            if pred[s].is_some() {
                return Err(bad(perm[i], "variable is the successor of two monomials"));
            }
            pred[s] = Some(i);
        }
    }

    let mut seen = vec![false; n];
    let mut atoms = Vec::new();
    for head in (0..n).filter(|&h| pred[h].is_none()) {
        let mut vs = Vec::new();
        let mut cur = Some(head);
        while let Some(c) = cur {
            seen[c] = true;
            vs.push(c);
            cur = succ[c];
        }
        let exponents = vs.iter().map(|&v| rows[perm[v]][v]).collect();
        atoms.push(Atom {
            kind: AtomKind::Chain,
            vars: vs,
            exponents,
        });
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vs = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            vs.push(c);
            c = succ[c].expect("cycle members have successors");
        }
        let exponents = vs.iter().map(|&v| rows[perm[v]][v]).collect();
        atoms.push(Atom {
            kind: AtomKind::Loop,
            vars: vs,
            exponents,
        });
    }
    atoms.sort_by_key(|a| a.vars[0]);
    Ok((perm, atoms))
}

/// Decomposes an exponent matrix (rows matched or not) into chain and loop atoms.
pub fn decompose(vars: &[String], rows: &[Vec<u32>]) -> Result<Vec<Atom>, PolyError> {
    match_and_decompose(vars, rows).map(|(_, atoms)| atoms)
}

impl InvertiblePolynomial {
    /// Validates exponent rows over `vars` and normalizes the row order.
    pub fn new(vars: Vec<String>, rows: Vec<Vec<u32>>) -> Result<Self, PolyError> {
        let n = vars.len();
        if rows.len() != n {
            return Err(PolyError::CountMismatch {
                monomials: rows.len(),
                variables: n,
            });
        }
        assert!(
            rows.iter().all(|r| r.len() == n),
            "exponent rows must have one entry per variable"
        );
        let (perm, atoms) = match_and_decompose(&vars, &rows)?;
        let sorted: Vec<Vec<i64>> = perm
            .iter()
            .map(|&r| rows[r].iter().map(|&x| x as i64).collect())
            .collect();
        let e = IntMatrix::from_rows(&sorted);
        debug_assert!(e.det() > 0);
        let e_inv = e
            .inverse()
            .expect("chain/loop exponent matrices are invertible");

        let mut q = vec![Q::zero(); n];
        for atom in &atoms {
            for (&v, w) in atom.vars.iter().zip(atom.weights()) {
                q[v] = w;
            }
        }
        let d = q.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
        Ok(InvertiblePolynomial {
            vars,
            e,
            atoms,
            weights: WeightSystem { q, d },
            e_inv,
        })
    }

    /// The polynomial in zero variables (the restriction to the origin).
    pub fn empty() -> Self {
        InvertiblePolynomial {
            vars: Vec::new(),
            e: IntMatrix::from_rows(&[]),
            atoms: Vec::new(),
            weights: WeightSystem {
                q: Vec::new(),
                d: 1,
            },
            e_inv: RatMatrix::identity(0),
        }
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn exponent_matrix(&self) -> &IntMatrix {
        &self.e
    }

    pub fn inverse_matrix(&self) -> &RatMatrix {
        &self.e_inv
    }

    pub fn det(&self) -> i64 {
        self.e.det()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn q(&self) -> &[Q] {
        &self.weights.q
    }

    /// Berglund-Hubsch transpose: exponent matrix `E^T` over the same variables.
    pub fn transpose(&self) -> Self {
        let rows: Vec<Vec<u32>> = self
            .e
            .transpose()
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as u32).collect())
            .collect();
        InvertiblePolynomial::new(self.vars.clone(), rows)
            .expect("transpose of an invertible polynomial is invertible")
    }

    /// Milnor number `prod (1/q_i - 1)`.
    pub fn milnor_number(&self) -> u64 {
        let mu = self
            .weights
            .q
            .iter()
            .fold(Q::one(), |acc, q| acc * (q.recip() - Q::one()));
        assert!(mu.is_integer(), "non-integral Milnor number {mu}");
        mu.to_integer() as u64
    }

    /// Sets every variable outside `fixed` to zero. Variables keep their relative order.
    pub fn restrict(&self, fixed: &[usize]) -> Result<Self, PolyError> {
        let mut idx = fixed.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Ok(Self::empty());
        }
        let not_fixed = || PolyError::NotFixedLocus(idx.clone());
        if idx.iter().any(|&i| i >= self.n()) {
            return Err(not_fixed());
        }
        let kept: Vec<usize> = (0..self.n())
            .filter(|&r| {
                (0..self.n()).all(|j| self.e.get(r, j) == 0 || idx.binary_search(&j).is_ok())
            })
            .collect();
        if kept.len() != idx.len() {
            return Err(not_fixed());
        }
        let vars = idx.iter().map(|&i| self.vars[i].clone()).collect();
        let rows = kept
            .iter()
            .map(|&r| idx.iter().map(|&j| self.e.get(r, j) as u32).collect())
            .collect();
        Self::new(vars, rows).map_err(|_| not_fixed())
    }

    /// The atom as a standalone polynomial over its own variables, in atom order.
    pub fn atom_polynomial(&self, atom: &Atom) -> Self {
        let vars = atom.vars.iter().map(|&i| self.vars[i].clone()).collect();
        let rows = atom
            .vars
            .iter()
            .map(|&r| atom.vars.iter().map(|&j| self.e.get(r, j) as u32).collect())
            .collect();
        Self::new(vars, rows).expect("atoms are invertible")
    }

    /// Monomial `i` as text.
    pub fn monomial(&self, i: usize) -> String {
        let row: Vec<u32> = self.e.row(i).iter().map(|&x| x as u32).collect();
        format_monomial(&self.vars, &row)
    }
}

impl fmt::Display for InvertiblePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() == 0 {
            return write!(f, "0");
        }
        let monos: Vec<String> = (0..self.n()).map(|i| self.monomial(i)).collect();
        write!(f, "{}", monos.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    fn p(s: &str) -> InvertiblePolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn chain_decomposition() {
        let f = p("x^3*y + y^2");
        assert_eq!(
            f.atoms(),
            &[Atom {
                kind: AtomKind::Chain,
                vars: vec![0, 1],
                exponents: vec![3, 2]
            }]
        );
        assert_eq!(f.q(), &[q(1, 6), q(1, 2)]);
        assert_eq!(f.weights().d, 6);
        assert_eq!(f.weights().integer_weights(), vec![1, 3]);
        assert_eq!(f.milnor_number(), 5);
        assert_eq!(f.det(), 6);
    }

    #[test]
    fn loop_decomposition() {
        let f = p("x^2*y + y^2*x");
        assert_eq!(
            f.atoms(),
            &[Atom {
                kind: AtomKind::Loop,
                vars: vec![0, 1],
                exponents: vec![2, 2]
            }]
        );
        assert_eq!(f.q(), &[q(1, 3), q(1, 3)]);
        assert_eq!(f.milnor_number(), 4);
    }

    #[test]
    fn fermat_sum() {
        let f = p("x^4 + y^4");
        assert_eq!(f.atoms().len(), 2);
        assert!(f
            .atoms()
            .iter()
            .all(|a| a.is_fermat() && a.exponents == vec![4]));
        let f = p("x^3");
        assert_eq!(f.q(), &[q(1, 3)]);
        assert_eq!(f.milnor_number(), 2);
    }

    #[test]
    fn rows_are_normalized() {
        let f = p("y^2 + x^3*y");
        assert_eq!(f.exponent_matrix().rows(), vec![vec![3, 1], vec![0, 2]]);
        assert_eq!(f.to_string(), "x^3*y + y^2");
    }

    #[test]
    fn longer_atoms() {
        let f = p("x^2*y + y^3*z + z^2*x");
        assert_eq!(f.atoms()[0].kind, AtomKind::Loop);
        assert_eq!(f.det(), 13);
        let ones = f.exponent_matrix().mul_vec(f.q());
        assert!(ones.iter().all(|x| x.is_one()));

        let g = p("x^2*y + y^2*z + z^3");
        assert_eq!(g.atoms()[0].kind, AtomKind::Chain);
        assert_eq!(g.q(), &[q(1, 3), q(1, 3), q(1, 3)]);
    }

    #[test]
    fn transpose_reverses_chain() {
        let f = p("x^3*y + y^2");
        let t = f.transpose();
        assert_eq!(t.exponent_matrix().rows(), vec![vec![3, 0], vec![1, 2]]);
        assert_eq!(t.to_string(), "x^3 + x*y^2");
        assert_eq!(t.atoms()[0].vars, vec![1, 0]);
        assert_eq!(t.transpose(), f);
        assert_eq!(p("x^4 + y^4").transpose(), p("x^4 + y^4"));
        assert_eq!(p("x^2*y + y^2*x").transpose(), p("x^2*y + y^2*x"));
    }

    #[test]
    fn restriction() {
        let f = p("x^3*y + y^2");
        let r = f.restrict(&[1]).unwrap();
        assert_eq!(r.to_string(), "y^2");
        assert_eq!(r.q(), &[q(1, 2)]);
        assert!(matches!(f.restrict(&[0]), Err(PolyError::NotFixedLocus(_))));
        let l = p("x^2*y + y^2*x");
        assert_eq!(l.restrict(&[0, 1]).unwrap(), l);
        let e = p("x^4 + y^4").restrict(&[]).unwrap();
        assert_eq!(e.n(), 0);
        assert_eq!(e.milnor_number(), 1);
        assert_eq!(e.to_string(), "0");
    }

    #[test]
    fn rejections() {
        let err = |s: &str| s.parse::<InvertiblePolynomial>().unwrap_err();
        assert!(matches!(
            err("x^2*y^2 + y^3"),
            PolyError::NotDecomposable { .. }
        ));
        assert!(matches!(
            err("x*y + y^2"),
            PolyError::NotDecomposable { .. }
        ));
        assert!(matches!(
            err("x^3 + x^2*y"),
            PolyError::NotDecomposable { .. }
        ));
        assert!(matches!(
            err("x^2*z + y^2*z + z^2"),
            PolyError::NotDecomposable { .. }
        ));
        assert!(matches!(err("x + y^2"), PolyError::NotDecomposable { .. }));
    }
}
