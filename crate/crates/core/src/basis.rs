//! Monomial-basis engine.
//!
//! Each sector `g` contributes the `G`-invariant forms `x^k dx` of a Kreuzer
//! monomial basis of the restriction `f^g`, placed at
//! `(p, q) = (age(g) + n_g - l, age(g) + l)` with `l = sum q_i (k_i + 1)` and
//! parity `n_g mod 2`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::group::{AbelianSubgroup, GroupElement};
use crate::poly::{Atom, AtomKind, InvertiblePolynomial, PolyError};
use crate::qexp::{BiExpPolynomial, HodgeTable, PairModes};
use crate::{Error, Exec, Q};

/// Kreuzer basis exponents of one atom, in atom variable order.
///
/// Loops use the full box `0 <= k_j < a_j`. Chains drop every `k` that
/// starts with `a_1 - 1, 0, a_3 - 1, 0, ..., a_{2s-1} - 1` and then has
/// `k_{2s} != 0`; a pattern that covers a whole odd-length chain is dropped outright.
pub fn kreuzer_exponents(atom: &Atom) -> Vec<Vec<u32>> {
    let a = &atom.exponents;
    let mut out = Vec::new();
    let mut k = vec![0u32; a.len()];
    loop {
        if atom.kind == AtomKind::Loop || !chain_excluded(a, &k) {
            out.push(k.clone());
        }
        // odometer, last coordinate fastest
        let mut pos = a.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            k[pos] += 1;
            if k[pos] < a[pos] {
                break;
            }
            k[pos] = 0;
        }
    }
}

fn chain_excluded(a: &[u32], k: &[u32]) -> bool {
    let m = a.len();
    let mut j = 0;
    while j < m {
        if k[j] != a[j] - 1 {
            return false;
        }
        if j + 1 == m || k[j + 1] != 0 {
            return true;
        }
        j += 2;
    }
    false
}

/// A basis form `prod x_i^{k_i} dx_i` over a fixed locus, with its degree `l(k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisMonomial {
    /// Ambient variable index -> exponent, on the whole support.
    pub exponents: BTreeMap<usize, u32>,
    pub degree: Q,
}

impl BasisMonomial {
    pub fn dense(&self) -> Vec<u32> {
        self.exponents.values().copied().collect()
    }
}

/// Product of the atom bases of `f`, indexed by `f`'s own variables.
pub fn basis(f: &InvertiblePolynomial) -> Vec<BasisMonomial> {
    let q = f.q();
    let mut partial: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new()];
    for atom in f.atoms() {
        let local = kreuzer_exponents(atom);
        partial = partial
            .iter()
            .flat_map(|m| {
                local.iter().map(move |k| {
                    let mut m = m.clone();
                    for (&v, &e) in atom.vars.iter().zip(k) {
                        m.insert(v, e);
                    }
                    m
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|exponents| {
            let degree = exponents.iter().map(|(&i, &k)| q[i] * (k as i64 + 1)).sum();
            BasisMonomial { exponents, degree }
        })
        .collect()
}

/// `psi(k) = (k + 1) E^{-1} mod 1`, an element of `G_{f^T}`. `k` is dense over all variables of `f`.
pub fn psi(f: &InvertiblePolynomial, k: &[u32]) -> GroupElement {
    assert_eq!(k.len(), f.n());
    let row: Vec<Q> = k.iter().map(|&x| Q::from_integer(x as i64 + 1)).collect();
    GroupElement::new(f.inverse_matrix().vec_mul(&row))
}

/// `x^k dx` on the coordinates `fixed` is invariant under every generator of `group`.
pub fn invariant_test(group: &AbelianSubgroup, fixed: &[usize], k: &[u32]) -> bool {
    group.generators().iter().all(|h| {
        let c = h.comps();
        fixed
            .iter()
            .zip(k)
            .map(|(&i, &e)| c[i] * (e as i64 + 1))
            .sum::<Q>()
            .is_integer()
    })
}

/// The invariant forms of one twisted sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorContribution {
    pub g: GroupElement,
    pub fixed: Vec<usize>,
    pub age: Q,
    pub invariant_monomials: Vec<BasisMonomial>,
}

impl SectorContribution {
    pub fn n_fixed(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_odd(&self) -> bool {
        self.fixed.len() % 2 == 1
    }

    /// Bigrading `(p, q)` of a form of degree `l` in this sector.
    pub fn placement(&self, degree: Q) -> (Q, Q) {
        let ng = Q::from_integer(self.fixed.len() as i64);
        (self.age + ng - degree, self.age + degree)
    }
}

/// Sector of `g` in the pair `(f, group)`.
pub fn sector(group: &AbelianSubgroup, g: &GroupElement) -> Result<SectorContribution, PolyError> {
    let f = group.ambient();
    let fixed = g.fixed_indices();
    let fg = f.restrict(&fixed)?;
    let q = f.q();
    let invariant_monomials = basis(&fg)
        .into_iter()
        .filter_map(|m| {
            let dense = m.dense();
            if !invariant_test(group, &fixed, &dense) {
                return None;
            }
            let exponents: BTreeMap<usize, u32> = fixed.iter().copied().zip(dense).collect();
            let degree: Q = exponents.iter().map(|(&i, &k)| q[i] * (k as i64 + 1)).sum();
            debug_assert_eq!(
                degree, m.degree,
                "restricted weights must agree with ambient weights"
            );
            Some(BasisMonomial { exponents, degree })
        })
        .collect();
    Ok(SectorContribution {
        g: g.clone(),
        fixed,
        age: g.age(),
        invariant_monomials,
    })
}

/// All sectors, in the element order of `group`.
pub fn sectors(group: &AbelianSubgroup, exec: Exec) -> Result<Vec<SectorContribution>, PolyError> {
    exec.map(group.elements(), |g| sector(group, g))
        .into_iter()
        .collect()
}

pub fn pair_modes(group: &AbelianSubgroup) -> PairModes {
    PairModes {
        in_sl: group.is_in_sl(),
        contains_g0: group.contains_grading(),
    }
}

pub fn hodge_table(group: &AbelianSubgroup) -> Result<HodgeTable, Error> {
    hodge_table_with(group, Exec::default())
}

pub fn hodge_table_with(group: &AbelianSubgroup, exec: Exec) -> Result<HodgeTable, Error> {
    let mut table = HodgeTable::new(group.ambient().n(), pair_modes(group));
    for s in sectors(group, exec)? {
        for m in &s.invariant_monomials {
            let (p, q) = s.placement(m.degree);
            table.add(p, q, s.is_odd(), 1);
        }
    }
    Ok(table)
}

/// E-function from the monomial bases.
pub fn efunction_basis(group: &AbelianSubgroup) -> Result<BiExpPolynomial, Error> {
    efunction_basis_with(group, Exec::default())
}

pub fn efunction_basis_with(group: &AbelianSubgroup, exec: Exec) -> Result<BiExpPolynomial, Error> {
    Ok(hodge_table_with(group, exec)?.signed_efunction())
}

/// One `(g, g~)` pairing with multiplicity `m_hat`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairRow {
    pub g: GroupElement,
    pub gdual: GroupElement,
    pub m_hat: u64,
}

/// Multiset of `(g, g~, m_hat)`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    pub rows: Vec<PairRow>,
}

impl PairTable {
    /// Swaps the roles of `g` and `g~`.
    pub fn transposed(&self) -> PairTable {
        let mut rows: Vec<PairRow> = self
            .rows
            .iter()
            .map(|r| PairRow {
                g: r.gdual.clone(),
                gdual: r.g.clone(),
                m_hat: r.m_hat,
            })
            .collect();
        rows.sort();
        PairTable { rows }
    }

    /// Reassembles `sum m_hat (-1)^{n_g} (t tb)^{age(g) - (n - n_g)/2} (tb/t)^{age(g~) - (n - n_g~)/2}`.
    pub fn efunction(&self, n: usize) -> BiExpPolynomial {
        let n = Q::from_integer(n as i64);
        let half = Q::new(1, 2);
        let mut out = BiExpPolynomial::zero();
        for r in &self.rows {
            let ng = Q::from_integer(r.g.n_fixed() as i64);
            let nd = Q::from_integer(r.gdual.n_fixed() as i64);
            let a = r.g.age() - (n - ng) * half;
            let b = r.gdual.age() - (n - nd) * half;
            let sign = if r.g.n_fixed() % 2 == 0 { 1 } else { -1 };
            out.add_term(a - b, a + b, sign * r.m_hat as i64);
        }
        out
    }
}

/// `2^r`, `r` = number of even loops of `f` on which both `g` and `g~` are trivial.
pub fn loop_multiplicity(f: &InvertiblePolynomial, g: &GroupElement, gdual: &GroupElement) -> u64 {
    let r = f
        .atoms()
        .iter()
        .filter(|a| a.kind == AtomKind::Loop && a.len() % 2 == 0)
        .filter(|a| {
            a.vars
                .iter()
                .all(|&i| g.comps()[i].is_zero() && gdual.comps()[i].is_zero())
        })
        .count();
    1 << r
}

pub fn pair_table(group: &AbelianSubgroup) -> Result<PairTable, Error> {
    pair_table_with(group, Exec::default())
}

/// Tallies `(g, psi_{f^g}(k))` over every invariant form, with `psi` zero-extended into `G_{f^T}`.
pub fn pair_table_with(group: &AbelianSubgroup, exec: Exec) -> Result<PairTable, Error> {
    let f = group.ambient();
    let dual = group.dual();
    let mut tally: BTreeMap<(GroupElement, GroupElement), u64> = BTreeMap::new();
    for s in sectors(group, exec)? {
        let fg = f.restrict(&s.fixed)?;
        for m in &s.invariant_monomials {
            let local = psi(&fg, &m.dense());
            let gdual = local.extend(&s.fixed, f.n());
            if !dual.contains(&gdual) {
                return Err(Error::Verification(format!(
                    "psi image {gdual} of an invariant form in sector {} is outside the dual group",
                    s.g
                )));
            }
            *tally.entry((s.g.clone(), gdual)).or_insert(0) += 1;
        }
    }
    let rows = tally
        .into_iter()
        .map(|((g, gdual), m_hat)| PairRow { g, gdual, m_hat })
        .collect();
    Ok(PairTable { rows })
}

/// Checks the image/fiber structure of `psi` on every atom and the degree law
/// `l(k) = age(psi(k)) + n_{psi(k)}/2` on the whole basis. Returns the violations.
pub fn psi_structure_violations(f: &InvertiblePolynomial) -> Vec<String> {
    let mut bad = Vec::new();
    for atom in f.atoms() {
        let a = f.atom_polynomial(atom);
        let dual = AbelianSubgroup::maximal(&a.transpose());
        let mut fibers: BTreeMap<GroupElement, usize> = BTreeMap::new();
        for m in basis(&a) {
            *fibers.entry(psi(&a, &m.dense())).or_insert(0) += 1;
        }
        let image: BTreeSet<&GroupElement> = fibers.keys().collect();
        let id = GroupElement::identity(a.n());
        let expected: BTreeSet<&GroupElement> = match atom.kind {
            AtomKind::Chain => dual
                .elements()
                .iter()
                .filter(|h| h.n_fixed() % 2 == 0)
                .collect(),
            AtomKind::Loop if atom.len() % 2 == 1 => {
                dual.elements().iter().filter(|h| **h != id).collect()
            }
            AtomKind::Loop => dual.elements().iter().collect(),
        };
        if image != expected {
            bad.push(format!(
                "{atom}: psi image differs from the expected subset of the dual group"
            ));
        }
        for (h, &count) in &fibers {
            let want = if atom.kind == AtomKind::Loop && atom.len() % 2 == 0 && *h == id {
                2
            } else {
                1
            };
            if count != want {
                bad.push(format!(
                    "{atom}: fiber over {h} has {count} elements, expected {want}"
                ));
            }
        }
    }
    let half = Q::new(1, 2);
    for m in basis(f) {
        let h = psi(f, &m.dense());
        let rhs = h.age() + half * (h.n_fixed() as i64);
        if m.degree != rhs {
            bad.push(format!(
                "degree law fails at {:?}: {} != {}",
                m.dense(),
                m.degree,
                rhs
            ));
        }
    }
    bad
}
