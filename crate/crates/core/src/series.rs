//! Character-filtered series engine.
//!
//! For every `g` in `G` the sector term is
//!
//! ```text
//! (t tb)^(age(g) - (n - n_g)/2) * (-1)^n_g * avg_h prod_{i fixed} (l_i y^q_i - y) / (1 - l_i y^q_i) * y^(-1/2)
//! ```
//!
//! with `y = tb/t` and `l_i = e[h_i]`. Each factor is expanded as a power
//! series whose coefficients carry the power of `l_i` symbolically. Averaging
//! over `h` keeps exactly the products whose accumulated character `c`
//! satisfies `sum c_i h_i in Z` for every generator `h`. The invariant part is
//! a polynomial with top degree `sum_{fixed} (1 - q_i) - n_g/2`, so the
//! expansion is truncated there.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::group::{AbelianSubgroup, GroupElement};
use crate::qexp::BiExpPolynomial;
use crate::{Error, Exec, Q};

/// One expanded term: `coeff * y^y_exp * prod l_i^char_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSeriesTerm {
    pub y_exp: Q,
    pub char: Vec<u32>,
    pub coeff: i64,
}

/// Terms of one factor `(l y^q - y)/(1 - l y^q) * y^(-1/2)` with exponent at most `limit`.
/// Characters are reduced mod `modulus`.
fn factor_terms(q: Q, modulus: u32, limit: Q) -> Vec<(Q, u32, i64)> {
    let half = Q::new(1, 2);
    let mut out = Vec::new();
    let mut k: i64 = 0;
    loop {
        let pos = q * (k + 1) - half;
        let neg = q * k + half;
        if pos > limit && neg > limit {
            break;
        }
        if pos <= limit {
            out.push((pos, ((k + 1) % modulus as i64) as u32, 1));
        }
        if neg <= limit {
            out.push((neg, (k % modulus as i64) as u32, -1));
        }
        k += 1;
    }
    out
}

/// Invariant part of `prod_{i in fixed} factor_i`, as a map `y_exp -> coeff`, truncated at the top degree.
pub fn invariant_series(group: &AbelianSubgroup, fixed: &[usize]) -> Vec<CharSeriesTerm> {
    let f = group.ambient();
    let q: Vec<Q> = fixed.iter().map(|&i| f.q()[i]).collect();
    let half = Q::new(1, 2);
    let top: Q = q.iter().map(|&x| Q::from_integer(1) - x).sum::<Q>() - half * (fixed.len() as i64);
    let mins: Vec<Q> = q.iter().map(|&x| x - half).collect();
    let moduli: Vec<u32> = fixed
        .iter()
        .map(|&i| {
            group
                .generators()
                .iter()
                .fold(1i64, |acc, h| acc.lcm(h.comps()[i].denom())) as u32
        })
        .collect();

    let mut state: HashMap<(Q, Vec<u32>), i64> = HashMap::from([((Q::zero(), Vec::new()), 1)]);
    for j in 0..fixed.len() {
        let others: Q = mins
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &m)| m)
            .sum();
        let remaining: Q = mins[j + 1..].iter().copied().sum();
        let terms = factor_terms(q[j], moduli[j], top - others);
        let mut next: HashMap<(Q, Vec<u32>), i64> = HashMap::with_capacity(state.len() * 2);
        for ((e, c), &coeff) in &state {
            for &(te, tc, tk) in &terms {
                let ne = *e + te;
                if ne + remaining > top {
                    continue;
                }
                let mut nc = c.clone();
                nc.push(tc);
                *next.entry((ne, nc)).or_insert(0) += coeff * tk;
            }
        }
        next.retain(|_, v| *v != 0);
        state = next;
    }

    let mut out: Vec<CharSeriesTerm> = state
        .into_iter()
        .filter(|((e, c), _)| *e <= top && character_is_trivial(group, fixed, c))
        .map(|((y_exp, char), coeff)| CharSeriesTerm { y_exp, char, coeff })
        .collect();
    out.sort_by(|a, b| (a.y_exp, &a.char).cmp(&(b.y_exp, &b.char)));
    out
}

/// `sum_i c_i h_i in Z` for every generator `h`.
pub fn character_is_trivial(group: &AbelianSubgroup, fixed: &[usize], c: &[u32]) -> bool {
    group.generators().iter().all(|h| {
        fixed
            .iter()
            .zip(c)
            .map(|(&i, &ci)| h.comps()[i] * ci as i64)
            .sum::<Q>()
            .is_integer()
    })
}

/// Sector term `E_g(f, G)`.
pub fn sector_series(group: &AbelianSubgroup, g: &GroupElement) -> BiExpPolynomial {
    let f = group.ambient();
    let fixed = g.fixed_indices();
    let ng = fixed.len();
    let half = Q::new(1, 2);
    let prefactor = g.age() - half * ((f.n() - ng) as i64);
    let sign = if ng.is_multiple_of(2) { 1 } else { -1 };
    let mut by_exp: HashMap<Q, i64> = HashMap::new();
    for t in invariant_series(group, &fixed) {
        *by_exp.entry(t.y_exp).or_insert(0) += t.coeff;
    }
    let mut out = BiExpPolynomial::zero();
    for (e, c) in by_exp {
        // (t tb)^A (tb/t)^e = t^(A-e) tb^(A+e)
        out.add_term(prefactor - e, prefactor + e, sign * c);
    }
    out
}

/// E-function from the character-filtered series.
pub fn efunction_series(group: &AbelianSubgroup) -> Result<BiExpPolynomial, Error> {
    efunction_series_with(group, Exec::default())
}

pub fn efunction_series_with(
    group: &AbelianSubgroup,
    exec: Exec,
) -> Result<BiExpPolynomial, Error> {
    for g in group.generators() {
        g.check_member(group.ambient())?;
    }
    let parts = exec.map(group.elements(), |g| sector_series(group, g));
    let mut out = BiExpPolynomial::zero();
    for p in &parts {
        out.add_assign(p);
    }
    Ok(out)
}
