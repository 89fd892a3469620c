//! Finite diagonal symmetry groups as subgroups of `(Q/Z)^n`.
//!
//! A component `c` stands for the root of unity `e[c] = exp(2 pi i c)`;
//! elements are stored with every component in `[0, 1)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::InvertiblePolynomial;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group element `{0}` (expected `1/r(a1,...,an)`)")]
    ParseElement(String),
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("element {elem} has {got} components, polynomial has {expected} variables")]
    Length {
        elem: String,
        got: usize,
        expected: usize,
    },
    #[error(
        "{elem} is not a symmetry of `{poly}`: monomial {row} `{monomial}` picks up e[{value}]"
    )]
    NotInGroup {
        elem: String,
        poly: String,
        row: usize,
        monomial: String,
        value: Q,
    },
}

impl GroupError {
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            GroupError::ParseElement(_) | GroupError::UnknownSpec(_)
        )
    }
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

/// A diagonal root-of-unity vector in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<Q>);

impl GroupElement {
    /// Reduces every component mod 1.
    pub fn new(comps: Vec<Q>) -> Self {
        GroupElement(comps.into_iter().map(frac).collect())
    }

    pub fn identity(n: usize) -> Self {
        GroupElement(vec![Q::zero(); n])
    }

    pub fn comps(&self) -> &[Q] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        GroupElement(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| frac(a + b))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        GroupElement(self.0.iter().map(|&a| frac(-a)).collect())
    }

    /// Sum of canonical components.
    pub fn age(&self) -> Q {
        self.0.iter().sum()
    }

    /// Indices whose component is trivial.
    pub fn fixed_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_zero()).collect()
    }

    pub fn n_fixed(&self) -> usize {
        self.0.iter().filter(|c| c.is_zero()).count()
    }

    /// Determinant one, i.e. integral age.
    pub fn is_in_sl(&self) -> bool {
        self.age().is_integer()
    }

    /// Order of the element (lcm of component denominators).
    pub fn order(&self) -> i64 {
        self.0.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }

    /// Restriction to the given coordinates.
    pub fn select(&self, idx: &[usize]) -> Self {
        GroupElement(idx.iter().map(|&i| self.0[i]).collect())
    }

    /// Zero-extension from the coordinates `idx` into `n` coordinates.
    pub fn extend(&self, idx: &[usize], n: usize) -> Self {
        let mut comps = vec![Q::zero(); n];
        for (&i, &c) in idx.iter().zip(&self.0) {
            comps[i] = c;
        }
        GroupElement(comps)
    }

    /// Returns `Ok` iff `E * comps` is integral, i.e. the element is in `G_f`.
    pub fn check_member(&self, f: &InvertiblePolynomial) -> Result<(), GroupError> {
        if self.len() != f.n() {
            return Err(GroupError::Length {
                elem: self.to_string(),
                got: self.len(),
                expected: f.n(),
            });
        }
        let image = f.exponent_matrix().mul_vec(&self.0);
        match image.iter().position(|x| !x.is_integer()) {
            None => Ok(()),
            Some(row) => Err(GroupError::NotInGroup {
                elem: self.to_string(),
                poly: f.to_string(),
                row: row + 1,
                monomial: f.monomial(row),
                value: frac(image[row]),
            }),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.order();
        let a: Vec<String> = self
            .0
            .iter()
            .map(|c| (c * r).to_integer().to_string())
            .collect();
        write!(f, "1/{r}({})", a.join(","))
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::ParseElement(s.trim().to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = t.strip_prefix("1/").ok_or_else(bad)?;
        let (r, body) = rest.split_once('(').ok_or_else(bad)?;
        let body = body.strip_suffix(')').ok_or_else(bad)?;
        let r: i64 = r.parse().map_err(|_| bad())?;
        if r <= 0 {
            return Err(bad());
        }
        if body.is_empty() {
            return Ok(GroupElement(Vec::new()));
        }
        let comps = body
            .split(',')
            .map(|a| a.parse::<i64>().map(|a| Q::new(a, r)).map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupElement::new(comps))
    }
}

/// Closes a generator set under addition.
fn closure(n: usize, gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen = BTreeSet::new();
    let id = GroupElement::identity(n);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.add(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// A subgroup of `G_f` with its full element list cached (sorted).
#[derive(Debug, Clone)]
pub struct AbelianSubgroup {
    ambient: InvertiblePolynomial,
    gens: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl PartialEq for AbelianSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.elements == other.elements
    }
}

impl Eq for AbelianSubgroup {}

impl AbelianSubgroup {
    /// Subgroup generated by `gens`; every generator must lie in `G_f`.
    pub fn generated(
        f: &InvertiblePolynomial,
        gens: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        for g in &gens {
            g.check_member(f)?;
        }
        let elements = closure(f.n(), &gens);
        Ok(AbelianSubgroup {
            ambient: f.clone(),
            gens,
            elements,
        })
    }

    /// Subgroup whose element set is `elements` (assumed closed), with a
    /// greedily reduced generating set.
    fn from_closed_set(f: &InvertiblePolynomial, elements: Vec<GroupElement>) -> Self {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut span: BTreeSet<GroupElement> = BTreeSet::from([GroupElement::identity(f.n())]);
        // Larger orders first keeps the generating set short.
        let mut candidates = elements.clone();
        candidates.sort_by_key(|g| std::cmp::Reverse(g.order()));
        for g in candidates {
            if !span.contains(&g) {
                gens.push(g);
                span = closure(f.n(), &gens).into_iter().collect();
            }
        }
        let mut elements = elements;
        elements.sort();
        debug_assert_eq!(elements.len(), span.len());
        AbelianSubgroup {
            ambient: f.clone(),
            gens,
            elements,
        }
    }

    pub fn trivial(f: &InvertiblePolynomial) -> Self {
        AbelianSubgroup {
            ambient: f.clone(),
            gens: Vec::new(),
            elements: vec![GroupElement::identity(f.n())],
        }
    }

    /// `G_f`, generated by the columns of `E^{-1}`.
    pub fn maximal(f: &InvertiblePolynomial) -> Self {
        let inv = f.inverse_matrix();
        let gens: Vec<GroupElement> = (0..f.n())
            .map(|j| GroupElement::new(inv.column(j)))
            .filter(|g| !g.is_identity())
            .collect();
        let elements = closure(f.n(), &gens);
        AbelianSubgroup {
            ambient: f.clone(),
            gens,
            elements,
        }
    }

    /// `G_0`, generated by the exponential grading operator.
    pub fn grading(f: &InvertiblePolynomial) -> Self {
        Self::generated(f, vec![grading_operator(f)]).expect("g0 lies in G_f")
    }

    /// `G_f` intersected with `SL(n)`.
    pub fn special(f: &InvertiblePolynomial) -> Self {
        let els = Self::maximal(f)
            .elements
            .into_iter()
            .filter(|g| g.is_in_sl())
            .collect();
        Self::from_closed_set(f, els)
    }

    pub fn ambient(&self) -> &InvertiblePolynomial {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &AbelianSubgroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_in_sl(&self) -> bool {
        self.gens.iter().all(GroupElement::is_in_sl)
    }

    pub fn contains_grading(&self) -> bool {
        self.contains(&grading_operator(&self.ambient))
    }

    /// Berglund-Henningson dual: the annihilator of `self` in `G_{f^T}` under [`pairing`].
    pub fn dual(&self) -> AbelianSubgroup {
        let f = &self.ambient;
        let ft = f.transpose();
        let els = AbelianSubgroup::maximal(&ft)
            .elements
            .into_iter()
            .filter(|h| {
                self.gens
                    .iter()
                    .all(|g| pairing_unchecked(f, g, h).is_zero())
            })
            .collect();
        AbelianSubgroup::from_closed_set(&ft, els)
    }

    /// Every subgroup of `G_f`, deduplicated by element set, ordered by size then elements.
    pub fn all_subgroups(f: &InvertiblePolynomial) -> Vec<AbelianSubgroup> {
        let gf = Self::maximal(f);
        let mut found: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
        let mut frontier = vec![vec![GroupElement::identity(f.n())]];
        found.insert(frontier[0].clone());
        while let Some(h) = frontier.pop() {
            for g in gf.elements() {
                if h.binary_search(g).is_ok() {
                    continue;
                }
                let cl = closure(f.n(), &reduce_gens(f.n(), &h, g));
                if found.insert(cl.clone()) {
                    frontier.push(cl);
                }
            }
        }
        let mut subs: Vec<AbelianSubgroup> = found
            .into_iter()
            .map(|els| Self::from_closed_set(f, els))
            .collect();
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        subs
    }
}

/// Generators of `<h, g>` where `h` is a closed element set: a reduced generating set of `h` plus `g`.
fn reduce_gens(n: usize, h: &[GroupElement], g: &GroupElement) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut span: BTreeSet<GroupElement> = BTreeSet::from([GroupElement::identity(n)]);
    for x in h {
        if !span.contains(x) {
            gens.push(x.clone());
            span = closure(n, &gens).into_iter().collect();
        }
    }
    gens.push(g.clone());
    gens
}

/// The exponential grading operator `g_0 = (e[q_1], ..., e[q_n])`.
pub fn grading_operator(f: &InvertiblePolynomial) -> GroupElement {
    GroupElement::new(f.q().to_vec())
}

fn pairing_unchecked(f: &InvertiblePolynomial, g: &GroupElement, h: &GroupElement) -> Q {
    let eg = f.exponent_matrix().mul_vec(g.comps());
    frac(
        h.comps()
            .iter()
            .zip(&eg)
            .fold(Q::zero(), |acc, (&a, &b)| acc + a * b),
    )
}

/// Bilinear pairing `G_f x G_{f^T} -> Q/Z`, `(g, h) -> h^T E g mod 1`.
pub fn pairing(
    f: &InvertiblePolynomial,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<Q, GroupError> {
    g.check_member(f)?;
    h.check_member(&f.transpose())?;
    Ok(pairing_unchecked(f, g, h))
}

/// Resolves a group spec: `trivial`, `Gf`, `G0`, `SL`, or comma-separated `1/r(...)` generators.
pub fn parse_group_spec(
    f: &InvertiblePolynomial,
    spec: &str,
) -> Result<AbelianSubgroup, GroupError> {
    match spec.trim() {
        "trivial" | "1" | "" => return Ok(AbelianSubgroup::trivial(f)),
        "Gf" => return Ok(AbelianSubgroup::maximal(f)),
        "G0" => return Ok(AbelianSubgroup::grading(f)),
        "SL" => return Ok(AbelianSubgroup::special(f)),
        _ => {}
    }
    let mut gens = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in spec.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                gens.push(cur.parse::<GroupElement>()?);
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if depth != 0 {
        return Err(GroupError::UnknownSpec(spec.to_string()));
    }
    gens.push(cur.parse::<GroupElement>().map_err(|e| {
        if cur.trim().starts_with("1/") {
            e
        } else {
            GroupError::UnknownSpec(spec.trim().to_string())
        }
    })?);
    AbelianSubgroup::generated(f, gens)
}

/// Spec string for a subgroup: `trivial` or its generators.
pub fn format_group_spec(g: &AbelianSubgroup) -> String {
    if g.generators().is_empty() {
        "trivial".into()
    } else {
        g.generators()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(s: &str) -> InvertiblePolynomial {
        s.parse().unwrap()
    }

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn maximal_group_orders() {
        let f = p("x^4 + y^4");
        let gf = AbelianSubgroup::maximal(&f);
        assert_eq!(gf.order(), 16);
        let c = p("x^3*y + y^2");
        let gc = AbelianSubgroup::maximal(&c);
        assert_eq!(gc.order(), 6);
        assert!(gc.contains(&el("1/6(5,3)")));
        assert_eq!(
            AbelianSubgroup::generated(&c, vec![el("1/6(5,3)")]).unwrap(),
            gc
        );
        let l = p("x^2*y + y^2*x");
        let gl = AbelianSubgroup::maximal(&l);
        assert_eq!(gl.order(), 3);
        assert!(gl.contains(&el("1/3(1,1)")));
    }

    #[test]
    fn subgroup_closure_and_membership() {
        let f = p("x^4 + y^4");
        let g = AbelianSubgroup::generated(&f, vec![el("1/4(1,1)")]).unwrap();
        let expected: Vec<GroupElement> = ["1/1(0,0)", "1/4(1,1)", "1/2(1,1)", "1/4(3,3)"]
            .iter()
            .map(|s| el(s))
            .collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(g.elements(), expected.as_slice());
        assert_eq!(AbelianSubgroup::generated(&f, vec![]).unwrap().order(), 1);
        let err = AbelianSubgroup::generated(&f, vec![el("1/3(1,0)")]).unwrap_err();
        assert!(matches!(err, GroupError::NotInGroup { row: 1, .. }));
    }

    #[test]
    fn age_fixed_sl() {
        assert_eq!(el("1/4(1,3)").age(), Q::one());
        assert_eq!(el("1/1(0,0)").age(), Q::zero());
        assert_eq!(el("1/6(1,3)").age(), Q::new(2, 3));
        assert_eq!(el("1/3(1,0)").fixed_indices(), vec![1]);
        assert_eq!(el("1/1(0,0)").n_fixed(), 2);
        assert_eq!(el("1/4(1,1)").n_fixed(), 0);
        assert!(el("1/4(1,3)").is_in_sl());
        assert!(!el("1/4(1,1)").is_in_sl());
        assert!(el("1/1(0,0)").is_in_sl());
    }

    #[test]
    fn grading_operators() {
        assert_eq!(grading_operator(&p("x^3*y + y^2")), el("1/6(1,3)"));
        assert_eq!(grading_operator(&p("x^3")), el("1/3(1)"));
        assert_eq!(grading_operator(&p("x^4 + y^4")), el("1/4(1,1)"));
    }

    #[test]
    fn pairing_values() {
        let f = p("x^4 + y^4");
        assert_eq!(
            pairing(&f, &el("1/4(1,1)"), &el("1/4(1,3)")).unwrap(),
            Q::zero()
        );
        assert_eq!(
            pairing(&f, &el("1/1(0,0)"), &el("1/4(1,3)")).unwrap(),
            Q::zero()
        );
        assert_eq!(
            pairing(&f, &el("1/4(1,0)"), &el("1/4(1,0)")).unwrap(),
            Q::new(1, 4)
        );
        assert!(pairing(&f, &el("1/3(1,0)"), &el("1/4(1,0)")).is_err());
    }

    #[test]
    fn dual_groups() {
        let f = p("x^4 + y^4");
        let g = AbelianSubgroup::generated(&f, vec![el("1/4(1,1)")]).unwrap();
        let d = g.dual();
        assert_eq!(
            d,
            AbelianSubgroup::generated(&f, vec![el("1/4(1,3)")]).unwrap()
        );
        assert_eq!(
            AbelianSubgroup::trivial(&f).dual(),
            AbelianSubgroup::maximal(&f)
        );
        assert_eq!(AbelianSubgroup::maximal(&f).dual().order(), 1);
        assert_eq!(d.dual(), g);
    }

    #[test]
    fn grading_dual_is_sl() {
        for s in [
            "x^3*y + y^2",
            "x^2*y + y^3*z + z^2*x",
            "x^4 + y^4",
            "x^2*y + y^2*z + z^3",
        ] {
            let f = p(s);
            assert_eq!(
                AbelianSubgroup::grading(&f).dual(),
                AbelianSubgroup::special(&f.transpose()),
                "{s}"
            );
        }
    }

    #[test]
    fn subgroup_enumeration() {
        assert_eq!(AbelianSubgroup::all_subgroups(&p("x^4 + y^4")).len(), 15);
        assert_eq!(AbelianSubgroup::all_subgroups(&p("x^3*y + y^2")).len(), 4);
        assert_eq!(AbelianSubgroup::all_subgroups(&p("x^5")).len(), 2);
    }

    #[test]
    fn spec_strings() {
        let f = p("x^4 + y^4");
        assert_eq!(parse_group_spec(&f, "Gf").unwrap().order(), 16);
        assert_eq!(parse_group_spec(&f, "G0").unwrap().order(), 4);
        assert_eq!(parse_group_spec(&f, "SL").unwrap().order(), 4);
        assert_eq!(parse_group_spec(&f, "trivial").unwrap().order(), 1);
        assert_eq!(
            parse_group_spec(&f, "1/4(1,1), 1/2(1,0)").unwrap().order(),
            8
        );
        assert!(matches!(
            parse_group_spec(&f, "bogus"),
            Err(GroupError::UnknownSpec(_))
        ));
        assert!(matches!(
            parse_group_spec(&f, "1/4(1,1"),
            Err(GroupError::UnknownSpec(_))
        ));
        assert!(matches!(
            parse_group_spec(&f, "1/4(1)"),
            Err(GroupError::Length { .. })
        ));
    }

    #[test]
    fn element_text_round_trip() {
        for s in ["1/4(1,3)", "1/1(0,0)", "1/6(5,3)", "1/3(1)"] {
            assert_eq!(el(s).to_string(), s);
        }
        assert_eq!(el("1/4(5,2)").to_string(), "1/4(1,2)");
        assert!("2/4(1,1)".parse::<GroupElement>().is_err());
    }
}
