//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! poly   := term ('+' term)*
//! term   := [int '*']? factor ('*' factor)*
//! factor := var ('^' int)?
//! var    := w | x | y | z | x1 .. x99
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::PolyError;

/// Raw result of parsing: exponent rows in source order over canonically sorted variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedPolynomial {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<u32>>,
    /// Non-fatal diagnostics (discarded coefficients).
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Var(String),
    Caret,
    Star,
    Plus,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let v = s.parse::<u64>().map_err(|_| PolyError::Syntax {
                    pos,
                    msg: format!("integer `{s}` out of range"),
                })?;
                out.push((pos, Tok::Int(v)));
            }
            'w' | 'x' | 'y' | 'z' => {
                i += 1;
                if c == 'x' && i < chars.len() && chars[i].1.is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                    let ok = !digits.starts_with('0')
                        && digits.parse::<u32>().is_ok_and(|k| (1..=99).contains(&k));
                    if !ok {
                        return Err(PolyError::Syntax {
                            pos,
                            msg: format!("invalid indexed variable `x{digits}` (expected x1..x99)"),
                        });
                    }
                    out.push((pos, Tok::Var(format!("x{digits}"))));
                } else {
                    out.push((pos, Tok::Var(c.to_string())));
                }
            }
            other => {
                return Err(PolyError::Syntax {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Canonical variable order: `w < x < y < z < x1 < x2 < ... < x99`.
pub(crate) fn var_order(a: &str, b: &str) -> Ordering {
    fn key(v: &str) -> (u8, u32, char) {
        if v.len() == 1 {
            (0, 0, v.chars().next().unwrap())
        } else {
            (1, v[1..].parse().unwrap_or(u32::MAX), 'x')
        }
    }
    key(a).cmp(&key(b))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(p, _)| p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn term(&mut self, warnings: &mut Vec<String>) -> Result<BTreeMap<String, u32>, PolyError> {
        if let Some(Tok::Int(c)) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            if self.peek() != Some(&Tok::Star) {
                return self.err("expected `*` after coefficient");
            }
            self.pos += 1;
            if c == 0 {
                return Err(PolyError::Syntax {
                    pos: at,
                    msg: "zero coefficient".into(),
                });
            }
            if c != 1 {
                warnings.push(format!("coefficient {c} at offset {at} ignored"));
            }
        }
        let mut mono = BTreeMap::new();
        loop {
            let (name, exp) = self.factor()?;
            *mono.entry(name).or_insert(0u32) += exp;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(mono)
    }

    fn factor(&mut self) -> Result<(String, u32), PolyError> {
        let Some(Tok::Var(name)) = self.peek().cloned() else {
            return self.err("expected a variable");
        };
        self.pos += 1;
        let mut exp = 1u32;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    exp = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                }
                _ => return self.err("expected an integer exponent after `^`"),
            }
        }
        Ok((name, exp))
    }
}

/// Parses polynomial text into exponent rows (source order) and discarded-coefficient warnings.
pub fn parse_monomials(text: &str) -> Result<ParsedPolynomial, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let mut warnings = Vec::new();
    let mut monos = vec![p.term(&mut warnings)?];
    while p.peek().is_some() {
        if p.peek() != Some(&Tok::Plus) {
            return p.err("expected `+` or end of input");
        }
        p.pos += 1;
        monos.push(p.term(&mut warnings)?);
    }

    let mut vars: Vec<String> = monos.iter().flat_map(|m| m.keys().cloned()).collect();
    vars.sort_by(|a, b| var_order(a, b));
    vars.dedup();

    let rows: Vec<Vec<u32>> = monos
        .iter()
        .map(|m| {
            vars.iter()
                .map(|v| m.get(v).copied().unwrap_or(0))
                .collect()
        })
        .collect();

    for (i, r) in rows.iter().enumerate() {
        if rows[..i].contains(r) {
            return Err(PolyError::RepeatedMonomial(super::format_monomial(
                &vars, r,
            )));
        }
    }
    if rows.len() != vars.len() {
        return Err(PolyError::CountMismatch {
            monomials: rows.len(),
            variables: vars.len(),
        });
    }
    for (j, v) in vars.iter().enumerate() {
        if rows.iter().all(|r| r[j] == 0) {
            return Err(PolyError::UnusedVariable(v.clone()));
        }
    }
    Ok(ParsedPolynomial {
        vars,
        rows,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_exponents() {
        let p = parse_monomials("x^3*y + y^2").unwrap();
        assert_eq!(p.vars, vec!["x", "y"]);
        assert_eq!(p.rows, vec![vec![3, 1], vec![0, 2]]);
        let p = parse_monomials("x^2*y + y^2*x").unwrap();
        assert_eq!(p.rows, vec![vec![2, 1], vec![1, 2]]);
    }

    #[test]
    fn rejects_wrong_count() {
        assert_eq!(
            parse_monomials("x^4 + y^4 + x*y"),
            Err(PolyError::CountMismatch {
                monomials: 3,
                variables: 2
            })
        );
    }

    #[test]
    fn coefficients_warn() {
        let p = parse_monomials("3*x^3 + 1*y^2").unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(p.rows, vec![vec![3, 0], vec![0, 2]]);
    }

    #[test]
    fn indexed_variables_sort_numerically() {
        let p = parse_monomials("x10^2 + x2^3 + x1^2").unwrap();
        assert_eq!(p.vars, vec!["x1", "x2", "x10"]);
        assert_eq!(p.rows[0], vec![0, 0, 2]);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_monomials("x^3 + + y^2") {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_monomials("x^ + y"),
            Err(PolyError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_monomials("a^2"),
            Err(PolyError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_monomials("x100^2"),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_monomials("2 x^2"),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_monomials(""), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn repeated_support() {
        assert!(matches!(
            parse_monomials("x^2*y + x^2*y"),
            Err(PolyError::RepeatedMonomial(_))
        ));
    }

    #[test]
    fn unused_variable() {
        assert_eq!(
            parse_monomials("x^2 + y^0"),
            Err(PolyError::UnusedVariable("y".into()))
        );
    }
}
