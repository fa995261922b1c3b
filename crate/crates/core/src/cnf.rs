//! 3-CNF formulas: DIMACS parsing and an exhaustive truth-table model
//! counter used as the end-to-end reduction oracle.

use crate::error::{Error, Result};

pub const SAT_COUNT_VAR_BOUND: usize = 24;

/// A literal: variable index in 1..=n, negated or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn from_dimacs(x: i64) -> Result<Literal> {
        if x == 0 {
            return Err(Error::DimacsParse("literal 0 inside a clause".into()));
        }
        Ok(Literal {
            var: x.unsigned_abs() as usize,
            negated: x < 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// A 3-CNF formula: every clause has exactly three literals (repetition
/// allowed and preserved).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub variable_count: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(variable_count: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for cl in &clauses {
            for lit in cl {
                if lit.var == 0 || lit.var > variable_count {
                    return Err(Error::DimacsParse(format!(
                        "variable {} out of range 1..={}",
                        lit.var, variable_count
                    )));
                }
            }
        }
        Ok(CnfFormula {
            variable_count,
            clauses,
        })
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Occurrences of (var, negated) across all clause slots, in clause-major
    /// order: (clause index, slot index).
    pub fn occurrences(&self, var: usize, negated: bool) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, cl) in self.clauses.iter().enumerate() {
            for (k, lit) in cl.iter().enumerate() {
                if lit.var == var && lit.negated == negated {
                    out.push((j, k));
                }
            }
        }
        out
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter().any(|lit| {
                let v = assignment >> (lit.var - 1) & 1 == 1;
                v != lit.negated
            })
        })
    }
}

/// Exact number of satisfying assignments by exhaustive truth table.
pub fn sat_count(phi: &CnfFormula) -> Result<u64> {
    sat_count_bounded(phi, SAT_COUNT_VAR_BOUND)
}

pub fn sat_count_bounded(phi: &CnfFormula, bound: usize) -> Result<u64> {
    if phi.variable_count > bound {
        return Err(Error::TooManyVariables(phi.variable_count, bound));
    }
    let total = 1u64 << phi.variable_count;
    Ok((0..total).filter(|&a| phi.eval(a)).count() as u64)
}

/// Parses DIMACS CNF: `p cnf n m` header, whitespace-separated signed
/// literals, clauses 0-terminated, `c` comment lines. Clauses must have
/// exactly three literals; padding by repetition is accepted and preserved.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut lits: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::DimacsParse("duplicate header".into()));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::DimacsParse(format!("bad header line {line:?}")));
            }
            let n = parts[1]
                .parse()
                .map_err(|_| Error::DimacsParse(format!("bad variable count {:?}", parts[1])))?;
            let m = parts[2]
                .parse()
                .map_err(|_| Error::DimacsParse(format!("bad clause count {:?}", parts[2])))?;
            header = Some((n, m));
            continue;
        }
        for tok in line.split_whitespace() {
            let x: i64 = tok
                .parse()
                .map_err(|_| Error::DimacsParse(format!("bad token {tok:?}")))?;
            lits.push(x);
        }
    }
    let (n, m) = header.ok_or_else(|| Error::DimacsParse("missing p cnf header".into()))?;
    let mut clauses = Vec::new();
    let mut cur: Vec<Literal> = Vec::new();
    for x in lits {
        if x == 0 {
            match cur.len() {
                3 => clauses.push([cur[0], cur[1], cur[2]]),
                k => {
                    return Err(Error::DimacsParse(format!(
                        "clause {} has {} literals; exactly 3 required",
                        clauses.len() + 1,
                        k
                    )))
                }
            }
            cur.clear();
        } else {
            cur.push(Literal::from_dimacs(x)?);
        }
    }
    if !cur.is_empty() {
        return Err(Error::DimacsParse("unterminated final clause".into()));
    }
    if clauses.len() != m {
        return Err(Error::DimacsParse(format!(
            "header promises {m} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(n, clauses)
}

pub fn to_dimacs(phi: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", phi.variable_count, phi.clause_count());
    for cl in &phi.clauses {
        for lit in cl {
            s.push_str(&lit.to_dimacs().to_string());
            s.push(' ');
        }
        s.push_str("0\n");
    }
    s
}

/// Convenience constructor from DIMACS-style signed literals.
pub fn formula(variable_count: usize, clauses: &[[i64; 3]]) -> CnfFormula {
    let cl = clauses
        .iter()
        .map(|c| {
            [
                Literal::from_dimacs(c[0]).unwrap(),
                Literal::from_dimacs(c[1]).unwrap(),
                Literal::from_dimacs(c[2]).unwrap(),
            ]
        })
        .collect();
    CnfFormula::new(variable_count, cl).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sat_count_examples() {
        assert_eq!(sat_count(&formula(3, &[[1, 2, 3]])).unwrap(), 7);
        assert_eq!(sat_count(&formula(1, &[[1, 1, 1], [-1, -1, -1]])).unwrap(), 0);
        assert_eq!(
            sat_count(&formula(3, &[[1, 2, 3], [-1, -2, -3]])).unwrap(),
            6
        );
        assert_eq!(sat_count(&formula(1, &[[1, -1, 1]])).unwrap(), 2);
    }

    #[test]
    fn dimacs_roundtrip() {
        let text = "c comment\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n";
        let phi = parse_dimacs(text).unwrap();
        assert_eq!(phi.variable_count, 3);
        assert_eq!(phi.clause_count(), 2);
        assert_eq!(phi.clauses[1][2].to_dimacs(), 2);
        let phi2 = parse_dimacs(&to_dimacs(&phi)).unwrap();
        assert_eq!(phi, phi2);
    }

    #[test]
    fn dimacs_rejects_wrong_arity() {
        assert!(parse_dimacs("p cnf 2 1\n1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2 1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 2 2\n").is_err());
        assert!(parse_dimacs("1 2 3 0\n").is_err());
    }

    #[test]
    fn variable_bound() {
        let phi = formula(2, &[[1, 2, 2]]);
        assert!(matches!(
            sat_count_bounded(&phi, 1),
            Err(Error::TooManyVariables(2, 1))
        ));
    }

    #[test]
    fn occurrences_enumeration() {
        let phi = formula(2, &[[1, -1, 1], [2, 1, -2]]);
        assert_eq!(phi.occurrences(1, false), vec![(0, 0), (0, 2), (1, 1)]);
        assert_eq!(phi.occurrences(1, true), vec![(0, 1)]);
        assert_eq!(phi.occurrences(2, true), vec![(1, 2)]);
    }
}
