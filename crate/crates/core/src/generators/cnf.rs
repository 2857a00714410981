use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    ThreeSat,
    MonotoneOneInThree,
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "3sat" | "three-sat" => Ok(Flavor::ThreeSat),
            "1in3" | "monotone-one-in-three" => Ok(Flavor::MonotoneOneInThree),
            _ => Err(format!("unknown flavor {s:?} (3sat, 1in3)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("clause {clause} has {len} literals, expected 3")]
    ClauseWidth { clause: usize, len: usize },
    #[error("clause {clause}: literal {lit} out of range for {n_vars} variables")]
    LiteralRange { clause: usize, lit: i32, n_vars: usize },
    #[error("clause {clause}: negated literal {lit} in a monotone formula")]
    Negated { clause: usize, lit: i32 },
}

/// Clauses of exactly three literals; literal `+v` / `-v` refers to variable
/// `v` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    n_vars: usize,
    clauses: Vec<[i32; 3]>,
    flavor: Flavor,
}

impl CnfFormula {
    pub fn new(n_vars: usize, clauses: Vec<[i32; 3]>, flavor: Flavor) -> Result<Self, CnfError> {
        for (c, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > n_vars {
                    return Err(CnfError::LiteralRange { clause: c, lit, n_vars });
                }
                if flavor == Flavor::MonotoneOneInThree && lit < 0 {
                    return Err(CnfError::Negated { clause: c, lit });
                }
            }
        }
        Ok(CnfFormula { n_vars, clauses, flavor })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    fn lit_value(lit: i32, assignment: &[bool]) -> bool {
        assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    /// Ordinary satisfaction: some literal true in every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| Self::lit_value(l, assignment)))
    }

    /// Exactly one true literal (counted with multiplicity) per clause.
    pub fn one_in_three_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().filter(|&&l| Self::lit_value(l, assignment)).count() == 1)
    }

    /// Satisfaction in the formula's own sense.
    pub fn accepts(&self, assignment: &[bool]) -> bool {
        match self.flavor {
            Flavor::ThreeSat => self.satisfied_by(assignment),
            Flavor::MonotoneOneInThree => self.one_in_three_by(assignment),
        }
    }

    /// First accepting assignment in binary counting order (variable 1 is the
    /// lowest bit).
    pub fn find_assignment(&self) -> Option<Vec<bool>> {
        assert!(self.n_vars < 26, "exhaustive search is limited to 25 variables");
        (0u32..1 << self.n_vars)
            .map(|mask| (0..self.n_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.accepts(a))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.find_assignment().is_some()
    }

    pub fn parse_dimacs(text: &str, flavor: Flavor) -> Result<Self, CnfError> {
        let mut header: Option<(usize, usize)> = None;
        let mut lits: Vec<i32> = Vec::new();
        let mut clauses = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if t.starts_with('p') {
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(CnfError::Dimacs { line: line_no, msg: "expected `p cnf <vars> <clauses>`".into() });
                }
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|e| CnfError::Dimacs { line: line_no, msg: format!("bad count {s:?}: {e}") })
                };
                header = Some((parse(parts[2])?, parse(parts[3])?));
                continue;
            }
            if header.is_none() {
                return Err(CnfError::Dimacs { line: line_no, msg: "clause before header".into() });
            }
            for tok in t.split_whitespace() {
                let v: i32 = tok
                    .parse()
                    .map_err(|e| CnfError::Dimacs { line: line_no, msg: format!("bad literal {tok:?}: {e}") })?;
                if v == 0 {
                    let len = lits.len();
                    let clause: [i32; 3] = std::mem::take(&mut lits)
                        .try_into()
                        .map_err(|_| CnfError::ClauseWidth { clause: clauses.len(), len })?;
                    clauses.push(clause);
                } else {
                    lits.push(v);
                }
            }
        }
        let (n_vars, n_clauses) = header.ok_or(CnfError::Dimacs { line: 0, msg: "missing header".into() })?;
        if !lits.is_empty() {
            return Err(CnfError::Dimacs { line: text.lines().count(), msg: "unterminated clause".into() });
        }
        if clauses.len() != n_clauses {
            return Err(CnfError::Dimacs {
                line: text.lines().count(),
                msg: format!("header declares {n_clauses} clauses, found {}", clauses.len()),
            });
        }
        CnfFormula::new(n_vars, clauses, flavor)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(out, "{} {} {} 0", c[0], c[1], c[2]);
        }
        out
    }

    /// Uniform random clauses over `n_vars` variables; literals may repeat.
    pub fn random<R: Rng>(n_vars: usize, n_clauses: usize, flavor: Flavor, rng: &mut R) -> Self {
        let clauses = (0..n_clauses)
            .map(|_| {
                [0; 3].map(|_| {
                    let v = rng.gen_range(1..=n_vars as i32);
                    if flavor == Flavor::ThreeSat && rng.gen_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
            })
            .collect();
        CnfFormula::new(n_vars, clauses, flavor).expect("in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let text = "c sample\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n";
        let f = CnfFormula::parse_dimacs(text, Flavor::ThreeSat).unwrap();
        assert_eq!(f.clauses(), &[[1, -2, 3], [-1, 2, 2]]);
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs(), Flavor::ThreeSat).unwrap(), f);
    }

    #[test]
    fn dimacs_errors() {
        assert!(matches!(
            CnfFormula::parse_dimacs("p cnf 2 1\n1 2 0\n", Flavor::ThreeSat),
            Err(CnfError::ClauseWidth { len: 2, .. })
        ));
        assert!(matches!(
            CnfFormula::parse_dimacs("p cnf 2 1\n1 -2 2 0\n", Flavor::MonotoneOneInThree),
            Err(CnfError::Negated { lit: -2, .. })
        ));
        assert!(matches!(
            CnfFormula::parse_dimacs("1 2 3 0\n", Flavor::ThreeSat),
            Err(CnfError::Dimacs { line: 1, .. })
        ));
    }

    #[test]
    fn one_in_three_counts_repeats() {
        let f = CnfFormula::new(2, vec![[1, 1, 2]], Flavor::MonotoneOneInThree).unwrap();
        assert!(!f.accepts(&[true, false]));
        assert!(f.accepts(&[false, true]));
        let g = CnfFormula::new(1, vec![[1, 1, 1]], Flavor::MonotoneOneInThree).unwrap();
        assert!(!g.is_satisfiable());
    }

    #[test]
    fn three_sat_search() {
        let f = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]], Flavor::ThreeSat).unwrap();
        assert!(!f.is_satisfiable());
        let g = CnfFormula::new(2, vec![[1, 2, 2], [-1, -1, 2]], Flavor::ThreeSat).unwrap();
        assert_eq!(g.find_assignment(), Some(vec![false, true]));
    }
}
