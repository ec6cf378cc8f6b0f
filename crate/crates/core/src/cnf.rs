//! 3-SAT instances, Boolean evaluation and DIMACS CNF I/O.
//!
//! Variables are 0-based internally and 1-based in DIMACS text. Every clause
//! holds exactly three literals over three distinct variables.

use std::fmt;
use std::io::Read;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: missing or malformed `p cnf <vars> <clauses>` header")]
    MalformedHeader { line: usize },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("line {line}: clause has {found} literals, only 3-SAT is supported")]
    ClauseArity { line: usize, found: usize },
    #[error("line {line}: clause repeats variable {var}")]
    DuplicateVariable { line: usize, var: usize },
    #[error("header declares {expected} clauses but {found} were read")]
    ClauseCount { expected: usize, found: usize },
    #[error("instance must have at least one variable")]
    NoVariables,
    #[error("variable {var} out of range for {num_vars} variables")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("clause repeats variable {var}")]
    RepeatedVariable { var: usize },
    #[error("assignment has {found} values, instance has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("i/o error: {0}")]
    Io(String),
}

/// A polarized occurrence of a variable: `q = +1` for `x`, `q = -1` for `!x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub fn pos(var: usize) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: usize) -> Self {
        Literal::new(var, false)
    }

    /// Polarity as `+1` / `-1`.
    #[inline]
    pub fn sign(self) -> i8 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    /// True when `value` satisfies this literal.
    #[inline]
    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }

    pub fn negated(self) -> Self {
        Literal::new(self.var, !self.positive)
    }

    /// Signed 1-based DIMACS encoding.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    /// Builds a clause; the three variables must be pairwise distinct.
    pub fn new(literals: [Literal; 3]) -> Result<Self, CnfError> {
        let [a, b, c] = literals;
        if a.var == b.var || a.var == c.var {
            return Err(CnfError::RepeatedVariable { var: a.var });
        }
        if b.var == c.var {
            return Err(CnfError::RepeatedVariable { var: b.var });
        }
        Ok(Clause { literals })
    }

    #[inline]
    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    /// Slot (0..3) holding `var`, if the variable occurs in this clause.
    pub fn slot_of(&self, var: usize) -> Option<usize> {
        self.literals.iter().position(|l| l.var == var)
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.literals
            .iter()
            .any(|l| l.satisfied_by(assignment[l.var]))
    }
}

/// One entry of the variable-to-clause occurrence index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub clause: u32,
    pub slot: u8,
}

/// An immutable 3-SAT formula with its occurrence index.
///
/// Occurrence lists are ordered by ascending clause index; derivative
/// accumulation relies on that order for bit-reproducibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_vars: usize,
    clauses: Vec<Clause>,
    occ_offsets: Vec<usize>,
    occurrences: Vec<Occurrence>,
}

impl Instance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        for clause in &clauses {
            for lit in clause.literals() {
                if lit.var >= num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        var: lit.var,
                        num_vars,
                    });
                }
            }
        }

        // counting sort into CSR layout keeps each list in clause order
        let mut counts = vec![0usize; num_vars + 1];
        for clause in &clauses {
            for lit in clause.literals() {
                counts[lit.var + 1] += 1;
            }
        }
        for i in 0..num_vars {
            counts[i + 1] += counts[i];
        }
        let occ_offsets = counts.clone();
        let mut cursor = counts;
        let mut occurrences = vec![
            Occurrence { clause: 0, slot: 0 };
            clauses.len() * 3
        ];
        for (m, clause) in clauses.iter().enumerate() {
            for (slot, lit) in clause.literals().iter().enumerate() {
                occurrences[cursor[lit.var]] = Occurrence {
                    clause: m as u32,
                    slot: slot as u8,
                };
                cursor[lit.var] += 1;
            }
        }

        Ok(Instance {
            num_vars,
            clauses,
            occ_offsets,
            occurrences,
        })
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn clause(&self, m: usize) -> &Clause {
        &self.clauses[m]
    }

    /// Clauses containing `var`, ascending by clause index.
    #[inline]
    pub fn occurrences(&self, var: usize) -> &[Occurrence] {
        &self.occurrences[self.occ_offsets[var]..self.occ_offsets[var + 1]]
    }

    pub fn total_occurrences(&self) -> usize {
        self.occurrences.len()
    }

    /// Clause/variable ratio M/N.
    pub fn ratio(&self) -> f64 {
        self.clauses.len() as f64 / self.num_vars as f64
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, CnfError> {
        self.check_assignment(assignment)?;
        Ok(self.clauses.iter().all(|c| c.is_satisfied(assignment)))
    }

    pub fn count_unsatisfied(&self, assignment: &[bool]) -> Result<usize, CnfError> {
        self.check_assignment(assignment)?;
        Ok(self
            .clauses
            .iter()
            .filter(|c| !c.is_satisfied(assignment))
            .count())
    }

    fn check_assignment(&self, assignment: &[bool]) -> Result<(), CnfError> {
        if assignment.len() != self.num_vars {
            return Err(CnfError::AssignmentLength {
                expected: self.num_vars,
                found: assignment.len(),
            });
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical DIMACS text.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_dimacs().as_bytes());
        hex::encode(hasher.finalize())
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            let [a, b, c] = clause.literals();
            out.push_str(&format!("{a} {b} {c} 0\n"));
        }
        out
    }
}

/// Evaluates `assignment` against every clause.
pub fn evaluate(instance: &Instance, assignment: &[bool]) -> Result<bool, CnfError> {
    instance.evaluate(assignment)
}

pub fn serialize_dimacs(instance: &Instance) -> Vec<u8> {
    instance.to_dimacs().into_bytes()
}

pub fn read_dimacs<R: Read>(mut reader: R) -> Result<Instance, CnfError> {
    let mut buf = Vec::new();
    reader
        .read_to_end(&mut buf)
        .map_err(|e| CnfError::Io(e.to_string()))?;
    parse_dimacs(&buf)
}

/// Parses DIMACS CNF restricted to 3-literal clauses.
///
/// Clauses may span lines. A line starting with `%` ends the clause section
/// (SATLIB convention).
pub fn parse_dimacs(input: &[u8]) -> Result<Instance, CnfError> {
    let text = std::str::from_utf8(input).map_err(|_| CnfError::Utf8)?;

    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::with_capacity(3);
    let mut pending_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::DuplicateHeader { line });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let (num_vars, _) = header.ok_or(CnfError::MissingHeader { line })?;

        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| CnfError::InvalidToken {
                line,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push(finish_clause(&pending, pending_line)?);
                pending.clear();
                continue;
            }
            if lit.unsigned_abs() as usize > num_vars {
                return Err(CnfError::LiteralOutOfRange {
                    line,
                    literal: lit,
                    num_vars,
                });
            }
            if pending.is_empty() {
                pending_line = line;
            }
            pending.push(Literal::new(lit.unsigned_abs() as usize - 1, lit > 0));
        }
    }

    let (num_vars, num_clauses) = header.ok_or(CnfError::MalformedHeader { line: last_line.max(1) })?;
    if !pending.is_empty() {
        // unterminated final clause is accepted, as most DIMACS readers do
        clauses.push(finish_clause(&pending, pending_line)?);
    }
    if clauses.len() != num_clauses {
        return Err(CnfError::ClauseCount {
            expected: num_clauses,
            found: clauses.len(),
        });
    }
    Instance::new(num_vars, clauses)
}

fn parse_header(line_text: &str, line: usize) -> Result<(usize, usize), CnfError> {
    let fields: Vec<&str> = line_text.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let vars: usize = vars.parse().map_err(|_| CnfError::MalformedHeader { line })?;
            let clauses: usize = clauses
                .parse()
                .map_err(|_| CnfError::MalformedHeader { line })?;
            if vars == 0 {
                return Err(CnfError::MalformedHeader { line });
            }
            Ok((vars, clauses))
        }
        _ => Err(CnfError::MalformedHeader { line }),
    }
}

fn finish_clause(lits: &[Literal], line: usize) -> Result<Clause, CnfError> {
    let lits: [Literal; 3] = lits.try_into().map_err(|_| CnfError::ClauseArity {
        line,
        found: lits.len(),
    })?;
    Clause::new(lits).map_err(|e| match e {
        CnfError::RepeatedVariable { var } => CnfError::DuplicateVariable { line, var },
        other => other,
    })
}
