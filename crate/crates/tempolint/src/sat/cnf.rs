//! Propositional clause representation.

use std::fmt;

/// Variable index, 0-based.
pub type Var = usize;

/// A literal packs a variable and a sign: `var << 1 | negated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(usize);

impl Lit {
    pub fn positive(var: Var) -> Lit {
        Lit(var << 1)
    }

    pub fn negative(var: Var) -> Lit {
        Lit((var << 1) | 1)
    }

    pub fn new(var: Var, positive: bool) -> Lit {
        if positive {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negated(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// Index usable for watch lists: distinct per literal.
    pub fn index(self) -> usize {
        self.0
    }

    /// DIMACS form: 1-based, negative when negated.
    pub fn dimacs(self) -> i64 {
        let v = (self.var() + 1) as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimacs())
    }
}

/// A CNF instance.
#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new_var(&mut self) -> Var {
        let v = self.num_vars;
        self.num_vars += 1;
        v
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }

    /// DIMACS text with optional leading comment lines.
    pub fn to_dimacs(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for line in comments {
            out.push_str("c ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Parses DIMACS text (comments allowed anywhere).
    pub fn from_dimacs(text: &str) -> Result<Cnf, String> {
        let mut cnf = Cnf::default();
        let mut declared = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let mut parts = rest.split_whitespace();
                let vars: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or("bad problem line")?;
                let clauses: usize = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or("bad problem line")?;
                cnf.num_vars = vars;
                declared = Some(clauses);
                continue;
            }
            let mut clause = Vec::new();
            for tok in line.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
                if v == 0 {
                    break;
                }
                let var = (v.unsigned_abs() as usize) - 1;
                if var >= cnf.num_vars {
                    return Err(format!("literal {v} out of range"));
                }
                clause.push(Lit::new(var, v > 0));
            }
            cnf.add_clause(clause);
        }
        if let Some(n) = declared {
            if n != cnf.clauses.len() {
                return Err(format!(
                    "declared {n} clauses, found {}",
                    cnf.clauses.len()
                ));
            }
        }
        Ok(cnf)
    }
}
