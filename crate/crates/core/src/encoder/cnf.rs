use std::io::{self, BufRead, Write};

/// Receiver of generated clauses, so large instances can be counted or
/// written without being held in memory.
pub trait ClauseSink {
    fn push(&mut self, clause: &[i32]);
}

impl ClauseSink for Vec<Vec<i32>> {
    fn push(&mut self, clause: &[i32]) {
        Vec::push(self, clause.to_vec());
    }
}

/// Counts clauses and literals.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ClauseCounter {
    pub clauses: usize,
    pub literals: usize,
}

impl ClauseSink for ClauseCounter {
    fn push(&mut self, clause: &[i32]) {
        self.clauses += 1;
        self.literals += clause.len();
    }
}

/// Writes clause lines in DIMACS syntax. The first I/O error is kept and
/// later clauses are dropped.
pub struct DimacsClauseWriter<W: Write> {
    out: W,
    line: String,
    error: Option<io::Error>,
}

impl<W: Write> DimacsClauseWriter<W> {
    pub fn new(out: W) -> Self {
        DimacsClauseWriter {
            out,
            line: String::with_capacity(256),
            error: None,
        }
    }

    pub fn finish(self) -> io::Result<W> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.out),
        }
    }
}

impl<W: Write> ClauseSink for DimacsClauseWriter<W> {
    fn push(&mut self, clause: &[i32]) {
        if self.error.is_some() {
            return;
        }
        use std::fmt::Write as _;
        self.line.clear();
        for lit in clause {
            let _ = write!(self.line, "{lit} ");
        }
        self.line.push_str("0\n");
        if let Err(e) = self.out.write_all(self.line.as_bytes()) {
            self.error = Some(e);
        }
    }
}

/// A CNF formula with metadata comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    literals: Vec<i32>,
    starts: Vec<usize>,
    comments: Vec<String>,
}

impl CnfInstance {
    pub fn new(num_vars: usize) -> Self {
        CnfInstance {
            num_vars,
            ..Default::default()
        }
    }

    pub fn with_comments(num_vars: usize, comments: Vec<String>) -> Self {
        CnfInstance {
            num_vars,
            comments,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.starts.len()
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn add_comment(&mut self, comment: impl Into<String>) {
        self.comments.push(comment.into());
    }

    pub fn clause(&self, i: usize) -> &[i32] {
        let end = self.starts.get(i + 1).copied().unwrap_or(self.literals.len());
        &self.literals[self.starts[i]..end]
    }

    pub fn clauses(&self) -> impl ExactSizeIterator<Item = &[i32]> + '_ {
        (0..self.num_clauses()).map(move |i| self.clause(i))
    }

    /// Whether `assignment` (indexed by variable, slot 0 unused) satisfies
    /// every clause; returns the index of the first falsified clause.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses().position(|c| {
            !c.iter().any(|&l| {
                let v = l.unsigned_abs() as usize;
                v < assignment.len() && assignment[v] == (l > 0)
            })
        })
    }

    /// Writes the formula: comment lines, `p cnf` header, one clause per line.
    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        write_preamble(&mut out, &self.comments, self.num_vars, self.num_clauses())?;
        let mut body = DimacsClauseWriter::new(out);
        for c in self.clauses() {
            body.push(c);
        }
        body.finish()?.flush()
    }

    pub fn to_dimacs_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("DIMACS is ASCII")
    }

    /// Reads a DIMACS formula. Comment lines are kept.
    pub fn read_dimacs<R: BufRead>(input: R) -> io::Result<CnfInstance> {
        let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
        let mut inst = CnfInstance::default();
        let mut declared: Option<(usize, usize)> = None;
        let mut pending: Vec<i32> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('c') {
                inst.comments.push(c.trim_start().to_string());
                continue;
            }
            if line.starts_with('p') {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 4 || f[1] != "cnf" {
                    return Err(bad(format!("line {}: bad header {line:?}", lineno + 1)));
                }
                let v = f[2].parse().map_err(|e| bad(format!("header: {e}")))?;
                let c = f[3].parse().map_err(|e| bad(format!("header: {e}")))?;
                declared = Some((v, c));
                inst.num_vars = v;
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|e| bad(format!("line {}: {tok:?}: {e}", lineno + 1)))?;
                if lit == 0 {
                    inst.push(&pending);
                    pending.clear();
                } else {
                    pending.push(lit);
                }
            }
        }
        if !pending.is_empty() {
            return Err(bad("last clause is not terminated by 0".into()));
        }
        match declared {
            None => Err(bad("missing `p cnf` header".into())),
            Some((_, c)) if c != inst.num_clauses() => Err(bad(format!(
                "header declares {c} clauses, found {}",
                inst.num_clauses()
            ))),
            Some(_) => Ok(inst),
        }
    }
}

impl ClauseSink for CnfInstance {
    fn push(&mut self, clause: &[i32]) {
        self.starts.push(self.literals.len());
        self.literals.extend_from_slice(clause);
    }
}

pub(crate) fn write_preamble<W: Write>(
    out: &mut W,
    comments: &[String],
    num_vars: usize,
    num_clauses: usize,
) -> io::Result<()> {
    for c in comments {
        writeln!(out, "c {c}")?;
    }
    writeln!(out, "p cnf {num_vars} {num_clauses}")
}
